#include "sra/snr_model.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace sra {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

Eigen::MatrixXcd complex_gaussian(int rows, int cols, double variance, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
  Eigen::MatrixXcd out(rows, cols);
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      out(r, c) = {re, im};
    }
  }
  return out;
}

}  // namespace

void ChannelConfig::validate() const {
  require(n_subchannels > 0, "channel.n_subchannels must be positive");
  require(n_users > 0, "channel.n_users must be positive");
  require(tap_count > 0, "channel.tap_count must be positive");
  require(tap_count < n_subchannels, "channel.tap_count must be smaller than n_subchannels");
  require(!tap_variance || (std::isfinite(*tap_variance) && *tap_variance > 0.0),
          "channel.tap_variance must be positive");
  require(std::isfinite(snr_db), "channel.snr_db must be finite");
  require(std::isfinite(pilot_snr_db), "channel.pilot_snr_db must be finite");
}

double ChannelConfig::total_power() const { return n_subchannels * db_to_linear(snr_db); }

double ChannelConfig::pilot_power() const { return db_to_linear(pilot_snr_db); }

Eigen::MatrixXcd dft_columns(int n, int taps) {
  Eigen::MatrixXcd f(n, taps);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < taps; ++c) {
      // Reduce the phase index first so large n*l products stay exact.
      const int idx = static_cast<int>((static_cast<long long>(r) * c) % n);
      const double phase = -2.0 * std::numbers::pi * idx / n;
      f(r, c) = std::polar(1.0, phase);
    }
  }
  return f;
}

ChannelRealization draw_channel(const ChannelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  ChannelRealization out;
  out.taps = complex_gaussian(cfg.tap_count, cfg.n_users, cfg.tap_var(), seed);
  out.freq_gains = dft_columns(cfg.n_subchannels, cfg.tap_count) * out.taps;
  out.true_snr = out.freq_gains.cwiseAbs2();
  return out;
}

Eigen::MatrixXcd draw_pilot_observation(const ChannelConfig& cfg,
                                        const ChannelRealization& realization,
                                        std::uint64_t seed) {
  cfg.validate();
  const Eigen::MatrixXcd noise = complex_gaussian(cfg.n_subchannels, cfg.n_users, 1.0, seed);
  return std::sqrt(cfg.pilot_power()) * realization.freq_gains + noise;
}

namespace {

struct MmseGain {
  Eigen::MatrixXcd gain;        // R_hy R_yy^{-1}
  Eigen::MatrixXcd covariance;  // R_hh - R_hy R_yy^{-1} R_yh
};

MmseGain mmse_gain(const ChannelConfig& cfg) {
  cfg.validate();
  const int n = cfg.n_subchannels;
  const Eigen::MatrixXcd f = dft_columns(n, cfg.tap_count);
  const Eigen::MatrixXcd ffh = f * f.adjoint();
  const double var = cfg.tap_var();
  const double p = cfg.pilot_power();

  const Eigen::MatrixXcd r_hh = var * ffh;
  const Eigen::MatrixXcd r_hy = std::sqrt(p) * var * ffh;
  const Eigen::MatrixXcd r_yy = p * var * ffh + Eigen::MatrixXcd::Identity(n, n);

  // R_yy and R_hy are Hermitian, so gain^H = R_yy^{-1} R_hy.
  const Eigen::LDLT<Eigen::MatrixXcd> ldlt(r_yy);
  const Eigen::MatrixXcd gain_h = ldlt.solve(r_hy);
  const double residual = (r_yy * gain_h - r_hy).norm() / std::max(r_hy.norm(), 1e-300);
  if (ldlt.info() != Eigen::Success || !(residual <= 1e-8)) {
    throw std::runtime_error("mmse_estimate: linear solve residual " + std::to_string(residual) +
                             " exceeds 1e-8");
  }
  MmseGain out;
  out.gain = gain_h.adjoint();
  out.covariance = r_hh - out.gain * r_hy.adjoint();
  return out;
}

}  // namespace

Eigen::MatrixXcd posterior_covariance(const ChannelConfig& cfg) { return mmse_gain(cfg).covariance; }

EstimateState mmse_from_observation(const ChannelConfig& cfg, const Eigen::MatrixXcd& pilots) {
  const MmseGain g = mmse_gain(cfg);
  require(pilots.rows() == cfg.n_subchannels && pilots.cols() == cfg.n_users,
          "mmse_estimate: pilot observation has wrong shape");
  EstimateState out;
  out.mean = g.gain * pilots;
  out.est_error_var = std::max(0.0, g.covariance(0, 0).real());
  return out;
}

EstimateState mmse_estimate(const ChannelConfig& cfg, const ChannelRealization& realization,
                            std::uint64_t seed) {
  return mmse_from_observation(cfg, draw_pilot_observation(cfg, realization, seed));
}

// ---------------------------------------------------------------------------

SnrDistribution::SnrDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  require(!atoms_.empty(), "SnrDistribution: at least one atom required");
  double total = 0.0;
  for (const Atom& a : atoms_) {
    require(std::isfinite(a.value) && a.value >= 0.0, "SnrDistribution: atom values must be >= 0");
    require(std::isfinite(a.weight) && a.weight > 0.0, "SnrDistribution: atom weights must be > 0");
    total += a.weight;
  }
  require(std::abs(total - 1.0) <= 1e-12, "SnrDistribution: weights must sum to 1");
}

SnrDistribution SnrDistribution::point_mass(double value) {
  return SnrDistribution(std::vector<Atom>{{value, 1.0}});
}

double SnrDistribution::mean() const {
  return expect([](double g) { return g; });
}

double SnrDistribution::second_moment() const {
  return expect([](double g) { return g * g; });
}

namespace {

// Partial moments of X = 2|Z|^2 / error_var, a (non-central) chi-squared
// variable with two degrees of freedom.
template <class Dist>
std::vector<Atom> quantile_atoms(const Dist& dist, double scale, double mean, double second,
                                 int n_atoms) {
  using boost::math::quadrature::gauss_kronrod;
  const int bins = n_atoms - 1;
  const double w = 1.0 / bins;

  std::vector<double> edges(bins + 1, 0.0);
  for (int i = 1; i < bins; ++i) edges[i] = boost::math::quantile(dist, static_cast<double>(i) / bins);

  std::vector<Atom> atoms;
  atoms.reserve(n_atoms);
  double first_below = 0.0;
  double second_below = 0.0;
  for (int i = 0; i + 1 < bins; ++i) {
    const auto m1 = [&](double x) { return x * boost::math::pdf(dist, x); };
    const auto m2 = [&](double x) { return x * x * boost::math::pdf(dist, x); };
    const double a1 = gauss_kronrod<double, 21>::integrate(m1, edges[i], edges[i + 1], 15, 1e-12);
    const double a2 = gauss_kronrod<double, 21>::integrate(m2, edges[i], edges[i + 1], 15, 1e-12);
    first_below += a1 * scale;
    second_below += a2 * scale * scale;
    atoms.push_back({a1 * scale * bins, w});
  }

  // Upper bin as a two-point mean/variance match.
  const double tail_mean = (mean - first_below) * bins;
  const double tail_second = (second - second_below) * bins;
  const double spread = std::sqrt(std::max(0.0, tail_second - tail_mean * tail_mean));
  atoms.push_back({std::max(0.0, tail_mean - spread), w / 2.0});
  atoms.push_back({std::max(0.0, tail_mean + spread), w / 2.0});
  return atoms;
}

}  // namespace

SnrDistribution conditional_snr_dist(std::complex<double> mean, double error_var, int n_atoms) {
  require(n_atoms >= 1, "conditional_snr_dist: n_atoms must be >= 1");
  require(std::isfinite(error_var) && error_var >= 0.0,
          "conditional_snr_dist: error variance must be finite and >= 0");
  require(std::isfinite(mean.real()) && std::isfinite(mean.imag()),
          "conditional_snr_dist: mean must be finite");

  const double power = std::norm(mean);
  if (error_var == 0.0) return SnrDistribution::point_mass(power);

  const double m1 = power + error_var;
  const double m2 = power * power + 4.0 * power * error_var + 2.0 * error_var * error_var;
  if (n_atoms == 1) return SnrDistribution::point_mass(m1);

  const double scale = error_var / 2.0;
  const double noncentrality = 2.0 * power / error_var;
  std::vector<Atom> atoms;
  if (noncentrality == 0.0) {
    atoms = quantile_atoms(boost::math::chi_squared(2.0), scale, m1, m2, n_atoms);
  } else {
    atoms = quantile_atoms(boost::math::non_central_chi_squared(2.0, noncentrality), scale, m1, m2,
                           n_atoms);
  }
  // Weights are k/bins and k/(2 bins); renormalize away the last-ulp drift.
  double total = 0.0;
  for (const Atom& a : atoms) total += a.weight;
  for (Atom& a : atoms) a.weight /= total;
  return SnrDistribution(std::move(atoms));
}

}  // namespace sra
