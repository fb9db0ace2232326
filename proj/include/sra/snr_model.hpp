#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace sra {

// ---------------------------------------------------------------------------
// Channel configuration and realizations
// ---------------------------------------------------------------------------

struct ChannelConfig {
  int n_subchannels = 64;
  int n_users = 16;
  int tap_count = 2;
  /// Per-tap variance. Unset means 1/tap_count, which gives unit mean SNR.
  std::optional<double> tap_variance;
  double snr_db = 10.0;
  double pilot_snr_db = -10.0;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  double tap_var() const { return tap_variance.value_or(1.0 / tap_count); }
  /// Average SNR per subchannel is P_con / N for unit mean SNR, so P_con = N * SNR.
  double total_power() const;
  double pilot_power() const;
};

struct ChannelRealization {
  Eigen::MatrixXcd taps;        // L x K
  Eigen::MatrixXcd freq_gains;  // N x K, h_k = F g_k
  Eigen::MatrixXd true_snr;     // N x K, |h|^2
};

struct EstimateState {
  Eigen::MatrixXcd mean;  // N x K posterior mean of h
  double est_error_var = 0.0;
};

/// First `taps` columns of the (unnormalized) N-point DFT matrix.
Eigen::MatrixXcd dft_columns(int n, int taps);

ChannelRealization draw_channel(const ChannelConfig& cfg, std::uint64_t seed);

/// Pilot observations y_k = sqrt(p_pilot) h_k + v_k with unit-variance noise.
Eigen::MatrixXcd draw_pilot_observation(const ChannelConfig& cfg,
                                        const ChannelRealization& realization,
                                        std::uint64_t seed);

/// Conditional-Gaussian estimate from given pilot observations.
EstimateState mmse_from_observation(const ChannelConfig& cfg, const Eigen::MatrixXcd& pilots);

EstimateState mmse_estimate(const ChannelConfig& cfg, const ChannelRealization& realization,
                            std::uint64_t seed);

/// cov(h_k | y_k); identical for every user.
Eigen::MatrixXcd posterior_covariance(const ChannelConfig& cfg);

// ---------------------------------------------------------------------------
// SNR distributions
// ---------------------------------------------------------------------------

struct Atom {
  double value;
  double weight;
};

/// Distribution of one subchannel SNR as a finite set of weighted atoms.
/// Every expectation in the solver is an exact weighted sum over these.
class SnrDistribution {
 public:
  SnrDistribution() : SnrDistribution(point_mass(0.0)) {}
  explicit SnrDistribution(std::vector<Atom> atoms);

  static SnrDistribution point_mass(double value);

  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  template <class F>
  double expect(F&& f) const {
    double s = 0.0;
    for (const Atom& a : atoms_) s += a.weight * f(a.value);
    return s;
  }

  double mean() const;
  double second_moment() const;
  bool is_point_mass() const { return atoms_.size() == 1; }

 private:
  std::vector<Atom> atoms_;
};

inline constexpr int kDefaultAtoms = 64;

/// Discretization of |Z|^2, Z ~ CN(mean, error_var).
///
/// The SNR range is cut into n_atoms - 1 equal-probability bins. Each bin but
/// the last contributes one atom at its conditional mean (obtained by adaptive
/// Gauss-Kronrod integration of the density). The unbounded upper bin is
/// replaced by two equally weighted atoms that reproduce its conditional mean
/// and variance, which keeps the second moment within 0.1% at 64 atoms.
SnrDistribution conditional_snr_dist(std::complex<double> mean, double error_var,
                                     int n_atoms = kDefaultAtoms);

}  // namespace sra
