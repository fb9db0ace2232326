#include "sra/dual_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sra {

double Tensor3::sum() const { return std::accumulate(data_.begin(), data_.end(), 0.0); }

// ---------------------------------------------------------------------------

ProblemInstance::ProblemInstance(McsTable mcs, UtilitySpec utility, int n_subchannels,
                                 std::vector<SnrDistribution> dists, double p_con)
    : n_(n_subchannels), mcs_(std::move(mcs)), utility_(std::move(utility)),
      dists_(std::move(dists)), p_con_(p_con) {
  if (n_ <= 0) throw std::invalid_argument("ProblemInstance: n_subchannels must be positive");
  if (dists_.size() != static_cast<std::size_t>(n_) * mcs_.users()) {
    throw std::invalid_argument("ProblemInstance: expected N*K distributions, got " +
                                std::to_string(dists_.size()));
  }
  if (!(p_con_ > 0.0) || !std::isfinite(p_con_)) {
    throw std::invalid_argument("ProblemInstance: p_con must be positive and finite");
  }
  utility_.check_compatible(mcs_);
}

double ProblemInstance::expected_utility(int n, int k, int m, double p) const {
  return sra::expected_utility(dist(n, k), p, mcs_(k, m), utility_, k);
}

double ProblemInstance::marginal_value(int n, int k, int m, double p) const {
  return sra::marginal_value(dist(n, k), p, mcs_(k, m), utility_, k);
}

double ProblemInstance::power_root(int n, int k, int m, double mu) const {
  return sra::power_root(dist(n, k), mcs_(k, m), utility_, k, mu);
}

// ---------------------------------------------------------------------------

AllocationState AllocationState::empty(const ProblemInstance& inst) {
  AllocationState out;
  out.indicator = Tensor3(inst.n(), inst.k(), inst.m());
  out.power = Tensor3(inst.n(), inst.k(), inst.m());
  out.discrete = true;
  return out;
}

AllocationState AllocationState::from_assignment(const ProblemInstance& inst,
                                                 const Assignment& assignment,
                                                 const std::vector<double>& powers) {
  if (assignment.size() != static_cast<std::size_t>(inst.n()) || powers.size() != assignment.size()) {
    throw std::invalid_argument("from_assignment: expected one entry per subchannel");
  }
  AllocationState out = empty(inst);
  for (int n = 0; n < inst.n(); ++n) {
    const int c = assignment[n];
    if (c == kUnassigned) continue;
    if (c < 0 || c >= inst.km()) throw std::invalid_argument("from_assignment: combination out of range");
    const int k = c / inst.m();
    const int m = c % inst.m();
    out.indicator(n, k, m) = 1.0;
    out.power(n, k, m) = powers[n];
  }
  return out;
}

Assignment AllocationState::assignment() const {
  Assignment out(indicator.dim_n(), kUnassigned);
  for (int n = 0; n < indicator.dim_n(); ++n) {
    for (int k = 0; k < indicator.dim_k(); ++k) {
      for (int m = 0; m < indicator.dim_m(); ++m) {
        if (indicator(n, k, m) > 0.5) out[n] = k * indicator.dim_m() + m;
      }
    }
  }
  return out;
}

void AllocationState::check_invariants(double tol) const {
  for (int n = 0; n < indicator.dim_n(); ++n) {
    double share = 0.0;
    for (int k = 0; k < indicator.dim_k(); ++k) {
      for (int m = 0; m < indicator.dim_m(); ++m) {
        const double i = indicator(n, k, m);
        const double x = power(n, k, m);
        const std::string at = " at (" + std::to_string(n) + "," + std::to_string(k) + "," +
                               std::to_string(m) + ")";
        if (i < -tol || i > 1.0 + tol) throw std::logic_error("indicator outside [0,1]" + at);
        if (x < -tol) throw std::logic_error("negative power" + at);
        if (i == 0.0 && x != 0.0) throw std::logic_error("power on unscheduled combination" + at);
        if (discrete && i != 0.0 && i != 1.0) throw std::logic_error("fractional indicator" + at);
        share += i;
      }
    }
    if (share > 1.0 + tol) {
      throw std::logic_error("subchannel " + std::to_string(n) + " shares sum to " + std::to_string(share));
    }
  }
}

// ---------------------------------------------------------------------------

double power_root(const SnrDistribution& dist, const Mcs& mcs, const UtilitySpec& u, int user,
                  double mu) {
  if (!std::isfinite(mu) || !(mu > 0.0)) throw std::invalid_argument("power_root: mu must be positive and finite");
  const auto mv = [&](double p) { return marginal_value(dist, p, mcs, u, user); };
  if (!(mu < mv(0.0))) return 0.0;

  double lo = 0.0;
  double hi = 1.0;
  while (mv(hi) >= mu) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw std::runtime_error("power_root: failed to bracket the root");
  }
  const double tol = 1e-9 * mu;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double f = mv(mid);
    if (std::abs(f - mu) <= tol) return mid;
    if (f > mu) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double v_metric(const SnrDistribution& dist, const Mcs& mcs, const UtilitySpec& u, int user,
                double mu, double p_star) {
  return -expected_utility(dist, p_star, mcs, u, user) + mu * p_star;
}

double perspective_objective(const SnrDistribution& dist, const Mcs& mcs, const UtilitySpec& u,
                             int user, double share, double power) {
  if (share <= 0.0) return 0.0;
  return -share * expected_utility(dist, power / share, mcs, u, user);
}

// ---------------------------------------------------------------------------

std::vector<WinnerSet> winner_sets(const ProblemInstance& inst, double mu) {
  std::vector<WinnerSet> out(inst.n());
  std::vector<WinnerEntry> all(inst.km());
  for (int n = 0; n < inst.n(); ++n) {
    double v_min = std::numeric_limits<double>::infinity();
    for (int k = 0; k < inst.k(); ++k) {
      for (int m = 0; m < inst.m(); ++m) {
        const double p = inst.power_root(n, k, m, mu);
        const double v = v_metric(inst.dist(n, k), inst.mcs()(k, m), inst.utility(), k, mu, p);
        all[k * inst.m() + m] = {k, m, v, p};
        v_min = std::min(v_min, v);
      }
    }
    const double eps = kTieTolerance * std::max(1.0, std::abs(v_min));
    out[n].v_min = v_min;
    if (v_min > -eps) continue;
    for (const WinnerEntry& e : all) {
      if (e.v <= v_min + eps) out[n].members.push_back(e);
    }
  }
  return out;
}

MuBounds mu_bounds(const ProblemInstance& inst) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (int n = 0; n < inst.n(); ++n) {
    for (int k = 0; k < inst.k(); ++k) {
      for (int m = 0; m < inst.m(); ++m) {
        const double threshold = inst.marginal_value(n, k, m, 0.0);
        if (!(threshold > 0.0)) continue;
        hi = std::max(hi, threshold);
        lo = std::min(lo, inst.marginal_value(n, k, m, inst.p_con()));
      }
    }
  }
  if (!(hi > 0.0)) throw std::invalid_argument("mu_bounds: no combination has a positive marginal value");
  // exp(-b P gamma) can underflow for strong channels and large budgets.
  return {std::max(lo, std::numeric_limits<double>::min()), hi};
}

AllocationState allocation_from_winners(const ProblemInstance& inst,
                                        const std::vector<WinnerSet>& winners, TieRule rule) {
  AllocationState out = AllocationState::empty(inst);
  for (int n = 0; n < inst.n(); ++n) {
    const WinnerEntry* best = nullptr;
    for (const WinnerEntry& e : winners[n].members) {
      if (best == nullptr) {
        best = &e;
        continue;
      }
      const double tol = 1e-12 * std::max(1.0, std::abs(best->power));
      const bool better = rule == TieRule::MinPower ? e.power < best->power - tol
                                                    : e.power > best->power + tol;
      if (better) best = &e;
    }
    if (best == nullptr) continue;
    out.indicator(n, best->user, best->level) = 1.0;
    out.power(n, best->user, best->level) = best->power;
  }
  return out;
}

AllocationState allocation_at_mu(const ProblemInstance& inst, double mu, TieRule rule) {
  return allocation_from_winners(inst, winner_sets(inst, mu), rule);
}

double total_power(const ProblemInstance& inst, double mu, TieRule rule) {
  return allocation_at_mu(inst, mu, rule).total_power();
}

// ---------------------------------------------------------------------------

namespace {

template <class F>
double sum_over_shares(const ProblemInstance& inst, const AllocationState& alloc, F&& value_at) {
  double total = 0.0;
  for (int n = 0; n < inst.n(); ++n) {
    for (int k = 0; k < inst.k(); ++k) {
      for (int m = 0; m < inst.m(); ++m) {
        const double share = alloc.indicator(n, k, m);
        if (share <= 0.0) continue;
        total += share * value_at(n, k, m, alloc.power(n, k, m) / share);
      }
    }
  }
  return total;
}

}  // namespace

double allocation_utility(const ProblemInstance& inst, const AllocationState& alloc) {
  return sum_over_shares(inst, alloc, [&](int n, int k, int m, double p) {
    return inst.expected_utility(n, k, m, p);
  });
}

double allocation_goodput(const ProblemInstance& inst, const AllocationState& alloc) {
  return sum_over_shares(inst, alloc, [&](int n, int k, int m, double p) {
    return expected_goodput(inst.dist(n, k), p, inst.mcs()(k, m));
  });
}

double lagrangian(const ProblemInstance& inst, const AllocationState& alloc, double mu) {
  return -allocation_utility(inst, alloc) + mu * (alloc.total_power() - inst.p_con());
}

}  // namespace sra
