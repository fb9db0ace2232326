#include "sra/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace sra {

BaselineResult fp_rus_baseline(const ProblemInstance& inst, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, inst.k() - 1);
  const double p = inst.p_con() / inst.n();

  BaselineResult out;
  out.alloc = AllocationState::empty(inst);
  for (int n = 0; n < inst.n(); ++n) {
    const int k = pick(rng);
    int best_m = 0;
    double best = -1.0;
    for (int m = 0; m < inst.m(); ++m) {
      const double g = expected_goodput(inst.dist(n, k), p, inst.mcs()(k, m));
      if (g > best) {
        best = g;
        best_m = m;
      }
    }
    out.alloc.indicator(n, k, best_m) = 1.0;
    out.alloc.power(n, k, best_m) = p;
  }
  out.goodput = allocation_goodput(inst, out.alloc);
  out.utility = allocation_utility(inst, out.alloc);
  return out;
}

CsraResult perfect_csi_run(const ProblemInstance& inst, double kappa) {
  for (int n = 0; n < inst.n(); ++n) {
    for (int k = 0; k < inst.k(); ++k) {
      if (!inst.dist(n, k).is_point_mass()) {
        throw std::invalid_argument("perfect_csi_run: every SNR distribution must be a point mass");
      }
    }
  }
  return solve_csra(inst, kappa);
}

double reference_mu(const ProblemInstance& inst) {
  const MuBounds b = mu_bounds(inst);
  const CsraResult r = solve_csra(inst, (b.hi - b.lo) * std::ldexp(1.0, -60));
  return 0.5 * (r.mu_lo + r.mu_hi);
}

AllocationState scale_to_budget(const AllocationState& alloc, double budget) {
  const double total = alloc.total_power();
  if (total <= budget) return alloc;
  AllocationState out = alloc;
  const double factor = budget / total;
  for (std::size_t i = 0; i < out.power.size(); ++i) out.power.flat(i) *= factor;
  return out;
}

SubgradientTrace subgradient_baseline(const ProblemInstance& inst, int n_updates, double scale,
                                      std::optional<double> mu_ref) {
  if (n_updates < 1) throw std::invalid_argument("subgradient_baseline: n_updates must be >= 1");
  const MuBounds b = mu_bounds(inst);
  SubgradientTrace t;
  t.mu_ref = mu_ref ? *mu_ref : reference_mu(inst);

  double mu = 0.5 * (b.lo + b.hi);
  for (int i = 1; i <= n_updates; ++i) {
    const AllocationState alloc = allocation_at_mu(inst, mu, TieRule::MinPower);
    const AllocationState feasible = scale_to_budget(alloc, inst.p_con());
    t.mu.push_back(mu);
    t.utility.push_back(allocation_utility(inst, feasible));
    t.deviation.push_back(std::abs(mu - t.mu_ref));
    if (i == n_updates) {
      t.final_alloc = feasible;
      t.final_utility = t.utility.back();
      t.final_goodput = allocation_goodput(inst, feasible);
      break;
    }
    mu = std::clamp(mu + scale * (alloc.total_power() - inst.p_con()) / i, b.lo, b.hi);
  }
  return t;
}

}  // namespace sra
