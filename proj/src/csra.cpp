#include "sra/csra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sra {

double default_kappa(const ProblemInstance& inst) { return 0.3 / inst.p_con(); }

int bisection_iteration_bound(const MuBounds& bounds, double kappa) {
  const double width = bounds.hi - bounds.lo;
  if (width <= kappa) return 0;
  return static_cast<int>(std::ceil(std::log2(width / kappa)));
}

AllocationState blend(const AllocationState& lo, const AllocationState& hi, double lambda) {
  AllocationState out = lo;
  for (std::size_t i = 0; i < out.indicator.size(); ++i) {
    out.indicator.flat(i) = lambda * hi.indicator.flat(i) + (1.0 - lambda) * lo.indicator.flat(i);
    out.power.flat(i) = lambda * hi.power.flat(i) + (1.0 - lambda) * lo.power.flat(i);
  }
  out.discrete = true;
  for (std::size_t i = 0; i < out.indicator.size(); ++i) {
    const double v = out.indicator.flat(i);
    if (v != 0.0 && v != 1.0) {
      out.discrete = false;
      break;
    }
  }
  return out;
}

CsraResult solve_csra(const ProblemInstance& inst, double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("solve_csra: kappa must be positive");
  const double budget = inst.p_con();

  CsraResult r;
  r.bounds = mu_bounds(inst);
  r.mu_lo = r.bounds.lo;
  r.mu_hi = r.bounds.hi;
  r.alloc_lo = allocation_at_mu(inst, r.mu_lo, TieRule::MinPower);
  r.alloc_hi = allocation_at_mu(inst, r.mu_hi, TieRule::MinPower);
  r.power_lo = r.alloc_lo.total_power();
  r.power_hi = r.alloc_hi.total_power();

  // Root-finding slack in p means X*(mu_min) can sit a hair below P_con.
  if (r.power_lo < budget * (1.0 - 1e-9)) {
    r.budget_slack = true;
    r.mu_hi = r.mu_lo;
    r.alloc_hi = r.alloc_lo;
    r.power_hi = r.power_lo;
    r.blended = r.alloc_lo;
    r.utility = csra_utility(r, inst);
    r.gap_bound = 0.0;
    return r;
  }

  while (r.mu_hi - r.mu_lo > kappa) {
    const double mid = 0.5 * (r.mu_lo + r.mu_hi);
    if (!(mid > r.mu_lo && mid < r.mu_hi)) break;  // bracket at machine resolution
    r.mu_trace.push_back(mid);
    ++r.iterations;
    AllocationState alloc = allocation_at_mu(inst, mid, TieRule::MinPower);
    const double x = alloc.total_power();
    if (x >= budget) {
      r.mu_lo = mid;
      r.alloc_lo = std::move(alloc);
      r.power_lo = x;
    } else {
      r.mu_hi = mid;
      r.alloc_hi = std::move(alloc);
      r.power_hi = x;
    }
  }

  const double denom = r.power_lo - r.power_hi;
  r.lambda_raw = denom != 0.0 ? (r.power_lo - budget) / denom : 0.0;
  r.lambda = std::clamp(r.lambda_raw, 0.0, 1.0);
  r.blended = blend(r.alloc_lo, r.alloc_hi, r.lambda);
  r.utility = csra_utility(r, inst);
  r.gap_bound = (r.mu_hi - r.mu_lo) * budget;
  return r;
}

double csra_utility(const CsraResult& result, const ProblemInstance& inst) {
  return allocation_utility(inst, result.blended);
}

}  // namespace sra
