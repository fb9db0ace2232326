#pragma once

#include <vector>

#include "sra/dual_core.hpp"

namespace sra {

/// Outcome of bisection over the power price mu with subchannel sharing.
struct CsraResult {
  MuBounds bounds{};
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  AllocationState alloc_lo;  // I*(mu_lo), min-power ties
  AllocationState alloc_hi;  // I*(mu_hi), min-power ties
  double power_lo = 0.0;     // X*(mu_lo)
  double power_hi = 0.0;     // X*(mu_hi)
  double lambda = 0.0;       // weight on alloc_hi, clamped to [0, 1]
  double lambda_raw = 0.0;
  AllocationState blended;
  double utility = 0.0;
  /// (mu_hi - mu_lo) P_con.
  double gap_bound = 0.0;
  int iterations = 0;
  /// Set when even X*(mu_min) falls short of P_con.
  bool budget_slack = false;
  /// Midpoints visited, in order.
  std::vector<double> mu_trace;
};

/// Bracket width used when none is configured: 0.3 / P_con.
double default_kappa(const ProblemInstance& inst);

/// ceil(log2((mu_max - mu_min) / kappa)), or 0 when the initial bracket is already narrow enough.
int bisection_iteration_bound(const MuBounds& bounds, double kappa);

/// Bisection on X*(mu) against P_con until mu_hi - mu_lo <= kappa, then
/// blends the two endpoint allocations so the budget is met exactly.
CsraResult solve_csra(const ProblemInstance& inst, double kappa);

/// Expected utility of the blended allocation.
double csra_utility(const CsraResult& result, const ProblemInstance& inst);

/// lambda * hi + (1 - lambda) * lo, entrywise for I and x.
AllocationState blend(const AllocationState& lo, const AllocationState& hi, double lambda);

}  // namespace sra
