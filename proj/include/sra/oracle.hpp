#pragma once

// Brute-force references for tests and acceptance checks. Deliberately simple
// and slow; they share only the utility evaluation with the solvers.

#include <cstddef>
#include <vector>

#include "sra/dsra.hpp"

namespace sra::oracle {

struct GridResult {
  std::vector<double> powers;  // per subchannel, 0 where unassigned
  double utility = 0.0;
  /// Grid spacing in power units, P_con / grid_points.
  double step = 0.0;
  /// Worst-case utility lost by rounding one coordinate down to the grid.
  double resolution = 0.0;
};

/// Exhaustive search over the budget simplex discretized to multiples of
/// P_con / grid_points. At most 4 active subchannels and 2000 grid points.
GridResult grid_power_oracle(const ProblemInstance& inst, const Assignment& assignment, int grid_points);

struct GridDsraResult {
  Assignment best;
  GridResult grid;
  std::size_t hypotheses = 0;
};

/// grid_power_oracle on every discrete assignment; returns the best.
GridDsraResult exhaustive_grid_dsra(const ProblemInstance& inst, int grid_points,
                                    std::size_t cap = kDefaultBruteForceCap);

struct LagrangianMinResult {
  Assignment assignment;
  AllocationState alloc;
  double value = 0.0;
  /// Assignments whose Lagrangian equals the minimum within tolerance.
  std::size_t minimizers = 0;
};

/// Minimum of the Lagrangian over all discrete assignments at a fixed mu,
/// with powers from power_root.
LagrangianMinResult exhaustive_lagrangian_min(const ProblemInstance& inst, double mu,
                                              std::size_t cap = kDefaultBruteForceCap);

/// Optimal shared-subchannel utility as the minimum of the dual function
///   D(mu) = mu P_con + sum_n max(0, max_{k,m} max_p [E{U(p)} - mu p]),
/// with both inner and outer optimizations by golden-section search.
double dual_function_value(const ProblemInstance& inst, double mu);
double csra_optimum(const ProblemInstance& inst);

}  // namespace sra::oracle
