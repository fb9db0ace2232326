#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sra/csra.hpp"

namespace sra {

struct BaselineResult {
  AllocationState alloc;
  double goodput = 0.0;
  double utility = 0.0;
};

/// One user drawn uniformly per subchannel, power P_con / N, and the MCS
/// with the largest expected goodput at that power for the drawn user.
BaselineResult fp_rus_baseline(const ProblemInstance& inst, std::uint64_t seed);

/// CSRA on an instance whose distributions are all point masses.
/// Throws std::invalid_argument otherwise.
CsraResult perfect_csi_run(const ProblemInstance& inst, double kappa);

struct SubgradientTrace {
  std::vector<double> mu;          // mu_1 .. mu_n
  std::vector<double> utility;     // utility of the budget-scaled allocation at each mu_i
  std::vector<double> deviation;   // |mu_i - mu_ref|
  double mu_ref = 0.0;
  /// Allocation at the last multiplier, scaled down to the budget if needed.
  AllocationState final_alloc;
  double final_utility = 0.0;
  double final_goodput = 0.0;
};

/// Multiplier of a 60-step bisection, used as the reference mu*.
double reference_mu(const ProblemInstance& inst);

/// mu_{i+1} = clamp(mu_i + scale (X*(mu_i) - P_con) / i, mu_min, mu_max), mu_1 at the
/// middle of [mu_min, mu_max].
SubgradientTrace subgradient_baseline(const ProblemInstance& inst, int n_updates, double scale = 1.0,
                                      std::optional<double> mu_ref = std::nullopt);

/// Powers scaled down uniformly so that sum x <= P_con.
AllocationState scale_to_budget(const AllocationState& alloc, double budget);

}  // namespace sra
