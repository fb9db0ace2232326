#pragma once

#include <cstddef>
#include <vector>

#include "sra/csra.hpp"

namespace sra {

/// Optimal powers for a fixed discrete scheduling decision.
struct FixedAssignmentResult {
  AllocationState alloc;
  /// Lagrangian at mu_hat with the unblended powers p*(mu_hat).
  double lagrangian = 0.0;
  double mu_hat = 0.0;  // upper end of the final bracket
  double mu_lo = 0.0;
  double utility = 0.0;
  int iterations = 0;
};

/// Bisection on mu for a fixed assignment, blending powers at the final bracket
/// so that the budget is met. An empty assignment yields zero powers.
FixedAssignmentResult solve_fixed_assignment(const ProblemInstance& inst, const Assignment& assignment,
                                             double kappa);

struct DsraCandidate {
  Assignment assignment;
  double lagrangian;
  double utility;
};

struct DsraResult {
  AllocationState alloc;
  double utility = 0.0;
  double goodput = 0.0;
  double gap_bound = 0.0;
  /// CSRA blend was already discrete and on budget, so it was returned as is.
  bool exact_via_equivalence = false;
  std::vector<DsraCandidate> candidates;
  int chosen = -1;
  /// Number of hypotheses examined by brute force (0 for the proposed scheme).
  std::size_t hypotheses = 0;
  CsraResult csra;  // filled by solve_dsra only
};

inline constexpr std::size_t kDefaultBruteForceCap = 20000;

/// (KM + 1)^N, saturating at SIZE_MAX.
std::size_t hypothesis_count(const ProblemInstance& inst);

/// Calls `visit(const Assignment&)` for every discrete assignment, lexicographically.
template <class F>
void for_each_assignment(int n_subchannels, int combos, F&& visit) {
  Assignment a(n_subchannels, kUnassigned);
  while (true) {
    visit(static_cast<const Assignment&>(a));
    int n = n_subchannels - 1;
    while (n >= 0 && a[n] == combos - 1) {
      a[n] = kUnassigned;
      --n;
    }
    if (n < 0) return;
    ++a[n];
  }
}

/// Exhaustive search over all (KM + 1)^N assignments, ranked by utility.
/// Throws std::length_error naming the required cap when it is exceeded.
DsraResult brute_force_dsra(const ProblemInstance& inst, double kappa,
                            std::size_t cap = kDefaultBruteForceCap);

/// CSRA-guided approximation: the two bracket-endpoint assignments are solved
/// with fixed scheduling and the one with the smaller Lagrangian is kept.
DsraResult solve_dsra(const ProblemInstance& inst, double kappa);
DsraResult solve_dsra(const ProblemInstance& inst, const CsraResult& csra, double kappa);

/// (mu* - mu_min)(P_con - X*(I_min, mu*)) with mu* taken at the bracket
/// midpoint, capped at (mu_max - mu_min) P_con. Zero when no subchannel ties.
double dsra_gap_bound(const ProblemInstance& inst, const CsraResult& csra);

}  // namespace sra
