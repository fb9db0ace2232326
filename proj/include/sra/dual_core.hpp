#pragma once

#include <vector>

#include "sra/snr_model.hpp"
#include "sra/utility.hpp"

namespace sra {

/// Dense N x K x M tensor, (n, k, m) laid out row-major.
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(int n, int k, int m) : n_(n), k_(k), m_(m), data_(static_cast<std::size_t>(n) * k * m, 0.0) {}

  double& operator()(int n, int k, int m) { return data_[index(n, k, m)]; }
  double operator()(int n, int k, int m) const { return data_[index(n, k, m)]; }
  double& flat(std::size_t i) { return data_[i]; }
  double flat(std::size_t i) const { return data_[i]; }

  int dim_n() const { return n_; }
  int dim_k() const { return k_; }
  int dim_m() const { return m_; }
  std::size_t size() const { return data_.size(); }
  double sum() const;

  bool operator==(const Tensor3&) const = default;

 private:
  std::size_t index(int n, int k, int m) const {
    return (static_cast<std::size_t>(n) * k_ + k) * m_ + m;
  }

  int n_ = 0, k_ = 0, m_ = 0;
  std::vector<double> data_;
};

/// Discrete scheduling decision: per subchannel, the flat (user, level) index
/// user * M + level of the scheduled combination, or kUnassigned.
using Assignment = std::vector<int>;
inline constexpr int kUnassigned = -1;

class ProblemInstance {
 public:
  /// `dists` holds the N x K SNR distributions, subchannel-major.
  ProblemInstance(McsTable mcs, UtilitySpec utility, int n_subchannels,
                  std::vector<SnrDistribution> dists, double p_con);

  int n() const { return n_; }
  int k() const { return mcs_.users(); }
  int m() const { return mcs_.levels(); }
  /// Number of (user, level) combinations per subchannel.
  int km() const { return k() * m(); }
  double p_con() const { return p_con_; }
  const McsTable& mcs() const { return mcs_; }
  const UtilitySpec& utility() const { return utility_; }
  const SnrDistribution& dist(int n, int k) const {
    return dists_[static_cast<std::size_t>(n) * mcs_.users() + k];
  }

  double expected_utility(int n, int k, int m, double p) const;
  double marginal_value(int n, int k, int m, double p) const;
  double power_root(int n, int k, int m, double mu) const;

 private:
  int n_;
  McsTable mcs_;
  UtilitySpec utility_;
  std::vector<SnrDistribution> dists_;
  double p_con_;
};

/// Pair (I, x): subchannel-share indicators and actual powers x = I p.
struct AllocationState {
  Tensor3 indicator;
  Tensor3 power;
  bool discrete = true;

  static AllocationState empty(const ProblemInstance& inst);
  /// Discrete allocation with per-subchannel powers (ignored where unassigned).
  static AllocationState from_assignment(const ProblemInstance& inst, const Assignment& assignment,
                                         const std::vector<double>& powers);

  double total_power() const { return power.sum(); }
  /// Only meaningful for discrete allocations.
  Assignment assignment() const;

  /// Throws std::logic_error describing the first violated invariant.
  void check_invariants(double tol = 1e-9) const;
};

// ---------------------------------------------------------------------------
// Per-combination dual machinery
// ---------------------------------------------------------------------------

/// Power solving marginal_value(p) = mu, or 0 when mu is at or above the
/// activation threshold marginal_value(0). Bisection, |mv - mu| <= 1e-9 mu.
double power_root(const SnrDistribution& dist, const Mcs& mcs, const UtilitySpec& u, int user,
                  double mu);

/// -E{U} + mu p*.
double v_metric(const SnrDistribution& dist, const Mcs& mcs, const UtilitySpec& u, int user,
                double mu, double p_star);

/// I F(I, x): -I E{U(g(x / I))} for I > 0, and 0 at I = 0.
double perspective_objective(const SnrDistribution& dist, const Mcs& mcs, const UtilitySpec& u,
                             int user, double share, double power);

// ---------------------------------------------------------------------------
// Subchannel winners and allocations at a multiplier
// ---------------------------------------------------------------------------

struct WinnerEntry {
  int user;
  int level;
  double v;
  double power;
};

/// Combinations attaining the smallest V on one subchannel (empty when that
/// V is not negative).
struct WinnerSet {
  std::vector<WinnerEntry> members;
  double v_min = 0.0;
};

/// Relative tie tolerance for V values.
inline constexpr double kTieTolerance = 1e-9;

std::vector<WinnerSet> winner_sets(const ProblemInstance& inst, double mu);

struct MuBounds {
  double lo;
  double hi;
};

/// Lower bound: smallest marginal value at p = P_con. Upper bound: largest
/// activation threshold. Combinations with zero threshold are ignored.
MuBounds mu_bounds(const ProblemInstance& inst);

enum class TieRule { MinPower, MaxPower };

/// Discrete Lagrangian minimizer at `mu`; ties resolved by power, then by (k, m).
AllocationState allocation_at_mu(const ProblemInstance& inst, double mu, TieRule rule);
AllocationState allocation_from_winners(const ProblemInstance& inst,
                                        const std::vector<WinnerSet>& winners, TieRule rule);

double total_power(const ProblemInstance& inst, double mu, TieRule rule);

// ---------------------------------------------------------------------------
// Objective evaluation
// ---------------------------------------------------------------------------

/// Sum of I E{U(g(x / I))} with 0/0 := 0.
double allocation_utility(const ProblemInstance& inst, const AllocationState& alloc);
/// Same with U replaced by the raw goodput.
double allocation_goodput(const ProblemInstance& inst, const AllocationState& alloc);
/// sum I F(I, x) + mu (sum x - P_con).
double lagrangian(const ProblemInstance& inst, const AllocationState& alloc, double mu);

}  // namespace sra
