#include "sra/dsra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sra {

namespace {

struct Powers {
  std::vector<double> p;
  double total = 0.0;
};

Powers powers_at(const ProblemInstance& inst, const Assignment& a, double mu) {
  Powers out;
  out.p.assign(a.size(), 0.0);
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (a[n] == kUnassigned) continue;
    out.p[n] = inst.power_root(static_cast<int>(n), a[n] / inst.m(), a[n] % inst.m(), mu);
    out.total += out.p[n];
  }
  return out;
}

double assignment_utility(const ProblemInstance& inst, const Assignment& a, const std::vector<double>& p) {
  double u = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (a[n] == kUnassigned) continue;
    u += inst.expected_utility(static_cast<int>(n), a[n] / inst.m(), a[n] % inst.m(), p[n]);
  }
  return u;
}

bool is_empty(const Assignment& a) {
  return std::all_of(a.begin(), a.end(), [](int c) { return c == kUnassigned; });
}

}  // namespace

FixedAssignmentResult solve_fixed_assignment(const ProblemInstance& inst, const Assignment& assignment,
                                             double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("solve_fixed_assignment: kappa must be positive");
  if (assignment.size() != static_cast<std::size_t>(inst.n())) {
    throw std::invalid_argument("solve_fixed_assignment: expected one entry per subchannel");
  }
  const MuBounds bounds = mu_bounds(inst);
  const double budget = inst.p_con();
  FixedAssignmentResult r;

  if (is_empty(assignment)) {
    r.alloc = AllocationState::empty(inst);
    r.mu_hat = bounds.hi;
    r.mu_lo = bounds.hi;
    r.lagrangian = -r.mu_hat * budget;
    return r;
  }

  double lo = bounds.lo;
  double hi = bounds.hi;
  Powers p_lo = powers_at(inst, assignment, lo);
  Powers p_hi = powers_at(inst, assignment, hi);

  if (p_lo.total < budget * (1.0 - 1e-9)) {
    hi = lo;
    p_hi = p_lo;
  } else {
    while (hi - lo > kappa) {
      const double mid = 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi)) break;
      ++r.iterations;
      Powers p = powers_at(inst, assignment, mid);
      if (p.total > budget) {
        lo = mid;
        p_lo = std::move(p);
      } else {
        hi = mid;
        p_hi = std::move(p);
      }
    }
  }

  const double denom = p_lo.total - p_hi.total;
  const double lambda = denom != 0.0 ? std::clamp((p_lo.total - budget) / denom, 0.0, 1.0) : 0.0;
  std::vector<double> x(assignment.size(), 0.0);
  for (std::size_t n = 0; n < x.size(); ++n) x[n] = lambda * p_hi.p[n] + (1.0 - lambda) * p_lo.p[n];

  r.alloc = AllocationState::from_assignment(inst, assignment, x);
  r.utility = assignment_utility(inst, assignment, x);
  r.mu_hat = hi;
  r.mu_lo = lo;
  r.lagrangian = -assignment_utility(inst, assignment, p_hi.p) + hi * (p_hi.total - budget);
  return r;
}

std::size_t hypothesis_count(const ProblemInstance& inst) {
  const std::size_t base = static_cast<std::size_t>(inst.km()) + 1;
  std::size_t count = 1;
  for (int n = 0; n < inst.n(); ++n) {
    if (count > std::numeric_limits<std::size_t>::max() / base) return std::numeric_limits<std::size_t>::max();
    count *= base;
  }
  return count;
}

DsraResult brute_force_dsra(const ProblemInstance& inst, double kappa, std::size_t cap) {
  const std::size_t count = hypothesis_count(inst);
  if (count > cap) {
    throw std::length_error("brute_force_dsra: " + std::to_string(count) +
                            " hypotheses exceed the cap of " + std::to_string(cap));
  }
  DsraResult out;
  out.hypotheses = count;
  out.candidates.reserve(count);
  FixedAssignmentResult best;
  for_each_assignment(inst.n(), inst.km(), [&](const Assignment& a) {
    FixedAssignmentResult r = solve_fixed_assignment(inst, a, kappa);
    out.candidates.push_back({a, r.lagrangian, r.utility});
    if (out.chosen < 0 || r.utility > best.utility) {
      out.chosen = static_cast<int>(out.candidates.size()) - 1;
      best = std::move(r);
    }
  });
  out.alloc = std::move(best.alloc);
  out.utility = best.utility;
  out.goodput = allocation_goodput(inst, out.alloc);
  return out;
}

DsraResult solve_dsra(const ProblemInstance& inst, double kappa) {
  return solve_dsra(inst, solve_csra(inst, kappa), kappa);
}

DsraResult solve_dsra(const ProblemInstance& inst, const CsraResult& csra, double kappa) {
  DsraResult out;
  out.csra = csra;
  out.gap_bound = dsra_gap_bound(inst, csra);

  const double budget = inst.p_con();
  const bool on_budget = std::abs(csra.blended.total_power() - budget) <= 1e-6 * budget;
  if (csra.blended.discrete && (on_budget || csra.budget_slack)) {
    out.exact_via_equivalence = true;
    out.alloc = csra.blended;
    out.utility = csra.utility;
    out.goodput = allocation_goodput(inst, out.alloc);
    out.candidates.push_back({csra.blended.assignment(), lagrangian(inst, csra.blended, csra.mu_hi),
                              csra.utility});
    out.chosen = 0;
    return out;
  }

  std::vector<Assignment> options{csra.alloc_lo.assignment()};
  if (csra.alloc_hi.assignment() != options.front()) options.push_back(csra.alloc_hi.assignment());

  FixedAssignmentResult best;
  for (const Assignment& a : options) {
    FixedAssignmentResult r = solve_fixed_assignment(inst, a, kappa);
    out.candidates.push_back({a, r.lagrangian, r.utility});
    bool take = out.chosen < 0;
    if (!take) {
      const double tol = 1e-12 * std::max(1.0, std::abs(best.lagrangian));
      take = r.lagrangian < best.lagrangian - tol ||
             (std::abs(r.lagrangian - best.lagrangian) <= tol && r.utility > best.utility);
    }
    if (take) {
      out.chosen = static_cast<int>(out.candidates.size()) - 1;
      best = std::move(r);
    }
  }
  out.alloc = std::move(best.alloc);
  out.utility = best.utility;
  out.goodput = allocation_goodput(inst, out.alloc);
  return out;
}

double dsra_gap_bound(const ProblemInstance& inst, const CsraResult& csra) {
  if (csra.budget_slack) return 0.0;
  const double mid = 0.5 * (csra.mu_lo + csra.mu_hi);
  const std::vector<WinnerSet> winners = winner_sets(inst, mid);
  const bool tie_at_mid = std::any_of(winners.begin(), winners.end(),
                                      [](const WinnerSet& w) { return w.members.size() > 1; });
  const Assignment a_hi = csra.alloc_hi.assignment();
  const bool switch_in_bracket = csra.alloc_lo.assignment() != a_hi;
  if (!tie_at_mid && !switch_in_bracket) return 0.0;

  // A winner switch inside the bracket is a tie at some mu* there; the
  // min-power side of it is the allocation seen from above.
  const double power = switch_in_bracket ? powers_at(inst, a_hi, mid).total
                                         : allocation_from_winners(inst, winners, TieRule::MinPower).total_power();
  const double bound = std::max(0.0, (mid - csra.bounds.lo) * (inst.p_con() - power));
  return std::min(bound, (csra.bounds.hi - csra.bounds.lo) * inst.p_con());
}

}  // namespace sra
