#include <doctest.h>

#include <cmath>
#include <set>

#include "sra/dsra.hpp"
#include "support.hpp"

using namespace sra;
using sra::test::point_mass_instance;
using sra::test::random_atom_instance;
using sra::test::random_point_mass_instance;
using sra::test::single_combination;

namespace {

constexpr double kTight = 1e-11;

// User 0 is clearly best on subchannel 0 and user 1 on subchannel 1. A single
// level keeps level switches from creating ties as well.
ProblemInstance no_tie_instance(double scale, double p_con) {
  return point_mass_instance({{2.0 * scale, 0.4 * scale}, {0.3 * scale, 1.7 * scale}}, McsTable::qam(2, 1),
                             UtilitySpec::goodput(), p_con);
}

}  // namespace

TEST_SUITE("dsra-solver") {

TEST_CASE("fixed assignment matches the single-combination closed form") {
  const ProblemInstance inst = single_combination(1.0);
  const FixedAssignmentResult r = solve_fixed_assignment(inst, {0}, 1e-6);
  CHECK(r.alloc.power(0, 0, 0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.utility == doctest::Approx(2.0 * (1.0 - std::exp(-0.5))).epsilon(1e-6));
  CHECK(r.mu_lo <= std::exp(-0.5));
  CHECK(r.mu_hat >= std::exp(-0.5));
  CHECK(r.alloc.discrete);
}

TEST_CASE("fixed assignment splits evenly over identical subchannels") {
  const ProblemInstance inst = point_mass_instance({{1.0}, {1.0}}, McsTable(1, 1, {{1.0, 0.5, 2.0}}),
                                                   UtilitySpec::goodput(), 2.0);
  const FixedAssignmentResult r = solve_fixed_assignment(inst, {0, 0}, 1e-6);
  CHECK(r.alloc.power(0, 0, 0) == doctest::Approx(r.alloc.power(1, 0, 0)).epsilon(1e-12));
  CHECK(r.alloc.total_power() == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("fixed assignment: empty and malformed") {
  const ProblemInstance inst = random_point_mass_instance(3, 2, 2, 1, 3.0);
  const FixedAssignmentResult r = solve_fixed_assignment(inst, {kUnassigned, kUnassigned}, 0.01);
  CHECK(r.utility == 0.0);
  CHECK(r.alloc.total_power() == 0.0);
  CHECK(r.lagrangian == doctest::Approx(-r.mu_hat * 3.0));
  CHECK_THROWS_AS(solve_fixed_assignment(inst, {0}, 0.01), std::invalid_argument);
  CHECK_THROWS_AS(solve_fixed_assignment(inst, {0, 0}, 0.0), std::invalid_argument);
}

TEST_CASE("fixed assignment is always feasible") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const ProblemInstance inst = random_atom_instance(seed, 3, 2, 2, 4.0, 3);
    for_each_assignment(inst.n(), inst.km(), [&](const Assignment& a) {
      const FixedAssignmentResult r = solve_fixed_assignment(inst, a, default_kappa(inst));
      CHECK(r.alloc.total_power() <= inst.p_con() * (1.0 + 1e-6));
      CHECK(r.alloc.discrete);
    });
  }
}

TEST_CASE("hypothesis enumeration counts") {
  const ProblemInstance one = single_combination(1.0);
  const DsraResult r1 = brute_force_dsra(one, 1e-6);
  CHECK(r1.hypotheses == 2);
  CHECK(r1.candidates.size() == 2);
  CHECK(r1.candidates[r1.chosen].assignment == Assignment{0});

  const ProblemInstance two = random_point_mass_instance(5, 2, 2, 1, 2.0);
  CHECK(hypothesis_count(two) == 9);
  const DsraResult r2 = brute_force_dsra(two, 1e-3);
  CHECK(r2.candidates.size() == 9);
  std::set<Assignment> distinct;
  for (const DsraCandidate& c : r2.candidates) distinct.insert(c.assignment);
  CHECK(distinct.size() == 9);
  CHECK(r2.candidates.front().assignment == Assignment{kUnassigned, kUnassigned});
  CHECK(r2.candidates.back().assignment == Assignment{1, 1});
}

TEST_CASE("brute force refuses instances over the cap") {
  const ProblemInstance inst = random_point_mass_instance(1, 6, 3, 3, 5.0);
  CHECK(hypothesis_count(inst) == 1000000);
  CHECK_THROWS_AS(brute_force_dsra(inst, 0.1), std::length_error);
  CHECK_THROWS_AS(brute_force_dsra(random_point_mass_instance(1, 2, 2, 1, 1.0), 0.1, 8), std::length_error);
}

TEST_CASE("sandwich between brute force and the gap bound") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const ProblemInstance inst = seed % 2 ? random_point_mass_instance(seed, 2, 2, 2, 4.0)
                                          : random_atom_instance(seed, 2, 2, 2, 4.0, 3);
    const double kappa = default_kappa(inst);
    const DsraResult bf = brute_force_dsra(inst, kTight);
    const DsraResult d = solve_dsra(inst, kappa);
    CHECK(bf.utility - d.utility >= -1e-7);
    CHECK(bf.utility - d.utility <= d.gap_bound + kappa * inst.p_con() + 1e-7);
    CHECK(d.gap_bound >= 0.0);
    CHECK(d.gap_bound <= (d.csra.bounds.hi - d.csra.bounds.lo) * inst.p_con());
  }
}

TEST_CASE("no ties: DSRA reaches the brute-force optimum") {
  for (double scale : {0.5, 1.0, 3.0}) {
    for (double p : {1.0, 4.0, 10.0}) {
      const ProblemInstance inst = no_tie_instance(scale, p);
      const DsraResult d = solve_dsra(inst, default_kappa(inst));
      const DsraResult bf = brute_force_dsra(inst, kTight);
      CHECK(d.gap_bound == 0.0);
      CHECK(std::abs(bf.utility - d.utility) <= 1e-6);
      CHECK(std::abs(d.csra.utility - d.utility) <= 1e-6);
    }
  }
}

TEST_CASE("two identical users on one subchannel") {
  const ProblemInstance inst = point_mass_instance({{1.0, 1.0}}, McsTable::qam(2, 2), UtilitySpec::goodput(), 2.0);
  const double kappa = default_kappa(inst);
  const DsraResult d = solve_dsra(inst, kappa);
  const DsraResult bf = brute_force_dsra(inst, kTight);
  CHECK(d.gap_bound > 0.0);
  CHECK(bf.utility - d.utility >= -1e-7);
  CHECK(bf.utility - d.utility <= d.gap_bound + kappa * inst.p_con() + 1e-7);
  // The first tied user wins.
  CHECK(d.alloc.assignment()[0] / inst.m() == 0);
}

TEST_CASE("gap bound is zero on a single combination") {
  const ProblemInstance inst = single_combination(1.0);
  CHECK(dsra_gap_bound(inst, solve_csra(inst, 1e-3)) == 0.0);
}

TEST_CASE("chosen assignment stabilizes as kappa shrinks") {
  int stable = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const ProblemInstance inst = random_point_mass_instance(seed + 100, 4, 3, 3, 8.0);
    const double kappa = 1e-4;
    const Assignment a = solve_dsra(inst, kappa).alloc.assignment();
    const Assignment b = solve_dsra(inst, kappa / 10.0).alloc.assignment();
    if (a == b) ++stable;
  }
  CHECK(stable == 10);
}

TEST_CASE("equivalence path returns the CSRA allocation") {
  const ProblemInstance inst = no_tie_instance(1.0, 4.0);
  const DsraResult d = solve_dsra(inst, default_kappa(inst));
  if (d.exact_via_equivalence) {
    CHECK(d.alloc.power == d.csra.blended.power);
    CHECK(d.utility == d.csra.utility);
  }
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const ProblemInstance r = random_point_mass_instance(seed, 3, 2, 2, 5.0);
    const DsraResult x = solve_dsra(r, default_kappa(r));
    const bool on_budget = std::abs(x.csra.blended.total_power() - r.p_con()) <= 1e-6 * r.p_con();
    if (x.csra.blended.discrete && on_budget) {
      CHECK(x.exact_via_equivalence);
      CHECK(x.alloc.power == x.csra.blended.power);
      CHECK(x.alloc.indicator == x.csra.blended.indicator);
      CHECK(x.utility == x.csra.utility);
    }
  }
}

ProblemInstance domination_instance(std::uint64_t seed) {
  return seed % 3 ? random_point_mass_instance(seed, 4, 3, 3, 6.0)
                  : random_atom_instance(seed, 4, 3, 3, 6.0, 5, UtilitySpec::exp_pricing({1.0, 0.8, 0.6}));
}

TEST_CASE("DSRA never beats CSRA once the bracket is narrow") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const ProblemInstance inst = domination_instance(seed);
    const DsraResult d = solve_dsra(inst, 1e-9);
    CHECK(d.utility <= d.csra.utility + 1e-9);
  }
}

TEST_CASE("at the default bracket DSRA can exceed CSRA only within the certificate") {
  // The endpoint blend loses up to (mu_hi - mu_lo) P_con, while DSRA re-solves
  // powers on a single assignment, so the order may flip by that much.
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const ProblemInstance inst = domination_instance(seed);
    const DsraResult d = solve_dsra(inst, default_kappa(inst));
    CHECK(d.utility - d.csra.utility <= d.csra.gap_bound + 1e-9);
    CHECK(d.alloc.discrete);
    CHECK(d.alloc.total_power() <= inst.p_con() * (1.0 + 1e-6));
    CHECK_NOTHROW(d.alloc.check_invariants());
    CHECK(d.chosen >= 0);
    CHECK(d.chosen < static_cast<int>(d.candidates.size()));
  }
}

}  // TEST_SUITE
