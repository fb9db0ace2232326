#include <doctest.h>

#include <cmath>

#include "sra/csra.hpp"
#include "sra/oracle.hpp"
#include "support.hpp"

using namespace sra;
using sra::test::point_mass_instance;
using sra::test::random_atom_instance;
using sra::test::random_point_mass_instance;
using sra::test::single_combination;

TEST_SUITE("csra-solver") {

TEST_CASE("single combination with P_con = 1") {
  const ProblemInstance inst = single_combination(1.0);
  const CsraResult r = solve_csra(inst, 1e-4);
  const double mu_star = std::exp(-0.5);
  CHECK(r.mu_lo <= mu_star);
  CHECK(r.mu_hi >= mu_star);
  CHECK(r.mu_hi - r.mu_lo <= 1e-4);
  CHECK(r.blended.total_power() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.utility == doctest::Approx(2.0 * (1.0 - std::exp(-0.5))).epsilon(1e-9));
  CHECK(csra_utility(r, inst) == doctest::Approx(0.7869).epsilon(1e-4));
  CHECK_FALSE(r.budget_slack);
  CHECK(r.gap_bound == doctest::Approx((r.mu_hi - r.mu_lo) * 1.0));
}

TEST_CASE("halving kappa adds exactly one iteration") {
  const ProblemInstance inst = random_atom_instance(4, 3, 2, 2, 6.0, 4);
  const MuBounds b = mu_bounds(inst);
  // Widths chosen so that log2(width / kappa) is never an integer.
  const double base = (b.hi - b.lo) / 5.3;
  int prev = solve_csra(inst, base).iterations;
  for (int i = 1; i < 10; ++i) {
    const int it = solve_csra(inst, base / std::ldexp(1.0, i)).iterations;
    CHECK(it == prev + 1);
    prev = it;
  }
}

TEST_CASE("identical subchannels split the budget evenly") {
  const ProblemInstance inst = point_mass_instance({{1.0}, {1.0}}, McsTable(1, 1, {{1.0, 0.5, 2.0}}),
                                                   UtilitySpec::goodput(), 3.0);
  const CsraResult r = solve_csra(inst, 1e-3);
  CHECK(r.blended.power(0, 0, 0) == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(r.blended.power(1, 0, 0) == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("zero allocation has zero utility") {
  CsraResult r;
  const ProblemInstance inst = single_combination(1.0);
  r.blended = AllocationState::empty(inst);
  CHECK(csra_utility(r, inst) == 0.0);
}

TEST_CASE("result invariants on random instances") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const ProblemInstance inst = seed % 2 ? random_point_mass_instance(seed, 4, 3, 3, 8.0)
                                          : random_atom_instance(seed, 4, 3, 3, 8.0, 6, UtilitySpec::exp_pricing({1, 0.7, 0.5}));
    const double kappa = default_kappa(inst);
    const CsraResult r = solve_csra(inst, kappa);
    CHECK(r.mu_lo <= r.mu_hi);
    CHECK(r.mu_hi - r.mu_lo <= kappa);
    CHECK(r.iterations <= bisection_iteration_bound(r.bounds, kappa));
    CHECK(r.iterations == static_cast<int>(r.mu_trace.size()));
    CHECK(r.lambda >= 0.0);
    CHECK(r.lambda <= 1.0);
    CHECK(r.gap_bound >= 0.0);
    CHECK_NOTHROW(r.blended.check_invariants());
    if (!r.budget_slack) CHECK(std::abs(r.blended.total_power() - inst.p_con()) <= 1e-6 * inst.p_con());
    CHECK(r.power_lo >= r.power_hi);
    const double u_lo = allocation_utility(inst, r.alloc_lo);
    const double u_hi = allocation_utility(inst, r.alloc_hi);
    CHECK(r.utility >= std::min(u_lo, u_hi) - 1e-12);
  }
}

TEST_CASE("gap certificate against the dual-function optimum") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const ProblemInstance inst = random_atom_instance(seed, 3, 2, 2, 5.0, 3);
    const double opt = oracle::csra_optimum(inst);
    for (double kappa : {0.3 / 5.0, 1e-3, 1e-6}) {
      const CsraResult r = solve_csra(inst, kappa);
      CHECK(opt - r.utility >= -1e-7);
      CHECK(opt - r.utility <= r.gap_bound + 1e-7);
    }
  }
}

TEST_CASE("shrinking kappa does not lose utility") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const ProblemInstance inst = random_atom_instance(seed + 40, 4, 2, 3, 8.0, 4);
    double kappa = default_kappa(inst);
    double prev = solve_csra(inst, kappa).utility;
    for (int i = 0; i < 4; ++i) {
      kappa /= 10.0;
      const double u = solve_csra(inst, kappa).utility;
      CHECK(u >= prev - 1e-9);
      prev = u;
    }
  }
}

TEST_CASE("budget slack when the budget exceeds every useful power level") {
  // Powers beyond the activation threshold are never worth the price mu_min.
  const ProblemInstance inst = single_combination(1e6);
  const CsraResult r = solve_csra(inst, default_kappa(inst));
  CHECK(r.budget_slack);
  CHECK(r.blended.total_power() < 1e6);
  CHECK(r.utility > 1.99);
  CHECK_FALSE(solve_csra(single_combination(1.0), 0.01).budget_slack);
  CHECK_THROWS_AS(solve_csra(single_combination(1.0), 0.0), std::invalid_argument);
}

TEST_CASE("iteration bound formula") {
  CHECK(bisection_iteration_bound({0.0, 1.0}, 0.25) == 2);
  CHECK(bisection_iteration_bound({0.0, 1.0}, 0.3) == 2);
  CHECK(bisection_iteration_bound({0.0, 1.0}, 2.0) == 0);
}

}  // TEST_SUITE
