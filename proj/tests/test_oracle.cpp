#include <doctest.h>

#include <cmath>

#include "sra/oracle.hpp"
#include "support.hpp"

using namespace sra;
using sra::test::point_mass_instance;
using sra::test::random_point_mass_instance;
using sra::test::single_combination;

TEST_SUITE("oracle") {

TEST_CASE("grid oracle: single combination agrees with the fixed-assignment solver") {
  for (double p : {0.5, 1.0, 3.0}) {
    const ProblemInstance inst = single_combination(p);
    const oracle::GridResult g = oracle::grid_power_oracle(inst, {0}, 1000);
    const FixedAssignmentResult f = solve_fixed_assignment(inst, {0}, 1e-9);
    CHECK(std::abs(g.powers[0] - f.alloc.power(0, 0, 0)) <= g.step + 1e-9);
    CHECK(g.utility <= f.utility + 1e-9);
    CHECK(g.utility >= f.utility - g.resolution);
  }
}

TEST_CASE("grid oracle: empty assignment and limits") {
  const ProblemInstance inst = random_point_mass_instance(2, 5, 2, 1, 3.0);
  const Assignment none(5, kUnassigned);
  CHECK(oracle::grid_power_oracle(inst, none, 10).utility == 0.0);
  CHECK_THROWS_AS(oracle::grid_power_oracle(inst, Assignment(5, 0), 10), std::invalid_argument);
  CHECK_THROWS_AS(oracle::grid_power_oracle(inst, none, 2001), std::invalid_argument);
  CHECK_THROWS_AS(oracle::grid_power_oracle(inst, none, 0), std::invalid_argument);
}

TEST_CASE("grid oracle: symmetric pair splits evenly") {
  const ProblemInstance inst = point_mass_instance({{1.0}, {1.0}}, McsTable(1, 1, {{1.0, 0.5, 2.0}}),
                                                   UtilitySpec::goodput(), 2.0);
  const oracle::GridResult g = oracle::grid_power_oracle(inst, {0, 0}, 200);
  CHECK(std::abs(g.powers[0] - g.powers[1]) <= 2 * g.step + 1e-12);
  CHECK(g.powers[0] + g.powers[1] <= 2.0 + 1e-12);
}

TEST_CASE("exhaustive Lagrangian minimum: above the top price nothing is allocated") {
  const ProblemInstance inst = random_point_mass_instance(9, 2, 2, 2, 4.0);
  const double mu = mu_bounds(inst).hi * 1.5;
  const oracle::LagrangianMinResult r = oracle::exhaustive_lagrangian_min(inst, mu);
  CHECK(r.assignment == Assignment{kUnassigned, kUnassigned});
  CHECK(r.value == doctest::Approx(-mu * 4.0));
  // Every assignment spends zero power there, so all of them tie.
  CHECK(r.minimizers == hypothesis_count(inst));
}

TEST_CASE("exhaustive Lagrangian minimum: symmetric users tie") {
  const ProblemInstance inst = point_mass_instance({{1.0, 1.0}}, McsTable::qam(2, 1), UtilitySpec::goodput(), 2.0);
  const oracle::LagrangianMinResult r = oracle::exhaustive_lagrangian_min(inst, 0.2);
  CHECK(r.minimizers == 2);
}

TEST_CASE("exhaustive Lagrangian minimum matches the dual-core allocation") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const ProblemInstance inst = random_point_mass_instance(seed, 2, 2, 2, 4.0);
    const MuBounds b = mu_bounds(inst);
    for (double t : {0.1, 0.4, 0.8}) {
      const double mu = b.lo + t * (b.hi - b.lo);
      const oracle::LagrangianMinResult r = oracle::exhaustive_lagrangian_min(inst, mu);
      const AllocationState a = allocation_at_mu(inst, mu, TieRule::MinPower);
      CHECK(lagrangian(inst, a, mu) == doctest::Approx(r.value).epsilon(1e-8));
    }
  }
}

TEST_CASE("dual function: single combination closed form") {
  // min_mu mu + max(0, max_p 2(1 - e^{-p/2}) - mu p) is attained at mu = e^{-1/2}.
  const ProblemInstance inst = single_combination(1.0);
  CHECK(oracle::csra_optimum(inst) == doctest::Approx(2.0 * (1.0 - std::exp(-0.5))).epsilon(1e-7));
  const double mu = 0.3;
  const double p = 2.0 * std::log(1.0 / mu);
  CHECK(oracle::dual_function_value(inst, mu) == doctest::Approx(mu + 2.0 * (1.0 - std::exp(-p / 2)) - mu * p).epsilon(1e-9));
}

TEST_CASE("exhaustive grid DSRA bounds the brute-force solver from below") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const ProblemInstance inst = random_point_mass_instance(seed, 2, 2, 1, 3.0);
    const oracle::GridDsraResult g = oracle::exhaustive_grid_dsra(inst, 300);
    const DsraResult bf = brute_force_dsra(inst, 1e-10);
    CHECK(g.hypotheses == 9);
    CHECK(g.grid.utility <= bf.utility + 1e-9);
    CHECK(g.grid.utility >= bf.utility - 2 * g.grid.resolution);
  }
}

}  // TEST_SUITE
