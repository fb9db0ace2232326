#pragma once

// Instance builders shared by the unit and acceptance tests.

#include <cstdint>
#include <random>
#include <vector>

#include "sra/dual_core.hpp"

namespace sra::test {

/// Point-mass instance; gammas[n][k].
inline ProblemInstance point_mass_instance(const std::vector<std::vector<double>>& gammas, McsTable mcs,
                                           UtilitySpec u, double p_con) {
  std::vector<SnrDistribution> d;
  for (const auto& row : gammas) {
    for (double g : row) d.push_back(SnrDistribution::point_mass(g));
  }
  return ProblemInstance(std::move(mcs), std::move(u), static_cast<int>(gammas.size()), std::move(d), p_con);
}

/// The single-combination example: a = 1, b = 0.5, r = 2, gamma = 1.
inline ProblemInstance single_combination(double p_con) {
  return point_mass_instance({{1.0}}, McsTable(1, 1, {{1.0, 0.5, 2.0}}), UtilitySpec::goodput(), p_con);
}

/// N x K point masses drawn i.i.d. exponential(1), QAM levels 1..m.
inline ProblemInstance random_point_mass_instance(std::uint64_t seed, int n, int k, int m, double p_con,
                                                  UtilitySpec u = UtilitySpec::goodput()) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::vector<std::vector<double>> g(n, std::vector<double>(k));
  for (auto& row : g) {
    for (double& x : row) x = expo(rng);
  }
  return point_mass_instance(g, McsTable::qam(k, m), std::move(u), p_con);
}

/// Like random_point_mass_instance, but every SNR is a random atom set.
inline ProblemInstance random_atom_instance(std::uint64_t seed, int n, int k, int m, double p_con, int atoms,
                                            UtilitySpec u = UtilitySpec::goodput()) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unif(0.2, 1.0);
  std::vector<SnrDistribution> d;
  for (int i = 0; i < n * k; ++i) {
    std::vector<Atom> a(atoms);
    double total = 0.0;
    for (Atom& x : a) {
      x = {expo(rng), unif(rng)};
      total += x.weight;
    }
    for (Atom& x : a) x.weight /= total;
    d.emplace_back(std::move(a));
  }
  return ProblemInstance(McsTable::qam(k, m), std::move(u), n, std::move(d), p_con);
}

}  // namespace sra::test
