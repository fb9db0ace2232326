#include "sra/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sra::oracle {

namespace {

int user_of(const ProblemInstance& inst, int combo) { return combo / inst.m(); }
int level_of(const ProblemInstance& inst, int combo) { return combo % inst.m(); }

void require_cap(const ProblemInstance& inst, std::size_t cap, const char* who) {
  const std::size_t count = hypothesis_count(inst);
  if (count > cap) {
    throw std::length_error(std::string(who) + ": " + std::to_string(count) +
                            " hypotheses exceed the cap of " + std::to_string(cap));
  }
}

// Maximizer of a unimodal function on [a, b].
template <class F>
double golden_max(F&& f, double a, double b) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < 300 && (b - a) > 1e-15 * std::max(1.0, std::abs(b)); ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// max_p E{U(p)} - mu p for one combination.
double conjugate(const ProblemInstance& inst, int n, int k, int m, double mu) {
  const auto g = [&](double p) { return inst.expected_utility(n, k, m, p) - mu * p; };
  double h = 1.0;
  while (g(2.0 * h) > g(h)) {
    h *= 2.0;
    if (h > 1e300) throw std::runtime_error("conjugate: objective unbounded");
  }
  const double p = golden_max(g, 0.0, 2.0 * h);
  return std::max(g(p), g(0.0));
}

}  // namespace

GridResult grid_power_oracle(const ProblemInstance& inst, const Assignment& assignment, int grid_points) {
  if (grid_points < 1 || grid_points > 2000) throw std::invalid_argument("grid_power_oracle: grid_points must be 1..2000");
  if (assignment.size() != static_cast<std::size_t>(inst.n())) {
    throw std::invalid_argument("grid_power_oracle: expected one entry per subchannel");
  }
  std::vector<int> active;
  for (int n = 0; n < inst.n(); ++n) {
    if (assignment[n] != kUnassigned) active.push_back(n);
  }
  if (active.size() > 4) throw std::invalid_argument("grid_power_oracle: more than 4 active subchannels");

  GridResult out;
  out.step = inst.p_con() / grid_points;
  out.powers.assign(inst.n(), 0.0);
  const std::size_t d = active.size();
  if (d == 0) return out;

  std::vector<std::vector<double>> table(d, std::vector<double>(grid_points + 1));
  for (std::size_t j = 0; j < d; ++j) {
    const int n = active[j];
    const int c = assignment[n];
    for (int i = 0; i <= grid_points; ++i) {
      table[j][i] = inst.expected_utility(n, user_of(inst, c), level_of(inst, c), i * out.step);
    }
    out.resolution = std::max(out.resolution, table[j][1] - table[j][0]);
  }

  std::vector<int> idx(d, 0);
  std::vector<int> best_idx(d, 0);
  double best = -std::numeric_limits<double>::infinity();
  // Odometer over all index tuples with sum <= grid_points.
  const auto recurse = [&](auto&& self, std::size_t j, int remaining, double partial) -> void {
    if (j == d) {
      if (partial > best) {
        best = partial;
        best_idx = idx;
      }
      return;
    }
    for (int i = 0; i <= remaining; ++i) {
      idx[j] = i;
      self(self, j + 1, remaining - i, partial + table[j][i]);
    }
  };
  recurse(recurse, 0, grid_points, 0.0);

  out.utility = best;
  for (std::size_t j = 0; j < d; ++j) out.powers[active[j]] = best_idx[j] * out.step;
  return out;
}

GridDsraResult exhaustive_grid_dsra(const ProblemInstance& inst, int grid_points, std::size_t cap) {
  require_cap(inst, cap, "exhaustive_grid_dsra");
  GridDsraResult out;
  bool first = true;
  for_each_assignment(inst.n(), inst.km(), [&](const Assignment& a) {
    ++out.hypotheses;
    GridResult g = grid_power_oracle(inst, a, grid_points);
    if (first || g.utility > out.grid.utility) {
      out.best = a;
      out.grid = std::move(g);
      first = false;
    }
  });
  return out;
}

LagrangianMinResult exhaustive_lagrangian_min(const ProblemInstance& inst, double mu, std::size_t cap) {
  require_cap(inst, cap, "exhaustive_lagrangian_min");
  std::vector<Assignment> all;
  std::vector<double> values;
  for_each_assignment(inst.n(), inst.km(), [&](const Assignment& a) {
    double total = -mu * inst.p_con();
    for (int n = 0; n < inst.n(); ++n) {
      if (a[n] == kUnassigned) continue;
      const int k = user_of(inst, a[n]);
      const int m = level_of(inst, a[n]);
      const double p = inst.power_root(n, k, m, mu);
      total += -inst.expected_utility(n, k, m, p) + mu * p;
    }
    all.push_back(a);
    values.push_back(total);
  });

  const auto it = std::min_element(values.begin(), values.end());
  LagrangianMinResult out;
  out.value = *it;
  out.assignment = all[static_cast<std::size_t>(it - values.begin())];
  const double tol = 1e-9 * std::max(1.0, std::abs(out.value));
  out.minimizers = static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [&](double v) { return v <= out.value + tol; }));

  std::vector<double> powers(inst.n(), 0.0);
  for (int n = 0; n < inst.n(); ++n) {
    const int c = out.assignment[n];
    if (c != kUnassigned) powers[n] = inst.power_root(n, user_of(inst, c), level_of(inst, c), mu);
  }
  out.alloc = AllocationState::from_assignment(inst, out.assignment, powers);
  return out;
}

double dual_function_value(const ProblemInstance& inst, double mu) {
  double total = mu * inst.p_con();
  for (int n = 0; n < inst.n(); ++n) {
    double best = 0.0;
    for (int k = 0; k < inst.k(); ++k) {
      for (int m = 0; m < inst.m(); ++m) best = std::max(best, conjugate(inst, n, k, m, mu));
    }
    total += best;
  }
  return total;
}

double csra_optimum(const ProblemInstance& inst) {
  double top = 0.0;
  for (int n = 0; n < inst.n(); ++n) {
    for (int k = 0; k < inst.k(); ++k) {
      for (int m = 0; m < inst.m(); ++m) top = std::max(top, inst.marginal_value(n, k, m, 0.0));
    }
  }
  if (!(top > 0.0)) return dual_function_value(inst, 0.0);
  const double mu = golden_max([&](double x) { return -dual_function_value(inst, x); }, 1e-12 * top, top);
  return dual_function_value(inst, mu);
}

}  // namespace sra::oracle
