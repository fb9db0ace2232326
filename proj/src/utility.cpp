#include "sra/utility.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sra {

McsTable::McsTable(int users, int levels, std::vector<Mcs> entries)
    : users_(users), levels_(levels), entries_(std::move(entries)) {
  if (users <= 0 || levels <= 0) throw std::invalid_argument("McsTable: dimensions must be positive");
  if (entries_.size() != static_cast<std::size_t>(users) * levels) {
    throw std::invalid_argument("McsTable: expected users*levels entries");
  }
  for (const Mcs& e : entries_) {
    if (!(e.a > 0.0 && e.a <= 1.0)) throw std::invalid_argument("McsTable: a must lie in (0, 1]");
    if (!(e.b > 0.0) || !std::isfinite(e.b)) throw std::invalid_argument("McsTable: b must be > 0");
    if (!(e.r > 0.0) || !std::isfinite(e.r)) throw std::invalid_argument("McsTable: r must be > 0");
  }
}

McsTable McsTable::qam(int users, int levels) {
  if (levels < 1 || levels > 15) throw std::invalid_argument("McsTable::qam: levels must be 1..15");
  std::vector<Mcs> entries;
  entries.reserve(static_cast<std::size_t>(users) * levels);
  for (int k = 0; k < users; ++k) {
    for (int m = 1; m <= levels; ++m) {
      entries.push_back({1.0, 1.5 / (std::ldexp(1.0, m + 1) - 1.0), static_cast<double>(m + 1)});
    }
  }
  return McsTable(users, levels, std::move(entries));
}

McsTable McsTable::capacity(int users) {
  return McsTable(users, 1, std::vector<Mcs>(static_cast<std::size_t>(users), Mcs{1.0, 1.0, 1.0}));
}

// ---------------------------------------------------------------------------

UtilitySpec::UtilitySpec(UtilityKind kind, std::vector<double> weights, double scale)
    : kind_(kind), weights_(std::move(weights)), scale_(scale) {
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("utility weights must be > 0");
  }
  if (!(scale_ > 0.0) || !std::isfinite(scale_)) throw std::invalid_argument("utility scale must be > 0");
}

UtilitySpec UtilitySpec::goodput() { return {UtilityKind::Goodput, {}, 1.0}; }

UtilitySpec UtilitySpec::weighted_goodput(std::vector<double> weights) {
  return {UtilityKind::WeightedGoodput, std::move(weights), 1.0};
}

UtilitySpec UtilitySpec::exp_pricing(std::vector<double> weights) {
  return {UtilityKind::ExpPricing, std::move(weights), 1.0};
}

UtilitySpec UtilitySpec::capacity_log(double scale) { return {UtilityKind::CapacityLog, {}, scale}; }

double UtilitySpec::weight(int user) const {
  if (kind_ == UtilityKind::Goodput || kind_ == UtilityKind::CapacityLog) return 1.0;
  return weights_.at(static_cast<std::size_t>(user));
}

double UtilitySpec::value(int user, double g) const {
  switch (kind_) {
    case UtilityKind::Goodput:
      return g;
    case UtilityKind::WeightedGoodput:
      return weight(user) * g;
    case UtilityKind::ExpPricing:
      return -std::expm1(-weight(user) * g);
    case UtilityKind::CapacityLog:
      if (!(g < 1.0)) throw std::domain_error("CapacityLog utility requires g < 1");
      return scale_ * std::log(1.0 - std::log1p(-g));
  }
  return 0.0;
}

double UtilitySpec::derivative(int user, double g) const {
  switch (kind_) {
    case UtilityKind::Goodput:
      return 1.0;
    case UtilityKind::WeightedGoodput:
      return weight(user);
    case UtilityKind::ExpPricing:
      return weight(user) * std::exp(-weight(user) * g);
    case UtilityKind::CapacityLog:
      if (!(g < 1.0)) throw std::domain_error("CapacityLog utility requires g < 1");
      return scale_ / ((1.0 - std::log1p(-g)) * (1.0 - g));
  }
  return 0.0;
}

namespace {

// log(1 - g) for g = (1 - a e^{-b p gamma}) r with r <= 1.
double log_one_minus_goodput(double p, double gamma, const Mcs& mcs) {
  if (mcs.r == 1.0) return std::log(mcs.a) - mcs.b * p * gamma;
  return std::log((1.0 - mcs.r) + mcs.r * mcs.a * std::exp(-mcs.b * p * gamma));
}

}  // namespace

double UtilitySpec::at_power(int user, double p, double gamma, const Mcs& mcs) const {
  if (kind_ == UtilityKind::CapacityLog) {
    return scale_ * std::log(1.0 - log_one_minus_goodput(p, gamma, mcs));
  }
  return value(user, sra::goodput(p, gamma, mcs));
}

double UtilitySpec::slope_at_power(int user, double p, double gamma, const Mcs& mcs) const {
  const double decay = std::exp(-mcs.b * p * gamma);
  const double dg = mcs.r * mcs.a * mcs.b * gamma * decay;
  if (kind_ == UtilityKind::CapacityLog) {
    const double log_rest = log_one_minus_goodput(p, gamma, mcs);
    if (mcs.r == 1.0) {
      // (1 - g) = a decay cancels against dg.
      return scale_ * mcs.b * gamma / (1.0 - log_rest);
    }
    return scale_ * dg / ((1.0 - log_rest) * std::exp(log_rest));
  }
  return derivative(user, sra::goodput(p, gamma, mcs)) * dg;
}

void UtilitySpec::check_compatible(const McsTable& table) const {
  if (kind_ == UtilityKind::WeightedGoodput || kind_ == UtilityKind::ExpPricing) {
    if (weights_.size() != static_cast<std::size_t>(table.users())) {
      throw std::invalid_argument("utility: expected " + std::to_string(table.users()) +
                                  " user weights, got " + std::to_string(weights_.size()));
    }
  }
  if (kind_ == UtilityKind::CapacityLog) {
    for (int k = 0; k < table.users(); ++k) {
      for (int m = 0; m < table.levels(); ++m) {
        if (table(k, m).r > 1.0) {
          throw std::invalid_argument("utility: CapacityLog needs r <= 1 so that goodput stays below 1");
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------

double goodput(double p, double gamma, const Mcs& mcs) {
  return (1.0 - mcs.a * std::exp(-mcs.b * p * gamma)) * mcs.r;
}

double expected_goodput(const SnrDistribution& dist, double p, const Mcs& mcs) {
  return dist.expect([&](double gamma) { return goodput(p, gamma, mcs); });
}

double expected_utility(const SnrDistribution& dist, double p, const Mcs& mcs,
                        const UtilitySpec& u, int user) {
  return dist.expect([&](double gamma) { return u.at_power(user, p, gamma, mcs); });
}

double marginal_value(const SnrDistribution& dist, double p, const Mcs& mcs,
                      const UtilitySpec& u, int user) {
  return dist.expect([&](double gamma) { return u.slope_at_power(user, p, gamma, mcs); });
}

}  // namespace sra
