#pragma once

#include <span>
#include <vector>

#include "sra/snr_model.hpp"

namespace sra {

/// One modulation-and-coding scheme: error probability a*exp(-b*p*gamma), rate r.
struct Mcs {
  double a = 1.0;
  double b = 1.0;
  double r = 1.0;
};

class McsTable {
 public:
  McsTable(int users, int levels, std::vector<Mcs> entries);

  /// Uncoded 2^(m+1)-QAM, m = 1..levels: a = 1, b = 1.5/(2^(m+1)-1), r = m+1.
  static McsTable qam(int users, int levels);
  /// Single MCS with a = b = r = 1, paired with CapacityLog utilities.
  static McsTable capacity(int users);

  int users() const { return users_; }
  int levels() const { return levels_; }
  const Mcs& operator()(int user, int level) const { return entries_[user * levels_ + level]; }

 private:
  int users_;
  int levels_;
  std::vector<Mcs> entries_;
};

enum class UtilityKind { Goodput, WeightedGoodput, ExpPricing, CapacityLog };

/// Closed family of concave, strictly increasing utilities of goodput.
///
///   Goodput          u(g) = g
///   WeightedGoodput  u(g) = w_k g
///   ExpPricing       u(g) = 1 - exp(-w_k g)
///   CapacityLog      u(g) = scale * log(1 - log(1 - g)),  g in [0, 1)
class UtilitySpec {
 public:
  static UtilitySpec goodput();
  static UtilitySpec weighted_goodput(std::vector<double> weights);
  static UtilitySpec exp_pricing(std::vector<double> weights);
  static UtilitySpec capacity_log(double scale);

  UtilityKind kind() const { return kind_; }
  std::span<const double> weights() const { return weights_; }
  double scale() const { return scale_; }
  double weight(int user) const;

  double value(int user, double g) const;
  double derivative(int user, double g) const;

  /// u(goodput(p, gamma, mcs)). Evaluated without forming 1 - g for CapacityLog.
  double at_power(int user, double p, double gamma, const Mcs& mcs) const;
  /// d/dp of at_power.
  double slope_at_power(int user, double p, double gamma, const Mcs& mcs) const;

  /// Throws std::invalid_argument if this utility cannot be used with `table`.
  void check_compatible(const McsTable& table) const;

 private:
  UtilitySpec(UtilityKind kind, std::vector<double> weights, double scale);

  UtilityKind kind_;
  std::vector<double> weights_;
  double scale_;
};

/// Expected error-free bits per codeword: (1 - a exp(-b p gamma)) r.
double goodput(double p, double gamma, const Mcs& mcs);

double expected_goodput(const SnrDistribution& dist, double p, const Mcs& mcs);

double expected_utility(const SnrDistribution& dist, double p, const Mcs& mcs,
                        const UtilitySpec& u, int user);

/// a b r E{ u'(g) gamma exp(-b p gamma) }, the derivative of expected_utility in p.
double marginal_value(const SnrDistribution& dist, double p, const Mcs& mcs,
                      const UtilitySpec& u, int user);

}  // namespace sra
