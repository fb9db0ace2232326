#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sra/snr_model.hpp"
#include "sra/utility.hpp"

namespace sra {

/// Invalid scenario configuration; `path()` names the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class Scheme { CsraPcsi, CsraIcsi, DsraIcsi, FpRus, SubgradIcsi };

const char* scheme_name(Scheme s);
/// Accepts the canonical upper-case names; throws ConfigError otherwise.
Scheme parse_scheme(const std::string& name, const std::string& path);
std::vector<Scheme> all_schemes();

enum class McsPreset { Qam, Capacity };

struct McsConfig {
  McsPreset preset = McsPreset::Qam;
  int levels = 4;  // ignored for Capacity
};

struct UtilityConfig {
  UtilityKind kind = UtilityKind::Goodput;
  /// Per-user weights, one per user.
  std::vector<double> weights;
  /// Alternative to `weights`: one weight per user class, users split into
  /// contiguous classes of near-equal size.
  std::vector<double> class_weights;
  double scale = 1.0;
};

enum class SweepVariable { PilotSnrDb, NUsers, SnrDb, WeightW1 };

const char* sweep_name(SweepVariable v);

struct SweepConfig {
  SweepVariable variable = SweepVariable::PilotSnrDb;
  std::vector<double> values{-10.0};
};

struct SubgradientConfig {
  int n_updates = 30;
  double scale = 1.0;
};

struct ScenarioConfig {
  ChannelConfig channel = desk_channel();
  McsConfig mcs;
  UtilityConfig utility;
  SweepConfig sweep;
  int n_trials = 50;
  std::uint64_t seed = 1;
  /// Absolute bracket width; unset means 0.3 / P_con per instance.
  std::optional<double> kappa;
  int n_atoms = 32;
  std::vector<Scheme> schemes = all_schemes();
  SubgradientConfig subgradient;

  static ChannelConfig desk_channel();

  /// Throws ConfigError.
  void validate() const;

  /// Configuration with the sweep variable set to `value`.
  ScenarioConfig at_sweep_value(double value) const;

  McsTable mcs_table() const;
  UtilitySpec utility_spec() const;
};

/// Parses JSON text. Missing keys take defaults; unknown keys are rejected.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::string& path);

/// Canonical JSON form (sorted keys, defaults filled in).
std::string to_json(const ScenarioConfig& cfg);

}  // namespace sra
