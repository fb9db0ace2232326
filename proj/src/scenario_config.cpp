#include "sra/scenario_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sra {

using nlohmann::json;

namespace {

struct Named {
  const char* name;
  int value;
};

constexpr Named kSchemes[] = {
    {"CSRA-PCSI", static_cast<int>(Scheme::CsraPcsi)},
    {"CSRA-ICSI", static_cast<int>(Scheme::CsraIcsi)},
    {"DSRA-ICSI", static_cast<int>(Scheme::DsraIcsi)},
    {"FP-RUS", static_cast<int>(Scheme::FpRus)},
    {"SUBGRAD-ICSI", static_cast<int>(Scheme::SubgradIcsi)},
};

constexpr Named kSweeps[] = {
    {"pilot_snr_db", static_cast<int>(SweepVariable::PilotSnrDb)},
    {"n_users", static_cast<int>(SweepVariable::NUsers)},
    {"snr_db", static_cast<int>(SweepVariable::SnrDb)},
    {"weight_w1", static_cast<int>(SweepVariable::WeightW1)},
};

constexpr Named kUtilities[] = {
    {"goodput", static_cast<int>(UtilityKind::Goodput)},
    {"weighted_goodput", static_cast<int>(UtilityKind::WeightedGoodput)},
    {"exp_pricing", static_cast<int>(UtilityKind::ExpPricing)},
    {"capacity_log", static_cast<int>(UtilityKind::CapacityLog)},
};

constexpr Named kPresets[] = {
    {"qam", static_cast<int>(McsPreset::Qam)},
    {"capacity", static_cast<int>(McsPreset::Capacity)},
};

template <std::size_t N>
const char* name_of(const Named (&table)[N], int value) {
  for (const Named& e : table) {
    if (e.value == value) return e.name;
  }
  return "?";
}

template <std::size_t N>
int value_of(const Named (&table)[N], const std::string& name, const std::string& path) {
  for (const Named& e : table) {
    if (name == e.name) return e.value;
  }
  std::string allowed;
  for (const Named& e : table) allowed += std::string(allowed.empty() ? "" : ", ") + e.name;
  throw ConfigError(path, "unknown value '" + name + "' (expected one of " + allowed + ")");
}

std::string child(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void require_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError(child(path, key), "unknown key");
    }
  }
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<int>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> get_numbers(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

void parse_channel(const json& j, const std::string& path, ChannelConfig& c) {
  require_object(j, path, {"n_subchannels", "n_users", "tap_count", "tap_variance", "snr_db", "pilot_snr_db"});
  if (j.contains("n_subchannels")) c.n_subchannels = get_int(j["n_subchannels"], child(path, "n_subchannels"));
  if (j.contains("n_users")) c.n_users = get_int(j["n_users"], child(path, "n_users"));
  if (j.contains("tap_count")) c.tap_count = get_int(j["tap_count"], child(path, "tap_count"));
  if (j.contains("tap_variance") && !j["tap_variance"].is_null()) {
    c.tap_variance = get_number(j["tap_variance"], child(path, "tap_variance"));
  }
  if (j.contains("snr_db")) c.snr_db = get_number(j["snr_db"], child(path, "snr_db"));
  if (j.contains("pilot_snr_db")) c.pilot_snr_db = get_number(j["pilot_snr_db"], child(path, "pilot_snr_db"));
}

void parse_mcs(const json& j, const std::string& path, McsConfig& m) {
  require_object(j, path, {"preset", "levels"});
  if (j.contains("preset")) {
    m.preset = static_cast<McsPreset>(value_of(kPresets, get_string(j["preset"], child(path, "preset")),
                                               child(path, "preset")));
  }
  if (j.contains("levels")) m.levels = get_int(j["levels"], child(path, "levels"));
}

void parse_utility(const json& j, const std::string& path, UtilityConfig& u) {
  require_object(j, path, {"kind", "weights", "class_weights", "scale"});
  if (j.contains("kind")) {
    u.kind = static_cast<UtilityKind>(value_of(kUtilities, get_string(j["kind"], child(path, "kind")),
                                               child(path, "kind")));
  }
  if (j.contains("weights")) u.weights = get_numbers(j["weights"], child(path, "weights"));
  if (j.contains("class_weights")) u.class_weights = get_numbers(j["class_weights"], child(path, "class_weights"));
  if (j.contains("scale")) u.scale = get_number(j["scale"], child(path, "scale"));
}

void parse_sweep(const json& j, const std::string& path, SweepConfig& s) {
  require_object(j, path, {"variable", "values"});
  if (j.contains("variable")) {
    s.variable = static_cast<SweepVariable>(
        value_of(kSweeps, get_string(j["variable"], child(path, "variable")), child(path, "variable")));
  }
  if (j.contains("values")) s.values = get_numbers(j["values"], child(path, "values"));
}

void parse_subgradient(const json& j, const std::string& path, SubgradientConfig& s) {
  require_object(j, path, {"n_updates", "scale"});
  if (j.contains("n_updates")) s.n_updates = get_int(j["n_updates"], child(path, "n_updates"));
  if (j.contains("scale")) s.scale = get_number(j["scale"], child(path, "scale"));
}

std::vector<double> per_user_weights(const UtilityConfig& u, int users) {
  if (!u.weights.empty()) return u.weights;
  std::vector<double> out(users);
  const int classes = static_cast<int>(u.class_weights.size());
  for (int k = 0; k < users; ++k) out[k] = u.class_weights[static_cast<std::size_t>(k) * classes / users];
  return out;
}

bool weighted(UtilityKind kind) { return kind == UtilityKind::WeightedGoodput || kind == UtilityKind::ExpPricing; }

}  // namespace

const char* scheme_name(Scheme s) { return name_of(kSchemes, static_cast<int>(s)); }

Scheme parse_scheme(const std::string& name, const std::string& path) {
  return static_cast<Scheme>(value_of(kSchemes, name, path));
}

std::vector<Scheme> all_schemes() {
  return {Scheme::CsraPcsi, Scheme::CsraIcsi, Scheme::DsraIcsi, Scheme::FpRus, Scheme::SubgradIcsi};
}

const char* sweep_name(SweepVariable v) { return name_of(kSweeps, static_cast<int>(v)); }

ChannelConfig ScenarioConfig::desk_channel() {
  ChannelConfig c;
  c.n_subchannels = 16;
  c.n_users = 4;
  return c;
}

ScenarioConfig ScenarioConfig::at_sweep_value(double value) const {
  ScenarioConfig out = *this;
  switch (sweep.variable) {
    case SweepVariable::PilotSnrDb:
      out.channel.pilot_snr_db = value;
      break;
    case SweepVariable::SnrDb:
      out.channel.snr_db = value;
      break;
    case SweepVariable::NUsers:
      out.channel.n_users = static_cast<int>(value);
      break;
    case SweepVariable::WeightW1:
      if (!out.utility.class_weights.empty()) out.utility.class_weights[0] = value;
      break;
  }
  return out;
}

void ScenarioConfig::validate() const {
  if (n_trials < 1) throw ConfigError("n_trials", "must be >= 1");
  if (n_atoms < 1) throw ConfigError("n_atoms", "must be >= 1");
  if (kappa && !(*kappa > 0.0)) throw ConfigError("kappa", "must be positive");
  if (schemes.empty()) throw ConfigError("schemes", "must list at least one scheme");
  if (sweep.values.empty()) throw ConfigError("sweep.values", "must not be empty");
  if (subgradient.n_updates < 1) throw ConfigError("subgradient.n_updates", "must be >= 1");
  if (!(subgradient.scale > 0.0)) throw ConfigError("subgradient.scale", "must be positive");
  if (mcs.preset == McsPreset::Qam && (mcs.levels < 1 || mcs.levels > 15)) {
    throw ConfigError("mcs.levels", "must be in 1..15");
  }
  if (mcs.preset == McsPreset::Capacity && utility.kind != UtilityKind::CapacityLog) {
    throw ConfigError("utility.kind", "the capacity MCS preset requires capacity_log");
  }
  if (utility.kind == UtilityKind::CapacityLog && mcs.preset != McsPreset::Capacity) {
    throw ConfigError("utility.kind", "capacity_log requires the capacity MCS preset");
  }
  if (!(utility.scale > 0.0)) throw ConfigError("utility.scale", "must be positive");
  if (weighted(utility.kind)) {
    if (utility.weights.empty() == utility.class_weights.empty()) {
      throw ConfigError("utility.weights", "give exactly one of weights or class_weights");
    }
    for (double w : utility.weights) {
      if (!(w > 0.0)) throw ConfigError("utility.weights", "must be positive");
    }
    for (double w : utility.class_weights) {
      if (!(w > 0.0)) throw ConfigError("utility.class_weights", "must be positive");
    }
  }
  if (sweep.variable == SweepVariable::WeightW1 && (!weighted(utility.kind) || utility.class_weights.empty())) {
    throw ConfigError("sweep.variable", "weight_w1 requires a weighted utility with class_weights");
  }

  for (std::size_t i = 0; i < sweep.values.size(); ++i) {
    const std::string at = "sweep.values[" + std::to_string(i) + "]";
    const double v = sweep.values[i];
    if (sweep.variable == SweepVariable::NUsers && (v < 1.0 || v != std::floor(v))) {
      throw ConfigError(at, "n_users must be a positive integer");
    }
    if (sweep.variable == SweepVariable::WeightW1 && !(v > 0.0)) throw ConfigError(at, "weight must be positive");
    const ScenarioConfig c = at_sweep_value(v);
    try {
      c.channel.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(at, e.what());
    }
    if (weighted(utility.kind) && !c.utility.weights.empty() &&
        c.utility.weights.size() != static_cast<std::size_t>(c.channel.n_users)) {
      throw ConfigError("utility.weights", "expected one weight per user (" + std::to_string(c.channel.n_users) + ")");
    }
  }
}

McsTable ScenarioConfig::mcs_table() const {
  return mcs.preset == McsPreset::Qam ? McsTable::qam(channel.n_users, mcs.levels)
                                      : McsTable::capacity(channel.n_users);
}

UtilitySpec ScenarioConfig::utility_spec() const {
  switch (utility.kind) {
    case UtilityKind::Goodput:
      return UtilitySpec::goodput();
    case UtilityKind::WeightedGoodput:
      return UtilitySpec::weighted_goodput(per_user_weights(utility, channel.n_users));
    case UtilityKind::ExpPricing:
      return UtilitySpec::exp_pricing(per_user_weights(utility, channel.n_users));
    case UtilityKind::CapacityLog:
      return UtilitySpec::capacity_log(utility.scale);
  }
  return UtilitySpec::goodput();
}

ScenarioConfig parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
  require_object(j, "", {"channel", "mcs", "utility", "sweep", "n_trials", "seed", "kappa", "n_atoms", "schemes",
                         "subgradient"});
  ScenarioConfig cfg;
  if (j.contains("channel")) parse_channel(j["channel"], "channel", cfg.channel);
  if (j.contains("mcs")) parse_mcs(j["mcs"], "mcs", cfg.mcs);
  if (j.contains("utility")) parse_utility(j["utility"], "utility", cfg.utility);
  if (j.contains("sweep")) parse_sweep(j["sweep"], "sweep", cfg.sweep);
  if (j.contains("n_trials")) cfg.n_trials = get_int(j["n_trials"], "n_trials");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("seed", "expected a non-negative integer");
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("kappa") && !j["kappa"].is_null()) cfg.kappa = get_number(j["kappa"], "kappa");
  if (j.contains("n_atoms")) cfg.n_atoms = get_int(j["n_atoms"], "n_atoms");
  if (j.contains("schemes")) {
    const json& s = j["schemes"];
    if (!s.is_array()) throw ConfigError("schemes", "expected an array of scheme names");
    cfg.schemes.clear();
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string at = "schemes[" + std::to_string(i) + "]";
      cfg.schemes.push_back(parse_scheme(get_string(s[i], at), at));
    }
  }
  if (j.contains("subgradient")) parse_subgradient(j["subgradient"], "subgradient", cfg.subgradient);
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot read config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str());
}

std::string to_json(const ScenarioConfig& cfg) {
  json j;
  j["channel"] = {{"n_subchannels", cfg.channel.n_subchannels},
                  {"n_users", cfg.channel.n_users},
                  {"tap_count", cfg.channel.tap_count},
                  {"tap_variance", cfg.channel.tap_variance ? json(*cfg.channel.tap_variance) : json(nullptr)},
                  {"snr_db", cfg.channel.snr_db},
                  {"pilot_snr_db", cfg.channel.pilot_snr_db}};
  j["mcs"] = {{"preset", name_of(kPresets, static_cast<int>(cfg.mcs.preset))}, {"levels", cfg.mcs.levels}};
  j["utility"] = {{"kind", name_of(kUtilities, static_cast<int>(cfg.utility.kind))},
                  {"weights", cfg.utility.weights},
                  {"class_weights", cfg.utility.class_weights},
                  {"scale", cfg.utility.scale}};
  j["sweep"] = {{"variable", sweep_name(cfg.sweep.variable)}, {"values", cfg.sweep.values}};
  j["n_trials"] = cfg.n_trials;
  j["seed"] = cfg.seed;
  j["kappa"] = cfg.kappa ? json(*cfg.kappa) : json(nullptr);
  j["n_atoms"] = cfg.n_atoms;
  std::vector<std::string> names;
  for (Scheme s : cfg.schemes) names.emplace_back(scheme_name(s));
  j["schemes"] = names;
  j["subgradient"] = {{"n_updates", cfg.subgradient.n_updates}, {"scale", cfg.subgradient.scale}};
  return j.dump(2);
}

}  // namespace sra
