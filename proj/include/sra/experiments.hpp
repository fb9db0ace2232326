#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sra/dual_core.hpp"
#include "sra/scenario_config.hpp"

namespace sra {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One row of trials.csv.
struct TrialRecord {
  SweepVariable sweep_var = SweepVariable::PilotSnrDb;
  double sweep_value = 0.0;
  int sweep_index = 0;
  int trial = 0;
  Scheme scheme = Scheme::CsraIcsi;
  double goodput_per_subchannel = 0.0;
  double utility = 0.0;
  /// Unset for schemes without a certificate.
  std::optional<double> gap_bound_per_subchannel;
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  int iters = 0;
  double runtime_ms = 0.0;
};

/// Per (sweep value, scheme) aggregate; one row of summary.csv.
struct SummaryRow {
  SweepVariable sweep_var = SweepVariable::PilotSnrDb;
  double sweep_value = 0.0;
  Scheme scheme = Scheme::CsraIcsi;
  int n_trials = 0;
  double goodput_mean = 0.0;
  double goodput_se = 0.0;
  double utility_mean = 0.0;
  double utility_se = 0.0;
  /// NaN when no trial reported a bound.
  double gap_bound_mean = 0.0;
  double runtime_ms_mean = 0.0;
};

struct ScenarioResult {
  std::vector<TrialRecord> records;  // ordered by sweep index, trial, scheme
  std::vector<SummaryRow> summary;
};

struct TrialInstances {
  ProblemInstance icsi;  // conditional SNR distributions given the pilots
  ProblemInstance pcsi;  // point masses at the realized SNRs
};

/// Root seed of one (sweep index, trial index) unit.
std::uint64_t trial_seed(std::uint64_t root, int sweep_index, int trial_index);

/// Channel draw, pilot estimation, and both instances for one trial of a
/// configuration already specialized to its sweep value.
TrialInstances build_trial_instances(const ScenarioConfig& cfg, std::uint64_t seed);

/// All selected schemes on one trial.
std::vector<TrialRecord> run_trial(const ScenarioConfig& cfg, int sweep_index, int trial_index);

/// Runs every (sweep value, trial) unit on `threads` workers (0 = hardware
/// concurrency). Output does not depend on the thread count apart from runtimes.
ScenarioResult run_scenario(const ScenarioConfig& cfg, unsigned threads = 0);

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(const std::string& text);

/// Writes trials.csv, summary.csv and manifest.json into `dir`, creating it if needed.
void write_outputs(const std::filesystem::path& dir, const ScenarioConfig& cfg, const ScenarioResult& result);

std::string trials_csv(const std::vector<TrialRecord>& records);
std::string summary_csv(const std::vector<SummaryRow>& rows);
std::string manifest_json(const ScenarioConfig& cfg, const ScenarioResult& result);

/// Library version string.
const char* library_version();

}  // namespace sra
