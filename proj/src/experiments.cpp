#include "sra/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "sra/baselines.hpp"
#include "sra/csra.hpp"
#include "sra/dsra.hpp"
#include "sra/seed.hpp"

#ifndef SRA_VERSION
#define SRA_VERSION "unknown"
#endif

namespace sra {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool selected(const ScenarioConfig& cfg, Scheme s) {
  for (Scheme x : cfg.schemes) {
    if (x == s) return true;
  }
  return false;
}

}  // namespace

const char* library_version() { return SRA_VERSION; }

std::uint64_t trial_seed(std::uint64_t root, int sweep_index, int trial_index) {
  return derive_seed(root, {static_cast<std::uint64_t>(sweep_index), static_cast<std::uint64_t>(trial_index)});
}

TrialInstances build_trial_instances(const ScenarioConfig& cfg, std::uint64_t seed) {
  const ChannelConfig& ch = cfg.channel;
  const ChannelRealization real = draw_channel(ch, derive_seed(seed, SeedStream::Channel));
  const EstimateState est = mmse_estimate(ch, real, derive_seed(seed, SeedStream::PilotNoise));

  std::vector<SnrDistribution> icsi;
  std::vector<SnrDistribution> pcsi;
  icsi.reserve(static_cast<std::size_t>(ch.n_subchannels) * ch.n_users);
  pcsi.reserve(icsi.capacity());
  for (int n = 0; n < ch.n_subchannels; ++n) {
    for (int k = 0; k < ch.n_users; ++k) {
      icsi.push_back(conditional_snr_dist(est.mean(n, k), est.est_error_var, cfg.n_atoms));
      pcsi.push_back(SnrDistribution::point_mass(real.true_snr(n, k)));
    }
  }
  const double budget = ch.total_power();
  return {ProblemInstance(cfg.mcs_table(), cfg.utility_spec(), ch.n_subchannels, std::move(icsi), budget),
          ProblemInstance(cfg.mcs_table(), cfg.utility_spec(), ch.n_subchannels, std::move(pcsi), budget)};
}

std::vector<TrialRecord> run_trial(const ScenarioConfig& base, int sweep_index, int trial_index) {
  const double value = base.sweep.values.at(static_cast<std::size_t>(sweep_index));
  const ScenarioConfig cfg = base.at_sweep_value(value);
  const std::uint64_t seed = trial_seed(base.seed, sweep_index, trial_index);
  const TrialInstances inst = build_trial_instances(cfg, seed);
  const double n_sub = cfg.channel.n_subchannels;

  std::vector<TrialRecord> out;
  const auto record = [&](Scheme s) -> TrialRecord& {
    TrialRecord r;
    r.sweep_var = cfg.sweep.variable;
    r.sweep_value = value;
    r.sweep_index = sweep_index;
    r.trial = trial_index;
    r.scheme = s;
    out.push_back(r);
    return out.back();
  };
  const auto kappa_for = [&](const ProblemInstance& p) { return cfg.kappa.value_or(default_kappa(p)); };

  if (selected(cfg, Scheme::CsraPcsi)) {
    const auto t0 = Clock::now();
    const CsraResult c = perfect_csi_run(inst.pcsi, kappa_for(inst.pcsi));
    TrialRecord& r = record(Scheme::CsraPcsi);
    r.runtime_ms = elapsed_ms(t0);
    r.goodput_per_subchannel = allocation_goodput(inst.pcsi, c.blended) / n_sub;
    r.utility = c.utility;
    r.gap_bound_per_subchannel = c.gap_bound / n_sub;
    r.mu_lo = c.mu_lo;
    r.mu_hi = c.mu_hi;
    r.iters = c.iterations;
  }

  const bool need_icsi = selected(cfg, Scheme::CsraIcsi) || selected(cfg, Scheme::DsraIcsi) ||
                         selected(cfg, Scheme::SubgradIcsi);
  std::optional<CsraResult> icsi;
  double icsi_ms = 0.0;
  if (need_icsi) {
    const auto t0 = Clock::now();
    icsi = solve_csra(inst.icsi, kappa_for(inst.icsi));
    icsi_ms = elapsed_ms(t0);
  }

  if (selected(cfg, Scheme::CsraIcsi)) {
    TrialRecord& r = record(Scheme::CsraIcsi);
    r.runtime_ms = icsi_ms;
    r.goodput_per_subchannel = allocation_goodput(inst.icsi, icsi->blended) / n_sub;
    r.utility = icsi->utility;
    r.gap_bound_per_subchannel = icsi->gap_bound / n_sub;
    r.mu_lo = icsi->mu_lo;
    r.mu_hi = icsi->mu_hi;
    r.iters = icsi->iterations;
  }

  if (selected(cfg, Scheme::DsraIcsi)) {
    const auto t0 = Clock::now();
    const DsraResult d = solve_dsra(inst.icsi, *icsi, kappa_for(inst.icsi));
    TrialRecord& r = record(Scheme::DsraIcsi);
    r.runtime_ms = icsi_ms + elapsed_ms(t0);
    r.goodput_per_subchannel = d.goodput / n_sub;
    r.utility = d.utility;
    r.gap_bound_per_subchannel = d.gap_bound / n_sub;
    r.mu_lo = icsi->mu_lo;
    r.mu_hi = icsi->mu_hi;
    r.iters = icsi->iterations;
  }

  if (selected(cfg, Scheme::FpRus)) {
    const auto t0 = Clock::now();
    const BaselineResult b = fp_rus_baseline(inst.icsi, derive_seed(seed, SeedStream::UserDraw));
    TrialRecord& r = record(Scheme::FpRus);
    r.runtime_ms = elapsed_ms(t0);
    r.goodput_per_subchannel = b.goodput / n_sub;
    r.utility = b.utility;
  }

  if (selected(cfg, Scheme::SubgradIcsi)) {
    const auto t0 = Clock::now();
    const SubgradientTrace t = subgradient_baseline(inst.icsi, cfg.subgradient.n_updates, cfg.subgradient.scale,
                                                    0.5 * (icsi->mu_lo + icsi->mu_hi));
    TrialRecord& r = record(Scheme::SubgradIcsi);
    r.runtime_ms = elapsed_ms(t0);
    r.goodput_per_subchannel = t.final_goodput / n_sub;
    r.utility = t.final_utility;
    r.mu_lo = t.mu.back();
    r.mu_hi = t.mu.back();
    r.iters = static_cast<int>(t.mu.size());
  }
  return out;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, unsigned threads) {
  cfg.validate();
  const int n_values = static_cast<int>(cfg.sweep.values.size());
  const int units = n_values * cfg.n_trials;
  std::vector<std::vector<TrialRecord>> per_unit(static_cast<std::size_t>(units));

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(units));

  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (int u = next++; u < units; u = next++) {
      try {
        per_unit[static_cast<std::size_t>(u)] = run_trial(cfg, u / cfg.n_trials, u % cfg.n_trials);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  ScenarioResult result;
  for (auto& unit : per_unit) {
    for (TrialRecord& r : unit) result.records.push_back(std::move(r));
  }
  result.summary = summarize(result.records);
  return result;
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
  struct Acc {
    SummaryRow row;
    double g = 0, g2 = 0, u = 0, u2 = 0, gap = 0, rt = 0;
    int gap_n = 0;
  };
  std::map<std::pair<int, int>, Acc> groups;
  for (const TrialRecord& r : records) {
    Acc& a = groups[{r.sweep_index, static_cast<int>(r.scheme)}];
    a.row.sweep_var = r.sweep_var;
    a.row.sweep_value = r.sweep_value;
    a.row.scheme = r.scheme;
    ++a.row.n_trials;
    a.g += r.goodput_per_subchannel;
    a.g2 += r.goodput_per_subchannel * r.goodput_per_subchannel;
    a.u += r.utility;
    a.u2 += r.utility * r.utility;
    a.rt += r.runtime_ms;
    if (r.gap_bound_per_subchannel) {
      a.gap += *r.gap_bound_per_subchannel;
      ++a.gap_n;
    }
  }
  const auto se = [](double s, double s2, int n) {
    if (n < 2) return 0.0;
    const double mean = s / n;
    const double var = std::max(0.0, (s2 - n * mean * mean) / (n - 1));
    return std::sqrt(var / n);
  };
  std::vector<SummaryRow> out;
  for (auto& [key, a] : groups) {
    const int n = a.row.n_trials;
    a.row.goodput_mean = a.g / n;
    a.row.goodput_se = se(a.g, a.g2, n);
    a.row.utility_mean = a.u / n;
    a.row.utility_se = se(a.u, a.u2, n);
    a.row.gap_bound_mean = a.gap_n > 0 ? a.gap / a.gap_n : std::numeric_limits<double>::quiet_NaN();
    a.row.runtime_ms_mean = a.rt / n;
    out.push_back(a.row);
  }
  return out;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string trials_csv(const std::vector<TrialRecord>& records) {
  std::string out =
      "sweep_var,sweep_value,trial,scheme,goodput_per_subchannel,utility,gap_bound_per_subchannel,mu_lo,mu_hi,"
      "iters,runtime_ms\n";
  for (const TrialRecord& r : records) {
    out += std::string(sweep_name(r.sweep_var)) + "," + fmt(r.sweep_value) + "," + std::to_string(r.trial) + "," +
           scheme_name(r.scheme) + "," + fmt(r.goodput_per_subchannel) + "," + fmt(r.utility) + "," +
           (r.gap_bound_per_subchannel ? fmt(*r.gap_bound_per_subchannel) : std::string()) + "," + fmt(r.mu_lo) +
           "," + fmt(r.mu_hi) + "," + std::to_string(r.iters) + "," + fmt(r.runtime_ms) + "\n";
  }
  return out;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out =
      "sweep_var,sweep_value,scheme,n_trials,goodput_mean,goodput_se,utility_mean,utility_se,"
      "gap_bound_per_subchannel_mean,runtime_ms_mean\n";
  for (const SummaryRow& r : rows) {
    out += std::string(sweep_name(r.sweep_var)) + "," + fmt(r.sweep_value) + "," + scheme_name(r.scheme) + "," +
           std::to_string(r.n_trials) + "," + fmt(r.goodput_mean) + "," + fmt(r.goodput_se) + "," +
           fmt(r.utility_mean) + "," + fmt(r.utility_se) + "," +
           (std::isnan(r.gap_bound_mean) ? std::string() : fmt(r.gap_bound_mean)) + "," + fmt(r.runtime_ms_mean) +
           "\n";
  }
  return out;
}

std::string manifest_json(const ScenarioConfig& cfg, const ScenarioResult& result) {
  const std::string canonical = to_json(cfg);
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(canonical)));

  nlohmann::json m;
  m["library_version"] = library_version();
  m["config"] = nlohmann::json::parse(canonical);
  m["config_hash_fnv1a64"] = hash;
  m["root_seed"] = cfg.seed;
  m["seed_rule"] =
      "unit seed = derive_seed(root_seed, [sweep_index, trial_index]); channel, pilot noise and user draw use "
      "derive_seed(unit seed, [1]), [2], [3]";
  m["n_units"] = cfg.sweep.values.size() * static_cast<std::size_t>(cfg.n_trials);
  m["n_records"] = result.records.size();
  m["files"] = {"trials.csv", "summary.csv"};
  return m.dump(2) + "\n";
}

void write_outputs(const std::filesystem::path& dir, const ScenarioConfig& cfg, const ScenarioResult& result) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  const auto write = [&](const char* name, const std::string& text) {
    const std::filesystem::path p = dir / name;
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + p.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("failed writing " + p.string());
  };
  write("trials.csv", trials_csv(result.records));
  write("summary.csv", summary_csv(result.summary));
  write("manifest.json", manifest_json(cfg, result));
}

}  // namespace sra
