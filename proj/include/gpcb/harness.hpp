#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gpcb/environments.hpp"
#include "gpcb/kernels.hpp"
#include "gpcb/policy.hpp"
#include "gpcb/types.hpp"

namespace gpcb {

enum class Algorithm { Oclok, Soclok, Benchmark };

struct SparseSettings {
  bool enabled = false;
  int num_inducing = 50;
  bool reseed_each_round = true;
};

struct GpSettings {
  Scalar noise_variance = 0.01;
  SparseSettings sparse;
};

struct RunConfig {
  EnvSpec env;
  KernelSpec kernel;
  GpSettings gp;
  PolicyConfig policy;
  Algorithm algorithm = Algorithm::Oclok;
  OracleKind oracle_kind = OracleKind::Auto;  // ablation override
  std::vector<std::uint64_t> seeds;
  std::string output_dir = "out";
  bool record_timing = false;
};

/// Parses and validates a config document; errors name the offending field
/// path (e.g. "policy.delta").
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

/// Canonical JSON echo of a config; equal configs serialize identically.
nlohmann::json to_json(const RunConfig& config);

/// FNV-1a 64-bit over a byte string, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

/// Hash used in manifests: the canonical JSON dump of the config.
std::string config_hash(const RunConfig& config);

struct RunSummary {
  std::uint64_t seed = 0;
  std::string trace_path;
  std::string trace_checksum;
  std::string dataset_hash;
  int rounds = 0;
  Scalar alpha = 1.0;
  Scalar cumulative_expected = 0.0;
  Scalar cumulative_benchmark = 0.0;
  Scalar reward_ratio = 0.0;  // cumulative_expected / cumulative_benchmark
  Scalar final_cum_regret = 0.0;
  long poisson_clamps = 0;
  long prob_clamps = 0;
  long edge_truncations = 0;
  std::vector<RoundRecord> records;
};

struct RunOutcome {
  std::string output_dir;
  std::string manifest_path;
  std::string config_hash;
  std::vector<RunSummary> runs;
};

/// Executes the configured policy once per seed, writing one trace CSV per
/// seed plus a manifest. GPCB_OUTPUT_DIR overrides config.output_dir.
RunOutcome run(const RunConfig& config);

/// In-memory variant of a single seeded run; used by run() and by tests
/// that don't need files.
RunSummary run_single_seed(const RunConfig& config, std::uint64_t seed);

struct SweepRow {
  std::string value;
  int num_seeds = 0;
  Scalar reward_ratio_mean = 0.0;
  Scalar reward_ratio_std = 0.0;
  Scalar final_regret_mean = 0.0;
  Scalar final_regret_std = 0.0;
};

struct SweepOutcome {
  std::string sweep_dir;
  std::string summary_path;
  std::vector<SweepRow> rows;
};

/// One run() per value of the dotted config path, plus an aggregate summary
/// table over seeds.
SweepOutcome sweep(const RunConfig& base, const std::string& param_path,
                   const std::vector<std::string>& values);

/// CLI entry point (subcommands: run, sweep, diagnostics gamma). Returns the
/// process exit code: 0 ok, 2 config error, 3 numerical error, 4 io error.
int cli_main(int argc, const char* const* argv);

}  // namespace gpcb
