#include "gpcb/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <iterator>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gpcb/errors.hpp"
#include "gpcb/metrics.hpp"
#include "gpcb/rng.hpp"

namespace gpcb {
namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// JSON helpers

[[noreturn]] void bad_field(const std::string& path, const std::string& why) {
  throw ConfigError(path + ": " + why);
}

const json* find_field(const json& doc, const std::string& path) {
  const json* node = &doc;
  std::size_t begin = 0;
  while (begin <= path.size()) {
    const std::size_t dot = path.find('.', begin);
    const std::string key = path.substr(
        begin, dot == std::string::npos ? std::string::npos : dot - begin);
    if (!node->is_object() || !node->contains(key)) return nullptr;
    node = &(*node)[key];
    if (dot == std::string::npos) break;
    begin = dot + 1;
  }
  return node;
}

template <typename T>
T get_or(const json& doc, const std::string& path, T fallback) {
  const json* node = find_field(doc, path);
  if (node == nullptr || node->is_null()) return fallback;
  try {
    return node->get<T>();
  } catch (const json::exception&) {
    bad_field(path, "has the wrong type");
  }
}

// ---------------------------------------------------------------------------
// Enum <-> string

std::string to_string(EnvKind kind) {
  switch (kind) {
    case EnvKind::GpSynthetic: return "gp_synthetic";
    case EnvKind::Crowdsourcing: return "crowdsourcing";
    case EnvKind::MovieCoverage: return "movie_coverage";
  }
  return "gp_synthetic";
}

EnvKind env_kind_from(const std::string& name) {
  if (name == "gp_synthetic") return EnvKind::GpSynthetic;
  if (name == "crowdsourcing") return EnvKind::Crowdsourcing;
  if (name == "movie_coverage") return EnvKind::MovieCoverage;
  bad_field("env.kind", "must be one of gp_synthetic, crowdsourcing, "
                        "movie_coverage");
}

std::string to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::Linear: return "linear";
    case KernelFamily::SquaredExponential: return "squared_exponential";
    case KernelFamily::Matern: return "matern";
  }
  return "squared_exponential";
}

KernelFamily kernel_family_from(const std::string& name) {
  if (name == "linear") return KernelFamily::Linear;
  if (name == "squared_exponential" || name == "rbf") {
    return KernelFamily::SquaredExponential;
  }
  if (name == "matern") return KernelFamily::Matern;
  bad_field("kernel.family", "must be one of linear, squared_exponential, "
                             "matern");
}

std::string to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::Auto: return "auto";
    case OracleKind::TopK: return "top_k";
    case OracleKind::GreedyCoverage: return "greedy_coverage";
  }
  return "auto";
}

OracleKind oracle_kind_from(const std::string& name) {
  if (name == "auto") return OracleKind::Auto;
  if (name == "top_k") return OracleKind::TopK;
  if (name == "greedy_coverage") return OracleKind::GreedyCoverage;
  bad_field("oracle.kind", "must be one of auto, top_k, greedy_coverage");
}

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Oclok: return "oclok";
    case Algorithm::Soclok: return "soclok";
    case Algorithm::Benchmark: return "benchmark";
  }
  return "oclok";
}

Algorithm algorithm_from(const std::string& name) {
  if (name == "oclok") return Algorithm::Oclok;
  if (name == "soclok") return Algorithm::Soclok;
  if (name == "benchmark") return Algorithm::Benchmark;
  bad_field("policy.algorithm", "must be one of oclok, soclok, benchmark");
}

// ---------------------------------------------------------------------------
// Formatting

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string join_ids(const std::vector<int>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) out += ';';
    out += std::to_string(ids[i]);
  }
  return out;
}

void hash_bytes(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::string hash_environment(const Environment& env, int rounds) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (int t = 1; t <= rounds; ++t) {
    const RoundInstance& inst = env.round(t);
    hash_bytes(h, &inst.t, sizeof(inst.t));
    hash_bytes(h, inst.contexts.data(),
               sizeof(Scalar) * static_cast<std::size_t>(inst.contexts.size()));
    hash_bytes(h, inst.truth.data(),
               sizeof(Scalar) * static_cast<std::size_t>(inst.truth.size()));
    hash_bytes(h, inst.outcomes.data(),
               sizeof(Scalar) * static_cast<std::size_t>(inst.outcomes.size()));
    if (inst.feasibility.graph.has_value()) {
      for (const auto& e : inst.feasibility.graph->edges) {
        hash_bytes(h, &e.left, sizeof(e.left));
        hash_bytes(h, &e.right, sizeof(e.right));
      }
    }
  }
  return hex64(h);
}

std::filesystem::path resolve_output_dir(const RunConfig& config) {
  if (const char* override_dir = std::getenv("GPCB_OUTPUT_DIR")) {
    if (override_dir[0] != '\0') return override_dir;
  }
  return config.output_dir;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("failed while writing " + path.string());
}

std::string trace_csv(const RunSummary& summary) {
  std::string out =
      "round,m_t,selected_ids,reward_realized,reward_expected,opt_expected,"
      "benchmark_expected,cum_regret,beta,wall_ms\n";
  Scalar cum_regret = 0.0;
  for (const auto& rec : summary.records) {
    cum_regret += summary.alpha * rec.opt_expected - rec.reward_expected;
    out += std::to_string(rec.t);
    out += ',';
    out += std::to_string(rec.m_t);
    out += ',';
    out += join_ids(rec.selected.ids);
    out += ',';
    out += format_double(rec.reward_realized);
    out += ',';
    out += format_double(rec.reward_expected);
    out += ',';
    out += format_double(rec.opt_expected);
    out += ',';
    out += format_double(rec.benchmark_expected);
    out += ',';
    out += format_double(cum_regret);
    out += ',';
    out += format_double(rec.beta_used);
    out += ',';
    out += format_double(rec.wall_ms);
    out += '\n';
  }
  return out;
}

std::unique_ptr<Agent> make_agent(const RunConfig& config, std::uint64_t seed) {
  PolicyConfig policy = config.policy;
  switch (config.algorithm) {
    case Algorithm::Oclok:
      return std::make_unique<OclokAgent>(config.kernel,
                                          config.gp.noise_variance, policy);
    case Algorithm::Soclok:
      return std::make_unique<SoclokAgent>(
          config.kernel, config.gp.noise_variance, policy,
          config.gp.sparse.num_inducing, config.gp.sparse.reseed_each_round,
          seed);
    case Algorithm::Benchmark:
      return std::make_unique<BenchmarkAgent>(policy);
  }
  throw ConfigError("policy.algorithm: unknown algorithm");
}

RunOutcome run_into(const RunConfig& config,
                    const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output dir " + out_dir.string());

  RunOutcome outcome;
  outcome.output_dir = out_dir.string();
  outcome.config_hash = config_hash(config);

  json manifest;
  manifest["version"] = kVersion;
  manifest["config_hash"] = outcome.config_hash;
  manifest["config"] = to_json(config);
  manifest["runs"] = json::array();

  // Seeds are independent; compute them in parallel, then write traces and
  // the manifest in config order so outputs stay deterministic.
  std::vector<std::future<RunSummary>> pending;
  pending.reserve(config.seeds.size());
  for (std::uint64_t seed : config.seeds) {
    pending.push_back(std::async(std::launch::async, run_single_seed, config,
                                 seed));
  }

  for (std::size_t i = 0; i < pending.size(); ++i) {
    const std::uint64_t seed = config.seeds[i];
    RunSummary summary = pending[i].get();
    summary.trace_path =
        (out_dir / ("trace_seed" + std::to_string(seed) + ".csv")).string();
    const std::string csv = trace_csv(summary);
    write_text_file(summary.trace_path, csv);
    summary.trace_checksum = fnv1a_hex(csv);

    json row;
    row["seed"] = seed;
    row["trace_file"] =
        std::filesystem::path(summary.trace_path).filename().string();
    row["trace_checksum"] = summary.trace_checksum;
    row["dataset_hash"] = summary.dataset_hash;
    row["rounds"] = summary.rounds;
    row["alpha"] = summary.alpha;
    row["cumulative_expected_reward"] = summary.cumulative_expected;
    row["cumulative_benchmark_reward"] = summary.cumulative_benchmark;
    row["reward_ratio_vs_benchmark"] = summary.reward_ratio;
    row["final_cum_regret"] = summary.final_cum_regret;
    row["poisson_clamp_count"] = summary.poisson_clamps;
    row["probability_clamp_count"] = summary.prob_clamps;
    row["edge_truncation_count"] = summary.edge_truncations;
    manifest["runs"].push_back(row);

    outcome.runs.push_back(std::move(summary));
  }

  outcome.manifest_path = (out_dir / "manifest.json").string();
  write_text_file(outcome.manifest_path, manifest.dump(2) + "\n");
  return outcome;
}

// ---------------------------------------------------------------------------
// diagnostics gamma

json gamma_from_config(const json& doc, const RunConfig& config) {
  const int num_contexts = get_or<int>(doc, "diagnostics.num_contexts", 4);
  const int dim = get_or<int>(doc, "diagnostics.dim", 2);
  const int rounds = get_or<int>(doc, "diagnostics.rounds", 2);
  const int budget = get_or<int>(doc, "diagnostics.budget", 2);
  const std::uint64_t seed = get_or<std::uint64_t>(doc, "diagnostics.seed", 1);
  const bool is_volatile = get_or<bool>(doc, "diagnostics.volatile", false);
  const int arms_per_round =
      get_or<int>(doc, "diagnostics.arms_per_round", num_contexts);
  if (num_contexts < 1) bad_field("diagnostics.num_contexts", "must be >= 1");
  if (dim < 1) bad_field("diagnostics.dim", "must be >= 1");
  if (rounds < 1) bad_field("diagnostics.rounds", "must be >= 1");
  if (budget < 1 || budget > num_contexts) {
    bad_field("diagnostics.budget", "must be in [1, num_contexts]");
  }
  if (arms_per_round < budget || arms_per_round > num_contexts) {
    bad_field("diagnostics.arms_per_round",
              "must be in [budget, num_contexts]");
  }

  auto engine = rng::make_engine(seed, rng::Stream::EnvStructure);
  std::uniform_real_distribution<Scalar> unit(0.0, 1.0);
  ContextSet ground(num_contexts, dim);
  for (Index i = 0; i < ground.rows(); ++i) {
    for (Index d = 0; d < ground.cols(); ++d) ground(i, d) = unit(engine);
  }

  std::vector<std::vector<ContextSet>> round_tuples;
  std::vector<Index> all(static_cast<std::size_t>(num_contexts));
  std::iota(all.begin(), all.end(), Index{0});
  for (int t = 0; t < rounds; ++t) {
    ContextSet avail = ground;
    if (is_volatile) {
      std::vector<Index> picks;
      std::sample(all.begin(), all.end(), std::back_inserter(picks),
                  arms_per_round, engine);
      avail.resize(arms_per_round, dim);
      for (int a = 0; a < arms_per_round; ++a) {
        avail.row(a) = ground.row(picks[static_cast<std::size_t>(a)]);
      }
    }
    round_tuples.push_back(all_k_subsets(avail, budget));
  }

  const InfoGainReport report =
      gamma_diagnostics(round_tuples, config.kernel, config.gp.noise_variance);

  json out;
  out["inputs"]["num_contexts"] = num_contexts;
  out["inputs"]["dim"] = dim;
  out["inputs"]["rounds"] = rounds;
  out["inputs"]["budget"] = budget;
  out["inputs"]["seed"] = seed;
  out["inputs"]["volatile"] = is_volatile;
  out["inputs"]["arms_per_round"] = arms_per_round;
  out["inputs"]["kernel"]["family"] = to_string(config.kernel.family);
  out["inputs"]["kernel"]["lengthscale"] = config.kernel.lengthscale;
  out["inputs"]["kernel"]["nu"] = config.kernel.nu;
  out["inputs"]["kernel"]["variance"] = config.kernel.variance;
  out["inputs"]["noise_variance"] = config.gp.noise_variance;
  out["inputs"]["contexts"] = json::array();
  for (Index i = 0; i < ground.rows(); ++i) {
    json row = json::array();
    for (Index d = 0; d < ground.cols(); ++d) row.push_back(ground(i, d));
    out["inputs"]["contexts"].push_back(row);
  }
  out["report"]["gamma_bar"] = report.gamma_bar;
  out["report"]["gamma_T"] = report.gamma_t;
  out["report"]["gamma_KT"] = report.gamma_kt;
  out["report"]["non_volatile"] = report.non_volatile;
  out["report"]["upper_bound_holds"] = report.upper_bound_holds;
  out["report"]["lower_bound_holds"] = report.lower_bound_holds;
  out["report"]["ground_set_size"] = report.ground_set_size;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

RunConfig parse_config(const json& doc) {
  RunConfig config;

  config.policy.delta = get_or<Scalar>(doc, "policy.delta", 0.05);
  config.policy.budget = get_or<int>(doc, "policy.budget", 3);
  config.policy.max_arms = get_or<int>(doc, "policy.max_arms", 50);
  if (const json* node = find_field(doc, "policy.beta_override");
      node != nullptr && !node->is_null()) {
    config.policy.beta_override = node->get<Scalar>();
  }
  config.algorithm =
      algorithm_from(get_or<std::string>(doc, "policy.algorithm", "oclok"));
  validate(config.policy);

  config.kernel.family = kernel_family_from(
      get_or<std::string>(doc, "kernel.family", "squared_exponential"));
  config.kernel.lengthscale = get_or<Scalar>(doc, "kernel.lengthscale", 1.0);
  config.kernel.nu = get_or<Scalar>(doc, "kernel.nu", 2.5);
  config.kernel.variance = get_or<Scalar>(doc, "kernel.variance", 1.0);
  validate(config.kernel);

  config.gp.noise_variance = get_or<Scalar>(doc, "gp.noise_variance", 0.01);
  if (config.gp.noise_variance <= 0.0) {
    bad_field("gp.noise_variance", "must be positive");
  }
  config.gp.sparse.num_inducing =
      get_or<int>(doc, "gp.sparse.num_inducing", 50);
  config.gp.sparse.reseed_each_round =
      get_or<bool>(doc, "gp.sparse.reseed_each_round", true);
  if (const json* node = find_field(doc, "gp.sparse.enabled");
      node != nullptr && !node->is_null()) {
    config.gp.sparse.enabled = node->get<bool>();
    if (config.gp.sparse.enabled != (config.algorithm == Algorithm::Soclok)) {
      bad_field("gp.sparse.enabled",
                "inconsistent with policy.algorithm (sparse posterior is "
                "exactly the soclok algorithm)");
    }
  } else {
    config.gp.sparse.enabled = config.algorithm == Algorithm::Soclok;
  }
  if (config.gp.sparse.num_inducing < 1) {
    bad_field("gp.sparse.num_inducing", "must be >= 1");
  }

  config.env.kind =
      env_kind_from(get_or<std::string>(doc, "env.kind", "gp_synthetic"));
  config.env.dim = get_or<int>(
      doc, "env.dim",
      config.env.kind == EnvKind::Crowdsourcing
          ? 3
          : (config.env.kind == EnvKind::MovieCoverage ? 1 : 3));
  config.env.mean_arms = get_or<double>(doc, "env.mean_arms", 20.0);
  config.env.horizon = get_or<int>(doc, "env.horizon", 100);
  config.env.max_horizon = get_or<int>(doc, "env.max_horizon", 0);
  config.env.noise_std = get_or<double>(doc, "env.noise_std", 0.1);
  config.env.lengthscale = get_or<double>(doc, "env.lengthscale", 1.0);
  config.env.grid_size = get_or<int>(doc, "env.grid_size", 600);
  config.env.mean_left = get_or<double>(doc, "env.mean_left", 8.0);
  config.env.mean_right = get_or<double>(doc, "env.mean_right", 25.0);
  config.env.edge_density = get_or<double>(doc, "env.edge_density", 0.3);
  // The policy's budget and arm bound are authoritative for the environment.
  config.env.budget = config.policy.budget;
  config.env.max_arms = config.policy.max_arms;
  validate(config.env);

  config.oracle_kind =
      oracle_kind_from(get_or<std::string>(doc, "oracle.kind", "auto"));
  if (config.oracle_kind == OracleKind::GreedyCoverage &&
      config.env.kind != EnvKind::MovieCoverage) {
    bad_field("oracle.kind",
              "greedy_coverage needs a coverage environment");
  }

  if (const json* node = find_field(doc, "seeds");
      node != nullptr && !node->is_null()) {
    if (!node->is_array() || node->empty()) {
      bad_field("seeds", "must be a non-empty array of integers");
    }
    for (const auto& s : *node) {
      if (!s.is_number_unsigned() && !s.is_number_integer()) {
        bad_field("seeds", "must be a non-empty array of integers");
      }
      config.seeds.push_back(s.get<std::uint64_t>());
    }
  } else {
    config.seeds = {1};
  }
  config.output_dir = get_or<std::string>(doc, "output_dir", "out");
  config.record_timing = get_or<bool>(doc, "record_timing", false);
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " +
                      e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& config) {
  json doc;
  doc["env"]["kind"] = to_string(config.env.kind);
  doc["env"]["dim"] = config.env.dim;
  doc["env"]["mean_arms"] = config.env.mean_arms;
  doc["env"]["horizon"] = config.env.horizon;
  doc["env"]["max_horizon"] = config.env.max_horizon;
  doc["env"]["noise_std"] = config.env.noise_std;
  doc["env"]["lengthscale"] = config.env.lengthscale;
  doc["env"]["grid_size"] = config.env.grid_size;
  doc["env"]["mean_left"] = config.env.mean_left;
  doc["env"]["mean_right"] = config.env.mean_right;
  doc["env"]["edge_density"] = config.env.edge_density;
  doc["kernel"]["family"] = to_string(config.kernel.family);
  doc["kernel"]["lengthscale"] = config.kernel.lengthscale;
  doc["kernel"]["nu"] = config.kernel.nu;
  doc["kernel"]["variance"] = config.kernel.variance;
  doc["gp"]["noise_variance"] = config.gp.noise_variance;
  doc["gp"]["sparse"]["enabled"] = config.gp.sparse.enabled;
  doc["gp"]["sparse"]["num_inducing"] = config.gp.sparse.num_inducing;
  doc["gp"]["sparse"]["reseed_each_round"] = config.gp.sparse.reseed_each_round;
  doc["policy"]["delta"] = config.policy.delta;
  doc["policy"]["budget"] = config.policy.budget;
  doc["policy"]["max_arms"] = config.policy.max_arms;
  if (config.policy.beta_override.has_value()) {
    doc["policy"]["beta_override"] = *config.policy.beta_override;
  } else {
    doc["policy"]["beta_override"] = nullptr;
  }
  doc["policy"]["algorithm"] = to_string(config.algorithm);
  doc["oracle"]["kind"] = to_string(config.oracle_kind);
  doc["seeds"] = config.seeds;
  doc["output_dir"] = config.output_dir;
  doc["record_timing"] = config.record_timing;
  return doc;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  hash_bytes(h, bytes.data(), bytes.size());
  return hex64(h);
}

std::string config_hash(const RunConfig& config) {
  return fnv1a_hex(to_json(config).dump());
}

RunSummary run_single_seed(const RunConfig& config, std::uint64_t seed) {
  Environment env = make_environment(config.env, seed);
  std::unique_ptr<Agent> agent = make_agent(config, seed);

  RunSummary summary;
  summary.seed = seed;
  summary.alpha = env.alpha;
  summary.rounds = config.env.horizon;
  summary.poisson_clamps = env.poisson_clamps;
  summary.edge_truncations = env.edge_truncations;
  summary.dataset_hash = hash_environment(env, config.env.horizon);

  ClampCounter clamps;
  summary.records.reserve(static_cast<std::size_t>(config.env.horizon));
  for (int t = 1; t <= config.env.horizon; ++t) {
    summary.records.push_back(run_round(*agent, env.round(t), t, &clamps,
                                        config.record_timing,
                                        config.oracle_kind));
  }
  summary.prob_clamps = clamps.clamped;

  const Vector regret = alpha_regret(summary.records, env.alpha);
  summary.final_cum_regret = regret.size() > 0 ? regret(regret.size() - 1) : 0.0;
  for (const auto& rec : summary.records) {
    summary.cumulative_expected += rec.reward_expected;
    summary.cumulative_benchmark += rec.benchmark_expected;
  }
  summary.reward_ratio =
      summary.cumulative_benchmark != 0.0
          ? summary.cumulative_expected / summary.cumulative_benchmark
          : 0.0;
  return summary;
}

RunOutcome run(const RunConfig& config) {
  return run_into(config, resolve_output_dir(config));
}

SweepOutcome sweep(const RunConfig& base, const std::string& param_path,
                   const std::vector<std::string>& values) {
  if (values.empty()) {
    throw ConfigError("sweep.values: must be non-empty");
  }
  json base_doc = to_json(base);
  if (find_field(base_doc, param_path) == nullptr) {
    throw ConfigError(param_path + ": unknown parameter path");
  }

  const std::filesystem::path sweep_dir =
      resolve_output_dir(base) /
      std::filesystem::path("sweep_" + param_path);
  std::error_code ec;
  std::filesystem::create_directories(sweep_dir, ec);
  if (ec) throw IoError("cannot create sweep dir " + sweep_dir.string());

  SweepOutcome outcome;
  outcome.sweep_dir = sweep_dir.string();

  std::string summary_csv =
      "param,value,seeds,reward_ratio_mean,reward_ratio_std,"
      "final_regret_mean,final_regret_std\n";

  for (const std::string& value : values) {
    json patched = base_doc;
    json parsed_value;
    try {
      parsed_value = json::parse(value);
    } catch (const json::exception&) {
      parsed_value = value;  // plain string value
    }
    // Navigate to the parent of the leaf and assign.
    json* node = &patched;
    std::string leaf = param_path;
    std::size_t begin = 0;
    while (true) {
      const std::size_t dot = leaf.find('.');
      if (dot == std::string::npos) break;
      node = &(*node)[leaf.substr(0, dot)];
      leaf = leaf.substr(dot + 1);
      (void)begin;
    }
    (*node)[leaf] = parsed_value;

    RunConfig config = parse_config(patched);
    const std::filesystem::path value_dir = sweep_dir / (leaf + "=" + value);
    RunOutcome run_outcome = run_into(config, value_dir);

    SweepRow row;
    row.value = value;
    row.num_seeds = static_cast<int>(run_outcome.runs.size());
    Scalar ratio_sum = 0.0, ratio_sq = 0.0, regret_sum = 0.0, regret_sq = 0.0;
    for (const auto& r : run_outcome.runs) {
      ratio_sum += r.reward_ratio;
      ratio_sq += r.reward_ratio * r.reward_ratio;
      regret_sum += r.final_cum_regret;
      regret_sq += r.final_cum_regret * r.final_cum_regret;
    }
    const Scalar n = static_cast<Scalar>(row.num_seeds);
    row.reward_ratio_mean = ratio_sum / n;
    row.final_regret_mean = regret_sum / n;
    row.reward_ratio_std = std::sqrt(
        std::max(0.0, ratio_sq / n - row.reward_ratio_mean * row.reward_ratio_mean));
    row.final_regret_std = std::sqrt(
        std::max(0.0, regret_sq / n - row.final_regret_mean * row.final_regret_mean));
    outcome.rows.push_back(row);

    summary_csv += param_path + "," + value + "," +
                   std::to_string(row.num_seeds) + "," +
                   format_double(row.reward_ratio_mean) + "," +
                   format_double(row.reward_ratio_std) + "," +
                   format_double(row.final_regret_mean) + "," +
                   format_double(row.final_regret_std) + "\n";
  }

  outcome.summary_path = (sweep_dir / "summary.csv").string();
  write_text_file(outcome.summary_path, summary_csv);
  return outcome;
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Gaussian-process combinatorial bandit engine"};
  app.require_subcommand(1);

  std::string config_path;
  int seed_offset = 0;
  auto* run_cmd = app.add_subcommand("run", "Execute one run per seed");
  run_cmd->add_option("--config", config_path, "JSON config file")->required();
  run_cmd->add_option("--seed-offset", seed_offset,
                      "Added to every configured seed");

  std::string sweep_config, sweep_param, sweep_values;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Run once per value of a config parameter");
  sweep_cmd->add_option("--config", sweep_config, "JSON config file")
      ->required();
  sweep_cmd->add_option("--param", sweep_param, "Dotted config path")
      ->required();
  sweep_cmd->add_option("--values", sweep_values, "Comma-separated values")
      ->required();

  std::string diag_config;
  auto* diag_cmd = app.add_subcommand("diagnostics", "Diagnostic reports");
  diag_cmd->require_subcommand(1);
  auto* gamma_cmd = diag_cmd->add_subcommand(
      "gamma", "Exhaustive information-gain report");
  gamma_cmd->add_option("--config", diag_config, "JSON config file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_cmd->parsed()) {
      RunConfig config = load_config(config_path);
      if (seed_offset != 0) {
        for (auto& seed : config.seeds) {
          seed += static_cast<std::uint64_t>(seed_offset);
        }
      }
      RunOutcome outcome = run(config);
      std::cout << "wrote " << outcome.runs.size() << " trace(s) and "
                << outcome.manifest_path << "\n";
      for (const auto& r : outcome.runs) {
        std::cout << "seed " << r.seed << ": reward ratio "
                  << format_double(r.reward_ratio) << ", final regret "
                  << format_double(r.final_cum_regret) << "\n";
      }
    } else if (sweep_cmd->parsed()) {
      RunConfig config = load_config(sweep_config);
      std::vector<std::string> values;
      std::stringstream ss(sweep_values);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!item.empty()) values.push_back(item);
      }
      SweepOutcome outcome = sweep(config, sweep_param, values);
      std::cout << "wrote " << outcome.summary_path << "\n";
    } else if (gamma_cmd->parsed()) {
      std::ifstream in(diag_config);
      if (!in) throw IoError("cannot open config file " + diag_config);
      json doc;
      try {
        in >> doc;
      } catch (const json::exception& e) {
        throw ConfigError("config file " + diag_config +
                          " is not valid JSON: " + e.what());
      }
      RunConfig config = parse_config(doc);
      const json report = gamma_from_config(doc, config);
      const std::filesystem::path out_dir = resolve_output_dir(config);
      std::error_code ec;
      std::filesystem::create_directories(out_dir, ec);
      if (ec) throw IoError("cannot create output dir " + out_dir.string());
      const auto path = out_dir / "gamma_report.json";
      write_text_file(path, report.dump(2) + "\n");
      std::cout << report.dump(2) << "\n";
      std::cout << "wrote " << path.string() << "\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}

}  // namespace gpcb
