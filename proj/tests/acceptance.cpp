// Acceptance suite: one pass/fail line per criterion, exit code equals the
// number of failed criteria. Thresholds, horizons, seed counts and
// tolerances are pinned in code; instance sizes are desk-scale so the whole
// suite stays within its runtime budgets.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Cholesky>

#include "gpcb/environments.hpp"
#include "gpcb/gp.hpp"
#include "gpcb/harness.hpp"
#include "gpcb/metrics.hpp"
#include "gpcb/oracles.hpp"
#include "gpcb/policy.hpp"
#include "gpcb/sparse_gp.hpp"

using namespace gpcb;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL",
              criterion, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

ContextSet random_contexts(std::mt19937_64& eng, Index n, Index d) {
  std::uniform_real_distribution<Scalar> unit(0.0, 1.0);
  ContextSet xs(n, d);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) xs(i, j) = unit(eng);
  }
  return xs;
}

Vector random_vector(std::mt19937_64& eng, Index n) {
  std::normal_distribution<Scalar> normal(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(eng);
  return v;
}

Scalar rel_err(Scalar a, Scalar b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path out_root() {
  static const fs::path root = [] {
    fs::path p = fs::temp_directory_path() / "gpcb_acceptance";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

// --------------------------------------------------------------------------
// 1. Posterior correctness: incremental vs from-scratch reconstruction.

void criterion_1() {
  std::mt19937_64 eng(101);
  std::uniform_int_distribution<Index> total_dist(50, 500);
  std::uniform_int_distribution<Index> batch_dist(1, 10);
  const KernelSpec kernel = KernelSpec::squared_exponential(0.6);
  const Scalar s2 = 0.04;

  Scalar worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index total = total_dist(eng);
    GPState state(kernel, s2);
    ContextSet all(0, 3);
    Vector outcomes(0);
    while (all.rows() < total) {
      const Index b = std::min<Index>(batch_dist(eng), total - all.rows());
      ContextSet xs = random_contexts(eng, b, 3);
      Vector r = random_vector(eng, b);
      state = state.batch_update(xs, r);
      all.conservativeResize(all.rows() + b, 3);
      all.bottomRows(b) = xs;
      outcomes.conservativeResize(outcomes.size() + b);
      outcomes.tail(b) = r;
    }

    // Direct dense reconstruction, independent of the incremental factors.
    Matrix gram = gram_matrix(kernel, all);
    gram.diagonal().array() += s2;
    Eigen::LDLT<Matrix> solver(gram);
    const Vector alpha = solver.solve(outcomes);

    for (int q = 0; q < 5; ++q) {
      const Context x = random_contexts(eng, 1, 3).row(0).transpose();
      const Vector k = kernel_vector(kernel, all, x);
      const Scalar mean_direct = k.dot(alpha);
      const Scalar var_direct =
          kernel_eval(kernel, x, x) - k.dot(solver.solve(k));
      const auto post = state.posterior(x);
      worst = std::max(worst, rel_err(post.mean, mean_direct));
      worst = std::max(worst, rel_err(post.variance, var_direct));
    }
  }
  char detail[120];
  std::snprintf(detail, sizeof(detail),
                "100 histories, N in [50,500], worst relative error %.2e",
                worst);
  report(1, worst <= 1e-8, "incremental posterior matches rebuild to 1e-8",
         detail);
}

// --------------------------------------------------------------------------
// 2. Posterior variance is monotone non-increasing under updates.

void criterion_2() {
  std::mt19937_64 eng(202);
  const KernelSpec kernel = KernelSpec::squared_exponential(0.5);
  std::uniform_int_distribution<Index> base_dist(1, 30);
  std::uniform_int_distribution<Index> batch_dist(1, 8);

  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    GPState state(kernel, 0.05);
    const Index n0 = base_dist(eng);
    state = state.batch_update(random_contexts(eng, n0, 2),
                               random_vector(eng, n0));
    const Context x = random_contexts(eng, 1, 2).row(0).transpose();
    const Scalar before = state.posterior(x).variance;
    const Index b = batch_dist(eng);
    state = state.batch_update(random_contexts(eng, b, 2),
                               random_vector(eng, b));
    const Scalar after = state.posterior(x).variance;
    if (after > before + 1e-10) ++violations;
  }
  report(2, violations == 0, "posterior variance never rises after an update",
         "1000 trials, violations " + std::to_string(violations));
}

// --------------------------------------------------------------------------
// 3. Confidence-event coverage across seeded runs.

void criterion_3() {
  const auto t0 = std::chrono::steady_clock::now();
  const KernelSpec kernel = KernelSpec::squared_exponential(1.0);
  const Scalar s2 = 0.01;

  EnvSpec env_spec;
  env_spec.kind = EnvKind::GpSynthetic;
  env_spec.dim = 2;
  env_spec.mean_arms = 25.0;
  env_spec.max_arms = 50;
  env_spec.horizon = 200;
  env_spec.budget = 3;
  env_spec.noise_std = 0.1;
  env_spec.lengthscale = 1.0;
  env_spec.grid_size = 400;

  PolicyConfig cfg;
  cfg.delta = 0.05;
  cfg.max_arms = 50;
  cfg.budget = 3;

  const int num_seeds = 20;
  int violating_seeds = 0;
  for (int seed = 0; seed < num_seeds; ++seed) {
    const Environment env =
        gp_synthetic_env(env_spec, static_cast<std::uint64_t>(seed));
    OclokAgent agent(kernel, s2, cfg);
    bool violated = false;
    for (int t = 1; t <= env_spec.horizon && !violated; ++t) {
      const RoundInstance& inst = env.round(t);
      const IndexVector iv =
          compute_indices(agent.state(), inst.contexts, t, cfg);
      const Scalar root_beta = std::sqrt(beta(t, cfg));
      for (Index m = 0; m < inst.truth.size(); ++m) {
        if (std::abs(inst.truth(m) - iv.mean(m)) >
            root_beta * iv.stddev(m) + 1e-12) {
          violated = true;
        }
      }
      const SuperArm arm = run_oracle(inst.feasibility, iv.index);
      ContextSet observed(static_cast<Index>(arm.ids.size()), 2);
      Vector outcomes(static_cast<Index>(arm.ids.size()));
      for (Index i = 0; i < observed.rows(); ++i) {
        observed.row(i) =
            inst.contexts.row(arm.ids[static_cast<std::size_t>(i)]);
        outcomes(i) = inst.outcomes(arm.ids[static_cast<std::size_t>(i)]);
      }
      agent.observe(observed, outcomes);
    }
    if (violated) ++violating_seeds;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  char detail[120];
  std::snprintf(detail, sizeof(detail), "violating seeds %d/20, %.1fs",
                violating_seeds, secs);
  report(3, violating_seeds <= 1,  // fraction <= 0.05
         "confidence event holds across seeds at delta=0.05", detail);
}

// --------------------------------------------------------------------------
// 4. Information-gain sandwich on exhaustively enumerated instances.

void criterion_4() {
  std::mt19937_64 eng(404);
  const Scalar noises[] = {0.25, 1.0};
  const Scalar lengthscales[] = {0.3, 1.0};

  int checked = 0;
  int failures = 0;
  for (int ground_size = 1; ground_size <= 5; ++ground_size) {
    for (int budget = 1; budget <= std::min(2, ground_size); ++budget) {
      for (int rounds_count = 1; rounds_count <= 3; ++rounds_count) {
        for (Scalar s2 : noises) {
          for (Scalar l : lengthscales) {
            for (int draw = 0; draw < 2; ++draw) {
              ContextSet ground = random_contexts(eng, ground_size, 2);
              std::vector<std::vector<ContextSet>> tuples(
                  static_cast<std::size_t>(rounds_count),
                  all_k_subsets(ground, budget));
              const auto rep = gamma_diagnostics(
                  tuples, KernelSpec::squared_exponential(l), s2);
              ++checked;
              if (!rep.non_volatile || !rep.upper_bound_holds ||
                  !rep.lower_bound_holds) {
                ++failures;
              }
            }
          }
        }
      }
    }
  }

  // Volatile instances: only the upper bound is asserted.
  int volatile_checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    ContextSet ground = random_contexts(eng, 5, 2);
    std::vector<std::vector<ContextSet>> tuples;
    std::uniform_int_distribution<int> avail_dist(2, 4);
    const int rounds_count = 2 + trial % 2;
    for (int t = 0; t < rounds_count; ++t) {
      const int avail = avail_dist(eng);
      std::vector<Index> ids(5);
      std::iota(ids.begin(), ids.end(), Index{0});
      std::vector<Index> picks;
      std::sample(ids.begin(), ids.end(), std::back_inserter(picks), avail,
                  eng);
      ContextSet sub(avail, 2);
      for (int a = 0; a < avail; ++a) {
        sub.row(a) = ground.row(picks[static_cast<std::size_t>(a)]);
      }
      tuples.push_back(all_k_subsets(sub, std::min(2, avail)));
    }
    const auto rep =
        gamma_diagnostics(tuples, KernelSpec::squared_exponential(1.0), 0.25);
    ++volatile_checked;
    if (!rep.upper_bound_holds) ++failures;
  }

  report(4, failures == 0,
         "gamma_KT/K <= gamma_bar <= K*gamma_T on every instance",
         std::to_string(checked) + " non-volatile + " +
             std::to_string(volatile_checked) + " volatile instances, " +
             std::to_string(failures) + " failures");
}

// --------------------------------------------------------------------------
// 5. Oracle guarantees.

void criterion_5() {
  std::mt19937_64 eng(505);
  std::uniform_real_distribution<Scalar> unit(0.0, 1.0);

  int topk_mismatches = 0;
  std::uniform_int_distribution<int> m_dist(4, 12);
  std::uniform_int_distribution<int> k_dist(1, 4);
  for (int trial = 0; trial < 500; ++trial) {
    const int m = m_dist(eng);
    const int k = std::min(k_dist(eng), m);
    Vector values(m);
    for (int i = 0; i < m; ++i) values(i) = unit(eng);
    Scalar achieved = 0.0;
    for (int id : top_k_oracle(values, k).ids) achieved += values(id);
    Scalar best = -1e300;
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      if (static_cast<int>(__builtin_popcount(mask)) != k) continue;
      Scalar sum = 0.0;
      for (int i = 0; i < m; ++i) {
        if (mask & (1u << i)) sum += values(i);
      }
      best = std::max(best, sum);
    }
    if (std::abs(achieved - best) > 1e-12) ++topk_mismatches;
  }

  int greedy_failures = 0;
  constexpr Scalar guarantee = 1.0 - 1.0 / 2.718281828459045;
  std::uniform_int_distribution<int> left_dist(1, 10);
  std::uniform_int_distribution<int> right_dist(1, 10);
  for (int trial = 0; trial < 200; ++trial) {
    BipartiteGraph graph;
    graph.num_left = left_dist(eng);
    graph.num_right = right_dist(eng);
    std::vector<Scalar> p;
    for (int i = 0; i < graph.num_left; ++i) {
      for (int j = 0; j < graph.num_right; ++j) {
        if (unit(eng) < 0.4) {
          graph.edges.push_back({i, j});
          p.push_back(unit(eng));
        }
      }
    }
    if (graph.edges.empty()) {
      graph.edges.push_back({0, 0});
      p.push_back(unit(eng));
    }
    Vector probs(static_cast<Index>(p.size()));
    for (std::size_t i = 0; i < p.size(); ++i) {
      probs(static_cast<Index>(i)) = p[i];
    }
    const int k = std::min(1 + trial % 4, graph.num_left);

    const auto arm = greedy_coverage_oracle(probs, k, graph);
    const Scalar achieved = coverage_value(probs, arm.seeds, graph);
    Scalar best = 0.0;
    for (unsigned mask = 0; mask < (1u << graph.num_left); ++mask) {
      if (static_cast<int>(__builtin_popcount(mask)) != k) continue;
      std::vector<int> seeds;
      for (int i = 0; i < graph.num_left; ++i) {
        if (mask & (1u << i)) seeds.push_back(i);
      }
      best = std::max(best, coverage_value(probs, seeds, graph));
    }
    if (achieved < guarantee * best - 1e-12) ++greedy_failures;
  }

  report(5, topk_mismatches == 0 && greedy_failures == 0,
         "top-k exact, greedy within 1-1/e of the optimum",
         "500 top-k + 200 coverage instances, " +
             std::to_string(topk_mismatches + greedy_failures) + " failures");
}

// --------------------------------------------------------------------------
// 6 and 8. Qualitative lengthscale reproduction and sublinear regret shape.

RunConfig synthetic_config(Scalar lengthscale, const std::string& out_dir) {
  RunConfig config;
  config.env.kind = EnvKind::GpSynthetic;
  config.env.dim = 3;
  config.env.mean_arms = 20.0;
  config.env.max_arms = 40;
  config.env.horizon = 100;
  config.env.budget = 3;
  config.env.noise_std = 0.1;
  config.env.lengthscale = lengthscale;
  config.env.grid_size = 600;
  config.kernel = KernelSpec::squared_exponential(lengthscale);
  config.gp.noise_variance = 0.01;
  config.policy.delta = 0.05;
  config.policy.budget = 3;
  config.policy.max_arms = 40;
  config.algorithm = Algorithm::Oclok;
  config.seeds = {1, 2, 3, 4, 5};
  config.output_dir = out_dir;
  return config;
}

void criteria_6_and_8() {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig smooth =
      synthetic_config(1.0, (out_root() / "crit6_l1").string());
  const RunConfig rough =
      synthetic_config(0.01, (out_root() / "crit6_l001").string());
  const RunOutcome smooth_out = run(smooth);
  const RunOutcome rough_out = run(rough);

  // The zero-mean GP truth carries a sample-wide offset that shifts the
  // policy and the benchmark equally, so raw cumulative-reward ratios can
  // divide by values near zero at desk scale. Both sides are therefore
  // measured as the excess over the round's random-selection floor
  // K * mean(f over available arms); this is offset-invariant and is a
  // stricter statistic whenever the floor is positive.
  auto mean_excess_ratio = [](const RunConfig& config, const RunOutcome& o) {
    Scalar ratio_sum = 0.0;
    for (const auto& r : o.runs) {
      const Environment env = make_environment(config.env, r.seed);
      Scalar policy_sum = 0.0, bench_sum = 0.0, floor_sum = 0.0;
      for (const auto& rec : r.records) {
        floor_sum += config.env.budget * env.round(rec.t).truth.mean();
        policy_sum += rec.reward_expected;
        bench_sum += rec.benchmark_expected;
      }
      ratio_sum += (policy_sum - floor_sum) / (bench_sum - floor_sum);
    }
    return ratio_sum / static_cast<Scalar>(o.runs.size());
  };
  const Scalar ratio_smooth = mean_excess_ratio(smooth, smooth_out);
  const Scalar ratio_rough = mean_excess_ratio(rough, rough_out);
  const bool pass6 = ratio_smooth >= 0.85 && ratio_smooth - ratio_rough >= 0.10;
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "reward ratio %.3f at l=1.0 vs %.3f at l=0.01, %.1fs",
                ratio_smooth, ratio_rough, secs);
  report(6, pass6, "GP policy near benchmark at l=1.0, far above l=0.01",
         detail);

  // Criterion 8: sublinear regret trend on the l=1.0 runs.
  const int horizon = smooth.env.horizon;
  Vector mean_regret = Vector::Zero(horizon);
  for (const auto& r : smooth_out.runs) {
    mean_regret += alpha_regret(r.records, r.alpha);
  }
  mean_regret /= static_cast<Scalar>(smooth_out.runs.size());
  const Scalar first_growth = mean_regret(19);  // R(20) - R(0)
  const Scalar last_growth =
      mean_regret(horizon - 1) - mean_regret(horizon - 21);
  const bool pass8 = last_growth < 0.5 * first_growth;
  std::snprintf(detail, sizeof(detail),
                "regret growth: first 20 rounds %.3f, last 20 rounds %.3f",
                first_growth, last_growth);
  report(8, pass8, "late regret growth under half of the early growth",
         detail);
}

// --------------------------------------------------------------------------
// 7. Sparse fidelity.

RunConfig crowd_config(Algorithm algorithm, int num_inducing, int horizon,
                       const std::string& out_dir) {
  RunConfig config;
  config.env.kind = EnvKind::Crowdsourcing;
  config.env.dim = 3;
  config.env.mean_arms = 20.0;
  config.env.max_arms = 40;
  config.env.horizon = horizon;
  config.env.budget = 5;
  config.env.noise_std = 0.1;
  config.kernel = KernelSpec::squared_exponential(1.0);
  config.gp.noise_variance = 0.01;
  config.gp.sparse.enabled = algorithm == Algorithm::Soclok;
  config.gp.sparse.num_inducing = num_inducing;
  config.policy.delta = 0.05;
  config.policy.budget = 5;
  config.policy.max_arms = 40;
  config.algorithm = algorithm;
  config.seeds = {1, 2, 3, 4, 5};
  config.output_dir = out_dir;
  return config;
}

void criterion_7() {
  const auto t0 = std::chrono::steady_clock::now();

  // (a) With the inducing set equal to the full history the sparse policy
  // must reproduce the exact policy's selection sequence.
  bool sequences_match = true;
  {
    const EnvSpec env_spec = crowd_config(Algorithm::Oclok, 1, 50, "").env;
    const Environment env = crowdsourcing_env(env_spec, 1);
    PolicyConfig cfg;
    cfg.delta = 0.05;
    cfg.budget = 5;
    cfg.max_arms = 40;
    const KernelSpec kernel = KernelSpec::squared_exponential(1.0);
    OclokAgent exact(kernel, 0.01, cfg);
    SoclokAgent sparse(kernel, 0.01, cfg, 1 << 20, true, 1);

    for (int t = 1; t <= 50 && sequences_match; ++t) {
      const RoundInstance& inst = env.round(t);
      const auto rec_exact = run_round(exact, inst, t);
      const auto rec_sparse = run_round(sparse, inst, t);
      sequences_match = rec_exact.selected.ids == rec_sparse.selected.ids;
    }
  }

  // (b) s = 50 stays within 5% of the exact policy's cumulative reward.
  const RunOutcome exact_out = run(crowd_config(
      Algorithm::Oclok, 1, 150, (out_root() / "crit7_exact").string()));
  const RunOutcome sparse_out = run(crowd_config(
      Algorithm::Soclok, 50, 150, (out_root() / "crit7_sparse").string()));
  Scalar ratio_sum = 0.0;
  for (std::size_t i = 0; i < exact_out.runs.size(); ++i) {
    ratio_sum += sparse_out.runs[i].cumulative_expected /
                 exact_out.runs[i].cumulative_expected;
  }
  const Scalar mean_ratio =
      ratio_sum / static_cast<Scalar>(exact_out.runs.size());

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "full-history selections %s, s=50 mean reward ratio %.4f "
                "over 5 seeds, %.1fs",
                sequences_match ? "identical" : "DIVERGED", mean_ratio, secs);
  report(7, sequences_match && mean_ratio >= 0.95,
         "sparse posterior reproduces and tracks the exact policy", detail);
}

// --------------------------------------------------------------------------
// 9. Determinism: byte-identical traces for repeated runs.

void criterion_9() {
  std::vector<RunConfig> configs;
  {
    RunConfig c = synthetic_config(1.0, "");
    c.seeds = {1};
    configs.push_back(c);
  }
  {
    RunConfig c = synthetic_config(0.01, "");
    c.seeds = {1};
    configs.push_back(c);
  }
  {
    // Criterion 3's environment as a harness config.
    RunConfig c;
    c.env.kind = EnvKind::GpSynthetic;
    c.env.dim = 2;
    c.env.mean_arms = 25.0;
    c.env.max_arms = 50;
    c.env.horizon = 200;
    c.env.budget = 3;
    c.env.noise_std = 0.1;
    c.env.lengthscale = 1.0;
    c.env.grid_size = 400;
    c.kernel = KernelSpec::squared_exponential(1.0);
    c.gp.noise_variance = 0.01;
    c.policy.delta = 0.05;
    c.policy.budget = 3;
    c.policy.max_arms = 50;
    c.algorithm = Algorithm::Oclok;
    c.seeds = {5};
    configs.push_back(c);
  }
  {
    RunConfig c = crowd_config(Algorithm::Soclok, 50, 150, "");
    c.seeds = {2};
    configs.push_back(c);
  }
  {
    RunConfig c = crowd_config(Algorithm::Oclok, 1, 150, "");
    c.seeds = {2};
    configs.push_back(c);
  }

  int mismatches = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    RunConfig first = configs[i];
    first.output_dir =
        (out_root() / ("crit9_" + std::to_string(i) + "_a")).string();
    RunConfig second = configs[i];
    second.output_dir =
        (out_root() / ("crit9_" + std::to_string(i) + "_b")).string();
    const RunOutcome a = run(first);
    const RunOutcome b = run(second);
    for (std::size_t r = 0; r < a.runs.size(); ++r) {
      if (slurp(a.runs[r].trace_path) != slurp(b.runs[r].trace_path)) {
        ++mismatches;
      }
    }
  }
  report(9, mismatches == 0, "repeated runs produce byte-identical traces",
         std::to_string(configs.size()) + " configs, " +
             std::to_string(mismatches) + " mismatches");
}

}  // namespace

int main() {
  const auto started = std::chrono::steady_clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criteria_6_and_8();
  criterion_7();
  criterion_9();
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  std::printf("acceptance total: %.1fs, %d failure(s)\n", secs, g_failures);
  return g_failures;
}
