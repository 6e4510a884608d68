#include "gpcb/environments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "gpcb/errors.hpp"
#include "gpcb/kernels.hpp"
#include "gpcb/linalg.hpp"
#include "gpcb/rng.hpp"

namespace gpcb {
namespace {

// Std of the Gaussian bump in the crowdsourcing outcome function.
constexpr Scalar kCrowdWidth = 0.4;

int dataset_horizon(const EnvSpec& spec) {
  return std::max(spec.horizon, spec.max_horizon);
}

int clamped_poisson(std::poisson_distribution<int>& dist, rng::Engine& eng,
                    int lo, int hi, long& clamps) {
  const int draw = dist(eng);
  if (draw < lo || draw > hi) {
    ++clamps;
    return std::clamp(draw, lo, hi);
  }
  return draw;
}

}  // namespace

Scalar crowdsourcing_outcome_mean(const Context& x) {
  if (x.size() != 3) {
    throw InputError("crowdsourcing_outcome_mean: context must be 3D");
  }
  return std::exp(-x(0) * x(0) / (2.0 * kCrowdWidth * kCrowdWidth)) *
         std::sqrt(x(1) * x(2));
}

Scalar movie_activation_probability(Scalar x) {
  return 2.0 / (1.0 + std::exp(-4.0 * x)) - 1.0;
}

void validate(const EnvSpec& spec) {
  if (spec.horizon < 1) throw ConfigError("env.horizon: must be >= 1");
  if (spec.max_horizon != 0 && spec.max_horizon < spec.horizon) {
    throw ConfigError("env.max_horizon: must be 0 or >= env.horizon");
  }
  if (spec.budget < 1) throw ConfigError("env.budget: must be >= 1");
  if (spec.mean_arms <= 0.0) throw ConfigError("env.mean_arms: must be positive");
  if (spec.max_arms < 1) throw ConfigError("env.max_arms: must be >= 1");
  switch (spec.kind) {
    case EnvKind::GpSynthetic:
      if (spec.dim < 1) throw ConfigError("env.dim: must be >= 1");
      if (spec.lengthscale <= 0.0) {
        throw ConfigError("env.lengthscale: must be positive");
      }
      if (spec.noise_std <= 0.0) {
        throw ConfigError("env.noise_std: must be positive");
      }
      if (spec.grid_size < spec.max_arms) {
        throw ConfigError("env.grid_size: must be >= env.max_arms");
      }
      return;
    case EnvKind::Crowdsourcing:
      if (spec.dim != 3) {
        throw ConfigError(
            "env.dim: crowdsourcing contexts are (distance, difficulty, "
            "battery), dim must be 3");
      }
      if (spec.noise_std <= 0.0) {
        throw ConfigError("env.noise_std: must be positive");
      }
      return;
    case EnvKind::MovieCoverage:
      if (spec.dim != 1) {
        throw ConfigError(
            "env.dim: movie_coverage edge contexts are scalar, dim must be 1");
      }
      if (spec.mean_left <= 0.0) {
        throw ConfigError("env.mean_left: must be positive");
      }
      if (spec.mean_right <= 0.0) {
        throw ConfigError("env.mean_right: must be positive");
      }
      if (spec.edge_density <= 0.0 || spec.edge_density > 1.0) {
        throw ConfigError("env.edge_density: must be in (0, 1]");
      }
      return;
  }
  throw ConfigError("env.kind: unknown environment kind");
}

Environment gp_synthetic_env(const EnvSpec& raw, std::uint64_t seed) {
  EnvSpec spec = raw;
  spec.kind = EnvKind::GpSynthetic;
  validate(spec);

  auto structure = rng::make_engine(seed, rng::Stream::EnvStructure);
  auto noise = rng::make_engine(seed, rng::Stream::EnvNoise);
  std::uniform_real_distribution<Scalar> unit(0.0, 1.0);
  std::normal_distribution<Scalar> standard_normal(0.0, 1.0);

  // Ground truth: one sample of the zero-mean GP on a fixed grid, drawn
  // through the Gram factor.
  ContextSet grid(spec.grid_size, spec.dim);
  for (Index i = 0; i < grid.rows(); ++i) {
    for (Index d = 0; d < grid.cols(); ++d) grid(i, d) = unit(structure);
  }
  const KernelSpec kernel = KernelSpec::squared_exponential(spec.lengthscale);
  Matrix factor = cholesky_with_jitter(gram_matrix(kernel, grid));
  Vector z(spec.grid_size);
  for (Index i = 0; i < z.size(); ++i) z(i) = standard_normal(structure);
  Vector f_grid = factor * z;

  Environment env;
  env.spec = spec;
  env.alpha = 1.0;

  std::poisson_distribution<int> arm_count(spec.mean_arms);
  std::vector<Index> grid_ids(static_cast<std::size_t>(spec.grid_size));
  std::iota(grid_ids.begin(), grid_ids.end(), Index{0});

  const int total_rounds = dataset_horizon(spec);
  env.rounds.reserve(static_cast<std::size_t>(total_rounds));
  for (int t = 1; t <= total_rounds; ++t) {
    const int m =
        clamped_poisson(arm_count, structure, 1, spec.max_arms,
                        env.poisson_clamps);
    std::vector<Index> picks;
    picks.reserve(static_cast<std::size_t>(m));
    std::sample(grid_ids.begin(), grid_ids.end(), std::back_inserter(picks),
                m, structure);

    RoundInstance inst;
    inst.t = t;
    inst.contexts.resize(m, spec.dim);
    inst.truth.resize(m);
    inst.outcomes.resize(m);
    for (int a = 0; a < m; ++a) {
      const Index g = picks[static_cast<std::size_t>(a)];
      inst.contexts.row(a) = grid.row(g);
      inst.truth(a) = f_grid(g);
      inst.outcomes(a) = f_grid(g) + spec.noise_std * standard_normal(noise);
    }
    inst.feasibility = {FeasibilityKind::TopK, spec.budget, std::nullopt};
    inst.reward = RewardKind::Sum;
    env.rounds.push_back(std::move(inst));
  }
  return env;
}

Environment crowdsourcing_env(const EnvSpec& raw, std::uint64_t seed) {
  EnvSpec spec = raw;
  spec.kind = EnvKind::Crowdsourcing;
  validate(spec);

  auto structure = rng::make_engine(seed, rng::Stream::EnvStructure);
  auto noise = rng::make_engine(seed, rng::Stream::EnvNoise);
  std::uniform_real_distribution<Scalar> unit(0.0, 1.0);
  std::normal_distribution<Scalar> standard_normal(0.0, 1.0);
  std::poisson_distribution<int> arm_count(spec.mean_arms);

  Environment env;
  env.spec = spec;
  env.alpha = 1.0;

  const int total_rounds = dataset_horizon(spec);
  env.rounds.reserve(static_cast<std::size_t>(total_rounds));
  for (int t = 1; t <= total_rounds; ++t) {
    const int m =
        clamped_poisson(arm_count, structure, 1, spec.max_arms,
                        env.poisson_clamps);
    RoundInstance inst;
    inst.t = t;
    inst.contexts.resize(m, 3);
    inst.truth.resize(m);
    inst.outcomes.resize(m);
    for (int a = 0; a < m; ++a) {
      const Scalar distance = unit(structure);
      const Scalar difficulty = unit(structure);
      const Scalar battery = unit(structure);
      inst.contexts(a, 0) = distance;
      inst.contexts(a, 1) = difficulty;
      inst.contexts(a, 2) = battery;
      inst.truth(a) = crowdsourcing_outcome_mean(inst.contexts.row(a).transpose());
      inst.outcomes(a) = inst.truth(a) + spec.noise_std * standard_normal(noise);
    }
    inst.feasibility = {FeasibilityKind::TopK, spec.budget, std::nullopt};
    inst.reward = RewardKind::LogSum;
    env.rounds.push_back(std::move(inst));
  }
  return env;
}

Environment movie_coverage_env(const EnvSpec& raw, std::uint64_t seed) {
  EnvSpec spec = raw;
  spec.kind = EnvKind::MovieCoverage;
  validate(spec);

  auto structure = rng::make_engine(seed, rng::Stream::EnvStructure);
  auto noise = rng::make_engine(seed, rng::Stream::EnvNoise);
  std::uniform_real_distribution<Scalar> unit(0.0, 1.0);
  std::poisson_distribution<int> left_count(spec.mean_left);
  std::poisson_distribution<int> right_count(spec.mean_right);

  Environment env;
  env.spec = spec;
  env.alpha = 1.0 - 1.0 / std::exp(1.0);

  const int total_rounds = dataset_horizon(spec);
  env.rounds.reserve(static_cast<std::size_t>(total_rounds));
  for (int t = 1; t <= total_rounds; ++t) {
    const int num_left =
        clamped_poisson(left_count, structure, 1,
                        std::numeric_limits<int>::max(), env.poisson_clamps);
    const int num_right =
        clamped_poisson(right_count, structure, 1,
                        std::numeric_limits<int>::max(), env.poisson_clamps);

    BipartiteGraph graph;
    graph.num_left = num_left;
    graph.num_right = num_right;
    std::vector<Scalar> edge_contexts;
    for (int i = 0; i < num_left; ++i) {
      for (int j = 0; j < num_right; ++j) {
        if (unit(structure) >= spec.edge_density) continue;
        if (static_cast<int>(graph.edges.size()) >= spec.max_arms) {
          ++env.edge_truncations;
          continue;
        }
        graph.edges.push_back({i, j});
        edge_contexts.push_back(unit(structure));
      }
    }
    if (graph.edges.empty()) {
      // Keep every round playable.
      graph.edges.push_back({0, 0});
      edge_contexts.push_back(unit(structure));
    }

    const int m = static_cast<int>(graph.edges.size());
    RoundInstance inst;
    inst.t = t;
    inst.contexts.resize(m, 1);
    inst.truth.resize(m);
    inst.outcomes.resize(m);
    for (int e = 0; e < m; ++e) {
      const Scalar x = edge_contexts[static_cast<std::size_t>(e)];
      inst.contexts(e, 0) = x;
      inst.truth(e) = movie_activation_probability(x);
      inst.outcomes(e) = unit(noise) < inst.truth(e) ? 1.0 : 0.0;
    }
    inst.feasibility = {FeasibilityKind::CoverageLeftNodes, spec.budget, graph};
    inst.reward = RewardKind::Coverage;
    env.rounds.push_back(std::move(inst));
  }
  return env;
}

Environment make_environment(const EnvSpec& spec, std::uint64_t seed) {
  switch (spec.kind) {
    case EnvKind::GpSynthetic:
      return gp_synthetic_env(spec, seed);
    case EnvKind::Crowdsourcing:
      return crowdsourcing_env(spec, seed);
    case EnvKind::MovieCoverage:
      return movie_coverage_env(spec, seed);
  }
  throw ConfigError("env.kind: unknown environment kind");
}

Scalar reward_of_values(const RoundInstance& inst, const SuperArm& arm,
                        const Vector& values) {
  switch (inst.reward) {
    case RewardKind::Sum:
    case RewardKind::LogSum: {
      Scalar sum = 0.0;
      for (int id : arm.ids) sum += values(id);
      return inst.reward == RewardKind::Sum ? sum : std::log1p(sum);
    }
    case RewardKind::Coverage:
      return coverage_value(values, arm.seeds, *inst.feasibility.graph);
  }
  throw InputError("reward_of_values: unknown reward kind");
}

Scalar expected_reward(const RoundInstance& inst, const SuperArm& arm) {
  return reward_of_values(inst, arm, inst.truth);
}

Scalar realized_reward(const RoundInstance& inst, const SuperArm& arm) {
  if (inst.reward != RewardKind::Coverage) {
    return reward_of_values(inst, arm, inst.outcomes);
  }
  // Count right nodes with at least one activated selected edge.
  const auto& graph = *inst.feasibility.graph;
  std::vector<bool> hit(static_cast<std::size_t>(graph.num_right), false);
  for (int e : arm.ids) {
    if (inst.outcomes(e) > 0.5) {
      hit[static_cast<std::size_t>(
          graph.edges[static_cast<std::size_t>(e)].right)] = true;
    }
  }
  return static_cast<Scalar>(std::count(hit.begin(), hit.end(), true));
}

Scalar optimum_expected(const RoundInstance& inst, long enum_limit) {
  const int k = std::min(inst.feasibility.budget, inst.num_arms());
  if (inst.feasibility.kind == FeasibilityKind::TopK) {
    // Sum and LogSum are increasing in the value sum, so top-K is exact.
    return expected_reward(inst, top_k_oracle(inst.truth, k));
  }

  const auto& graph = *inst.feasibility.graph;
  const int seeds_to_pick = std::min(inst.feasibility.budget, graph.num_left);
  // Exhaustive search over seed subsets while C(L, K) stays desk-sized.
  double combos = 1.0;
  for (int i = 0; i < seeds_to_pick; ++i) {
    combos *= static_cast<double>(graph.num_left - i) /
              static_cast<double>(i + 1);
  }
  if (combos > static_cast<double>(enum_limit)) {
    return expected_reward(
        inst, greedy_coverage_oracle(inst.truth, seeds_to_pick, graph));
  }

  std::vector<int> seeds(static_cast<std::size_t>(seeds_to_pick));
  std::iota(seeds.begin(), seeds.end(), 0);
  Scalar best = 0.0;
  while (true) {
    best = std::max(best, coverage_value(inst.truth, seeds, graph));
    // next combination
    int i = seeds_to_pick - 1;
    while (i >= 0 &&
           seeds[static_cast<std::size_t>(i)] == graph.num_left - seeds_to_pick + i) {
      --i;
    }
    if (i < 0) break;
    ++seeds[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < seeds_to_pick; ++j) {
      seeds[static_cast<std::size_t>(j)] = seeds[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return best;
}

}  // namespace gpcb
