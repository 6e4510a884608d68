#pragma once

#include <cstdint>
#include <vector>

#include "gpcb/oracles.hpp"
#include "gpcb/types.hpp"

namespace gpcb {

enum class EnvKind { GpSynthetic, Crowdsourcing, MovieCoverage };

/// How a super arm's reward is computed from per-arm values.
enum class RewardKind { Sum, LogSum, Coverage };

struct EnvSpec {
  EnvKind kind = EnvKind::GpSynthetic;
  int dim = 3;              // context dimension (crowdsourcing fixes 3, movie 1)
  double mean_arms = 20.0;  // Poisson mean for M_t
  int max_arms = 50;        // clamp bound M; also caps coverage edge counts
  int horizon = 100;        // rounds to play
  int max_horizon = 0;      // dataset horizon; 0 means horizon. Runs with a
                            // shorter horizon see a truncation of the same
                            // dataset.
  int budget = 3;           // K
  double noise_std = 0.1;   // eta std (gp_synthetic, crowdsourcing)

  // gp_synthetic
  double lengthscale = 1.0;
  int grid_size = 600;

  // movie_coverage
  double mean_left = 8.0;
  double mean_right = 25.0;
  double edge_density = 0.3;
};

/// One round's available base arms and hidden truth. `outcomes` holds the
/// pre-drawn noisy observation per arm; the policy only ever sees the
/// entries of its selected super arm.
struct RoundInstance {
  int t = 0;
  ContextSet contexts;  // M_t x D
  Vector truth;         // f(x) per arm
  Vector outcomes;      // r(x) per arm (Gaussian noise or Bernoulli draw)
  FeasibilitySpec feasibility;
  RewardKind reward = RewardKind::Sum;

  int num_arms() const { return static_cast<int>(contexts.rows()); }
};

/// A fully materialized, seeded arrival stream. (spec, seed) determines
/// every context, truth value and outcome.
struct Environment {
  EnvSpec spec;
  Scalar alpha = 1.0;  // approximation factor of the matching oracle
  std::vector<RoundInstance> rounds;
  long poisson_clamps = 0;
  long edge_truncations = 0;

  const RoundInstance& round(int t) const {
    return rounds.at(static_cast<std::size_t>(t - 1));
  }
  int horizon() const { return spec.horizon; }
};

/// Throws ConfigError (naming the env.* field) when a spec is unusable for
/// its kind.
void validate(const EnvSpec& spec);

/// Crowdsourcing outcome mean A g(x1) sqrt(x2 x3) for x = (distance,
/// difficulty, battery); g is the N(0, 0.4^2) density and A its peak
/// normalizer, so values stay in [0, 1].
Scalar crowdsourcing_outcome_mean(const Context& x);

/// Edge activation probability 2 / (1 + exp(-4 x)) - 1 of the coverage
/// environment, mapping [0,1] contexts into [0, ~0.964].
Scalar movie_activation_probability(Scalar x);

Environment gp_synthetic_env(const EnvSpec& spec, std::uint64_t seed);
Environment crowdsourcing_env(const EnvSpec& spec, std::uint64_t seed);
Environment movie_coverage_env(const EnvSpec& spec, std::uint64_t seed);

/// Dispatch on spec.kind.
Environment make_environment(const EnvSpec& spec, std::uint64_t seed);

/// u(f(x_S)): expected reward of a super arm under the hidden truth.
Scalar expected_reward(const RoundInstance& inst, const SuperArm& arm);

/// U(r(x_S)): realized reward from the pre-drawn outcomes.
Scalar realized_reward(const RoundInstance& inst, const SuperArm& arm);

/// Reward of a candidate value vector (used by tests and the optimum
/// search): applies the round's reward map to `values` restricted to `arm`.
Scalar reward_of_values(const RoundInstance& inst, const SuperArm& arm,
                        const Vector& values);

/// opt(f_t): exhaustive over the feasible family when the search space is
/// at most `enum_limit` candidates, otherwise the deterministic oracle's
/// value on the truth (the alpha-approximation the regret is measured
/// against anyway).
Scalar optimum_expected(const RoundInstance& inst, long enum_limit = 200000);

}  // namespace gpcb
