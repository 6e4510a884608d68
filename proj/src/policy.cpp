#include "gpcb/policy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "gpcb/errors.hpp"

namespace gpcb {
namespace {

template <typename Summaries>
IndexVector indices_from_summaries(const Summaries& posteriors, Scalar beta_t) {
  const auto n = static_cast<Index>(posteriors.size());
  const Scalar root_beta = std::sqrt(beta_t);
  IndexVector out;
  out.index.resize(n);
  out.mean.resize(n);
  out.stddev.resize(n);
  for (Index i = 0; i < n; ++i) {
    const auto& p = posteriors[static_cast<std::size_t>(i)];
    out.mean(i) = p.mean;
    out.stddev(i) = std::sqrt(std::max(p.variance, 0.0));
    out.index(i) = out.mean(i) + root_beta * out.stddev(i);
  }
  return out;
}

void check_feasible(const RoundInstance& inst, const SuperArm& arm) {
  const int m = inst.num_arms();
  const int budget = inst.feasibility.budget;
  int prev = -1;
  for (int id : arm.ids) {
    if (id <= prev || id >= m) {
      throw std::logic_error("run_round: oracle returned an infeasible set");
    }
    prev = id;
  }
  if (inst.feasibility.kind == FeasibilityKind::TopK) {
    if (static_cast<int>(arm.ids.size()) > budget) {
      throw std::logic_error("run_round: oracle exceeded the budget");
    }
  } else {
    if (static_cast<int>(arm.seeds.size()) > budget) {
      throw std::logic_error("run_round: oracle exceeded the seed budget");
    }
  }
}

}  // namespace

void validate(const PolicyConfig& cfg) {
  if (cfg.delta <= 0.0 || cfg.delta >= 1.0) {
    throw ConfigError("policy.delta: must be in (0, 1)");
  }
  if (cfg.budget < 1) throw ConfigError("policy.budget: must be >= 1");
  if (cfg.max_arms < 1) throw ConfigError("policy.max_arms: must be >= 1");
  if (cfg.beta_override.has_value() && *cfg.beta_override < 0.0) {
    throw ConfigError("policy.beta_override: must be non-negative");
  }
}

Scalar beta(int t, const PolicyConfig& cfg) {
  if (cfg.beta_override.has_value()) return *cfg.beta_override;
  const Scalar m = static_cast<Scalar>(cfg.max_arms);
  const Scalar tt = static_cast<Scalar>(t);
  constexpr Scalar pi2 = std::numbers::pi_v<Scalar> * std::numbers::pi_v<Scalar>;
  return 2.0 * std::log(m * pi2 * tt * tt / (3.0 * cfg.delta));
}

IndexVector compute_indices(const GPState& state, const ContextSet& available,
                            int t, const PolicyConfig& cfg) {
  validate(cfg);
  if (available.rows() == 0) {
    throw InputError("compute_indices: no available arms");
  }
  if (t < 1) throw InputError("compute_indices: rounds are 1-based");
  return indices_from_summaries(state.posterior_batch(available), beta(t, cfg));
}

IndexVector compute_indices(const SparseGPState& state,
                            const ContextSet& available, int t,
                            const PolicyConfig& cfg) {
  validate(cfg);
  if (available.rows() == 0) {
    throw InputError("compute_indices: no available arms");
  }
  if (t < 1) throw InputError("compute_indices: rounds are 1-based");
  return indices_from_summaries(state.posterior_batch(available), beta(t, cfg));
}

OclokAgent::OclokAgent(KernelSpec kernel, Scalar noise_variance,
                       PolicyConfig cfg)
    : cfg_(cfg), gp_(kernel, noise_variance) {
  validate(cfg_);
}

IndexVector OclokAgent::indices(const RoundInstance& inst, int t) {
  return compute_indices(gp_, inst.contexts, t, cfg_);
}

void OclokAgent::observe(const ContextSet& contexts, const Vector& outcomes) {
  gp_ = gp_.batch_update(contexts, outcomes);
}

SoclokAgent::SoclokAgent(KernelSpec kernel, Scalar noise_variance,
                         PolicyConfig cfg, Index num_inducing,
                         bool reseed_each_round, std::uint64_t seed)
    : cfg_(cfg),
      gp_(kernel, noise_variance, seed),
      num_inducing_(num_inducing),
      reseed_each_round_(reseed_each_round) {
  validate(cfg_);
  if (num_inducing_ < 1) {
    throw ConfigError("gp.sparse.num_inducing: must be >= 1");
  }
}

IndexVector SoclokAgent::indices(const RoundInstance& inst, int t) {
  return compute_indices(gp_, inst.contexts, t, cfg_);
}

void SoclokAgent::observe(const ContextSet& contexts, const Vector& outcomes) {
  gp_ = gp_.batch_update(contexts, outcomes);
  if (reseed_each_round_ || gp_.inducing_count() == 0) {
    gp_ = gp_.resample_inducing(num_inducing_);
  }
}

IndexVector BenchmarkAgent::indices(const RoundInstance& inst, int t) {
  IndexVector out;
  out.index = inst.truth;
  out.mean = inst.truth;
  out.stddev = Vector::Zero(inst.truth.size());
  (void)t;
  return out;
}

SuperArm benchmark_round(const RoundInstance& inst, ClampCounter* clamps) {
  return run_oracle(inst.feasibility, inst.truth, clamps);
}

RoundRecord run_round(Agent& agent, const RoundInstance& inst, int t,
                      ClampCounter* clamps, bool record_timing,
                      OracleKind oracle_override) {
  const auto started = std::chrono::steady_clock::now();

  IndexVector indices = agent.indices(inst, t);
  SuperArm selected =
      run_oracle(inst.feasibility, indices.index, clamps, oracle_override);
  check_feasible(inst, selected);

  // Semi-bandit feedback: outcomes of the selected arms only.
  const auto picked = static_cast<Index>(selected.ids.size());
  ContextSet observed_contexts(picked, inst.contexts.cols());
  Vector observed_outcomes(picked);
  for (Index i = 0; i < picked; ++i) {
    const int id = selected.ids[static_cast<std::size_t>(i)];
    observed_contexts.row(i) = inst.contexts.row(id);
    observed_outcomes(i) = inst.outcomes(id);
  }
  if (picked > 0) {
    agent.observe(observed_contexts, observed_outcomes);
  }

  RoundRecord rec;
  rec.t = t;
  rec.m_t = inst.num_arms();
  rec.selected = std::move(selected);
  rec.reward_realized = realized_reward(inst, rec.selected);
  rec.reward_expected = expected_reward(inst, rec.selected);
  rec.opt_expected = optimum_expected(inst);
  rec.benchmark_expected = expected_reward(inst, benchmark_round(inst, clamps));
  rec.beta_used = agent.beta_at(t);
  if (record_timing) {
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - started)
                      .count();
  }
  return rec;
}

}  // namespace gpcb
