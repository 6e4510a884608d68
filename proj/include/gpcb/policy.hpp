#pragma once

#include <memory>
#include <optional>

#include "gpcb/environments.hpp"
#include "gpcb/gp.hpp"
#include "gpcb/sparse_gp.hpp"
#include "gpcb/types.hpp"

namespace gpcb {

struct PolicyConfig {
  Scalar delta = 0.05;
  int max_arms = 50;  // M, the global bound on M_t used in beta
  int budget = 1;     // K
  std::optional<Scalar> beta_override;
};

void validate(const PolicyConfig& cfg);

/// Exploration coefficient beta_t = 2 ln(M pi^2 t^2 / (3 delta)), unless
/// overridden.
Scalar beta(int t, const PolicyConfig& cfg);

/// Per-arm UCB indices i_t = mean + sqrt(beta_t) * stddev, all computed
/// against the posterior state from before the round's observations.
struct IndexVector {
  Vector index;
  Vector mean;
  Vector stddev;
};

IndexVector compute_indices(const GPState& state, const ContextSet& available,
                            int t, const PolicyConfig& cfg);
IndexVector compute_indices(const SparseGPState& state,
                            const ContextSet& available, int t,
                            const PolicyConfig& cfg);

/// A policy's per-round view: produce values for the oracle, then absorb the
/// semi-bandit feedback of the selected arms. One agent drives one run.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual IndexVector indices(const RoundInstance& inst, int t) = 0;
  virtual void observe(const ContextSet& contexts, const Vector& outcomes) = 0;
  /// The exploration coefficient this agent applies in round t (0 when it
  /// has none, e.g. the clairvoyant benchmark).
  virtual Scalar beta_at(int t) const = 0;
};

/// Exact-posterior O'CLOK-UCB.
class OclokAgent final : public Agent {
 public:
  OclokAgent(KernelSpec kernel, Scalar noise_variance, PolicyConfig cfg);
  IndexVector indices(const RoundInstance& inst, int t) override;
  void observe(const ContextSet& contexts, const Vector& outcomes) override;
  Scalar beta_at(int t) const override { return beta(t, cfg_); }
  const GPState& state() const { return gp_; }

 private:
  PolicyConfig cfg_;
  GPState gp_;
};

/// Sparse-posterior SO'CLOK-UCB. Resamples the inducing set from the
/// observation history after every update (or keeps the first sample when
/// reseed_each_round is off).
class SoclokAgent final : public Agent {
 public:
  SoclokAgent(KernelSpec kernel, Scalar noise_variance, PolicyConfig cfg,
              Index num_inducing, bool reseed_each_round, std::uint64_t seed);
  IndexVector indices(const RoundInstance& inst, int t) override;
  void observe(const ContextSet& contexts, const Vector& outcomes) override;
  Scalar beta_at(int t) const override { return beta(t, cfg_); }
  const SparseGPState& state() const { return gp_; }

 private:
  PolicyConfig cfg_;
  SparseGPState gp_;
  Index num_inducing_;
  bool reseed_each_round_;
};

/// Clairvoyant benchmark: feeds the true expected outcomes to the oracle.
class BenchmarkAgent final : public Agent {
 public:
  explicit BenchmarkAgent(PolicyConfig cfg) : cfg_(cfg) { validate(cfg_); }
  IndexVector indices(const RoundInstance& inst, int t) override;
  void observe(const ContextSet&, const Vector&) override {}
  Scalar beta_at(int) const override { return 0.0; }

 private:
  PolicyConfig cfg_;
};

/// Everything the trace records about one round.
struct RoundRecord {
  int t = 0;
  int m_t = 0;
  SuperArm selected;
  Scalar reward_realized = 0.0;
  Scalar reward_expected = 0.0;
  Scalar opt_expected = 0.0;
  Scalar benchmark_expected = 0.0;
  Scalar beta_used = 0.0;
  double wall_ms = 0.0;
};

/// One step of Algorithm 1: indices -> oracle -> semi-bandit feedback ->
/// posterior update. Also evaluates the round's clairvoyant benchmark and
/// optimum for regret accounting. Fails fast if the oracle ever returns an
/// infeasible set. `oracle_override` ablates the agent's oracle only; the
/// benchmark keeps the environment's own oracle.
RoundRecord run_round(Agent& agent, const RoundInstance& inst, int t,
                      ClampCounter* clamps = nullptr,
                      bool record_timing = false,
                      OracleKind oracle_override = OracleKind::Auto);

/// The clairvoyant selection for one round.
SuperArm benchmark_round(const RoundInstance& inst,
                         ClampCounter* clamps = nullptr);

}  // namespace gpcb
