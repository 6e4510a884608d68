#pragma once

#include "gpcb/kernels.hpp"
#include "gpcb/types.hpp"

namespace gpcb {

struct PosteriorSummary {
  Scalar mean = 0.0;
  Scalar variance = 0.0;  // clamped into [0, k(x,x)]
};

/// Exact GP posterior over a growing history of semi-bandit observations.
/// A state is an immutable value: batch_update returns a new state whose
/// triangular factor of K_[N] + sigma^2 I is extended by a rank-|S_t| block,
/// never refactorized from scratch.
class GPState {
 public:
  GPState(KernelSpec kernel, Scalar noise_variance);

  /// Appends one round's selected contexts (rows) and observed outcomes.
  /// Throws InputError when the batch is empty or lengths mismatch.
  GPState batch_update(const ContextSet& contexts,
                       const Vector& outcomes) const;

  PosteriorSummary posterior(const Context& x) const;

  /// Posterior at each row of `queries`; one summary per row, computed
  /// through a single blocked triangular solve.
  std::vector<PosteriorSummary> posterior_batch(const ContextSet& queries) const;

  Index size() const { return outcomes_.size(); }
  const KernelSpec& kernel() const { return kernel_; }
  Scalar noise_variance() const { return noise_variance_; }
  const ContextSet& history_contexts() const { return contexts_; }
  const Vector& history_outcomes() const { return outcomes_; }
  const Matrix& gram_factor() const { return factor_; }

 private:
  KernelSpec kernel_;
  Scalar noise_variance_;
  ContextSet contexts_;  // N x D
  Vector outcomes_;      // N
  Matrix factor_;        // lower triangular, factor_ factor_^T = K + s2 I
  Vector half_solve_;    // factor_^{-1} outcomes_
};

}  // namespace gpcb
