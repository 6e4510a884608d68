#pragma once

#include <cstdint>
#include <vector>

#include "gpcb/gp.hpp"
#include "gpcb/kernels.hpp"
#include "gpcb/rng.hpp"
#include "gpcb/types.hpp"

namespace gpcb {

/// Sparse GP posterior: s inducing contexts drawn uniformly from the
/// observation history, with all N outcomes projected through them
/// (deterministic Nystrom / projected-process equations). Per-round
/// preparation costs O(s^2 N); each query costs O(s^2). With the inducing
/// set equal to the full history the posterior coincides with the exact one.
class SparseGPState {
 public:
  SparseGPState(KernelSpec kernel, Scalar noise_variance, std::uint64_t seed);

  /// Appends observations and refreshes the projection through the current
  /// inducing set. Same contract as GPState::batch_update.
  SparseGPState batch_update(const ContextSet& contexts,
                             const Vector& outcomes) const;

  /// Draws s history indices uniformly without replacement from the state's
  /// rng stream. s is clamped into [1, N]; with an empty history this is a
  /// no-op. Repeated calls on the same state return the same set.
  SparseGPState resample_inducing(Index s) const;

  PosteriorSummary sparse_posterior(const Context& x) const;
  std::vector<PosteriorSummary> posterior_batch(const ContextSet& queries) const;

  Index size() const { return outcomes_.size(); }
  Index inducing_count() const { return static_cast<Index>(inducing_.size()); }
  const std::vector<Index>& inducing_indices() const { return inducing_; }
  ContextSet inducing_points() const;
  const KernelSpec& kernel() const { return kernel_; }
  Scalar noise_variance() const { return noise_variance_; }
  const ContextSet& history_contexts() const { return contexts_; }
  const Vector& history_outcomes() const { return outcomes_; }

 private:
  void prepare();

  KernelSpec kernel_;
  Scalar noise_variance_;
  ContextSet contexts_;  // N x D
  Vector outcomes_;      // N
  std::vector<Index> inducing_;  // ascending history indices, size s
  rng::Engine stream_;

  // Projection factors; valid whenever inducing_ is nonempty.
  Matrix inducing_factor_;    // L_zz, chol of K_zz
  Matrix projection_factor_;  // L_b, chol of I + s^-2 A A^T
  Vector projected_;          // s^-2 L_b^{-1} A r
};

}  // namespace gpcb
