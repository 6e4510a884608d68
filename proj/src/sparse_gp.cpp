#include "gpcb/sparse_gp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gpcb/errors.hpp"
#include "gpcb/linalg.hpp"

namespace gpcb {

SparseGPState::SparseGPState(KernelSpec kernel, Scalar noise_variance,
                             std::uint64_t seed)
    : kernel_(kernel),
      noise_variance_(noise_variance),
      stream_(rng::make_engine(seed, rng::Stream::Inducing)) {
  validate(kernel_);
  if (noise_variance_ <= 0.0) {
    throw ConfigError("gp.noise_variance: must be positive");
  }
  contexts_.resize(0, 0);
  outcomes_.resize(0);
}

ContextSet SparseGPState::inducing_points() const {
  ContextSet z(inducing_count(), contexts_.cols());
  for (Index i = 0; i < inducing_count(); ++i) {
    z.row(i) = contexts_.row(inducing_[static_cast<std::size_t>(i)]);
  }
  return z;
}

SparseGPState SparseGPState::batch_update(const ContextSet& contexts,
                                          const Vector& outcomes) const {
  const Index b = contexts.rows();
  if (b == 0) {
    throw InputError("batch_update: empty batch");
  }
  if (outcomes.size() != b) {
    throw InputError("batch_update: contexts and outcomes length mismatch");
  }
  if (size() > 0 && contexts.cols() != contexts_.cols()) {
    throw InputError("batch_update: context dimension mismatch");
  }

  SparseGPState next(*this);
  next.contexts_.conservativeResize(size() + b, contexts.cols());
  next.contexts_.bottomRows(b) = contexts;
  next.outcomes_.conservativeResize(size() + b);
  next.outcomes_.tail(b) = outcomes;
  next.prepare();
  return next;
}

SparseGPState SparseGPState::resample_inducing(Index s) const {
  SparseGPState next(*this);
  if (size() == 0) {
    next.inducing_.clear();
    return next;
  }
  const Index clamped = std::clamp<Index>(s, 1, size());
  std::vector<Index> all(static_cast<std::size_t>(size()));
  std::iota(all.begin(), all.end(), Index{0});
  next.inducing_.clear();
  // std::sample keeps the ascending order of the source range.
  std::sample(all.begin(), all.end(), std::back_inserter(next.inducing_),
              clamped, next.stream_);
  next.prepare();
  return next;
}

void SparseGPState::prepare() {
  if (inducing_.empty() || size() == 0) return;
  const Scalar inv_noise = 1.0 / noise_variance_;
  const ContextSet z = inducing_points();

  inducing_factor_ = cholesky_with_jitter(gram_matrix(kernel_, z));
  Matrix a = inducing_factor_.triangularView<Eigen::Lower>().solve(
      cross_gram(kernel_, z, contexts_));  // s x N
  Matrix b = Matrix::Identity(a.rows(), a.rows()) +
             inv_noise * (a * a.transpose());
  projection_factor_ = cholesky_with_jitter(b);
  projected_ = inv_noise * projection_factor_.triangularView<Eigen::Lower>()
                               .solve(Vector(a * outcomes_));
}

PosteriorSummary SparseGPState::sparse_posterior(const Context& x) const {
  const Scalar prior_var = kernel_eval(kernel_, x, x);
  if (inducing_.empty() || size() == 0) {
    return {0.0, prior_var};
  }
  if (x.size() != contexts_.cols()) {
    throw InputError("sparse_posterior: query dimension mismatch");
  }
  Vector psi = kernel_vector(kernel_, inducing_points(), x);
  Vector v = inducing_factor_.triangularView<Eigen::Lower>().solve(psi);
  Vector w = projection_factor_.triangularView<Eigen::Lower>().solve(v);
  const Scalar mean = w.dot(projected_);
  const Scalar var = prior_var - v.squaredNorm() + w.squaredNorm();
  return {mean, std::clamp(var, 0.0, prior_var)};
}

std::vector<PosteriorSummary> SparseGPState::posterior_batch(
    const ContextSet& queries) const {
  const Index q = queries.rows();
  std::vector<PosteriorSummary> out(static_cast<std::size_t>(q));
  if (inducing_.empty() || size() == 0) {
    for (Index i = 0; i < q; ++i) {
      const Context xi = queries.row(i).transpose();
      out[static_cast<std::size_t>(i)] = {0.0, kernel_eval(kernel_, xi, xi)};
    }
    return out;
  }
  if (queries.cols() != contexts_.cols()) {
    throw InputError("posterior_batch: query dimension mismatch");
  }
  const ContextSet z = inducing_points();
  Matrix psi = cross_gram(kernel_, z, queries);  // s x Q
  Matrix v = inducing_factor_.triangularView<Eigen::Lower>().solve(psi);
  Matrix w = projection_factor_.triangularView<Eigen::Lower>().solve(v);
  for (Index i = 0; i < q; ++i) {
    const Context xi = queries.row(i).transpose();
    const Scalar prior_var = kernel_eval(kernel_, xi, xi);
    const Scalar mean = w.col(i).dot(projected_);
    const Scalar var =
        prior_var - v.col(i).squaredNorm() + w.col(i).squaredNorm();
    out[static_cast<std::size_t>(i)] = {mean, std::clamp(var, 0.0, prior_var)};
  }
  return out;
}

}  // namespace gpcb
