#include "gpcb/gp.hpp"

#include <algorithm>
#include <cmath>

#include "gpcb/errors.hpp"
#include "gpcb/linalg.hpp"

namespace gpcb {

GPState::GPState(KernelSpec kernel, Scalar noise_variance)
    : kernel_(kernel), noise_variance_(noise_variance) {
  validate(kernel_);
  if (noise_variance_ <= 0.0) {
    throw ConfigError("gp.noise_variance: must be positive");
  }
  contexts_.resize(0, 0);
  outcomes_.resize(0);
  factor_.resize(0, 0);
  half_solve_.resize(0);
}

GPState GPState::batch_update(const ContextSet& contexts,
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

  Matrix corner = gram_matrix(kernel_, contexts);
  corner.diagonal().array() += noise_variance_;
  Matrix cross = size() > 0 ? cross_gram(kernel_, contexts_, contexts)
                            : Matrix(0, b);

  GPState next(*this);
  next.factor_ = extend_cholesky(factor_, cross, corner);

  next.contexts_.conservativeResize(size() + b, contexts.cols());
  next.contexts_.bottomRows(b) = contexts;
  next.outcomes_.conservativeResize(size() + b);
  next.outcomes_.tail(b) = outcomes;
  next.half_solve_ =
      next.factor_.triangularView<Eigen::Lower>().solve(next.outcomes_);
  return next;
}

PosteriorSummary GPState::posterior(const Context& x) const {
  const Scalar prior_var = kernel_eval(kernel_, x, x);
  if (size() == 0) {
    return {0.0, prior_var};
  }
  if (x.size() != contexts_.cols()) {
    throw InputError("posterior: query dimension mismatch");
  }
  Vector k_vec = kernel_vector(kernel_, contexts_, x);
  Vector v = factor_.triangularView<Eigen::Lower>().solve(k_vec);
  const Scalar mean = v.dot(half_solve_);
  const Scalar var = prior_var - v.squaredNorm();
  return {mean, std::clamp(var, 0.0, prior_var)};
}

std::vector<PosteriorSummary> GPState::posterior_batch(
    const ContextSet& queries) const {
  const Index q = queries.rows();
  std::vector<PosteriorSummary> out(static_cast<std::size_t>(q));
  if (size() == 0) {
    for (Index i = 0; i < q; ++i) {
      const Context xi = queries.row(i).transpose();
      out[static_cast<std::size_t>(i)] = {0.0, kernel_eval(kernel_, xi, xi)};
    }
    return out;
  }
  if (queries.cols() != contexts_.cols()) {
    throw InputError("posterior_batch: query dimension mismatch");
  }
  Matrix k_block = cross_gram(kernel_, contexts_, queries);  // N x Q
  Matrix v = factor_.triangularView<Eigen::Lower>().solve(k_block);
  for (Index i = 0; i < q; ++i) {
    const Context xi = queries.row(i).transpose();
    const Scalar prior_var = kernel_eval(kernel_, xi, xi);
    const Scalar mean = v.col(i).dot(half_solve_);
    const Scalar var = prior_var - v.col(i).squaredNorm();
    out[static_cast<std::size_t>(i)] = {mean, std::clamp(var, 0.0, prior_var)};
  }
  return out;
}

}  // namespace gpcb
