#include "gpcb/kernels.hpp"

#include <cmath>

#include "gpcb/errors.hpp"

namespace gpcb {
namespace {

Scalar matern_value(Scalar r_over_l, Scalar nu) {
  if (nu == 1.5) {
    const Scalar z = std::sqrt(3.0) * r_over_l;
    return (1.0 + z) * std::exp(-z);
  }
  // nu == 2.5, enforced by validate()
  const Scalar z = std::sqrt(5.0) * r_over_l;
  return (1.0 + z + z * z / 3.0) * std::exp(-z);
}

}  // namespace

void validate(const KernelSpec& spec) {
  if (spec.variance <= 0.0) {
    throw ConfigError("kernel.variance: must be positive");
  }
  switch (spec.family) {
    case KernelFamily::Linear:
      return;
    case KernelFamily::SquaredExponential:
      if (spec.lengthscale <= 0.0) {
        throw ConfigError("kernel.lengthscale: must be positive");
      }
      return;
    case KernelFamily::Matern:
      if (spec.lengthscale <= 0.0) {
        throw ConfigError("kernel.lengthscale: must be positive");
      }
      if (spec.nu != 1.5 && spec.nu != 2.5) {
        throw ConfigError("kernel.nu: only 1.5 and 2.5 are supported");
      }
      return;
  }
  throw ConfigError("kernel.family: unknown family");
}

Scalar kernel_eval(const KernelSpec& spec, const Context& x,
                   const Context& y) {
  validate(spec);
  if (x.size() != y.size()) {
    throw InputError("kernel_eval: contexts have different dimensions");
  }
  if (x.size() == 0) {
    throw InputError("kernel_eval: contexts must have dimension >= 1");
  }
  switch (spec.family) {
    case KernelFamily::Linear:
      return spec.variance * x.dot(y) / static_cast<Scalar>(x.size());
    case KernelFamily::SquaredExponential: {
      const Scalar d2 = (x - y).squaredNorm();
      return spec.variance *
             std::exp(-d2 / (2.0 * spec.lengthscale * spec.lengthscale));
    }
    case KernelFamily::Matern: {
      const Scalar r = (x - y).norm();
      return spec.variance * matern_value(r / spec.lengthscale, spec.nu);
    }
  }
  throw ConfigError("kernel.family: unknown family");
}

Matrix gram_matrix(const KernelSpec& spec, const ContextSet& xs) {
  validate(spec);
  const Index n = xs.rows();
  Matrix gram(n, n);
  for (Index i = 0; i < n; ++i) {
    const Context xi = xs.row(i).transpose();
    for (Index j = 0; j <= i; ++j) {
      const Scalar v = kernel_eval(spec, xi, xs.row(j).transpose());
      gram(i, j) = v;
      gram(j, i) = v;
    }
  }
  return gram;
}

Matrix cross_gram(const KernelSpec& spec, const ContextSet& a,
                  const ContextSet& b) {
  validate(spec);
  if (a.rows() > 0 && b.rows() > 0 && a.cols() != b.cols()) {
    throw InputError("cross_gram: context sets have different dimensions");
  }
  Matrix out(a.rows(), b.rows());
  for (Index i = 0; i < a.rows(); ++i) {
    const Context xi = a.row(i).transpose();
    for (Index j = 0; j < b.rows(); ++j) {
      out(i, j) = kernel_eval(spec, xi, b.row(j).transpose());
    }
  }
  return out;
}

Vector kernel_vector(const KernelSpec& spec, const ContextSet& xs,
                     const Context& x) {
  validate(spec);
  Vector out(xs.rows());
  for (Index i = 0; i < xs.rows(); ++i) {
    out(i) = kernel_eval(spec, xs.row(i).transpose(), x);
  }
  return out;
}

}  // namespace gpcb
