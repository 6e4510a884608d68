#pragma once

#include "gpcb/types.hpp"

namespace gpcb {

enum class KernelFamily { Linear, SquaredExponential, Matern };

/// A positive-definite covariance function on [0,1]^D. With variance = 1
/// every family keeps k(x,x) <= 1; the linear kernel divides <x,y> by D so
/// the bound holds on the unit cube.
struct KernelSpec {
  KernelFamily family = KernelFamily::SquaredExponential;
  Scalar lengthscale = 1.0;   // SE and Matern
  Scalar nu = 2.5;            // Matern smoothness; 1.5 and 2.5 supported
  Scalar variance = 1.0;      // output scale

  static KernelSpec squared_exponential(Scalar lengthscale,
                                        Scalar variance = 1.0) {
    return {KernelFamily::SquaredExponential, lengthscale, 2.5, variance};
  }
  static KernelSpec linear(Scalar variance = 1.0) {
    return {KernelFamily::Linear, 1.0, 2.5, variance};
  }
  static KernelSpec matern(Scalar lengthscale, Scalar nu,
                           Scalar variance = 1.0) {
    return {KernelFamily::Matern, lengthscale, nu, variance};
  }
};

/// Throws ConfigError if the spec's parameters are unusable.
void validate(const KernelSpec& spec);

/// k(x, y). Throws InputError on dimension mismatch, ConfigError on bad
/// kernel parameters.
Scalar kernel_eval(const KernelSpec& spec, const Context& x, const Context& y);

/// N x N symmetric PSD matrix with entries k(x_i, x_j); rows of `xs` are
/// contexts. An empty set yields a 0 x 0 matrix.
Matrix gram_matrix(const KernelSpec& spec, const ContextSet& xs);

/// Cross-covariance block between two context sets (rows of `a` against
/// rows of `b`).
Matrix cross_gram(const KernelSpec& spec, const ContextSet& a,
                  const ContextSet& b);

/// k_[N](x): covariances between each stored context and a query point.
Vector kernel_vector(const KernelSpec& spec, const ContextSet& xs,
                     const Context& x);

}  // namespace gpcb
