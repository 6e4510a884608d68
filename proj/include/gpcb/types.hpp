#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace gpcb {

/// Scalar used throughout the library.
using Scalar = double;

template <typename T>
using MatrixX = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

template <typename T>
using VectorX = Eigen::Matrix<T, Eigen::Dynamic, 1>;

using Matrix = MatrixX<Scalar>;
using Vector = VectorX<Scalar>;
using Index = Eigen::Index;

/// A base-arm context is a point in [0,1]^D. Context sets are stored as
/// N x D matrices, one row per context.
using Context = Vector;
using ContextSet = Matrix;

/// A feasible subset of a round's base arms. `ids` are base-arm indices in
/// ascending order. For coverage problems `seeds` holds the chosen left
/// nodes in pick order and `ids` the edges they emit.
struct SuperArm {
  std::vector<int> ids;
  std::vector<int> seeds;

  bool empty() const { return ids.empty(); }
  std::size_t size() const { return ids.size(); }
  bool operator==(const SuperArm&) const = default;
};

}  // namespace gpcb
