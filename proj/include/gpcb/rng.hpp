#pragma once

#include <cstdint>
#include <random>

namespace gpcb::rng {

/// Purpose tags for substreams derived from one master seed. Keeping the
/// streams separate means e.g. toggling sparsity cannot perturb the
/// environment's arrival sequence.
enum class Stream : std::uint64_t {
  EnvStructure = 1,  // arrivals, contexts, graphs, ground-truth sampling
  EnvNoise = 2,      // observation noise / Bernoulli activations
  Inducing = 3,      // inducing-point resampling
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based split: each (master, purpose, counter) triple yields an
/// independent, reproducible seed.
inline std::uint64_t derive_seed(std::uint64_t master, Stream purpose,
                                 std::uint64_t counter = 0) {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ static_cast<std::uint64_t>(purpose));
  return splitmix64(s ^ counter);
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t master, Stream purpose,
                          std::uint64_t counter = 0) {
  return Engine(derive_seed(master, purpose, counter));
}

}  // namespace gpcb::rng
