#pragma once

#include <vector>

#include "gpcb/kernels.hpp"
#include "gpcb/policy.hpp"
#include "gpcb/types.hpp"

namespace gpcb {

/// Cumulative alpha-regret: prefix sums of alpha * opt(f_t) - u(f(x_{t,S_t})).
Vector alpha_regret(const std::vector<RoundRecord>& trace, Scalar alpha);

/// 1/2 log det(I + noise^-2 K) over the rows of `contexts`, computed through
/// the factor's log-diagonal. Empty input gives 0.
Scalar info_gain(const ContextSet& contexts, const KernelSpec& kernel,
                 Scalar noise_variance);

/// Desk-scale limits for the exhaustive diagnostics.
inline constexpr double kMaxChoiceProduct = 1e6;
inline constexpr int kMaxClassicalPoints = 12;

struct InfoGainReport {
  Scalar gamma_bar = 0.0;  // max over per-round feasible tuples
  Scalar gamma_t = 0.0;    // classical max over T-multisets of the ground set
  Scalar gamma_kt = 0.0;   // classical max over KT-multisets
  int budget = 0;          // K (max tuple size seen)
  int rounds = 0;          // T
  Scalar noise_variance = 0.0;
  Index ground_set_size = 0;
  bool non_volatile = false;
  bool upper_bound_holds = false;  // gamma_bar <= K * gamma_t
  bool lower_bound_holds = false;  // gamma_kt / K <= gamma_bar (non-volatile)
};

/// Exhaustively evaluates the information-gain quantities for a desk-scale
/// instance. `round_tuples[t]` lists the feasible super-arm context tuples of
/// round t (each tuple: one context per row). The ground set is the union of
/// all distinct contexts; the instance is non-volatile when every round
/// exposes that same set. Throws SizeError beyond the desk-scale limits.
InfoGainReport gamma_diagnostics(
    const std::vector<std::vector<ContextSet>>& round_tuples,
    const KernelSpec& kernel, Scalar noise_variance);

/// All C(N, k) k-subsets of the rows of `contexts`, as context tuples.
std::vector<ContextSet> all_k_subsets(const ContextSet& contexts, int k);

}  // namespace gpcb
