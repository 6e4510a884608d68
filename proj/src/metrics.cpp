#include "gpcb/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gpcb/errors.hpp"
#include "gpcb/linalg.hpp"

namespace gpcb {
namespace {

bool same_row(const ContextSet& a, Index i, const ContextSet& b, Index j) {
  return (a.row(i).array() == b.row(j).array()).all();
}

/// Distinct rows across all tuples, in first-appearance order.
ContextSet collect_ground_set(
    const std::vector<std::vector<ContextSet>>& round_tuples) {
  std::vector<Vector> rows;
  Index dim = 0;
  for (const auto& tuples : round_tuples) {
    for (const auto& tuple : tuples) {
      dim = tuple.cols();
      for (Index r = 0; r < tuple.rows(); ++r) {
        const Vector candidate = tuple.row(r).transpose();
        bool seen = false;
        for (const auto& known : rows) {
          if ((known.array() == candidate.array()).all()) {
            seen = true;
            break;
          }
        }
        if (!seen) rows.push_back(candidate);
      }
    }
  }
  ContextSet out(static_cast<Index>(rows.size()), dim);
  for (Index i = 0; i < out.rows(); ++i) {
    out.row(i) = rows[static_cast<std::size_t>(i)].transpose();
  }
  return out;
}

bool row_in_set(const ContextSet& set, const ContextSet& tuple, Index r) {
  for (Index i = 0; i < set.rows(); ++i) {
    if (same_row(set, i, tuple, r)) return true;
  }
  return false;
}

/// Max info gain over all ways of picking one tuple per round.
Scalar max_over_round_choices(
    const std::vector<std::vector<ContextSet>>& round_tuples,
    const KernelSpec& kernel, Scalar noise_variance, Index dim,
    Index max_rows) {
  ContextSet stack(max_rows, dim);
  Scalar best = 0.0;
  auto recurse = [&](auto&& self, std::size_t t, Index used) -> void {
    if (t == round_tuples.size()) {
      best = std::max(best,
                      info_gain(stack.topRows(used), kernel, noise_variance));
      return;
    }
    for (const auto& tuple : round_tuples[t]) {
      stack.middleRows(used, tuple.rows()) = tuple;
      self(self, t + 1, used + tuple.rows());
    }
  };
  recurse(recurse, 0, 0);
  return best;
}

/// Classical maximum information gain: max over size-n multisets of the
/// ground set (repetition allowed, order irrelevant).
Scalar max_over_multisets(const ContextSet& ground, int n,
                          const KernelSpec& kernel, Scalar noise_variance) {
  ContextSet stack(n, ground.cols());
  Scalar best = 0.0;
  auto recurse = [&](auto&& self, Index first, int used) -> void {
    if (used == n) {
      best = std::max(best, info_gain(stack, kernel, noise_variance));
      return;
    }
    for (Index i = first; i < ground.rows(); ++i) {
      stack.row(used) = ground.row(i);
      self(self, i, used + 1);
    }
  };
  recurse(recurse, 0, 0);
  return best;
}

double multiset_count(Index ground, int n) {
  // C(ground + n - 1, n)
  double combos = 1.0;
  for (int i = 0; i < n; ++i) {
    combos *= static_cast<double>(ground + i) / static_cast<double>(i + 1);
  }
  return combos;
}

}  // namespace

Vector alpha_regret(const std::vector<RoundRecord>& trace, Scalar alpha) {
  Vector out(static_cast<Index>(trace.size()));
  Scalar running = 0.0;
  for (Index i = 0; i < out.size(); ++i) {
    const auto& rec = trace[static_cast<std::size_t>(i)];
    running += alpha * rec.opt_expected - rec.reward_expected;
    out(i) = running;
  }
  return out;
}

Scalar info_gain(const ContextSet& contexts, const KernelSpec& kernel,
                 Scalar noise_variance) {
  if (contexts.rows() == 0) return 0.0;
  if (noise_variance <= 0.0) {
    throw ConfigError("gp.noise_variance: must be positive");
  }
  Matrix m = gram_matrix(kernel, contexts) / noise_variance;
  m.diagonal().array() += 1.0;
  return 0.5 * log_det_from_factor(cholesky_with_jitter(m));
}

std::vector<ContextSet> all_k_subsets(const ContextSet& contexts, int k) {
  std::vector<ContextSet> out;
  const Index n = contexts.rows();
  if (k < 0 || static_cast<Index>(k) > n) return out;
  std::vector<Index> pick(static_cast<std::size_t>(k));
  std::iota(pick.begin(), pick.end(), Index{0});
  while (true) {
    ContextSet tuple(k, contexts.cols());
    for (int i = 0; i < k; ++i) {
      tuple.row(i) = contexts.row(pick[static_cast<std::size_t>(i)]);
    }
    out.push_back(std::move(tuple));
    int i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

InfoGainReport gamma_diagnostics(
    const std::vector<std::vector<ContextSet>>& round_tuples,
    const KernelSpec& kernel, Scalar noise_variance) {
  if (round_tuples.empty()) {
    throw InputError("gamma_diagnostics: at least one round required");
  }
  Index dim = 0;
  Index max_tuple = 0;
  double choice_product = 1.0;
  for (const auto& tuples : round_tuples) {
    if (tuples.empty()) {
      throw InputError("gamma_diagnostics: every round needs a feasible tuple");
    }
    choice_product *= static_cast<double>(tuples.size());
    for (const auto& tuple : tuples) {
      if (tuple.rows() == 0) {
        throw InputError("gamma_diagnostics: empty tuple");
      }
      dim = tuple.cols();
      max_tuple = std::max(max_tuple, tuple.rows());
    }
  }

  const int rounds = static_cast<int>(round_tuples.size());
  const int budget = static_cast<int>(max_tuple);
  const int classical_points = budget * rounds;
  if (choice_product > kMaxChoiceProduct ||
      classical_points > kMaxClassicalPoints) {
    throw SizeError(
        "gamma_diagnostics: instance exceeds desk-scale limits (needs "
        "product of per-round choices <= 1e6 and K*T <= " +
        std::to_string(kMaxClassicalPoints) +
        "); shrink the ground set, horizon or budget");
  }

  InfoGainReport report;
  report.budget = budget;
  report.rounds = rounds;
  report.noise_variance = noise_variance;

  const ContextSet ground = collect_ground_set(round_tuples);
  report.ground_set_size = ground.rows();
  if (multiset_count(ground.rows(), classical_points) > kMaxChoiceProduct) {
    throw SizeError(
        "gamma_diagnostics: classical enumeration exceeds 1e6 multisets; "
        "shrink the ground set, horizon or budget");
  }

  // Non-volatile: every round exposes exactly the full ground set.
  report.non_volatile = true;
  for (const auto& tuples : round_tuples) {
    std::vector<bool> seen(static_cast<std::size_t>(ground.rows()), false);
    for (const auto& tuple : tuples) {
      for (Index r = 0; r < tuple.rows(); ++r) {
        for (Index g = 0; g < ground.rows(); ++g) {
          if (same_row(ground, g, tuple, r)) seen[static_cast<std::size_t>(g)] = true;
        }
        if (!row_in_set(ground, tuple, r)) report.non_volatile = false;
      }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      report.non_volatile = false;
    }
  }

  report.gamma_bar = max_over_round_choices(round_tuples, kernel,
                                            noise_variance, dim,
                                            max_tuple * rounds);
  report.gamma_t = max_over_multisets(ground, rounds, kernel, noise_variance);
  report.gamma_kt =
      max_over_multisets(ground, classical_points, kernel, noise_variance);

  constexpr Scalar slack = 1e-9;
  report.upper_bound_holds =
      report.gamma_bar <= static_cast<Scalar>(budget) * report.gamma_t + slack;
  report.lower_bound_holds =
      !report.non_volatile ||
      report.gamma_kt / static_cast<Scalar>(budget) <= report.gamma_bar + slack;
  return report;
}

}  // namespace gpcb
