#include "gpcb/oracles.hpp"

#include <algorithm>
#include <numeric>

#include "gpcb/errors.hpp"

namespace gpcb {
namespace {

Scalar clamp_probability(Scalar p, ClampCounter* clamps) {
  if (p >= 0.0 && p <= 1.0) return p;
  if (clamps != nullptr) ++clamps->clamped;
  return std::clamp(p, 0.0, 1.0);
}

std::vector<int> edges_of_seeds(const std::vector<int>& seeds,
                                const BipartiteGraph& graph) {
  std::vector<int> ids;
  for (int e = 0; e < static_cast<int>(graph.edges.size()); ++e) {
    const int left = graph.edges[static_cast<std::size_t>(e)].left;
    if (std::find(seeds.begin(), seeds.end(), left) != seeds.end()) {
      ids.push_back(e);
    }
  }
  return ids;
}

}  // namespace

SuperArm top_k_oracle(const Vector& values, int k) {
  const Index m = values.size();
  if (k < 0 || static_cast<Index>(k) > m) {
    throw InputError("top_k_oracle: K exceeds the number of available arms");
  }
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](int a, int b) {
                      if (values(a) != values(b)) return values(a) > values(b);
                      return a < b;
                    });
  SuperArm arm;
  arm.ids.assign(order.begin(), order.begin() + k);
  std::sort(arm.ids.begin(), arm.ids.end());
  return arm;
}

Scalar coverage_value(const Vector& edge_probs, const std::vector<int>& seeds,
                      const BipartiteGraph& graph, ClampCounter* clamps) {
  if (edge_probs.size() != graph.num_edges()) {
    throw InputError("coverage_value: one probability per edge required");
  }
  // miss(j) = prod over selected edges into j of (1 - p)
  std::vector<Scalar> miss(static_cast<std::size_t>(graph.num_right), 1.0);
  for (int e = 0; e < static_cast<int>(graph.edges.size()); ++e) {
    const auto& edge = graph.edges[static_cast<std::size_t>(e)];
    if (std::find(seeds.begin(), seeds.end(), edge.left) == seeds.end()) {
      continue;
    }
    const Scalar p = clamp_probability(edge_probs(e), clamps);
    miss[static_cast<std::size_t>(edge.right)] *= 1.0 - p;
  }
  Scalar total = 0.0;
  for (Scalar m : miss) total += 1.0 - m;
  return total;
}

SuperArm greedy_coverage_oracle(const Vector& edge_probs, int k,
                                const BipartiteGraph& graph,
                                ClampCounter* clamps) {
  if (graph.edges.empty() || graph.num_left == 0) {
    return {};
  }
  if (k > graph.num_left) {
    throw InputError("greedy_coverage_oracle: K exceeds the left node count");
  }
  Vector probs(edge_probs.size());
  for (Index e = 0; e < edge_probs.size(); ++e) {
    probs(e) = clamp_probability(edge_probs(e), clamps);
  }

  // Outgoing edges per left node, built once.
  std::vector<std::vector<int>> out_edges(
      static_cast<std::size_t>(graph.num_left));
  for (int e = 0; e < static_cast<int>(graph.edges.size()); ++e) {
    out_edges[static_cast<std::size_t>(graph.edges[static_cast<std::size_t>(e)].left)]
        .push_back(e);
  }

  std::vector<Scalar> miss(static_cast<std::size_t>(graph.num_right), 1.0);
  std::vector<Scalar> factor(static_cast<std::size_t>(graph.num_right), 1.0);
  std::vector<bool> chosen(static_cast<std::size_t>(graph.num_left), false);
  SuperArm arm;
  for (int round = 0; round < k; ++round) {
    int best = -1;
    Scalar best_gain = -1.0;
    for (int u = 0; u < graph.num_left; ++u) {
      if (chosen[static_cast<std::size_t>(u)]) continue;
      // Marginal gain of u, aggregating parallel edges per right node.
      std::vector<int> touched;
      for (int e : out_edges[static_cast<std::size_t>(u)]) {
        const auto r =
            static_cast<std::size_t>(graph.edges[static_cast<std::size_t>(e)].right);
        if (factor[r] == 1.0) touched.push_back(static_cast<int>(r));
        factor[r] *= 1.0 - probs(e);
      }
      Scalar gain = 0.0;
      for (int r : touched) {
        const auto rr = static_cast<std::size_t>(r);
        gain += miss[rr] * (1.0 - factor[rr]);
        factor[rr] = 1.0;
      }
      if (gain > best_gain) {
        best_gain = gain;
        best = u;
      }
    }
    chosen[static_cast<std::size_t>(best)] = true;
    arm.seeds.push_back(best);
    for (int e : out_edges[static_cast<std::size_t>(best)]) {
      const auto& edge = graph.edges[static_cast<std::size_t>(e)];
      miss[static_cast<std::size_t>(edge.right)] *= 1.0 - probs(e);
    }
  }
  arm.ids = edges_of_seeds(arm.seeds, graph);
  return arm;
}

SuperArm run_oracle(const FeasibilitySpec& feasibility, const Vector& values,
                    ClampCounter* clamps, OracleKind override_kind) {
  const bool coverage =
      feasibility.kind == FeasibilityKind::CoverageLeftNodes;
  if (coverage && !feasibility.graph.has_value()) {
    throw InputError("run_oracle: coverage feasibility requires a graph");
  }
  if (override_kind == OracleKind::GreedyCoverage && !coverage) {
    throw InputError(
        "run_oracle: greedy_coverage override needs a bipartite instance");
  }

  if (!coverage) {
    const int k =
        std::min<int>(feasibility.budget, static_cast<int>(values.size()));
    return top_k_oracle(values, k);
  }

  const auto& graph = *feasibility.graph;
  const int k = std::min(feasibility.budget, graph.num_left);
  if (override_kind == OracleKind::TopK) {
    // Ablation: rank raw edge values and seed from their left nodes,
    // ignoring right-node overlap.
    const int probe =
        std::min<int>(feasibility.budget, static_cast<int>(values.size()));
    SuperArm ranked = top_k_oracle(values, probe);
    SuperArm arm;
    for (int e : ranked.ids) {
      const int left = graph.edges[static_cast<std::size_t>(e)].left;
      if (std::find(arm.seeds.begin(), arm.seeds.end(), left) ==
          arm.seeds.end()) {
        arm.seeds.push_back(left);
      }
    }
    arm.ids = edges_of_seeds(arm.seeds, graph);
    return arm;
  }
  return greedy_coverage_oracle(values, k, graph, clamps);
}

}  // namespace gpcb
