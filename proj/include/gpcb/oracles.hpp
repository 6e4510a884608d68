#pragma once

#include <optional>
#include <vector>

#include "gpcb/types.hpp"

namespace gpcb {

/// Bipartite graph for coverage problems. Base arm id i is edge i.
struct BipartiteGraph {
  struct Edge {
    int left = 0;
    int right = 0;
  };
  int num_left = 0;
  int num_right = 0;
  std::vector<Edge> edges;

  Index num_edges() const { return static_cast<Index>(edges.size()); }
};

enum class FeasibilityKind { TopK, CoverageLeftNodes };

/// What counts as a feasible super arm: either any K of the round's arms,
/// or the outgoing edges of K chosen left nodes of `graph`.
struct FeasibilitySpec {
  FeasibilityKind kind = FeasibilityKind::TopK;
  int budget = 1;
  std::optional<BipartiteGraph> graph;
};

/// Number of input values that had to be clamped into [0,1] before being
/// used as activation probabilities. UCB indices are naturally unbounded, so
/// clamping is expected; the counter makes it visible.
struct ClampCounter {
  long clamped = 0;
};

/// The K arms with the largest values, ties to the lowest id, ids ascending.
/// Exact for additive rewards. Throws InputError when K exceeds the number
/// of values.
SuperArm top_k_oracle(const Vector& values, int k);

/// Expected number of right nodes with at least one active incoming edge
/// when the left nodes in `seeds` are selected. Probabilities outside [0,1]
/// are clamped (and counted when a counter is supplied).
Scalar coverage_value(const Vector& edge_probs, const std::vector<int>& seeds,
                      const BipartiteGraph& graph,
                      ClampCounter* clamps = nullptr);

/// K rounds of greedy marginal-gain maximization on coverage_value; ties to
/// the lowest left-node id. Returns the chosen seeds (pick order) plus their
/// outgoing edges as the super arm. Guarantees value >= (1-1/e) * optimum.
SuperArm greedy_coverage_oracle(const Vector& edge_probs, int k,
                                const BipartiteGraph& graph,
                                ClampCounter* clamps = nullptr);

/// Which optimizer maps values to a super arm. Auto follows the feasibility
/// kind; the others force a specific oracle for ablations (e.g. ranking raw
/// edge values on a coverage instance, which ignores right-node overlap).
enum class OracleKind { Auto, TopK, GreedyCoverage };

/// Dispatches on the feasibility kind with per-arm values as input. With a
/// TopK override on a coverage instance the seeds become the left nodes of
/// the K highest-value edges; a GreedyCoverage override requires a graph.
SuperArm run_oracle(const FeasibilitySpec& feasibility, const Vector& values,
                    ClampCounter* clamps = nullptr,
                    OracleKind override_kind = OracleKind::Auto);

}  // namespace gpcb
