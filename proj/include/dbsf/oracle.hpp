#pragma once

#include "dbsf/instance.hpp"

#include <optional>

namespace dbsf {

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct Infeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// True iff the edges form a forest that connects every demand pair.
bool is_feasible_forest(const Graph& g, const std::vector<Demand>& demands,
                        const std::vector<EdgeId>& edges);

// Minimum finite degree bound among vertices with nonzero degree in the edge
// set; nullopt when only unbounded vertices are touched.
std::optional<Rational> solution_delta(const Graph& g, const std::vector<EdgeId>& edges);

struct OfflineSolution {
  std::vector<EdgeId> edges;  // representative optimum
  Rational value;             // its max load (= OPT)
  std::optional<Rational> delta;
  // Distinct deltas over all optima the search encountered (ascending), plus
  // a flag when some optimum touches no finite-bound vertex.
  std::vector<Rational> optimal_finite_deltas;
  bool optimal_delta_unbounded = false;
};

// Resolves the oracle's edge cap: explicit value, else DBSF_ORACLE_CAP, else 26.
int resolve_oracle_cap(std::optional<int> requested);

// Exact optimum by exhaustive forest search with load and connectivity
// pruning. Ties prefer fewer edges, then the lexicographically smallest edge
// id set. Pre: the instance is dummy-transformed. Throws CapExceeded when the
// edge count exceeds the cap, Infeasible when some demand cannot be connected.
OfflineSolution brute_force_opt(const Instance& transformed,
                                std::optional<int> edge_cap = std::nullopt,
                                std::optional<int> edge_budget = std::nullopt);

struct WeightedSolution {
  std::vector<EdgeId> edges;
  Int weight;
};

// Minimum total weight of a forest connecting every terminal to the root with
// all degrees <= degree_cap.
WeightedSolution brute_force_weighted_opt(const Graph& g,
                                          const std::vector<VertexId>& terminals,
                                          VertexId root, int degree_cap,
                                          std::optional<int> edge_cap = std::nullopt);

}  // namespace dbsf
