#pragma once

#include "dbsf/greedy.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>

namespace dbsf {

struct ProtocolViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An online algorithm under adversarial test. The harness trusts only
// current_solution(): after every callback the solution may only have grown
// and must satisfy all past demands.
class OnlineSteinerAlgorithm {
 public:
  virtual ~OnlineSteinerAlgorithm() = default;
  virtual void init(const Graph& g, VertexId root) = 0;
  virtual std::vector<EdgeId> on_terminal(VertexId t) = 0;
  virtual std::vector<EdgeId> on_pair_demand(VertexId s, VertexId t) = 0;
  virtual std::vector<EdgeId> on_group_demand(const std::vector<VertexId>& group) = 0;
  virtual const std::vector<EdgeId>& current_solution() const = 0;  // sorted ascending
};

// factory(seed) builds a fresh instance; deterministic algorithms ignore the
// seed. Randomized adversary modes replay seeded copies over the issued
// request prefix to estimate edge-choice frequencies.
using AlgorithmFactory =
    std::function<std::unique_ptr<OnlineSteinerAlgorithm>(std::uint64_t)>;

// Built-in algorithms: "ga" (load-minimizing path), "greedy" (cheapest path,
// bought edges free), "always-expensive" (avoids the direct edge when another
// route exists), "always-root" (direct edge when available).
AlgorithmFactory builtin_algorithm_factory(const std::string& name);
// Scripted replay: JSON lines, one {"edges": [ids...]} record per request.
AlgorithmFactory scripted_algorithm_factory(const std::string& path);

struct AdversaryRequest {
  std::string kind;  // "terminal" | "group"
  std::vector<VertexId> payload;
  std::vector<EdgeId> added;
  std::vector<int> degree_after;  // full degree table of the online solution
};

struct AdversaryTranscript {
  std::string kind;  // "tree" | "weighted" | "group-star"
  Graph graph;
  VertexId root = 0;
  std::vector<AdversaryRequest> requests;
  std::vector<EdgeId> online_edges;
  std::vector<EdgeId> offline_edges;

  // Tree run: degrees count X-neighbors only; deg_sigma restricts to
  // requested terminals; heavy is the forced node z*.
  std::map<VertexId, int> deg;
  std::map<VertexId, int> deg_sigma;
  std::optional<VertexId> heavy;
  int heavy_deg_sigma = 0;
  int offline_max_deg = 0;
  int offline_heavy_deg = 0;

  // Weighted run.
  Int online_weight = 0;
  Int offline_weight = 0;  // weight of the emitted companion tree
  std::optional<Int> opt3;  // exact optimum at the realized prefix, cap 3
  int root_degree = 0;
  std::string realized_case;  // "a" (expensive edge held) | "b" (k root edges)
  int realized_r = 0;

  Rational ratio{0};  // headline ratio, per kind (see README)
};

// Hard instance for pair-connection algorithms on degree bounds: 2^levels
// nodes Z with bound 1 (root unbounded) joined in a clique, plus one
// unbounded node per Z-pair adjacent to exactly that pair.
struct TreeGadget {
  Graph graph;
  VertexId root = 0;
  std::vector<VertexId> z;
  std::vector<VertexId> x;
  std::map<std::pair<VertexId, VertexId>, VertexId> x_of_pair;  // key (min z, max z)
  std::map<std::pair<VertexId, VertexId>, EdgeId> attach_edge;  // key (x, z)
};

TreeGadget build_tree_lb_instance(int levels);

// Weighted gadget on n = 2k+1 nodes: terminal i has a zero-weight root edge
// and an n^i edge to partner k+i; partners chain to the root by zero-weight
// edges. All degree bounds are 3.
struct WeightedGadget {
  Graph graph;
  VertexId root = 0;
  int k = 0;
  Int n = 0;
  std::vector<EdgeId> direct_edge;     // index i (1-based): {i, root}
  std::vector<EdgeId> expensive_edge;  // index i (1-based): {i, k+i}
};

WeightedGadget build_weighted_gadget(int k);

// Star on n nodes, center = root, all bounds unbounded.
Graph build_group_star(int n);

struct TreeAdversaryOptions {
  int levels = 2;
  bool randomized = false;  // estimate edge choices by seeded replays
  int trials = 64;
  std::uint64_t seed = 1;
};

// Recursive request sequence over Z forcing one node z* to serve many
// requested terminals, while the emitted offline companion keeps every
// Z-degree at most 1 and z* at 0.
AdversaryTranscript run_tree_adversary(const AlgorithmFactory& make,
                                       const TreeAdversaryOptions& opt);

struct WeightedAdversaryOptions {
  int k = 3;
  bool randomized = false;
  int trials = 64;
  std::uint64_t seed = 1;
  std::optional<int> oracle_edge_cap;  // forwarded to the weighted optimum oracle
};

// Presents terminals 1,2,...; stops at the first step r whose expensive edge
// is held (case a: online weight >= n^r) or after k steps (case b: root
// degree >= k against bound 3).
AdversaryTranscript run_weighted_adversary(const AlgorithmFactory& make,
                                           const WeightedAdversaryOptions& opt);

struct GroupStarAdversaryOptions {
  int n = 5;
};

// Each round demands the leaves not yet connected to the center, until none
// remain; a compliant algorithm ends with center degree n-1 while one leaf
// common to all groups witnesses offline degree 1.
AdversaryTranscript run_group_star_adversary(const AlgorithmFactory& make,
                                             const GroupStarAdversaryOptions& opt);

void write_adversary_jsonl(const AdversaryTranscript& t, std::ostream& out);

}  // namespace dbsf
