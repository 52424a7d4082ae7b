#pragma once

#include "dbsf/instance.hpp"

#include <iosfwd>

namespace dbsf {

// Solution edges held so far plus the derived degree table and component
// index. Invariant: the edge set is a forest (every added edge must join two
// different components).
struct ForestState {
  const Graph* graph;
  std::vector<char> in_solution;  // by EdgeId
  std::vector<int> degree;        // by VertexId
  UnionFind components;

  explicit ForestState(const Graph& g);
  void add_edge(EdgeId e);
  std::vector<EdgeId> solution_edges() const;
};

// deg(v)/b_v; exactly zero for unbounded vertices.
Rational vertex_load(const ForestState& st, VertexId v);
// (deg(v)+2)/b_v; exactly zero for unbounded vertices.
Rational uptick_load(const ForestState& st, VertexId v);
Rational max_load(const ForestState& st);

struct NoPath : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Extension edges of the chosen path (endpoints in different current
// components), ordered from the s side. bottleneck is the max uptick load over
// the endpoint set; hops equals edges.size() (contracted path length).
struct ExtensionPath {
  std::vector<EdgeId> edges;
  std::vector<VertexId> vertices;  // sorted distinct endpoints of the edges
  Rational bottleneck;
  int hops = 0;
};

// Minimizes (bottleneck uptick, hop count) lexicographically over the
// component-contracted graph; deterministic tie-break prefers the predecessor
// component with the lowest member id. Pre: s and t lie in different
// components. Throws NoPath when no connecting path exists.
ExtensionPath find_min_uptick_path(const ForestState& st, VertexId s, VertexId t);

struct GaStep {
  int demand_index;  // arrival position, 0-based
  Demand demand;     // endpoints in the transformed graph
  Rational tau;      // bottleneck at selection time; 0 when already connected
  bool already_connected;
  std::vector<EdgeId> edges;
};

struct GaTranscript {
  Instance instance;  // the transformed instance the run used
  std::vector<GaStep> steps;
  std::vector<int> final_degree;

  ForestState final_state() const;  // replays the steps
  Rational max_load() const;
  std::vector<Rational> taus() const;
};

// Serves one demand against the current state and returns the step record.
GaStep serve_demand(ForestState& st, Demand d, int demand_index);

// Runs the greedy over all pair demands. The instance is dummy-transformed
// first (no-op if already transformed). `order`, when given, is a permutation
// of demand indices defining arrival order.
GaTranscript run_ga(const Instance& inst, const std::vector<int>* order = nullptr);

// JSON-lines transcript: one meta record, one record per step, one final
// record with the degree table.
void write_transcript_jsonl(const GaTranscript& t, std::ostream& out);
// Rebuilds a transcript against the matching transformed instance; validates
// endpoints, edge ids, taus, and the final degree table by replay.
GaTranscript read_transcript_jsonl(const Instance& transformed, std::istream& in);

}  // namespace dbsf
