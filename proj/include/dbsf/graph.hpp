#pragma once

#include "dbsf/rational.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace dbsf {

using VertexId = int;
using EdgeId = int;

struct Edge {
  VertexId u;
  VertexId v;
  Int weight = 0;  // used only by the weighted adversary gadget

  VertexId other(VertexId x) const { return x == u ? v : u; }
};

// Undirected multigraph with per-vertex degree bounds. Parallel edges are
// allowed (adversary gadgets), self loops are not.
class Graph {
 public:
  Graph() = default;

  VertexId add_vertex(DegreeBound bound, std::string label = "");
  EdgeId add_edge(VertexId u, VertexId v, Int weight = 0);

  int vertex_count() const { return static_cast<int>(bounds_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }
  const DegreeBound& bound(VertexId v) const { return bounds_.at(v); }
  const std::string& label(VertexId v) const { return labels_.at(v); }
  const std::vector<std::pair<VertexId, EdgeId>>& neighbors(VertexId v) const {
    return adjacency_.at(v);
  }

 private:
  std::vector<DegreeBound> bounds_;
  std::vector<std::string> labels_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<VertexId, EdgeId>>> adjacency_;
};

// Union by size with path compression.
class UnionFind {
 public:
  explicit UnionFind(int n);

  int find(int x);
  bool unite(int a, int b);  // false if already joined
  bool same(int a, int b) { return find(a) == find(b); }
  int size_of(int x);
  int component_count() const { return components_; }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
  int components_;
};

// Components of the graph after dropping the flagged vertices and any edge the
// filter rejects. Each component is sorted ascending; components are ordered
// by their smallest member.
std::vector<std::vector<VertexId>> connected_components(
    const Graph& g,
    const std::vector<char>* removed_vertex = nullptr,
    const std::function<bool(EdgeId)>& edge_ok = {});

}  // namespace dbsf
