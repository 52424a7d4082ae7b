#include "dbsf/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace dbsf {

VertexId Graph::add_vertex(DegreeBound bound, std::string label) {
  VertexId id = vertex_count();
  if (label.empty()) label = "v" + std::to_string(id);
  bounds_.push_back(std::move(bound));
  labels_.push_back(std::move(label));
  adjacency_.emplace_back();
  return id;
}

EdgeId Graph::add_edge(VertexId u, VertexId v, Int weight) {
  if (u < 0 || v < 0 || u >= vertex_count() || v >= vertex_count())
    throw std::out_of_range("edge endpoint out of range");
  if (u == v) throw std::invalid_argument("self loops are not allowed");
  if (weight < 0) throw std::invalid_argument("edge weight must be nonnegative");
  EdgeId id = edge_count();
  edges_.push_back(Edge{u, v, weight});
  adjacency_[u].emplace_back(v, id);
  adjacency_[v].emplace_back(u, id);
  return id;
}

UnionFind::UnionFind(int n) : parent_(n), size_(n, 1), components_(n) {
  for (int i = 0; i < n; ++i) parent_[i] = i;
}

int UnionFind::find(int x) {
  int root = x;
  while (parent_[root] != root) root = parent_[root];
  while (parent_[x] != root) {
    int next = parent_[x];
    parent_[x] = root;
    x = next;
  }
  return root;
}

bool UnionFind::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  --components_;
  return true;
}

int UnionFind::size_of(int x) { return size_[find(x)]; }

std::vector<std::vector<VertexId>> connected_components(
    const Graph& g,
    const std::vector<char>* removed_vertex,
    const std::function<bool(EdgeId)>& edge_ok) {
  int n = g.vertex_count();
  auto alive = [&](VertexId v) {
    return removed_vertex == nullptr || !(*removed_vertex)[v];
  };
  std::vector<char> seen(n, 0);
  std::vector<std::vector<VertexId>> result;
  std::vector<VertexId> stack;
  for (VertexId start = 0; start < n; ++start) {
    if (seen[start] || !alive(start)) continue;
    std::vector<VertexId> comp;
    stack.push_back(start);
    seen[start] = 1;
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (auto [w, e] : g.neighbors(v)) {
        if (seen[w] || !alive(w)) continue;
        if (edge_ok && !edge_ok(e)) continue;
        seen[w] = 1;
        stack.push_back(w);
      }
    }
    std::sort(comp.begin(), comp.end());
    result.push_back(std::move(comp));
  }
  // scanning from ascending start ids already yields smallest-member order
  return result;
}

}  // namespace dbsf
