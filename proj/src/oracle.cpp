#include "dbsf/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

namespace dbsf {

namespace {

// Union by size without path compression so includes can be rolled back.
class RollbackDsu {
 public:
  explicit RollbackDsu(int n) : parent_(n), size_(n, 1) {
    for (int i = 0; i < n; ++i) parent_[i] = i;
  }
  int find(int x) const {
    while (parent_[x] != x) x = parent_[x];
    return x;
  }
  bool same(int a, int b) const { return find(a) == find(b); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    trail_.push_back(b);
    return true;
  }
  void rollback() {
    int b = trail_.back();
    trail_.pop_back();
    int a = parent_[b];
    size_[a] -= size_[b];
    parent_[b] = b;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
  std::vector<int> trail_;
};

}  // namespace

bool is_feasible_forest(const Graph& g, const std::vector<Demand>& demands,
                        const std::vector<EdgeId>& edges) {
  UnionFind uf(g.vertex_count());
  for (EdgeId e : edges) {
    const Edge& ed = g.edge(e);
    if (!uf.unite(ed.u, ed.v)) return false;  // cycle
  }
  for (const auto& d : demands)
    if (!uf.same(d.s, d.t)) return false;
  return true;
}

std::optional<Rational> solution_delta(const Graph& g, const std::vector<EdgeId>& edges) {
  std::vector<int> degree(g.vertex_count(), 0);
  for (EdgeId e : edges) {
    ++degree[g.edge(e).u];
    ++degree[g.edge(e).v];
  }
  std::optional<Rational> delta;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (degree[v] == 0 || g.bound(v).unbounded()) continue;
    const Rational& b = g.bound(v).value();
    if (!delta || b < *delta) delta = b;
  }
  return delta;
}

int resolve_oracle_cap(std::optional<int> requested) {
  if (requested) return *requested;
  if (const char* env = std::getenv("DBSF_ORACLE_CAP")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 26;
}

namespace {

struct OptSearch {
  const Graph& g;
  const std::vector<Demand>& demands;
  std::optional<int> edge_budget;

  RollbackDsu dsu;
  std::vector<int> degree;
  std::vector<EdgeId> included;
  std::vector<Rational> load_trail;  // max load before each include
  Rational cur_max{0};

  bool found = false;
  Rational best_value{0};
  std::vector<EdgeId> best_edges;
  std::set<Rational> deltas;
  bool delta_unbounded = false;

  OptSearch(const Graph& g, const std::vector<Demand>& demands, std::optional<int> budget)
      : g(g), demands(demands), edge_budget(budget), dsu(g.vertex_count()),
        degree(g.vertex_count(), 0) {}

  bool demands_met() const {
    for (const auto& d : demands)
      if (!dsu.same(d.s, d.t)) return false;
    return true;
  }

  // Can the remaining undecided edges still connect every unmet demand?
  bool still_feasible(int idx) const {
    UnionFind probe(g.vertex_count());
    for (EdgeId e : included) probe.unite(g.edge(e).u, g.edge(e).v);
    for (int e = idx; e < g.edge_count(); ++e) probe.unite(g.edge(e).u, g.edge(e).v);
    for (const auto& d : demands)
      if (!probe.same(d.s, d.t)) return false;
    return true;
  }

  Rational load_after(VertexId v) const {
    const DegreeBound& b = g.bound(v);
    if (b.unbounded()) return Rational(0);
    return Rational(degree[v] + 1) / b.value();
  }

  bool candidate_beats_best() const {
    if (cur_max != best_value) return cur_max < best_value;
    if (included.size() != best_edges.size()) return included.size() < best_edges.size();
    return included < best_edges;  // both sorted ascending by construction
  }

  void record() {
    if (!found || cur_max < best_value) {
      found = true;
      best_value = cur_max;
      best_edges = included;
      deltas.clear();
      delta_unbounded = false;
    } else if (cur_max == best_value && candidate_beats_best()) {
      best_edges = included;
    }
    auto d = solution_delta(g, included);
    if (d)
      deltas.insert(*d);
    else
      delta_unbounded = true;
  }

  void dfs(int idx) {
    if (demands_met()) {
      // Supersets only raise the load and lose every tie-break; stop here.
      record();
      return;
    }
    if (idx == g.edge_count()) return;
    if (!still_feasible(idx)) return;

    const Edge& ed = g.edge(idx);
    bool budget_ok = !edge_budget || static_cast<int>(included.size()) < *edge_budget;
    if (budget_ok && !dsu.same(ed.u, ed.v)) {
      Rational new_max = std::max({cur_max, load_after(ed.u), load_after(ed.v)});
      // Strict comparison: equal-value branches stay alive so every optimal
      // delta is collected.
      if (!found || new_max <= best_value) {
        dsu.unite(ed.u, ed.v);
        ++degree[ed.u];
        ++degree[ed.v];
        included.push_back(idx);
        load_trail.push_back(cur_max);
        cur_max = new_max;
        dfs(idx + 1);
        cur_max = load_trail.back();
        load_trail.pop_back();
        included.pop_back();
        --degree[ed.u];
        --degree[ed.v];
        dsu.rollback();
      }
    }
    dfs(idx + 1);
  }
};

}  // namespace

OfflineSolution brute_force_opt(const Instance& transformed, std::optional<int> edge_cap,
                                std::optional<int> edge_budget) {
  if (!transformed.dummy_transformed)
    throw std::invalid_argument("brute_force_opt expects a dummy-transformed instance");
  int cap = resolve_oracle_cap(edge_cap);
  if (transformed.graph.edge_count() > cap)
    throw CapExceeded("edge count " + std::to_string(transformed.graph.edge_count()) +
                      " exceeds oracle cap " + std::to_string(cap));

  OptSearch search(transformed.graph, transformed.demands, edge_budget);
  search.dfs(0);
  if (!search.found) throw Infeasible("no edge subset connects every demand");

  OfflineSolution out;
  out.edges = search.best_edges;
  out.value = search.best_value;
  out.delta = solution_delta(transformed.graph, out.edges);
  out.optimal_finite_deltas.assign(search.deltas.begin(), search.deltas.end());
  out.optimal_delta_unbounded = search.delta_unbounded;
  return out;
}

namespace {

struct WeightedSearch {
  const Graph& g;
  const std::vector<VertexId>& terminals;
  VertexId root;
  int degree_cap;

  RollbackDsu dsu;
  std::vector<int> degree;
  std::vector<EdgeId> included;
  Int cur_weight = 0;

  bool found = false;
  Int best_weight = 0;
  std::vector<EdgeId> best_edges;

  WeightedSearch(const Graph& g, const std::vector<VertexId>& terminals, VertexId root,
                 int degree_cap)
      : g(g), terminals(terminals), root(root), degree_cap(degree_cap),
        dsu(g.vertex_count()), degree(g.vertex_count(), 0) {}

  bool terminals_met() const {
    for (VertexId t : terminals)
      if (!dsu.same(t, root)) return false;
    return true;
  }

  bool still_feasible(int idx) const {
    UnionFind probe(g.vertex_count());
    for (EdgeId e : included) probe.unite(g.edge(e).u, g.edge(e).v);
    for (int e = idx; e < g.edge_count(); ++e) probe.unite(g.edge(e).u, g.edge(e).v);
    for (VertexId t : terminals)
      if (!probe.same(t, root)) return false;
    return true;
  }

  bool candidate_beats_best() const {
    if (cur_weight != best_weight) return cur_weight < best_weight;
    if (included.size() != best_edges.size()) return included.size() < best_edges.size();
    return included < best_edges;
  }

  void record() {
    if (!found || candidate_beats_best()) {
      found = true;
      best_weight = cur_weight;
      best_edges = included;
    }
  }

  void dfs(int idx) {
    if (terminals_met()) {
      record();
      return;
    }
    if (idx == g.edge_count()) return;
    if (found && cur_weight > best_weight) return;
    if (!still_feasible(idx)) return;

    const Edge& ed = g.edge(idx);
    if (!dsu.same(ed.u, ed.v) && degree[ed.u] < degree_cap && degree[ed.v] < degree_cap &&
        (!found || cur_weight + ed.weight <= best_weight)) {
      dsu.unite(ed.u, ed.v);
      ++degree[ed.u];
      ++degree[ed.v];
      included.push_back(idx);
      cur_weight += ed.weight;
      dfs(idx + 1);
      cur_weight -= ed.weight;
      included.pop_back();
      --degree[ed.u];
      --degree[ed.v];
      dsu.rollback();
    }
    dfs(idx + 1);
  }
};

}  // namespace

WeightedSolution brute_force_weighted_opt(const Graph& g, const std::vector<VertexId>& terminals,
                                          VertexId root, int degree_cap,
                                          std::optional<int> edge_cap) {
  int cap = resolve_oracle_cap(edge_cap);
  if (g.edge_count() > cap)
    throw CapExceeded("edge count " + std::to_string(g.edge_count()) +
                      " exceeds oracle cap " + std::to_string(cap));
  for (VertexId t : terminals)
    if (t < 0 || t >= g.vertex_count()) throw std::out_of_range("terminal id out of range");
  if (root < 0 || root >= g.vertex_count()) throw std::out_of_range("root id out of range");
  if (degree_cap < 1) throw std::invalid_argument("degree cap must be at least 1");

  WeightedSearch search(g, terminals, root, degree_cap);
  search.dfs(0);
  if (!search.found)
    throw Infeasible("no capped forest connects every terminal to the root");
  return WeightedSolution{search.best_edges, search.best_weight};
}

}  // namespace dbsf
