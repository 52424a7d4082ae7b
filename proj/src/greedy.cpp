#include "dbsf/greedy.hpp"

#include <json.hpp>

#include <algorithm>
#include <cassert>
#include <deque>
#include <sstream>

namespace dbsf {

ForestState::ForestState(const Graph& g)
    : graph(&g),
      in_solution(g.edge_count(), 0),
      degree(g.vertex_count(), 0),
      components(g.vertex_count()) {}

void ForestState::add_edge(EdgeId e) {
  if (in_solution[e]) throw std::logic_error("edge already in solution");
  const Edge& ed = graph->edge(e);
  if (!components.unite(ed.u, ed.v))
    throw std::logic_error("adding edge would close a cycle");
  in_solution[e] = 1;
  ++degree[ed.u];
  ++degree[ed.v];
}

std::vector<EdgeId> ForestState::solution_edges() const {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < static_cast<EdgeId>(in_solution.size()); ++e)
    if (in_solution[e]) out.push_back(e);
  return out;
}

Rational vertex_load(const ForestState& st, VertexId v) {
  const DegreeBound& b = st.graph->bound(v);
  if (b.unbounded()) return Rational(0);
  return Rational(st.degree[v]) / b.value();
}

Rational uptick_load(const ForestState& st, VertexId v) {
  const DegreeBound& b = st.graph->bound(v);
  if (b.unbounded()) return Rational(0);
  return Rational(st.degree[v] + 2) / b.value();
}

Rational max_load(const ForestState& st) {
  Rational h(0);
  for (VertexId v = 0; v < st.graph->vertex_count(); ++v)
    h = std::max(h, vertex_load(st, v));
  return h;
}

ExtensionPath find_min_uptick_path(const ForestState& st, VertexId s, VertexId t) {
  const Graph& g = *st.graph;
  int n = g.vertex_count();

  UnionFind uf = st.components;  // the contraction: one node per component
  int rs = uf.find(s), rt = uf.find(t);
  if (rs == rt) throw std::logic_error("find_min_uptick_path: endpoints share a component");

  // canonical representative = smallest member id, for deterministic ties
  std::vector<VertexId> canon(n, -1);
  for (VertexId v = 0; v < n; ++v) {
    int r = uf.find(v);
    if (canon[r] < 0) canon[r] = v;
  }

  std::vector<Rational> uptick(n, Rational(0));
  for (VertexId v = 0; v < n; ++v) uptick[v] = uptick_load(st, v);

  struct Ext {
    EdgeId e;
    int ru, rv;
    Rational key;  // max endpoint uptick: the path bottleneck contribution
  };
  std::vector<Ext> ext;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    int ru = uf.find(ed.u), rv = uf.find(ed.v);
    if (ru == rv) continue;
    ext.push_back(Ext{e, ru, rv, std::max(uptick[ed.u], uptick[ed.v])});
  }

  // Phase 1: minimax bottleneck. Union extension edges by ascending key; the
  // key that first joins s and t is the smallest achievable path bottleneck.
  std::vector<int> order(ext.size());
  for (size_t i = 0; i < ext.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (ext[a].key != ext[b].key) return ext[a].key < ext[b].key;
    return ext[a].e < ext[b].e;
  });
  Rational bstar;
  bool connected = false;
  {
    UnionFind uf2 = uf;
    for (int i : order) {
      uf2.unite(ext[i].ru, ext[i].rv);
      if (uf2.same(rs, rt)) {
        bstar = ext[i].key;
        connected = true;
        break;
      }
    }
  }
  if (!connected) throw NoPath("no path connects the demand endpoints");

  // Phase 2: fewest hops among paths within the bottleneck threshold.
  std::vector<std::vector<std::pair<int, EdgeId>>> adj(n);  // by component root
  for (const Ext& x : ext) {
    if (x.key > bstar) continue;
    adj[x.ru].emplace_back(x.rv, x.e);
    adj[x.rv].emplace_back(x.ru, x.e);
  }
  std::vector<int> dist(n, -1);
  std::deque<int> queue;
  dist[rs] = 0;
  queue.push_back(rs);
  while (!queue.empty()) {
    int r = queue.front();
    queue.pop_front();
    for (auto [r2, e] : adj[r]) {
      (void)e;
      if (dist[r2] < 0) {
        dist[r2] = dist[r] + 1;
        queue.push_back(r2);
      }
    }
  }
  assert(dist[rt] >= 0);

  // Backward reconstruction; among predecessors one hop closer, prefer the
  // component with the lowest member id, then the smallest edge.
  ExtensionPath path;
  int cur = rt;
  while (cur != rs) {
    int best_r = -1;
    EdgeId best_e = -1;
    for (auto [r2, e] : adj[cur]) {
      if (dist[r2] != dist[cur] - 1) continue;
      if (best_r < 0) {
        best_r = r2;
        best_e = e;
        continue;
      }
      const Edge& a = g.edge(e);
      const Edge& b = g.edge(best_e);
      auto tie = [&](const Edge& x) {
        return std::tuple(std::min(x.u, x.v), std::max(x.u, x.v));
      };
      auto key_a = std::tuple(canon[r2], tie(a), e);
      auto key_b = std::tuple(canon[best_r], tie(b), best_e);
      if (key_a < key_b) {
        best_r = r2;
        best_e = e;
      }
    }
    assert(best_r >= 0);
    path.edges.push_back(best_e);
    cur = best_r;
  }
  std::reverse(path.edges.begin(), path.edges.end());

  for (EdgeId e : path.edges) {
    path.vertices.push_back(g.edge(e).u);
    path.vertices.push_back(g.edge(e).v);
  }
  std::sort(path.vertices.begin(), path.vertices.end());
  path.vertices.erase(std::unique(path.vertices.begin(), path.vertices.end()),
                      path.vertices.end());
  path.bottleneck = Rational(0);
  for (VertexId v : path.vertices) path.bottleneck = std::max(path.bottleneck, uptick[v]);
  assert(path.bottleneck == bstar);
  path.hops = static_cast<int>(path.edges.size());
  return path;
}

GaStep serve_demand(ForestState& st, Demand d, int demand_index) {
  GaStep step;
  step.demand_index = demand_index;
  step.demand = d;
  if (st.components.same(d.s, d.t)) {
    step.tau = Rational(0);
    step.already_connected = true;
    return step;
  }
  ExtensionPath p = find_min_uptick_path(st, d.s, d.t);
  for (EdgeId e : p.edges) st.add_edge(e);
  step.tau = p.bottleneck;
  step.already_connected = false;
  step.edges = p.edges;
  return step;
}

GaTranscript run_ga(const Instance& inst, const std::vector<int>* order) {
  GaTranscript t;
  t.instance = attach_dummy_terminals(inst);
  if (!t.instance.groups.empty())
    throw std::invalid_argument("run_ga serves pair demands only");
  int k = static_cast<int>(t.instance.demands.size());
  std::vector<int> arrival(k);
  if (order) {
    if (static_cast<int>(order->size()) != k)
      throw std::invalid_argument("order must be a permutation of demand indices");
    std::vector<char> used(k, 0);
    for (int i : *order) {
      if (i < 0 || i >= k || used[i])
        throw std::invalid_argument("order must be a permutation of demand indices");
      used[i] = 1;
    }
    arrival = *order;
  } else {
    for (int i = 0; i < k; ++i) arrival[i] = i;
  }
  ForestState st(t.instance.graph);
  for (int j = 0; j < k; ++j)
    t.steps.push_back(serve_demand(st, t.instance.demands[arrival[j]], j));
  t.final_degree = st.degree;
  return t;
}

ForestState GaTranscript::final_state() const {
  ForestState st(instance.graph);
  for (const auto& step : steps)
    for (EdgeId e : step.edges) st.add_edge(e);
  return st;
}

Rational GaTranscript::max_load() const {
  ForestState st = final_state();
  return dbsf::max_load(st);
}

std::vector<Rational> GaTranscript::taus() const {
  std::vector<Rational> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.tau);
  return out;
}

void write_transcript_jsonl(const GaTranscript& t, std::ostream& out) {
  using nlohmann::json;
  json meta = {{"type", "meta"},
               {"format", "dbsf-transcript"},
               {"version", 1},
               {"n", t.instance.graph.vertex_count()},
               {"demands", t.steps.size()}};
  out << meta.dump() << "\n";
  for (const auto& s : t.steps) {
    json edges = json::array();
    for (EdgeId e : s.edges) {
      const Edge& ed = t.instance.graph.edge(e);
      edges.push_back(json::array({e, ed.u, ed.v}));
    }
    json rec = {{"type", "step"},
                {"i", s.demand_index},
                {"s", s.demand.s},
                {"t", s.demand.t},
                {"tau", format_rational(s.tau)},
                {"already_connected", s.already_connected},
                {"edges", edges}};
    out << rec.dump() << "\n";
  }
  json fin = {{"type", "final"}, {"degree", t.final_degree}};
  out << fin.dump() << "\n";
}

GaTranscript read_transcript_jsonl(const Instance& transformed, std::istream& in) {
  using nlohmann::json;
  if (!transformed.dummy_transformed)
    throw std::invalid_argument("transcript replay needs the transformed instance");
  GaTranscript t;
  t.instance = transformed;
  std::vector<int> final_degree;
  bool saw_meta = false, saw_final = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const std::exception& ex) {
      throw std::runtime_error("transcript line " + std::to_string(line_no) + ": " + ex.what());
    }
    std::string type = rec.value("type", "");
    if (type == "meta") {
      saw_meta = true;
      if (rec.at("n").get<int>() != transformed.graph.vertex_count())
        throw std::runtime_error("transcript vertex count does not match the instance");
    } else if (type == "step") {
      GaStep s;
      s.demand_index = rec.at("i").get<int>();
      s.demand.s = rec.at("s").get<int>();
      s.demand.t = rec.at("t").get<int>();
      s.tau = parse_rational(rec.at("tau").get<std::string>());
      s.already_connected = rec.at("already_connected").get<bool>();
      for (const auto& e : rec.at("edges")) {
        EdgeId id = e.at(0).get<int>();
        if (id < 0 || id >= transformed.graph.edge_count())
          throw std::runtime_error("transcript edge id out of range");
        const Edge& ed = transformed.graph.edge(id);
        VertexId u = e.at(1).get<int>(), v = e.at(2).get<int>();
        if (!((ed.u == u && ed.v == v) || (ed.u == v && ed.v == u)))
          throw std::runtime_error("transcript edge endpoints do not match the instance");
        s.edges.push_back(id);
      }
      t.steps.push_back(std::move(s));
    } else if (type == "final") {
      saw_final = true;
      final_degree = rec.at("degree").get<std::vector<int>>();
    } else {
      throw std::runtime_error("transcript line " + std::to_string(line_no) +
                               ": unknown record type '" + type + "'");
    }
  }
  if (!saw_meta || !saw_final) throw std::runtime_error("transcript is missing meta or final record");

  // Replay to validate taus and the degree table.
  ForestState st(t.instance.graph);
  for (const auto& s : t.steps) {
    bool connected = st.components.same(s.demand.s, s.demand.t);
    if (connected != s.already_connected)
      throw std::runtime_error("transcript connectivity flag does not replay");
    Rational bottleneck(0);
    for (EdgeId e : s.edges) {
      const Edge& ed = t.instance.graph.edge(e);
      bottleneck = std::max({bottleneck, uptick_load(st, ed.u), uptick_load(st, ed.v)});
    }
    for (EdgeId e : s.edges) st.add_edge(e);
    if (!s.already_connected && bottleneck != s.tau)
      throw std::runtime_error("transcript tau does not replay");
  }
  if (st.degree != final_degree)
    throw std::runtime_error("transcript final degrees do not replay");
  t.final_degree = final_degree;
  return t;
}

}  // namespace dbsf
