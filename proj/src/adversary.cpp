#include "dbsf/adversary.hpp"

#include "dbsf/oracle.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <limits>
#include <memory>
#include <queue>
#include <set>
#include <sstream>
#include <tuple>

namespace dbsf {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Shared algorithm plumbing

class SolutionTracker : public OnlineSteinerAlgorithm {
 public:
  const std::vector<EdgeId>& current_solution() const override { return solution_; }

 protected:
  std::vector<EdgeId> add_edges(const std::vector<EdgeId>& edges) {
    std::vector<EdgeId> added;
    for (EdgeId e : edges) {
      if (!held_.count(e)) {
        held_.insert(e);
        added.push_back(e);
      }
    }
    solution_.assign(held_.begin(), held_.end());
    return added;
  }
  bool holds(EdgeId e) const { return held_.count(e) > 0; }
  void reset_solution() {
    held_.clear();
    solution_.clear();
  }

 private:
  std::set<EdgeId> held_;
  std::vector<EdgeId> solution_;
};

bool connected_in(const Graph& g, const std::vector<EdgeId>& edges, VertexId a, VertexId b) {
  if (a == b) return true;
  UnionFind uf(g.vertex_count());
  for (EdgeId e : edges) uf.unite(g.edge(e).u, g.edge(e).v);
  return uf.same(a, b);
}

std::vector<int> solution_degrees(const Graph& g, const std::vector<EdgeId>& edges) {
  std::vector<int> deg(g.vertex_count(), 0);
  for (EdgeId e : edges) {
    ++deg[g.edge(e).u];
    ++deg[g.edge(e).v];
  }
  return deg;
}

// Deterministic cheapest path: minimizes (unbought weight, hop count), with
// queue ties broken by vertex id and parent ties by first finalization.
// forbid_direct drops edges joining s and t directly; falls back to allowing
// them when no other route exists.
std::vector<EdgeId> cheapest_path(const Graph& g, const std::set<EdgeId>& bought,
                                  VertexId s, VertexId t, bool forbid_direct) {
  struct Key {
    Int cost;
    int hops;
    bool operator<(const Key& o) const {
      return cost != o.cost ? cost < o.cost : hops < o.hops;
    }
  };
  const Key inf{std::numeric_limits<Int>::max(), 0};
  std::vector<Key> dist(g.vertex_count(), inf);
  std::vector<EdgeId> parent_edge(g.vertex_count(), -1);
  std::vector<char> done(g.vertex_count(), 0);
  using QItem = std::tuple<Int, int, VertexId>;
  std::priority_queue<QItem, std::vector<QItem>, std::greater<>> pq;
  dist[s] = {0, 0};
  pq.emplace(0, 0, s);
  while (!pq.empty()) {
    auto [cost, hops, v] = pq.top();
    pq.pop();
    if (done[v]) continue;
    done[v] = 1;
    if (v == t) break;
    for (const auto& [w, e] : g.neighbors(v)) {
      if (done[w]) continue;
      const Edge& ed = g.edge(e);
      if (forbid_direct && ((ed.u == s && ed.v == t) || (ed.u == t && ed.v == s))) continue;
      Key cand{cost + (bought.count(e) ? 0 : ed.weight), hops + 1};
      if (cand < dist[w]) {
        dist[w] = cand;
        parent_edge[w] = e;
        pq.emplace(cand.cost, cand.hops, w);
      }
    }
  }
  if (!done[t]) {
    if (forbid_direct) return cheapest_path(g, bought, s, t, false);
    throw ProtocolViolation("no path between demand endpoints");
  }
  std::vector<EdgeId> path;
  for (VertexId v = t; v != s;) {
    EdgeId e = parent_edge[v];
    path.push_back(e);
    v = g.edge(e).other(v);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

// ---------------------------------------------------------------------------
// Built-in algorithms

// Serves each demand along the path minimizing (bottleneck uptick, hops).
class GaOnline : public SolutionTracker {
 public:
  void init(const Graph& g, VertexId root) override {
    graph_ = &g;
    root_ = root;
    served_ = 0;
    state_.emplace(g);
    reset_solution();
  }
  std::vector<EdgeId> on_terminal(VertexId t) override { return on_pair_demand(root_, t); }
  std::vector<EdgeId> on_pair_demand(VertexId s, VertexId t) override {
    GaStep step = serve_demand(*state_, Demand{s, t}, served_++);
    return add_edges(step.edges);
  }
  std::vector<EdgeId> on_group_demand(const std::vector<VertexId>& group) override {
    for (VertexId v : group) {
      if (state_->components.same(root_, v)) return {};
    }
    // Pick the member whose connecting path is lexicographically best by
    // (bottleneck uptick, hops, member id).
    std::optional<ExtensionPath> best;
    VertexId best_v = -1;
    for (VertexId v : group) {
      ExtensionPath p = find_min_uptick_path(*state_, root_, v);
      if (!best || std::tie(p.bottleneck, p.hops) < std::tie(best->bottleneck, best->hops)) {
        best = p;
        best_v = v;
      }
    }
    if (!best) throw ProtocolViolation("empty demand group");
    GaStep step = serve_demand(*state_, Demand{root_, best_v}, served_++);
    return add_edges(step.edges);
  }

 private:
  const Graph* graph_ = nullptr;
  VertexId root_ = 0;
  int served_ = 0;
  std::optional<ForestState> state_;
};

// Cheapest-path baseline; groups are served at the lowest-id unconnected member.
class GreedyOnline : public SolutionTracker {
 public:
  explicit GreedyOnline(bool avoid_direct = false) : avoid_direct_(avoid_direct) {}
  void init(const Graph& g, VertexId root) override {
    graph_ = &g;
    root_ = root;
    bought_.clear();
    reset_solution();
  }
  std::vector<EdgeId> on_terminal(VertexId t) override { return on_pair_demand(root_, t); }
  std::vector<EdgeId> on_pair_demand(VertexId s, VertexId t) override {
    if (connected_in(*graph_, current_solution(), s, t)) return {};
    std::vector<EdgeId> path = cheapest_path(*graph_, bought_, s, t, avoid_direct_);
    bought_.insert(path.begin(), path.end());
    return add_edges(path);
  }
  std::vector<EdgeId> on_group_demand(const std::vector<VertexId>& group) override {
    for (VertexId v : group) {
      if (connected_in(*graph_, current_solution(), root_, v)) return {};
    }
    VertexId pick = *std::min_element(group.begin(), group.end());
    return on_pair_demand(root_, pick);
  }

 private:
  const Graph* graph_ = nullptr;
  VertexId root_ = 0;
  bool avoid_direct_;
  std::set<EdgeId> bought_;
};

// Buys the cheapest direct edge between the endpoints when one exists.
class AlwaysRootOnline : public SolutionTracker {
 public:
  void init(const Graph& g, VertexId root) override {
    graph_ = &g;
    root_ = root;
    bought_.clear();
    reset_solution();
  }
  std::vector<EdgeId> on_terminal(VertexId t) override { return on_pair_demand(root_, t); }
  std::vector<EdgeId> on_pair_demand(VertexId s, VertexId t) override {
    if (connected_in(*graph_, current_solution(), s, t)) return {};
    std::optional<EdgeId> direct;
    for (const auto& [w, e] : graph_->neighbors(s)) {
      if (w != t) continue;
      if (!direct || std::make_pair(graph_->edge(e).weight, e) <
                         std::make_pair(graph_->edge(*direct).weight, *direct)) {
        direct = e;
      }
    }
    std::vector<EdgeId> path;
    if (direct) {
      path = {*direct};
    } else {
      path = cheapest_path(*graph_, bought_, s, t, false);
    }
    bought_.insert(path.begin(), path.end());
    return add_edges(path);
  }
  std::vector<EdgeId> on_group_demand(const std::vector<VertexId>& group) override {
    for (VertexId v : group) {
      if (connected_in(*graph_, current_solution(), root_, v)) return {};
    }
    VertexId pick = *std::min_element(group.begin(), group.end());
    return on_pair_demand(root_, pick);
  }

 private:
  const Graph* graph_ = nullptr;
  VertexId root_ = 0;
  std::set<EdgeId> bought_;
};

// Replays a fixed JSONL script: one {"edges": [ids...]} record per request.
class ScriptedOnline : public SolutionTracker {
 public:
  explicit ScriptedOnline(std::shared_ptr<const std::vector<std::vector<EdgeId>>> steps)
      : steps_(std::move(steps)) {}
  void init(const Graph& g, VertexId) override {
    graph_ = &g;
    next_ = 0;
    reset_solution();
  }
  std::vector<EdgeId> on_terminal(VertexId) override { return step(); }
  std::vector<EdgeId> on_pair_demand(VertexId, VertexId) override { return step(); }
  std::vector<EdgeId> on_group_demand(const std::vector<VertexId>&) override { return step(); }

 private:
  std::vector<EdgeId> step() {
    if (next_ >= steps_->size()) {
      throw ProtocolViolation("scripted algorithm ran out of records");
    }
    for (EdgeId e : (*steps_)[next_]) {
      if (e < 0 || e >= graph_->edge_count()) {
        throw ProtocolViolation("scripted algorithm names an unknown edge");
      }
    }
    return add_edges((*steps_)[next_++]);
  }
  const Graph* graph_ = nullptr;
  std::shared_ptr<const std::vector<std::vector<EdgeId>>> steps_;
  std::size_t next_ = 0;
};

}  // namespace

AlgorithmFactory builtin_algorithm_factory(const std::string& name) {
  if (name == "ga") {
    return [](std::uint64_t) { return std::make_unique<GaOnline>(); };
  }
  if (name == "greedy") {
    return [](std::uint64_t) { return std::make_unique<GreedyOnline>(); };
  }
  if (name == "always-expensive") {
    return [](std::uint64_t) { return std::make_unique<GreedyOnline>(true); };
  }
  if (name == "always-root") {
    return [](std::uint64_t) { return std::make_unique<AlwaysRootOnline>(); };
  }
  throw std::invalid_argument("unknown algorithm '" + name + "'");
}

AlgorithmFactory scripted_algorithm_factory(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open script file " + path);
  auto steps = std::make_shared<std::vector<std::vector<EdgeId>>>();
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec = json::parse(line);
    std::vector<EdgeId> edges;
    for (const auto& e : rec.at("edges")) edges.push_back(e.get<EdgeId>());
    steps->push_back(std::move(edges));
  }
  return [steps](std::uint64_t) { return std::make_unique<ScriptedOnline>(steps); };
}

// ---------------------------------------------------------------------------
// Gadget builders

TreeGadget build_tree_lb_instance(int levels) {
  if (levels < 1) throw std::invalid_argument("tree gadget needs at least one level");
  long long zn = 1LL << levels;
  if (zn > 64) throw CapExceeded("tree gadget capped at 64 bound-1 nodes (levels <= 6)");
  TreeGadget gg;
  int m = static_cast<int>(zn);
  for (int i = 0; i < m; ++i) {
    DegreeBound b = (i == 0) ? DegreeBound::make_unbounded() : DegreeBound::make_finite(Rational(1));
    gg.z.push_back(gg.graph.add_vertex(b, "z" + std::to_string(i)));
  }
  gg.root = gg.z[0];
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      gg.graph.add_edge(gg.z[i], gg.z[j]);
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      VertexId x = gg.graph.add_vertex(DegreeBound::make_unbounded(),
                                       "x" + std::to_string(i) + "_" + std::to_string(j));
      gg.x.push_back(x);
      gg.x_of_pair[{gg.z[i], gg.z[j]}] = x;
      gg.attach_edge[{x, gg.z[i]}] = gg.graph.add_edge(x, gg.z[i]);
      gg.attach_edge[{x, gg.z[j]}] = gg.graph.add_edge(x, gg.z[j]);
    }
  }
  return gg;
}

WeightedGadget build_weighted_gadget(int k) {
  if (k < 2) throw std::invalid_argument("weighted gadget needs k >= 2");
  WeightedGadget gg;
  gg.k = k;
  gg.n = 2 * static_cast<Int>(k) + 1;
  // Overflow guard for n^k.
  if (k > 16) throw CapExceeded("weighted gadget capped at k <= 16");
  Graph& g = gg.graph;
  gg.root = g.add_vertex(DegreeBound::make_finite(Rational(3)), "root");
  for (int i = 1; i <= k; ++i) {
    g.add_vertex(DegreeBound::make_finite(Rational(3)), "t" + std::to_string(i));
  }
  for (int i = 1; i <= k; ++i) {
    g.add_vertex(DegreeBound::make_finite(Rational(3)), "p" + std::to_string(k + i));
  }
  gg.direct_edge.assign(k + 1, -1);
  gg.expensive_edge.assign(k + 1, -1);
  Int pw = 1;
  for (int i = 1; i <= k; ++i) {
    gg.direct_edge[i] = g.add_edge(i, gg.root, 0);
    pw *= gg.n;
    gg.expensive_edge[i] = g.add_edge(i, k + i, pw);
  }
  for (int i = k + 1; i < 2 * k; ++i) g.add_edge(i, i + 1, 0);
  g.add_edge(2 * k, gg.root, 0);
  return gg;
}

Graph build_group_star(int n) {
  if (n < 2) throw std::invalid_argument("group star needs n >= 2");
  Graph g;
  g.add_vertex(DegreeBound::make_unbounded(), "v1");
  for (int i = 2; i <= n; ++i) {
    VertexId v = g.add_vertex(DegreeBound::make_unbounded(), "v" + std::to_string(i));
    g.add_edge(0, v);
  }
  return g;
}

// ---------------------------------------------------------------------------
// Tree adversary

namespace {

struct TreeRun {
  const TreeGadget* gadget = nullptr;
  OnlineSteinerAlgorithm* alg = nullptr;
  const TreeAdversaryOptions* opt = nullptr;
  const AlgorithmFactory* make = nullptr;
  std::vector<VertexId> issued;  // terminal prefix, for seeded replays
  AdversaryTranscript* out = nullptr;

  bool edge_held_after_replay(std::uint64_t seed, EdgeId e) const {
    auto fresh = (*make)(seed);
    fresh->init(gadget->graph, gadget->root);
    for (VertexId t : issued) fresh->on_terminal(t);
    const auto& sol = fresh->current_solution();
    return std::binary_search(sol.begin(), sol.end(), e);
  }

  // Issues the request sequence for the z-subset [lo, hi) (size 2^s) and
  // returns the forced heavy node of that subset.
  VertexId recurse(int lo, int hi) {
    if (hi - lo == 1) return gadget->z[lo];
    int mid = lo + (hi - lo) / 2;
    VertexId z1 = recurse(lo, mid);
    VertexId z2 = recurse(mid, hi);
    auto key = std::minmax(z1, z2);
    VertexId x = gadget->x_of_pair.at({key.first, key.second});
    EdgeId e1 = gadget->attach_edge.at({x, z1});
    EdgeId e2 = gadget->attach_edge.at({x, z2});

    alg->on_terminal(x);
    issued.push_back(x);
    const std::vector<EdgeId>& sol = alg->current_solution();
    if (!connected_in(gadget->graph, sol, x, gadget->root)) {
      throw ProtocolViolation("requested terminal left unconnected from the root");
    }
    bool h1 = std::binary_search(sol.begin(), sol.end(), e1);
    bool h2 = std::binary_search(sol.begin(), sol.end(), e2);
    if (!h1 && !h2) {
      throw ProtocolViolation("terminal connected without either attachment edge");
    }

    AdversaryRequest req;
    req.kind = "terminal";
    req.payload = {x};
    req.added = diff_from_previous(sol);
    req.degree_after = solution_degrees(gadget->graph, sol);
    out->requests.push_back(std::move(req));

    VertexId heavy;
    if (opt->randomized) {
      int c1 = 0, c2 = 0;
      for (int t = 0; t < opt->trials; ++t) {
        std::uint64_t seed = opt->seed + 0x9e3779b97f4a7c15ULL * (t + 1);
        if (edge_held_after_replay(seed, e1)) ++c1;
        if (edge_held_after_replay(seed, e2)) ++c2;
      }
      heavy = (c1 >= c2) ? z1 : z2;
    } else if (h1 && h2) {
      // Both bought: keep the node already serving more requested terminals.
      int d1 = sigma_degree(z1), d2 = sigma_degree(z2);
      if (d1 != d2) {
        heavy = (d1 > d2) ? z1 : z2;
      } else {
        heavy = std::min(z1, z2);
      }
    } else {
      heavy = h1 ? z1 : z2;
    }
    VertexId loser = (heavy == z1) ? z2 : z1;
    out->offline_edges.push_back(gadget->attach_edge.at({x, loser}));
    return heavy;
  }

  int sigma_degree(VertexId z) const {
    std::set<VertexId> requested(issued.begin(), issued.end());
    int d = 0;
    const auto& sol = alg->current_solution();
    for (EdgeId e : sol) {
      const Edge& ed = gadget->graph.edge(e);
      VertexId other = (ed.u == z) ? ed.v : (ed.v == z ? ed.u : -1);
      if (other >= 0 && requested.count(other)) ++d;
    }
    return d;
  }

  std::vector<EdgeId> diff_from_previous(const std::vector<EdgeId>& sol) {
    std::vector<EdgeId> added;
    std::set_difference(sol.begin(), sol.end(), prev_.begin(), prev_.end(),
                        std::back_inserter(added));
    if (added.size() + prev_.size() != sol.size()) {
      throw ProtocolViolation("online solution shrank between requests");
    }
    prev_ = sol;
    return added;
  }

 private:
  std::vector<EdgeId> prev_;
};

}  // namespace

AdversaryTranscript run_tree_adversary(const AlgorithmFactory& make,
                                       const TreeAdversaryOptions& opt) {
  TreeGadget gadget = build_tree_lb_instance(opt.levels);
  auto alg = make(opt.seed);
  alg->init(gadget.graph, gadget.root);

  AdversaryTranscript out;
  out.kind = "tree";
  out.graph = gadget.graph;
  out.root = gadget.root;

  TreeRun run;
  run.gadget = &gadget;
  run.alg = alg.get();
  run.opt = &opt;
  run.make = &make;
  run.out = &out;
  VertexId heavy = run.recurse(0, static_cast<int>(gadget.z.size()));

  out.online_edges = alg->current_solution();
  out.heavy = heavy;

  std::set<VertexId> x_set(gadget.x.begin(), gadget.x.end());
  std::set<VertexId> requested(run.issued.begin(), run.issued.end());
  for (VertexId z : gadget.z) {
    out.deg[z] = 0;
    out.deg_sigma[z] = 0;
  }
  for (EdgeId e : out.online_edges) {
    const Edge& ed = gadget.graph.edge(e);
    for (auto [a, b] : {std::pair{ed.u, ed.v}, std::pair{ed.v, ed.u}}) {
      if (out.deg.count(a) && x_set.count(b)) {
        ++out.deg[a];
        if (requested.count(b)) ++out.deg_sigma[a];
      }
    }
  }
  out.heavy_deg_sigma = out.deg_sigma[heavy];

  std::map<VertexId, int> off_deg;
  for (EdgeId e : out.offline_edges) {
    const Edge& ed = gadget.graph.edge(e);
    VertexId z = x_set.count(ed.u) ? ed.v : ed.u;
    ++off_deg[z];
  }
  out.offline_max_deg = 0;
  for (const auto& [z, d] : off_deg) out.offline_max_deg = std::max(out.offline_max_deg, d);
  out.offline_heavy_deg = off_deg.count(heavy) ? off_deg[heavy] : 0;
  out.ratio = Rational(out.heavy_deg_sigma, std::max(1, out.offline_max_deg));
  return out;
}

// ---------------------------------------------------------------------------
// Weighted adversary

AdversaryTranscript run_weighted_adversary(const AlgorithmFactory& make,
                                           const WeightedAdversaryOptions& opt) {
  WeightedGadget gadget = build_weighted_gadget(opt.k);
  const Graph& g = gadget.graph;
  auto alg = make(opt.seed);
  alg->init(g, gadget.root);

  AdversaryTranscript out;
  out.kind = "weighted";
  out.graph = g;
  out.root = gadget.root;

  std::vector<EdgeId> prev;
  std::vector<VertexId> issued;
  auto replay_holds = [&](std::uint64_t seed, EdgeId e) {
    auto fresh = make(seed);
    fresh->init(g, gadget.root);
    for (VertexId t : issued) fresh->on_terminal(t);
    const auto& sol = fresh->current_solution();
    return std::binary_search(sol.begin(), sol.end(), e);
  };

  int r = 0;
  bool case_a = false;
  std::vector<char> prev_direct(opt.k + 1, 0), prev_expensive(opt.k + 1, 0);
  for (int j = 1; j <= opt.k; ++j) {
    alg->on_terminal(j);
    issued.push_back(j);
    const std::vector<EdgeId>& sol = alg->current_solution();

    AdversaryRequest req;
    req.kind = "terminal";
    req.payload = {j};
    std::set_difference(sol.begin(), sol.end(), prev.begin(), prev.end(),
                        std::back_inserter(req.added));
    if (req.added.size() + prev.size() != sol.size()) {
      throw ProtocolViolation("online solution shrank between requests");
    }
    prev = sol;
    req.degree_after = solution_degrees(g, sol);
    out.requests.push_back(std::move(req));

    // Every served terminal must hold its direct or its expensive edge, and
    // held-edge indicators only ever switch on.
    for (int i = 1; i <= j; ++i) {
      if (!connected_in(g, sol, i, gadget.root)) {
        throw ProtocolViolation("terminal " + std::to_string(i) + " not connected to the root");
      }
      bool p = std::binary_search(sol.begin(), sol.end(), gadget.direct_edge[i]);
      bool q = std::binary_search(sol.begin(), sol.end(), gadget.expensive_edge[i]);
      if (!p && !q) {
        throw ProtocolViolation("terminal " + std::to_string(i) +
                                " holds neither its direct nor its expensive edge");
      }
      if ((prev_direct[i] && !p) || (prev_expensive[i] && !q)) {
        throw ProtocolViolation("held-edge indicator switched off");
      }
      prev_direct[i] = p;
      prev_expensive[i] = q;
    }

    bool expensive_held;
    if (opt.randomized) {
      int c = 0;
      for (int t = 0; t < opt.trials; ++t) {
        std::uint64_t seed = opt.seed + 0x9e3779b97f4a7c15ULL * (t + 1);
        if (replay_holds(seed, gadget.expensive_edge[j])) ++c;
      }
      expensive_held = 2 * c > opt.trials;
    } else {
      expensive_held = prev_expensive[j];
    }
    if (expensive_held) {
      r = j;
      case_a = true;
      break;
    }
  }
  if (!case_a) r = opt.k;

  out.realized_case = case_a ? "a" : "b";
  out.realized_r = r;
  out.online_edges = alg->current_solution();
  for (EdgeId e : out.online_edges) out.online_weight += g.edge(e).weight;
  out.root_degree = solution_degrees(g, out.online_edges)[gadget.root];

  // Offline companion: expensive edges below r feed the partner chain to the
  // root; terminal r takes its direct edge. Meets degree cap 3.
  for (int i = 1; i < r; ++i) out.offline_edges.push_back(gadget.expensive_edge[i]);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    if (ed.weight == 0 && ed.u != gadget.root && ed.v != gadget.root) {
      out.offline_edges.push_back(e);  // partner chain
    }
    if ((ed.u == 2 * opt.k && ed.v == gadget.root) ||
        (ed.v == 2 * opt.k && ed.u == gadget.root)) {
      out.offline_edges.push_back(e);
    }
  }
  out.offline_edges.push_back(gadget.direct_edge[r]);
  std::sort(out.offline_edges.begin(), out.offline_edges.end());
  for (EdgeId e : out.offline_edges) out.offline_weight += g.edge(e).weight;

  std::vector<VertexId> terminals;
  for (int i = 1; i <= r; ++i) terminals.push_back(i);
  WeightedSolution sol = brute_force_weighted_opt(g, terminals, gadget.root, 3,
                                                  opt.oracle_edge_cap);
  out.opt3 = sol.weight;

  if (case_a) {
    out.ratio = Rational(out.online_weight, std::max<Int>(Int(1), *out.opt3));
  } else {
    out.ratio = Rational(out.root_degree, 3);  // degree overshoot vs bound 3
  }
  return out;
}

// ---------------------------------------------------------------------------
// Group-star adversary

AdversaryTranscript run_group_star_adversary(const AlgorithmFactory& make,
                                             const GroupStarAdversaryOptions& opt) {
  Graph g = build_group_star(opt.n);
  auto alg = make(1);
  alg->init(g, 0);

  AdversaryTranscript out;
  out.kind = "group-star";
  out.graph = g;
  out.root = 0;

  std::vector<EdgeId> prev;
  int rounds = 0;
  while (true) {
    std::vector<VertexId> group;
    const std::vector<EdgeId>& before = alg->current_solution();
    for (VertexId v = 1; v < g.vertex_count(); ++v) {
      if (!connected_in(g, before, 0, v)) group.push_back(v);
    }
    if (group.empty()) break;
    if (++rounds > opt.n) {
      throw ProtocolViolation("group adversary exceeded its round guard");
    }
    alg->on_group_demand(group);
    const std::vector<EdgeId>& sol = alg->current_solution();
    bool served = false;
    for (VertexId v : group) {
      if (connected_in(g, sol, 0, v)) served = true;
    }
    if (!served) {
      throw ProtocolViolation("group demand left entirely unconnected");
    }

    AdversaryRequest req;
    req.kind = "group";
    req.payload = group;
    std::set_difference(sol.begin(), sol.end(), prev.begin(), prev.end(),
                        std::back_inserter(req.added));
    if (req.added.size() + prev.size() != sol.size()) {
      throw ProtocolViolation("online solution shrank between requests");
    }
    prev = sol;
    req.degree_after = solution_degrees(g, sol);
    out.requests.push_back(std::move(req));
  }

  out.online_edges = alg->current_solution();
  out.root_degree = solution_degrees(g, out.online_edges)[0];

  // One leaf lies in every issued group: the last group is contained in all
  // earlier ones, so its smallest member witnesses offline degree 1.
  if (!out.requests.empty()) {
    VertexId witness = out.requests.back().payload.front();
    for (const auto& [w, e] : g.neighbors(0)) {
      if (w == witness) {
        out.offline_edges.push_back(e);
        break;
      }
    }
  }
  out.offline_max_deg = out.offline_edges.empty() ? 0 : 1;
  out.ratio = Rational(out.root_degree, std::max(1, out.offline_max_deg));
  return out;
}

void write_adversary_jsonl(const AdversaryTranscript& t, std::ostream& out) {
  json meta = {{"type", "meta"},
               {"format", "dbsf-adversary"},
               {"version", 1},
               {"kind", t.kind},
               {"n", t.graph.vertex_count()},
               {"root", t.root}};
  out << meta.dump() << "\n";
  for (const AdversaryRequest& r : t.requests) {
    json added = json::array();
    for (EdgeId e : r.added) {
      const Edge& ed = t.graph.edge(e);
      added.push_back(json::array({e, ed.u, ed.v}));
    }
    json rec = {{"type", "request"},
                {"kind", r.kind},
                {"payload", r.payload},
                {"added", added},
                {"degree", r.degree_after}};
    out << rec.dump() << "\n";
  }
  json fin = {{"type", "final"},
              {"online_edges", t.online_edges},
              {"offline_edges", t.offline_edges},
              {"ratio", format_rational(t.ratio)}};
  if (t.heavy) {
    fin["heavy"] = *t.heavy;
    fin["heavy_deg_sigma"] = t.heavy_deg_sigma;
    fin["offline_max_deg"] = t.offline_max_deg;
  }
  if (t.kind == "weighted") {
    fin["case"] = t.realized_case;
    fin["r"] = t.realized_r;
    fin["online_weight"] = t.online_weight;
    fin["offline_weight"] = t.offline_weight;
    if (t.opt3) fin["opt3"] = *t.opt3;
    fin["root_degree"] = t.root_degree;
  }
  if (t.kind == "group-star") {
    fin["root_degree"] = t.root_degree;
  }
  out << fin.dump() << "\n";
}

}  // namespace dbsf
