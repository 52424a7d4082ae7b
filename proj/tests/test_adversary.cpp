#include <doctest.h>

#include <dbsf/adversary.hpp>
#include <dbsf/oracle.hpp>

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

using namespace dbsf;

namespace {


// Degrees of Z nodes counting X-neighbors only, recomputed from raw edges.
std::map<VertexId, int> x_degrees(const TreeGadget& gadget,
                                  const std::vector<EdgeId>& edges,
                                  const std::set<VertexId>* restrict_x) {
  std::set<VertexId> zs(gadget.z.begin(), gadget.z.end());
  std::set<VertexId> xs(gadget.x.begin(), gadget.x.end());
  std::map<VertexId, int> deg;
  for (VertexId z : gadget.z) deg[z] = 0;
  for (EdgeId e : edges) {
    const Edge& ed = gadget.graph.edge(e);
    VertexId z = -1, x = -1;
    if (zs.count(ed.u) && xs.count(ed.v)) z = ed.u, x = ed.v;
    if (zs.count(ed.v) && xs.count(ed.u)) z = ed.v, x = ed.u;
    if (z < 0) continue;  // clique edge
    if (restrict_x && !restrict_x->count(x)) continue;
    ++deg[z];
  }
  return deg;
}

std::string write_script(const std::string& name,
                         const std::vector<std::string>& lines) {
  std::ofstream out(name);
  for (const auto& l : lines) out << l << "\n";
  return name;
}

}  // namespace

TEST_CASE("tree gadget shape across levels") {
  const struct {
    int levels, z, x, edges;
  } expected[] = {
      {1, 2, 1, 3},
      {2, 4, 6, 18},
      {3, 8, 28, 84},
  };
  for (const auto& e : expected) {
    TreeGadget gadget = build_tree_lb_instance(e.levels);
    CAPTURE(e.levels);
    CHECK(static_cast<int>(gadget.z.size()) == e.z);
    CHECK(static_cast<int>(gadget.x.size()) == e.x);
    CHECK(gadget.graph.edge_count() == e.edges);
    CHECK(gadget.graph.vertex_count() == e.z + e.x);
    CHECK(gadget.root == gadget.z[0]);
    CHECK(gadget.graph.bound(gadget.root).unbounded());
    for (std::size_t i = 1; i < gadget.z.size(); ++i)
      CHECK(gadget.graph.bound(gadget.z[i]).value() == Rational(1));
    for (VertexId x : gadget.x) CHECK(gadget.graph.bound(x).unbounded());
    CHECK(static_cast<int>(gadget.x_of_pair.size()) == e.x);
    CHECK(static_cast<int>(gadget.attach_edge.size()) == 2 * e.x);
    // Every pair node touches exactly its two clique endpoints.
    for (const auto& [pair, x] : gadget.x_of_pair) {
      CHECK(gadget.graph.neighbors(x).size() == 2);
      CHECK(gadget.attach_edge.count({x, pair.first}) == 1);
      CHECK(gadget.attach_edge.count({x, pair.second}) == 1);
    }
  }
  CHECK_THROWS_AS(build_tree_lb_instance(0), std::invalid_argument);
  CHECK_THROWS_AS(build_tree_lb_instance(7), CapExceeded);
}

TEST_CASE("weighted gadget shape") {
  WeightedGadget gad = build_weighted_gadget(4);
  CHECK(gad.k == 4);
  CHECK(gad.n == 9);  // 2k+1
  CHECK(gad.graph.vertex_count() == 9);
  CHECK(gad.graph.edge_count() == 12);  // 3k
  for (VertexId v = 0; v < 9; ++v)
    CHECK(gad.graph.bound(v).value() == Rational(3));
  Int pw = 9;
  for (int i = 1; i <= 4; ++i) {
    const Edge& direct = gad.graph.edge(gad.direct_edge[i]);
    CHECK(direct.weight == 0);
    CHECK(((direct.u == i && direct.v == gad.root) ||
           (direct.v == i && direct.u == gad.root)));
    const Edge& expensive = gad.graph.edge(gad.expensive_edge[i]);
    CHECK(expensive.weight == pw);
    CHECK(((expensive.u == i && expensive.v == 4 + i) ||
           (expensive.v == i && expensive.u == 4 + i)));
    pw *= 9;
  }
  CHECK_THROWS_AS(build_weighted_gadget(1), std::invalid_argument);
  CHECK_THROWS_AS(build_weighted_gadget(17), CapExceeded);
}

TEST_CASE("group star shape") {
  Graph star = build_group_star(5);
  CHECK(star.vertex_count() == 5);
  CHECK(star.edge_count() == 4);
  for (VertexId v = 0; v < 5; ++v) CHECK(star.bound(v).unbounded());
  for (EdgeId e = 0; e < 4; ++e) {
    const Edge& ed = star.edge(e);
    CHECK(((ed.u == 0) != (ed.v == 0)));  // center touches every edge
  }
  CHECK_THROWS_AS(build_group_star(1), std::invalid_argument);
}

TEST_CASE("tree adversary forces a heavy node against the online greedy") {
  for (int levels = 2; levels <= 4; ++levels) {
    TreeAdversaryOptions opt;
    opt.levels = levels;
    AdversaryTranscript t =
        run_tree_adversary(builtin_algorithm_factory("ga"), opt);
    CAPTURE(levels);
    CHECK(t.kind == "tree");
    const int zn = 1 << levels;
    CHECK(static_cast<int>(t.requests.size()) == zn - 1);
    for (const auto& req : t.requests) {
      CHECK(req.kind == "terminal");
      CHECK(req.payload.size() == 1);
    }
    REQUIRE(t.heavy.has_value());
    // The forced degree (over requested terminals) reaches the guaranteed
    // ceil(levels/2); the load-minimizing greedy in fact concentrates all
    // levels onto the unbounded root.
    CHECK(t.heavy_deg_sigma >= (levels + 1) / 2);
    CHECK(t.heavy_deg_sigma == levels);
    CHECK(*t.heavy == 0);
    // The offline companion serves every request with Z-degrees <= 1 and the
    // heavy node untouched.
    CHECK(t.offline_max_deg <= 1);
    CHECK(t.offline_heavy_deg == 0);
    CHECK(t.offline_edges.size() == t.requests.size());
    CHECK(t.ratio == Rational(t.heavy_deg_sigma));

    // Recompute the degree tables from the raw edge lists.
    TreeGadget gadget = build_tree_lb_instance(levels);
    std::set<VertexId> sigma;
    for (const auto& req : t.requests) sigma.insert(req.payload[0]);
    auto full = x_degrees(gadget, t.online_edges, nullptr);
    auto restricted = x_degrees(gadget, t.online_edges, &sigma);
    for (const auto& [z, d] : full) CHECK(t.deg.at(z) == d);
    for (const auto& [z, d] : restricted) CHECK(t.deg_sigma.at(z) == d);
    CHECK(t.deg_sigma.at(*t.heavy) == t.heavy_deg_sigma);
    auto offline = x_degrees(gadget, t.offline_edges, nullptr);
    for (const auto& [z, d] : offline) CHECK(d <= 1);

    // Online solution really connects every requested terminal to the root.
    UnionFind uf(t.graph.vertex_count());
    for (EdgeId e : t.online_edges)
      uf.unite(t.graph.edge(e).u, t.graph.edge(e).v);
    for (VertexId x : sigma) CHECK(uf.same(x, t.root));
    // Offline companion connects each requested terminal to one of its pair.
    UnionFind off(t.graph.vertex_count());
    for (EdgeId e : t.offline_edges)
      off.unite(t.graph.edge(e).u, t.graph.edge(e).v);
    for (VertexId x : sigma) CHECK(off.size_of(x) >= 2);
  }
}

TEST_CASE("tree adversary degree growth is monotone across requests") {
  TreeAdversaryOptions opt;
  opt.levels = 3;
  AdversaryTranscript t =
      run_tree_adversary(builtin_algorithm_factory("greedy"), opt);
  REQUIRE(t.heavy.has_value());
  CHECK(t.heavy_deg_sigma >= 2);  // ceil(3/2)
  std::size_t prev = 0;
  std::set<EdgeId> seen;
  for (const auto& req : t.requests) {
    for (EdgeId e : req.added) CHECK(seen.insert(e).second);
    CHECK(seen.size() >= prev);
    prev = seen.size();
  }
}

TEST_CASE("randomized replay mode agrees with the deterministic run") {
  TreeAdversaryOptions det;
  det.levels = 3;
  AdversaryTranscript a = run_tree_adversary(builtin_algorithm_factory("ga"), det);
  TreeAdversaryOptions rnd = det;
  rnd.randomized = true;
  rnd.trials = 9;
  rnd.seed = 5;
  AdversaryTranscript b = run_tree_adversary(builtin_algorithm_factory("ga"), rnd);
  CHECK(a.heavy == b.heavy);
  CHECK(a.heavy_deg_sigma == b.heavy_deg_sigma);
  CHECK(a.online_edges == b.online_edges);
  CHECK(a.offline_edges == b.offline_edges);
}

TEST_CASE("weighted adversary catches the online greedy overpaying") {
  // The load-minimizing greedy sends terminals 1 and 2 to the root directly;
  // at terminal 3 the root's uptick (4/3) exceeds the bottleneck of entering
  // the held component through terminal 2's detour (1), so it buys the n^3
  // and n^2 edges. Three terminals still fit the root cap offline, so the
  // exact capped optimum is 0 and the headline ratio is the online weight.
  for (int k = 3; k <= 6; ++k) {
    WeightedAdversaryOptions opt;
    opt.k = k;
    AdversaryTranscript t =
        run_weighted_adversary(builtin_algorithm_factory("ga"), opt);
    CAPTURE(k);
    const Int n = 2 * k + 1;
    CHECK(t.kind == "weighted");
    CHECK(t.realized_case == "a");
    CHECK(t.realized_r == 3);
    CHECK(t.online_weight == n * n * n + n * n);
    CHECK(t.online_weight >= n * n * n);  // the case-a guarantee at r = 3
    REQUIRE(t.opt3.has_value());
    CHECK(*t.opt3 == 0);                     // three direct edges fit the cap
    CHECK(t.offline_weight == n + n * n);    // companion detours below r
    CHECK(t.ratio == Rational(t.online_weight));
    CHECK(t.offline_weight >= *t.opt3);
  }
}

TEST_CASE("weighted adversary catches the expensive-edge strategy immediately") {
  WeightedAdversaryOptions opt;
  opt.k = 6;
  AdversaryTranscript t =
      run_weighted_adversary(builtin_algorithm_factory("always-expensive"), opt);
  CHECK(t.realized_case == "a");
  CHECK(t.realized_r == 1);
  CHECK(t.online_weight >= 13);  // n^1
  REQUIRE(t.opt3.has_value());
  CHECK(*t.opt3 == 0);          // empty sum below r = 1
  CHECK(t.offline_weight == 0);
  CHECK(t.ratio == Rational(t.online_weight));
}

TEST_CASE("weighted adversary case b on the direct strategy with frozen optima") {
  WeightedAdversaryOptions opt;
  opt.k = 6;
  AdversaryTranscript t =
      run_weighted_adversary(builtin_algorithm_factory("always-root"), opt);
  CHECK(t.realized_case == "b");
  CHECK(t.root_degree == 6);
  REQUIRE(t.opt3.has_value());
  CHECK(*t.opt3 == 30940);  // 13 + 169 + 2197 + 28561
  CHECK(t.offline_weight == 13 + 169 + 2197 + 28561 + 371293);
  CHECK(t.ratio == Rational(2));  // 6 / 3

  // The companion is a valid capped solution for the realized terminals.
  std::vector<int> degree(t.graph.vertex_count(), 0);
  UnionFind uf(t.graph.vertex_count());
  Int weight = 0;
  for (EdgeId e : t.offline_edges) {
    const Edge& ed = t.graph.edge(e);
    ++degree[ed.u];
    ++degree[ed.v];
    weight += ed.weight;
    uf.unite(ed.u, ed.v);
  }
  CHECK(weight == t.offline_weight);
  for (VertexId v = 0; v < t.graph.vertex_count(); ++v) CHECK(degree[v] <= 3);
  for (int i = 1; i <= t.realized_r; ++i) CHECK(uf.same(i, t.root));
}

TEST_CASE("weighted transcript optimum matches a fresh oracle call") {
  for (int k = 3; k <= 4; ++k) {
    WeightedAdversaryOptions opt;
    opt.k = k;
    AdversaryTranscript t =
        run_weighted_adversary(builtin_algorithm_factory("always-root"), opt);
    REQUIRE(t.opt3.has_value());
    std::vector<VertexId> terminals;
    for (int i = 1; i <= t.realized_r; ++i) terminals.push_back(i);
    WeightedGadget gad = build_weighted_gadget(k);
    WeightedSolution fresh =
        brute_force_weighted_opt(gad.graph, terminals, gad.root, 3);
    CAPTURE(k);
    CHECK(*t.opt3 == fresh.weight);
  }
}

TEST_CASE("group star rounds shrink and nest down to one member") {
  for (int n : {2, 5, 16}) {
    GroupStarAdversaryOptions opt;
    opt.n = n;
    AdversaryTranscript t =
        run_group_star_adversary(builtin_algorithm_factory("ga"), opt);
    CAPTURE(n);
    CHECK(t.kind == "group-star");
    CHECK(static_cast<int>(t.requests.size()) == n - 1);
    CHECK(t.root_degree == n - 1);
    CHECK(t.ratio == Rational(n - 1));
    CHECK(t.offline_edges.size() == 1);
    std::vector<VertexId> prev;
    for (const auto& req : t.requests) {
      CHECK(req.kind == "group");
      if (!prev.empty()) {
        CHECK(req.payload.size() < prev.size());
        for (VertexId v : req.payload)
          CHECK(std::find(prev.begin(), prev.end(), v) != prev.end());
      } else {
        CHECK(static_cast<int>(req.payload.size()) == n - 1);
      }
      prev = req.payload;
    }
    CHECK(prev.size() == 1);  // the last group pins the offline witness
    const Edge& witness_edge = t.graph.edge(t.offline_edges[0]);
    CHECK(((witness_edge.u == prev[0] && witness_edge.v == t.root) ||
           (witness_edge.v == prev[0] && witness_edge.u == t.root)));
  }
}

TEST_CASE("scripted algorithms replay and violations are caught") {
  // A script that never buys anything strands the first terminal.
  const std::string lazy = write_script("script_lazy.jsonl", {
      R"({"edges": []})", R"({"edges": []})", R"({"edges": []})"});
  TreeAdversaryOptions opt;
  opt.levels = 1;
  CHECK_THROWS_AS(
      run_tree_adversary(scripted_algorithm_factory(lazy), opt),
      ProtocolViolation);

  // A compliant script: replay what the greedy did on levels = 1.
  AdversaryTranscript ga =
      run_tree_adversary(builtin_algorithm_factory("ga"), opt);
  REQUIRE(ga.requests.size() == 1);
  std::ostringstream line;
  line << R"({"edges": [)";
  for (std::size_t i = 0; i < ga.requests[0].added.size(); ++i) {
    if (i) line << ",";
    line << ga.requests[0].added[i];
  }
  line << "]}";
  const std::string fine = write_script("script_fine.jsonl", {line.str()});
  AdversaryTranscript replay =
      run_tree_adversary(scripted_algorithm_factory(fine), opt);
  CHECK(replay.online_edges == ga.online_edges);
  CHECK(replay.heavy == ga.heavy);

  // Unknown edge ids and missing records are protocol violations.
  const std::string bogus = write_script("script_bogus.jsonl",
                                         {R"({"edges": [999]})"});
  CHECK_THROWS_AS(
      run_tree_adversary(scripted_algorithm_factory(bogus), opt),
      ProtocolViolation);
  const std::string empty = write_script("script_empty.jsonl", {});
  CHECK_THROWS_AS(
      run_tree_adversary(scripted_algorithm_factory(empty), opt),
      ProtocolViolation);

  CHECK_THROWS_AS(builtin_algorithm_factory("nonsense"), std::invalid_argument);
  std::remove("script_lazy.jsonl");
  std::remove("script_fine.jsonl");
  std::remove("script_bogus.jsonl");
  std::remove("script_empty.jsonl");
}

TEST_CASE("adversary transcripts serialize to jsonl") {
  TreeAdversaryOptions opt;
  opt.levels = 2;
  AdversaryTranscript t =
      run_tree_adversary(builtin_algorithm_factory("ga"), opt);
  std::ostringstream out;
  write_adversary_jsonl(t, out);
  const std::string text = out.str();
  // One meta record, one per request, one final record.
  const auto lines = std::count(text.begin(), text.end(), '\n');
  CHECK(lines == static_cast<long>(t.requests.size()) + 2);
  CHECK(text.find("\"type\":\"meta\"") != std::string::npos);
  CHECK(text.find("\"kind\":\"tree\"") != std::string::npos);
  CHECK(text.find("\"type\":\"request\"") != std::string::npos);
  CHECK(text.find("\"type\":\"final\"") != std::string::npos);
  CHECK(text.find("\"ratio\":") != std::string::npos);
}
