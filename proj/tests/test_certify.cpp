#include <doctest.h>

#include <dbsf/certify.hpp>
#include <dbsf/generator.hpp>
#include <dbsf/oracle.hpp>

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

using namespace dbsf;

namespace {

// s(unbounded) - a(bound 1) - t(unbounded), one demand. After the dummy
// transform: vertices 0=s, 1=a, 2=t, 3/4 = demand dummies; the single step
// has tau = 2 and leaves a at degree 2 (final uptick 4, final load 2 = OPT).
GaTranscript path_run() {
  return run_ga(parse_instance_text(
      "dbsf 1\nn 3\nv 0 inf\nv 1 1\nv 2 inf\ne 0 1\ne 1 2\nd 0 2\n"));
}

const std::vector<DegreeBound>& small_palette() {
  static const std::vector<DegreeBound> palette = {
      DegreeBound::make_finite(Rational(1)),
      DegreeBound::make_finite(Rational(2)),
      DegreeBound::make_finite(Rational(3)),
      DegreeBound::make_unbounded(),
  };
  return palette;
}

}  // namespace

TEST_CASE("analysis snapshot on the three-vertex path") {
  GaTranscript t = path_run();
  REQUIRE(t.taus() == std::vector<Rational>{Rational(2)});

  AnalysisSnapshot high = analysis_snapshot(t, Rational(3), std::nullopt);
  CHECK(high.gamma == std::vector<VertexId>{1});  // final uptick 4 >= 3
  CHECK(high.demand_set.empty());                 // tau = 2 < 3
  CHECK(high.excess == 1);                        // 2 - ceil(3) + 2
  CHECK(high.gamma_bound_sum == Rational(1));

  AnalysisSnapshot mid = analysis_snapshot(t, Rational(2), std::nullopt);
  CHECK(mid.gamma == std::vector<VertexId>{1});
  CHECK(mid.demand_set == std::vector<int>{0});
  CHECK(mid.excess == 2);  // 2 - 2 + 2

  // Bound filter drops the only finite vertex.
  AnalysisSnapshot filtered = analysis_snapshot(t, Rational(2), Rational(2));
  CHECK(filtered.gamma.empty());
  CHECK(filtered.excess == 0);
  CHECK(filtered.gamma_bound_sum == Rational(0));

  // Above every uptick the cut is empty.
  CHECK(analysis_snapshot(t, Rational(9, 2), std::nullopt).gamma.empty());

  CHECK_THROWS_AS(analysis_snapshot(t, Rational(0), std::nullopt),
                  std::invalid_argument);
  CHECK_THROWS_AS(analysis_snapshot(t, Rational(1), Rational(-1)),
                  std::invalid_argument);
}

TEST_CASE("snapshot terms are nonnegative and sets shrink as r grows") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    Instance inst = generate_random(4 + static_cast<int>(seed % 4), 0.4,
                                    small_palette(),
                                    1 + static_cast<int>(seed % 3), seed * 7);
    GaTranscript t = run_ga(inst);
    std::vector<Rational> grid = load_breakpoints(t);
    CAPTURE(seed);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      AnalysisSnapshot snap = analysis_snapshot(t, grid[i], std::nullopt);
      CHECK(snap.excess >= 0);  // every summand is nonnegative inside gamma
      if (i + 1 < grid.size()) {
        AnalysisSnapshot next = analysis_snapshot(t, grid[i + 1], std::nullopt);
        CHECK(std::includes(snap.gamma.begin(), snap.gamma.end(),
                            next.gamma.begin(), next.gamma.end()));
        CHECK(std::includes(snap.demand_set.begin(), snap.demand_set.end(),
                            next.demand_set.begin(), next.demand_set.end()));
      }
    }
  }
}

TEST_CASE("separation check on the three-vertex path") {
  GaTranscript t = path_run();
  SeparationReport rep = check_separation(t, Rational(1));
  CHECK(rep.holds);
  CHECK(rep.demand_count == 1);
  CHECK(rep.separating_components == 2);
  REQUIRE(rep.separating.size() == 2);
  CHECK(rep.separating[0] == std::vector<VertexId>{0, 3});
  CHECK(rep.separating[1] == std::vector<VertexId>{2, 4});

  SeparationReport at_tau = check_separation(t, Rational(2));
  CHECK(at_tau.holds);  // 2 components >= |D(2)|+1 = 2
  CHECK(at_tau.demand_count == 1);
}

TEST_CASE("separation sweep stays within the served thresholds") {
  GaTranscript t = path_run();
  CHECK(separation_breakpoints(t) == std::vector<Rational>{Rational(2)});
  // Sweep on random runs: positive, ascending, capped by the largest tau.
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Instance inst = generate_random(5 + static_cast<int>(seed % 3), 0.4,
                                    small_palette(), 2, seed * 13);
    GaTranscript run = run_ga(inst);
    Rational tau_max(0);
    for (const Rational& tau : run.taus()) tau_max = std::max(tau_max, tau);
    std::vector<Rational> grid = separation_breakpoints(run);
    CAPTURE(seed);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(grid[i] > Rational(0));
      CHECK(grid[i] <= tau_max);
      if (i + 1 < grid.size()) CHECK(grid[i] < grid[i + 1]);
      CHECK(check_separation(run, grid[i]).holds);
    }
  }
}

TEST_CASE("load breakpoints cover taus and final upticks with midpoints") {
  GaTranscript t = path_run();
  CHECK(load_breakpoints(t) ==
        std::vector<Rational>{Rational(1), Rational(2), Rational(3), Rational(4)});
  CHECK(distinct_finite_bounds(t.instance.graph) ==
        std::vector<Rational>{Rational(1)});
}

TEST_CASE("excess bound on the three-vertex path and random sweeps") {
  GaTranscript t = path_run();
  ExcessReport rep = check_excess_bound(t, Rational(3), Rational(1));
  CHECK(rep.holds);
  CHECK(rep.excess == 1);
  CHECK(rep.demand_count == 0);
  CHECK(rep.gamma_size == 1);  // 1 <= 2*0 + 3*1

  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    Instance inst = generate_random(4 + static_cast<int>(seed % 5), 0.45,
                                    small_palette(),
                                    1 + static_cast<int>(seed % 3), seed * 19);
    GaTranscript run = run_ga(inst);
    CAPTURE(seed);
    for (const Rational& r : load_breakpoints(run))
      for (const Rational& b : distinct_finite_bounds(run.instance.graph)) {
        ExcessReport e = check_excess_bound(run, r, b);
        CHECK(e.holds);
        CHECK(e.excess <= 2 * e.demand_count + 3 * e.gamma_size);
      }
  }
}

TEST_CASE("dual certificate construction on the three-vertex path") {
  GaTranscript t = path_run();
  DualCertificate cert = build_dual_certificate(t, Rational(1), Rational(1));
  CHECK(cert.n == 5);
  CHECK(cert.delta == Rational(1));
  CHECK(cert.r == Rational(1));
  REQUIRE(cert.z.size() == 1);
  CHECK(cert.z[0].first == 1);
  CHECK(cert.z[0].second == Rational(1));
  REQUIRE(cert.y.size() == 2);
  CHECK(cert.y[0].first == std::vector<VertexId>{0, 3});
  CHECK(cert.y[0].second == Rational(1));
  CHECK(cert.y[1].first == std::vector<VertexId>{2, 4});
  CHECK(cert.y[1].second == Rational(1));
  CHECK(cert.objective == Rational(2));  // equals OPT: tight weak duality

  VerifyReport vr = verify_dual_certificate(t.instance, cert);
  CHECK(vr.ok);
  CHECK(vr.failure.empty());
  CHECK(vr.objective == Rational(2));

  // The cut is empty above every uptick or under a too-strict filter.
  CHECK_THROWS_AS(build_dual_certificate(t, Rational(5), Rational(1)), EmptyCut);
  CHECK_THROWS_AS(build_dual_certificate(t, Rational(1), Rational(2)), EmptyCut);
  CHECK_THROWS_AS(build_dual_certificate(t, Rational(1), Rational(0)),
                  std::invalid_argument);
}

TEST_CASE("verifier rejects tampered certificates") {
  GaTranscript t = path_run();
  const DualCertificate good = build_dual_certificate(t, Rational(1), Rational(1));
  REQUIRE(verify_dual_certificate(t.instance, good).ok);

  auto expect_fail = [&](DualCertificate cert, const std::string& needle) {
    VerifyReport vr = verify_dual_certificate(t.instance, cert);
    CHECK_FALSE(vr.ok);
    CAPTURE(vr.failure);
    CHECK(vr.failure.find(needle) != std::string::npos);
  };

  {
    DualCertificate c = good;  // doubled y breaks an edge constraint
    c.y[0].second = Rational(2);
    c.objective = Rational(3);
    expect_fail(c, "edge constraint");
  }
  {
    DualCertificate c = good;  // all-zero dual: normalization must fail
    c.z.clear();
    c.y.clear();
    c.objective = Rational(0);
    expect_fail(c, "must equal exactly 1");
  }
  {
    DualCertificate c = good;  // halved z mass
    c.z[0].second = Rational(1, 2);
    expect_fail(c, "must equal exactly 1");
  }
  {
    DualCertificate c = good;  // objective misstated
    c.objective = Rational(5);
    expect_fail(c, "objective");
  }
  {
    DualCertificate c = good;  // positive z on an unbounded dummy
    c.z.push_back({3, Rational(1, 3)});
    expect_fail(c, "unbounded");
  }
  {
    DualCertificate c = good;  // z must stay ascending
    c.z.push_back({1, Rational(1)});
    expect_fail(c, "ascending");
  }
  {
    DualCertificate c = good;  // negative y
    c.y[0].second = Rational(-1);
    expect_fail(c, "negative y");
  }
  {
    DualCertificate c = good;  // unsorted y members
    c.y[0].first = {3, 0};
    expect_fail(c, "sorted");
  }
  {
    DualCertificate c = good;  // duplicated y set
    c.y.push_back(c.y[0]);
    expect_fail(c, "duplicate y set");
  }
  {
    DualCertificate c = good;  // a set with both endpoints separates nothing
    c.y[0].first = {0, 2, 3, 4};
    expect_fail(c, "separates no demand");
  }
  {
    DualCertificate c = good;  // wrong graph size
    c.n = 7;
    expect_fail(c, "vertex count");
  }
  {
    DualCertificate c = good;  // z support must respect the delta filter
    c.delta = Rational(2);
    expect_fail(c, "delta-filtered");
  }
  {
    DualCertificate c = good;
    c.r = Rational(0);
    expect_fail(c, "threshold");
  }
}

TEST_CASE("certificate text round-trip is bit-exact") {
  GaTranscript t = path_run();
  DualCertificate cert = build_dual_certificate(t, Rational(1), Rational(1));
  const std::string text = format_certificate(cert);
  CHECK(text ==
        "dbsf-cert 1\n"
        "n 5\n"
        "delta 1/1\n"
        "r 1/1\n"
        "objective 2/1\n"
        "z 1 1/1\n"
        "y 0 3 1/1\n"
        "y 2 4 1/1\n");
  DualCertificate back = parse_certificate_text(text);
  CHECK(format_certificate(back) == text);
  CHECK(back.n == cert.n);
  CHECK(back.delta == cert.delta);
  CHECK(back.r == cert.r);
  CHECK(back.objective == cert.objective);
  CHECK(back.z == cert.z);
  CHECK(back.y == cert.y);
  CHECK(verify_dual_certificate(t.instance, back).ok);
}

TEST_CASE("certificate parser rejects malformed input") {
  CHECK_THROWS_AS(parse_certificate_text(""), std::runtime_error);
  CHECK_THROWS_AS(parse_certificate_text("dbsf-cert 2\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_certificate_text("dbsf-cert 1\nn 5\n"),
                  std::runtime_error);  // missing delta/r/objective
  CHECK_THROWS_AS(
      parse_certificate_text("dbsf-cert 1\nn 5\ndelta 1/1\nr 1/1\n"
                             "objective 2/1\nz x 1/1\n"),
      std::runtime_error);
  CHECK_THROWS_AS(
      parse_certificate_text("dbsf-cert 1\nn 5\ndelta 1/1\nr 1/1\n"
                             "objective 2/1\nflux 3\n"),
      std::runtime_error);
}

TEST_CASE("certified lower bound on the three-vertex path") {
  GaTranscript t = path_run();
  CertifiedBound best = certified_lower_bound(t, {Rational(1)}, true);
  CHECK(best.bound == Rational(2));  // (|D(r)|+1)/b(Gamma) with |D|=1, b=1
  CHECK(best.certified);
  REQUIRE(best.witness_r.has_value());
  CHECK(*best.witness_r == Rational(1));  // earliest sweep point attaining 2
  CHECK(best.witness_delta == Rational(1));
  REQUIRE(best.certificate.has_value());
  CHECK(verify_dual_certificate(t.instance, *best.certificate).ok);
  CHECK(best.certificate->objective >= best.bound);

  // Same bound without the optimum pedigree: not certified.
  CertifiedBound loose = certified_lower_bound(t, {Rational(1)}, false);
  CHECK(loose.bound == Rational(2));
  CHECK_FALSE(loose.certified);

  // No positive tau: nothing to bound.
  GaTranscript flat = run_ga(parse_instance_text(
      "dbsf 1\nn 2\nv 0 inf\nv 1 inf\ne 0 1\nd 0 1\n"));
  CertifiedBound none = certified_lower_bound(flat, {Rational(1)}, true);
  CHECK(none.bound == Rational(0));
  CHECK_FALSE(none.certificate.has_value());
  CHECK_FALSE(none.witness_r.has_value());
}

TEST_CASE("certified bound never exceeds the optimum on random instances") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    Instance inst = generate_random(4 + static_cast<int>(seed % 4), 0.35,
                                    small_palette(),
                                    1 + static_cast<int>(seed % 2), seed * 23);
    Instance transformed = attach_dummy_terminals(inst);
    if (transformed.graph.edge_count() > 22) continue;
    GaTranscript t = run_ga(inst);
    OfflineSolution opt = brute_force_opt(transformed);
    CertifiedBound best =
        certified_lower_bound(t, opt.optimal_finite_deltas, true);
    CAPTURE(seed);
    CHECK(best.bound <= opt.value);
    if (best.certificate.has_value()) {
      CHECK(verify_dual_certificate(t.instance, *best.certificate).ok);
      CHECK(best.certificate->objective <= opt.value);
    }
  }
}

TEST_CASE("edge crossing mass is the unit exactly on separating components") {
  GaTranscript t = path_run();
  DualCertificate cert = build_dual_certificate(t, Rational(1), Rational(1));
  // Gamma = {1}; its unit is 1/b(Gamma) = 1. Every edge with exactly one
  // endpoint in Gamma crosses exactly one separating component here.
  const Graph& g = t.instance.graph;
  std::set<VertexId> gamma = {1};
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    const bool u_in = gamma.count(ed.u) > 0;
    const bool v_in = gamma.count(ed.v) > 0;
    if (u_in == v_in) continue;
    Rational crossing(0);
    for (const auto& [members, val] : cert.y) {
      const bool cu = std::binary_search(members.begin(), members.end(), ed.u);
      const bool cv = std::binary_search(members.begin(), members.end(), ed.v);
      if (cu != cv) crossing += val;
    }
    CHECK(crossing == Rational(1));
  }
}

TEST_CASE("witness interval on the three-vertex path") {
  GaTranscript t = path_run();
  WitnessInterval w = find_witness_interval(t, Rational(1));
  CHECK(w.holds);
  CHECK(w.r == Rational(1));
  CHECK(w.q == 0);  // floor(log2(1 * 1))
  CHECK(w.interval_lo == Rational(1));
  CHECK(w.interval_hi == Rational(2));  // [1/delta, h) with h = 2
  CHECK(w.excess == 3);                 // 2 - ceil(1) + 2
  // rhs = (2-1)/(4*ceil(log2 5)+6) * 1 - 1 = 1/18 - 1.
  CHECK(w.rhs == Rational(1, 18) - Rational(1));
  CHECK(Rational(w.excess) >= w.rhs);

  // Bounds below every filtered vertex leave nothing to witness.
  CHECK_THROWS_AS(find_witness_interval(t, Rational(2)), DegenerateRange);
  CHECK_THROWS_AS(find_witness_interval(t, Rational(0)), std::invalid_argument);
}

TEST_CASE("witness interval holds across random instances and deltas") {
  int verified = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Instance inst = generate_random(4 + static_cast<int>(seed % 5), 0.45,
                                    small_palette(),
                                    1 + static_cast<int>(seed % 3), seed * 29);
    GaTranscript t = run_ga(inst);
    for (const Rational& delta : distinct_finite_bounds(t.instance.graph)) {
      try {
        WitnessInterval w = find_witness_interval(t, delta);
        CAPTURE(seed);
        CAPTURE(format_rational(delta));
        CHECK(w.holds);
        CHECK(w.interval_lo >= Rational(1) / delta);
        CHECK(w.interval_lo <= w.r);
        CHECK(w.r < w.interval_hi);
        ++verified;
      } catch (const DegenerateRange&) {
        // max filtered load <= 1/delta; legitimately nothing to certify
      }
    }
  }
  CHECK(verified >= 10);
}

TEST_CASE("ratio bound multiplier and outcome") {
  GaTranscript t = path_run();  // transformed n = 5
  RatioReport rep = check_ratio_bound(t, Rational(2));
  CHECK(rep.holds);
  CHECK(rep.h == Rational(2));
  CHECK(rep.multiplier == Rational(24 * 3 + 37));  // ceil(log2 5) = 3 -> 109
  CHECK(rep.bound == Rational(109 * 2));
  CHECK(rep.ratio == Rational(1));

  // Transformed vertex count 16 pins the multiplier at 24*4+37 = 133.
  std::ostringstream txt;
  txt << "dbsf 1\nn 14\n";
  for (int v = 0; v < 14; ++v) txt << "v " << v << " inf\n";
  for (int v = 0; v + 1 < 14; ++v) txt << "e " << v << " " << v + 1 << "\n";
  txt << "d 0 13\n";
  GaTranscript wide = run_ga(parse_instance_text(txt.str()));
  REQUIRE(wide.instance.graph.vertex_count() == 16);
  RatioReport at16 = check_ratio_bound(wide, Rational(1));
  CHECK(at16.multiplier == Rational(133));
  CHECK(at16.holds);  // h = 0 on an all-unbounded instance

  // Zero optimum: the ratio is undefined but the bound check still runs.
  RatioReport zero = check_ratio_bound(wide, Rational(0));
  CHECK(zero.holds);            // h = 0 <= 0
  CHECK_FALSE(zero.ratio.has_value());

  RatioReport broken = check_ratio_bound(t, Rational(1, 1000));
  CHECK_FALSE(broken.holds);    // 2 > 109/1000
}

TEST_CASE("full certification drive on the three-vertex path") {
  GaTranscript t = path_run();
  CertifySummary sum = certify_transcript(t, {Rational(1)}, true, Rational(2));
  CHECK(sum.all_hold);
  CHECK(sum.separation_ok);
  CHECK(sum.excess_ok);
  CHECK(sum.certificates_ok);
  CHECK(sum.witness_ok);
  CHECK(sum.ratio_ok);
  CHECK(sum.separation_checks == 1);   // single distinct tau
  CHECK(sum.excess_checks == 4);       // 4 breakpoints x 1 bound
  CHECK(sum.certificate_checks == 2);  // r in {1, 2} build nonempty cuts
  CHECK(sum.witness_checks == 1);
  CHECK(sum.best.bound == Rational(2));
  CHECK(sum.violations.empty());

  // An understated optimum trips weak duality and the bound comparison.
  CertifySummary bad = certify_transcript(t, {Rational(1)}, true, Rational(1));
  CHECK_FALSE(bad.all_hold);
  CHECK_FALSE(bad.certificates_ok);
  CHECK(bad.ratio_ok);  // 2 <= 109 still
  CHECK(bad.violations.size() == 3);
}

TEST_CASE("certification holds end to end on random instances") {
  int covered = 0;
  for (std::uint64_t seed = 1; seed <= 18 && covered < 10; ++seed) {
    Instance inst = generate_random(4 + static_cast<int>(seed % 4), 0.4,
                                    small_palette(),
                                    1 + static_cast<int>(seed % 2), seed * 37);
    Instance transformed = attach_dummy_terminals(inst);
    if (transformed.graph.edge_count() > 20) continue;
    GaTranscript t = run_ga(inst);
    OfflineSolution opt = brute_force_opt(transformed);
    CertifySummary sum =
        certify_transcript(t, opt.optimal_finite_deltas, true, opt.value);
    CAPTURE(seed);
    for (const std::string& v : sum.violations) CAPTURE(v);
    CHECK(sum.all_hold);
    CHECK(sum.best.bound <= opt.value);
    ++covered;
  }
  CHECK(covered == 10);
}
