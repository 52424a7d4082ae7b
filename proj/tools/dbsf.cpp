#include "dbsf/adversary.hpp"
#include "dbsf/certify.hpp"
#include "dbsf/generator.hpp"
#include "dbsf/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>

namespace {

using namespace dbsf;

std::vector<int> parse_order(const std::string& spec, int count) {
  std::vector<int> order(count);
  for (int i = 0; i < count; ++i) order[i] = i;
  if (spec == "given") return order;
  if (spec.rfind("shuffle:", 0) == 0) {
    std::uint64_t seed = std::stoull(spec.substr(8));
    std::mt19937_64 rng(seed);
    for (int i = count - 1; i > 0; --i) {
      int j = static_cast<int>(bounded_random(rng, i + 1));
      std::swap(order[i], order[j]);
    }
    return order;
  }
  throw CLI::ValidationError("--order", "expected 'given' or 'shuffle:SEED'");
}

AlgorithmFactory resolve_algorithm(const std::string& spec) {
  for (const char* name : {"ga", "greedy", "always-expensive", "always-root"}) {
    if (spec == name) return builtin_algorithm_factory(spec);
  }
  return scripted_algorithm_factory(spec);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  return out;
}

int cmd_run(const std::string& instance_path, const std::string& order_spec,
            const std::string& out_csv, const std::string& transcript_path,
            std::optional<int> cap) {
  Instance inst = load_instance_file(instance_path);
  Instance transformed = inst;
  transformed = attach_dummy_terminals(transformed);
  std::vector<int> order = parse_order(order_spec, static_cast<int>(transformed.demands.size()));
  GaTranscript t = run_ga(transformed, &order);

  std::cout << "h " << format_rational(t.max_load()) << "\n";
  std::cout << "n " << transformed.graph.vertex_count() << " m "
            << transformed.graph.edge_count() << " demands " << transformed.demands.size()
            << "\n";
  for (const GaStep& s : t.steps) {
    std::cout << "step " << s.demand_index << " tau " << format_rational(s.tau)
              << (s.already_connected ? " already-connected" : "") << " edges";
    for (EdgeId e : s.edges) std::cout << " " << e;
    std::cout << "\n";
  }
  if (!transcript_path.empty()) {
    auto out = open_out(transcript_path);
    write_transcript_jsonl(t, out);
  }
  if (!out_csv.empty()) {
    // The CSV row includes oracle and certification columns, so --out runs
    // the full pipeline (subject to the oracle edge cap).
    ExperimentRow row = run_experiment(instance_path, inst, cap);
    auto out = open_out(out_csv);
    out << csv_header() << "\n" << csv_row(row) << "\n";
  }
  return 0;
}

int cmd_oracle(const std::string& instance_path, std::optional<int> cap) {
  Instance inst = load_instance_file(instance_path);
  inst = attach_dummy_terminals(inst);
  OfflineSolution sol = brute_force_opt(inst, cap);
  std::cout << "opt " << format_rational(sol.value) << "\n";
  std::cout << "edges";
  for (EdgeId e : sol.edges) std::cout << " " << e;
  std::cout << "\n";
  std::cout << "delta " << (sol.delta ? format_rational(*sol.delta) : std::string("inf"))
            << "\n";
  std::cout << "optimal-deltas";
  for (const Rational& d : sol.optimal_finite_deltas) std::cout << " " << format_rational(d);
  if (sol.optimal_delta_unbounded) std::cout << " inf";
  std::cout << "\n";
  return 0;
}

int cmd_certify(const std::string& instance_path, const std::string& transcript_path,
                const std::string& delta_spec, const std::string& out_path,
                std::optional<int> cap) {
  Instance inst = load_instance_file(instance_path);
  inst = attach_dummy_terminals(inst);
  std::ifstream tin(transcript_path);
  if (!tin) throw std::runtime_error("cannot open transcript " + transcript_path);
  GaTranscript t = read_transcript_jsonl(inst, tin);

  std::vector<Rational> deltas;
  bool from_optimum = false;
  std::optional<Rational> opt;
  if (delta_spec == "auto") {
    OfflineSolution sol = brute_force_opt(inst, cap);
    deltas = sol.optimal_finite_deltas;
    from_optimum = true;
    opt = sol.value;
  } else {
    deltas.push_back(parse_rational(delta_spec));
  }

  CertifySummary sum = certify_transcript(t, deltas, from_optimum, opt);
  std::cout << "separation " << (sum.separation_ok ? "ok" : "FAIL") << " ("
            << sum.separation_checks << " thresholds)\n";
  std::cout << "excess " << (sum.excess_ok ? "ok" : "FAIL") << " (" << sum.excess_checks
            << " pairs)\n";
  std::cout << "certificates " << (sum.certificates_ok ? "ok" : "FAIL") << " ("
            << sum.certificate_checks << " built)\n";
  std::cout << "witness " << (sum.witness_ok ? "ok" : "FAIL") << " (" << sum.witness_checks
            << " deltas)\n";
  if (opt) {
    std::cout << "ratio " << (sum.ratio_ok ? "ok" : "FAIL") << "\n";
  }
  std::cout << "lower-bound " << format_rational(sum.best.bound)
            << (sum.best.certified ? " certified" : " informational") << "\n";
  if (sum.best.witness_r) {
    std::cout << "at r " << format_rational(*sum.best.witness_r) << " delta "
              << format_rational(*sum.best.witness_delta) << "\n";
  }
  for (const std::string& v : sum.violations) std::cout << "violation: " << v << "\n";

  if (!out_path.empty()) {
    auto out = open_out(out_path);
    if (sum.best.certificate) {
      out << format_certificate(*sum.best.certificate);
    } else {
      out << "# no certificate: no threshold produced a nonempty cut\n";
    }
  }
  return sum.all_hold ? 0 : 1;
}

void print_adversary(const AdversaryTranscript& t, const std::string& out_path) {
  std::cout << "requests " << t.requests.size() << "\n";
  if (t.kind == "tree") {
    std::cout << "heavy z" << *t.heavy << " deg-sigma " << t.heavy_deg_sigma
              << " offline-max " << t.offline_max_deg << "\n";
  } else if (t.kind == "weighted") {
    std::cout << "case " << t.realized_case << " r " << t.realized_r << "\n";
    std::cout << "online-weight " << t.online_weight << " root-degree " << t.root_degree
              << "\n";
    std::cout << "offline-weight " << t.offline_weight;
    if (t.opt3) std::cout << " opt3 " << *t.opt3;
    std::cout << "\n";
  } else {
    std::cout << "center-degree " << t.root_degree << " offline-max " << t.offline_max_deg
              << "\n";
  }
  std::cout << "ratio " << format_rational(t.ratio) << "\n";
  if (!out_path.empty()) {
    auto out = open_out(out_path);
    write_adversary_jsonl(t, out);
  }
}

int cmd_gen(int n, double density, const std::string& bounds_csv, int demands,
            std::uint64_t seed, const std::string& out_path) {
  Instance inst = generate_random(n, density, parse_bound_palette(bounds_csv), demands, seed);
  std::string text = format_instance(inst);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    auto out = open_out(out_path);
    out << text;
  }
  return 0;
}

int cmd_bench(int count, int max_n, std::uint64_t seed, const std::string& out_path,
              double density, const std::string& bounds_csv, int max_demands,
              std::optional<int> cap) {
  std::vector<DegreeBound> palette = parse_bound_palette(bounds_csv);
  std::mt19937_64 rng(seed);
  std::ostringstream csv;
  csv << csv_header() << "\n";
  bool all_ok = true;
  Rational max_ratio(0);
  for (int i = 0; i < count; ++i) {
    int n = 4 + static_cast<int>(bounded_random(rng, std::max(1, max_n - 3)));
    int demands = 1 + static_cast<int>(bounded_random(rng, max_demands));
    std::uint64_t inst_seed = rng();
    std::string name = "gen-" + std::to_string(inst_seed) + "-" + std::to_string(i);
    // A dense draw can exceed the oracle's edge cap; thin deterministically
    // until the exact optimum is computable.
    double d = density;
    ExperimentRow row;
    for (int attempt = 0;; ++attempt, d /= 2) {
      Instance inst = generate_random(n, d, palette, demands, inst_seed);
      try {
        row = run_experiment(name, inst, cap);
        break;
      } catch (const CapExceeded&) {
        if (attempt >= 8) throw;
      }
    }
    csv << csv_row(row) << "\n";
    all_ok = all_ok && row.separation_ok && row.excess_ok && row.dual_ok && row.witness_ok &&
             row.ratio_ok;
    if (row.ratio) max_ratio = std::max(max_ratio, *row.ratio);
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    auto out = open_out(out_path);
    out << csv.str();
  }
  std::cout << "instances " << count << " max-ratio " << format_rational(max_ratio) << " "
            << (all_ok ? "all-ok" : "VIOLATIONS") << "\n";
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online degree-bounded Steiner forest toolkit"};
  app.require_subcommand(1);

  std::string instance_path, transcript_path, out_path, order_spec = "given";
  std::string delta_spec = "auto", algo_spec = "ga", bounds_csv = "1,2,3,inf";
  int levels = 2, k = 3, star_n = 5, gen_n = 8, demands = 3, count = 20, max_n = 12;
  int max_demands = 5, trials = 64;
  double density = 0.5;
  std::uint64_t seed = 1;
  bool randomized = false;
  std::optional<int> cap;

  auto* run = app.add_subcommand("run", "Run the online greedy on an instance");
  run->add_option("--instance", instance_path)->required();
  run->add_option("--order", order_spec, "given | shuffle:SEED");
  run->add_option("--out", out_path, "CSV report (runs oracle + certification)");
  run->add_option("--transcript", transcript_path, "JSONL transcript output");
  run->add_option("--cap", cap, "oracle edge cap");

  auto* oracle = app.add_subcommand("oracle", "Exact offline optimum");
  oracle->add_option("--instance", instance_path)->required();
  oracle->add_option("--cap", cap, "edge cap (default 26 or DBSF_ORACLE_CAP)");

  auto* certify = app.add_subcommand("certify", "Check a run and build a dual certificate");
  certify->add_option("--instance", instance_path)->required();
  certify->add_option("--transcript", transcript_path)->required();
  certify->add_option("--delta", delta_spec, "auto | rational value");
  certify->add_option("--out", out_path, "certificate output file");
  certify->add_option("--cap", cap, "oracle edge cap (for --delta auto)");

  auto* adversary = app.add_subcommand("adversary", "Run a lower-bound adversary");
  adversary->require_subcommand(1);
  auto* tree = adversary->add_subcommand("tree", "Pair-request adversary on bound-1 nodes");
  tree->add_option("--levels", levels)->check(CLI::Range(1, 6));
  tree->add_option("--algo", algo_spec, "ga|greedy|always-expensive|always-root|FILE");
  tree->add_option("--seed", seed);
  tree->add_option("--trials", trials);
  tree->add_flag("--randomized", randomized, "estimate edge choices by seeded replays");
  tree->add_option("--out", out_path, "JSONL transcript output");
  auto* weighted = adversary->add_subcommand("weighted", "Edge-weighted gadget adversary");
  weighted->add_option("--k", k)->check(CLI::Range(2, 16));
  weighted->add_option("--algo", algo_spec);
  weighted->add_option("--seed", seed);
  weighted->add_option("--trials", trials);
  weighted->add_flag("--randomized", randomized);
  weighted->add_option("--cap", cap, "weighted oracle edge cap");
  weighted->add_option("--out", out_path);
  auto* star = adversary->add_subcommand("group-star", "Nested-group star adversary");
  star->add_option("--n", star_n)->check(CLI::Range(2, 4096));
  star->add_option("--algo", algo_spec);
  star->add_option("--out", out_path);

  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("--n", gen_n)->required();
  gen->add_option("--density", density);
  gen->add_option("--bounds", bounds_csv, "comma list, e.g. 1,2,3,inf");
  gen->add_option("--demands", demands);
  gen->add_option("--seed", seed);
  gen->add_option("--out", out_path);

  auto* bench = app.add_subcommand("bench", "Generate, run, and certify many instances");
  bench->add_option("--count", count);
  bench->add_option("--n", max_n, "max pre-transform vertex count");
  bench->add_option("--seed", seed);
  bench->add_option("--out", out_path, "CSV report path");
  bench->add_option("--density", density);
  bench->add_option("--bounds", bounds_csv);
  bench->add_option("--max-demands", max_demands);
  bench->add_option("--cap", cap, "oracle edge cap");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(instance_path, order_spec, out_path, transcript_path, cap);
    }
    if (oracle->parsed()) return cmd_oracle(instance_path, cap);
    if (certify->parsed()) {
      return cmd_certify(instance_path, transcript_path, delta_spec, out_path, cap);
    }
    if (adversary->parsed()) {
      AlgorithmFactory factory = resolve_algorithm(algo_spec);
      AdversaryTranscript t;
      if (tree->parsed()) {
        t = run_tree_adversary(factory, {levels, randomized, trials, seed});
      } else if (weighted->parsed()) {
        t = run_weighted_adversary(factory, {k, randomized, trials, seed, cap});
      } else {
        t = run_group_star_adversary(factory, {star_n});
      }
      print_adversary(t, out_path);
      return 0;
    }
    if (gen->parsed()) {
      return cmd_gen(gen_n, density, bounds_csv, demands, seed, out_path);
    }
    if (bench->parsed()) {
      return cmd_bench(count, max_n, seed, out_path, density, bounds_csv, max_demands, cap);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
