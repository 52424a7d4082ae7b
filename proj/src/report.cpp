#include "dbsf/report.hpp"

#include <chrono>
#include <iomanip>
#include <sstream>

namespace dbsf {

namespace {

std::string cell(const std::optional<Rational>& v, bool slashed = false) {
  if (!v) return "-";
  return slashed ? format_rational_slashed(*v) : format_rational(*v);
}

std::string flag(bool ok) { return ok ? "1" : "0"; }

}  // namespace

std::string csv_header() {
  return "instance,n,m,demands,h,opt,ratio,ratio_dec,bound,cert_lb,witness_r,"
         "witness_delta,separation_ok,excess_ok,dual_ok,witness_ok,ratio_ok,wall_ms";
}

std::string csv_row(const ExperimentRow& row) {
  std::ostringstream out;
  out << row.instance << "," << row.n << "," << row.m << "," << row.demands << ","
      << format_rational(row.h) << "," << format_rational(row.opt) << ","
      << cell(row.ratio, true) << ",";
  if (row.ratio) {
    out << std::fixed << std::setprecision(6) << to_double(*row.ratio);
  } else {
    out << "-";
  }
  out << "," << format_rational(row.bound) << "," << format_rational(row.cert_lb) << ","
      << cell(row.witness_r) << "," << cell(row.witness_delta) << ","
      << flag(row.separation_ok) << "," << flag(row.excess_ok) << "," << flag(row.dual_ok)
      << "," << flag(row.witness_ok) << "," << flag(row.ratio_ok) << "," << row.wall_ms;
  return out.str();
}

ExperimentRow run_experiment(const std::string& name, const Instance& inst,
                             std::optional<int> oracle_cap) {
  auto t0 = std::chrono::steady_clock::now();

  Instance transformed = inst;
  transformed = attach_dummy_terminals(transformed);
  GaTranscript t = run_ga(transformed);
  OfflineSolution opt = brute_force_opt(transformed, oracle_cap);
  CertifySummary sum = certify_transcript(t, opt.optimal_finite_deltas,
                                          /*deltas_from_optimum=*/true, opt.value);

  ExperimentRow row;
  row.instance = name;
  row.n = transformed.graph.vertex_count();
  row.m = transformed.graph.edge_count();
  row.demands = static_cast<int>(transformed.demands.size());
  row.h = t.max_load();
  row.opt = opt.value;
  if (opt.value > Rational(0)) row.ratio = row.h / opt.value;
  RatioReport rr = check_ratio_bound(t, opt.value);
  row.bound = rr.bound;
  row.ratio_ok = rr.holds && sum.ratio_ok;
  row.cert_lb = sum.best.bound;
  row.witness_r = sum.best.witness_r;
  row.witness_delta = sum.best.witness_delta;
  row.separation_ok = sum.separation_ok;
  row.excess_ok = sum.excess_ok;
  row.dual_ok = sum.certificates_ok;
  row.witness_ok = sum.witness_ok;

  auto t1 = std::chrono::steady_clock::now();
  row.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  return row;
}

}  // namespace dbsf
