#pragma once

#include "dbsf/certify.hpp"
#include "dbsf/oracle.hpp"

namespace dbsf {

// One CSV row of an experiment: greedy run, exact optimum, and the outcome of
// every analysis check. Rational columns render exactly; ratio additionally
// gets a decimal approximation. "-" marks undefined values (e.g. ratio when
// the optimum is 0).
struct ExperimentRow {
  std::string instance;
  int n = 0;        // transformed vertex count
  int m = 0;        // transformed edge count
  int demands = 0;
  Rational h;       // greedy max load
  Rational opt;     // oracle max load
  std::optional<Rational> ratio;  // h/opt, absent when opt = 0
  Rational bound;   // (24 ceil(log2 n) + 37) * opt
  Rational cert_lb;
  std::optional<Rational> witness_r;
  std::optional<Rational> witness_delta;
  bool separation_ok = false;
  bool excess_ok = false;
  bool dual_ok = false;
  bool witness_ok = false;
  bool ratio_ok = false;
  long long wall_ms = 0;
};

std::string csv_header();
std::string csv_row(const ExperimentRow& row);

// Full pipeline on one instance: dummy transform, greedy run, exact optimum,
// and the certification sweep with deltas taken from the oracle's optima.
ExperimentRow run_experiment(const std::string& name, const Instance& inst,
                             std::optional<int> oracle_cap = std::nullopt);

}  // namespace dbsf
