#pragma once

#include "dbsf/greedy.hpp"

#include <optional>

namespace dbsf {

// Threshold-indexed view of a finished run. gamma holds the vertices whose
// final uptick load reaches r (restricted to finite bounds >= bound_filter
// when given); demand_set holds the arrival indices with tau >= r; excess sums
// deg(v) - ceil(r * b_v) + 2 over gamma.
struct AnalysisSnapshot {
  Rational r;
  std::optional<Rational> bound_filter;
  std::vector<VertexId> gamma;
  std::vector<int> demand_set;
  Int excess = 0;
  Rational gamma_bound_sum;
};

AnalysisSnapshot analysis_snapshot(const GaTranscript& t, const Rational& r,
                                   std::optional<Rational> bound_filter);

// Removing the vertices with uptick >= r must shatter the graph into at least
// |D(r)|+1 components that each separate some demand pair (exactly one
// endpoint inside). Guaranteed whenever D(r) is nonempty, hence the sweep
// below stays at or below the largest tau.
struct SeparationReport {
  Rational r;
  int separating_components = 0;
  int demand_count = 0;
  bool holds = false;
  std::vector<std::vector<VertexId>> separating;  // the qualifying components
};

SeparationReport check_separation(const GaTranscript& t, const Rational& r);

// excess(r, b) <= 2|D(r)| + 3|Gamma_b(r)| for every r, b > 0.
struct ExcessReport {
  Rational r;
  Rational b;
  Int excess = 0;
  int demand_count = 0;
  int gamma_size = 0;
  bool holds = false;
};

ExcessReport check_excess_bound(const GaTranscript& t, const Rational& r, const Rational& b);

struct EmptyCut : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Feasible point of the cut-covering dual, restricted to vertices with bound
// >= delta: z spreads 1/b(Gamma_delta(r)) over Gamma_delta(r); y puts the same
// value on every separating component left after removing Gamma_delta(r).
struct DualCertificate {
  int n = 0;
  Rational delta;
  Rational r;
  Rational objective;
  std::vector<std::pair<VertexId, Rational>> z;                 // ascending vertex
  std::vector<std::pair<std::vector<VertexId>, Rational>> y;    // sets sorted, by first member
};

DualCertificate build_dual_certificate(const GaTranscript& t, const Rational& r,
                                       const Rational& delta);

struct VerifyReport {
  bool ok = false;
  std::string failure;  // first violated condition, empty when ok
  Rational objective;   // sum of y values
};

// Checks dual feasibility from scratch: value signs, z support inside the
// delta-filtered program, sum z(v) b_v exactly 1, every y-set separating,
// every edge's crossing y-mass <= z(u) + z(v), and the stated objective.
VerifyReport verify_dual_certificate(const Instance& transformed, const DualCertificate& cert);

std::string format_certificate(const DualCertificate& cert);
DualCertificate parse_certificate(std::istream& in);
DualCertificate parse_certificate_text(const std::string& text);

struct CertifiedBound {
  Rational bound;  // max (|D(r)|+1)/b(Gamma_delta(r)) over verified certificates
  std::optional<Rational> witness_r;
  std::optional<Rational> witness_delta;
  std::optional<DualCertificate> certificate;
  bool certified = false;  // deltas came from an offline optimum
};

CertifiedBound certified_lower_bound(const GaTranscript& t,
                                     const std::vector<Rational>& delta_candidates,
                                     bool deltas_from_optimum);

// Existence of a threshold with large excess: picks the longest constant-q
// interval of b(Gamma_delta(r)) over [1/delta, h_delta) and returns a rational
// r inside it satisfying
//   excess(r, delta) >= (h_delta - 1/delta) / (4 ceil(log2 n) + 6)
//                       * b(Gamma_delta(r)) - |Gamma_delta(r)|.
// Throws DegenerateRange when h_delta <= 1/delta.
struct WitnessInterval {
  Rational r;
  int q = 0;
  Rational interval_lo;
  Rational interval_hi;
  Int excess = 0;
  Rational rhs;
  bool holds = false;
};

WitnessInterval find_witness_interval(const GaTranscript& t, const Rational& delta);

// h <= (24 ceil(log2 n) + 37) * opt, n the transformed vertex count.
struct RatioReport {
  Rational h;
  Rational multiplier;
  Rational bound;
  bool holds = false;
  std::optional<Rational> ratio;  // h/opt when opt > 0
};

RatioReport check_ratio_bound(const GaTranscript& t, const Rational& opt);

// Sweep grids. Values are positive; midpoints between consecutive distinct
// values are included. separation_breakpoints stays within (0, max tau];
// load_breakpoints also covers the final uptick values.
std::vector<Rational> separation_breakpoints(const GaTranscript& t);
std::vector<Rational> load_breakpoints(const GaTranscript& t);
std::vector<Rational> distinct_finite_bounds(const Graph& g);

// Runs every check over its sweep. opt enables the ratio check and, when the
// deltas come from an optimum, weak duality (objective <= opt) per certificate.
struct CertifySummary {
  bool all_hold = true;
  bool separation_ok = true;
  bool excess_ok = true;
  bool certificates_ok = true;
  bool witness_ok = true;
  bool ratio_ok = true;  // stays true when no optimum was supplied
  int separation_checks = 0;
  int excess_checks = 0;
  int certificate_checks = 0;
  int witness_checks = 0;
  CertifiedBound best;
  std::vector<std::string> violations;
};

CertifySummary certify_transcript(const GaTranscript& t,
                                  const std::vector<Rational>& delta_candidates,
                                  bool deltas_from_optimum,
                                  const std::optional<Rational>& opt);

}  // namespace dbsf
