#pragma once

#include "dbsf/graph.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace dbsf {

struct Demand {
  VertexId s;
  VertexId t;
  bool operator==(const Demand&) const = default;
};

struct Instance {
  Graph graph;
  std::vector<Demand> demands;              // pair demands, arrival order = file order
  std::vector<std::vector<VertexId>> groups;  // group demands (adversary experiments)
  bool dummy_transformed = false;
};

// Replaces every pair-demand endpoint occurrence by a fresh degree-one
// unbounded vertex attached to the original one. Idempotent: a transformed
// instance is returned unchanged. Groups are left alone.
Instance attach_dummy_terminals(Instance inst);

struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(int line, int column, const std::string& message);
};

// Text format:
//   dbsf 1
//   n <count>
//   v <id> <bound>          bound: integer, p/q, or inf
//   e <u> <v> [weight]
//   d <s> <t>
//   g <v1> <v2> ...
// '#' starts a comment; unknown directives are errors; every vertex id in
// [0, n) must be declared exactly once.
Instance parse_instance(std::istream& in);
Instance parse_instance_text(const std::string& text);
std::string format_instance(const Instance& inst);

Instance load_instance_file(const std::string& path);
void save_instance_file(const Instance& inst, const std::string& path);

}  // namespace dbsf
