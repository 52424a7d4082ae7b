#include "dbsf/instance.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace dbsf {

Instance attach_dummy_terminals(Instance inst) {
  if (inst.dummy_transformed) return inst;
  int original_n = inst.graph.vertex_count();
  for (auto& d : inst.demands) {
    if (d.s < 0 || d.s >= original_n || d.t < 0 || d.t >= original_n)
      throw std::out_of_range("demand endpoint id out of range");
  }
  int k = 0;
  for (auto& d : inst.demands) {
    VertexId ds = inst.graph.add_vertex(DegreeBound::make_unbounded(),
                                        "dummy" + std::to_string(k++));
    inst.graph.add_edge(ds, d.s);
    VertexId dt = inst.graph.add_vertex(DegreeBound::make_unbounded(),
                                        "dummy" + std::to_string(k++));
    inst.graph.add_edge(dt, d.t);
    d.s = ds;
    d.t = dt;
  }
  inst.dummy_transformed = true;
  return inst;
}

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ": " + message),
      line(line),
      column(column) {}

namespace {

struct Token {
  std::string text;
  int column;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '#')
      ++i;
    out.push_back(Token{line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

int parse_id(const Token& tok, int line_no, int n, const char* what) {
  int value = 0;
  try {
    size_t pos = 0;
    value = std::stoi(tok.text, &pos);
    if (pos != tok.text.size()) throw std::invalid_argument("");
  } catch (...) {
    throw ParseError(line_no, tok.column, std::string("bad ") + what + " '" + tok.text + "'");
  }
  if (value < 0 || value >= n)
    throw ParseError(line_no, tok.column,
                     std::string(what) + " " + tok.text + " out of range [0, " +
                         std::to_string(n) + ")");
  return value;
}

}  // namespace

Instance parse_instance(std::istream& in) {
  std::string line;
  int line_no = 0;
  bool saw_header = false;
  int n = -1;
  std::vector<std::optional<DegreeBound>> bounds;
  struct StagedEdge {
    VertexId u, v;
    Int w;
    int line, column;
  };
  std::vector<StagedEdge> staged_edges;
  std::vector<Demand> demands;
  std::vector<std::vector<VertexId>> groups;

  while (std::getline(in, line)) {
    ++line_no;
    auto toks = tokenize(line);
    if (toks.empty()) continue;
    if (!saw_header) {
      if (toks.size() != 2 || toks[0].text != "dbsf" || toks[1].text != "1")
        throw ParseError(line_no, toks[0].column, "expected header 'dbsf 1'");
      saw_header = true;
      continue;
    }
    const std::string& dir = toks[0].text;
    if (dir == "n") {
      if (n >= 0) throw ParseError(line_no, toks[0].column, "duplicate 'n' directive");
      if (toks.size() != 2) throw ParseError(line_no, toks[0].column, "'n' takes one argument");
      try {
        size_t pos = 0;
        n = std::stoi(toks[1].text, &pos);
        if (pos != toks[1].text.size() || n < 0) throw std::invalid_argument("");
      } catch (...) {
        throw ParseError(line_no, toks[1].column, "bad vertex count '" + toks[1].text + "'");
      }
      bounds.assign(n, std::nullopt);
      continue;
    }
    if (n < 0) throw ParseError(line_no, toks[0].column, "'n' must precede '" + dir + "'");
    if (dir == "v") {
      if (toks.size() != 3) throw ParseError(line_no, toks[0].column, "'v' takes id and bound");
      int id = parse_id(toks[1], line_no, n, "vertex id");
      if (bounds[id])
        throw ParseError(line_no, toks[1].column, "vertex " + toks[1].text + " declared twice");
      try {
        bounds[id] = parse_degree_bound(toks[2].text);
      } catch (const std::exception& ex) {
        throw ParseError(line_no, toks[2].column, ex.what());
      }
      continue;
    }
    if (dir == "e") {
      if (toks.size() != 3 && toks.size() != 4)
        throw ParseError(line_no, toks[0].column, "'e' takes two endpoints and optional weight");
      int u = parse_id(toks[1], line_no, n, "vertex id");
      int v = parse_id(toks[2], line_no, n, "vertex id");
      if (u == v) throw ParseError(line_no, toks[1].column, "self loops are not allowed");
      Int w = 0;
      if (toks.size() == 4) {
        try {
          size_t pos = 0;
          w = std::stoll(toks[3].text, &pos);
          if (pos != toks[3].text.size()) throw std::invalid_argument("");
        } catch (...) {
          throw ParseError(line_no, toks[3].column, "bad weight '" + toks[3].text + "'");
        }
        if (w < 0) throw ParseError(line_no, toks[3].column, "weight must be nonnegative");
      }
      staged_edges.push_back(StagedEdge{u, v, w, line_no, toks[0].column});
      continue;
    }
    if (dir == "d") {
      if (toks.size() != 3) throw ParseError(line_no, toks[0].column, "'d' takes two endpoints");
      int s = parse_id(toks[1], line_no, n, "demand endpoint");
      int t = parse_id(toks[2], line_no, n, "demand endpoint");
      demands.push_back(Demand{s, t});
      continue;
    }
    if (dir == "g") {
      if (toks.size() < 2) throw ParseError(line_no, toks[0].column, "'g' needs at least one member");
      std::vector<VertexId> group;
      for (size_t i = 1; i < toks.size(); ++i)
        group.push_back(parse_id(toks[i], line_no, n, "group member"));
      groups.push_back(std::move(group));
      continue;
    }
    throw ParseError(line_no, toks[0].column, "unknown directive '" + dir + "'");
  }
  if (!saw_header) throw ParseError(line_no + 1, 1, "missing header 'dbsf 1'");
  if (n < 0) throw ParseError(line_no + 1, 1, "missing 'n' directive");
  for (int i = 0; i < n; ++i)
    if (!bounds[i])
      throw ParseError(line_no + 1, 1, "vertex " + std::to_string(i) + " has no 'v' declaration");

  Instance inst;
  for (int i = 0; i < n; ++i) inst.graph.add_vertex(*bounds[i]);
  for (const auto& e : staged_edges) inst.graph.add_edge(e.u, e.v, e.w);
  inst.demands = std::move(demands);
  inst.groups = std::move(groups);
  return inst;
}

Instance parse_instance_text(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

std::string format_instance(const Instance& inst) {
  std::ostringstream out;
  out << "dbsf 1\n";
  out << "n " << inst.graph.vertex_count() << "\n";
  for (int v = 0; v < inst.graph.vertex_count(); ++v)
    out << "v " << v << " " << format_degree_bound(inst.graph.bound(v)) << "\n";
  for (const auto& e : inst.graph.edges()) {
    out << "e " << e.u << " " << e.v;
    if (e.weight != 0) out << " " << e.weight;
    out << "\n";
  }
  for (const auto& d : inst.demands) out << "d " << d.s << " " << d.t << "\n";
  for (const auto& g : inst.groups) {
    out << "g";
    for (VertexId v : g) out << " " << v;
    out << "\n";
  }
  return out.str();
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file '" + path + "'");
  return parse_instance(in);
}

void save_instance_file(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file '" + path + "'");
  out << format_instance(inst);
}

}  // namespace dbsf
