#include "dbsf/generator.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace dbsf {

std::uint64_t bounded_random(std::mt19937_64& rng, std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("bounded_random: k must be positive");
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                        std::numeric_limits<std::uint64_t>::max() % k;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % k;
}

Instance generate_random(int n, double density,
                         const std::vector<DegreeBound>& bound_palette,
                         int demand_count, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate_random: need at least 2 vertices");
  if (!(density > 0.0 && density <= 1.0)) {
    throw std::invalid_argument("generate_random: density must lie in (0, 1]");
  }
  if (bound_palette.empty()) {
    throw std::invalid_argument("generate_random: empty bound palette");
  }
  if (demand_count < 1) throw std::invalid_argument("generate_random: need a demand");

  std::mt19937_64 rng(seed);
  Instance inst;
  for (int v = 0; v < n; ++v) {
    const DegreeBound& b = bound_palette[bounded_random(rng, bound_palette.size())];
    inst.graph.add_vertex(b);
  }
  // Random spanning tree: each vertex attaches to a random earlier one.
  std::set<std::pair<VertexId, VertexId>> used;
  for (VertexId v = 1; v < n; ++v) {
    VertexId u = static_cast<VertexId>(bounded_random(rng, v));
    inst.graph.add_edge(u, v);
    used.insert({std::min(u, v), std::max(u, v)});
  }
  // Density edges over the remaining pairs; probability compared against a
  // 53-bit uniform value so the draw is engine-exact.
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      if (used.count({u, v})) continue;
      double coin = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (coin < density) inst.graph.add_edge(u, v);
    }
  }
  for (int i = 0; i < demand_count; ++i) {
    VertexId s = static_cast<VertexId>(bounded_random(rng, n));
    VertexId t = static_cast<VertexId>(bounded_random(rng, n - 1));
    if (t >= s) ++t;
    inst.demands.push_back({s, t});
  }
  return inst;
}

std::vector<DegreeBound> parse_bound_palette(const std::string& csv) {
  std::vector<DegreeBound> palette;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    palette.push_back(parse_degree_bound(tok));
  }
  if (palette.empty()) throw std::invalid_argument("empty bound palette '" + csv + "'");
  return palette;
}

}  // namespace dbsf
