#pragma once

#include "dbsf/instance.hpp"

#include <cstdint>
#include <random>

namespace dbsf {

// Unbiased integer in [0, k) from the engine's raw output; used instead of
// std::uniform_int_distribution so generated instances are identical across
// standard libraries.
std::uint64_t bounded_random(std::mt19937_64& rng, std::uint64_t k);

// Random connected instance: a random spanning tree guarantees every demand
// is feasible, then every remaining vertex pair joins with probability
// `density`. Bounds are drawn uniformly from the palette. Fully determined by
// the seed.
Instance generate_random(int n, double density,
                         const std::vector<DegreeBound>& bound_palette,
                         int demand_count, std::uint64_t seed);

std::vector<DegreeBound> parse_bound_palette(const std::string& csv);

}  // namespace dbsf
