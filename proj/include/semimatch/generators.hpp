#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

#include "semimatch/edge_cover.hpp"
#include "semimatch/instance.hpp"

namespace semimatch {

/// Every generator draws from std::mt19937_64 seeded with `seed`.
using Rng = std::mt19937_64;

/// Uniform integer in [0, bound) by rejection on raw 64-bit outputs.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);
/// True with probability p, comparing the top 53 bits against p.
bool bernoulli(Rng& rng, double p);

/// Each job-machine pair becomes an edge with probability edge_prob, weight
/// uniform in [1, max_weight]. A job left without edges gets one edge to a
/// uniformly chosen machine. Edges are ordered by (job, machine).
BipartiteInstance gen_random(int num_jobs, int num_machines, double edge_prob, Weight max_weight,
                             std::uint64_t seed);

/// Exactly num_edges distinct edges: one uniform machine per job, then
/// uniform extra pairs. Edges are ordered by (job, machine).
BipartiteInstance gen_random_edges(int num_jobs, int num_machines, std::int64_t num_edges,
                                   Weight max_weight, std::uint64_t seed);

/// G(n, p). With `connected`, a uniform random recursive tree over a shuffled
/// vertex order is laid down first.
SimpleGraph gen_random_graph(int num_vertices, double edge_prob, std::uint64_t seed, bool connected);

}  // namespace semimatch
