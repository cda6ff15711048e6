#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "kacward/geometry.hpp"
#include "kacward/graph_file.hpp"
#include "kacward/linalg.hpp"

namespace kw {

inline constexpr std::uint64_t kDefaultCorpusSeed = 20240917;

// KACWARD_SEED if set and parseable, else the default.
std::uint64_t corpus_seed();
std::mt19937_64 corpus_rng(std::uint64_t salt = 0);

// lx x ly vertices at integer points; vertex id x + lx*y, horizontal edges first.
ProjectionSpec grid_projection(int lx, int ly);

// Random straight-edge planar drawing in the unit square; at most max_edges edges.
ProjectionSpec random_planar_projection(int vertices, int max_edges, std::mt19937_64& rng);

// Random straight-edge drawing whose edges may cross transversally.
ProjectionSpec random_crossing_projection(int vertices, int edges, std::mt19937_64& rng);

// Square with both diagonals (one crossing).
ProjectionSpec k4_projection();
// Straight drawing with exactly one crossing.
ProjectionSpec k5_projection();
// Straight drawing with exactly one crossing, found by seeded search.
ProjectionSpec k33_projection();

struct QuasiPlanarInstance {
  ProjectionSpec spec;
  std::vector<CrossedPairSpec> pairs;
};

// Grid with both diagonals added in the given squares (square id = x + (lx-1)*y).
QuasiPlanarInstance quasi_planar_grid(int lx, int ly, const std::vector<int>& squares);

// Closed non-backtracking trails (no repeated edge) on a projection, as directed edge lists.
std::vector<std::vector<int>> random_trails(const FaithfulProjection& proj, std::size_t count,
                                            int max_len, std::mt19937_64& rng);

// Random complex flow matrix supported on non-backtracking transitions, scaled to ||M||_inf = 1.
EdgeMatrix random_flow_matrix(const OrientedEdgeSpace& space, std::mt19937_64& rng);

}  // namespace kw
