#pragma once

#include <array>
#include <span>
#include <vector>

#include "kacward/geometry.hpp"
#include "kacward/graph.hpp"

namespace kw {

inline constexpr int kMaxBruteForceSpins = 24;

struct PairCoupling {
  int u = 0;
  int v = 0;
  double j = 0.0;
};

struct FourSpinTerm {
  std::array<int, 4> sites{};
  double r = 0.0;
};

// H = -sum J s_u s_v - h sum s_x + sum R s1 s2 s3 s4
struct SpinModel {
  int vertex_count = 0;
  std::vector<PairCoupling> pairs;
  std::vector<FourSpinTerm> four_spin;
  double h = 0.0;
  double beta = 0.0;
};

SpinModel model_from_projection(const FaithfulProjection& proj, std::span<const double> j, double beta);

struct BruteForceZ {
  double z = 0.0;
  double log_z = 0.0;
};

BruteForceZ brute_force_Z(const SpinModel& model, int threads = 1);
double brute_force_correlation(const SpinModel& model, std::span<const int> sites, int threads = 1);

// Sum over subgraphs with boundary A of w(G) (-1)^{n0(G)} (-1)^{crossings with the lines}.
double signed_even_sum(const FaithfulProjection& proj, std::span<const double> w,
                       std::span<const int> boundary, std::span<const Polyline> disorder_lines = {},
                       LineEnds ends = LineEnds::in_faces);

// Sum over loop decompositions of the product of (-1)^{n(loop)}.
int kw_step1_check(const FaithfulProjection& proj, EdgeSet edges);

inline constexpr int kMaxPairingParityN = 6;

// Sum over perfect matchings of 2n points on a circle of (-1)^{chord crossings}.
long long pairing_parity_sum(int n);

// Couplings crossed an odd number of times by the lines are negated; returns
// sum_s prod s_x e^{-beta H'} / Z(H).
double mixed_disorder_expectation(const FaithfulProjection& proj, const SpinModel& model,
                                  std::span<const int> spins, std::span<const Polyline> disorder_lines,
                                  int threads = 1, LineEnds ends = LineEnds::in_faces);

// 1 for edges crossed an odd number of times by the union of the lines.
std::vector<char> disorder_parity(const FaithfulProjection& proj, std::span<const Polyline> lines,
                                  LineEnds ends = LineEnds::in_faces);

}  // namespace kw
