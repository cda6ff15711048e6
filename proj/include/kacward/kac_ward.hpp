#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "kacward/geometry.hpp"
#include "kacward/linalg.hpp"

namespace kw {

struct WeightAssignment {
  std::vector<double> w;             // per undirected edge
  std::optional<double> beta;        // set when sourced from couplings
  std::vector<double> couplings;

  static WeightAssignment from_couplings(std::span<const double> j, double beta);
  static WeightAssignment direct(std::vector<double> w);
};

struct KacWardMatrix {
  EdgeMatrix k;
  OrientedEdgeSpace space;
};

KacWardMatrix build_kac_ward(const FaithfulProjection& proj);

// K W, with W acting on the right: (KW)(a,b) = K(a,b) w[edge(b)].
EdgeMatrix weighted(const EdgeMatrix& k, std::span<const double> w);

struct SqrtDet {
  double value = 1.0;
  double log_abs = 0.0;
  int sign = 1;
  double imag_residual = 0.0;  // |Im P| / |P| at the end of the path
  int steps = 0;
  cplx log_det{0.0, 0.0};      // log det(1 - M) at t = 1
};

// Continuous branch of sqrt det(1 - t M) along a complex path from t = 0 to t = 1.
SqrtDet sqrt_det_branch(const EdgeMatrix& m);
SqrtDet sqrt_det_kw(const KacWardMatrix& k, std::span<const double> w);

double log_cosh(double x);

struct PartitionFunction {
  double z = 0.0;
  double z_tilde = 0.0;
  double log_z = 0.0;
  double log_z_tilde = 0.0;
};

PartitionFunction planar_partition_function(const FaithfulProjection& proj, const KacWardMatrix& k,
                                            std::span<const double> j, double beta);

double signed_even_sum_via_det(const KacWardMatrix& k, std::span<const double> w);

struct CrossedPair {
  int alpha = 0;
  int edge_plus = 0;   // pairs endpoints 1 and 3
  int edge_minus = 0;  // pairs endpoints 2 and 4
  std::array<int, 4> endpoints{};  // counterclockwise around the crossing, starting at edge_plus's u
  Point2 point;
};

// Validates that the two edges cross exactly once and nothing else.
CrossedPair make_crossed_pair(const FaithfulProjection& proj, int alpha, int edge_plus, int edge_minus);

struct CorrectorSolution {
  double j_plus = 0.0, j_minus = 0.0, beta = 0.0;
  double y = 0.0;       // tanh(2 beta J+) tanh(2 beta J-)
  double t_r = 0.0;     // tanh(beta R)
  double r = 0.0;
  double n = 1.0;       // 1 - t+ t- tR
  double a = 0.0, b = 0.0, c = 0.0;
  double quadratic_residual = 0.0;
  double aha_residual = 0.0;    // |C + A B|
  double root_product_residual = 0.0;
};

CorrectorSolution corrector_strength(double j_plus, double j_minus, double beta);

struct QuasiPlanarResult {
  double z = 0.0;
  double log_z = 0.0;
  double z_tilde = 0.0;
  std::vector<CorrectorSolution> correctors;
  std::vector<double> weights;  // corrected W
};

QuasiPlanarResult quasi_planar_partition(const FaithfulProjection& proj, const KacWardMatrix& k,
                                         std::span<const double> j,
                                         std::span<const CrossedPair> pairs, double beta);

}  // namespace kw
