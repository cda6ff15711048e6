#pragma once

#include <vector>

#include <Eigen/Dense>

#include "kacward/graph.hpp"
#include "kacward/linalg.hpp"

namespace kw {

struct TorusSpec {
  int L = 2;
  double j = 1.0;
  double beta = 0.0;

  double w() const;  // tanh(beta J)
  double y() const;  // sinh(2 beta J)
};

void check_torus_spec(const TorusSpec& spec);

// 4x4 block K^per_k W in the (right, up, left, down) ordering.
Eigen::Matrix4cd fourier_block(double w, double k1, double k2);
// (1 + W^2)^2 - 2 W (1 - W^2) (cos k1 + cos k2)
double block_det_closed_form(double w, double k1, double k2);

struct TorusLogDet {
  double per_site = 0.0;  // -inf when singular
  bool singular = false;
  double max_closed_form_deviation = 0.0;
  double min_block_det = 0.0;
  cplx k0_block_det{1.0, 0.0};
};

inline constexpr double kSingularBlockThreshold = 1e-12;

// (1/L^2) sum_k log det(1 - K^per_k W); deterministic for any thread count.
TorusLogDet torus_log_det_per_site(const TorusSpec& spec, int threads = 1);

// psi_L = ln 2 + 2 ln cosh(beta J) + (1/2) per-site log det. Precondition error when singular.
double torus_pressure(const TorusSpec& spec, int threads = 1);

// L x L torus; vertex x + L y, edge 2v is (x,y)-(x+1,y), edge 2v+1 is (x,y)-(x,y+1).
struct TorusGraph {
  int L = 0;
  Graph graph;
  std::vector<char> handle_1;  // horizontal edges wrapping x = L-1 -> 0
  std::vector<char> handle_2;  // vertical edges wrapping y = L-1 -> 0
};

TorusGraph torus_graph(int L);

// Periodic Kac-Ward matrix on oriented edges of torus_graph(L), unweighted.
EdgeMatrix periodic_kac_ward_dense(int L);

inline constexpr int kDefaultQuadOrder = 2048;

// ln 2 + (1/2) mean_k ln(1 + Y^2 - Y (cos k1 + cos k2)) on the N x N midpoint-shifted grid.
double onsager_pressure(double beta, double j, int quad_order = kDefaultQuadOrder);

bool is_critical(double beta, double j);
double critical_beta(double j);

struct HandleParityResult {
  double signed_sum = 0.0;    // sum over even subgraphs of (-1)^{F1+F2+F1F2} w(G)
  double unsigned_sum = 0.0;  // sum over even subgraphs of w(G)
  double det = 0.0;           // det(1 - K^per W)
  double sqrt_det = 0.0;      // branch-tracked square root
  double residual = 0.0;      // |signed - sqrt_det| / |sqrt_det|
  double square_residual = 0.0;  // |det - signed^2| / |det|
};

inline constexpr int kMaxHandleParityL = 3;

HandleParityResult handle_parity_check(int L, double beta, double j);

}  // namespace kw
