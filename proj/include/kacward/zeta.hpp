#pragma once

#include <span>
#include <vector>

#include "kacward/graph.hpp"
#include "kacward/linalg.hpp"

namespace kw {

struct FlowMatrix {
  EdgeMatrix m;
  bool is_flow = false;             // M(a,b) = 0 unless a |> b
  bool is_non_backtracking = false; // M(a, reversal(a)) = 0
};

FlowMatrix make_flow_matrix(EdgeMatrix m, const OrientedEdgeSpace& space);

double matrix_inf_norm(const FlowMatrix& m);

// Cyclic product M(e0,e1) M(e1,e2) ... M(e_{n-1},e0).
cplx loop_character(const EdgeMatrix& m, std::span<const int> loop);
// Open product M(e0,e1) ... M(e_{n-1},e_n).
cplx path_character(const EdgeMatrix& m, std::span<const int> path);

struct ZetaResult {
  cplx product;
  cplx determinant;
  double residual = 0.0;    // |det - product|
  double tail_bound = 0.0;  // rigorous bound on residual
  std::size_t classes = 0;
};

// dim * x^(L+1) / ((L+1)(1-x)): bound on |log det(1-uM) - log(truncated product)|.
double zeta_log_tail_bound(int dim, double x, int max_len);

ZetaResult zeta_truncated_product(const FlowMatrix& m, const OrientedEdgeSpace& space, cplx u,
                                  int max_len, std::size_t cap = kDefaultClassCap);

// -sum_{n<=N} u^n tr(M^n)/n
cplx log_det_trace_series(const EdgeMatrix& m, cplx u, int terms);

struct SymmetryReport {
  double time_reversal = 0.0;  // max |chi(loop) - chi(reversed loop)|
  double twist = 0.0;          // max |chi(path) + chi(twisted path)|
  std::size_t loops = 0;
  std::size_t paths = 0;
};

SymmetryReport check_loop_symmetries(const EdgeMatrix& m, const OrientedEdgeSpace& space,
                                     std::span<const std::vector<int>> loops,
                                     std::span<const std::vector<int>> paths);

// (e, e_1, ..., e_{n-1}, reversal(e)) -> (e, rev e_{n-1}, ..., rev e_1, reversal(e))
std::vector<int> twist_path(std::span<const int> path);

// Non-backtracking paths from e to reversal(e) with at most max_len steps.
std::vector<std::vector<int>> twist_path_corpus(const OrientedEdgeSpace& space, int max_len,
                                                std::size_t limit);

}  // namespace kw
