#include "kacward/zeta.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "kacward/error.hpp"

namespace kw {

FlowMatrix make_flow_matrix(EdgeMatrix m, const OrientedEdgeSpace& space) {
  if (m.rows() != space.size() || m.cols() != space.size()) {
    fail(ErrorCode::input, "flow matrix dimension does not match the oriented edge space");
  }
  FlowMatrix f;
  f.is_flow = true;
  f.is_non_backtracking = true;
  for (int a = 0; a < space.size(); ++a) {
    for (int b = 0; b < space.size(); ++b) {
      if (m(a, b) == cplx{0.0, 0.0}) continue;
      if (!space.leads_into(a, b)) f.is_flow = false;
      if (b == reversal(a)) f.is_non_backtracking = false;
    }
  }
  f.m = std::move(m);
  return f;
}

double matrix_inf_norm(const FlowMatrix& m) { return inf_norm(m.m); }

cplx loop_character(const EdgeMatrix& m, std::span<const int> loop) {
  cplx chi{1.0, 0.0};
  const std::size_t n = loop.size();
  for (std::size_t j = 0; j < n; ++j) chi *= m(loop[j], loop[(j + 1) % n]);
  return chi;
}

cplx path_character(const EdgeMatrix& m, std::span<const int> path) {
  cplx chi{1.0, 0.0};
  for (std::size_t j = 1; j < path.size(); ++j) chi *= m(path[j - 1], path[j]);
  return chi;
}

double zeta_log_tail_bound(int dim, double x, int max_len) {
  if (x >= 1.0) return std::numeric_limits<double>::infinity();
  return dim * std::pow(x, max_len + 1) / ((max_len + 1) * (1.0 - x));
}

ZetaResult zeta_truncated_product(const FlowMatrix& m, const OrientedEdgeSpace& space, cplx u,
                                  int max_len, std::size_t cap) {
  if (!m.is_flow) fail(ErrorCode::input, "zeta product requires a flow matrix");
  const double x = std::abs(u) * matrix_inf_norm(m);
  if (!(x < 1.0)) {
    fail(ErrorCode::precondition,
         "|u| * ||M||_inf = " + std::to_string(x) + " is not below 1; the product identity does not apply");
  }
  ZetaResult r;
  cplx product{1.0, 0.0};
  auto support = [&](int a, int b) { return m.m(a, b) != cplx{0.0, 0.0}; };
  r.classes = for_each_primitive_loop(
      space, max_len,
      [&](std::span<const int> loop) {
        product *= cplx{1.0, 0.0} - std::pow(u, static_cast<int>(loop.size())) * loop_character(m.m, loop);
        return true;
      },
      support, cap);
  const int n = space.size();
  EdgeMatrix a = EdgeMatrix::Identity(n, n) - u * m.m;
  r.product = product;
  r.determinant = det(a);
  r.residual = std::abs(r.determinant - r.product);
  r.tail_bound = std::abs(r.determinant) * std::expm1(zeta_log_tail_bound(n, x, max_len));
  return r;
}

cplx log_det_trace_series(const EdgeMatrix& m, cplx u, int terms) {
  const auto n = m.rows();
  EdgeMatrix power = EdgeMatrix::Identity(n, n);
  cplx total{0.0, 0.0};
  cplx un{1.0, 0.0};
  for (int k = 1; k <= terms; ++k) {
    power = power * m;
    un *= u;
    total -= un * power.trace() / static_cast<double>(k);
  }
  return total;
}

std::vector<int> twist_path(std::span<const int> path) {
  std::vector<int> out;
  const std::size_t n = path.size();
  out.push_back(path[0]);
  for (std::size_t j = n - 2; j >= 1; --j) out.push_back(reversal(path[j]));
  out.push_back(path[n - 1]);
  return out;
}

SymmetryReport check_loop_symmetries(const EdgeMatrix& m, const OrientedEdgeSpace& space,
                                     std::span<const std::vector<int>> loops,
                                     std::span<const std::vector<int>> paths) {
  SymmetryReport rep;
  for (const auto& loop : loops) {
    for (std::size_t j = 0; j < loop.size(); ++j) {
      if (!space.leads_into(loop[j], loop[(j + 1) % loop.size()])) {
        fail(ErrorCode::input, "corpus loop is not closed");
      }
    }
    const auto rev = reverse_loop(loop);
    rep.time_reversal = std::max(rep.time_reversal, std::abs(loop_character(m, loop) - loop_character(m, rev)));
    ++rep.loops;
  }
  for (const auto& path : paths) {
    if (path.size() < 3 || path.back() != reversal(path.front())) {
      fail(ErrorCode::input, "corpus path must run from an edge to its reversal");
    }
    make_path(space, path);
    const auto tw = twist_path(path);
    rep.twist = std::max(rep.twist, std::abs(path_character(m, path) + path_character(m, tw)));
    ++rep.paths;
  }
  return rep;
}

std::vector<std::vector<int>> twist_path_corpus(const OrientedEdgeSpace& space, int max_len,
                                                std::size_t limit) {
  std::vector<std::vector<int>> out;
  std::vector<int> path;
  std::function<void()> dfs = [&]() {
    if (out.size() >= limit) return;
    const int last = path.back();
    if (path.size() >= 3 && last == reversal(path.front())) {
      out.push_back(path);
      return;
    }
    if (static_cast<int>(path.size()) > max_len) return;
    for (int b : space.successors(last)) {
      path.push_back(b);
      dfs();
      path.pop_back();
    }
  };
  for (int e = 0; e < space.size() && out.size() < limit; ++e) {
    path.assign(1, e);
    dfs();
  }
  return out;
}

}  // namespace kw
