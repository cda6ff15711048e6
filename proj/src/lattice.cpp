#include "kacward/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>
#include <thread>

#include "kacward/error.hpp"
#include "kacward/geometry.hpp"
#include "kacward/kac_ward.hpp"

namespace kw {

double TorusSpec::w() const { return std::tanh(beta * j); }
double TorusSpec::y() const { return std::sinh(2.0 * beta * j); }

void check_torus_spec(const TorusSpec& spec) {
  if (spec.L < 2) fail(ErrorCode::input, "torus size L must be at least 2");
  if (!std::isfinite(spec.beta) || !std::isfinite(spec.j)) fail(ErrorCode::input, "beta and J must be finite");
}

Eigen::Matrix4cd fourier_block(double w, double k1, double k2) {
  const cplx p = std::polar(1.0, kPi / 4.0);
  const cplx m = std::conj(p);
  Eigen::Matrix4cd phase;
  phase << 1.0, 0.0, m, p,
           0.0, 1.0, p, m,
           p, m, 1.0, 0.0,
           m, p, 0.0, 1.0;
  Eigen::Vector4cd d;
  d << std::polar(1.0, -k1), std::polar(1.0, k1), std::polar(1.0, k2), std::polar(1.0, -k2);
  return w * (phase * d.asDiagonal());
}

double block_det_closed_form(double w, double k1, double k2) {
  const double s = 1.0 + w * w;
  return s * s - 2.0 * w * (1.0 - w * w) * (std::cos(k1) + std::cos(k2));
}

TorusLogDet torus_log_det_per_site(const TorusSpec& spec, int threads) {
  check_torus_spec(spec);
  const int L = spec.L;
  const double w = spec.w();
  struct Row {
    CompensatedSum sum;
    double deviation = 0.0;
    double min_det = 0.0;
    bool singular = false;
    cplx first{1.0, 0.0};
  };
  std::vector<Row> rows(L);
  auto work = [&](int a) {
    Row& row = rows[a];
    row.min_det = INFINITY;
    const double k1 = kTwoPi * a / L;
    for (int b = 0; b < L; ++b) {
      const double k2 = kTwoPi * b / L;
      const cplx d = (Eigen::Matrix4cd::Identity() - fourier_block(w, k1, k2)).determinant();
      if (b == 0) row.first = d;
      row.deviation = std::max(row.deviation, std::abs(d - block_det_closed_form(w, k1, k2)));
      row.min_det = std::min(row.min_det, d.real());
      if (!(d.real() > kSingularBlockThreshold)) {
        row.singular = true;
        continue;
      }
      row.sum.add(std::log(d.real()));
    }
  };
  const int n = std::clamp(threads, 1, L);
  if (n == 1) {
    for (int a = 0; a < L; ++a) work(a);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) {
      pool.emplace_back([&, t] {
        for (int a = t; a < L; a += n) work(a);
      });
    }
    for (auto& th : pool) th.join();
  }
  TorusLogDet out;
  out.min_block_det = INFINITY;
  CompensatedSum total;
  for (const auto& row : rows) {
    total.add(row.sum.value());
    out.singular = out.singular || row.singular;
    out.max_closed_form_deviation = std::max(out.max_closed_form_deviation, row.deviation);
    out.min_block_det = std::min(out.min_block_det, row.min_det);
  }
  out.k0_block_det = rows[0].first;
  out.per_site = out.singular ? -INFINITY : total.value() / (static_cast<double>(L) * L);
  return out;
}

double torus_pressure(const TorusSpec& spec, int threads) {
  const auto r = torus_log_det_per_site(spec, threads);
  if (r.singular) {
    fail(ErrorCode::precondition, "periodic Kac-Ward determinant vanishes (k = (0,0) block at criticality)");
  }
  return std::log(2.0) + 2.0 * log_cosh(spec.beta * spec.j) + 0.5 * r.per_site;
}

TorusGraph torus_graph(int L) {
  if (L < 2) fail(ErrorCode::input, "torus size L must be at least 2");
  TorusGraph t;
  t.L = L;
  t.graph.vertex_count = L * L;
  for (int y = 0; y < L; ++y) {
    for (int x = 0; x < L; ++x) {
      const int v = x + L * y;
      t.graph.edges.push_back({v, (x + 1) % L + L * y});
      t.handle_1.push_back(x == L - 1);
      t.handle_2.push_back(0);
      t.graph.edges.push_back({v, x + L * ((y + 1) % L)});
      t.handle_1.push_back(0);
      t.handle_2.push_back(y == L - 1);
    }
  }
  return t;
}

EdgeMatrix periodic_kac_ward_dense(int L) {
  if (L < 2) fail(ErrorCode::input, "torus size L must be at least 2");
  const int dx[4] = {1, 0, -1, 0};
  const int dy[4] = {0, 1, 0, -1};
  const double turn[4] = {0.0, kPi / 2.0, 0.0, -kPi / 2.0};
  auto wrap = [L](int c) { return ((c % L) + L) % L; };
  // (x, y, a): leaving (x, y) in direction a.
  auto index = [&](int x, int y, int a) {
    switch (a) {
      case 0: return directed(2 * (x + L * y), true);
      case 1: return directed(2 * (x + L * y) + 1, true);
      case 2: return directed(2 * (wrap(x - 1) + L * y), false);
      default: return directed(2 * (x + L * wrap(y - 1)) + 1, false);
    }
  };
  const int n = 4 * L * L;
  EdgeMatrix k = EdgeMatrix::Zero(n, n);
  for (int y = 0; y < L; ++y) {
    for (int x = 0; x < L; ++x) {
      for (int a = 0; a < 4; ++a) {
        const int x2 = wrap(x + dx[a]);
        const int y2 = wrap(y + dy[a]);
        for (int b = 0; b < 4; ++b) {
          const int rel = (b - a + 4) % 4;
          if (rel == 2) continue;
          k(index(x, y, a), index(x2, y2, b)) = std::polar(1.0, 0.5 * turn[rel]);
        }
      }
    }
  }
  return k;
}

bool is_critical(double beta, double j) {
  return std::abs(std::abs(std::sinh(2.0 * beta * j)) - 1.0) <= 1e-12;
}

double onsager_pressure(double beta, double j, int quad_order) {
  if (!std::isfinite(beta) || !std::isfinite(j)) fail(ErrorCode::input, "beta and J must be finite");
  if (quad_order < 1) fail(ErrorCode::input, "quadrature order must be positive");
  if (is_critical(beta, j)) {
    fail(ErrorCode::precondition,
         "integrable log singularity; use beta != beta_c or dedicated critical handler");
  }
  const double y = std::sinh(2.0 * beta * j);
  const double c0 = 1.0 + y * y;
  const int n = quad_order;
  std::vector<double> cosk(n);
  for (int a = 0; a < n; ++a) cosk[a] = std::cos(kTwoPi * (a + 0.5) / n);
  CompensatedSum total;
  for (int a = 0; a < n; ++a) {
    CompensatedSum row;
    for (int b = 0; b < n; ++b) row.add(std::log(c0 - y * (cosk[a] + cosk[b])));
    total.add(row.value());
  }
  return std::log(2.0) + 0.5 * total.value() / (static_cast<double>(n) * n);
}

double critical_beta(double j) {
  if (!(j > 0.0) || !std::isfinite(j)) fail(ErrorCode::input, "critical_beta requires J > 0");
  const double beta = std::asinh(1.0) / (2.0 * j);
  if (std::abs(std::sinh(2.0 * beta * j) - 1.0) > 1e-14) {
    fail(ErrorCode::numeric, "critical point verification failed");
  }
  return beta;
}

HandleParityResult handle_parity_check(int L, double beta, double j) {
  if (L < 2) fail(ErrorCode::input, "torus size L must be at least 2");
  if (L > kMaxHandleParityL) fail(ErrorCode::scale, "handle parity enumeration limited to L <= 3");
  const TorusGraph t = torus_graph(L);
  const double w = std::tanh(beta * j);
  EdgeSet h1 = 0, h2 = 0;
  for (std::size_t e = 0; e < t.graph.edges.size(); ++e) {
    if (t.handle_1[e]) h1 |= EdgeSet{1} << e;
    if (t.handle_2[e]) h2 |= EdgeSet{1} << e;
  }
  CompensatedSum signed_sum, unsigned_sum;
  enumerate_even_subgraphs(t.graph, {}, [&](EdgeSet g) {
    const double wg = std::pow(w, std::popcount(g));
    const int f1 = std::popcount(g & h1);
    const int f2 = std::popcount(g & h2);
    const int parity = (f1 + f2 + f1 * f2) & 1;
    signed_sum.add(parity ? -wg : wg);
    unsigned_sum.add(wg);
  });
  const EdgeMatrix k = periodic_kac_ward_dense(L);
  const EdgeMatrix m = w * k;
  HandleParityResult r;
  r.signed_sum = signed_sum.value();
  r.unsigned_sum = unsigned_sum.value();
  r.det = det(EdgeMatrix::Identity(m.rows(), m.cols()) - m).real();
  r.sqrt_det = sqrt_det_branch(m).value;
  r.residual = std::abs(r.signed_sum - r.sqrt_det) / std::abs(r.sqrt_det);
  r.square_residual = std::abs(r.det - r.signed_sum * r.signed_sum) / std::abs(r.det);
  return r;
}

}  // namespace kw
