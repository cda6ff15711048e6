#include "kacward/kac_ward.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kacward/error.hpp"

namespace kw {

WeightAssignment WeightAssignment::from_couplings(std::span<const double> j, double beta) {
  WeightAssignment wa;
  wa.beta = beta;
  wa.couplings.assign(j.begin(), j.end());
  for (double x : j) wa.w.push_back(std::tanh(beta * x));
  return wa;
}

WeightAssignment WeightAssignment::direct(std::vector<double> w) {
  WeightAssignment wa;
  wa.w = std::move(w);
  return wa;
}

KacWardMatrix build_kac_ward(const FaithfulProjection& proj) {
  KacWardMatrix out;
  out.space = proj.space();
  const int n = out.space.size();
  out.k = EdgeMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b : out.space.successors(a)) {
      const double angle = turning_angle(proj.curve(a), proj.curve(b));
      out.k(a, b) = std::polar(1.0, 0.5 * angle);
    }
  }
  return out;
}

EdgeMatrix weighted(const EdgeMatrix& k, std::span<const double> w) {
  if (static_cast<Eigen::Index>(2 * w.size()) != k.cols()) {
    fail(ErrorCode::input, "weight count does not match the edge count");
  }
  EdgeMatrix m = k;
  for (Eigen::Index b = 0; b < m.cols(); ++b) m.col(b) *= w[b / 2];
  return m;
}

namespace {

cplx principal(cplx delta) {
  const double turns = std::round(delta.imag() / kTwoPi);
  return {delta.real(), delta.imag() - turns * kTwoPi};
}

}  // namespace

SqrtDet sqrt_det_branch(const EdgeMatrix& m) {
  const auto n = m.rows();
  const EdgeMatrix id = EdgeMatrix::Identity(n, n);
  auto t_of = [](double s) { return cplx{s, 0.5 * s * (1.0 - s)}; };
  auto logd = [&](double s) { return log_det(id - t_of(s) * m); };

  SqrtDet out;
  out.log_det = logd(1.0);
  if (!std::isfinite(out.log_det.real()) || out.log_det.real() < std::log(1e-28)) {
    out.value = 0.0;
    out.sign = 0;
    out.log_abs = -std::numeric_limits<double>::infinity();
    return out;
  }
  double s = 0.0;
  double ds = 1.0 / 16.0;
  cplx current{0.0, 0.0};  // log det at s
  cplx log_p{0.0, 0.0};
  while (s < 1.0) {
    const double step = std::min(ds, 1.0 - s);
    const cplx next = s + step >= 1.0 ? out.log_det : logd(s + step);
    const cplx mid = logd(s + 0.5 * step);
    const cplx d_full = principal(next - current);
    const cplx d_half1 = principal(mid - current);
    const cplx d_half2 = principal(next - mid);
    const bool smooth = std::abs(d_full.imag()) < kPi / 4 &&
                        std::abs(d_half1 + d_half2 - d_full) < 1e-6 &&
                        std::abs(d_half1 - 0.5 * d_full) < 0.5;
    if (!smooth) {
      ds = 0.5 * step;
      if (ds < 1e-12) fail(ErrorCode::numeric, "square-root branch tracking failed: step underflow");
      continue;
    }
    log_p += 0.5 * d_full;
    current = next;
    s += step;
    ++out.steps;
    ds = std::min(0.25, 1.5 * step);
  }
  out.log_abs = log_p.real();
  const double c = std::cos(log_p.imag());
  out.sign = c >= 0.0 ? 1 : -1;
  out.imag_residual = std::abs(std::sin(log_p.imag()));
  out.value = out.sign * std::exp(out.log_abs);
  if (out.imag_residual > 1e-8) {
    fail(ErrorCode::numeric, "square root of det(1 - KW) is not real (residual " +
                                 std::to_string(out.imag_residual) + ")");
  }
  return out;
}

SqrtDet sqrt_det_kw(const KacWardMatrix& k, std::span<const double> w) {
  return sqrt_det_branch(weighted(k.k, w));
}

double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

PartitionFunction planar_partition_function(const FaithfulProjection& proj, const KacWardMatrix& k,
                                            std::span<const double> j, double beta) {
  if (!proj.is_planar()) {
    fail(ErrorCode::geometry,
         "projection has edge crossings; the determinant gives the signed even-subgraph sum instead");
  }
  if (static_cast<int>(j.size()) != proj.edge_count()) fail(ErrorCode::input, "coupling count mismatch");
  std::vector<double> w;
  double log_c = proj.vertex_count() * std::log(2.0);
  for (double x : j) {
    w.push_back(std::tanh(beta * x));
    log_c += log_cosh(beta * x);
  }
  const auto n = k.k.rows();
  const cplx ld = principal(log_det(EdgeMatrix::Identity(n, n) - weighted(k.k, w)));
  if (!std::isfinite(ld.real()) || std::abs(ld.imag()) > 1e-6) {
    fail(ErrorCode::numeric, "det(1 - KW) is not positive on a planar projection");
  }
  PartitionFunction pf;
  pf.log_z_tilde = 0.5 * ld.real();
  pf.z_tilde = std::exp(pf.log_z_tilde);
  pf.log_z = pf.log_z_tilde + log_c;
  pf.z = std::exp(pf.log_z);
  return pf;
}

double signed_even_sum_via_det(const KacWardMatrix& k, std::span<const double> w) {
  return sqrt_det_kw(k, w).value;
}

CrossedPair make_crossed_pair(const FaithfulProjection& proj, int alpha, int edge_plus, int edge_minus) {
  const std::string name = "crossed pair " + std::to_string(alpha);
  if (edge_plus == edge_minus) fail(ErrorCode::input, name + " uses the same edge twice");
  if (proj.crossing_count(edge_plus, edge_minus) != 1) {
    fail(ErrorCode::geometry, name + ": edges must cross each other exactly once");
  }
  for (int e : {edge_plus, edge_minus}) {
    if (proj.crossings_of(e).size() != 1) {
      fail(ErrorCode::geometry, name + ": edge " + std::to_string(proj.edge_id(e)) + " crosses another edge");
    }
  }
  const Crossing& x = proj.crossings()[proj.crossings_of(edge_plus).front()];
  CrossedPair cp;
  cp.alpha = alpha;
  cp.edge_plus = edge_plus;
  cp.edge_minus = edge_minus;
  cp.point = x.point;
  auto tangent = [&](int e) {
    const auto& pts = proj.curve(directed(e, true)).points;
    const int seg = e == x.edge_a ? x.segment_a : x.segment_b;
    return pts[seg + 1] - pts[seg];
  };
  const Point2 tp = tangent(edge_plus);
  const Point2 tm = tangent(edge_minus);
  const auto [pu, pv] = proj.graph().edges[edge_plus];
  const auto [mu, mv] = proj.graph().edges[edge_minus];
  struct Ray { double angle; int vertex; };
  std::array<Ray, 4> rays{{{std::atan2(-tp.y, -tp.x), pu}, {std::atan2(tp.y, tp.x), pv},
                           {std::atan2(-tm.y, -tm.x), mu}, {std::atan2(tm.y, tm.x), mv}}};
  const double base = rays[0].angle;
  auto rel = [base](double a) {
    double r = std::fmod(a - base, kTwoPi);
    return r < 0 ? r + kTwoPi : r;
  };
  std::sort(rays.begin(), rays.end(), [&](const Ray& a, const Ray& b) { return rel(a.angle) < rel(b.angle); });
  for (int i = 0; i < 4; ++i) cp.endpoints[i] = rays[i].vertex;
  return cp;
}

CorrectorSolution corrector_strength(double j_plus, double j_minus, double beta) {
  if (!std::isfinite(j_plus) || !std::isfinite(j_minus) || !std::isfinite(beta)) {
    fail(ErrorCode::input, "corrector inputs must be finite");
  }
  CorrectorSolution c;
  c.j_plus = j_plus;
  c.j_minus = j_minus;
  c.beta = beta;
  const double tp = std::tanh(beta * j_plus);
  const double tm = std::tanh(beta * j_minus);
  c.y = std::tanh(2.0 * beta * j_plus) * std::tanh(2.0 * beta * j_minus);
  if (!(std::abs(c.y) < 1.0)) fail(ErrorCode::precondition, "corrector equation has no root inside the unit disk");
  const double root = std::sqrt(1.0 - c.y * c.y);
  c.t_r = c.y / (1.0 + root);
  c.r = std::atanh(c.t_r) / beta;
  if (beta == 0.0) c.r = 0.0;
  c.n = 1.0 - tp * tm * c.t_r;
  c.a = (tp - tm * c.t_r) / c.n;
  c.b = (tm - tp * c.t_r) / c.n;
  c.c = (tp * tm - c.t_r) / c.n;
  if (c.y != 0.0) {
    c.quadratic_residual = std::abs(c.t_r * c.t_r - (2.0 / c.y) * c.t_r + 1.0);
    const double other = (1.0 + root) / c.y;
    c.root_product_residual = std::abs(c.t_r * other - 1.0);
  }
  c.aha_residual = std::abs(c.c + c.a * c.b);
  return c;
}

QuasiPlanarResult quasi_planar_partition(const FaithfulProjection& proj, const KacWardMatrix& k,
                                         std::span<const double> j,
                                         std::span<const CrossedPair> pairs, double beta) {
  if (static_cast<int>(j.size()) != proj.edge_count()) fail(ErrorCode::input, "coupling count mismatch");
  std::vector<int> role(proj.edge_count(), -1);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    for (int e : {pairs[p].edge_plus, pairs[p].edge_minus}) {
      if (role[e] >= 0) fail(ErrorCode::geometry, "an edge belongs to two crossed pairs");
      role[e] = static_cast<int>(p);
    }
  }
  for (const auto& x : proj.crossings()) {
    if (role[x.edge_a] < 0 || role[x.edge_a] != role[x.edge_b]) {
      fail(ErrorCode::geometry, "projection is not quasi-planar with the declared crossed pairs: edges " +
                                    std::to_string(proj.edge_id(x.edge_a)) + " and " +
                                    std::to_string(proj.edge_id(x.edge_b)) + " cross");
    }
  }
  for (const auto& cp : pairs) {
    if (proj.crossing_count(cp.edge_plus, cp.edge_minus) != 1) {
      fail(ErrorCode::geometry, "crossed pair " + std::to_string(cp.alpha) + " does not cross exactly once");
    }
  }
  QuasiPlanarResult out;
  out.weights.resize(j.size());
  double log_c = proj.vertex_count() * std::log(2.0);
  for (std::size_t e = 0; e < j.size(); ++e) {
    out.weights[e] = std::tanh(beta * j[e]);
    log_c += log_cosh(beta * j[e]);
  }
  double log_n = 0.0;
  for (const auto& cp : pairs) {
    const auto sol = corrector_strength(j[cp.edge_plus], j[cp.edge_minus], beta);
    out.weights[cp.edge_plus] = sol.a;
    out.weights[cp.edge_minus] = sol.b;
    log_c += log_cosh(beta * sol.r);
    log_n += std::log(sol.n);
    out.correctors.push_back(sol);
  }
  const SqrtDet p = sqrt_det_kw(k, out.weights);
  if (p.sign <= 0) fail(ErrorCode::numeric, "corrected determinant square root is not positive");
  const double log_zt = p.log_abs + log_n;
  out.z_tilde = std::exp(log_zt);
  out.log_z = log_zt + log_c;
  out.z = std::exp(out.log_z);
  return out;
}

}  // namespace kw
