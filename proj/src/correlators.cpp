#include "kacward/correlators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "kacward/error.hpp"
#include "kacward/oracle.hpp"

namespace kw {

ResolventKernel resolvent(const KacWardMatrix& k, std::span<const double> w) {
  ResolventKernel r;
  r.kw = weighted(k.k, w);
  const auto n = r.kw.rows();
  const EdgeMatrix a = EdgeMatrix::Identity(n, n) - r.kw;
  Eigen::PartialPivLU<EdgeMatrix> lu(a);
  r.g = lu.inverse();
  r.condition = n == 0 ? 1.0 : one_norm(a) * one_norm(r.g);
  if (!std::isfinite(r.condition) || r.condition > kMaxResolventCondition) {
    fail(ErrorCode::numeric, "1 - KW is singular or ill-conditioned (condition " + std::to_string(r.condition) + ")");
  }
  r.residual = max_abs(a * r.g - EdgeMatrix::Identity(n, n));
  if (r.residual > 1e-10) {
    fail(ErrorCode::numeric, "resolvent residual " + std::to_string(r.residual) + " exceeds 1e-10");
  }
  return r;
}

double dirac_residual(const ResolventKernel& r) {
  const auto n = r.g.rows();
  return max_abs(r.g - r.kw * r.g - EdgeMatrix::Identity(n, n));
}

double conjugation_residual(const ResolventKernel& r, std::span<const double> w) {
  double worst = 0.0;
  const int n = static_cast<int>(r.g.rows());
  for (int e1 = 0; e1 < n; ++e1) {
    for (int e2 = 0; e2 < n; ++e2) {
      const cplx lhs = w[edge_of(e2)] * r.g(reversal(e2), reversal(e1));
      const cplx rhs = w[edge_of(e1)] * std::conj(r.g(e1, e2));
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

cplx path_expansion_G(const FaithfulProjection& proj, std::span<const double> w, int e1, int e2, int max_len) {
  const auto& space = proj.space();
  const int n = space.size();
  if (e1 < 0 || e1 >= n || e2 < 0 || e2 >= n) fail(ErrorCode::input, "edge index out of range");
  std::vector<std::vector<cplx>> step(n);
  double norm_inf = 0.0;
  for (int a = 0; a < n; ++a) {
    double row = 0.0;
    for (int b : space.successors(a)) {
      step[a].push_back(std::polar(w[edge_of(b)], 0.5 * turning_angle(proj.curve(a), proj.curve(b))));
      row += std::abs(w[edge_of(b)]);
    }
    norm_inf = std::max(norm_inf, row);
  }
  if (!(norm_inf < 1.0)) {
    fail(ErrorCode::precondition, "path expansion requires ||KW||_inf < 1, got " + std::to_string(norm_inf));
  }
  std::vector<cplx> v(n, 0.0), next(n);
  v[e1] = 1.0;
  cplx total = v[e2];
  for (int len = 1; len <= max_len; ++len) {
    std::fill(next.begin(), next.end(), cplx{0.0, 0.0});
    for (int a = 0; a < n; ++a) {
      if (v[a] == cplx{0.0, 0.0}) continue;
      const auto& succ = space.successors(a);
      for (std::size_t i = 0; i < succ.size(); ++i) next[succ[i]] += v[a] * step[a][i];
    }
    v.swap(next);
    total += v[e2];
  }
  return total;
}

Polyline joined_line(const FaithfulProjection& proj, int x1, int x2, const Polyline& middle) {
  if (x1 == x2) fail(ErrorCode::input, "order-disorder pairs need distinct sites");
  Polyline line;
  line.points.push_back(proj.position(x2));
  line.points.insert(line.points.end(), middle.points.begin(), middle.points.end());
  line.points.push_back(proj.position(x1));
  return line;
}

namespace {

void validate_stub(const FaithfulProjection& proj, int site, Point2 star) {
  const Polyline stub{{proj.position(site), star}};
  check_polyline(stub, "disorder stub");
  const auto counts = line_crossings(proj, stub, LineEnds::at_vertices);
  for (int c : counts) {
    if (c != 0) {
      fail(ErrorCode::geometry, "disorder endpoint is not in a face adjacent to vertex " +
                                    std::to_string(proj.vertex_id(site)));
    }
  }
}

Polyline validated_line(const FaithfulProjection& proj, int x1, int x2, const Polyline& middle) {
  if (middle.points.empty()) fail(ErrorCode::input, "disorder line has no points");
  Polyline line = joined_line(proj, x1, x2, middle);
  check_polyline(line, "disorder line");
  if (!is_simple(line)) fail(ErrorCode::geometry, "disorder line intersects itself");
  line_crossings(proj, line, LineEnds::at_vertices);
  validate_stub(proj, x2, middle.points.front());
  validate_stub(proj, x1, middle.points.back());
  return line;
}

// sum over e1 leaving the end of the line and e2 arriving at its start.
cplx line_sum(const FaithfulProjection& proj, std::span<const double> w, const ResolventKernel& g,
              const Polyline& line, int end_site, int start_site) {
  const auto& space = proj.space();
  cplx total{0.0, 0.0};
  for (int e1 : space.outgoing(end_site)) {
    const cplx a1 = std::polar(1.0, 0.5 * turning_angle(line, proj.curve(e1)));
    for (int d : space.outgoing(start_site)) {
      const int e2 = reversal(d);
      const cplx a2 = std::polar(1.0, 0.5 * turning_angle(proj.curve(e2), line));
      total += a1 * w[edge_of(e1)] * g.g(e1, e2) * a2;
    }
  }
  return total;
}

}  // namespace

TwoPointResult order_disorder_two_point(const FaithfulProjection& proj, std::span<const double> w,
                                        const ResolventKernel& g, int x1, int x2, const Polyline& middle) {
  if (!proj.is_planar()) fail(ErrorCode::geometry, "two-point formula requires a planar projection");
  TwoPointResult out;
  out.line = validated_line(proj, x1, x2, middle);
  out.theta = interior_turning(out.line);
  const cplx t = line_sum(proj, w, g, out.line, x1, x2);
  const cplx t_rev = line_sum(proj, w, g, out.line.reversed(), x2, x1);
  out.value = -0.5 * (t + t_rev).real();
  out.imag_part = 0.5 * std::abs((t + t_rev).imag());
  return out;
}

Polyline straight_link(const FaithfulProjection& proj, const OrderDisorderPair& p1, const OrderDisorderPair& p2) {
  const Point2 a = p2.star;
  const Point2 b = p1.star;
  const Point2 ab = b - a;
  const double len = norm(ab);
  if (len <= kGeomEps) fail(ErrorCode::geometry, "disorder endpoints coincide");
  const Point2 normal{-ab.y / len, ab.x / len};
  struct Bend { double t; Point2 p; };
  std::vector<Bend> bends;
  for (int v = 0; v < proj.vertex_count(); ++v) {
    const Point2 pv = proj.position(v);
    if (point_segment_distance(pv, a, b) > kGeomEps) continue;
    const double t = dot(pv - a, ab) / (len * len);
    const std::uint64_t h = static_cast<std::uint64_t>(proj.vertex_id(v)) * 0x9E3779B97F4A7C15ULL ^
                            static_cast<std::uint64_t>(proj.vertex_id(p1.site)) * 0xBF58476D1CE4E5B9ULL ^
                            static_cast<std::uint64_t>(proj.vertex_id(p2.site)) * 0x94D049BB133111EBULL;
    const double side = (h >> 63) ? 1.0 : -1.0;
    bends.push_back({t, pv + (side * 10.0 * kGeomEps) * normal});
  }
  std::sort(bends.begin(), bends.end(), [](const Bend& x, const Bend& y) { return x.t < y.t; });
  Polyline line;
  line.points.push_back(a);
  for (const auto& bend : bends) line.points.push_back(bend.p);
  line.points.push_back(b);
  return line;
}

double oracle_two_point(const FaithfulProjection& proj, std::span<const double> w, int x1, int x2,
                        const Polyline& middle) {
  const Polyline line = validated_line(proj, x1, x2, middle);
  const std::vector<int> boundary{std::min(x1, x2), std::max(x1, x2)};
  const std::vector<Polyline> lines{line};
  const double num = signed_even_sum(proj, w, boundary, lines, LineEnds::at_vertices);
  const double den = signed_even_sum(proj, w, {});
  return num / den;
}

DotsenkoPlacement dotsenko_placement(const FaithfulProjection& proj, int edge, Point2 x0_star) {
  const auto& pts = proj.curve(directed(edge, true)).points;
  if (pts.size() != 2) fail(ErrorCode::input, "Dotsenko placement requires a straight edge");
  const Point2 a = pts[0];
  const Point2 b = pts[1];
  const double len = distance(a, b);
  const Point2 t = (1.0 / len) * (b - a);
  const Point2 n{-t.y, t.x};
  const Point2 mid = 0.5 * (a + b);
  const Point2 c1 = mid + (0.3 * len) * n + (0.0137 * len) * t;
  const Point2 c2 = mid - (0.3 * len) * n + (0.0137 * len) * t;
  DotsenkoPlacement pl;
  pl.edge = edge;
  pl.a = proj.graph().edges[edge][0];
  pl.b = proj.graph().edges[edge][1];
  if (distance(c1, x0_star) <= distance(c2, x0_star)) {
    pl.p = c1;
    pl.q = c2;
  } else {
    pl.p = c2;
    pl.q = c1;
  }
  return pl;
}

DotsenkoResult dotsenko_check(const FaithfulProjection& proj, std::span<const double> w,
                              const ResolventKernel& g, const DotsenkoPlacement& pl,
                              const OrderDisorderPair& mu0) {
  const Polyline direct{{mu0.star, pl.p}};
  const Polyline hop{{mu0.star, pl.p, pl.q}};
  const auto hop_counts = line_crossings(proj, Polyline{{pl.p, pl.q}});
  for (int e = 0; e < proj.edge_count(); ++e) {
    if (hop_counts[e] != (e == pl.edge ? 1 : 0)) {
      fail(ErrorCode::geometry, "Dotsenko hop must cross exactly the chosen edge");
    }
  }
  DotsenkoResult r;
  r.w_e = w[pl.edge];
  r.chi[0] = order_disorder_two_point(proj, w, g, pl.a, mu0.site, direct).value;
  r.chi[1] = order_disorder_two_point(proj, w, g, pl.b, mu0.site, direct).value;
  r.chi[2] = order_disorder_two_point(proj, w, g, pl.b, mu0.site, hop).value;
  r.chi[3] = order_disorder_two_point(proj, w, g, pl.a, mu0.site, hop).value;
  r.residual_1 = std::abs(r.w_e * (r.chi[0] + r.chi[3]) - (r.chi[1] - r.chi[2]));
  r.residual_2 = std::abs(r.w_e * (r.chi[1] + r.chi[2]) - (r.chi[0] - r.chi[3]));
  return r;
}

double dual_weight(double w) {
  if (w == -1.0) fail(ErrorCode::precondition, "dual weight has a pole at W = -1");
  return (1.0 - w) / (1.0 + w);
}

namespace {

double pf_rec(const Eigen::MatrixXd& a, std::vector<int>& idx) {
  if (idx.empty()) return 1.0;
  const int first = idx[0];
  double total = 0.0;
  for (std::size_t j = 1; j < idx.size(); ++j) {
    const double x = a(first, idx[j]);
    if (x == 0.0) continue;
    std::vector<int> rest;
    for (std::size_t k = 1; k < idx.size(); ++k) {
      if (k != j) rest.push_back(idx[k]);
    }
    const double sign = (j % 2 == 1) ? 1.0 : -1.0;
    total += sign * x * pf_rec(a, rest);
  }
  return total;
}

}  // namespace

double pfaffian(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) fail(ErrorCode::input, "Pfaffian needs a square matrix");
  if (a.rows() % 2 != 0) fail(ErrorCode::input, "Pfaffian needs an even dimension");
  if (a.rows() > 12) fail(ErrorCode::scale, "Pfaffian expansion limited to 12 rows");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a + a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    fail(ErrorCode::input, "matrix is not antisymmetric");
  }
  std::vector<int> idx(a.rows());
  for (int i = 0; i < a.rows(); ++i) idx[i] = i;
  return pf_rec(a, idx);
}

PfaffianCheck pfaffian_correlation_check(const FaithfulProjection& proj, std::span<const double> w,
                                         const ResolventKernel& g, std::span<const OrderDisorderPair> pairs,
                                         Point2 x0_star) {
  const std::size_t n = pairs.size();
  if (n == 0 || n % 2 != 0) fail(ErrorCode::input, "Pfaffian check needs an even, nonzero number of pairs");
  std::vector<double> rel_ccw(n), rel_cw(n);
  const Point2 d0 = pairs[0].star - x0_star;
  const double a0 = std::atan2(d0.y, d0.x);
  for (std::size_t j = 0; j < n; ++j) {
    const Point2 d = pairs[j].star - x0_star;
    double r = std::fmod(std::atan2(d.y, d.x) - a0, kTwoPi);
    if (r < 0) r += kTwoPi;
    rel_ccw[j] = r;
    rel_cw[j] = r == 0.0 ? 0.0 : kTwoPi - r;
    for (std::size_t k = 0; k < j; ++k) {
      if (pairs[k].site == pairs[j].site) fail(ErrorCode::input, "order-disorder pairs must use distinct sites");
    }
  }
  bool ccw = true, cw = true;
  for (std::size_t j = 1; j < n; ++j) {
    ccw = ccw && rel_ccw[j] > rel_ccw[j - 1] + 1e-12;
    cw = cw && rel_cw[j] > rel_cw[j - 1] + 1e-12;
  }
  if (!ccw && !cw) fail(ErrorCode::geometry, "pairs are not listed in cyclic order around the grand-central point");

  std::vector<Polyline> lines;
  std::vector<int> sites;
  for (const auto& p : pairs) {
    validate_stub(proj, p.site, p.star);
    lines.push_back(Polyline{{p.star, x0_star}});
    sites.push_back(p.site);
  }
  std::sort(sites.begin(), sites.end());
  PfaffianCheck out;
  out.lhs = signed_even_sum(proj, w, sites, lines) / signed_even_sum(proj, w, {});
  out.pair_values = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      const Polyline middle{{pairs[k].star, x0_star, pairs[j].star}};
      const double v = order_disorder_two_point(proj, w, g, pairs[j].site, pairs[k].site, middle).value;
      out.pair_values(j, k) = v;
      out.pair_values(k, j) = -v;
    }
  }
  out.rhs = pfaffian(out.pair_values);
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace kw
