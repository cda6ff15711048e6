// One line per acceptance criterion; exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "kacward/corpus.hpp"
#include "kacward/correlators.hpp"
#include "kacward/error.hpp"
#include "kacward/kac_ward.hpp"
#include "kacward/lattice.hpp"
#include "kacward/oracle.hpp"
#include "kacward/zeta.hpp"

using namespace kw;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

int hw_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Outcome criterion_1() {
  auto rng = corpus_rng(101);
  std::uniform_real_distribution<double> coupling(-1.0, 1.0);
  std::uniform_int_distribution<int> nv(5, 12);
  double worst = 0.0;
  int graphs = 0;
  while (graphs < 30) {
    const int v = nv(rng);
    FaithfulProjection proj(random_planar_projection(v, 3 * v - 6, rng));
    if (proj.edge_count() == 0) continue;
    const double beta = 1.0;
    std::vector<double> j(proj.edge_count());
    for (auto& x : j) x = coupling(rng);
    const auto k = build_kac_ward(proj);
    const double z = planar_partition_function(proj, k, j, beta).z;
    const double bf = brute_force_Z(model_from_projection(proj, j, beta), hw_threads()).z;
    worst = std::max(worst, rel(z, bf));
    ++graphs;
  }
  return {worst <= 1e-10, std::to_string(graphs) + " graphs, max rel err " + fmt("%.2e", worst)};
}

Outcome criterion_2() {
  std::vector<ProjectionSpec> specs{k4_projection(), k5_projection(), k33_projection()};
  auto rng = corpus_rng(102);
  int random = 0;
  while (random < 10) {
    auto s = random_crossing_projection(7, 12, rng);
    FaithfulProjection p(s);
    if (p.crossings().empty()) continue;
    specs.push_back(std::move(s));
    ++random;
  }
  std::uniform_real_distribution<double> wd(-1.5, 1.5);
  double worst = 0.0;
  int negative = 0, cases = 0;
  auto check = [&](const FaithfulProjection& proj, const KacWardMatrix& k, const std::vector<double>& w) {
    const double s = signed_even_sum(proj, w, {});
    const double p = sqrt_det_kw(k, w).value;
    worst = std::max(worst, std::abs(p - s) / (1.0 + std::abs(s)));
    negative += s < 0;
    ++cases;
  };
  for (std::size_t i = 0; i < specs.size(); ++i) {
    FaithfulProjection proj(specs[i]);
    const auto k = build_kac_ward(proj);
    for (int rep = 0; rep < 3; ++rep) {
      std::vector<double> w(proj.edge_count());
      for (auto& x : w) x = wd(rng);
      check(proj, k, w);
    }
    if (i == 0) check(proj, k, {1, 1, 1, 1, 3, 3});
  }
  return {worst <= 1e-10 && negative > 0,
          std::to_string(cases) + " cases on " + std::to_string(specs.size()) + " drawings, " +
              std::to_string(negative) + " negative, max err " + fmt("%.2e", worst)};
}

Outcome criterion_3() {
  auto rng = corpus_rng(103);
  std::uniform_real_distribution<double> coupling(-1.0, 1.0);
  const std::vector<std::vector<int>> layouts{{0}, {3}, {5}, {0, 4}, {1, 3}, {2, 5}, {0, 2, 4}, {1, 3, 5}, {0, 1, 5}, {2, 3, 4}, {0, 5}};
  double worst = 0.0, quad = 0.0, aha = 0.0;
  int runs = 0;
  for (const auto& squares : layouts) {
    const auto inst = quasi_planar_grid(3, 4, squares);
    FaithfulProjection proj(inst.spec);
    const auto k = build_kac_ward(proj);
    std::vector<CrossedPair> pairs;
    for (const auto& s : inst.pairs) {
      pairs.push_back(make_crossed_pair(proj, static_cast<int>(s.alpha), proj.edge_index(s.edge_plus),
                                        proj.edge_index(s.edge_minus)));
    }
    std::vector<double> j(proj.edge_count());
    for (auto& x : j) x = coupling(rng);
    for (double beta : {0.3, 0.7, 1.2}) {
      const auto q = quasi_planar_partition(proj, k, j, pairs, beta);
      SpinModel model = model_from_projection(proj, j, beta);
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        model.four_spin.push_back({pairs[i].endpoints, q.correctors[i].r});
        quad = std::max(quad, q.correctors[i].quadratic_residual);
        aha = std::max(aha, q.correctors[i].aha_residual);
      }
      worst = std::max(worst, rel(q.z, brute_force_Z(model, hw_threads()).z));
      ++runs;
    }
  }
  return {worst <= 1e-9 && quad <= 1e-12 && aha <= 1e-12,
          std::to_string(layouts.size()) + " graphs x 3 beta, max rel err " + fmt("%.2e", worst) +
              ", corrector residuals " + fmt("%.1e", quad) + " / " + fmt("%.1e", aha)};
}

Outcome criterion_4() {
  auto rng = corpus_rng(104);
  std::uniform_real_distribution<double> ud(0.3, 0.5);
  const std::vector<int> lens{4, 8, 12, 16, 20, 24};
  int matrices = 0, latest = 0;
  bool ok = true;
  double worst_best = 0.0;
  while (matrices < 10) {
    const auto spec = random_planar_projection(6, 8, rng);
    FaithfulProjection proj(spec);
    if (proj.edge_count() > 8 || proj.space().max_degree() > 3) continue;
    if (enumerate_primitive_loops(proj.space(), 6).empty()) continue;
    const auto m = make_flow_matrix(random_flow_matrix(proj.space(), rng), proj.space());
    const double u = ud(rng);
    double prev = std::numeric_limits<double>::infinity();
    double best = prev;
    int reached = 0;
    for (int len : lens) {
      const auto r = zeta_truncated_product(m, proj.space(), u, len);
      // rounding floor of the product over r.classes factors
      const double floor = 10.0 * static_cast<double>(r.classes) * 2.220446049250313e-16 *
                           std::max(1.0, std::abs(r.determinant));
      if (r.residual > r.tail_bound + 1e-12) ok = false;
      if (r.residual > prev && r.residual > floor) ok = false;
      if (!reached && r.residual <= 1e-8) reached = len;
      prev = r.residual;
      best = std::min(best, r.residual);
    }
    if (!reached) ok = false;
    latest = std::max(latest, reached);
    worst_best = std::max(worst_best, best);
    ++matrices;
  }
  return {ok, std::to_string(matrices) + " flow matrices, below 1e-8 by L = " + std::to_string(latest) +
                  ", smallest residual at most " + fmt("%.2e", worst_best)};
}

// Star position inside one of the unit faces around a grid site.
Point2 random_star(int lx, int ly, int site, std::mt19937_64& rng) {
  const int x = site % lx, y = site / lx;
  std::vector<Point2> corners;
  for (int dx : {-1, 0}) {
    for (int dy : {-1, 0}) {
      if (x + dx >= 0 && x + dx + 1 < lx && y + dy >= 0 && y + dy + 1 < ly) corners.push_back({double(x + dx), double(y + dy)});
    }
  }
  std::uniform_int_distribution<std::size_t> pick(0, corners.size() - 1);
  std::uniform_real_distribution<double> off(0.15, 0.85);
  const Point2 c = corners[pick(rng)];
  return {c.x + off(rng), c.y + off(rng)};
}

Outcome criterion_5() {
  auto rng = corpus_rng(105);
  double worst = 0.0, dirac = 0.0;
  int placements = 0;
  for (int n : {3, 4}) {
    FaithfulProjection proj(grid_projection(n, n));
    const auto k = build_kac_ward(proj);
    std::uniform_int_distribution<int> site(0, n * n - 1);
    for (double bj : {0.2, 0.35, 0.5}) {
      const std::vector<double> w(proj.edge_count(), std::tanh(bj));
      const auto g = resolvent(k, w);
      dirac = std::max(dirac, dirac_residual(g));
      int done = 0;
      while (done < 10) {
        const int x1 = site(rng), x2 = site(rng);
        if (x1 == x2) continue;
        const OrderDisorderPair p1{x1, random_star(n, n, x1, rng)};
        const OrderDisorderPair p2{x2, random_star(n, n, x2, rng)};
        if (distance(p1.star, p2.star) < 0.05) continue;
        try {
          const auto middle = straight_link(proj, p1, p2);
          const double v = order_disorder_two_point(proj, w, g, x1, x2, middle).value;
          const double o = oracle_two_point(proj, w, x1, x2, middle);
          worst = std::max(worst, std::abs(v - o));
          ++done;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::geometry) throw;
        }
      }
      placements += done;
    }
  }
  return {worst <= 1e-9 && dirac <= 1e-10, std::to_string(placements) + " placements, max err " + fmt("%.2e", worst) +
                                               ", max Dirac residual " + fmt("%.2e", dirac)};
}

Outcome criterion_6() {
  FaithfulProjection proj(grid_projection(4, 4));
  const std::vector<double> w(proj.edge_count(), std::tanh(0.3));
  const auto g = resolvent(build_kac_ward(proj), w);
  const OrderDisorderPair mu0{0, {0.4, 0.3}};
  double worst = 0.0;
  int edges = 0;
  for (int e = 0; e < proj.edge_count(); ++e) {
    const auto [u, v] = proj.graph().edges[e];
    const Point2 a = proj.position(u), b = proj.position(v);
    const bool boundary = (a.x == b.x && (a.x == 0 || a.x == 3)) || (a.y == b.y && (a.y == 0 || a.y == 3));
    if (boundary || u == mu0.site || v == mu0.site) continue;
    const auto d = dotsenko_check(proj, w, g, dotsenko_placement(proj, e, mu0.star), mu0);
    worst = std::max({worst, d.residual_1, d.residual_2});
    ++edges;
  }
  return {edges >= 5 && worst <= 1e-9, std::to_string(edges) + " interior edges, max residual " + fmt("%.2e", worst)};
}

Outcome criterion_7() {
  FaithfulProjection proj(grid_projection(4, 4));
  const std::vector<double> w(proj.edge_count(), std::tanh(0.3));
  const auto g = resolvent(build_kac_ward(proj), w);
  const Point2 center{1.5, 1.5};
  const std::vector<OrderDisorderPair> four{{0, {0.3, 0.6}}, {3, {2.6, 0.3}}, {15, {2.7, 2.4}}, {12, {0.4, 2.7}}};
  const std::vector<OrderDisorderPair> six{{0, {0.3, 0.6}}, {1, {1.2, 0.2}}, {3, {2.6, 0.3}},
                                           {15, {2.7, 2.4}}, {14, {1.8, 2.8}}, {12, {0.4, 2.7}}};
  double worst = 0.0;
  bool ok = true;
  for (const auto* set : {&four, &six}) {
    const auto c = pfaffian_correlation_check(proj, w, g, *set, center);
    const double scaled = c.residual / (1.0 + std::abs(c.lhs));
    worst = std::max(worst, scaled);
    ok = ok && c.residual <= 1e-8 * (1.0 + std::abs(c.lhs));
  }
  return {ok, "2n = 4, 6, max scaled residual " + fmt("%.2e", worst)};
}

Outcome criterion_8() {
  bool ok = true;
  for (int n = 1; n <= 6; ++n) ok = ok && pairing_parity_sum(n) == 1;
  FaithfulProjection proj(grid_projection(3, 3));
  int subgraphs = 0, bad = 0;
  enumerate_even_subgraphs(proj.graph(), {}, [&](EdgeSet s) {
    bad += kw_step1_check(proj, s) != 1;
    ++subgraphs;
  });
  return {ok && bad == 0, "pairing parity n = 1..6, " + std::to_string(subgraphs) + " even subgraphs, " +
                              std::to_string(bad) + " failures"};
}

Outcome criterion_9() {
  const double wc = std::sqrt(2.0) - 1.0;
  // (a)
  const double w = 0.3;
  const EdgeMatrix k2 = periodic_kac_ward_dense(2);
  const double dense = det(EdgeMatrix::Identity(16, 16) - w * k2).real();
  const double blocks = std::exp(4.0 * torus_log_det_per_site(TorusSpec{2, 1.0, std::atanh(w)}).per_site);
  const double a = std::abs(dense - blocks);
  // (b)
  double b = 0.0;
  for (int L : {2, 3}) b = std::max(b, handle_parity_check(L, std::atanh(0.4), 1.0).residual);
  // (c)
  double c = 0.0;
  for (double bj : {0.2, 0.6}) {
    c = std::max(c, std::abs(onsager_pressure(bj, 1.0) - torus_pressure(TorusSpec{256, 1.0, bj}, hw_threads())));
  }
  // (d)
  const double d = onsager_pressure(1e-4, 1.0) - std::log(2.0);
  // (e)
  const Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity() - fourier_block(wc, 0.0, 0.0);
  const double e = std::abs(m.determinant());
  const bool ok = a <= 1e-10 && b <= 1e-10 && c <= 1e-6 && d <= 1e-6 && e <= 1e-12;
  return {ok, "(a) " + fmt("%.1e", a) + " (b) " + fmt("%.1e", b) + " (c) " + fmt("%.1e", c) + " (d) " +
                  fmt("%.1e", d) + " (e) " + fmt("%.1e", e)};
}

Outcome criterion_10() {
  FaithfulProjection proj(grid_projection(8, 8));
  auto rng = corpus_rng(110);
  const auto trails = random_trails(proj, 200, 80, rng);
  int failures = 0, crossing = 0;
  for (const auto& t : trails) {
    const auto g = loop_geometry(proj, t);
    const int lhs = g.win % 2 == 0 ? 1 : -1;
    const int rhs = g.crossings % 2 == 0 ? -1 : 1;
    failures += lhs != rhs;
    crossing += g.crossings > 0;
  }
  return {trails.size() >= 100 && failures == 0, std::to_string(trails.size()) + " loops (" +
                                                     std::to_string(crossing) + " self-crossing), " +
                                                     std::to_string(failures) + " failures"};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{criterion_1, criterion_2, criterion_3, criterion_4,
                                                       criterion_5, criterion_6, criterion_7, criterion_8,
                                                       criterion_9, criterion_10};
  std::printf("corpus seed %llu\n", static_cast<unsigned long long>(corpus_seed()));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    std::printf("criterion %2zu: %s  %s  [%.2f s]\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
