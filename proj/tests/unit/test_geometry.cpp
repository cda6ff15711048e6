#include <doctest.h>

#include <cmath>

#include "kacward/corpus.hpp"
#include "kacward/error.hpp"
#include "kacward/geometry.hpp"

using namespace kw;

namespace {

bool has_violation(const ValidationReport& r, ViolationKind k) {
  for (const auto& v : r.violations) {
    if (v.kind == k) return true;
  }
  return false;
}

ProjectionSpec two_segments(Point2 a, Point2 b, Point2 c, Point2 d) {
  ProjectionSpec s;
  s.vertices = {{0, a}, {1, b}, {2, c}, {3, d}};
  s.edges = {{0, 0, 1, {}}, {1, 2, 3, {}}};
  return s;
}

// Closed polygon through the given points as a cycle graph.
ProjectionSpec polygon(const std::vector<Point2>& pts) {
  ProjectionSpec s;
  const int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i) s.vertices.push_back({i, pts[i]});
  for (int i = 0; i < n; ++i) s.edges.push_back({i, i, (i + 1) % n, {}});
  return s;
}

std::vector<int> forward_cycle(int n) {
  std::vector<int> loop;
  for (int i = 0; i < n; ++i) loop.push_back(directed(i, true));
  return loop;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("unit square is valid and planar") {
  const auto spec = grid_projection(2, 2);
  const auto r = validate_projection(spec);
  CHECK(r.ok());
  CHECK(r.crossings.empty());
  FaithfulProjection proj(spec);
  CHECK(proj.is_planar());
}

TEST_CASE("two crossing segments record one crossing") {
  const auto r = validate_projection(two_segments({0, 0}, {2, 2}, {0, 2}, {2, 0}));
  CHECK(r.ok());
  REQUIRE(r.crossings.size() == 1);
  CHECK(r.crossings[0].point.x == doctest::Approx(1.0));
  CHECK(r.crossings[0].point.y == doctest::Approx(1.0));
  FaithfulProjection proj(two_segments({0, 0}, {2, 2}, {0, 2}, {2, 0}));
  CHECK(proj.crossing_count(0, 1) == 1);
  CHECK(proj.crossing_count(1, 0) == 1);
}

TEST_CASE("edge through a third vertex is rejected") {
  ProjectionSpec s;
  s.vertices = {{0, {0, 0}}, {1, {2, 0}}, {2, {1, 0}}};
  s.edges = {{0, 0, 1, {}}};
  const auto r = validate_projection(s);
  CHECK_FALSE(r.ok());
  CHECK(has_violation(r, ViolationKind::vertex_on_edge));
  try {
    FaithfulProjection proj(s);
    FAIL("expected a geometry error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::geometry);
  }
}

TEST_CASE("injected violations are flagged") {
  SUBCASE("self loop") {
    ProjectionSpec s;
    s.vertices = {{0, {0, 0}}};
    s.edges = {{0, 0, 0, {}}};
    CHECK(has_violation(validate_projection(s), ViolationKind::self_loop));
  }
  SUBCASE("coincident vertices") {
    ProjectionSpec s;
    s.vertices = {{0, {0, 0}}, {1, {0, 0}}};
    CHECK(has_violation(validate_projection(s), ViolationKind::coincident_vertices));
  }
  SUBCASE("endpoint mismatch") {
    ProjectionSpec s;
    s.vertices = {{0, {0, 0}}, {1, {1, 0}}};
    s.edges = {{0, 0, 1, {{0, 0}, {0.5, 0.5}, {1, 0.1}}}};
    CHECK(has_violation(validate_projection(s), ViolationKind::endpoint_mismatch));
  }
  SUBCASE("collinear overlap") {
    const auto r = validate_projection(two_segments({0, 0}, {2, 0}, {1, 0}, {3, 0}));
    CHECK_FALSE(r.ok());
  }
  SUBCASE("touching without crossing") {
    const auto r = validate_projection(two_segments({0, 0}, {2, 0}, {1, 0}, {1, 1}));
    CHECK_FALSE(r.ok());
  }
  SUBCASE("triple point") {
    ProjectionSpec s;
    s.vertices = {{0, {0, 0}}, {1, {2, 2}}, {2, {0, 2}}, {3, {2, 0}}, {4, {1, -1}}, {5, {1, 3}}};
    s.edges = {{0, 0, 1, {}}, {1, 2, 3, {}}, {2, 4, 5, {}}};
    CHECK(has_violation(validate_projection(s), ViolationKind::triple_point));
  }
  SUBCASE("unknown vertex id") {
    ProjectionSpec s;
    s.vertices = {{0, {0, 0}}, {1, {1, 0}}};
    s.edges = {{0, 0, 7, {}}};
    CHECK(has_violation(validate_projection(s), ViolationKind::bad_id));
  }
  SUBCASE("crossing at a polyline joint") {
    ProjectionSpec s;
    s.vertices = {{0, {0, 0}}, {1, {2, 0}}, {2, {1, -1}}, {3, {1, 1}}};
    s.edges = {{0, 0, 1, {{0, 0}, {1, 0}, {2, 0}}}, {1, 2, 3, {}}};
    CHECK_FALSE(validate_projection(s).ok());
  }
}

TEST_CASE("random planar drawings validate") {
  auto rng = corpus_rng(11);
  for (int i = 0; i < 20; ++i) {
    const auto spec = random_planar_projection(8, 14, rng);
    const auto r = validate_projection(spec);
    CHECK(r.ok());
    CHECK(r.crossings.empty());
  }
}

TEST_CASE("turning angles") {
  const Polyline east{{{0, 0}, {1, 0}}};
  const Polyline east2{{{1, 0}, {2, 0}}};
  const Polyline north{{{1, 0}, {1, 1}}};
  const Polyline south{{{1, 0}, {1, -1}}};
  const Polyline back{{{1, 0}, {0, 0}}};
  CHECK(turning_angle(east, east2) == doctest::Approx(0.0));
  CHECK(turning_angle(east, north) == doctest::Approx(kPi / 2));
  CHECK(turning_angle(east, south) == doctest::Approx(-kPi / 2));
  CHECK_THROWS_WITH(turning_angle(east, back), doctest::Contains("backtracking excluded"));
  CHECK_THROWS(turning_angle(east, Polyline{{{5, 5}, {6, 5}}}));
}

TEST_CASE("convex quadrilateral turns sum to 2 pi") {
  FaithfulProjection proj(polygon({{0, 0}, {3, 0}, {4, 2}, {-1, 3}}));
  double total = 0.0;
  for (int i = 0; i < 4; ++i) total += turning_angle(proj.curve(directed(i, true)), proj.curve(directed((i + 1) % 4, true)));
  CHECK(total == doctest::Approx(2 * kPi).epsilon(1e-12));
}

TEST_CASE("turning angle antisymmetry for straight edges") {
  auto rng = corpus_rng(12);
  const auto spec = random_planar_projection(9, 16, rng);
  FaithfulProjection proj(spec);
  const auto& space = proj.space();
  int pairs = 0;
  for (int a = 0; a < space.size(); ++a) {
    for (int b : space.successors(a)) {
      const double t1 = turning_angle(proj.curve(a), proj.curve(b));
      const double t2 = turning_angle(proj.curve(reversal(b)), proj.curve(reversal(a)));
      CHECK(std::abs(t1 + t2) < 1e-12);
      CHECK(t1 > -kPi);
      CHECK(t1 <= kPi);
      ++pairs;
    }
  }
  CHECK(pairs > 0);
}

TEST_CASE("curved edge accumulates interior turning") {
  // edge bends left by pi/2 twice inside its polyline
  const Polyline bent{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}};
  CHECK(interior_turning(bent) == doctest::Approx(kPi));
  const Polyline left{{{0, 1}, {0, 0.5}}};
  const Polyline right{{{0, 1}, {0, 2}}};
  CHECK(turning_angle(bent, left) == doctest::Approx(kPi + kPi / 2));
  CHECK(turning_angle(bent, right) == doctest::Approx(kPi / 2));
}

TEST_CASE("simple convex loop has win 1 and no crossings") {
  FaithfulProjection proj(polygon({{0, 0}, {2, 0}, {2, 1}, {0, 1}}));
  const auto g = loop_geometry(proj, forward_cycle(4));
  CHECK(std::abs(g.win) == 1);
  CHECK(g.crossings == 0);
  CHECK(g.rounding_residual < 1e-6);
}

TEST_CASE("figure eight has win 0 and one crossing") {
  FaithfulProjection proj(polygon({{0, 0}, {2, 2}, {2, 0}, {0, 2}}));
  const auto g = loop_geometry(proj, forward_cycle(4));
  CHECK(g.win == 0);
  CHECK(g.crossings == 1);
  CHECK(g.vertex_crossings == 0);
}

TEST_CASE("limacon loop winds twice with one crossing") {
  std::vector<Point2> pts;
  const int n = 16;
  for (int k = 0; k < n; ++k) {
    const double t = kTwoPi * k / n + 0.1;
    const double r = 0.6 + std::cos(t);
    pts.push_back({r * std::cos(t), r * std::sin(t)});
  }
  FaithfulProjection proj(polygon(pts));
  const auto g = loop_geometry(proj, forward_cycle(n));
  CHECK(std::abs(g.win) == 2);
  CHECK(g.crossings == 1);
  CHECK((g.win % 2 == 0 ? 1 : -1) == -(g.crossings % 2 == 0 ? 1 : -1));
}

TEST_CASE("loop repeating an edge is rejected") {
  FaithfulProjection proj(grid_projection(3, 2));
  const std::vector<int> square{directed(0, true), directed(5, true), directed(2, false), directed(4, false)};
  CHECK(std::abs(loop_geometry(proj, square).win) == 1);
  std::vector<int> twice = square;
  twice.insert(twice.end(), square.begin(), square.end());
  CHECK_THROWS_AS(loop_geometry(proj, twice), Error);
}

TEST_CASE("Whitney relation on random lattice trails") {
  FaithfulProjection proj(grid_projection(6, 6));
  auto rng = corpus_rng(10);
  const auto trails = random_trails(proj, 120, 60, rng);
  REQUIRE(trails.size() >= 100);
  int with_crossings = 0, even_win = 0;
  for (const auto& t : trails) {
    const auto g = loop_geometry(proj, t);
    const int lhs = g.win % 2 == 0 ? 1 : -1;
    const int rhs = -(g.crossings % 2 == 0 ? 1 : -1);
    CHECK(lhs == rhs);
    with_crossings += g.crossings > 0;
    even_win += g.win % 2 == 0;
  }
  CHECK(with_crossings > 0);
  CHECK(even_win > 0);
}

TEST_CASE("disorder line crossings") {
  FaithfulProjection proj(grid_projection(3, 3));
  const auto counts = line_crossings(proj, Polyline{{{0.5, 0.5}, {1.5, 0.6}}});
  int total = 0;
  for (int c : counts) total += c;
  CHECK(total == 1);
  CHECK_THROWS_AS(line_crossings(proj, Polyline{{{0.5, 0.5}, {1.5, 1.5}}}), Error);
  const auto at = line_crossings(proj, Polyline{{{0, 0}, {0.5, 0.4}}}, LineEnds::at_vertices);
  for (int c : at) CHECK(c == 0);
  CHECK_THROWS_AS(line_crossings(proj, Polyline{{{0, 0}, {0.5, 0.4}}}), Error);
}

TEST_CASE("polyline simplicity") {
  CHECK(is_simple(Polyline{{{0, 0}, {1, 0}, {1, 1}}}));
  CHECK_FALSE(is_simple(Polyline{{{0, 0}, {2, 0}, {2, 1}, {1, -1}}}));
}

}
