#include <doctest.h>

#include <cmath>

#include "kacward/corpus.hpp"
#include "kacward/error.hpp"
#include "kacward/oracle.hpp"

using namespace kw;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

const std::vector<double> kMixed{0.7, -0.4, 1.1, 0.2, -0.9, 0.5, 0.3, -0.6, 0.8, -0.2, 0.4, 0.6};

// hub with three triangles around it
ProjectionSpec three_petals() {
  ProjectionSpec s;
  s.vertices.push_back({0, {0, 0}});
  for (int k = 0; k < 6; ++k) {
    const double a = kTwoPi * k / 6 + 0.2;
    s.vertices.push_back({k + 1, {std::cos(a), std::sin(a)}});
  }
  std::int64_t id = 0;
  for (int t = 0; t < 3; ++t) {
    const int p = 1 + 2 * t, q = 2 + 2 * t;
    s.edges.push_back({id++, 0, p, {}});
    s.edges.push_back({id++, p, q, {}});
    s.edges.push_back({id++, q, 0, {}});
  }
  return s;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("closed-form partition functions") {
  SpinModel one;
  one.vertex_count = 1;
  one.h = 0.7;
  one.beta = 1.3;
  CHECK(brute_force_Z(one).z == doctest::Approx(2 * std::cosh(1.3 * 0.7)).epsilon(1e-15));
  SpinModel edge;
  edge.vertex_count = 2;
  edge.pairs = {{0, 1, 0.8}};
  edge.beta = 1.0;
  CHECK(brute_force_Z(edge).z == doctest::Approx(4 * std::cosh(0.8)).epsilon(1e-15));
  const std::vector<int> both{0, 1};
  CHECK(brute_force_correlation(edge, both) == doctest::Approx(std::tanh(0.8)).epsilon(1e-15));
  CHECK(brute_force_correlation(edge, {}) == doctest::Approx(1.0));
}

TEST_CASE("frozen spin sums on grids") {
  FaithfulProjection g33(grid_projection(3, 3));
  const std::vector<double> ones(12, 1.0);
  CHECK(rel(brute_force_Z(model_from_projection(g33, ones, 0.3)).z, 899.2301883843604) < 1e-13);
  CHECK(rel(brute_force_Z(model_from_projection(g33, kMixed, 0.8)).z, 2049.6444090966006) < 1e-13);

  FaithfulProjection g32(grid_projection(3, 2));
  const std::vector<double> j(7, 1.0);
  const auto model = model_from_projection(g32, j, 0.4);
  CHECK(std::abs(brute_force_correlation(model, std::vector<int>{0, 1}) - 0.4313583496885507) < 1e-14);
  CHECK(std::abs(brute_force_correlation(model, std::vector<int>{0, 5}) - 0.1650901898617108) < 1e-14);
}

TEST_CASE("multithreaded spin sums agree") {
  FaithfulProjection g(grid_projection(4, 4));
  std::vector<double> j(24);
  for (int e = 0; e < 24; ++e) j[e] = 0.9 - 0.07 * e;
  const auto model = model_from_projection(g, j, 0.6);
  const double z1 = brute_force_Z(model, 1).z;
  const double z4 = brute_force_Z(model, 4).z;
  CHECK(rel(z1, z4) < 1e-14);
}

TEST_CASE("even subgraph routes agree") {
  FaithfulProjection g(grid_projection(3, 2));
  const std::vector<double> j{0.5, -0.3, 0.8, 0.2, 1.1, -0.7, 0.4};
  const double beta = 0.9;
  const auto model = model_from_projection(g, j, beta);
  std::vector<double> w;
  double log_c = g.vertex_count() * std::log(2.0);
  for (double x : j) {
    w.push_back(std::tanh(beta * x));
    log_c += std::log(std::cosh(beta * x));
  }
  const double zt = signed_even_sum(g, w, {});
  CHECK(rel(brute_force_Z(model).z / std::exp(log_c), zt) < 1e-12);
  for (const auto& a : {std::vector<int>{0, 1}, std::vector<int>{0, 5}, std::vector<int>{1, 2, 3, 4}}) {
    CHECK(std::abs(brute_force_correlation(model, a) - signed_even_sum(g, w, a) / zt) < 1e-12);
  }
}

TEST_CASE("odd spin sets and scale guards") {
  SpinModel big;
  big.vertex_count = 25;
  try {
    brute_force_Z(big);
    FAIL("expected scale error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::scale);
  }
  CHECK_THROWS_AS(pairing_parity_sum(7), Error);
}

TEST_CASE("gauge invariance") {
  auto rng = corpus_rng(31);
  for (int i = 0; i < 5; ++i) {
    FaithfulProjection g(random_planar_projection(9, 15, rng));
    std::vector<double> j(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) j[e] = 0.8 * std::sin(1.7 * e + i);
    const auto model = model_from_projection(g, j, 1.0);
    auto flipped = model;
    const int v = i % g.vertex_count();
    for (auto& p : flipped.pairs) {
      if (p.u == v || p.v == v) p.j = -p.j;
    }
    CHECK(rel(brute_force_Z(model).z, brute_force_Z(flipped).z) < 1e-13);
  }
}

TEST_CASE("pairing parity sums") {
  for (int n = 1; n <= 6; ++n) CHECK(pairing_parity_sum(n) == 1);
}

TEST_CASE("loop decomposition signs add to one") {
  FaithfulProjection c(grid_projection(2, 2));
  CHECK(kw_step1_check(c, 0xF) == 1);
  FaithfulProjection g(grid_projection(3, 3));
  // two squares sharing the center vertex: 1 - 1 + 1
  const EdgeSet bowtie = (1u << 0) | (1u << 7) | (1u << 2) | (1u << 6) | (1u << 3) | (1u << 11) | (1u << 5) | (1u << 10);
  CHECK(count_loop_decompositions(g.graph(), bowtie) == 3);
  CHECK(kw_step1_check(g, bowtie) == 1);
}

TEST_CASE("three cycles through a degree-6 vertex") {
  FaithfulProjection p(three_petals());
  CHECK(kw_step1_check(p, (EdgeSet{1} << 9) - 1) == 1);
}

TEST_CASE("every even subgraph of the 3x3 grid") {
  FaithfulProjection g(grid_projection(3, 3));
  int count = 0;
  enumerate_even_subgraphs(g.graph(), {}, [&](EdgeSet s) {
    CHECK(kw_step1_check(g, s) == 1);
    ++count;
  });
  CHECK(count == 16);
}

TEST_CASE("mixed disorder expectations") {
  FaithfulProjection g(grid_projection(3, 3));
  const auto model = model_from_projection(g, kMixed, 0.7);
  const Polyline loop{{{0.5, 0.5}, {1.5, 0.5}, {1.5, 1.5}, {0.5, 1.5}, {0.5, 0.5}}};
  CHECK(mixed_disorder_expectation(g, model, {}, std::vector<Polyline>{loop}) == doctest::Approx(1.0).epsilon(1e-13));

  const Polyline none{{{0.5, 0.5}, {0.6, 0.4}}};
  const std::vector<int> spins{0, 8};
  CHECK(mixed_disorder_expectation(g, model, spins, std::vector<Polyline>{none}) ==
        doctest::Approx(brute_force_correlation(model, spins)).epsilon(1e-13));

  const Polyline below{{{0.5, 0.5}, {1.5, 0.5}, {1.5, 1.5}}};
  const Polyline above{{{0.5, 0.5}, {0.5, 1.5}, {1.5, 1.5}}};
  const std::vector<int> with_center{4, 8};
  const double b = mixed_disorder_expectation(g, model, with_center, std::vector<Polyline>{below});
  const double a = mixed_disorder_expectation(g, model, with_center, std::vector<Polyline>{above});
  CHECK(std::abs(b) > 1e-3);
  CHECK(std::abs(a + b) < 1e-13);
  const double b0 = mixed_disorder_expectation(g, model, spins, std::vector<Polyline>{below});
  const double a0 = mixed_disorder_expectation(g, model, spins, std::vector<Polyline>{above});
  CHECK(std::abs(a0 - b0) < 1e-13);
}

TEST_CASE("homotopic lines give equal expectations") {
  FaithfulProjection g(grid_projection(3, 3));
  const auto model = model_from_projection(g, kMixed, 0.5);
  const Polyline straight{{{0.5, 0.5}, {1.5, 0.5}}};
  const Polyline wiggle{{{0.5, 0.5}, {0.8, 0.2}, {1.3, 0.8}, {1.5, 0.5}}};
  const auto p1 = disorder_parity(g, std::vector<Polyline>{straight});
  const auto p2 = disorder_parity(g, std::vector<Polyline>{wiggle});
  CHECK(p1 == p2);
  const std::vector<int> spins{0, 8};
  CHECK(mixed_disorder_expectation(g, model, spins, std::vector<Polyline>{straight}) ==
        doctest::Approx(mixed_disorder_expectation(g, model, spins, std::vector<Polyline>{wiggle})).epsilon(1e-14));
}

}
