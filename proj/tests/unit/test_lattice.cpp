#include <doctest.h>

#include <cmath>

#include "kacward/error.hpp"
#include "kacward/kac_ward.hpp"
#include "kacward/lattice.hpp"

using namespace kw;

namespace {

double frozen_onsager(double bj) {
  if (bj == 0.2) return 0.7345308122763262;
  if (bj == 0.6) return 1.2101323882884127;
  return 0.6931471905599453;
}

}  // namespace

TEST_SUITE("lattice") {

TEST_CASE("torus spec") {
  TorusSpec s{4, 1.0, 0.5};
  CHECK(s.w() == doctest::Approx(std::tanh(0.5)));
  CHECK(s.y() == doctest::Approx(std::sinh(1.0)));
  CHECK_THROWS_AS(check_torus_spec(TorusSpec{1, 1.0, 0.5}), Error);
  CHECK_THROWS_AS(check_torus_spec(TorusSpec{4, 1.0, std::nan("")}), Error);
}

TEST_CASE("zero coupling gives zero log det") {
  const auto r = torus_log_det_per_site(TorusSpec{6, 1.0, 0.0});
  CHECK(r.per_site == 0.0);
  CHECK_FALSE(r.singular);
  CHECK(torus_pressure(TorusSpec{6, 1.0, 0.0}) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("Fourier block determinant matches the closed form") {
  for (double w : {0.1, 0.3, 0.7, -0.4}) {
    for (const auto& k : {std::array<double, 2>{0.3, 1.1}, {2.0, 0.5}, {0.0, 0.0}, {kPi, kPi / 2}}) {
      const Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity() - fourier_block(w, k[0], k[1]);
      CHECK(std::abs(m.determinant() - cplx(block_det_closed_form(w, k[0], k[1]), 0.0)) < 1e-13);
    }
  }
}

TEST_CASE("dense periodic determinant matches frozen values and the block product") {
  const double w = 0.3;
  const double frozen[] = {0.309302388703152, 0.609388370608323, 0.947332616291825};
  for (int L : {2, 3, 4}) {
    const EdgeMatrix k = periodic_kac_ward_dense(L);
    CHECK(k.rows() == 4 * L * L);
    const cplx d = det(EdgeMatrix::Identity(k.rows(), k.cols()) - w * k);
    CHECK(std::abs(d.imag()) < 1e-12);
    CHECK(std::abs(d.real() - frozen[L - 2]) < 1e-12);
    const auto block = torus_log_det_per_site(TorusSpec{L, 1.0, std::atanh(w)});
    CHECK(std::abs(std::exp(block.per_site * L * L) - d.real()) < 1e-10);
    CHECK(block.max_closed_form_deviation <= 1e-13);
  }
}

TEST_CASE("2x2 torus has a 16x16 oriented-edge matrix") {
  const auto t = torus_graph(2);
  CHECK(t.graph.vertex_count == 4);
  CHECK(t.graph.edges.size() == 8);
  int h1 = 0, h2 = 0;
  for (char c : t.handle_1) h1 += c;
  for (char c : t.handle_2) h2 += c;
  CHECK(h1 == 2);
  CHECK(h2 == 2);
  CHECK(periodic_kac_ward_dense(2).rows() == 16);
}

TEST_CASE("handle parity identity") {
  const double frozen[] = {0.08827136, 0.1659697017601};
  for (int L : {2, 3}) {
    const auto r = handle_parity_check(L, std::atanh(0.4), 1.0);
    CHECK(std::abs(r.signed_sum - frozen[L - 2]) < 1e-12);
    CHECK(r.residual <= 1e-10);
    CHECK(r.square_residual <= 1e-10);
    CHECK(r.unsigned_sum > r.signed_sum);
  }
  try {
    handle_parity_check(4, 0.4, 1.0);
    FAIL("expected scale error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::scale);
  }
}

TEST_CASE("critical point") {
  const double bc = critical_beta(1.0);
  CHECK(bc == doctest::Approx(0.5 * std::log(1.0 + std::sqrt(2.0))).epsilon(1e-15));
  CHECK(std::sinh(2 * bc) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::tanh(bc) == doctest::Approx(std::sqrt(2.0) - 1).epsilon(1e-15));
  CHECK(critical_beta(2.0) == doctest::Approx(bc / 2));
  CHECK(is_critical(bc, 1.0));
  CHECK_FALSE(is_critical(bc * 1.001, 1.0));
  CHECK_THROWS_AS(critical_beta(0.0), Error);
  CHECK_THROWS_AS(critical_beta(-1.0), Error);
}

TEST_CASE("Onsager integral against an independent one-dimensional quadrature") {
  for (double bj : {0.2, 0.6, 1e-4}) {
    CHECK(std::abs(onsager_pressure(bj, 1.0) - frozen_onsager(bj)) < 1e-12);
  }
  CHECK(onsager_pressure(0.0, 1.0) == doctest::Approx(std::log(2.0)));
  try {
    onsager_pressure(critical_beta(1.0), 1.0);
    FAIL("expected precondition error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::precondition);
  }
}

TEST_CASE("Onsager pressure approaches the critical closed form") {
  const double bc = critical_beta(1.0);
  const double closed = 0.9296953983416103;
  const double below = onsager_pressure(bc * (1 - 1e-6), 1.0, 4096);
  const double above = onsager_pressure(bc * (1 + 1e-6), 1.0, 4096);
  CHECK(std::abs(below - closed) < 1e-5);
  CHECK(std::abs(above - closed) < 1e-5);
}

TEST_CASE("torus pressure converges to the Onsager integral") {
  for (double bj : {0.2, 0.6}) {
    double prev = 1e300;
    for (int L : {8, 16, 32, 64}) {
      const double diff = std::abs(torus_pressure(TorusSpec{L, 1.0, bj}) - onsager_pressure(bj, 1.0));
      CHECK((diff < prev || diff < 1e-14));
      prev = diff;
    }
    CHECK(prev < 1e-10);
  }
}

TEST_CASE("thread count does not change the per-site log det") {
  const TorusSpec s{48, 1.0, 0.37};
  const double one = torus_log_det_per_site(s, 1).per_site;
  for (int t : {2, 3, 8}) CHECK(torus_log_det_per_site(s, t).per_site == one);
}

TEST_CASE("critical torus with the zero mode is singular") {
  const TorusSpec s{4, 1.0, critical_beta(1.0)};
  const auto r = torus_log_det_per_site(s);
  CHECK(r.singular);
  CHECK(std::abs(r.k0_block_det) < 1e-12);
  try {
    torus_pressure(s);
    FAIL("expected precondition error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::precondition);
  }
}

}
