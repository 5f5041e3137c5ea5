#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qgf/design.hpp"
#include "qgf/scattering.hpp"

using namespace qgf;
using oracle::max_abs_diff;

namespace {

Layout kirchhoff_all_drains(int n) {
  Layout l;
  l.coupling = make_st(CMatrix::Zero(1, 1), CMatrix::Ones(1, n - 1));
  l.lines.lines.assign(static_cast<std::size_t>(n), Line::drain());
  l.lines.lines[0] = Line::input();
  l.lines.lines[1] = Line::output();
  return l;
}

}  // namespace

TEST_CASE("Dirichlet and Neumann scattering matrices") {
  const CMatrix I = CMatrix::Identity(3, 3);
  for (double E : {0.3, 2.0, 17.0}) {
    CHECK(max_abs_diff(scattering_general({I, CMatrix::Zero(3, 3)}, E).entries, -I) < 1e-14);
    CHECK(max_abs_diff(scattering_general({CMatrix::Zero(3, 3), I}, E).entries, I) < 1e-14);
  }
}

TEST_CASE("Kirchhoff star: -I + (2/n) J at every energy") {
  const int n = 4;
  const STCoupling c = make_st(CMatrix::Zero(1, 1), CMatrix::Ones(1, n - 1));
  const CMatrix expected = -CMatrix::Identity(n, n) + (2.0 / n) * CMatrix::Ones(n, n);
  for (double E : {0.1, 1.0, 9.0}) {
    CHECK(max_abs_diff(scattering_general(st_to_general(c), E).entries, expected) < 1e-13);
    CHECK(max_abs_diff(scattering_st(c, E).entries, expected) < 1e-13);
  }
}

TEST_CASE("S = 0 makes the scattering matrix energy independent") {
  Sampler rng(21);
  for (int i = 0; i < 50; ++i) {
    const int n = rng.integer(2, 7);
    const int r = rng.integer(1, n);
    const STCoupling c = make_st(CMatrix::Zero(r, r), rng.matrix(r, n - r));
    CHECK(max_abs_diff(scattering_st(c, 0.2).entries, scattering_st(c, 40.0).entries) < 1e-12);
  }
  const STCoupling neumann = make_st(CMatrix::Zero(3, 3), CMatrix(3, 0));
  CHECK(max_abs_diff(scattering_st(neumann, 1.0).entries, CMatrix::Identity(3, 3)) < 1e-15);
}

TEST_CASE("ST formula agrees with the general pencil and is unitary") {
  Sampler rng(8);
  for (int i = 0; i < 500; ++i) {
    const auto l = oracle::random_layout(rng);
    const double E = rng.uniform(0.01, 20.0);
    const CMatrix st = scattering_st(l.coupling, E).entries;
    const CMatrix gen = scattering_general(st_to_general(l.coupling), E).entries;
    CHECK(max_abs_diff(st, gen) < 1e-9);
    const int n = l.coupling.n;
    CHECK(max_abs_diff(st.adjoint() * st, CMatrix::Identity(n, n)) < 1e-10);
  }
}

TEST_CASE("nothing to eliminate on a two-line vertex") {
  const STCoupling c = make_st(CMatrix::Constant(1, 1, 0.7), CMatrix::Constant(1, 1, cplx(0.3, -1.2)));
  const LineConfig lines{{Line::input(), Line::output()}};
  const DissipativeBC d = reduce_vertex(c, lines, 1.3);
  const GeneralBC bc = st_to_general(c);
  CHECK(max_abs_diff(d.A, bc.A) < 1e-15);
  CHECK(max_abs_diff(d.B, bc.B) < 1e-15);
}

TEST_CASE("r = 2 reduction gives psi'_io = (S - i T K T^*) psi_io") {
  Sampler rng(4);
  for (int i = 0; i < 50; ++i) {
    const int m = rng.integer(1, 5);
    const CMatrix S = rng.hermitian(2);
    const CMatrix T = rng.matrix(2, m);
    Layout l;
    l.coupling = make_st(S, T);
    l.lines.lines = {Line::input(), Line::output()};
    CMatrix K = CMatrix::Zero(m, m);
    const double E = rng.uniform(0.05, 8.0);
    for (int j = 0; j < m; ++j) {
      const double V = rng.coin() ? rng.potential() : 0.0;
      l.lines.lines.push_back(V > 0 ? Line::controller(V) : Line::drain());
      K(j, j) = momentum(E, V);
    }
    const DissipativeBC d = reduce_vertex(l.coupling, l.lines, E);
    const CMatrix generator = -d.B.partialPivLu().solve(d.A);
    CHECK(max_abs_diff(generator, S - kI * T * K * T.adjoint()) < 1e-10);
  }
}

TEST_CASE("r = 1 reduction matches the closed-form pair") {
  // A_diss = -[[s - i sum_j k_j |t_j|^2, 0], [-conj(t2), 1]], B_diss = [[1, t2], [0, 0]].
  R1Layout r1;
  r1.t = CRow(3);
  r1.t << cplx(0.5, 1.0), cplx(-1.0, 0.2), cplx(0.7, 0.0);
  r1.s = -0.4;
  r1.potentials = {2.0, 0.0};
  const Layout l = r1.build();
  const double E = 1.1;
  const DissipativeBC d = reduce_vertex(l.coupling, l.lines, E);

  const cplx k3 = momentum(E, 2.0), k4 = momentum(E, 0.0);
  CMatrix A(2, 2), B(2, 2);
  A << -(r1.s - kI * (k3 * std::norm(r1.t(1)) + k4 * std::norm(r1.t(2)))), 0.0, std::conj(r1.t(0)), -1.0;
  B << 1.0, r1.t(0), 0.0, 0.0;
  // same row space: the generator of the boundary condition must coincide
  CMatrix ours(2, 4), theirs(2, 4);
  ours << d.A, d.B;
  theirs << A, B;
  CMatrix stacked(4, 4);
  stacked << ours, theirs;
  CHECK(numerical_rank(stacked, 1e-10) == 2);
}

TEST_CASE("reduced scattering ignores row scaling") {
  Sampler rng(12);
  for (int i = 0; i < 100; ++i) {
    const auto l = oracle::random_layout(rng);
    const double E = rng.uniform(0.05, 10.0);
    DissipativeBC d = reduce_vertex(l.coupling, l.lines, E);
    const CMatrix base = dissipative_scattering(d).entries;
    CMatrix G = rng.matrix(2, 2);
    if (condition_number(G) > 1e6) continue;
    d.A = G * d.A;
    d.B = G * d.B;
    CHECK(max_abs_diff(dissipative_scattering(d).entries, base) < 1e-9);
  }
}

TEST_CASE("special transmission values") {
  SUBCASE("decoupled output") {
    LinDepLayout ld;
    ld.s = 0.3;
    ld.S2 = CRow::Constant(1, cplx(0.1, 0.4));
    ld.S4 = CMatrix::Constant(1, 1, -0.8);
    ld.T1 = CRow::Constant(2, cplx(1.0, -0.5));
    ld.t = 0.0;
    ld.T2 = CMatrix::Constant(1, 2, 0.6);
    ld.potentials2 = {1.5};
    ld.potentials3 = {0.0, 3.0};
    const Layout l = ld.build();
    for (double E : {0.2, 1.0, 2.5, 100.0}) CHECK(transmission(l.coupling, l.lines, E).P < 1e-28);
  }
  SUBCASE("maximal filter inside the band") {
    const Layout l = design_maximal(1.0, 1, 1, 0.0, MaximalVariant::Zero);
    for (double E : {0.1, 0.5, 0.9}) CHECK(transmission(l.coupling, l.lines, E).P == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("Kirchhoff with three lines") {
    const Layout l = kirchhoff_all_drains(3);
    for (double E : {0.3, 3.0}) CHECK(transmission(l.coupling, l.lines, E).P == doctest::Approx(4.0 / 9.0).epsilon(1e-12));
  }
  SUBCASE("two-line r = 1 with t2 = 1") {
    R1Layout r1{CRow::Constant(1, 1.0), 0.0, {}};
    const Layout l = r1.build();
    for (double E : {0.01, 1.0, 50.0}) CHECK(transmission(l.coupling, l.lines, E).P == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("0.16 passband coupling") {
    const Layout l = standard_layout(oracle::fig3_partition(), CMatrix::Zero(2, 2));
    CHECK(transmission(l.coupling, l.lines, 0.5).P == doctest::Approx(0.16).epsilon(1e-12));
  }
}

TEST_CASE("plane-wave oracle on textbook vertices") {
  const Layout k3 = kirchhoff_all_drains(3);
  const OracleSolution sol = full_solve_oracle(k3.coupling, k3.lines, 1.0);
  CHECK(sol.reflection.real() == doctest::Approx(-1.0 / 3.0));
  CHECK(std::abs(sol.reflection.imag()) < 1e-14);
  for (int j = 1; j < 3; ++j) CHECK(std::abs(sol.amplitudes[j] - 2.0 / 3.0) < 1e-14);
  CHECK(sol.flux_balance() == doctest::Approx(1.0));

  Layout dirichlet;
  dirichlet.coupling = make_st(CMatrix(0, 0), CMatrix(0, 3));
  dirichlet.lines.lines = {Line::input(), Line::output(), Line::drain()};
  const OracleSolution d = full_solve_oracle(dirichlet.coupling, dirichlet.lines, 2.0);
  CHECK(std::abs(d.reflection + 1.0) < 1e-14);
  CHECK(std::abs(d.amplitudes[1]) < 1e-14);
  CHECK(std::abs(d.amplitudes[2]) < 1e-14);

  const Layout maximal = design_maximal(1.0, 1, 1, 0.0, MaximalVariant::Zero);
  const OracleSolution m = full_solve_oracle(maximal.coupling, maximal.lines, 0.5);
  CHECK(std::norm(m.transmission) == doctest::Approx(0.25));
}

TEST_CASE("reduction agrees with the plane-wave oracle and conserves flux") {
  Sampler rng(99);
  int checked = 0;
  for (int i = 0; i < 500; ++i) {
    const auto l = oracle::random_layout(rng);
    const double E = rng.uniform(0.01, 12.0);
    const auto s = transmission(l.coupling, l.lines, E);
    const auto o = full_solve_oracle(l.coupling, l.lines, E);
    CHECK(std::abs(s.t - o.transmission) < 1e-8);
    CHECK(std::abs(s.r_refl - o.reflection) < 1e-8);
    CHECK(std::norm(s.t) + std::norm(s.r_refl) <= 1.0 + 1e-10);
    CHECK(o.flux_balance() == doctest::Approx(1.0).epsilon(1e-8));
    ++checked;
  }
  CHECK(checked == 500);
}

TEST_CASE("no loss without open auxiliary channels") {
  R1Layout r1{CRow::Constant(2, cplx(0.4, 0.9)), 0.6, {5.0}};
  const Layout l = r1.build();
  for (double E : {0.5, 2.0, 4.9}) {
    const auto s = transmission(l.coupling, l.lines, E);
    CHECK(std::norm(s.t) + std::norm(s.r_refl) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("error reporting") {
  const Layout l = kirchhoff_all_drains(3);
  CHECK_THROWS_AS(transmission(l.coupling, l.lines, 0.0), Error);
  CHECK_THROWS_AS(scattering_st(l.coupling, -1.0), Error);
  LineConfig no_output{{Line::input(), Line::drain(), Line::drain()}};
  try {
    reduce_vertex(l.coupling, no_output, 1.0);
    FAIL("expected InvalidLines");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidLines);
  }
}
