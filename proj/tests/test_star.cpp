#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "starflow/laplacian.hpp"
#include "starflow/matrix_obs.hpp"
#include "starflow/parse.hpp"
#include "starflow/rng.hpp"

using namespace starflow;

namespace {

const Backend kRat = Backend::exact_rational;
const Backend kFlt = Backend::float64;

Scalar q(long n, long d = 1) { return Scalar::ratio(n, d, kRat); }
Scalar iu() { return Scalar::imaginary_unit(kRat); }

FormalSeries dar(const std::string& s, int order = 6) {
  return parse_expression(s, FrameId::darboux, kRat, order);
}
FormalSeries zn(const std::string& s, int order = 6) {
  return parse_expression(s, FrameId::complex_normal, kRat, order);
}
FormalSeries zf(const std::string& s, int order = 6) {
  return parse_expression(s, FrameId::complex_factor, kRat, order);
}

}  // namespace

TEST_CASE("weyl product on canonical coordinates") {
  CHECK(weyl_star(dar("qS"), dar("pS")) == dar("qS*pS + 1/2*i*hbar"));
  CHECK(weyl_star(dar("pS"), dar("qS")) == dar("qS*pS - 1/2*i*hbar"));
  CHECK(weyl_star(dar("qS"), dar("qB")) == dar("qS*qB"));
  // unit and linearity
  FormalSeries f = dar("qS^2*pB - 3*qB");
  CHECK(weyl_star(dar("1"), f) == f);
  CHECK(weyl_star(f, dar("1")) == f);
  // commutator [qS, pS] = i hbar, and bath block likewise
  StarProduct w = StarProduct::weyl();
  CHECK(star_commutator(w, dar("qS"), dar("pS")) == dar("i*hbar"));
  CHECK(star_commutator(w, dar("qB"), dar("pB")) == dar("i*hbar"));
  CHECK(star_commutator(w, dar("qS"), dar("pB")).is_zero());
}

TEST_CASE("weyl product of factorizing functions splits into blocks") {
  // (qS qB) star (qS pB) = (qS star qS) (qB star pB)
  FormalSeries lhs = weyl_star(dar("qS*qB"), dar("qS*pB"));
  FormalSeries rhs = weyl_star(dar("qS"), dar("qS")) * weyl_star(dar("qB"), dar("pB"));
  CHECK(lhs == rhs);
  CHECK(lhs == dar("qS^2*qB*pB + 1/2*i*hbar*qS^2"));
}

TEST_CASE("weyl is the transported product on every frame") {
  // exact params with exact complex-normal transport: m=1, nu=2, nu_kappa=8
  Parameters p = Parameters::from_exact(1, 2, 8);
  FrameCatalog cat(p, kRat);
  Rng rng(101);
  for (int trial = 0; trial < 15; ++trial) {
    FormalSeries f = rng.series(FrameId::darboux, kRat, 6, 3, 4);
    FormalSeries g = rng.series(FrameId::darboux, kRat, 6, 3, 4);
    FormalSeries direct = weyl_star(f, g);
    FormalSeries via_zn = to_frame(
        weyl_star(to_frame(f, FrameId::complex_normal, cat),
                  to_frame(g, FrameId::complex_normal, cat)),
        FrameId::darboux, cat);
    CHECK(direct == via_zn);
  }
}

TEST_CASE("weyl associativity, hermitian property, first-order bracket (randomized)") {
  Rng rng(31);
  StarProduct w = StarProduct::weyl();
  for (int trial = 0; trial < 30; ++trial) {
    FormalSeries f = rng.series(FrameId::darboux, kRat, 6, 4, 5);
    FormalSeries g = rng.series(FrameId::darboux, kRat, 6, 4, 5);
    FormalSeries h = rng.series(FrameId::darboux, kRat, 6, 4, 5);
    CHECK(weyl_star(weyl_star(f, g), h) == weyl_star(f, weyl_star(g, h)));
    CHECK(weyl_star(f, g).conj() == weyl_star(g.conj(), f.conj()));
    // C1(f,g) - C1(g,f) = i {f,g} at polynomial level
    Polynomial f0 = rng.polynomial(FrameId::darboux, kRat, 4, 5);
    Polynomial g0 = rng.polynomial(FrameId::darboux, kRat, 4, 5);
    FormalSeries comm = star_commutator(w, FormalSeries::of_polynomial(f0, 2),
                                        FormalSeries::of_polynomial(g0, 2));
    CHECK(comm.at(0).is_zero());
    CHECK(comm.at(1) == poisson_bracket(f0, g0).scaled(iu()));
  }
}

TEST_CASE("wick product on complex normal coordinates") {
  StarProduct wt = StarProduct::wick_total();
  CHECK(wick_star(wt, zn("z1"), zn("zb1")) == zn("z1*zb1 + 2*hbar"));
  CHECK(wick_star(wt, zn("zb1"), zn("z1")) == zn("z1*zb1"));
  CHECK(star_commutator(wt, zn("z1"), zn("zb1")) == zn("2*hbar"));
  CHECK(star_commutator(wt, zn("z1"), zn("zb2")).is_zero());
  FormalSeries f = zn("z1^2*zb2 - z2");
  CHECK(wick_star(wt, f, zn("1")) == f);
  CHECK(wick_star(wt, zn("1"), f) == f);
}

TEST_CASE("wick associativity and hermitian property (randomized)") {
  Rng rng(37);
  StarProduct wt = StarProduct::wick_total();
  for (int trial = 0; trial < 30; ++trial) {
    FormalSeries f = rng.series(FrameId::complex_normal, kRat, 6, 4, 5);
    FormalSeries g = rng.series(FrameId::complex_normal, kRat, 6, 4, 5);
    FormalSeries h = rng.series(FrameId::complex_normal, kRat, 6, 4, 5);
    CHECK(wick_star(wt, wick_star(wt, f, g), h) == wick_star(wt, f, wick_star(wt, g, h)));
    CHECK(wick_star(wt, f, g).conj() == wick_star(wt, g.conj(), f.conj()));
  }
}

TEST_CASE("system and bath wick blocks act on their own pairs only") {
  StarProduct ws = StarProduct::wick_system();
  StarProduct wb = StarProduct::wick_bath();
  CHECK(wick_star(ws, zf("zS"), zf("zbS")) == zf("zS*zbS + 2*hbar"));
  CHECK(wick_star(ws, zf("zB"), zf("zbB")) == zf("zB*zbB"));  // untouched pair
  CHECK(wick_star(wb, zf("zB"), zf("zbB")) == zf("zB*zbB + 2*hbar"));
  CHECK(star_commutator(wb, zf("zB"), zf("zbB")) == zf("2*hbar"));
}

TEST_CASE("equivalence transformation on flat generators") {
  // m = 1, nu = 1, nu_kappa = 2: bath Laplacian transports exactly.
  Parameters p = Parameters::from_exact(1, 1, 2);
  FrameCatalog cat(p, kRat);
  LaplacianSpec bath = LaplacianSpec::bath();

  CHECK(apply_exp_laplacian(dar("qS"), bath, +1, &cat) == dar("qS"));
  CHECK(apply_exp_laplacian(dar("qB"), bath, +1, &cat) == dar("qB"));
  // S_B qB^2 = qB^2 + hbar/(2 m nu), here m nu = 1
  CHECK(apply_exp_laplacian(dar("qB^2"), bath, +1, &cat) == dar("qB^2 + 1/2*hbar"));
  CHECK(apply_exp_laplacian(dar("pB^2"), bath, +1, &cat) == dar("pB^2 + 1/2*hbar"));
  CHECK(apply_exp_laplacian(dar("qB*pB"), bath, +1, &cat) == dar("qB*pB"));
  // float backend agrees with hbar/(2 m nu) for generic parameters
  Parameters pf = Parameters::from_float(1.7, 0.6, 0.9);
  FrameCatalog catf(pf, kFlt);
  FormalSeries r = apply_exp_laplacian(
      parse_expression("qB^2", FrameId::darboux, kFlt, 6), bath, +1, &catf);
  CHECK(r.at(1).constant_term().real() ==
        doctest::Approx(1.0 / (2.0 * 1.7 * 0.6)).epsilon(1e-13));
  CHECK(r.at(1).constant_term().imag() == doctest::Approx(0.0));
}

TEST_CASE("exp-Laplacian inverse composes to the identity (randomized)") {
  Parameters p = Parameters::from_exact(1, 1, 2);
  FrameCatalog cat(p, kRat);
  Rng rng(41);
  for (auto spec : {LaplacianSpec::bath(), LaplacianSpec::system_and_bath()}) {
    for (int trial = 0; trial < 15; ++trial) {
      FormalSeries f = rng.series(FrameId::darboux, kRat, 6, 4, 5);
      FormalSeries s = apply_exp_laplacian(f, spec, +1, &cat);
      CHECK(apply_exp_laplacian(s, spec, -1, &cat) == f);
    }
  }
}

TEST_CASE("equivalence intertwines weyl and wick exactly") {
  // Frame-local in complex-normal coordinates: exact for any parameters.
  StarProduct wt = StarProduct::wick_total();
  LaplacianSpec total = LaplacianSpec::total();
  Rng rng(43);
  for (int trial = 0; trial < 25; ++trial) {
    FormalSeries f = rng.series(FrameId::complex_normal, kRat, 6, 4, 5);
    FormalSeries g = rng.series(FrameId::complex_normal, kRat, 6, 4, 5);
    FormalSeries lhs = apply_exp_laplacian(weyl_star(f, g), total, +1);
    FormalSeries rhs = wick_star(wt, apply_exp_laplacian(f, total, +1),
                                 apply_exp_laplacian(g, total, +1));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("total wick does not factor through the block wicks") {
  // qB wick-total qB carries hbar (1/(4 m nu) + 1/(4 m nu_kappa)), while the
  // bath-block wick gives hbar/(2 m nu); with m=1, nu=1, nu_kappa=2 these are
  // 3/8 vs 1/2.
  Parameters p = Parameters::from_float(1.0, 1.0, 1.5);
  FrameCatalog cat(p, kFlt);
  FormalSeries qB = parse_expression("qB", FrameId::darboux, kFlt, 6);
  StarProduct wt = StarProduct::wick_total();
  StarProduct wb = StarProduct::wick_bath();
  FormalSeries total = to_frame(wick_star(wt, qB, qB, &cat), FrameId::darboux, cat);
  FormalSeries block = to_frame(wick_star(wb, qB, qB, &cat), FrameId::darboux, cat);
  CHECK(total.at(1).constant_term().real() == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(block.at(1).constant_term().real() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(total.max_deviation(block) > 0.1);

  // same mismatch for the equivalence maps: S_total qB^2 vs (S_S x S_B) qB^2
  FormalSeries qB2 = parse_expression("qB^2", FrameId::darboux, kFlt, 6);
  FormalSeries s_total = apply_exp_laplacian(qB2, LaplacianSpec::total(), +1, &cat);
  FormalSeries s_blocks =
      apply_exp_laplacian(qB2, LaplacianSpec::system_and_bath(), +1, &cat);
  CHECK(s_total.at(1).constant_term().real() == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(s_blocks.at(1).constant_term().real() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("square-preserving witness reproduces the closed form") {
  Parameters p = Parameters::from_exact(1, 1, 2);
  FrameCatalog cat(p, kRat);
  auto report = square_preserving_witness(zf("zbB"), LaplacianSpec::bath(), &cat);
  CHECK(report.exact_match);
  CHECK(report.max_deviation == 0.0);
  // |S zbB|^2 + 2 hbar |d/dzbar S zbB|^2 = zB zbB + 2 hbar
  CHECK(report.lhs == zf("zB*zbB + 2*hbar"));
  REQUIRE(report.term_counts.size() >= 2);
  CHECK(report.term_counts[0] == 1);
  CHECK(report.term_counts[1] == 1);

  // holomorphic argument: S(zbB star zB) = zB zbB with no hbar correction
  auto rep2 = square_preserving_witness(zf("zB"), LaplacianSpec::bath(), &cat);
  CHECK(rep2.exact_match);
  CHECK(rep2.lhs == zf("zB*zbB"));
}

TEST_CASE("square-preserving witness is exact on random arguments") {
  Rng rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    // bath-block polynomial in (zB, zbB) only
    Polynomial p(FrameId::complex_factor, kRat);
    for (int t = 0; t < 4; ++t) {
      std::array<int, kDim> e{0, 0, 0, 0};
      e[2] = static_cast<int>(rng.uniform_int(0, 2));
      e[3] = static_cast<int>(rng.uniform_int(0, 2));
      p.add_term(Monomial(e), rng.small_scalar(kRat));
    }
    auto report = square_preserving_witness(FormalSeries::of_polynomial(p, 6),
                                            LaplacianSpec::bath());
    CHECK(report.exact_match);
  }
  for (int trial = 0; trial < 20; ++trial) {
    FormalSeries f = rng.series(FrameId::complex_normal, kRat, 6, 3, 4);
    auto report = square_preserving_witness(f, LaplacianSpec::total());
    CHECK(report.exact_match);
  }
  // a system-variable argument is rejected for the bath block
  CHECK_THROWS_AS(square_preserving_witness(zf("zS"), LaplacianSpec::bath()),
                  std::invalid_argument);
}

TEST_CASE("matrix star products") {
  StarProduct w = StarProduct::weyl();
  MatrixObservable id2 = MatrixObservable::identity(2, FrameId::darboux, kRat, 4);
  MatrixObservable a(2, FrameId::darboux, kRat, 4);
  a.set(0, 0, dar("qS", 4));
  a.set(0, 1, dar("pS", 4));
  a.set(1, 0, dar("qB", 4));
  a.set(1, 1, dar("i*pB", 4));
  CHECK(matrix_star(w, id2, a).max_deviation(a) == 0.0);
  CHECK(matrix_star(w, a, id2).max_deviation(a) == 0.0);

  // 1x1 matrices reduce to the scalar product
  MatrixObservable f1(1, FrameId::darboux, kRat, 4);
  MatrixObservable g1(1, FrameId::darboux, kRat, 4);
  f1.set(0, 0, dar("qS", 4));
  g1.set(0, 0, dar("pS", 4));
  CHECK(matrix_star(w, f1, g1).at(0, 0) == dar("qS*pS + 1/2*i*hbar", 4));

  // adjoint is a star-antihomomorphism: (A star B)^* = B^* star A^*
  Rng rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    MatrixObservable x(2, FrameId::darboux, kRat, 4);
    MatrixObservable y(2, FrameId::darboux, kRat, 4);
    for (size_t i = 0; i < 2; ++i)
      for (size_t j = 0; j < 2; ++j) {
        x.set(i, j, FormalSeries::of_polynomial(
                        rng.polynomial(FrameId::darboux, kRat, 3, 3), 4));
        y.set(i, j, FormalSeries::of_polynomial(
                        rng.polynomial(FrameId::darboux, kRat, 3, 3), 4));
      }
    CHECK(matrix_star(w, x, y).adjoint().max_deviation(
              matrix_star(w, y.adjoint(), x.adjoint())) == 0.0);
  }
}

TEST_CASE("star products transport operands when frames differ") {
  Parameters p = Parameters::from_exact(1, 2, 8);
  FrameCatalog cat(p, kRat);
  FormalSeries f = dar("qS");
  FormalSeries g = zn("z1");
  // without a catalog the cross-frame call must fail
  CHECK_THROWS_AS(weyl_star(f, g), std::invalid_argument);
  FormalSeries direct = weyl_star(f, g, &cat);
  FormalSeries manual = weyl_star(f, to_frame(g, FrameId::darboux, cat));
  CHECK(direct == manual);
}
