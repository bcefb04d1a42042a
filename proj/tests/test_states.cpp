#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <thread>
#include <vector>

#include "starflow/parse.hpp"
#include "starflow/rng.hpp"
#include "starflow/star.hpp"
#include "starflow/states.hpp"

using namespace starflow;

namespace {

const Backend kRat = Backend::exact_rational;
const Backend kFlt = Backend::float64;
const double kPi = std::acos(-1.0);

Parameters float_params() { return Parameters::from_float(1.0, 1.0, 1.5); }
Parameters exact_params() { return Parameters::from_exact(1, 1, 2); }

Polynomial constant_poly(const Scalar& c, FrameId f = FrameId::darboux) {
  Polynomial p(f, c.backend());
  p.add_term(Monomial({0, 0, 0, 0}), c);
  return p;
}

Monomial bath_mono(int dq, int dp) { return Monomial({0, 0, dq, dp}); }

FormalSeries const_series(Backend be, int order, const std::vector<Scalar>& coeffs) {
  FormalSeries s(FrameId::darboux, be, order);
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    s.set(static_cast<int>(k), constant_poly(coeffs[k]));
  return s;
}

FormalSeries one_series(Backend be, int order) {
  return FormalSeries::constant(FrameId::darboux, Scalar::one(be), order);
}

GaussianFamilyFunction unit_family(Backend be, int order) {
  return GaussianFamilyFunction(one_series(be, order),
                                one_series(be, order),
                                one_series(be, order));
}

Polynomial random_bath_poly(Rng& rng, Backend be, int max_deg, int terms) {
  Polynomial p(FrameId::darboux, be);
  for (int t = 0; t < terms; ++t) {
    int dq = static_cast<int>(rng.uniform_int(0, max_deg));
    int dp = static_cast<int>(rng.uniform_int(0, max_deg - dq));
    p.add_term(bath_mono(dq, dp), rng.small_scalar(be, true));
  }
  return p;
}

// hbar-expansion of (hbar / 2 m nu) coth(hbar beta nu / 2): the Laurent tail
// of coth contributes 1/(m nu^2 beta) at order 0 and c_n alpha^{2n-1} above.
std::vector<double> coth_moment_oracle(double beta, double m, double nu, int order) {
  static const double c[] = {1.0 / 3.0, -1.0 / 45.0, 2.0 / 945.0, -1.0 / 4725.0};
  double alpha = beta * nu / 2.0;
  std::vector<double> v(order + 1, 0.0);
  v[0] = 1.0 / (m * nu * nu * beta);
  for (int n = 1; 2 * n <= order && n <= 4; ++n)
    v[2 * n] = std::pow(alpha, 2 * n - 1) * c[n - 1] / (2.0 * m * nu);
  return v;
}

// 2 pi hbar e^{-u} / (1 - e^{-2u}), u = alpha hbar, as a series in hbar: the
// geometric closed form of the oscillator trace.
FormalSeries mu_golden(double beta, double nu, int order) {
  double alpha = beta * nu / 2.0;
  std::vector<Scalar> num(order + 1, Scalar::zero(kFlt));
  std::vector<Scalar> den(order + 1, Scalar::zero(kFlt));
  double nfac = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) nfac *= k;
    num[k] = Scalar::real_double(2.0 * kPi * std::pow(-alpha, k) / nfac);
    // (1 - e^{-2u}) / hbar
    double kfac = nfac * (k + 1);
    den[k] = Scalar::real_double(-std::pow(-2.0 * alpha, k + 1) / kfac);
  }
  return const_series(kFlt, order, num) * const_series(kFlt, order, den).inverse();
}

}  // namespace

TEST_CASE("gaussian family: construction guards and bath derivatives") {
  int N = 4;
  FormalSeries one = one_series(kRat, N);
  FormalSeries half = FormalSeries::constant(FrameId::darboux, Scalar::ratio(1, 2, kRat), N);

  Polynomial pre(FrameId::darboux, kRat);
  pre.add_term(Monomial({0, 0, 0, 0}), Scalar::one(kRat));
  pre.add_term(bath_mono(1, 0), Scalar::one(kRat));
  GaussianFamilyFunction g(FormalSeries::of_polynomial(pre, N), one, half);

  // d/dqB (1 + qB) e^{-qB^2 - pB^2/2} = (1 - 2 qB - 2 qB^2) e^{...}
  Polynomial dq(FrameId::darboux, kRat);
  dq.add_term(Monomial({0, 0, 0, 0}), Scalar::one(kRat));
  dq.add_term(bath_mono(1, 0), Scalar::integer(-2, kRat));
  dq.add_term(bath_mono(2, 0), Scalar::integer(-2, kRat));
  CHECK(g.derivative(2).prefactor() == FormalSeries::of_polynomial(dq, N));

  Polynomial dp(FrameId::darboux, kRat);
  dp.add_term(bath_mono(0, 1), Scalar::integer(-1, kRat));
  dp.add_term(bath_mono(1, 1), Scalar::integer(-1, kRat));
  CHECK(g.derivative(3).prefactor() == FormalSeries::of_polynomial(dp, N));

  // mixed derivatives commute
  CHECK(g.derivative(2).derivative(3).prefactor() ==
        g.derivative(3).derivative(2).prefactor());

  // guards
  FormalSeries sys = FormalSeries::variable(FrameId::darboux, 0, kRat, N);
  CHECK_THROWS_AS(GaussianFamilyFunction(sys, one, one), std::invalid_argument);
  FormalSeries neg =
      FormalSeries::constant(FrameId::darboux, Scalar::integer(-1, kRat), N);
  CHECK_THROWS_AS(GaussianFamilyFunction(one, neg, one), std::domain_error);
  FormalSeries qb = FormalSeries::variable(FrameId::darboux, 2, kRat, N);
  CHECK_THROWS_AS(GaussianFamilyFunction(one, qb, one), std::invalid_argument);
  FormalSeries nrm = FormalSeries::constant(FrameId::normal, Scalar::one(kRat), N);
  CHECK_THROWS_AS(GaussianFamilyFunction(nrm, nrm, nrm), std::invalid_argument);
  CHECK_THROWS_AS(g.derivative(0), std::invalid_argument);
}

TEST_CASE("gaussian family: hbar-dependent exponents canonicalize exactly") {
  int N = 4;
  // a = 1 + hbar, b = 1, P = 1: folding gives P = sum_k (-qB^2 hbar)^k / k!
  FormalSeries a(FrameId::darboux, kRat, N);
  a.set(0, constant_poly(Scalar::one(kRat)));
  a.set(1, constant_poly(Scalar::one(kRat)));
  GaussianFamilyFunction g(one_series(kRat, N), a, one_series(kRat, N));

  GaussianFamilyFunction c = g.canonicalized();
  CHECK(c.a() == one_series(kRat, N));
  FormalSeries want(FrameId::darboux, kRat, N);
  Scalar fac = Scalar::one(kRat);
  for (int k = 0; k <= N; ++k) {
    if (k > 0) fac = fac * Scalar::ratio(-1, k, kRat);
    Polynomial p(FrameId::darboux, kRat);
    p.add_term(bath_mono(2 * k, 0), fac);
    want.set(k, p);
  }
  CHECK(c.prefactor() == want);

  // order-k evaluation agrees with the analytic expansion of exp(-hbar qB^2)
  double qb = 0.7, pb = -0.3;
  double base = std::exp(-qb * qb - pb * pb);
  double kfac = 1.0;
  for (int k = 0; k <= N; ++k) {
    if (k > 0) kfac *= k;
    std::complex<double> got = g.evaluate_order(k, qb, pb);
    double expect = base * std::pow(-qb * qb, k) / kfac;
    CHECK(std::abs(got - expect) < 1e-12);
  }
}

TEST_CASE("weyl product with a gaussian weight: canonical commutator and associativity") {
  int N = 6;
  FormalSeries pre(FrameId::darboux, kRat, N);
  Polynomial p0(FrameId::darboux, kRat);
  p0.add_term(Monomial({0, 0, 0, 0}), Scalar::one(kRat));
  p0.add_term(bath_mono(1, 0), Scalar::one(kRat));
  pre.set(0, p0);
  pre.set(1, Polynomial(FrameId::darboux, kRat));
  Polynomial p1(FrameId::darboux, kRat);
  p1.add_term(bath_mono(0, 1), Scalar::ratio(1, 3, kRat));
  pre.set(1, p1);
  GaussianFamilyFunction g(pre, one_series(kRat, N),
                           FormalSeries::constant(FrameId::darboux,
                                                  Scalar::ratio(1, 2, kRat), N));

  // [qB, G]_star = i hbar dG/dpB, exactly
  FormalSeries qb = FormalSeries::variable(FrameId::darboux, 2, kRat, N);
  GaussianFamilyFunction comm = family_star(qb, g) - family_star(g, qb);
  FormalSeries ih = FormalSeries::hbar(FrameId::darboux, kRat, N)
                        .scaled(Scalar::imaginary_unit(kRat));
  CHECK(comm.prefactor() == g.derivative(3).times_series(ih).prefactor());

  // f star (g star G) == (f star g) star G for bath polynomials, both sides
  Polynomial fa(FrameId::darboux, kRat), fb(FrameId::darboux, kRat);
  fa.add_term(bath_mono(2, 0), Scalar::one(kRat));
  fb.add_term(bath_mono(0, 1), Scalar::one(kRat));
  Polynomial fc(FrameId::darboux, kRat), fd(FrameId::darboux, kRat);
  fc.add_term(bath_mono(1, 1), Scalar::one(kRat));
  fc.add_term(bath_mono(1, 0), Scalar::one(kRat));
  fd.add_term(bath_mono(0, 2), Scalar::one(kRat));
  fd.add_term(bath_mono(1, 0), Scalar::integer(-2, kRat));
  Polynomial fe(FrameId::darboux, kRat), ff(FrameId::darboux, kRat);
  fe.add_term(bath_mono(3, 0), Scalar::one(kRat));
  ff.add_term(bath_mono(1, 2), Scalar::one(kRat));
  Polynomial fg_(FrameId::darboux, kRat), fh(FrameId::darboux, kRat);
  fg_.add_term(bath_mono(1, 0), Scalar::one(kRat));
  fg_.add_term(bath_mono(0, 1), Scalar::imaginary_unit(kRat));
  fh.add_term(bath_mono(1, 0), Scalar::one(kRat));
  fh.add_term(bath_mono(0, 1), -Scalar::imaginary_unit(kRat));

  for (auto [pf, pg] : {std::pair{fa, fb}, {fc, fd}, {fe, ff}, {fg_, fh}}) {
    FormalSeries f = FormalSeries::of_polynomial(pf, N);
    FormalSeries h = FormalSeries::of_polynomial(pg, N);
    FormalSeries fh_star = weyl_star(f, h);

    GaussianFamilyFunction left = family_star(f, family_star(h, g));
    GaussianFamilyFunction right = family_star(fh_star, g);
    CHECK(left.prefactor() == right.prefactor());
    CHECK(left.a() == right.a());

    GaussianFamilyFunction rleft = family_star(family_star(g, f), h);
    GaussianFamilyFunction rright = family_star(g, fh_star);
    CHECK(rleft.prefactor() == rright.prefactor());

    GaussianFamilyFunction mixed = family_star(family_star(f, g), h);
    CHECK(mixed.prefactor() == family_star(f, family_star(g, h)).prefactor());
  }
}

TEST_CASE("star exponential: classical limit, parity, frozen second-order term") {
  int N = 6;
  Parameters p = exact_params();
  GaussianFamilyFunction e = star_exponential_closed_form(Scalar::one(kRat), p, N);

  // classical limit and Gaussian widths: a = beta m nu^2/2, b = beta/2m
  CHECK(e.prefactor().at(0) == constant_poly(Scalar::one(kRat)));
  CHECK(e.a() == FormalSeries::constant(FrameId::darboux, Scalar::ratio(1, 2, kRat), N));
  CHECK(e.b() == FormalSeries::constant(FrameId::darboux, Scalar::ratio(1, 2, kRat), N));

  // the prefactor is even in hbar
  CHECK(e.prefactor().at(1).is_zero());
  CHECK(e.prefactor().at(3).is_zero());
  CHECK(e.prefactor().at(5).is_zero());

  // hbar^2 coefficient: -beta^2 nu^2/8 + H_B beta^3 nu^2/12 at beta=m=nu=1
  Polynomial h2(FrameId::darboux, kRat);
  h2.add_term(Monomial({0, 0, 0, 0}), Scalar::ratio(-1, 8, kRat));
  h2.add_term(bath_mono(2, 0), Scalar::ratio(1, 24, kRat));
  h2.add_term(bath_mono(0, 2), Scalar::ratio(1, 24, kRat));
  CHECK(e.prefactor().at(2) == h2);

  // beta -> 0+ recovers the constant function 1
  GaussianFamilyFunction tiny =
      star_exponential_closed_form(Scalar::real_double(1e-7), float_params(), N);
  CHECK(tiny.prefactor().max_deviation(one_series(kFlt, N)) < 1e-10);
  CHECK(std::abs(tiny.a().at(0).constant_term().real() - 5e-8) < 1e-12);

  CHECK_THROWS_AS(star_exponential_closed_form(Scalar::zero(kFlt), float_params(), N),
                  std::domain_error);
  CHECK_THROWS_AS(
      star_exponential_closed_form(Scalar::real_double(-0.5), float_params(), N),
      std::domain_error);
}

TEST_CASE("star exponential solves d/dbeta F + H_B star F = 0") {
  std::vector<std::pair<double, double>> pts = {{0.3, -0.7}, {1.1, 0.4}, {-0.6, 0.2}};

  // exact backend: the residual series vanishes identically
  for (double m : star_exp_ode_residual(Scalar::ratio(2, 3, kRat), exact_params(), 6, pts))
    CHECK(m == 0.0);
  for (double m : star_exp_ode_residual(Scalar::one(kRat), exact_params(), 8, pts))
    CHECK(m == 0.0);

  // float backend: evaluation noise only
  for (double m : star_exp_ode_residual(Scalar::real_double(0.6), float_params(), 8, pts))
    CHECK(m < 1e-8);

  // order 0 is the ordinary exponential of -beta H_B
  double beta = 0.85;
  GaussianFamilyFunction e =
      star_exponential_closed_form(Scalar::real_double(beta), float_params(), 6);
  for (auto [qb, pb] : pts) {
    double hb = 0.5 * pb * pb + 0.5 * qb * qb;
    CHECK(std::abs(e.evaluate_order(0, qb, pb) - std::exp(-beta * hb)) < 1e-12);
  }
}

TEST_CASE("liouville trace: gaussian moments and the trace property") {
  int N = 6;
  GaussianFamilyFunction unit = unit_family(kFlt, N);
  Polynomial one_p = constant_poly(Scalar::one(kFlt));

  FormalSeries area = trace_pairing(unit, one_p);
  CHECK(std::abs(area.at(0).constant_term().real() - kPi) < 1e-14);
  for (int k = 1; k <= N; ++k) CHECK(area.at(k).is_zero());

  Polynomial qb2(FrameId::darboux, kFlt);
  qb2.add_term(bath_mono(2, 0), Scalar::one(kFlt));
  CHECK(std::abs(trace_pairing(unit, qb2).at(0).constant_term().real() - kPi / 2) <
        1e-14);
  Polynomial odd(FrameId::darboux, kFlt);
  odd.add_term(bath_mono(1, 2), Scalar::one(kFlt));
  CHECK(trace_pairing(unit, odd).max_abs_coeff() == 0.0);

  // tr(Exp star f) = tr(Exp f): star corrections integrate away
  GaussianFamilyFunction e =
      star_exponential_closed_form(Scalar::real_double(0.85), float_params(), N);
  Polynomial f(FrameId::darboux, kFlt);
  f.add_term(bath_mono(2, 0), Scalar::one(kFlt));
  f.add_term(bath_mono(1, 1), Scalar::ratio(1, 2, kFlt));
  FormalSeries fs = FormalSeries::of_polynomial(f, N);
  FormalSeries plain = trace_pairing(e, f);
  CHECK(trace_pairing(family_star(fs, e), one_p).max_deviation(plain) < 1e-9);
  CHECK(trace_pairing(family_star(e, fs), one_p).max_deviation(plain) < 1e-9);

  CHECK_THROWS_AS(trace_pairing(unit_family(kRat, N), constant_poly(Scalar::one(kRat))),
                  std::logic_error);
  Polynomial sysp(FrameId::darboux, kFlt);
  sysp.add_term(Monomial({2, 0, 0, 0}), Scalar::one(kFlt));
  CHECK_THROWS_AS(trace_pairing(unit, sysp), std::invalid_argument);
}

TEST_CASE("partition function matches the geometric-series trace formula") {
  int N = 6;
  for (auto [beta, nu] : {std::pair{1.0, 1.0}, {0.5, 2.0}}) {
    Parameters p = Parameters::from_float(1.0, nu, 1.5);
    PartitionFunction z = partition_function(beta, p, N);
    FormalSeries golden = mu_golden(beta, nu, N);
    CHECK(z.mu.max_deviation(golden) < 1e-10);

    double bn = beta * nu;
    CHECK(std::abs(z.mu.at(0).constant_term().real() - 2.0 * kPi / bn) < 1e-12);
    CHECK(std::abs(z.mu.at(2).constant_term().real() -
                   (2.0 * kPi / bn) * (-bn * bn / 24.0)) < 1e-12);
    CHECK(std::abs(z.z_principal.real() - 1.0 / bn) < 1e-13);

    // Z reassembles mu: 2 pi hbar Z = mu
    FormalSeries golden_ext = mu_golden(beta, nu, N + 1);
    for (int k = 0; k <= z.z_regular.order() && k + 1 <= N + 1; ++k)
      CHECK(std::abs(2.0 * kPi * z.z_regular.at(k).constant_term().real() -
                     golden_ext.at(k + 1).constant_term().real()) < 1e-10);

    // invertible in the Laurent sense: mu has an honest inverse
    CHECK((z.mu * z.mu.inverse()).max_deviation(one_series(kFlt, N)) < 1e-12);
  }
  CHECK_THROWS_AS(partition_function(1.0, exact_params(), N), std::logic_error);
  CHECK_THROWS_AS(partition_function(-1.0, float_params(), N), std::domain_error);
}

TEST_CASE("bath states: point functional and its positive quantization") {
  int N = 4;
  Parameters p = exact_params();
  Scalar q0 = Scalar::ratio(1, 2, kRat), p0 = Scalar::integer(-2, kRat);

  BathState d = BathState::delta(q0, p0, p);
  CHECK(d.moment(bath_mono(0, 0), N) == one_series(kRat, N));
  CHECK(d.moment(bath_mono(2, 1), N) ==
        const_series(kRat, N, {Scalar::ratio(-1, 2, kRat)}));
  CHECK_THROWS_AS(d.moment(Monomial({1, 0, 0, 0}), N), std::invalid_argument);

  BathState s = BathState::deformed_delta(q0, p0, p);
  CHECK(s.moment(bath_mono(0, 0), N) == one_series(kRat, N));
  CHECK(s.moment(bath_mono(1, 0), N) == const_series(kRat, N, {q0}));
  // qB^2 -> q0^2 + hbar/(2 m nu), pB^2 -> p0^2 + hbar m nu / 2
  CHECK(s.moment(bath_mono(2, 0), N) ==
        const_series(kRat, N, {Scalar::ratio(1, 4, kRat), Scalar::ratio(1, 2, kRat)}));
  CHECK(s.moment(bath_mono(0, 2), N) ==
        const_series(kRat, N, {Scalar::integer(4, kRat), Scalar::ratio(1, 2, kRat)}));
  // the mixed moment picks up no correction
  CHECK(s.moment(bath_mono(1, 1), N) == const_series(kRat, N, {-Scalar::one(kRat)}));

  // at the origin: odd moments vanish, qB^4 -> 3 hbar^2 / (4 m^2 nu^2)
  BathState s0 = BathState::deformed_delta(Scalar::zero(kRat), Scalar::zero(kRat), p);
  CHECK(s0.moment(bath_mono(3, 0), N).is_zero());
  CHECK(s0.moment(bath_mono(1, 2), N).is_zero());
  CHECK(s0.moment(bath_mono(4, 0), N) ==
        const_series(kRat, N,
                     {Scalar::zero(kRat), Scalar::zero(kRat), Scalar::ratio(3, 4, kRat)}));

  CHECK(d.description().find("delta") != std::string::npos);
  CHECK(s.description().find("deformed") != std::string::npos);
}

TEST_CASE("thermal state: quadratic moments are the exact coth series") {
  int N = 6;
  BathState kms = BathState::kms(Scalar::one(kRat), exact_params());
  CHECK(kms.moment(bath_mono(0, 0), N) == one_series(kRat, N));

  // (hbar/2) coth(hbar/2) = 1 + hbar^2/12 - hbar^4/720 + hbar^6/30240
  std::vector<Scalar> coth = {Scalar::one(kRat),          Scalar::zero(kRat),
                              Scalar::ratio(1, 12, kRat), Scalar::zero(kRat),
                              Scalar::ratio(-1, 720, kRat), Scalar::zero(kRat),
                              Scalar::ratio(1, 30240, kRat)};
  FormalSeries want = const_series(kRat, N, coth);
  CHECK(kms.moment(bath_mono(2, 0), N) == want);
  CHECK(kms.moment(bath_mono(0, 2), N) == want);

  // odd moments and the mixed quadratic vanish identically
  CHECK(kms.moment(bath_mono(1, 0), N).is_zero());
  CHECK(kms.moment(bath_mono(0, 3), N).is_zero());
  CHECK(kms.moment(bath_mono(2, 1), N).is_zero());
  CHECK(kms.moment(bath_mono(1, 1), N).is_zero());

  CHECK(kms.description().find("kms") != std::string::npos);
  CHECK_THROWS_AS(BathState::kms(Scalar::zero(kRat), exact_params()), std::domain_error);
}

TEST_CASE("thermal state: float moments against the coth oracle") {
  int N = 6;
  double beta = 1.3, m = 1.1, nu = 0.9;
  Parameters p = Parameters::from_float(m, nu, 0.55);
  BathState kms = BathState::kms(Scalar::real_double(beta), p);

  std::vector<double> oracle = coth_moment_oracle(beta, m, nu, N);
  FormalSeries q2 = kms.moment(bath_mono(2, 0), N);
  FormalSeries p2 = kms.moment(bath_mono(0, 2), N);
  for (int k = 0; k <= N; ++k) {
    CHECK(std::abs(q2.at(k).constant_term().real() - oracle[k]) < 1e-10);
    CHECK(std::abs(p2.at(k).constant_term().real() - m * m * nu * nu * oracle[k]) <
          1e-10);
  }

  // quasi-free: the quartic moment obeys Wick's rule as a series identity
  FormalSeries q4 = kms.moment(bath_mono(4, 0), N);
  CHECK(q4.max_deviation((q2 * q2).scaled(Scalar::integer(3, kFlt))) < 1e-10);

  // reality: conjugating the observable conjugates the expectation
  Rng rng(314);
  for (int trial = 0; trial < 12; ++trial) {
    FormalSeries f =
        FormalSeries::of_polynomial(random_bath_poly(rng, kFlt, 3, 4), N);
    FormalSeries lhs = bath_expectation(f.conj(), kms);
    CHECK(lhs.max_deviation(bath_expectation(f, kms).conj()) < 1e-12);
  }
}

TEST_CASE("bath reduction splits system factors from bath factors") {
  int N = 4;
  Parameters p = exact_params();
  BathState s = BathState::deformed_delta(Scalar::zero(kRat), Scalar::zero(kRat), p);

  // qS^2 qB^2 + pS reduces to qS^2 (hbar/2) + pS at the origin
  Polynomial mixed(FrameId::darboux, kRat);
  mixed.add_term(Monomial({2, 0, 2, 0}), Scalar::one(kRat));
  mixed.add_term(Monomial({0, 1, 0, 0}), Scalar::one(kRat));
  FormalSeries reduced = bath_expectation(FormalSeries::of_polynomial(mixed, N), s);

  FormalSeries want(FrameId::darboux, kRat, N);
  Polynomial w0(FrameId::darboux, kRat);
  w0.add_term(Monomial({0, 1, 0, 0}), Scalar::one(kRat));
  Polynomial w1(FrameId::darboux, kRat);
  w1.add_term(Monomial({2, 0, 0, 0}), Scalar::ratio(1, 2, kRat));
  want.set(0, w0);
  want.set(1, w1);
  CHECK(reduced == want);

  // unital on every variant
  FormalSeries one = one_series(kRat, N);
  CHECK(bath_expectation(one, s) == one);
  CHECK(bath_expectation(one, BathState::kms(Scalar::one(kRat), p)) == one);
}

TEST_CASE("positivity: the point functional fails where its quantization succeeds") {
  int N = 4;
  Parameters p = exact_params();
  FormalSeries zb = FormalSeries::variable(FrameId::complex_factor, 2, kRat, N);

  // delta at the origin sends zbar_B star z_B to exactly -hbar
  BathState d0 = BathState::delta(Scalar::zero(kRat), Scalar::zero(kRat), p);
  CHECK(positivity_check(d0, zb) == SeriesSign::negative);
  FormalSeries reduced =
      bath_expectation(weyl_star(zb.conj(), zb, &d0.frames()), d0);
  CHECK(reduced == const_series(kRat, N, {Scalar::zero(kRat), -Scalar::one(kRat)}));

  // its positive quantization annihilates the same witness...
  BathState s0 = BathState::deformed_delta(Scalar::zero(kRat), Scalar::zero(kRat), p);
  CHECK(positivity_check(s0, zb) == SeriesSign::zero_at_truncation);
  CHECK(bath_expectation(weyl_star(zb.conj(), zb, &s0.frames()), s0).is_zero());

  // ...and the creation direction costs one quantum
  FormalSeries zbb = FormalSeries::variable(FrameId::complex_factor, 3, kRat, N);
  CHECK(positivity_check(s0, zbb) == SeriesSign::positive);
  CHECK(bath_expectation(weyl_star(zbb.conj(), zbb, &s0.frames()), s0) ==
        const_series(kRat, N, {Scalar::zero(kRat), Scalar::integer(2, kRat)}));

  // displaced point: the classical term dominates
  BathState dd = BathState::deformed_delta(Scalar::one(kRat), Scalar::zero(kRat), p);
  CHECK(positivity_check(dd, zb) == SeriesSign::positive);

  // thermal functional: omega(zbar star z) = 2 - hbar + hbar^2/6 - ...
  BathState kms = BathState::kms(Scalar::one(kRat), p);
  CHECK(positivity_check(kms, zb) == SeriesSign::positive);
  FormalSeries th = bath_expectation(weyl_star(zb.conj(), zb, &kms.frames()), kms);
  CHECK(th.at(0) == constant_poly(Scalar::integer(2, kRat)));
  CHECK(th.at(1) == constant_poly(Scalar::integer(-1, kRat)));
  CHECK(th.at(2) == constant_poly(Scalar::ratio(1, 6, kRat)));
}

TEST_CASE("positivity battery: quantized states never turn negative") {
  int N = 6;
  Parameters p = float_params();
  BathState sd = BathState::deformed_delta(Scalar::real_double(0.2),
                                           Scalar::real_double(-0.4), p);
  BathState kms = BathState::kms(Scalar::real_double(0.9), p);

  Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    FormalSeries f =
        FormalSeries::of_polynomial(random_bath_poly(rng, kFlt, 3, 4), N);
    CHECK(positivity_check(sd, f) == SeriesSign::positive);
    CHECK(positivity_check(kms, f) == SeriesSign::positive);
  }

  FormalSeries one = one_series(kFlt, N);
  CHECK(positivity_check(sd, one) == SeriesSign::positive);
  CHECK(positivity_check(sd, FormalSeries(FrameId::darboux, kFlt, N)) ==
        SeriesSign::zero_at_truncation);
}

TEST_CASE("complete positivity sampling on matrix observables") {
  int N = 4;
  Parameters p = float_params();
  BathState sd = BathState::deformed_delta(Scalar::real_double(0.0),
                                           Scalar::real_double(0.0), p);
  BathState kms = BathState::kms(Scalar::real_double(1.0), p);
  std::vector<std::pair<double, double>> pts = {{0.0, 0.0}, {0.8, -0.3}, {-1.2, 0.5},
                                                {0.4, 1.6}};

  MatrixObservable id = MatrixObservable::identity(2, FrameId::darboux, kFlt, N);
  CpSampleReport r = cp_sample_check(sd, id, pts);
  CHECK(r.passed);
  CHECK(r.min_eigenvalue == doctest::Approx(1.0));
  CHECK(r.hermiticity_defect < 1e-14);
  CHECK(r.points_checked == 4);

  Rng rng(2718);
  for (int trial = 0; trial < 8; ++trial) {
    MatrixObservable f(2, FrameId::darboux, kFlt, N);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        f.set(i, j, rng.series(FrameId::darboux, kFlt, N, 2, 3, true));
    CpSampleReport rd = cp_sample_check(sd, f, pts);
    CpSampleReport rk = cp_sample_check(kms, f, pts);
    CHECK(rd.passed);
    CHECK(rk.passed);
    CHECK(rd.hermiticity_defect < 1e-10);
    CHECK(rk.hermiticity_defect < 1e-10);
  }

  // 1x1 matrices reduce to the scalar positivity check
  MatrixObservable m1(1, FrameId::darboux, kFlt, N);
  Polynomial f1(FrameId::darboux, kFlt);
  f1.add_term(bath_mono(1, 0), Scalar::one(kFlt));
  f1.add_term(Monomial({1, 0, 0, 0}), Scalar::one(kFlt));
  m1.set(0, 0, FormalSeries::of_polynomial(f1, N));
  CHECK(cp_sample_check(kms, m1, pts).passed);
}

TEST_CASE("jacobi eigenvalues of small symmetric matrices") {
  std::vector<double> e = symmetric_eigenvalues({{2.0, 1.0}, {1.0, 3.0}});
  CHECK(e[0] == doctest::Approx((5.0 - std::sqrt(5.0)) / 2.0));
  CHECK(e[1] == doctest::Approx((5.0 + std::sqrt(5.0)) / 2.0));

  std::vector<double> d =
      symmetric_eigenvalues({{3.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 2.0}});
  CHECK(d == std::vector<double>{1.0, 2.0, 3.0});

  CHECK(symmetric_eigenvalues({{7.5}}) == std::vector<double>{7.5});
  CHECK_THROWS_AS(symmetric_eigenvalues({{1.0, 2.0}}), std::invalid_argument);
}

TEST_CASE("bath states are shareable across threads and copies") {
  int N = 6;
  BathState kms = BathState::kms(Scalar::real_double(0.8), float_params());
  std::vector<Monomial> monos = {bath_mono(2, 0), bath_mono(0, 2), bath_mono(4, 0),
                                 bath_mono(2, 2), bath_mono(1, 1), bath_mono(0, 0)};

  std::vector<std::vector<FormalSeries>> results(4);
  std::vector<std::thread> threads;
  for (int w = 0; w < 4; ++w)
    threads.emplace_back([&, w] {
      for (int rep = 0; rep < 5; ++rep)
        for (const Monomial& m : monos) results[w].push_back(kms.moment(m, N));
    });
  for (auto& t : threads) t.join();

  BathState fresh = BathState::kms(Scalar::real_double(0.8), float_params());
  for (int w = 0; w < 4; ++w) {
    std::size_t idx = 0;
    for (int rep = 0; rep < 5; ++rep)
      for (const Monomial& m : monos) {
        CHECK(results[w][idx].max_deviation(fresh.moment(m, N)) == 0.0);
        ++idx;
      }
  }

  BathState copy = kms;
  CHECK(copy.moment(bath_mono(2, 0), N).max_deviation(fresh.moment(bath_mono(2, 0), N)) ==
        0.0);
  copy = fresh;
  CHECK(copy.variant() == BathState::Variant::kms);
}
