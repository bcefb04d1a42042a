#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "starflow/classical.hpp"

using namespace starflow;

namespace {
const double kPi = 3.14159265358979323846;

IntegrationControl rk4_only() {
  IntegrationControl c;
  c.force_rk4 = true;
  return c;
}
}  // namespace

TEST_CASE("constant rotation reproduces its closed form") {
  VectorFieldSpec field = VectorFieldSpec::rotation_const(1.0);
  for (double t : {0.0, 0.3, 1.0, 2.5}) {
    for (double xS : {-1.0, 0.4, 2.0}) {
      double xB = 0.7;
      double expect = xS * std::cos(t) - xB * std::sin(t);
      auto closed = open_evolve_pure(field, {xS}, {xB}, t);
      CHECK(closed[0] == doctest::Approx(expect).epsilon(1e-12));
      auto numeric = open_evolve_pure(field, {xS}, {xB}, t, rk4_only());
      CHECK(std::abs(numeric[0] - expect) < 1e-9);
    }
  }
  // time zero is the identity
  auto id = open_evolve_pure(field, {1.25}, {-0.5}, 0.0, rk4_only());
  CHECK(id[0] == 1.25);
}

TEST_CASE("radial rotation annihilates the critical radius and is not injective") {
  VectorFieldSpec field = VectorFieldSpec::rotation_radial();
  for (double t : {0.5, 1.0, 2.0}) {
    double x_crit = std::sqrt(kPi / (2.0 * t));
    auto img = open_evolve_pure(field, {x_crit}, {0.0}, t);
    CHECK(std::abs(img[0]) < 1e-6);
    auto img_rk4 = open_evolve_pure(field, {x_crit}, {0.0}, t, rk4_only());
    CHECK(std::abs(img_rk4[0]) < 1e-6);
    // the origin maps to the same image: the time-t map on the system factor
    // is not injective, hence never a diffeomorphism
    auto origin = open_evolve_pure(field, {0.0}, {0.0}, t);
    CHECK(origin[0] == 0.0);
  }
}

TEST_CASE("closed forms satisfy the flow equation (finite difference probe)") {
  Parameters p = Parameters::from_float(1.0, 1.0, 1.5);
  for (auto field : {VectorFieldSpec::rotation_const(0.8),
                     VectorFieldSpec::rotation_radial(),
                     VectorFieldSpec::linear_hamiltonian(p)}) {
    std::vector<double> x0;
    for (int d = 0; d < field.total_dim(); ++d)
      x0.push_back(0.3 + 0.2 * static_cast<double>(d));
    double t = 0.7, dt = 1e-5;
    auto plus = integrate_flow(field, x0, t + dt);
    auto minus = integrate_flow(field, x0, t - dt);
    auto mid = integrate_flow(field, x0, t);
    std::vector<double> rhs;
    field.eval(mid, rhs);
    for (int d = 0; d < field.total_dim(); ++d) {
      double lhs = (plus[d] - minus[d]) / (2.0 * dt);
      CHECK(lhs == doctest::Approx(rhs[d]).epsilon(1e-6));
    }
  }
}

TEST_CASE("coupled oscillator field matches its matrix flow under RK4") {
  Parameters p = Parameters::from_float(1.3, 0.9, 0.65);
  VectorFieldSpec field = VectorFieldSpec::linear_hamiltonian(p);
  std::vector<double> x0 = {0.4, -0.3, 1.1, 0.2};
  for (double t : {0.5, 1.7}) {
    auto closed = integrate_flow(field, x0, t);
    auto numeric = integrate_flow(field, x0, t, rk4_only());
    for (int d = 0; d < 4; ++d) CHECK(std::abs(closed[d] - numeric[d]) < 1e-9);
  }
}

TEST_CASE("evolution property: reinserting the evolved bath point composes exactly") {
  // Phi_s^{pr_B Psi_t(x)} ( Phi_t^{xB}(xS) ) = Phi_{s+t}^{xB}(xS) holds for
  // every field once the bath point is itself carried forward; the residual
  // only measures integrator error.
  Parameters p = Parameters::from_float(1.0, 1.0, 1.5);
  VectorFieldSpec rot = VectorFieldSpec::rotation_const(1.0);
  VectorFieldSpec rad = VectorFieldSpec::rotation_radial();
  VectorFieldSpec lin = VectorFieldSpec::linear_hamiltonian(p);

  for (double s : {0.4, 1.1}) {
    for (double t : {0.3, 0.8, 2.0}) {
      CHECK(evolution_property_residual(rot, {0.9}, {0.7}, s, t) < 1e-9);
      CHECK(evolution_property_residual(rad, {0.8}, {-0.35}, s, t) < 1e-9);
      CHECK(evolution_property_residual(lin, {0.4, -0.2}, {0.3, 0.1}, s, t) < 1e-9);
    }
  }

  // s = 0 reduces both sides to the same single integration
  CHECK(evolution_property_residual(lin, {0.4, -0.2}, {0.3, 0.1}, 0.0, 0.7) == 0.0);

  // no closed-form path: residual is pure RK4 error
  VectorFieldSpec emb = VectorFieldSpec::timedep_embedding();
  CHECK(evolution_property_residual(emb, {0.8}, {0.0}, 0.6, 1.2) < 1e-6);
  CHECK(evolution_property_residual(emb, {0.8}, {0.5}, 0.9, 0.4) < 1e-6);

  // the same composition with the bath point NOT carried forward genuinely
  // fails for a coupled field: open evolutions are not one-parameter groups
  auto naive = [&](const VectorFieldSpec& field, std::vector<double> xS,
                   std::vector<double> xB, double s, double t) {
    auto once = open_evolve_pure(field, xS, xB, t);
    auto twice = open_evolve_pure(field, once, xB, s);
    auto joint = open_evolve_pure(field, xS, xB, s + t);
    double r2 = 0.0;
    for (std::size_t d = 0; d < twice.size(); ++d)
      r2 += (twice[d] - joint[d]) * (twice[d] - joint[d]);
    return std::sqrt(r2);
  };
  CHECK(naive(lin, {0.4, -0.2}, {0.3, 0.1}, 0.6, 0.9) > 1e-3);
  CHECK(naive(rot, {0.9}, {0.7}, 0.4, 0.8) > 1e-3);
}

TEST_CASE("time-dependent embedding agrees with direct integration and closed form") {
  VectorFieldSpec field = VectorFieldSpec::timedep_embedding();
  auto direct_field = [](double tau, const std::vector<double>& x,
                         std::vector<double>& dx) {
    dx.resize(1);
    dx[0] = std::cos(tau) * x[0];
  };
  for (double tau0 : {0.0, 0.5}) {
    for (double t : {0.4, 1.3, 2.0}) {
      double x0 = 0.8;
      // embedded autonomous system, bath coordinate carries the time
      auto emb = open_evolve_pure(field, {x0}, {tau0}, t);
      // direct non-autonomous integration
      auto direct = integrate_time_dependent(direct_field, {x0}, tau0, tau0 + t, 1e-3);
      CHECK(std::abs(emb[0] - direct[0]) < 1e-9);
      // closed form x0 exp(sin(tau0 + t) - sin(tau0))
      double closed = x0 * std::exp(std::sin(tau0 + t) - std::sin(tau0));
      CHECK(std::abs(emb[0] - closed) < 1e-6);
    }
  }
}

TEST_CASE("measure states validate and average the open evolution") {
  VectorFieldSpec field = VectorFieldSpec::rotation_const(1.0);
  MeasureState omega{{{0.25, {0.0}}, {0.75, {1.0}}}};
  auto obs = [](const std::vector<double>& x) { return x[0]; };
  double t = 0.9, xS = 1.1;
  double expect = 0.25 * (xS * std::cos(t)) + 0.75 * (xS * std::cos(t) - std::sin(t));
  CHECK(open_evolve_measure(field, obs, omega, {xS}, t) ==
        doctest::Approx(expect).epsilon(1e-12));

  // positivity is preserved on nonnegative observables
  auto obs_sq = [](const std::vector<double>& x) { return x[0] * x[0]; };
  for (double tt : {0.1, 0.7, 1.9})
    CHECK(open_evolve_measure(field, obs_sq, omega, {xS}, tt) >= 0.0);

  MeasureState bad_weight{{{-0.1, {0.0}}, {1.1, {1.0}}}};
  CHECK_THROWS_AS(open_evolve_measure(field, obs, bad_weight, {xS}, t),
                  std::invalid_argument);
  MeasureState bad_sum{{{0.5, {0.0}}}};
  CHECK_THROWS_AS(bad_sum.validate(1), std::invalid_argument);
  MeasureState bad_dim{{{1.0, {0.0, 1.0}}}};
  CHECK_THROWS_AS(bad_dim.validate(1), std::invalid_argument);
}

TEST_CASE("integration guards") {
  VectorFieldSpec field = VectorFieldSpec::rotation_radial();
  // step budget
  CHECK_THROWS_AS(integrate_flow(field, {1.0, 0.0}, 1e9, rk4_only()),
                  std::runtime_error);
  // overflow to non-finite values
  CHECK_THROWS_AS(integrate_flow(field, {1e200, 0.0}, 0.5, rk4_only()),
                  std::runtime_error);
  // dimension check
  CHECK_THROWS_AS(integrate_flow(field, {1.0}, 0.5), std::invalid_argument);
}
