#pragma once

#include <map>
#include <mutex>
#include <utility>
#include <vector>

#include "starflow/matrix_obs.hpp"
#include "starflow/quantum.hpp"

namespace starflow {

// Bath function of the shape  P(qB, pB; hbar) * exp(-a qB^2 - b pB^2)  in the
// Darboux frame. The exponent coefficients are series scalars whose order-0
// parts must be strictly positive (integrability); the class is closed under
// bath derivatives, polynomial multiplication, and scaling by series scalars.
class GaussianFamilyFunction {
 public:
  GaussianFamilyFunction(FormalSeries prefactor, FormalSeries a, FormalSeries b);

  const FormalSeries& prefactor() const { return prefactor_; }
  const FormalSeries& a() const { return a_; }
  const FormalSeries& b() const { return b_; }
  FrameId frame() const { return prefactor_.frame(); }
  Backend backend() const { return prefactor_.backend(); }
  int order() const { return prefactor_.order(); }

  // d/dqB (var 2) or d/dpB (var 3): (dP - 2 a qB P) exp(...) and likewise.
  GaussianFamilyFunction derivative(int var) const;
  GaussianFamilyFunction times_poly(const Polynomial& p) const;
  GaussianFamilyFunction times_series(const FormalSeries& c) const;
  GaussianFamilyFunction operator+(const GaussianFamilyFunction& o) const;
  GaussianFamilyFunction operator-(const GaussianFamilyFunction& o) const;

  // Folds the hbar >= 1 parts of the exponent coefficients into the prefactor,
  // leaving constant exponents. Exact per order (the folded exponential is a
  // terminating hbar-series).
  GaussianFamilyFunction canonicalized() const;

  // Value of the hbar^k part at a bath point (float evaluation).
  std::complex<double> evaluate_order(int k, double qb, double pb) const;

 private:
  void check_same_shape(const GaussianFamilyFunction& o) const;

  FormalSeries prefactor_;
  FormalSeries a_, b_;
};

// Weyl product of a bath polynomial series with a Gaussian family (either
// side). The derivative sum terminates at the polynomial's bath degree.
GaussianFamilyFunction family_star(const FormalSeries& f,
                                   const GaussianFamilyFunction& g);
GaussianFamilyFunction family_star(const GaussianFamilyFunction& f,
                                   const FormalSeries& g);

// The star exponential of the bath oscillator energy,
//   Exp(-beta H_B) = sech(u) exp(-(2 H_B / hbar nu) tanh(u)),  u = hbar beta nu / 2,
// expanded to the given order as prefactor * exp(-beta H_B). Order 0 of the
// prefactor is 1 (the classical limit is the ordinary exponential). beta = 0
// is excluded; the beta -> 0+ limit of the whole family is 1.
GaussianFamilyFunction star_exponential_closed_form(const Scalar& beta,
                                                    const Parameters& params,
                                                    int order);

// Max magnitude per hbar-order, over the sample points, of
//   d/dbeta Exp(-beta H_B) + H_B star Exp(-beta H_B)
// with the beta-derivative taken analytically on the closed form. Identically
// zero as a series; the returned numbers are evaluation noise.
std::vector<double> star_exp_ode_residual(
    const Scalar& beta, const Parameters& params, int order,
    const std::vector<std::pair<double, double>>& points);

// Liouville integral  tr(g f) = integral of g * f over the bath plane, by
// closed-form Gaussian moments. Carries a factor pi / sqrt(a b), so it is
// float-backend only; throws std::domain_error on non-positive exponents.
FormalSeries trace_pairing(const GaussianFamilyFunction& g, const Polynomial& f);

// mu(1) = tr Exp(-beta H_B) and the partition function Z = mu(1)/(2 pi hbar),
// a Laurent object with a single hbar^{-1} pole.
struct PartitionFunction {
  FormalSeries mu;       // constant series, order as requested
  Scalar z_principal;    // coefficient of hbar^{-1} in Z
  FormalSeries z_regular;
};
PartitionFunction partition_function(double beta, const Parameters& params,
                                     int order);

// Normalized functional on bath observables: point evaluation (delta), the
// positive quantization delta ∘ S_Bath (deformed delta), or the thermal
// functional tr(Exp(-beta H_B) star ·)/tr Exp(-beta H_B) (kms). Moments are
// cached; the cache is mutex-guarded so concurrent reads are safe.
class BathState {
 public:
  enum class Variant { delta, deformed_delta, kms };

  static BathState delta(const Scalar& q0, const Scalar& p0,
                         const Parameters& params);
  static BathState deformed_delta(const Scalar& q0, const Scalar& p0,
                                  const Parameters& params);
  static BathState kms(const Scalar& beta, const Parameters& params);

  BathState(const BathState& o);
  BathState& operator=(const BathState& o);

  Variant variant() const { return variant_; }
  const Parameters& params() const { return params_; }
  const FrameCatalog& frames() const { return frames_; }
  Backend backend() const { return params_.backend(); }
  const Scalar& q0() const { return q0_; }
  const Scalar& p0() const { return p0_; }
  const Scalar& beta() const { return beta_; }
  std::string description() const;

  // Expectation of a bath monomial as a constant series. Throws
  // std::invalid_argument when the monomial touches system variables.
  FormalSeries moment(const Monomial& mono, int order) const;

 private:
  BathState(Variant v, const Parameters& params);

  Variant variant_;
  Parameters params_;
  FrameCatalog frames_;
  Scalar q0_, p0_, beta_;

  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<Monomial, int>, FormalSeries> cache_;
};

// Applies (id ⊗ state) monomial-wise to a Darboux-frame series: every bath
// factor is replaced by its expectation, leaving a series over the system
// variables only. Series in other frames are transported first.
FormalSeries bath_expectation(const FormalSeries& f, const BathState& state);

// series_sign of state(conj(f) star f) for a bath observable f.
SeriesSign positivity_check(const BathState& state, const FormalSeries& f);

// Complete-positivity sampling: reduces F* star F with the state and checks
// the lowest nonvanishing hbar-order matrix at each system sample point for
// positive semi-definiteness down to the eigenvalue floor.
struct CpSampleReport {
  bool passed;
  double min_eigenvalue;      // most negative eigenvalue encountered
  double hermiticity_defect;  // max |A - A*| over sampled matrices
  int points_checked;
};
CpSampleReport cp_sample_check(const BathState& state, const MatrixObservable& f,
                               const std::vector<std::pair<double, double>>& system_points,
                               double eigenvalue_floor = -1e-9);

// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations,
// ascending. Used for the PSD checks; exposed for testing.
std::vector<double> symmetric_eigenvalues(std::vector<std::vector<double>> a);

}  // namespace starflow
