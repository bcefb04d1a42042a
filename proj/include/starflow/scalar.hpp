#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <variant>

#include <gmpxx.h>

namespace starflow {

// Absolute tolerance used by float64 comparisons when no explicit tolerance
// is passed. Set once at startup (CLI reads STARFLOW_TOL); not thread-safe
// against concurrent set calls by design.
double default_tolerance();
void set_default_tolerance(double tol);

std::string format_double(double x);

enum class Backend { exact_rational, float64 };

std::string backend_name(Backend b);

struct RationalComplex {
  mpq_class re;
  mpq_class im;
};

// Complex scalar over one of two backends. All arithmetic requires matching
// backends; mixing throws.
class Scalar {
 public:
  Scalar() : v_(std::complex<double>(0.0, 0.0)) {}

  static Scalar zero(Backend b);
  static Scalar one(Backend b);
  static Scalar imaginary_unit(Backend b);
  static Scalar integer(long n, Backend b);
  static Scalar ratio(long num, long den, Backend b);
  static Scalar real_double(double x);
  static Scalar complex_double(double re, double im);
  static Scalar complex_double(std::complex<double> z);
  static Scalar rational(mpq_class re, mpq_class im = mpq_class(0));

  Backend backend() const {
    return std::holds_alternative<RationalComplex>(v_) ? Backend::exact_rational
                                                       : Backend::float64;
  }

  bool is_zero() const;  // exact, both backends
  bool is_one() const;
  bool is_real(double tol = default_tolerance()) const;

  Scalar conj() const;
  Scalar pow(unsigned n) const;
  // Square root of a real nonnegative scalar. Rational backend: exact root or
  // throws std::domain_error.
  Scalar sqrt_positive() const;

  double real() const;
  double imag() const;
  std::complex<double> to_complex() const { return {real(), imag()}; }
  const mpq_class& rat_re() const;
  const mpq_class& rat_im() const;

  // max(|Re|, |Im|) as a double; deviation metric for reports.
  double abs_max() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

  bool operator==(const Scalar& o) const;  // exact equality
  bool operator!=(const Scalar& o) const { return !(*this == o); }
  bool approx_equal(const Scalar& o, double tol = default_tolerance()) const;

  std::string to_string() const;

 private:
  explicit Scalar(std::complex<double> z) : v_(z) {}
  explicit Scalar(RationalComplex q) : v_(std::move(q)) {}

  const std::complex<double>& flt() const { return std::get<std::complex<double>>(v_); }
  const RationalComplex& rat() const { return std::get<RationalComplex>(v_); }

  std::variant<std::complex<double>, RationalComplex> v_;
};

void check_same_backend(const Scalar& a, const Scalar& b);

// n! and (2n-1)!! in the requested backend.
Scalar factorial_scalar(unsigned n, Backend b);
Scalar double_factorial_odd(unsigned n, Backend b);

}  // namespace starflow
