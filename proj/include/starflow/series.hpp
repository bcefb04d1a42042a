#pragma once

#include <vector>

#include "starflow/algebra.hpp"

namespace starflow {

// Truncated formal power series in hbar with polynomial coefficients,
// sum_{k=0}^{N} hbar^k c_k. All binary operations require equal truncation
// order, frame, and backend; products re-truncate to order N.
class FormalSeries {
 public:
  FormalSeries(FrameId frame, Backend backend, int order);
  static FormalSeries of_polynomial(const Polynomial& p, int order);
  static FormalSeries constant(FrameId frame, const Scalar& c, int order);
  static FormalSeries variable(FrameId frame, int index, Backend backend, int order);
  static FormalSeries hbar(FrameId frame, Backend backend, int order);

  int order() const { return static_cast<int>(c_.size()) - 1; }
  FrameId frame() const { return c_[0].frame(); }
  Backend backend() const { return c_[0].backend(); }
  const Polynomial& at(int k) const { return c_.at(k); }
  void set(int k, Polynomial p);

  bool is_zero() const;
  // True when every coefficient is a constant polynomial ("series scalar").
  bool is_constant() const;
  int max_poly_degree() const;

  FormalSeries operator-() const;
  FormalSeries& operator+=(const FormalSeries& o);
  FormalSeries& operator-=(const FormalSeries& o);
  friend FormalSeries operator+(FormalSeries a, const FormalSeries& b) { return a += b; }
  friend FormalSeries operator-(FormalSeries a, const FormalSeries& b) { return a -= b; }
  friend FormalSeries operator*(const FormalSeries& a, const FormalSeries& b);
  FormalSeries scaled(const Scalar& s) const;
  FormalSeries scaled_poly(const Polynomial& p) const;

  // Multiplication by hbar^k (shift up, dropping overflow).
  FormalSeries shifted_up(int k) const;
  // Re-truncation to a different order; extending pads with zeros.
  FormalSeries truncated(int order) const;
  // Division by hbar: requires the order-0 coefficient to vanish (within tol
  // under float64). The top coefficient of the result is unknown after the
  // shift and is left zero; callers must ignore order N.
  FormalSeries shifted_down(double tol = default_tolerance()) const;

  FormalSeries conj() const;
  FormalSeries pow(unsigned n) const;
  // Multiplicative inverse; requires an invertible order-0 constant term.
  FormalSeries inverse() const;

  Scalar evaluate_order(int k, const Vec4& point) const { return c_.at(k).evaluate(point); }

  bool operator==(const FormalSeries& o) const { return c_ == o.c_; }
  bool operator!=(const FormalSeries& o) const { return !(*this == o); }
  double max_abs_coeff() const;
  double max_deviation(const FormalSeries& o) const;
  bool approx_equal(const FormalSeries& o, double tol = default_tolerance()) const;

  std::string to_string() const;

 private:
  void check_compatible(const FormalSeries& o) const;
  std::vector<Polynomial> c_;
};

enum class SeriesSign { positive, negative, zero_at_truncation, indefinite };
std::string series_sign_name(SeriesSign s);

// Sign of a real series scalar in the ordered ring R[[hbar]]: the sign of the
// lowest nonvanishing coefficient. Under float64 a leading coefficient that is
// nonzero but within tolerance is reported indefinite.
SeriesSign series_sign(const FormalSeries& s, double tol = default_tolerance());

}  // namespace starflow
