#pragma once

#include <map>
#include <span>

#include "starflow/frames.hpp"

namespace starflow {

// Exponent vector over the 4 coordinates of one frame, ordered graded
// lexicographically (total degree first, then lex on exponents).
class Monomial {
 public:
  Monomial() : e_{0, 0, 0, 0} {}
  explicit Monomial(std::array<int, kDim> e) : e_(e) {
    for (int x : e_)
      if (x < 0) throw std::invalid_argument("negative exponent");
  }
  static Monomial variable(int index, int power = 1) {
    std::array<int, kDim> e{0, 0, 0, 0};
    e.at(index) = power;
    return Monomial(e);
  }

  int exponent(int i) const { return e_.at(i); }
  int degree() const { return e_[0] + e_[1] + e_[2] + e_[3]; }
  bool is_constant() const { return degree() == 0; }

  Monomial times(const Monomial& o) const {
    return Monomial({e_[0] + o.e_[0], e_[1] + o.e_[1], e_[2] + o.e_[2],
                     e_[3] + o.e_[3]});
  }
  Monomial permuted(const std::array<int, kDim>& perm) const {
    std::array<int, kDim> e;
    for (int i = 0; i < kDim; ++i) e[perm[i]] = e_[i];
    return Monomial(e);
  }

  bool operator==(const Monomial& o) const { return e_ == o.e_; }
  bool operator<(const Monomial& o) const {
    int d = degree(), od = o.degree();
    if (d != od) return d < od;
    return e_ < o.e_;
  }

  std::string to_string(FrameId frame) const;

 private:
  std::array<int, kDim> e_;
};

// Sparse polynomial over a fixed frame and scalar backend. Stored zero
// coefficients are never kept; the term map is always canonical.
class Polynomial {
 public:
  Polynomial(FrameId frame, Backend backend) : frame_(frame), backend_(backend) {}

  static Polynomial constant(FrameId frame, const Scalar& c);
  static Polynomial variable(FrameId frame, int index, Backend backend);

  FrameId frame() const { return frame_; }
  Backend backend() const { return backend_; }
  const std::map<Monomial, Scalar>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  int degree() const;  // 0 for the zero polynomial
  Scalar coeff(const Monomial& m) const;
  Scalar constant_term() const { return coeff(Monomial()); }
  void add_term(const Monomial& m, const Scalar& c);

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial scaled(const Scalar& c) const;

  // Complex conjugation: conjugate coefficients; on complex frames also swap
  // z_k <-> zbar_k exponents.
  Polynomial conj() const;
  Polynomial derivative(int var) const;
  Scalar evaluate(const Vec4& point) const;
  double max_abs_coeff() const;

  bool operator==(const Polynomial& o) const;
  bool approx_equal(const Polynomial& o, double tol = default_tolerance()) const;

  std::string to_string() const;

 private:
  void check_compatible(const Polynomial& o) const;

  FrameId frame_;
  Backend backend_;
  std::map<Monomial, Scalar> terms_;
};

}  // namespace starflow
