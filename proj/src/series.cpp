#include "starflow/series.hpp"

#include <sstream>

namespace starflow {

FormalSeries::FormalSeries(FrameId frame, Backend backend, int order) {
  if (order < 0 || order > 16)
    throw std::invalid_argument("truncation order must be in [0, 16]");
  c_.assign(order + 1, Polynomial(frame, backend));
}

FormalSeries FormalSeries::of_polynomial(const Polynomial& p, int order) {
  FormalSeries s(p.frame(), p.backend(), order);
  s.c_[0] = p;
  return s;
}

FormalSeries FormalSeries::constant(FrameId frame, const Scalar& c, int order) {
  return of_polynomial(Polynomial::constant(frame, c), order);
}

FormalSeries FormalSeries::variable(FrameId frame, int index, Backend backend,
                                    int order) {
  return of_polynomial(Polynomial::variable(frame, index, backend), order);
}

FormalSeries FormalSeries::hbar(FrameId frame, Backend backend, int order) {
  FormalSeries s(frame, backend, order);
  if (order >= 1) s.c_[1] = Polynomial::constant(frame, Scalar::one(backend));
  return s;
}

void FormalSeries::set(int k, Polynomial p) {
  if (p.frame() != frame() || p.backend() != backend())
    throw std::logic_error("series coefficient frame/backend mismatch");
  c_.at(k) = std::move(p);
}

bool FormalSeries::is_zero() const {
  for (const auto& p : c_)
    if (!p.is_zero()) return false;
  return true;
}

bool FormalSeries::is_constant() const {
  for (const auto& p : c_)
    if (!p.is_constant()) return false;
  return true;
}

int FormalSeries::max_poly_degree() const {
  int d = 0;
  for (const auto& p : c_) d = std::max(d, p.degree());
  return d;
}

void FormalSeries::check_compatible(const FormalSeries& o) const {
  if (order() != o.order())
    throw std::logic_error("series truncation orders differ (" +
                           std::to_string(order()) + " vs " +
                           std::to_string(o.order()) + ")");
  if (frame() != o.frame())
    throw std::logic_error("series frames differ (" + frame_name(frame()) + " vs " +
                           frame_name(o.frame()) + ")");
  if (backend() != o.backend()) throw std::logic_error("series backends differ");
}

FormalSeries FormalSeries::operator-() const {
  FormalSeries r = *this;
  for (auto& p : r.c_) p = -p;
  return r;
}

FormalSeries& FormalSeries::operator+=(const FormalSeries& o) {
  check_compatible(o);
  for (size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

FormalSeries& FormalSeries::operator-=(const FormalSeries& o) {
  check_compatible(o);
  for (size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

FormalSeries operator*(const FormalSeries& a, const FormalSeries& b) {
  a.check_compatible(b);
  FormalSeries r(a.frame(), a.backend(), a.order());
  for (int i = 0; i <= a.order(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (int j = 0; i + j <= a.order(); ++j) {
      if (b.c_[j].is_zero()) continue;
      r.c_[i + j] += a.c_[i] * b.c_[j];
    }
  }
  return r;
}

FormalSeries FormalSeries::scaled(const Scalar& s) const {
  FormalSeries r = *this;
  for (auto& p : r.c_) p = p.scaled(s);
  return r;
}

FormalSeries FormalSeries::scaled_poly(const Polynomial& p) const {
  FormalSeries r(frame(), backend(), order());
  for (int k = 0; k <= order(); ++k)
    if (!c_[k].is_zero()) r.c_[k] = c_[k] * p;
  return r;
}

FormalSeries FormalSeries::shifted_up(int k) const {
  if (k < 0) throw std::invalid_argument("negative hbar shift");
  FormalSeries r(frame(), backend(), order());
  for (int j = 0; j + k <= order(); ++j) r.c_[j + k] = c_[j];
  return r;
}

FormalSeries FormalSeries::truncated(int order) const {
  FormalSeries r(frame(), backend(), order);
  for (int j = 0; j <= std::min(order, this->order()); ++j) r.c_[j] = c_[j];
  return r;
}

FormalSeries FormalSeries::shifted_down(double tol) const {
  bool ok = backend() == Backend::exact_rational ? c_[0].is_zero()
                                                 : c_[0].max_abs_coeff() <= tol;
  if (!ok)
    throw std::domain_error(
        "series not divisible by hbar: order-0 coefficient is " + c_[0].to_string());
  FormalSeries r(frame(), backend(), order());
  for (int j = 1; j <= order(); ++j) r.c_[j - 1] = c_[j];
  return r;
}

FormalSeries FormalSeries::conj() const {
  FormalSeries r = *this;
  for (auto& p : r.c_) p = p.conj();
  return r;
}

FormalSeries FormalSeries::pow(unsigned n) const {
  FormalSeries r = constant(frame(), Scalar::one(backend()), order());
  FormalSeries base = *this;
  while (n > 0) {
    if (n & 1u) r = r * base;
    base = base * base;
    n >>= 1u;
  }
  return r;
}

FormalSeries FormalSeries::inverse() const {
  if (!c_[0].is_constant() || c_[0].is_zero())
    throw std::domain_error("series inverse needs an invertible constant order-0 term");
  Scalar c0 = c_[0].constant_term();
  // Solve (sum hbar^k c_k)(sum hbar^k d_k) = 1 order by order.
  FormalSeries r(frame(), backend(), order());
  Scalar d0 = Scalar::one(backend()) / c0;
  r.c_[0] = Polynomial::constant(frame(), d0);
  for (int k = 1; k <= order(); ++k) {
    Polynomial acc(frame(), backend());
    for (int j = 0; j < k; ++j) acc += r.c_[j] * c_[k - j];
    r.c_[k] = (-acc).scaled(d0);
  }
  return r;
}

double FormalSeries::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& p : c_) m = std::max(m, p.max_abs_coeff());
  return m;
}

double FormalSeries::max_deviation(const FormalSeries& o) const {
  check_compatible(o);
  double m = 0.0;
  for (int k = 0; k <= order(); ++k) m = std::max(m, (c_[k] - o.c_[k]).max_abs_coeff());
  return m;
}

bool FormalSeries::approx_equal(const FormalSeries& o, double tol) const {
  if (backend() == Backend::exact_rational) return *this == o;
  return max_deviation(o) <= tol;
}

std::string FormalSeries::to_string() const {
  std::ostringstream out;
  bool wrote = false;
  for (int k = 0; k <= order(); ++k) {
    if (c_[k].is_zero()) continue;
    if (wrote) out << " + ";
    wrote = true;
    if (k == 0)
      out << c_[k].to_string();
    else if (k == 1)
      out << "hbar*[" << c_[k].to_string() << "]";
    else
      out << "hbar^" << k << "*[" << c_[k].to_string() << "]";
  }
  if (!wrote) return "0";
  return out.str();
}

std::string series_sign_name(SeriesSign s) {
  switch (s) {
    case SeriesSign::positive: return "positive";
    case SeriesSign::negative: return "negative";
    case SeriesSign::zero_at_truncation: return "zero-at-truncation";
    case SeriesSign::indefinite: return "indefinite";
  }
  throw std::logic_error("bad sign");
}

SeriesSign series_sign(const FormalSeries& s, double tol) {
  for (int k = 0; k <= s.order(); ++k) {
    const Polynomial& p = s.at(k);
    if (!p.is_constant())
      throw std::invalid_argument("series_sign needs a constant series, got " +
                                  p.to_string() + " at order " + std::to_string(k));
    Scalar c = p.constant_term();
    if (c.is_zero()) continue;
    if (!c.is_real(tol))
      throw std::invalid_argument("series_sign needs a real series, coefficient " +
                                  c.to_string() + " at order " + std::to_string(k));
    if (s.backend() == Backend::exact_rational)
      return sgn(c.rat_re()) > 0 ? SeriesSign::positive : SeriesSign::negative;
    double re = c.real();
    if (std::abs(re) <= tol) return SeriesSign::indefinite;
    return re > 0 ? SeriesSign::positive : SeriesSign::negative;
  }
  return SeriesSign::zero_at_truncation;
}

}  // namespace starflow
