#include "starflow/algebra.hpp"

#include <sstream>

namespace starflow {

std::string Monomial::to_string(FrameId frame) const {
  if (is_constant()) return "1";
  const auto& vars = frame_vars(frame);
  std::string s;
  for (int i = 0; i < kDim; ++i) {
    if (e_[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += vars[i];
    if (e_[i] > 1) s += "^" + std::to_string(e_[i]);
  }
  return s;
}

Polynomial Polynomial::constant(FrameId frame, const Scalar& c) {
  Polynomial p(frame, c.backend());
  p.add_term(Monomial(), c);
  return p;
}

Polynomial Polynomial::variable(FrameId frame, int index, Backend backend) {
  Polynomial p(frame, backend);
  p.add_term(Monomial::variable(index), Scalar::one(backend));
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_constant());
}

int Polynomial::degree() const {
  return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
}

Scalar Polynomial::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Scalar::zero(backend_) : it->second;
}

void Polynomial::add_term(const Monomial& m, const Scalar& c) {
  if (c.backend() != backend_) throw std::logic_error("coefficient backend mismatch");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Polynomial::check_compatible(const Polynomial& o) const {
  if (frame_ != o.frame_)
    throw std::logic_error("polynomial frames differ (" + frame_name(frame_) +
                           " vs " + frame_name(o.frame_) + ")");
  if (backend_ != o.backend_) throw std::logic_error("polynomial backends differ");
}

Polynomial Polynomial::operator-() const {
  Polynomial r(frame_, backend_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  check_compatible(o);
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_compatible(b);
  Polynomial r(a.frame_, a.backend_);
  for (const auto& [ma, ca] : a.terms_)
    for (const auto& [mb, cb] : b.terms_) r.add_term(ma.times(mb), ca * cb);
  return r;
}

Polynomial Polynomial::scaled(const Scalar& c) const {
  if (c.backend() != backend_) throw std::logic_error("coefficient backend mismatch");
  Polynomial r(frame_, backend_);
  if (c.is_zero()) return r;
  for (const auto& [m, cc] : terms_) {
    Scalar v = cc * c;
    if (!v.is_zero()) r.terms_.emplace(m, v);
  }
  return r;
}

Polynomial Polynomial::conj() const {
  const auto& perm = frame_conj_perm(frame_);
  Polynomial r(frame_, backend_);
  for (const auto& [m, c] : terms_) r.add_term(m.permuted(perm), c.conj());
  return r;
}

Polynomial Polynomial::derivative(int var) const {
  Polynomial r(frame_, backend_);
  for (const auto& [m, c] : terms_) {
    int e = m.exponent(var);
    if (e == 0) continue;
    std::array<int, kDim> exps;
    for (int i = 0; i < kDim; ++i) exps[i] = m.exponent(i);
    exps[var] -= 1;
    r.add_term(Monomial(exps), c * Scalar::integer(e, backend_));
  }
  return r;
}

Scalar Polynomial::evaluate(const Vec4& point) const {
  Scalar acc = Scalar::zero(backend_);
  for (const auto& [m, c] : terms_) {
    Scalar t = c;
    for (int i = 0; i < kDim; ++i)
      if (m.exponent(i) > 0) t *= point[i].pow(static_cast<unsigned>(m.exponent(i)));
    acc += t;
  }
  return acc;
}

double Polynomial::max_abs_coeff() const {
  double r = 0.0;
  for (const auto& [m, c] : terms_) r = std::max(r, c.abs_max());
  return r;
}

bool Polynomial::operator==(const Polynomial& o) const {
  if (frame_ != o.frame_ || backend_ != o.backend_) return false;
  return terms_ == o.terms_;
}

bool Polynomial::approx_equal(const Polynomial& o, double tol) const {
  check_compatible(o);
  if (backend_ == Backend::exact_rational) return terms_ == o.terms_;
  Polynomial d = *this - o;
  return d.max_abs_coeff() <= tol;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  // Leading (highest graded-lex) term first.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!first) out << " + ";
    first = false;
    out << "(" << it->second.to_string() << ")";
    if (!it->first.is_constant()) out << "*" << it->first.to_string(frame_);
  }
  return out.str();
}

}  // namespace starflow
