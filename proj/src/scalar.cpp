#include "starflow/scalar.hpp"

#include <cmath>
#include <cstdio>

namespace starflow {

namespace {
double g_tolerance = 1e-10;

mpq_class make_rat(long num, long den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}
}  // namespace

double default_tolerance() { return g_tolerance; }
void set_default_tolerance(double tol) {
  if (!(tol > 0.0)) throw std::domain_error("tolerance must be positive");
  g_tolerance = tol;
}

std::string format_double(double x) {
  if (x == 0.0) x = 0.0;  // normalize -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", x);
  return buf;
}

std::string backend_name(Backend b) {
  return b == Backend::exact_rational ? "exact-rational" : "float64";
}

Scalar Scalar::zero(Backend b) {
  return b == Backend::float64 ? Scalar(std::complex<double>(0.0, 0.0))
                               : Scalar(RationalComplex{mpq_class(0), mpq_class(0)});
}

Scalar Scalar::one(Backend b) { return integer(1, b); }

Scalar Scalar::imaginary_unit(Backend b) {
  return b == Backend::float64 ? Scalar(std::complex<double>(0.0, 1.0))
                               : Scalar(RationalComplex{mpq_class(0), mpq_class(1)});
}

Scalar Scalar::integer(long n, Backend b) {
  return b == Backend::float64
             ? Scalar(std::complex<double>(static_cast<double>(n), 0.0))
             : Scalar(RationalComplex{mpq_class(n), mpq_class(0)});
}

Scalar Scalar::ratio(long num, long den, Backend b) {
  if (b == Backend::float64) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    return Scalar(std::complex<double>(static_cast<double>(num) / den, 0.0));
  }
  return Scalar(RationalComplex{make_rat(num, den), mpq_class(0)});
}

Scalar Scalar::real_double(double x) { return Scalar(std::complex<double>(x, 0.0)); }
Scalar Scalar::complex_double(double re, double im) {
  return Scalar(std::complex<double>(re, im));
}
Scalar Scalar::complex_double(std::complex<double> z) { return Scalar(z); }

Scalar Scalar::rational(mpq_class re, mpq_class im) {
  return Scalar(RationalComplex{std::move(re), std::move(im)});
}

bool Scalar::is_zero() const {
  if (backend() == Backend::float64) return flt() == std::complex<double>(0.0, 0.0);
  return sgn(rat().re) == 0 && sgn(rat().im) == 0;
}

bool Scalar::is_one() const {
  if (backend() == Backend::float64) return flt() == std::complex<double>(1.0, 0.0);
  return rat().re == 1 && sgn(rat().im) == 0;
}

bool Scalar::is_real(double tol) const {
  if (backend() == Backend::exact_rational) return sgn(rat().im) == 0;
  return std::abs(flt().imag()) <= tol;
}

Scalar Scalar::conj() const {
  if (backend() == Backend::float64) return Scalar(std::conj(flt()));
  return Scalar(RationalComplex{rat().re, -rat().im});
}

Scalar Scalar::pow(unsigned n) const {
  Scalar r = one(backend());
  Scalar base = *this;
  while (n > 0) {
    if (n & 1u) r *= base;
    base *= base;
    n >>= 1u;
  }
  return r;
}

namespace {
// Exact square root of a nonnegative mpq, or nullopt.
bool exact_sqrt(const mpq_class& q, mpq_class* out) {
  if (sgn(q) < 0) return false;
  mpz_class num = q.get_num(), den = q.get_den();
  mpz_class rn, rd;
  if (mpz_root(rn.get_mpz_t(), num.get_mpz_t(), 2) == 0) return false;
  if (mpz_root(rd.get_mpz_t(), den.get_mpz_t(), 2) == 0) return false;
  *out = mpq_class(rn) / mpq_class(rd);
  return true;
}
}  // namespace

Scalar Scalar::sqrt_positive() const {
  if (backend() == Backend::float64) {
    if (std::abs(flt().imag()) > 0.0 || flt().real() < 0.0)
      throw std::domain_error("sqrt_positive needs a real nonnegative value");
    return real_double(std::sqrt(flt().real()));
  }
  if (sgn(rat().im) != 0 || sgn(rat().re) < 0)
    throw std::domain_error("sqrt_positive needs a real nonnegative value");
  mpq_class r;
  if (!exact_sqrt(rat().re, &r))
    throw std::domain_error("no exact rational square root of " + rat().re.get_str());
  return rational(r);
}

double Scalar::real() const {
  if (backend() == Backend::float64) return flt().real();
  return rat().re.get_d();
}

double Scalar::imag() const {
  if (backend() == Backend::float64) return flt().imag();
  return rat().im.get_d();
}

const mpq_class& Scalar::rat_re() const {
  if (backend() != Backend::exact_rational)
    throw std::logic_error("rat_re on float64 scalar");
  return rat().re;
}

const mpq_class& Scalar::rat_im() const {
  if (backend() != Backend::exact_rational)
    throw std::logic_error("rat_im on float64 scalar");
  return rat().im;
}

double Scalar::abs_max() const {
  return std::max(std::abs(real()), std::abs(imag()));
}

Scalar Scalar::operator-() const {
  if (backend() == Backend::float64) return Scalar(-flt());
  return Scalar(RationalComplex{-rat().re, -rat().im});
}

void check_same_backend(const Scalar& a, const Scalar& b) {
  if (a.backend() != b.backend())
    throw std::logic_error("mixed scalar backends (" + backend_name(a.backend()) +
                           " vs " + backend_name(b.backend()) + ")");
}

Scalar& Scalar::operator+=(const Scalar& o) {
  check_same_backend(*this, o);
  if (backend() == Backend::float64) {
    v_ = flt() + o.flt();
  } else {
    v_ = RationalComplex{rat().re + o.rat().re, rat().im + o.rat().im};
  }
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  check_same_backend(*this, o);
  if (backend() == Backend::float64) {
    v_ = flt() - o.flt();
  } else {
    v_ = RationalComplex{rat().re - o.rat().re, rat().im - o.rat().im};
  }
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  check_same_backend(*this, o);
  if (backend() == Backend::float64) {
    v_ = flt() * o.flt();
  } else {
    const RationalComplex& a = rat();
    const RationalComplex& b = o.rat();
    v_ = RationalComplex{a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) {
  check_same_backend(*this, o);
  if (o.is_zero()) throw std::domain_error("scalar division by zero");
  if (backend() == Backend::float64) {
    v_ = flt() / o.flt();
  } else {
    const RationalComplex& a = rat();
    const RationalComplex& b = o.rat();
    mpq_class n = b.re * b.re + b.im * b.im;
    v_ = RationalComplex{(a.re * b.re + a.im * b.im) / n,
                         (a.im * b.re - a.re * b.im) / n};
  }
  return *this;
}

bool Scalar::operator==(const Scalar& o) const {
  if (backend() != o.backend()) return false;
  if (backend() == Backend::float64) return flt() == o.flt();
  return rat().re == o.rat().re && rat().im == o.rat().im;
}

bool Scalar::approx_equal(const Scalar& o, double tol) const {
  check_same_backend(*this, o);
  if (backend() == Backend::exact_rational) return *this == o;
  return std::abs(flt().real() - o.flt().real()) <= tol &&
         std::abs(flt().imag() - o.flt().imag()) <= tol;
}

namespace {
std::string rat_str(const mpq_class& q) { return q.get_str(); }
}  // namespace

std::string Scalar::to_string() const {
  if (backend() == Backend::exact_rational) {
    const RationalComplex& q = rat();
    if (sgn(q.im) == 0) return rat_str(q.re);
    if (sgn(q.re) == 0) return rat_str(q.im) + "*i";
    std::string s = rat_str(q.re);
    if (sgn(q.im) > 0) s += "+";
    return s + rat_str(q.im) + "*i";
  }
  double re = flt().real(), im = flt().imag();
  if (im == 0.0) return format_double(re);
  if (re == 0.0) return format_double(im) + "*i";
  std::string s = format_double(re);
  if (im > 0.0) s += "+";
  return s + format_double(im) + "*i";
}

Scalar factorial_scalar(unsigned n, Backend b) {
  if (b == Backend::exact_rational) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Scalar::rational(mpq_class(f));
  }
  double f = 1.0;
  for (unsigned k = 2; k <= n; ++k) f *= k;
  return Scalar::real_double(f);
}

Scalar double_factorial_odd(unsigned n, Backend b) {
  // (2n-1)!! with the empty product (n = 0) equal to 1.
  if (b == Backend::exact_rational) {
    mpz_class f(1);
    for (unsigned k = 1; k <= n; ++k) f *= 2 * k - 1;
    return Scalar::rational(mpq_class(f));
  }
  double f = 1.0;
  for (unsigned k = 1; k <= n; ++k) f *= 2.0 * k - 1.0;
  return Scalar::real_double(f);
}

}  // namespace starflow
