#include "starflow/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "starflow/star.hpp"

namespace starflow {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool poly_touches_system(const Polynomial& p) {
  for (const auto& [mono, c] : p.terms())
    if (mono.exponent(0) != 0 || mono.exponent(1) != 0) return true;
  return false;
}

bool series_touches_system(const FormalSeries& s) {
  for (int k = 0; k <= s.order(); ++k)
    if (poly_touches_system(s.at(k))) return true;
  return false;
}

int bath_degree(const FormalSeries& s) {
  int d = 0;
  for (int k = 0; k <= s.order(); ++k)
    for (const auto& [mono, c] : s.at(k).terms())
      d = std::max(d, mono.exponent(2) + mono.exponent(3));
  return d;
}

Scalar real_positive_or_throw(const Scalar& s, const char* what) {
  if (!s.is_real() || !(s.real() > 0.0))
    throw std::domain_error(std::string(what) + " must be a positive real, got " +
                            s.to_string());
  return s;
}

Polynomial bath_energy(const Parameters& params) {
  Backend b = params.backend();
  Polynomial qB = Polynomial::variable(FrameId::darboux, 2, b);
  Polynomial pB = Polynomial::variable(FrameId::darboux, 3, b);
  Scalar half = Scalar::ratio(1, 2, b);
  return (pB * pB).scaled(half / params.m()) +
         (qB * qB).scaled(half * params.m() * params.nu() * params.nu());
}

// sech(u) and tanh(u) for u = alpha hbar as constant series of the given
// order, by dividing the explicit cosh/sinh expansions.
void hyperbolic_pair(const Scalar& alpha, Backend b, int order, FormalSeries* sech,
                     FormalSeries* tanh) {
  FormalSeries ch(FrameId::darboux, b, order);
  FormalSeries sh(FrameId::darboux, b, order);
  Scalar upow = Scalar::one(b);
  for (int k = 0; k <= order; ++k) {
    Scalar c = upow / factorial_scalar(static_cast<unsigned>(k), b);
    Polynomial coeff = Polynomial::constant(FrameId::darboux, c);
    if (k % 2 == 0)
      ch.set(k, coeff);
    else
      sh.set(k, coeff);
    upow *= alpha;
  }
  *sech = ch.inverse();
  *tanh = sh * *sech;
}

GaussianFamilyFunction star_with_family(const FormalSeries& poly_side,
                                        const GaussianFamilyFunction& fam,
                                        bool poly_on_left) {
  if (poly_side.frame() != FrameId::darboux)
    throw std::invalid_argument("family products live in the Darboux frame");
  if (series_touches_system(poly_side))
    throw std::invalid_argument("family products take bath observables only");
  if (poly_side.order() != fam.order())
    throw std::logic_error("family product: truncation orders differ");

  Backend b = poly_side.backend();
  int n = poly_side.order();

  // (i/2)^r hbar^r / r! * sum_k C(r,k) (-1)^{r-k}
  //   d_qB^k d_pB^{r-k} (left) * d_pB^k d_qB^{r-k} (right)
  // with the polynomial side taking the role dictated by its position.
  int max_r = std::min(n, bath_degree(poly_side));

  // derivative grids: dpoly[k][l] = d_qB^k d_pB^l poly, dfam likewise
  std::vector<std::vector<FormalSeries>> dpoly(
      max_r + 1, std::vector<FormalSeries>(max_r + 1, poly_side));
  std::vector<std::vector<GaussianFamilyFunction>> dfam(
      max_r + 1, std::vector<GaussianFamilyFunction>(max_r + 1, fam));
  VarRef qb{FrameId::darboux, 2}, pb{FrameId::darboux, 3};
  for (int k = 0; k <= max_r; ++k) {
    if (k > 0) {
      dpoly[k][0] = differentiate(dpoly[k - 1][0], qb);
      dfam[k][0] = dfam[k - 1][0].derivative(2);
    }
    for (int l = 1; k + l <= max_r; ++l) {
      dpoly[k][l] = differentiate(dpoly[k][l - 1], pb);
      dfam[k][l] = dfam[k][l - 1].derivative(3);
    }
  }

  FormalSeries result = poly_side * fam.prefactor();
  Scalar ihalf = Scalar::imaginary_unit(b) * Scalar::ratio(1, 2, b);
  Scalar ihalf_pow = Scalar::one(b);
  for (int r = 1; r <= max_r; ++r) {
    ihalf_pow *= ihalf;
    Scalar base = ihalf_pow / factorial_scalar(static_cast<unsigned>(r), b);
    Scalar binom = Scalar::one(b);  // C(r, k), updated multiplicatively
    for (int k = 0; k <= r; ++k) {
      if (k > 0)
        binom = binom * Scalar::integer(r - k + 1, b) / Scalar::integer(k, b);
      Scalar sign = ((r - k) % 2 == 0) ? Scalar::one(b) : -Scalar::one(b);
      // polynomial side: qB-derivatives k, pB-derivatives r-k when on the
      // left; the mirrored assignment when on the right
      const FormalSeries& pd = poly_on_left ? dpoly[k][r - k] : dpoly[r - k][k];
      if (pd.is_zero()) continue;
      const GaussianFamilyFunction& gd =
          poly_on_left ? dfam[r - k][k] : dfam[k][r - k];
      result += (pd * gd.prefactor()).scaled(base * binom * sign).shifted_up(r);
    }
  }
  return GaussianFamilyFunction(result, fam.a(), fam.b());
}

}  // namespace

GaussianFamilyFunction::GaussianFamilyFunction(FormalSeries prefactor, FormalSeries a,
                                               FormalSeries b)
    : prefactor_(std::move(prefactor)), a_(std::move(a)), b_(std::move(b)) {
  if (prefactor_.frame() != FrameId::darboux)
    throw std::invalid_argument("Gaussian family lives in the Darboux frame");
  if (series_touches_system(prefactor_))
    throw std::invalid_argument("Gaussian family prefactor touches system variables");
  for (const FormalSeries* e : {&a_, &b_}) {
    if (!e->is_constant() || e->order() != prefactor_.order())
      throw std::invalid_argument("exponent coefficients must be constant series "
                                  "of the prefactor's order");
    real_positive_or_throw(e->at(0).constant_term(), "exponent coefficient");
  }
}

void GaussianFamilyFunction::check_same_shape(const GaussianFamilyFunction& o) const {
  if (!(a_ == o.a_) || !(b_ == o.b_))
    throw std::logic_error("Gaussian families with different weights do not combine");
}

GaussianFamilyFunction GaussianFamilyFunction::derivative(int var) const {
  if (var != 2 && var != 3)
    throw std::invalid_argument("Gaussian family derivatives are d/dqB and d/dpB");
  Backend bk = backend();
  const FormalSeries& coeff = (var == 2) ? a_ : b_;
  Polynomial v = Polynomial::variable(FrameId::darboux, var, bk);
  FormalSeries dp = differentiate(prefactor_, VarRef{FrameId::darboux, var});
  dp -= (coeff * prefactor_).scaled_poly(v).scaled(Scalar::integer(2, bk));
  return GaussianFamilyFunction(dp, a_, b_);
}

GaussianFamilyFunction GaussianFamilyFunction::times_poly(const Polynomial& p) const {
  if (poly_touches_system(p))
    throw std::invalid_argument("Gaussian family multiplication by a system polynomial");
  return GaussianFamilyFunction(prefactor_.scaled_poly(p), a_, b_);
}

GaussianFamilyFunction GaussianFamilyFunction::times_series(const FormalSeries& c) const {
  return GaussianFamilyFunction(prefactor_ * c, a_, b_);
}

GaussianFamilyFunction GaussianFamilyFunction::operator+(
    const GaussianFamilyFunction& o) const {
  check_same_shape(o);
  return GaussianFamilyFunction(prefactor_ + o.prefactor_, a_, b_);
}

GaussianFamilyFunction GaussianFamilyFunction::operator-(
    const GaussianFamilyFunction& o) const {
  check_same_shape(o);
  return GaussianFamilyFunction(prefactor_ - o.prefactor_, a_, b_);
}

GaussianFamilyFunction GaussianFamilyFunction::canonicalized() const {
  Backend bk = backend();
  int n = order();
  FormalSeries a0 = FormalSeries::constant(FrameId::darboux, a_.at(0).constant_term(), n);
  FormalSeries b0 = FormalSeries::constant(FrameId::darboux, b_.at(0).constant_term(), n);
  FormalSeries da = a_ - a0;
  FormalSeries db = b_ - b0;
  if (da.is_zero() && db.is_zero()) return *this;

  // exp(-da qB^2 - db pB^2) terminates per hbar-order since da, db = O(hbar)
  Polynomial qB = Polynomial::variable(FrameId::darboux, 2, bk);
  Polynomial pB = Polynomial::variable(FrameId::darboux, 3, bk);
  FormalSeries base = -(da.scaled_poly(qB * qB) + db.scaled_poly(pB * pB));
  FormalSeries folded = FormalSeries::constant(FrameId::darboux, Scalar::one(bk), n);
  FormalSeries term = folded;
  for (int j = 1; j <= n; ++j) {
    term = (term * base).scaled(Scalar::ratio(1, j, bk));
    if (term.is_zero()) break;
    folded += term;
  }
  return GaussianFamilyFunction(prefactor_ * folded, a0, b0);
}

std::complex<double> GaussianFamilyFunction::evaluate_order(int k, double qb,
                                                            double pb) const {
  for (int j = 1; j <= a_.order(); ++j)
    if (!a_.at(j).is_zero() || !b_.at(j).is_zero())
      return canonicalized().evaluate_order(k, qb, pb);

  Backend bk = backend();
  Vec4 point;
  if (bk == Backend::float64) {
    point = {Scalar::real_double(0.0), Scalar::real_double(0.0),
             Scalar::real_double(qb), Scalar::real_double(pb)};
  } else {
    point = {Scalar::rational(0), Scalar::rational(0),
             Scalar::rational(mpq_class(qb)), Scalar::rational(mpq_class(pb))};
  }
  std::complex<double> value = prefactor_.at(k).evaluate(point).to_complex();
  double a0 = a_.at(0).constant_term().real();
  double b0 = b_.at(0).constant_term().real();
  return value * std::exp(-a0 * qb * qb - b0 * pb * pb);
}

GaussianFamilyFunction family_star(const FormalSeries& f,
                                   const GaussianFamilyFunction& g) {
  return star_with_family(f, g, true);
}

GaussianFamilyFunction family_star(const GaussianFamilyFunction& f,
                                   const FormalSeries& g) {
  return star_with_family(g, f, false);
}

GaussianFamilyFunction star_exponential_closed_form(const Scalar& beta,
                                                    const Parameters& params,
                                                    int order) {
  Backend bk = params.backend();
  if (beta.backend() != bk)
    throw std::logic_error("beta and parameters use different backends");
  real_positive_or_throw(beta, "beta");
  real_positive_or_throw(params.nu(), "nu");

  int inner = order + 2;
  Scalar alpha = beta * params.nu() * Scalar::ratio(1, 2, bk);
  FormalSeries sech(FrameId::darboux, bk, inner), tanh(FrameId::darboux, bk, inner);
  hyperbolic_pair(alpha, bk, inner, &sech, &tanh);
  FormalSeries g = tanh.shifted_down().scaled(Scalar::one(bk) / alpha);
  FormalSeries one_minus_g =
      FormalSeries::constant(FrameId::darboux, Scalar::one(bk), inner) - g;

  Polynomial hb = bath_energy(params);
  FormalSeries pref(FrameId::darboux, bk, inner);
  Polynomial hb_pow = Polynomial::constant(FrameId::darboux, Scalar::one(bk));
  Scalar beta_over_fact = Scalar::one(bk);
  for (int k = 0; 2 * k <= inner; ++k) {
    if (k > 0) {
      hb_pow = hb_pow * hb;
      beta_over_fact = beta_over_fact * beta / Scalar::integer(k, bk);
    }
    pref += one_minus_g.pow(static_cast<unsigned>(k))
                .scaled(beta_over_fact)
                .scaled_poly(hb_pow);
  }
  pref = sech * pref;

  Scalar half = Scalar::ratio(1, 2, bk);
  Scalar a = beta * params.m() * params.nu() * params.nu() * half;
  Scalar b = beta * half / params.m();
  return GaussianFamilyFunction(
      pref.truncated(order), FormalSeries::constant(FrameId::darboux, a, order),
      FormalSeries::constant(FrameId::darboux, b, order));
}

std::vector<double> star_exp_ode_residual(
    const Scalar& beta, const Parameters& params, int order,
    const std::vector<std::pair<double, double>>& points) {
  Backend bk = params.backend();
  GaussianFamilyFunction fam = star_exponential_closed_form(beta, params, order);

  int inner = order + 2;
  Scalar alpha = beta * params.nu() * Scalar::ratio(1, 2, bk);
  FormalSeries sech(FrameId::darboux, bk, inner), tanh(FrameId::darboux, bk, inner);
  hyperbolic_pair(alpha, bk, inner, &sech, &tanh);

  // d/dbeta of sech(u) exp(-(2 H_B / hbar nu) tanh u) is
  //   (-(hbar nu / 2) tanh(u) - H_B sech(u)^2) times the function itself
  Polynomial hb = bath_energy(params);
  FormalSeries mult =
      -(tanh.scaled(params.nu() * Scalar::ratio(1, 2, bk)).shifted_up(1) +
        (sech * sech).scaled_poly(hb))
           .truncated(order);
  FormalSeries residual =
      fam.prefactor() * mult +
      family_star(FormalSeries::of_polynomial(hb, order), fam).prefactor();

  std::vector<double> out(static_cast<std::size_t>(order) + 1, 0.0);
  GaussianFamilyFunction rfam(residual, fam.a(), fam.b());
  for (int k = 0; k <= order; ++k)
    for (const auto& [qb, pb] : points)
      out[static_cast<std::size_t>(k)] =
          std::max(out[static_cast<std::size_t>(k)],
                   std::abs(rfam.evaluate_order(k, qb, pb)));
  return out;
}

FormalSeries trace_pairing(const GaussianFamilyFunction& g, const Polynomial& f) {
  if (poly_touches_system(f))
    throw std::invalid_argument("trace pairing takes bath observables only");
  if (g.backend() != Backend::float64)
    throw std::logic_error(
        "trace pairing carries a factor pi and needs the float backend");
  GaussianFamilyFunction gc = g.canonicalized();
  Scalar a0 = gc.a().at(0).constant_term();
  Scalar b0 = gc.b().at(0).constant_term();
  real_positive_or_throw(a0, "exponent coefficient");
  real_positive_or_throw(b0, "exponent coefficient");
  Scalar mass = Scalar::real_double(kPi / std::sqrt(a0.real() * b0.real()));

  FormalSeries h = gc.prefactor().scaled_poly(f);
  FormalSeries out(FrameId::darboux, Backend::float64, h.order());
  for (int k = 0; k <= h.order(); ++k)
    out.set(k, Polynomial::constant(FrameId::darboux,
                                    gaussian_moment(h.at(k), a0, b0) * mass));
  return out;
}

PartitionFunction partition_function(double beta, const Parameters& params,
                                     int order) {
  if (params.backend() != Backend::float64)
    throw std::logic_error("partition function needs the float backend");
  GaussianFamilyFunction fam =
      star_exponential_closed_form(Scalar::real_double(beta), params, order + 1);
  Polynomial one = Polynomial::constant(FrameId::darboux, Scalar::real_double(1.0));
  FormalSeries mu_full = trace_pairing(fam, one);

  PartitionFunction out{mu_full.truncated(order),
                        Scalar::zero(Backend::float64),
                        FormalSeries(FrameId::darboux, Backend::float64, order)};
  Scalar inv_two_pi = Scalar::real_double(1.0 / (2.0 * kPi));
  out.z_principal = mu_full.at(0).constant_term() * inv_two_pi;
  for (int k = 0; k <= order; ++k)
    out.z_regular.set(
        k, Polynomial::constant(FrameId::darboux,
                                mu_full.at(k + 1).constant_term() * inv_two_pi));
  return out;
}

BathState::BathState(Variant v, const Parameters& params)
    : variant_(v),
      params_(params),
      frames_(params, params.backend()),
      q0_(Scalar::zero(params.backend())),
      p0_(Scalar::zero(params.backend())),
      beta_(Scalar::zero(params.backend())) {}

BathState BathState::delta(const Scalar& q0, const Scalar& p0,
                           const Parameters& params) {
  BathState s(Variant::delta, params);
  s.q0_ = q0;
  s.p0_ = p0;
  return s;
}

BathState BathState::deformed_delta(const Scalar& q0, const Scalar& p0,
                                    const Parameters& params) {
  BathState s(Variant::deformed_delta, params);
  s.q0_ = q0;
  s.p0_ = p0;
  return s;
}

BathState BathState::kms(const Scalar& beta, const Parameters& params) {
  BathState s(Variant::kms, params);
  s.beta_ = real_positive_or_throw(beta, "beta");
  return s;
}

BathState::BathState(const BathState& o)
    : variant_(o.variant_),
      params_(o.params_),
      frames_(o.frames_),
      q0_(o.q0_),
      p0_(o.p0_),
      beta_(o.beta_) {
  std::lock_guard<std::mutex> lock(o.cache_mutex_);
  cache_ = o.cache_;
}

BathState& BathState::operator=(const BathState& o) {
  if (this == &o) return *this;
  std::scoped_lock lock(cache_mutex_, o.cache_mutex_);
  variant_ = o.variant_;
  params_ = o.params_;
  frames_ = o.frames_;
  q0_ = o.q0_;
  p0_ = o.p0_;
  beta_ = o.beta_;
  cache_ = o.cache_;
  return *this;
}

std::string BathState::description() const {
  std::ostringstream os;
  switch (variant_) {
    case Variant::delta:
      os << "delta(" << q0_.to_string() << ", " << p0_.to_string() << ")";
      break;
    case Variant::deformed_delta:
      os << "deformed-delta(" << q0_.to_string() << ", " << p0_.to_string() << ")";
      break;
    case Variant::kms:
      os << "kms(beta=" << beta_.to_string() << ")";
      break;
  }
  return os.str();
}

FormalSeries BathState::moment(const Monomial& mono, int order) const {
  if (mono.exponent(0) != 0 || mono.exponent(1) != 0)
    throw std::invalid_argument("state moment of a system monomial " +
                                mono.to_string(FrameId::darboux));
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find({mono, order});
    if (it != cache_.end()) return it->second;
  }

  Backend bk = params_.backend();
  FormalSeries value(FrameId::darboux, bk, order);
  switch (variant_) {
    case Variant::delta: {
      Scalar v = q0_.pow(static_cast<unsigned>(mono.exponent(2))) *
                 p0_.pow(static_cast<unsigned>(mono.exponent(3)));
      value = FormalSeries::constant(FrameId::darboux, v, order);
      break;
    }
    case Variant::deformed_delta: {
      Polynomial p(FrameId::darboux, bk);
      p.add_term(mono, Scalar::one(bk));
      FormalSeries dressed = apply_exp_laplacian(FormalSeries::of_polynomial(p, order),
                                                 LaplacianSpec::bath(), +1, &frames_);
      Vec4 point{Scalar::zero(bk), Scalar::zero(bk), q0_, p0_};
      for (int k = 0; k <= order; ++k)
        value.set(k, Polynomial::constant(FrameId::darboux,
                                          dressed.at(k).evaluate(point)));
      break;
    }
    case Variant::kms: {
      if (mono.is_constant()) {
        value = FormalSeries::constant(FrameId::darboux, Scalar::one(bk), order);
        break;
      }
      GaussianFamilyFunction fam =
          star_exponential_closed_form(beta_, params_, order);
      Scalar a0 = fam.a().at(0).constant_term();
      Scalar b0 = fam.b().at(0).constant_term();
      Polynomial mono_poly(FrameId::darboux, bk);
      mono_poly.add_term(mono, Scalar::one(bk));
      FormalSeries numer(FrameId::darboux, bk, order);
      FormalSeries denom(FrameId::darboux, bk, order);
      for (int k = 0; k <= order; ++k) {
        numer.set(k, Polynomial::constant(
                         FrameId::darboux,
                         gaussian_moment(fam.prefactor().at(k) * mono_poly, a0, b0)));
        denom.set(k, Polynomial::constant(FrameId::darboux,
                                          gaussian_moment(fam.prefactor().at(k), a0, b0)));
      }
      value = numer * denom.inverse();
      break;
    }
  }

  std::lock_guard<std::mutex> lock(cache_mutex_);
  cache_.emplace(std::make_pair(mono, order), value);
  return value;
}

FormalSeries bath_expectation(const FormalSeries& f, const BathState& state) {
  FormalSeries fd = f.frame() == FrameId::darboux
                        ? f
                        : to_frame(f, FrameId::darboux, state.frames());
  int n = fd.order();
  Backend bk = fd.backend();
  FormalSeries out(FrameId::darboux, bk, n);
  for (int k = 0; k <= n; ++k) {
    for (const auto& [mono, c] : fd.at(k).terms()) {
      Monomial sys({mono.exponent(0), mono.exponent(1), 0, 0});
      Monomial bath({0, 0, mono.exponent(2), mono.exponent(3)});
      Polynomial sys_poly(FrameId::darboux, bk);
      sys_poly.add_term(sys, c);
      out += state.moment(bath, n).scaled_poly(sys_poly).shifted_up(k);
    }
  }
  return out;
}

SeriesSign positivity_check(const BathState& state, const FormalSeries& f) {
  if (f.frame() != FrameId::darboux && f.frame() != FrameId::complex_factor)
    throw std::invalid_argument(
        "bath observables live in the darboux or complex-factor frame");
  if (series_touches_system(f))
    throw std::invalid_argument("positivity check takes bath observables only");
  FormalSeries squared = weyl_star(f.conj(), f, &state.frames());
  return series_sign(bath_expectation(squared, state));
}

std::vector<double> symmetric_eigenvalues(std::vector<std::vector<double>> a) {
  std::size_t n = a.size();
  for (const auto& row : a)
    if (row.size() != n) throw std::invalid_argument("eigenvalues of a non-square matrix");

  auto off_diagonal = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a[i][j] * a[i][j];
    return s;
  };
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale += a[i][j] * a[i][j];

  for (int sweep = 0; sweep < 64 && off_diagonal() > 1e-30 * (1.0 + scale); ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          double aip = a[i][p], aiq = a[i][q];
          a[i][p] = c * aip - s * aiq;
          a[i][q] = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          double api = a[p][i], aqi = a[q][i];
          a[p][i] = c * api - s * aqi;
          a[q][i] = s * api + c * aqi;
        }
      }
    }
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a[i][i];
  std::sort(eig.begin(), eig.end());
  return eig;
}

CpSampleReport cp_sample_check(const BathState& state, const MatrixObservable& f,
                               const std::vector<std::pair<double, double>>& system_points,
                               double eigenvalue_floor) {
  MatrixObservable squared =
      matrix_star(StarProduct::weyl(), f.adjoint(), f, &state.frames());
  std::size_t n = squared.size();
  int order = squared.order();

  std::vector<FormalSeries> reduced;
  reduced.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      reduced.push_back(bath_expectation(squared.at(i, j), state));

  CpSampleReport report{true, std::numeric_limits<double>::infinity(), 0.0, 0};
  bool any_matrix = false;
  for (const auto& [qs, ps] : system_points) {
    Vec4 point{Scalar::real_double(qs), Scalar::real_double(ps),
               Scalar::real_double(0.0), Scalar::real_double(0.0)};
    for (int k = 0; k <= order; ++k) {
      std::vector<std::vector<std::complex<double>>> m(
          n, std::vector<std::complex<double>>(n));
      double norm = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          m[i][j] = reduced[i * n + j].at(k).evaluate(point).to_complex();
          norm = std::max(norm, std::abs(m[i][j]));
        }
      if (norm <= 1e-12) continue;  // vanishing order; look deeper

      // lowest nonvanishing order found: PSD check via the real embedding
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          report.hermiticity_defect = std::max(
              report.hermiticity_defect, std::abs(m[i][j] - std::conj(m[j][i])));

      std::vector<std::vector<double>> embed(2 * n, std::vector<double>(2 * n));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          double re = 0.5 * (m[i][j].real() + m[j][i].real());
          double im = 0.5 * (m[i][j].imag() - m[j][i].imag());
          embed[i][j] = re;
          embed[i + n][j + n] = re;
          embed[i][j + n] = -im;
          embed[i + n][j] = im;
        }
      double lowest = symmetric_eigenvalues(std::move(embed)).front();
      report.min_eigenvalue = std::min(report.min_eigenvalue, lowest);
      any_matrix = true;
      break;  // only the lowest nonvanishing order is constrained
    }
    ++report.points_checked;
  }
  if (!any_matrix) report.min_eigenvalue = 0.0;  // identically zero observable
  report.passed = report.min_eigenvalue >= eigenvalue_floor;
  return report;
}

}  // namespace starflow
