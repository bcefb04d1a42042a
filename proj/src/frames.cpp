#include "starflow/frames.hpp"

namespace starflow {

namespace {

const std::array<std::string, kDim> kDarbouxVars = {"qS", "pS", "qB", "pB"};
const std::array<std::string, kDim> kNormalVars = {"q1", "p1", "q2", "p2"};
const std::array<std::string, kDim> kZNormalVars = {"z1", "zb1", "z2", "zb2"};
const std::array<std::string, kDim> kZFactorVars = {"zS", "zbS", "zB", "zbB"};

const std::array<int, kDim> kIdPerm = {0, 1, 2, 3};
const std::array<int, kDim> kSwapPerm = {1, 0, 3, 2};

const std::array<std::pair<int, int>, 2> kComplexPairs = {{{0, 1}, {2, 3}}};

std::optional<Scalar> try_sqrt(const Scalar& s) {
  try {
    return s.sqrt_positive();
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
}

}  // namespace

std::string frame_name(FrameId f) {
  switch (f) {
    case FrameId::darboux: return "darboux";
    case FrameId::normal: return "normal";
    case FrameId::complex_normal: return "complex-normal";
    case FrameId::complex_factor: return "complex-factor";
  }
  throw std::logic_error("bad frame id");
}

std::optional<FrameId> frame_by_name(std::string_view name) {
  if (name == "darboux") return FrameId::darboux;
  if (name == "normal") return FrameId::normal;
  if (name == "complex-normal") return FrameId::complex_normal;
  if (name == "complex-factor") return FrameId::complex_factor;
  return std::nullopt;
}

const std::array<std::string, kDim>& frame_vars(FrameId f) {
  switch (f) {
    case FrameId::darboux: return kDarbouxVars;
    case FrameId::normal: return kNormalVars;
    case FrameId::complex_normal: return kZNormalVars;
    case FrameId::complex_factor: return kZFactorVars;
  }
  throw std::logic_error("bad frame id");
}

bool frame_is_complex(FrameId f) {
  return f == FrameId::complex_normal || f == FrameId::complex_factor;
}

const std::array<int, kDim>& frame_conj_perm(FrameId f) {
  return frame_is_complex(f) ? kSwapPerm : kIdPerm;
}

Mat4 frame_poisson(FrameId f, Backend b) {
  Mat4 lam;
  for (auto& row : lam)
    for (auto& s : row) s = Scalar::zero(b);
  if (frame_is_complex(f)) {
    // {z_k, zbar_k} = 2/i = -2i
    Scalar m2i = Scalar::integer(-2, b) * Scalar::imaginary_unit(b);
    lam[0][1] = m2i;
    lam[1][0] = -m2i;
    lam[2][3] = m2i;
    lam[3][2] = -m2i;
  } else {
    Scalar one = Scalar::one(b);
    lam[0][1] = one;
    lam[1][0] = -one;
    lam[2][3] = one;
    lam[3][2] = -one;
  }
  return lam;
}

const std::array<std::pair<int, int>, 2>& frame_complex_pairs(FrameId f) {
  if (!frame_is_complex(f))
    throw std::invalid_argument("frame " + frame_name(f) + " has no complex pairs");
  return kComplexPairs;
}

std::optional<VarRef> resolve_variable(std::string_view name) {
  for (FrameId f : {FrameId::darboux, FrameId::normal, FrameId::complex_normal,
                    FrameId::complex_factor}) {
    const auto& vars = frame_vars(f);
    for (int i = 0; i < kDim; ++i)
      if (vars[i] == name) return VarRef{f, i};
  }
  return std::nullopt;
}

Parameters Parameters::from_float(double m, double nu, double kappa) {
  if (!(m > 0.0) || !(nu > 0.0))
    throw std::domain_error("parameters require m > 0 and nu > 0");
  if (!(kappa >= 0.0)) throw std::domain_error("parameters require kappa >= 0");
  Parameters p;
  p.m_ = Scalar::real_double(m);
  p.nu_ = Scalar::real_double(nu);
  p.kappa_ = Scalar::real_double(kappa);
  p.nu_kappa_ = Scalar::real_double(std::sqrt(nu * nu + 2.0 * kappa / m));
  return p;
}

Parameters Parameters::from_exact(mpq_class m, mpq_class nu, mpq_class nu_kappa) {
  if (sgn(m) <= 0 || sgn(nu) <= 0)
    throw std::domain_error("parameters require m > 0 and nu > 0");
  if (nu_kappa < nu)
    throw std::domain_error("parameters require nu_kappa >= nu (kappa >= 0)");
  Parameters p;
  mpq_class kappa = m * (nu_kappa * nu_kappa - nu * nu) / 2;
  p.m_ = Scalar::rational(m);
  p.nu_ = Scalar::rational(nu);
  p.kappa_ = Scalar::rational(kappa);
  p.nu_kappa_ = Scalar::rational(nu_kappa);
  return p;
}

Mat4 mat_identity(Backend b) {
  Mat4 m;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) m[i][j] = Scalar::integer(i == j ? 1 : 0, b);
  return m;
}

Mat4 mat_mul(const Mat4& a, const Mat4& b) {
  Backend be = a[0][0].backend();
  Mat4 r;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      Scalar s = Scalar::zero(be);
      for (int k = 0; k < kDim; ++k) s += a[i][k] * b[k][j];
      r[i][j] = s;
    }
  return r;
}

Vec4 mat_apply(const Mat4& a, const Vec4& v) {
  Backend be = a[0][0].backend();
  Vec4 r;
  for (int i = 0; i < kDim; ++i) {
    Scalar s = Scalar::zero(be);
    for (int j = 0; j < kDim; ++j) s += a[i][j] * v[j];
    r[i] = s;
  }
  return r;
}

FrameCatalog::FrameCatalog(const Parameters& params, Backend backend)
    : params_(params), backend_(backend) {
  if (params.backend() != backend)
    throw std::logic_error("parameter backend does not match catalog backend");
  Scalar zero = Scalar::zero(backend);
  Scalar half = Scalar::ratio(1, 2, backend);
  Scalar i_unit = Scalar::imaginary_unit(backend);

  for (auto& e : entries_) {
    e.available = false;
    for (int r = 0; r < kDim; ++r)
      for (int c = 0; c < kDim; ++c) {
        e.y_of_x[r][c] = zero;
        e.x_of_y[r][c] = zero;
      }
  }

  // Darboux chart is its own transport.
  auto& dar = entries_[static_cast<int>(FrameId::darboux)];
  dar.available = true;
  dar.y_of_x = mat_identity(backend);
  dar.x_of_y = mat_identity(backend);

  // Normal modes: q1 = (qS+qB)/sqrt2 etc. The matrix is a symmetric
  // involution, so it is its own inverse.
  if (auto inv_sqrt2 = try_sqrt(half)) {
    auto& nor = entries_[static_cast<int>(FrameId::normal)];
    nor.available = true;
    const int sign[kDim][kDim] = {
        {1, 0, 1, 0}, {0, 1, 0, 1}, {1, 0, -1, 0}, {0, 1, 0, -1}};
    for (int r = 0; r < kDim; ++r)
      for (int c = 0; c < kDim; ++c)
        if (sign[r][c] != 0)
          nor.y_of_x[r][c] = Scalar::integer(sign[r][c], backend) * *inv_sqrt2;
    nor.x_of_y = nor.y_of_x;
  }

  // Complex normal modes: z_k = sqrt(m nu_k) q_k + i p_k / sqrt(m nu_k) with
  // nu_1 = nu, nu_2 = nu_kappa. Expressed over Darboux coordinates the
  // entries are A_k = sqrt(m nu_k / 2) and B_k = 1 / sqrt(2 m nu_k).
  {
    Scalar mnu1 = params.m() * params.nu();
    Scalar mnu2 = params.m() * params.nu_kappa();
    auto a1 = try_sqrt(mnu1 * half);
    auto a2 = try_sqrt(mnu2 * half);
    auto b1 = try_sqrt(Scalar::one(backend) / (mnu1 + mnu1));
    auto b2 = try_sqrt(Scalar::one(backend) / (mnu2 + mnu2));
    if (a1 && a2 && b1 && b2) {
      auto& zn = entries_[static_cast<int>(FrameId::complex_normal)];
      zn.available = true;
      Scalar A[2] = {*a1, *a2}, B[2] = {*b1, *b2};
      for (int k = 0; k < 2; ++k) {
        int z = 2 * k, zb = 2 * k + 1;
        int bath_sign = (k == 0) ? 1 : -1;
        Scalar bs = Scalar::integer(bath_sign, backend);
        zn.y_of_x[z][0] = A[k];
        zn.y_of_x[z][1] = i_unit * B[k];
        zn.y_of_x[z][2] = bs * A[k];
        zn.y_of_x[z][3] = bs * i_unit * B[k];
        zn.y_of_x[zb][0] = A[k];
        zn.y_of_x[zb][1] = -i_unit * B[k];
        zn.y_of_x[zb][2] = bs * A[k];
        zn.y_of_x[zb][3] = -bs * i_unit * B[k];
        zn.x_of_y[0][z] = B[k] * half;
        zn.x_of_y[0][zb] = B[k] * half;
        zn.x_of_y[1][z] = -i_unit * A[k] * half;
        zn.x_of_y[1][zb] = i_unit * A[k] * half;
        zn.x_of_y[2][z] = bs * B[k] * half;
        zn.x_of_y[2][zb] = bs * B[k] * half;
        zn.x_of_y[3][z] = -bs * i_unit * A[k] * half;
        zn.x_of_y[3][zb] = bs * i_unit * A[k] * half;
      }
    }
  }

  // Factorizing complex chart: both oscillators at frequency nu,
  // zS = sqrt(m nu) qS + i pS / sqrt(m nu), zB likewise on the bath block.
  {
    Scalar mnu = params.m() * params.nu();
    if (auto s = try_sqrt(mnu)) {
      auto& zf = entries_[static_cast<int>(FrameId::complex_factor)];
      zf.available = true;
      Scalar sinv = Scalar::one(backend) / *s;
      for (int blk = 0; blk < 2; ++blk) {
        int z = 2 * blk, zb = 2 * blk + 1;
        int q = 2 * blk, p = 2 * blk + 1;
        zf.y_of_x[z][q] = *s;
        zf.y_of_x[z][p] = i_unit * sinv;
        zf.y_of_x[zb][q] = *s;
        zf.y_of_x[zb][p] = -i_unit * sinv;
        zf.x_of_y[q][z] = sinv * half;
        zf.x_of_y[q][zb] = sinv * half;
        zf.x_of_y[p][z] = -i_unit * *s * half;
        zf.x_of_y[p][zb] = i_unit * *s * half;
      }
    }
  }
}

const FrameCatalog::Entry& FrameCatalog::entry(FrameId f) const {
  return entries_[static_cast<int>(f)];
}

bool FrameCatalog::transport_available(FrameId f) const {
  return entry(f).available;
}

const Mat4& FrameCatalog::frame_from_darboux(FrameId f) const {
  const Entry& e = entry(f);
  if (!e.available)
    throw std::domain_error("no exact transport for frame " + frame_name(f) +
                            " under " + backend_name(backend_) + " backend");
  return e.y_of_x;
}

const Mat4& FrameCatalog::darboux_from_frame(FrameId f) const {
  const Entry& e = entry(f);
  if (!e.available)
    throw std::domain_error("no exact transport for frame " + frame_name(f) +
                            " under " + backend_name(backend_) + " backend");
  return e.x_of_y;
}

}  // namespace starflow
