#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "starflow/scalar.hpp"

namespace starflow {

// Phase space is the coupled two-oscillator space R^4. Four linear coordinate
// frames are supported; all share the Darboux frame as the reference chart.
enum class FrameId { darboux, normal, complex_normal, complex_factor };

inline constexpr int kDim = 4;

using Mat4 = std::array<std::array<Scalar, kDim>, kDim>;
using Vec4 = std::array<Scalar, kDim>;

std::string frame_name(FrameId f);
std::optional<FrameId> frame_by_name(std::string_view name);

// Variable names of a frame, in index order.
const std::array<std::string, kDim>& frame_vars(FrameId f);

bool frame_is_complex(FrameId f);

// Index permutation implementing complex conjugation of coordinates
// (z_k <-> zbar_k); identity on real frames.
const std::array<int, kDim>& frame_conj_perm(FrameId f);

// Constant Poisson tensor Lambda^{ij} = {y_i, y_j} in the frame's own
// coordinates. Independent of the physical parameters.
Mat4 frame_poisson(FrameId f, Backend b);

// Holomorphic/antiholomorphic index pairs (z_k, zbar_k) of a complex frame.
const std::array<std::pair<int, int>, 2>& frame_complex_pairs(FrameId f);

// Resolves one of the 16 coordinate names to (frame, index).
struct VarRef {
  FrameId frame;
  int index;
};
std::optional<VarRef> resolve_variable(std::string_view name);

// Physical parameters of the coupled oscillator pair: mass m, system/bath
// frequency nu, coupling kappa >= 0, shifted frequency
// nu_kappa = sqrt(nu^2 + 2 kappa / m).
class Parameters {
 public:
  // Float backend: nu_kappa derived from (m, nu, kappa).
  static Parameters from_float(double m, double nu, double kappa);
  // Exact backend: nu_kappa is given exactly and kappa is derived from the
  // defining relation, which is then an invariant rather than a float root.
  static Parameters from_exact(mpq_class m, mpq_class nu, mpq_class nu_kappa);

  Backend backend() const { return m_.backend(); }
  const Scalar& m() const { return m_; }
  const Scalar& nu() const { return nu_; }
  const Scalar& kappa() const { return kappa_; }
  const Scalar& nu_kappa() const { return nu_kappa_; }

  double m_d() const { return m_.real(); }
  double nu_d() const { return nu_.real(); }
  double kappa_d() const { return kappa_.real(); }
  double nu_kappa_d() const { return nu_kappa_.real(); }

 private:
  Parameters() = default;
  Scalar m_, nu_, kappa_, nu_kappa_;
};

// Linear transports between a frame and the Darboux chart. Under the exact
// backend a transport may be unavailable (irrational square roots); users must
// check availability before converting.
class FrameCatalog {
 public:
  FrameCatalog(const Parameters& params, Backend backend);

  Backend backend() const { return backend_; }
  const Parameters& params() const { return params_; }

  bool transport_available(FrameId f) const;
  // y = (frame_from_darboux) x, x = (darboux_from_frame) y.
  const Mat4& frame_from_darboux(FrameId f) const;
  const Mat4& darboux_from_frame(FrameId f) const;

 private:
  struct Entry {
    bool available = false;
    Mat4 y_of_x;
    Mat4 x_of_y;
  };
  const Entry& entry(FrameId f) const;

  Parameters params_;
  Backend backend_;
  std::array<Entry, 4> entries_;
};

Mat4 mat_identity(Backend b);
Mat4 mat_mul(const Mat4& a, const Mat4& b);
Vec4 mat_apply(const Mat4& a, const Vec4& v);

}  // namespace starflow
