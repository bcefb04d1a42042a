#pragma once

#include "starflow/series.hpp"

namespace starflow {

// Partial derivative with respect to any of the 16 named coordinates. When the
// variable lives in a different frame than f, the constant chain-rule
// coefficients are assembled from the catalog transports.
Polynomial differentiate(const Polynomial& f, VarRef var,
                         const FrameCatalog* frames = nullptr);
FormalSeries differentiate(const FormalSeries& f, VarRef var,
                           const FrameCatalog* frames = nullptr);

// Affine substitution v_i -> sum_j a[i][j] v_j + offset[i] inside one frame.
struct LinearMap {
  FrameId frame;
  Mat4 a;
  Vec4 offset;

  static LinearMap identity(FrameId frame, Backend backend);
};

Polynomial substitute_linear(const Polynomial& f, const LinearMap& map);
FormalSeries substitute_linear(const FormalSeries& f, const LinearMap& map);

// Re-expresses f over another frame's coordinates (exact when the transports
// are; throws when the exact backend lacks them).
Polynomial to_frame(const Polynomial& f, FrameId target, const FrameCatalog& frames);
FormalSeries to_frame(const FormalSeries& f, FrameId target, const FrameCatalog& frames);

// Poisson bracket via the constant tensor of f's frame,
// {f, g} = Lambda^{ab} (d_a f)(d_b g), extended hbar-bilinearly.
Polynomial poisson_bracket(const Polynomial& f, const Polynomial& g,
                           const FrameCatalog* frames = nullptr);
FormalSeries poisson_bracket(const FormalSeries& f, const FormalSeries& g,
                             const FrameCatalog* frames = nullptr);

// Normalized centered Gaussian moment of a bath-only Darboux polynomial under
// weight exp(-a qB^2 - b pB^2): <qB^{2j} pB^{2k}> = (2j-1)!!/(2a)^j (2k-1)!!/(2b)^k.
Scalar gaussian_moment(const Polynomial& f, const Scalar& a, const Scalar& b);

}  // namespace starflow
