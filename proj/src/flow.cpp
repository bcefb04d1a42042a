#include "starflow/flow.hpp"

#include <cmath>

namespace starflow {

FlowMatrix flow_matrix(double t, const Parameters& params) {
  double m = params.m_d(), nu = params.nu_d(), nuk = params.nu_kappa_d();
  double c1 = std::cos(nu * t), s1 = std::sin(nu * t);
  double c2 = std::cos(nuk * t), s2 = std::sin(nuk * t);
  double u1 = s1 / (m * nu), u2 = s2 / (m * nuk);
  double v1 = m * nu * s1, v2 = m * nuk * s2;
  FlowMatrix f;
  f.t = t;
  f.m = {{{0.5 * (c1 + c2), 0.5 * (u1 + u2), 0.5 * (c1 - c2), 0.5 * (u1 - u2)},
          {-0.5 * (v1 + v2), 0.5 * (c1 + c2), -0.5 * (v1 - v2), 0.5 * (c1 - c2)},
          {0.5 * (c1 - c2), 0.5 * (u1 - u2), 0.5 * (c1 + c2), 0.5 * (u1 + u2)},
          {-0.5 * (v1 - v2), 0.5 * (c1 - c2), -0.5 * (v1 + v2), 0.5 * (c1 + c2)}}};
  return f;
}

namespace {
const int kJ[kDim][kDim] = {
    {0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, -1, 0}};
}

double symplectic_defect(const FlowMatrix& f) {
  double worst = 0.0;
  // (M^T J M)_{ij} = sum_{ab} M_{ai} J_{ab} M_{bj}
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      double s = 0.0;
      for (int a = 0; a < kDim; ++a)
        for (int b = 0; b < kDim; ++b) s += f.m[a][i] * kJ[a][b] * f.m[b][j];
      worst = std::max(worst, std::abs(s - kJ[i][j]));
    }
  return worst;
}

double group_defect(const FlowMatrix& a, const FlowMatrix& b, const FlowMatrix& c) {
  double worst = 0.0;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      double s = 0.0;
      for (int k = 0; k < kDim; ++k) s += a.m[i][k] * b.m[k][j];
      worst = std::max(worst, std::abs(s - c.m[i][j]));
    }
  return worst;
}

LinearMap flow_pullback(double t, const Parameters& params, Backend backend) {
  LinearMap map = LinearMap::identity(FrameId::darboux, backend);
  if (t == 0.0) return map;
  if (backend == Backend::exact_rational)
    throw std::domain_error(
        "flow pullback at t != 0 needs the float64 backend (trigonometric entries)");
  FlowMatrix f = flow_matrix(t, params);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) map.a[i][j] = Scalar::real_double(f.m[i][j]);
  return map;
}

}  // namespace starflow
