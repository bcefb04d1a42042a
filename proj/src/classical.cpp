#include "starflow/classical.hpp"

#include <cmath>

namespace starflow {

VectorFieldSpec VectorFieldSpec::rotation_const(double nu) {
  return {Builtin::rotation_const, 1, 1, nu, std::nullopt};
}
VectorFieldSpec VectorFieldSpec::rotation_radial() {
  return {Builtin::rotation_radial, 1, 1, 1.0, std::nullopt};
}
VectorFieldSpec VectorFieldSpec::linear_hamiltonian(const Parameters& p) {
  return {Builtin::linear_hamiltonian, 2, 2, 1.0, p};
}
VectorFieldSpec VectorFieldSpec::timedep_embedding() {
  return {Builtin::timedep_embedding, 1, 1, 1.0, std::nullopt};
}

std::optional<VectorFieldSpec> VectorFieldSpec::by_name(std::string_view name,
                                                        const Parameters& p) {
  if (name == "rotation-const") return rotation_const(p.nu_d());
  if (name == "rotation-radial") return rotation_radial();
  if (name == "linear-hamiltonian") return linear_hamiltonian(p);
  if (name == "timedep-embedding") return timedep_embedding();
  return std::nullopt;
}

std::string VectorFieldSpec::name() const {
  switch (builtin) {
    case Builtin::rotation_const: return "rotation-const";
    case Builtin::rotation_radial: return "rotation-radial";
    case Builtin::linear_hamiltonian: return "linear-hamiltonian";
    case Builtin::timedep_embedding: return "timedep-embedding";
  }
  throw std::logic_error("bad builtin");
}

void VectorFieldSpec::eval(const std::vector<double>& x, std::vector<double>& dx) const {
  dx.resize(x.size());
  switch (builtin) {
    case Builtin::rotation_const:
      dx[0] = -rate * x[1];
      dx[1] = rate * x[0];
      return;
    case Builtin::rotation_radial: {
      double r2 = x[0] * x[0] + x[1] * x[1];
      dx[0] = -r2 * x[1];
      dx[1] = r2 * x[0];
      return;
    }
    case Builtin::linear_hamiltonian: {
      double m = params->m_d(), nu = params->nu_d(), kappa = params->kappa_d();
      double qS = x[0], pS = x[1], qB = x[2], pB = x[3];
      dx[0] = pS / m;
      dx[1] = -m * nu * nu * qS - kappa * (qS - qB);
      dx[2] = pB / m;
      dx[3] = -m * nu * nu * qB + kappa * (qS - qB);
      return;
    }
    case Builtin::timedep_embedding:
      // bath coordinate is the time variable tau
      dx[0] = std::cos(x[1]) * x[0];
      dx[1] = 1.0;
      return;
  }
  throw std::logic_error("bad builtin");
}

bool VectorFieldSpec::has_closed_form() const {
  return builtin != Builtin::timedep_embedding;
}

std::vector<double> VectorFieldSpec::closed_flow(const std::vector<double>& x,
                                                 double t) const {
  switch (builtin) {
    case Builtin::rotation_const: {
      double c = std::cos(rate * t), s = std::sin(rate * t);
      return {x[0] * c - x[1] * s, x[0] * s + x[1] * c};
    }
    case Builtin::rotation_radial: {
      // the radius is conserved, so the angular rate is constant in time
      double r2 = x[0] * x[0] + x[1] * x[1];
      double c = std::cos(r2 * t), s = std::sin(r2 * t);
      return {x[0] * c - x[1] * s, x[0] * s + x[1] * c};
    }
    case Builtin::linear_hamiltonian: {
      FlowMatrix f = flow_matrix(t, *params);
      std::vector<double> y(4, 0.0);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) y[i] += f.m[i][j] * x[j];
      return y;
    }
    case Builtin::timedep_embedding:
      throw std::logic_error("no closed form for the time-dependent embedding");
  }
  throw std::logic_error("bad builtin");
}

namespace {

void check_finite(const std::vector<double>& x) {
  for (double v : x)
    if (!std::isfinite(v))
      throw std::runtime_error("integration produced a non-finite state");
}

template <class F>
std::vector<double> rk4(const F& f, std::vector<double> x, double t, double step,
                        double max_steps) {
  if (t == 0.0) return x;
  double span = std::abs(t);
  double n_exact = std::ceil(span / step - 1e-12);
  if (n_exact > max_steps)
    throw std::runtime_error("integration exceeds the step budget (" +
                             format_double(n_exact) + " steps)");
  long n = static_cast<long>(n_exact);
  double h = t / static_cast<double>(n);
  size_t dim = x.size();
  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  double tau = 0.0;
  for (long i = 0; i < n; ++i) {
    f(tau, x, k1);
    for (size_t d = 0; d < dim; ++d) tmp[d] = x[d] + 0.5 * h * k1[d];
    f(tau + 0.5 * h, tmp, k2);
    for (size_t d = 0; d < dim; ++d) tmp[d] = x[d] + 0.5 * h * k2[d];
    f(tau + 0.5 * h, tmp, k3);
    for (size_t d = 0; d < dim; ++d) tmp[d] = x[d] + h * k3[d];
    f(tau + h, tmp, k4);
    for (size_t d = 0; d < dim; ++d)
      x[d] += h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
    tau += h;
    check_finite(x);
  }
  return x;
}

}  // namespace

std::vector<double> integrate_flow(const VectorFieldSpec& field,
                                   const std::vector<double>& x0, double t,
                                   const IntegrationControl& ctl) {
  if (static_cast<int>(x0.size()) != field.total_dim())
    throw std::invalid_argument("state dimension mismatch");
  check_finite(x0);
  if (field.has_closed_form() && !ctl.force_rk4) {
    auto y = field.closed_flow(x0, t);
    check_finite(y);
    return y;
  }
  return rk4(
      [&](double, const std::vector<double>& x, std::vector<double>& dx) {
        field.eval(x, dx);
      },
      x0, t, ctl.step, ctl.max_steps);
}

std::vector<double> integrate_time_dependent(
    const std::function<void(double, const std::vector<double>&, std::vector<double>&)>&
        field,
    const std::vector<double>& x0, double t0, double t1, double step) {
  return rk4(
      [&](double tau, const std::vector<double>& x, std::vector<double>& dx) {
        field(t0 + tau, x, dx);
      },
      x0, t1 - t0, step, 1e7);
}

std::vector<double> open_evolve_pure(const VectorFieldSpec& field,
                                     const std::vector<double>& xS,
                                     const std::vector<double>& xB, double t,
                                     const IntegrationControl& ctl) {
  if (static_cast<int>(xS.size()) != field.system_dim ||
      static_cast<int>(xB.size()) != field.bath_dim)
    throw std::invalid_argument("system/bath dimension mismatch");
  std::vector<double> x;
  x.reserve(field.total_dim());
  x.insert(x.end(), xS.begin(), xS.end());
  x.insert(x.end(), xB.begin(), xB.end());
  std::vector<double> y = integrate_flow(field, x, t, ctl);
  return std::vector<double>(y.begin(), y.begin() + field.system_dim);
}

double evolution_property_residual(const VectorFieldSpec& field,
                                   const std::vector<double>& xS,
                                   const std::vector<double>& xB, double s, double t,
                                   const IntegrationControl& ctl) {
  // The composition law holds with the evolved bath point reinserted:
  // Phi_s^{pr_B Psi_t(x)} after Phi_t^{xB} equals Phi_{s+t}^{xB}.
  std::vector<double> x;
  x.insert(x.end(), xS.begin(), xS.end());
  x.insert(x.end(), xB.begin(), xB.end());
  std::vector<double> mid = integrate_flow(field, x, t, ctl);
  std::vector<double> mid_system(mid.begin(), mid.begin() + field.system_dim);
  std::vector<double> mid_bath(mid.begin() + field.system_dim, mid.end());
  std::vector<double> twice = open_evolve_pure(field, mid_system, mid_bath, s, ctl);
  std::vector<double> joint = open_evolve_pure(field, xS, xB, s + t, ctl);
  double r2 = 0.0;
  for (int d = 0; d < field.system_dim; ++d) {
    double diff = twice[d] - joint[d];
    r2 += diff * diff;
  }
  return std::sqrt(r2);
}

void MeasureState::validate(int bath_dim, double tol) const {
  if (atoms.empty()) throw std::invalid_argument("measure state has no atoms");
  double sum = 0.0;
  for (const Atom& a : atoms) {
    if (!(a.weight >= 0.0))
      throw std::invalid_argument("measure state has a negative weight");
    if (static_cast<int>(a.point.size()) != bath_dim)
      throw std::invalid_argument("measure atom dimension mismatch");
    sum += a.weight;
  }
  if (std::abs(sum - 1.0) > tol)
    throw std::invalid_argument("measure weights sum to " + format_double(sum) +
                                ", not 1");
}

double open_evolve_measure(const VectorFieldSpec& field,
                           const std::function<double(const std::vector<double>&)>& f,
                           const MeasureState& omega, const std::vector<double>& xS,
                           double t, const IntegrationControl& ctl) {
  omega.validate(field.bath_dim);
  double acc = 0.0;
  for (const auto& atom : omega.atoms) {
    if (atom.weight == 0.0) continue;
    acc += atom.weight * f(open_evolve_pure(field, xS, atom.point, t, ctl));
  }
  return acc;
}

}  // namespace starflow
