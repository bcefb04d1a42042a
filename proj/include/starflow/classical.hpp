#pragma once

#include <functional>
#include <vector>

#include "starflow/flow.hpp"

namespace starflow {

// Classical open system: a vector field on system x bath, evolved as a whole,
// with states and observables pulled back and forth along the projection.
struct VectorFieldSpec {
  enum class Builtin {
    rotation_const,     // X = nu (-xB, xS) on R x R
    rotation_radial,    // X = (xS^2 + xB^2) (-xB, xS) on R x R
    linear_hamiltonian, // coupled oscillator pair on R^2 x R^2
    timedep_embedding,  // dxS/dt = cos(tau) xS embedded on R x R (bath = time)
  };

  Builtin builtin;
  int system_dim;
  int bath_dim;
  double rate = 1.0;                 // rotation_const only
  std::optional<Parameters> params;  // linear_hamiltonian only

  static VectorFieldSpec rotation_const(double nu);
  static VectorFieldSpec rotation_radial();
  static VectorFieldSpec linear_hamiltonian(const Parameters& p);
  static VectorFieldSpec timedep_embedding();
  static std::optional<VectorFieldSpec> by_name(std::string_view name,
                                                const Parameters& p);
  std::string name() const;

  int total_dim() const { return system_dim + bath_dim; }
  void eval(const std::vector<double>& x, std::vector<double>& dx) const;
  bool has_closed_form() const;
  std::vector<double> closed_flow(const std::vector<double>& x, double t) const;
};

struct IntegrationControl {
  double step = 1e-3;
  double max_steps = 1e7;
  bool force_rk4 = false;  // bypass closed forms (cross-checks)
};

// Flow of the full field; classic fixed-step RK4 unless a closed form applies.
// Throws on non-finite states or a step budget overflow.
std::vector<double> integrate_flow(const VectorFieldSpec& field,
                                   const std::vector<double>& x0, double t,
                                   const IntegrationControl& ctl = {});

// Direct integration of a non-autonomous system field dx/dt = f(t, x);
// reference path for the time-dependent embedding.
std::vector<double> integrate_time_dependent(
    const std::function<void(double, const std::vector<double>&, std::vector<double>&)>&
        field,
    const std::vector<double>& x0, double t0, double t1, double step);

// Open time evolution of a pure state: embed alongside xB, flow, project.
std::vector<double> open_evolve_pure(const VectorFieldSpec& field,
                                     const std::vector<double>& xS,
                                     const std::vector<double>& xB, double t,
                                     const IntegrationControl& ctl = {});

// Euclidean norm of Phi_s^{prB Psi_t(x)}(Phi_t^{xB}(xS)) - Phi_{s+t}^{xB}(xS):
// the evolution property with the evolved bath point reinserted. It holds for
// every flow, so the residual measures integrator error only.
double evolution_property_residual(const VectorFieldSpec& field,
                                   const std::vector<double>& xS,
                                   const std::vector<double>& xB, double s, double t,
                                   const IntegrationControl& ctl = {});

// Finitely supported bath measure.
struct MeasureState {
  struct Atom {
    double weight;
    std::vector<double> point;
  };
  std::vector<Atom> atoms;
  void validate(int bath_dim, double tol = default_tolerance()) const;
};

// (P_t f)(xS) = sum_k w_k f(pr_S Psi_t(xS, xB_k)).
double open_evolve_measure(const VectorFieldSpec& field,
                           const std::function<double(const std::vector<double>&)>& f,
                           const MeasureState& omega, const std::vector<double>& xS,
                           double t, const IntegrationControl& ctl = {});

}  // namespace starflow
