#pragma once

#include "epr/field.hpp"
#include "epr/model.hpp"
#include "epr/quadrature.hpp"

namespace epr {

/// Stationary point of Phi(tau, xi) = tau - a xi + K tau xi.
struct CriticalPoint {
  double tau_c;
  double xi_c;

  static CriticalPoint of(double a, double K) { return {a / K, -1.0 / K}; }

  static double phase(double tau, double xi, double a, double K) { return tau - a * xi + K * tau * xi; }
};

/// I(t) f_{X,K} from the reduced two-dimensional oscillatory integral
///
///   e^{iKx/eps^2} (2 pi eps)^{-1/2} int_0^t dtau int dxi F(tau, xi) e^{i Phi(tau, xi)/eps},
///   F = V^(xi) f(tau xi + x/eps - X) e^{i tau xi^2 / 2 + i x xi / eps},
///
/// evaluated at every grid point. xi is truncated where |V^| < 1e-12.
ComplexField i_operator_reduced(double t, double K, double X, const Model& model, const Grid& grid,
                                const QuadratureOptions& options = {});

/// I(t) f = int_0^t dtau e^{i tau/eps} U0(-tau) V^eps U0(tau) f, by composite
/// Gauss-Legendre in tau with spectral propagation. Independent of
/// i_operator_reduced.
ComplexField i_operator_form(double t, const ComplexField& field, const Model& model,
                             const QuadratureOptions& options = {});

/// Leading-order flipped-spin packet
///   A(x) = -(sqrt(2 pi)/P) e^{i a (1 + eps/(2P^2)) / (eps P)} conj(V^(1/P))
///          eps^{-1/2} f((x - a eps / P^2)/eps) e^{i (P - eps/P) x / eps^2}.
ComplexField leading_order_A(const Grid& grid, const Model& model);

/// sqrt(2 pi) |V^(1/P)| / P, the exact L2 norm of A.
double norm_A(const Model& model);

/// ||I(t) phi_P + eps A||, the stationary-phase remainder. Requires t > T_coll.
double residual_Q(double t, const Model& model, const Grid& grid, const QuadratureOptions& options = {});

struct FirstOrderPrediction {
  ComplexField A;
  /// N (A ⊗ phi_{-P}, 0): one term, upper component only.
  TwoParticleState psi_I;
  /// U0(t) Psi_0 + eps U0(t) Psi^(I): three terms.
  TwoParticleState approximation;
  double alpha;
  double norm_A;
};

FirstOrderPrediction first_order_state(const Grid& grid, const Model& model, double t);

/// int_0^t ||V^eps U0(tau) phi_{-P}|| dtau, a bound on the contribution of
/// the branch moving away from the spin.
double l_term_bound(double t, const Model& model, const Grid& grid, const QuadratureOptions& options = {});

/// ||U^{1,s}(t)(0, phi_P) - (eps e^{-it/(2eps)} U0(t) A, e^{it/(2eps)} U0(t) phi_P)||.
double theorem_remainder(const Model& model, const Grid& grid, double t, double dt);

/// Same distance for an already evolved U^{1,s}(t)(0, phi_P).
double theorem_remainder(const SpinorField& evolved, const Model& model, double t);

}  // namespace epr
