#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "epr/field.hpp"
#include "epr/grid.hpp"

namespace epr {

/// Model constants under the small-parameter scaling hbar = eps^2,
/// omega = 1/eps, coupling = eps^2, potential range = packet width = eps.
/// Both masses are 1.
class PhysParams {
public:
  PhysParams(double epsilon, double P, double a, double t_final);

  double epsilon() const { return epsilon_; }
  double P() const { return P_; }
  double a() const { return a_; }
  double t_final() const { return t_final_; }

  /// Classical time for particle 1 to reach the spin: a/P.
  double t_coll() const { return a_ / P_; }
  /// Period of the free spin precession: 2*pi*eps.
  double t_spin() const;
  /// Time to cross the interaction region: eps/P.
  double t_int() const { return epsilon_ / P_; }

  PhysParams with_epsilon(double epsilon) const;
  PhysParams with_t_final(double t_final) const;
  PhysParams with_a(double a) const;

private:
  double epsilon_;
  double P_;
  double a_;
  double t_final_;
};

/// Real, even, L2-normalized envelope f with closed-form derivative and
/// unitary Fourier transform f^(k) = (2 pi)^{-1/2} int f(y) e^{-iky} dy.
class Envelope {
public:
  enum class Shape { Gaussian, Sech };

  static Envelope gaussian() { return Envelope(Shape::Gaussian, 1.0); }
  static Envelope sech() { return Envelope(Shape::Sech, 1.0); }
  /// Same shape multiplied by `amplitude`; only useful for exercising the
  /// normalization checks.
  static Envelope scaled(Shape shape, double amplitude) { return Envelope(shape, amplitude); }
  static Envelope from_name(const std::string& name);

  Shape shape() const { return shape_; }
  std::string name() const;

  double operator()(double y) const;
  double derivative(double y) const;
  double fourier(double k) const;

  /// |f(y)| < 1e-17 * max|f| for |y| beyond this radius.
  double support_radius() const;

  /// ||f||^2 by quadrature.
  double norm_squared() const;

private:
  Envelope(Shape shape, double amplitude) : shape_(shape), amplitude_(amplitude) {}

  Shape shape_;
  double amplitude_;
};

/// Interaction profile V and its unitary Fourier transform
/// V^(xi) = (2 pi)^{-1/2} int V(y) e^{-i y xi} dy.
class Potential {
public:
  enum class Shape { Gaussian, Sech2, Zero };

  static Potential gaussian() { return Potential(Shape::Gaussian); }
  static Potential sech2() { return Potential(Shape::Sech2); }
  static Potential zero() { return Potential(Shape::Zero); }
  static Potential from_name(const std::string& name);

  Shape shape() const { return shape_; }
  std::string name() const;
  bool is_zero() const { return shape_ == Shape::Zero; }

  double operator()(double y) const;
  double fourier(double xi) const;
  double sup_norm() const;

  /// |V^(xi)| < threshold for |xi| beyond the returned value.
  double frequency_cutoff(double threshold = 1e-12) const;

  /// |V(y)| < threshold for |y| beyond the returned value.
  double support_radius(double threshold = 1e-17) const;

private:
  explicit Potential(Shape shape) : shape_(shape) {}
  Shape shape_;
};

struct Model {
  PhysParams params;
  Envelope envelope = Envelope::gaussian();
  Potential potential = Potential::gaussian();
};

/// N^eps = (2 + 2 int f(y)^2 cos(2 P y / eps) dy)^{-1/2}, integral by quadrature.
double normalization_constant(const PhysParams& params, const Envelope& envelope);

/// <phi_P, phi_{-P}> = int f(y)^2 cos(2 P y / eps) dy (real for even f).
double packet_overlap(const PhysParams& params, const Envelope& envelope);

/// Coefficient that gives the symmetrised pair state unit norm: (2 + 2 c^2)^{-1/2}
/// with c the packet overlap. Equals normalization_constant up to O(c).
double state_coefficient(const PhysParams& params, const Envelope& envelope);

/// Largest scaled momentum the grid represents: eps^2 * pi / dx.
double nyquist_momentum(const Grid& grid, double epsilon);

/// Throws ResolutionError unless eps^2*pi/dx > |K| + 6 eps.
void require_resolved(const Grid& grid, double epsilon, double K);

/// f_{X,K}(x) = eps^{-1/2} f(x/eps - X) e^{i K x / eps^2}.
ComplexField sample_wavepacket(const Grid& grid, const PhysParams& params, const Envelope& envelope,
                               double K, double X = 0.0);

/// Spin down, N (phi_P ⊗ phi_{-P} + phi_{-P} ⊗ phi_P): two tensor terms.
TwoParticleState initial_state(const Grid& grid, const Model& model);

/// Box [-(a + 6 P t), a + 6 P t] with dx <= eps^2 * 2 pi / (16 P) and a
/// power-of-two point count. Throws ResolutionError when that count exceeds
/// max_points.
Grid default_grid(const PhysParams& params, std::optional<std::size_t> max_points = std::nullopt);

/// min(eps/20, T_int/20).
double default_time_step(const PhysParams& params);

}  // namespace epr
