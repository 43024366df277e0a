#pragma once

#include "json.hpp"

#include "epr/field.hpp"
#include "epr/model.hpp"

namespace epr {

/// Half-open window [center - half_width, center + half_width) in scaled
/// momentum p = eps^2 k.
struct MomentumWindow {
  double center;
  double half_width;

  MomentumWindow(double center, double half_width);
  bool contains(double p) const { return p >= center - half_width && p < center + half_width; }
};

enum class Spin { Up, Down };

double spin_probability(const TwoParticleState& state, Spin spin);
double spin_up_probability(const TwoParticleState& state);

/// pi/P^2 |V^(1/P)|^2.
double alpha(const PhysParams& params, const Potential& potential);

/// Probability that particle 2 has scaled momentum inside the window and the
/// spin is as given. Cross terms between tensor terms included.
double joint_momentum_spin_probability(const TwoParticleState& state, const MomentumWindow& window, Spin spin,
                                       const PhysParams& params);

/// Mass of the particle-2 momentum distribution inside the window,
/// conditioned on the spin.
double conditional_momentum_mass(const TwoParticleState& state, const MomentumWindow& window, Spin spin,
                                 const PhysParams& params);

double scaled_momentum_expectation(const ComplexField& field, const PhysParams& params);
double position_expectation(const ComplexField& field);

/// <p> and <x> of particle 1 in the reduced state conditioned on the spin.
double particle1_momentum_given_spin(const TwoParticleState& state, Spin spin, const PhysParams& params);
double particle1_position_given_spin(const TwoParticleState& state, Spin spin);

/// x1(t) = a eps / P^2 + (P - eps/P) t.
double flipped_branch_position(const PhysParams& params, double t);

struct Measurement {
  double P_u;
  double P_d;
  double P_minus_u;
  double P_minus_d;
  double ratio_u;
  double ratio_d;
  double mean_p1_up;
  double mean_x1_up;
  MomentumWindow window;
};

/// "Momentum -P" is the window centred at -P with the given half-width.
Measurement measure(const TwoParticleState& state, const PhysParams& params, double half_width);

nlohmann::json to_json(const Measurement& m);

}  // namespace epr
