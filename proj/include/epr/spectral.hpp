#pragma once

#include "epr/field.hpp"
#include "epr/model.hpp"

namespace epr {

/// U0(t) = exp(-i (t/eps^2)(-eps^4/2) d^2/dx^2), applied as the Fourier
/// multiplier exp(-i eps^2 k^2 t / 2). Negative t propagates backwards.
ComplexField free_propagate(const ComplexField& field, double t, const PhysParams& params);

/// diag(U0(t) e^{-it/(2 eps)}, U0(t) e^{+it/(2 eps)}).
SpinorField spin_free_propagate(const SpinorField& spinor, double t, const PhysParams& params);

/// Particle 1 + spin under -eps^4/2 d^2/dx^2 + eps/2 sigma_3 + eps^2 V((x-a)/eps) sigma_2,
/// propagated for time t by Strang splitting with uniform steps of at most dt.
/// The pointwise 2x2 part (potential and spin splitting) is exponentiated
/// exactly; the kinetic part is exact in Fourier space.
SpinorField evolve_interacting(const SpinorField& spinor, double t, double dt, const PhysParams& params,
                               const Potential& potential);

/// Squared norm carried by the outer 1/16 of the box on either side.
double boundary_mass(const ComplexField& field);

/// Throws BoundaryMassError when boundary_mass exceeds tolerance.
void require_boundary_clear(const ComplexField& field, double tolerance = 1e-8);

/// N U^{1,s}(t)(0, phi_P) ⊗ U0(t) phi_{-P} + N U^{1,s}(t)(0, phi_{-P}) ⊗ U0(t) phi_P.
TwoParticleState assemble_full_state(const Model& model, const Grid& grid, double t, double dt);

}  // namespace epr
