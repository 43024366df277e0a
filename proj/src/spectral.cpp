#include "epr/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "epr/errors.hpp"
#include "epr/fft.hpp"
#include "epr/log.hpp"
#include "epr/parallel.hpp"

namespace epr {

namespace {

std::vector<cplx> kinetic_multiplier(const Grid& grid, double t, double eps) {
  std::vector<cplx> mult(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double k = grid.wavenumber(j);
    mult[j] = std::polar(1.0, -0.5 * eps * eps * k * k * t);
  }
  return mult;
}

void apply_multiplier(std::span<cplx> data, const std::vector<cplx>& mult) {
  fft::forward(data);
  for (std::size_t j = 0; j < data.size(); ++j) data[j] *= mult[j];
  fft::inverse(data);
}

// exp(-i h [V sigma_2 + b sigma_3]) = cos(theta) - i sin(theta) (n_y sigma_2 + n_z sigma_3),
// theta = h sqrt(V^2 + b^2), stored per grid point as its four entries.
struct SpinRotation {
  std::vector<cplx> uu, ud, du, dd;
};

SpinRotation space_step(const Grid& grid, double h, const PhysParams& params, const Potential& potential) {
  const double eps = params.epsilon();
  const double b = 0.5 / eps;
  const std::size_t n = grid.size();
  SpinRotation r;
  r.uu.resize(n);
  r.ud.resize(n);
  r.du.resize(n);
  r.dd.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = potential((grid.x(i) - params.a()) / eps);
    const double mag = std::sqrt(v * v + b * b);
    const double theta = h * mag;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double ny = v / mag;
    const double nz = b / mag;
    r.uu[i] = cplx(c, -s * nz);
    r.ud[i] = -s * ny;
    r.du[i] = s * ny;
    r.dd[i] = cplx(c, s * nz);
  }
  return r;
}

void rotate(SpinorField& psi, const SpinRotation& r) {
  auto up = psi.up().values();
  auto dn = psi.down().values();
  for (std::size_t i = 0; i < up.size(); ++i) {
    const cplx u = up[i];
    const cplx d = dn[i];
    up[i] = r.uu[i] * u + r.ud[i] * d;
    dn[i] = r.du[i] * u + r.dd[i] * d;
  }
}

}  // namespace

ComplexField free_propagate(const ComplexField& field, double t, const PhysParams& params) {
  ComplexField out = field;
  if (t == 0.0) return out;
  apply_multiplier(out.values(), kinetic_multiplier(field.grid(), t, params.epsilon()));
  return out;
}

SpinorField spin_free_propagate(const SpinorField& spinor, double t, const PhysParams& params) {
  const double eps = params.epsilon();
  auto up = free_propagate(spinor.up(), t, params);
  auto down = free_propagate(spinor.down(), t, params);
  up *= std::polar(1.0, -t / (2.0 * eps));
  down *= std::polar(1.0, t / (2.0 * eps));
  return SpinorField(std::move(up), std::move(down));
}

SpinorField evolve_interacting(const SpinorField& spinor, double t, double dt, const PhysParams& params,
                               const Potential& potential) {
  if (!(dt > 0.0)) throw InvalidInput("time step must be > 0");
  if (t < 0.0) throw InvalidInput("interacting evolution requires t >= 0");
  if (t == 0.0) return spinor;
  const double eps = params.epsilon();
  if (dt > eps / 10.0) {
    std::ostringstream msg;
    msg << "dt = " << dt << " exceeds eps/10 = " << eps / 10.0 << "; spin phase under-resolved";
    log::warn(msg.str());
  }
  const auto steps = static_cast<std::size_t>(std::ceil(t / dt - 1e-9));
  const double h = t / static_cast<double>(steps);

  const Grid& grid = spinor.grid();
  const auto half = space_step(grid, 0.5 * h, params, potential);
  const auto full = space_step(grid, h, params, potential);
  const auto kinetic = kinetic_multiplier(grid, h, eps);

  SpinorField psi = spinor;
  rotate(psi, half);
  for (std::size_t s = 0; s < steps; ++s) {
    apply_multiplier(psi.up().values(), kinetic);
    apply_multiplier(psi.down().values(), kinetic);
    // Adjacent half steps of the same pointwise matrix merge into one full step.
    rotate(psi, s + 1 == steps ? half : full);
  }
  require_boundary_clear(psi.up());
  require_boundary_clear(psi.down());
  return psi;
}

double boundary_mass(const ComplexField& field) {
  const std::size_t n = field.size();
  const std::size_t zone = std::max<std::size_t>(1, n / 16);
  double sum = 0.0;
  for (std::size_t i = 0; i < zone; ++i) sum += std::norm(field[i]) + std::norm(field[n - 1 - i]);
  return sum * field.grid().dx();
}

void require_boundary_clear(const ComplexField& field, double tolerance) {
  const double mass = boundary_mass(field);
  if (mass > tolerance) {
    std::ostringstream msg;
    msg << "probability mass " << mass << " reached the box edges (tolerance " << tolerance << "); widen the grid";
    throw BoundaryMassError(msg.str(), mass);
  }
}

TwoParticleState assemble_full_state(const Model& model, const Grid& grid, double t, double dt) {
  const auto& p = model.params;
  const double N = state_coefficient(p, model.envelope);
  const auto plus = sample_wavepacket(grid, p, model.envelope, p.P());
  const auto minus = sample_wavepacket(grid, p, model.envelope, -p.P());

  std::array<std::optional<SpinorField>, 2> particle1;
  std::array<std::optional<ComplexField>, 2> particle2;
  parallel_for(2, thread_budget(), [&](std::size_t branch) {
    const auto& mover = branch == 0 ? plus : minus;
    const auto& partner = branch == 0 ? minus : plus;
    particle1[branch] = evolve_interacting(SpinorField::spin_down(mover), t, dt, p, model.potential);
    particle2[branch] = free_propagate(partner, t, p);
    require_boundary_clear(*particle2[branch]);
  });

  TwoParticleState state;
  state.add({std::move(*particle1[0]), std::move(*particle2[0]), N});
  state.add({std::move(*particle1[1]), std::move(*particle2[1]), N});
  return state;
}

}  // namespace epr
