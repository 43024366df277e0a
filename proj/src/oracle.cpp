#include "epr/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "epr/duhamel.hpp"
#include "epr/errors.hpp"
#include "epr/fft.hpp"
#include "epr/parallel.hpp"
#include "epr/spectral.hpp"

namespace epr {

using std::numbers::pi;

namespace {

void require_oracle_size(const Grid& grid) {
  if (grid.size() > kOracleMaxPoints) {
    std::ostringstream msg;
    msg << "oracle grids are limited to " << kOracleMaxPoints << " points (got " << grid.size() << ")";
    throw DomainError(msg.str());
  }
}

// Band-limited interpolation by zero-padding the spectrum: factor-m finer samples
// of the same trigonometric polynomial.
std::vector<cplx> upsample(const ComplexField& field, std::size_t m) {
  const std::size_t n = field.size();
  std::vector<cplx> spec(field.values().begin(), field.values().end());
  fft::forward(spec);
  std::vector<cplx> fine(n * m, cplx(0.0));
  const std::size_t half = n / 2;
  for (std::size_t j = 0; j < half; ++j) fine[j] = spec[j];
  for (std::size_t j = half + 1; j < n; ++j) fine[n * m - (n - j)] = spec[j];
  // Split the Nyquist mode symmetrically so real inputs stay real.
  fine[half] = 0.5 * spec[half];
  fine[n * m - half] = 0.5 * spec[half];
  fft::inverse(fine);
  for (auto& v : fine) v *= static_cast<double>(m);
  return fine;
}

}  // namespace

ComplexField kernel_propagate(const ComplexField& field, double t, const PhysParams& params) {
  if (t == 0.0) return field;
  const Grid& grid = field.grid();
  require_oracle_size(grid);
  const double n2 = field.norm_squared();
  if (n2 > 0.0 && boundary_mass(field) > 1e-10 * n2)
    throw InvalidInput("kernel_propagate needs a field that vanishes near the box edges");

  const double eps2 = params.epsilon() * params.epsilon();
  const double dx = grid.dx();
  // The kernel's local wavenumber reaches L / (eps^2 |t|); the y-grid must
  // resolve it on top of the field's own band, with a factor 2 to spare.
  const double needed = 1.0 + grid.length() * dx / (pi * eps2 * std::abs(t));
  const std::size_t m = next_power_of_two(static_cast<std::size_t>(std::ceil(2.0 * needed)));
  const auto fine = upsample(field, m);
  const double dy = dx / static_cast<double>(m);

  double peak = 0.0;
  for (const auto& v : fine) peak = std::max(peak, std::abs(v));
  std::size_t lo = fine.size(), hi = 0;
  for (std::size_t i = 0; i < fine.size(); ++i) {
    if (std::abs(fine[i]) > 1e-15 * peak) {
      lo = std::min(lo, i);
      hi = i;
    }
  }

  ComplexField out(grid);
  if (lo > hi) return out;
  const cplx prefactor = dy / std::sqrt(cplx(0.0, 2.0 * pi * eps2 * t));
  const double rate = 1.0 / (2.0 * eps2 * t);
  parallel_for(grid.size(), thread_budget(), [&](std::size_t i) {
    const double x = grid.x(i);
    cplx sum = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) {
      const double d = x - (grid.x_min() + dy * static_cast<double>(k));
      sum += std::polar(1.0, rate * d * d) * fine[k];
    }
    out[i] = prefactor * sum;
  });
  return out;
}

ConsistencyResult i_operator_consistency(double t, const Model& model, const Grid& grid,
                                         const QuadratureOptions& options) {
  require_oracle_size(grid);
  const auto& p = model.params;
  const auto phi = sample_wavepacket(grid, p, model.envelope, p.P());
  const auto reduced = i_operator_reduced(t, p.P(), 0.0, model, grid, options);
  const double scale = reduced.norm();
  if (scale == 0.0) return {0.0, true};
  const auto operator_form = i_operator_form(t, phi, model, options);
  return {distance(operator_form, reduced) / scale, false};
}

}  // namespace epr
