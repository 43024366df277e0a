#include "epr/duhamel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include "epr/errors.hpp"
#include "epr/fft.hpp"
#include "epr/log.hpp"
#include "epr/observables.hpp"
#include "epr/parallel.hpp"
#include "epr/spectral.hpp"

namespace epr {

using std::numbers::pi;

namespace {

// Panels so that each 16-point panel spans about two periods of the fastest
// phase, at least `floor`.
std::size_t panels_for(double length, double max_rate, std::size_t floor) {
  const double periods = length * max_rate / (2.0 * pi);
  return std::max<std::size_t>(floor, static_cast<std::size_t>(std::ceil(periods / 2.0)));
}

double relative_l2(const ComplexField& coarse, const ComplexField& fine) {
  const double denom = fine.norm();
  const double diff = distance(coarse, fine);
  if (denom == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / denom;
}

// Refines `evaluate(level)` (level 0, 1, ... doubles the panel counts) until two
// successive fields agree to options.rel_tol.
template <typename Eval>
ComplexField refine_until_settled(const Eval& evaluate, const QuadratureOptions& options, const char* what) {
  ComplexField prev = evaluate(0);
  double last = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= options.max_refinements; ++level) {
    ComplexField next = evaluate(level);
    last = relative_l2(prev, next);
    if (last < options.rel_tol) return next;
    prev = std::move(next);
  }
  std::ostringstream msg;
  msg << what << ": refinements still differ by " << last << " (tolerance " << options.rel_tol << ")";
  throw QuadratureFailure(msg.str(), last);
}

// Largest |p| = eps^2 |k| carried by the field, ignoring modes below 1e-12 of
// the peak amplitude.
double momentum_extent(const ComplexField& spectrum, double eps) {
  const Grid& grid = spectrum.grid();
  double peak = 0.0;
  for (std::size_t j = 0; j < spectrum.size(); ++j) peak = std::max(peak, std::abs(spectrum[j]));
  double extent = 0.0;
  for (std::size_t j = 0; j < spectrum.size(); ++j)
    if (std::abs(spectrum[j]) > 1e-12 * peak) extent = std::max(extent, eps * eps * std::abs(grid.wavenumber(j)));
  return extent;
}

}  // namespace

ComplexField i_operator_reduced(double t, double K, double X, const Model& model, const Grid& grid,
                                const QuadratureOptions& options) {
  if (!(t > 0.0)) throw InvalidInput("i_operator_reduced requires t > 0");
  if (!(K > 0.0)) throw InvalidInput("i_operator_reduced requires K > 0");
  const auto& p = model.params;
  const double eps = p.epsilon();
  const double a = p.a();
  const auto& V = model.potential;
  const auto& f = model.envelope;
  if (V.is_zero()) return ComplexField(grid);

  const double xi_max = V.frequency_cutoff(1e-12);
  const double reach = f.support_radius();
  // f's own bandwidth enters every phase-rate estimate.
  const double f_rate = reach;
  const double y_active = t * xi_max + reach;

  std::vector<std::size_t> active;
  double x_lo = 0.0, x_hi = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double y = grid.x(i) / eps - X;
    if (std::abs(y) <= y_active) {
      if (active.empty()) x_lo = grid.x(i);
      x_hi = grid.x(i);
      active.push_back(i);
    }
  }
  if (active.empty()) return ComplexField(grid);

  const double rate_tau = (1.0 + K * xi_max) / eps + 0.5 * xi_max * xi_max + xi_max * f_rate;
  const double x_span = std::max(std::abs(x_lo - a), std::abs(x_hi - a)) + K * t;
  const double rate_xi = x_span / eps + t * xi_max + t * f_rate;
  const std::size_t tau_panels0 = panels_for(t, rate_tau, 2);
  const std::size_t xi_panels0 = panels_for(2.0 * xi_max, rate_xi, 4);
  const std::size_t threads = thread_budget();

  auto evaluate = [&](int level) {
    const auto tau_nodes = gauss_legendre_panels(0.0, t, tau_panels0 << level);
    const auto xi_nodes = gauss_legendre_panels(-xi_max, xi_max, xi_panels0 << level);
    const std::size_t nt = tau_nodes.size();
    const std::size_t nx = xi_nodes.size();

    // Everything that does not depend on x, laid out xi-major.
    std::vector<cplx> weight(nt * nx);
    for (std::size_t j = 0; j < nx; ++j) {
      const double xi = xi_nodes[j].x;
      const double vhat = V.fourier(xi);
      for (std::size_t i = 0; i < nt; ++i) {
        const double tau = tau_nodes[i].x;
        const double phase = 0.5 * tau * xi * xi + CriticalPoint::phase(tau, xi, a, K) / eps;
        weight[j * nt + i] = tau_nodes[i].w * xi_nodes[j].w * vhat * std::polar(1.0, phase);
      }
    }

    ComplexField out(grid);
    const double prefactor = 1.0 / std::sqrt(2.0 * pi * eps);
    parallel_for(active.size(), threads, [&](std::size_t m) {
      const std::size_t idx = active[m];
      const double x = grid.x(idx);
      const double y = x / eps - X;
      cplx total = 0.0;
      for (std::size_t j = 0; j < nx; ++j) {
        const double xi = xi_nodes[j].x;
        const cplx* row = &weight[j * nt];
        cplx inner_sum = 0.0;
        for (std::size_t i = 0; i < nt; ++i) {
          const double z = tau_nodes[i].x * xi + y;
          if (std::abs(z) > reach) continue;
          inner_sum += row[i] * f(z);
        }
        if (inner_sum != 0.0) total += std::polar(1.0, x * xi / eps) * inner_sum;
      }
      out[idx] = prefactor * std::polar(1.0, K * x / (eps * eps)) * total;
    });
    return out;
  };
  return refine_until_settled(evaluate, options, "reduced I(t) quadrature");
}

ComplexField i_operator_form(double t, const ComplexField& field, const Model& model,
                             const QuadratureOptions& options) {
  if (!(t > 0.0)) throw InvalidInput("i_operator_form requires t > 0");
  const auto& p = model.params;
  const double eps = p.epsilon();
  const Grid& grid = field.grid();
  const std::size_t n = grid.size();
  if (model.potential.is_zero()) return ComplexField(grid);

  std::vector<double> potential(n);
  for (std::size_t i = 0; i < n; ++i) potential[i] = model.potential((grid.x(i) - p.a()) / eps);

  ComplexField spectrum = field;
  fft::forward(spectrum.values());
  std::vector<double> half_k2(n);
  for (std::size_t j = 0; j < n; ++j) half_k2[j] = 0.5 * eps * eps * grid.wavenumber(j) * grid.wavenumber(j);

  // Output momenta differ from input ones by eps * xi with |xi| up to the V^ cutoff.
  const double xi_max = model.potential.frequency_cutoff(1e-12);
  const double p_in = momentum_extent(spectrum, eps);
  const double rate = (1.0 + p_in * xi_max) / eps + 0.5 * xi_max * xi_max;
  const std::size_t panels0 = panels_for(t, rate, 2);

  auto evaluate = [&](int level) {
    std::vector<cplx> acc(n, cplx(0.0));
    std::vector<cplx> work(n);
    for (const auto& node : gauss_legendre_panels(0.0, t, panels0 << level)) {
      const double tau = node.x;
      for (std::size_t j = 0; j < n; ++j) work[j] = spectrum[j] * std::polar(1.0, -half_k2[j] * tau);
      fft::inverse(work);
      for (std::size_t i = 0; i < n; ++i) work[i] *= potential[i];
      fft::forward(work);
      const double spin_phase = tau / eps;
      for (std::size_t j = 0; j < n; ++j) acc[j] += node.w * std::polar(1.0, spin_phase + half_k2[j] * tau) * work[j];
    }
    fft::inverse(acc);
    return ComplexField(grid, std::move(acc));
  };
  return refine_until_settled(evaluate, options, "operator-form I(t) quadrature");
}

ComplexField leading_order_A(const Grid& grid, const Model& model) {
  const auto& p = model.params;
  const double eps = p.epsilon();
  const double P = p.P();
  const double a = p.a();
  const double momentum = P - eps / P;
  ComplexField A = sample_wavepacket(grid, p, model.envelope, momentum, a / (P * P));
  const double vhat = model.potential.fourier(1.0 / P);
  const cplx constant =
      -(std::sqrt(2.0 * pi) / P) * std::polar(1.0, a * (1.0 + eps / (2.0 * P * P)) / (eps * P)) * std::conj(cplx(vhat));
  A *= constant;
  return A;
}

double norm_A(const Model& model) {
  const double P = model.params.P();
  return std::sqrt(2.0 * pi) * std::abs(model.potential.fourier(1.0 / P)) / P;
}

double residual_Q(double t, const Model& model, const Grid& grid, const QuadratureOptions& options) {
  const auto& p = model.params;
  if (t <= p.t_coll()) {
    std::ostringstream msg;
    msg << "residual_Q needs t > T_coll = " << p.t_coll() << " (got t = " << t << ")";
    throw DomainError(msg.str());
  }
  if (model.potential.is_zero()) return 0.0;
  ComplexField sum = i_operator_reduced(t, p.P(), 0.0, model, grid, options);
  sum += cplx(p.epsilon()) * leading_order_A(grid, model);
  return sum.norm();
}

FirstOrderPrediction first_order_state(const Grid& grid, const Model& model, double t) {
  const auto& p = model.params;
  const double eps = p.epsilon();
  const double N = state_coefficient(p, model.envelope);
  ComplexField A = leading_order_A(grid, model);
  const auto plus = sample_wavepacket(grid, p, model.envelope, p.P());
  const auto minus = sample_wavepacket(grid, p, model.envelope, -p.P());

  TwoParticleState psi_I;
  psi_I.add({SpinorField::spin_up(A), minus, N});

  const auto minus_t = free_propagate(minus, t, p);
  TwoParticleState approx;
  approx.add({spin_free_propagate(SpinorField::spin_down(plus), t, p), minus_t, N});
  approx.add({spin_free_propagate(SpinorField::spin_down(minus), t, p), free_propagate(plus, t, p), N});
  approx.add({spin_free_propagate(SpinorField::spin_up(A), t, p), minus_t, eps * N});

  return FirstOrderPrediction{std::move(A), std::move(psi_I), std::move(approx), alpha(p, model.potential),
                              norm_A(model)};
}

double l_term_bound(double t, const Model& model, const Grid& grid, const QuadratureOptions& options) {
  if (!(t > 0.0)) throw InvalidInput("l_term_bound requires t > 0");
  const auto& p = model.params;
  const double eps = p.epsilon();
  if (model.potential.is_zero()) return 0.0;
  const std::size_t n = grid.size();

  ComplexField spectrum = sample_wavepacket(grid, p, model.envelope, -p.P());
  fft::forward(spectrum.values());
  std::vector<double> potential(n);
  for (std::size_t i = 0; i < n; ++i) potential[i] = model.potential((grid.x(i) - p.a()) / eps);

  std::vector<cplx> work(n);
  auto integrand = [&](double tau) {
    for (std::size_t j = 0; j < n; ++j) {
      const double k = grid.wavenumber(j);
      work[j] = spectrum[j] * std::polar(1.0, -0.5 * eps * eps * k * k * tau);
    }
    fft::inverse(work);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += potential[i] * potential[i] * std::norm(work[i]);
    return std::sqrt(sum * grid.dx());
  };
  auto integrate = [&](std::size_t panels) {
    double total = 0.0;
    for (const auto& node : gauss_legendre_panels(0.0, t, panels)) total += node.w * integrand(node.x);
    return total;
  };

  // The packet meets the potential on a time scale eps/P; start with a few panels per crossing.
  std::size_t panels = panels_for(t, 2.0 * pi * p.P() / (4.0 * eps), 4);
  // Below this the integrand is FFT round-off of a unit-norm packet.
  double v_max = 0.0;
  for (double v : potential) v_max = std::max(v_max, std::abs(v));
  const double noise_floor = 1e-13 * t * v_max;
  double prev = integrate(panels);
  double last = std::numeric_limits<double>::infinity();
  for (int level = 1; level <= options.max_refinements; ++level) {
    panels *= 2;
    const double next = integrate(panels);
    last = next == 0.0 ? std::abs(prev) : std::abs(next - prev) / std::abs(next);
    if (next == 0.0 && prev == 0.0) return 0.0;
    if (last < options.rel_tol || std::abs(next - prev) < noise_floor) return next;
    prev = next;
  }
  std::ostringstream msg;
  msg << "L-term bound quadrature did not settle (last relative change " << last << ")";
  throw QuadratureFailure(msg.str(), last);
}

double theorem_remainder(const SpinorField& evolved, const Model& model, double t) {
  const auto& p = model.params;
  const double eps = p.epsilon();
  const Grid& grid = evolved.grid();
  const auto plus = sample_wavepacket(grid, p, model.envelope, p.P());
  ComplexField up = free_propagate(leading_order_A(grid, model), t, p);
  up *= eps * std::polar(1.0, -t / (2.0 * eps));
  ComplexField down = free_propagate(plus, t, p);
  down *= std::polar(1.0, t / (2.0 * eps));
  return distance(evolved, SpinorField(std::move(up), std::move(down)));
}

double theorem_remainder(const Model& model, const Grid& grid, double t, double dt) {
  const auto& p = model.params;
  const auto plus = sample_wavepacket(grid, p, model.envelope, p.P());
  return theorem_remainder(evolve_interacting(SpinorField::spin_down(plus), t, dt, p, model.potential), model, t);
}

}  // namespace epr
