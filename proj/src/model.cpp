#include "epr/model.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "epr/errors.hpp"
#include "epr/quadrature.hpp"

namespace epr {

using std::numbers::pi;

std::vector<QuadratureNode> gauss_legendre_panels(double lo, double hi, std::size_t panels) {
  using rule = boost::math::quadrature::gauss<double, 16>;
  const auto& abscissa = rule::abscissa();
  const auto& weights = rule::weights();
  std::vector<QuadratureNode> nodes;
  nodes.reserve(panels * 16);
  const double width = (hi - lo) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = lo + (static_cast<double>(p) + 0.5) * width;
    const double half = 0.5 * width;
    for (std::size_t i = abscissa.size(); i-- > 0;) nodes.push_back({mid - half * abscissa[i], half * weights[i]});
    for (std::size_t i = 0; i < abscissa.size(); ++i) nodes.push_back({mid + half * abscissa[i], half * weights[i]});
  }
  return nodes;
}

PhysParams::PhysParams(double epsilon, double P, double a, double t_final)
    : epsilon_(epsilon), P_(P), a_(a), t_final_(t_final) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(epsilon)) throw InvalidInput("epsilon must be > 0");
  if (!positive(P)) throw InvalidInput("P must be > 0");
  if (!positive(a)) throw InvalidInput("a must be > 0");
  if (!positive(t_final)) throw InvalidInput("t_final must be > 0");
}

double PhysParams::t_spin() const { return 2.0 * pi * epsilon_; }

PhysParams PhysParams::with_epsilon(double epsilon) const { return {epsilon, P_, a_, t_final_}; }
PhysParams PhysParams::with_t_final(double t_final) const { return {epsilon_, P_, a_, t_final}; }
PhysParams PhysParams::with_a(double a) const { return {epsilon_, P_, a, t_final_}; }

// ---------------------------------------------------------------------------
// Envelope

Envelope Envelope::from_name(const std::string& name) {
  if (name == "gaussian") return gaussian();
  if (name == "sech") return sech();
  throw InvalidInput("unknown envelope '" + name + "' (expected gaussian or sech)");
}

std::string Envelope::name() const { return shape_ == Shape::Gaussian ? "gaussian" : "sech"; }

double Envelope::operator()(double y) const {
  switch (shape_) {
    case Shape::Gaussian:
      return amplitude_ * std::pow(pi, -0.25) * std::exp(-0.5 * y * y);
    case Shape::Sech:
      return amplitude_ / (std::cosh(y) * std::numbers::sqrt2);
  }
  return 0.0;
}

double Envelope::derivative(double y) const {
  switch (shape_) {
    case Shape::Gaussian:
      return -y * (*this)(y);
    case Shape::Sech:
      return -std::tanh(y) * (*this)(y);
  }
  return 0.0;
}

double Envelope::fourier(double k) const {
  switch (shape_) {
    case Shape::Gaussian:
      return amplitude_ * std::pow(pi, -0.25) * std::exp(-0.5 * k * k);
    case Shape::Sech:
      return amplitude_ * 0.5 * std::sqrt(pi) / std::cosh(0.5 * pi * k);
  }
  return 0.0;
}

double Envelope::support_radius() const {
  switch (shape_) {
    case Shape::Gaussian:
      return std::sqrt(2.0 * std::log(1e17));
    case Shape::Sech:
      return std::log(2e17);
  }
  return 0.0;
}

double Envelope::norm_squared() const {
  const double r = support_radius();
  double sum = 0.0;
  for (const auto& node : gauss_legendre_panels(-r, r, 64)) {
    const double v = (*this)(node.x);
    sum += node.w * v * v;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Potential

Potential Potential::from_name(const std::string& name) {
  if (name == "gaussian") return gaussian();
  if (name == "sech2") return sech2();
  if (name == "zero") return zero();
  throw InvalidInput("unknown potential '" + name + "' (expected gaussian, sech2 or zero)");
}

std::string Potential::name() const {
  switch (shape_) {
    case Shape::Gaussian:
      return "gaussian";
    case Shape::Sech2:
      return "sech2";
    case Shape::Zero:
      return "zero";
  }
  return "";
}

double Potential::operator()(double y) const {
  switch (shape_) {
    case Shape::Gaussian:
      return std::exp(-0.5 * y * y);
    case Shape::Sech2: {
      const double s = 1.0 / std::cosh(y);
      return s * s;
    }
    case Shape::Zero:
      return 0.0;
  }
  return 0.0;
}

double Potential::fourier(double xi) const {
  switch (shape_) {
    case Shape::Gaussian:
      return std::exp(-0.5 * xi * xi);
    case Shape::Sech2: {
      const double u = 0.5 * pi * xi;
      if (std::abs(u) < 1e-8) return std::sqrt(2.0 / pi);
      if (std::abs(u) > 700.0) return 0.0;
      return std::sqrt(0.5 * pi) * xi / std::sinh(u);
    }
    case Shape::Zero:
      return 0.0;
  }
  return 0.0;
}

double Potential::sup_norm() const { return is_zero() ? 0.0 : 1.0; }

double Potential::frequency_cutoff(double threshold) const {
  switch (shape_) {
    case Shape::Gaussian:
      return std::sqrt(2.0 * std::log(1.0 / threshold));
    case Shape::Sech2: {
      // |V^| decreases monotonically for xi > 0; scan then bisect.
      double hi = 1.0;
      while (std::abs(fourier(hi)) >= threshold) hi *= 2.0;
      double lo = 0.0;
      for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (std::abs(fourier(mid)) >= threshold ? lo : hi) = mid;
      }
      return hi;
    }
    case Shape::Zero:
      return 0.0;
  }
  return 0.0;
}

double Potential::support_radius(double threshold) const {
  switch (shape_) {
    case Shape::Gaussian:
      return std::sqrt(2.0 * std::log(1.0 / threshold));
    case Shape::Sech2:
      return 0.5 * std::log(4.0 / threshold);
    case Shape::Zero:
      return 0.0;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------

double packet_overlap(const PhysParams& params, const Envelope& envelope) {
  const double n2 = envelope.norm_squared();
  if (std::abs(n2 - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "envelope is not L2-normalized (||f||^2 = " << n2 << ")";
    throw InvalidInput(msg.str());
  }
  const double r = envelope.support_radius();
  const double freq = 2.0 * params.P() / params.epsilon();
  auto integrate = [&](std::size_t panels) {
    double sum = 0.0;
    for (const auto& node : gauss_legendre_panels(-r, r, panels)) {
      const double f = envelope(node.x);
      sum += node.w * f * f * std::cos(freq * node.x);
    }
    return sum;
  };
  std::size_t panels = 16 + static_cast<std::size_t>(std::ceil(2.0 * r * freq / (2.0 * pi)));
  double prev = integrate(panels);
  for (int level = 0; level < 8; ++level) {
    panels *= 2;
    const double next = integrate(panels);
    const bool settled = std::abs(next - prev) < 1e-15;
    prev = next;
    if (settled) break;
  }
  return prev;
}

double normalization_constant(const PhysParams& params, const Envelope& envelope) {
  return 1.0 / std::sqrt(2.0 + 2.0 * packet_overlap(params, envelope));
}

double state_coefficient(const PhysParams& params, const Envelope& envelope) {
  const double c = packet_overlap(params, envelope);
  return 1.0 / std::sqrt(2.0 + 2.0 * c * c);
}

double nyquist_momentum(const Grid& grid, double epsilon) { return epsilon * epsilon * grid.nyquist_wavenumber(); }

void require_resolved(const Grid& grid, double epsilon, double K) {
  const double needed = std::abs(K) + 6.0 * epsilon;
  if (nyquist_momentum(grid, epsilon) <= needed) {
    const double required_dx = epsilon * epsilon * pi / needed;
    std::ostringstream msg;
    msg << "grid under-resolved: scaled Nyquist momentum " << nyquist_momentum(grid, epsilon) << " <= |K| + 6 eps = "
        << needed << "; need dx < " << required_dx << " (have " << grid.dx() << ")";
    throw ResolutionError(msg.str(), required_dx);
  }
}

ComplexField sample_wavepacket(const Grid& grid, const PhysParams& params, const Envelope& envelope, double K,
                               double X) {
  const double eps = params.epsilon();
  require_resolved(grid, eps, K);
  ComplexField out(grid);
  const double scale = 1.0 / std::sqrt(eps);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.x(i);
    out[i] = scale * envelope(x / eps - X) * std::polar(1.0, K * x / (eps * eps));
  }
  return out;
}

TwoParticleState initial_state(const Grid& grid, const Model& model) {
  const auto& p = model.params;
  const double N = state_coefficient(p, model.envelope);
  auto plus = sample_wavepacket(grid, p, model.envelope, p.P());
  auto minus = sample_wavepacket(grid, p, model.envelope, -p.P());
  TwoParticleState state;
  state.add({SpinorField::spin_down(plus), minus, N});
  state.add({SpinorField::spin_down(minus), plus, N});
  return state;
}

Grid default_grid(const PhysParams& params, std::optional<std::size_t> max_points) {
  const double half = params.a() + 6.0 * params.P() * params.t_final();
  const double width = 2.0 * half;
  const double eps = params.epsilon();
  const double dx_target = eps * eps * 2.0 * pi / (16.0 * params.P());
  const auto n = next_power_of_two(static_cast<std::size_t>(std::ceil(width / dx_target)));
  if (max_points && n > *max_points) {
    std::ostringstream msg;
    msg << "default grid at eps = " << eps << " needs " << n << " points (cap " << *max_points << ")";
    throw ResolutionError(msg.str(), dx_target);
  }
  return Grid(-half, width / static_cast<double>(n), std::max<std::size_t>(n, 2));
}

double default_time_step(const PhysParams& params) {
  return std::min(params.epsilon() / 20.0, params.t_int() / 20.0);
}

}  // namespace epr
