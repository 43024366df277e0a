#include "epr/observables.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "epr/errors.hpp"
#include "epr/fft.hpp"
#include "epr/log.hpp"
#include "epr/spectral.hpp"

namespace epr {

namespace {

const ComplexField& component(const SpinorField& spinor, Spin spin) {
  return spin == Spin::Up ? spinor.up() : spinor.down();
}

void warn_if_unnormalized(const TwoParticleState& state) {
  const double n2 = state.norm_squared();
  if (std::abs(n2 - 1.0) > 1e-4) {
    std::ostringstream msg;
    msg << "state norm^2 = " << n2 << " differs from 1; probabilities are reported unnormalized";
    log::warn(msg.str());
  }
}

ComplexField spectrum_of(const ComplexField& field) {
  ComplexField out = field;
  fft::forward(out.values());
  return out;
}

// Gram sum  sum_ij conj(c_i) c_j G1(i, j) G2(i, j).
template <typename G1, typename G2>
double gram_sum(const std::vector<TensorTerm>& terms, const G1& g1, const G2& g2) {
  cplx sum{};
  for (std::size_t i = 0; i < terms.size(); ++i)
    for (std::size_t j = 0; j < terms.size(); ++j)
      sum += std::conj(terms[i].coefficient) * terms[j].coefficient * g1(i, j) * g2(i, j);
  return sum.real();
}

void require_window_on_grid(const MomentumWindow& window, const Grid& grid, double eps) {
  const double limit = nyquist_momentum(grid, eps);
  const double slack = 1e-12 * limit;
  if (window.center - window.half_width < -limit - slack || window.center + window.half_width > limit + slack) {
    std::ostringstream msg;
    msg << "momentum window [" << window.center - window.half_width << ", " << window.center + window.half_width
        << ") leaves the grid's scaled Nyquist range +-" << limit;
    throw DomainError(msg.str());
  }
}

std::vector<double> window_mask(const Grid& grid, const MomentumWindow& window, double eps) {
  std::vector<double> mask(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) mask[j] = window.contains(eps * eps * grid.wavenumber(j)) ? 1.0 : 0.0;
  return mask;
}

// <a, M b> for a diagonal weight M in Fourier space, with Parseval's dx/n.
cplx weighted_spectral_inner(const ComplexField& a_hat, const ComplexField& b_hat, const std::vector<double>& weight) {
  cplx sum{};
  for (std::size_t j = 0; j < a_hat.size(); ++j) sum += weight[j] * std::conj(a_hat[j]) * b_hat[j];
  const Grid& g = a_hat.grid();
  return sum * (g.dx() / static_cast<double>(g.size()));
}

cplx position_weighted_inner(const ComplexField& a, const ComplexField& b) {
  cplx sum{};
  const Grid& g = a.grid();
  for (std::size_t i = 0; i < a.size(); ++i) sum += g.x(i) * std::conj(a[i]) * b[i];
  return sum * g.dx();
}

void require_localized(const ComplexField& field) {
  const double n2 = field.norm_squared();
  if (n2 > 0.0) require_boundary_clear(field, 1e-8 * n2);
}

}  // namespace

MomentumWindow::MomentumWindow(double center_, double half_width_) : center(center_), half_width(half_width_) {
  if (!(half_width_ > 0.0)) throw InvalidInput("momentum window half-width must be > 0");
}

double spin_probability(const TwoParticleState& state, Spin spin) {
  warn_if_unnormalized(state);
  const auto& terms = state.terms();
  return gram_sum(
      terms, [&](std::size_t i, std::size_t j) { return inner(component(terms[i].particle1, spin), component(terms[j].particle1, spin)); },
      [&](std::size_t i, std::size_t j) { return inner(terms[i].particle2, terms[j].particle2); });
}

double spin_up_probability(const TwoParticleState& state) { return spin_probability(state, Spin::Up); }

double alpha(const PhysParams& params, const Potential& potential) {
  const double P = params.P();
  const double vhat = potential.fourier(1.0 / P);
  return std::numbers::pi / (P * P) * vhat * vhat;
}

double joint_momentum_spin_probability(const TwoParticleState& state, const MomentumWindow& window, Spin spin,
                                       const PhysParams& params) {
  warn_if_unnormalized(state);
  const auto& terms = state.terms();
  if (terms.empty()) return 0.0;
  const Grid& grid = terms.front().particle2.grid();
  const double eps = params.epsilon();
  require_window_on_grid(window, grid, eps);
  const auto mask = window_mask(grid, window, eps);
  std::vector<ComplexField> spectra;
  spectra.reserve(terms.size());
  for (const auto& term : terms) spectra.push_back(spectrum_of(term.particle2));
  return gram_sum(
      terms, [&](std::size_t i, std::size_t j) { return inner(component(terms[i].particle1, spin), component(terms[j].particle1, spin)); },
      [&](std::size_t i, std::size_t j) { return weighted_spectral_inner(spectra[i], spectra[j], mask); });
}

double conditional_momentum_mass(const TwoParticleState& state, const MomentumWindow& window, Spin spin,
                                 const PhysParams& params) {
  const double marginal = spin_probability(state, spin);
  if (!(marginal > 0.0)) throw DomainError("conditional mass requested for a spin state with zero probability");
  return joint_momentum_spin_probability(state, window, spin, params) / marginal;
}

double scaled_momentum_expectation(const ComplexField& field, const PhysParams& params) {
  const auto hat = spectrum_of(field);
  const double eps2 = params.epsilon() * params.epsilon();
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < hat.size(); ++j) {
    const double w = std::norm(hat[j]);
    num += eps2 * field.grid().wavenumber(j) * w;
    den += w;
  }
  if (!(den > 0.0)) throw DomainError("momentum expectation of a zero field");
  return num / den;
}

double position_expectation(const ComplexField& field) {
  require_localized(field);
  const Grid& g = field.grid();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double w = std::norm(field[i]);
    num += g.x(i) * w;
    den += w;
  }
  if (!(den > 0.0)) throw DomainError("position expectation of a zero field");
  return num / den;
}

double particle1_momentum_given_spin(const TwoParticleState& state, Spin spin, const PhysParams& params) {
  const auto& terms = state.terms();
  if (terms.empty()) throw DomainError("momentum expectation of an empty state");
  const Grid& grid = terms.front().particle1.grid();
  const double eps2 = params.epsilon() * params.epsilon();
  std::vector<double> p(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) p[j] = eps2 * grid.wavenumber(j);
  std::vector<ComplexField> spectra;
  for (const auto& term : terms) spectra.push_back(spectrum_of(component(term.particle1, spin)));
  auto particle2 = [&](std::size_t i, std::size_t j) { return inner(terms[i].particle2, terms[j].particle2); };
  const double num = gram_sum(
      terms, [&](std::size_t i, std::size_t j) { return weighted_spectral_inner(spectra[i], spectra[j], p); }, particle2);
  const double den = gram_sum(
      terms, [&](std::size_t i, std::size_t j) { return inner(component(terms[i].particle1, spin), component(terms[j].particle1, spin)); },
      particle2);
  if (!(den > 0.0)) throw DomainError("spin component has zero weight");
  return num / den;
}

double particle1_position_given_spin(const TwoParticleState& state, Spin spin) {
  const auto& terms = state.terms();
  if (terms.empty()) throw DomainError("position expectation of an empty state");
  for (const auto& term : terms) require_localized(component(term.particle1, spin));
  auto particle2 = [&](std::size_t i, std::size_t j) { return inner(terms[i].particle2, terms[j].particle2); };
  auto part1 = [&](std::size_t i) -> const ComplexField& { return component(terms[i].particle1, spin); };
  const double num = gram_sum(
      terms, [&](std::size_t i, std::size_t j) { return position_weighted_inner(part1(i), part1(j)); }, particle2);
  const double den =
      gram_sum(terms, [&](std::size_t i, std::size_t j) { return inner(part1(i), part1(j)); }, particle2);
  if (!(den > 0.0)) throw DomainError("spin component has zero weight");
  return num / den;
}

double flipped_branch_position(const PhysParams& params, double t) {
  const double eps = params.epsilon();
  const double P = params.P();
  return params.a() * eps / (P * P) + (P - eps / P) * t;
}

Measurement measure(const TwoParticleState& state, const PhysParams& params, double half_width) {
  const MomentumWindow window(-params.P(), half_width);
  Measurement m{0, 0, 0, 0, 0, 0, 0, 0, window};
  m.P_u = spin_probability(state, Spin::Up);
  m.P_d = spin_probability(state, Spin::Down);
  m.P_minus_u = joint_momentum_spin_probability(state, window, Spin::Up, params);
  m.P_minus_d = joint_momentum_spin_probability(state, window, Spin::Down, params);
  m.ratio_u = m.P_u > 0.0 ? m.P_minus_u / m.P_u : 0.0;
  m.ratio_d = m.P_d > 0.0 ? m.P_minus_d / m.P_d : 0.0;
  if (m.P_u > 0.0) {
    m.mean_p1_up = particle1_momentum_given_spin(state, Spin::Up, params);
    m.mean_x1_up = particle1_position_given_spin(state, Spin::Up);
  }
  return m;
}

nlohmann::json to_json(const Measurement& m) {
  nlohmann::json j;
  j["P_u"] = m.P_u;
  j["P_d"] = m.P_d;
  j["P_minus_u"] = m.P_minus_u;
  j["P_minus_d"] = m.P_minus_d;
  j["ratio_u"] = m.ratio_u;
  j["ratio_d"] = m.ratio_d;
  j["mean_p1_up"] = m.mean_p1_up;
  j["mean_x1_up"] = m.mean_x1_up;
  j["window"] = {{"center", m.window.center}, {"half_width", m.window.half_width}};
  return j;
}

}  // namespace epr
