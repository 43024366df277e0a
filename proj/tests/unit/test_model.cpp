#include <cmath>
#include <numbers>

#include "doctest.h"

#include "epr/duhamel.hpp"
#include "epr/errors.hpp"
#include "epr/model.hpp"
#include "epr/observables.hpp"
#include "epr/quadrature.hpp"
#include "support.hpp"

using namespace epr;
using std::numbers::pi;

namespace {

double gaussian_N(double eps, double P) { return 1.0 / std::sqrt(2.0 + 2.0 * std::exp(-P * P / (eps * eps))); }

// Grid centred on 0 with n points and spacing fine enough for momentum P at eps.
Grid centred_grid(double half_width, std::size_t n) { return Grid(-half_width, 2.0 * half_width / n, n); }

}  // namespace

TEST_CASE("PhysParams rejects non-positive constants") {
  CHECK_THROWS_AS(PhysParams(0.0, 1, 1, 1), InvalidInput);
  CHECK_THROWS_AS(PhysParams(0.1, -1, 1, 1), InvalidInput);
  CHECK_THROWS_AS(PhysParams(0.1, 1, 0, 1), InvalidInput);
  CHECK_THROWS_AS(PhysParams(0.1, 1, 1, 0), InvalidInput);
  CHECK_THROWS_AS(PhysParams(std::nan(""), 1, 1, 1), InvalidInput);
}

TEST_CASE("derived time scales") {
  for (double eps : {0.05, 0.2, 0.7}) {
    for (double P : {0.5, 1.0, 3.0}) {
      for (double a : {0.3, 1.0, 4.0}) {
        const PhysParams p(eps, P, a, 2.0);
        CHECK(p.t_coll() * P == doctest::Approx(a).epsilon(1e-15));
        CHECK(p.t_spin() / p.t_int() == doctest::Approx(2.0 * pi * P).epsilon(1e-14));
        CHECK(p.t_spin() == doctest::Approx(2.0 * pi * eps));
      }
    }
  }
  const PhysParams p(0.2, 1, 1, 2);
  CHECK(p.with_epsilon(0.3).epsilon() == 0.3);
  CHECK(p.with_t_final(5).t_final() == 5);
  CHECK(p.with_a(7).a() == 7);
}

TEST_CASE("normalization constant") {
  SUBCASE("small eps approaches 1/sqrt(2)") {
    CHECK(normalization_constant(PhysParams(0.01, 1, 1, 1), Envelope::gaussian()) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  }
  SUBCASE("closed Gaussian values") {
    const double n05 = normalization_constant(PhysParams(0.5, 1, 1, 1), Envelope::gaussian());
    CHECK(std::abs(n05 - 0.7007188) < 5e-7);
    CHECK(std::abs(n05 - gaussian_N(0.5, 1.0)) < 1e-10);
    const double n2 = normalization_constant(PhysParams(2.0, 1, 1, 1), Envelope::gaussian());
    CHECK(std::abs(n2 - 0.5301776) < 5e-7);
    CHECK(std::abs(n2 - gaussian_N(2.0, 1.0)) < 1e-10);
  }
  SUBCASE("overlap integral and the exact pair coefficient") {
    const PhysParams p(0.5, 1, 1, 1);
    const double c = packet_overlap(p, Envelope::gaussian());
    CHECK(std::abs(c - std::exp(-4.0)) < 1e-12);
    CHECK(state_coefficient(p, Envelope::gaussian()) == doctest::Approx(1.0 / std::sqrt(2.0 + 2.0 * c * c)).epsilon(1e-14));
    CHECK(state_coefficient(p, Envelope::gaussian()) > normalization_constant(p, Envelope::gaussian()));
  }
  SUBCASE("agrees with the Gaussian formula across parameters") {
    for (double eps : {0.1, 0.3, 0.6, 1.0, 1.7, 3.0})
      for (double P : {0.5, 1.0, 2.0})
        CHECK(std::abs(normalization_constant(PhysParams(eps, P, 1, 1), Envelope::gaussian()) - gaussian_N(eps, P)) <
              1e-10);
  }
  SUBCASE("sech envelope lies in (0, 1)") {
    const double N = normalization_constant(PhysParams(0.8, 1, 1, 1), Envelope::sech());
    CHECK(N > 0.0);
    CHECK(N < 1.0);
  }
  SUBCASE("non-normalized envelope is rejected") {
    CHECK_THROWS_AS(normalization_constant(PhysParams(0.3, 1, 1, 1), Envelope::scaled(Envelope::Shape::Gaussian, 1.01)),
                    InvalidInput);
  }
}

TEST_CASE("envelope and potential transforms match quadrature") {
  // Real even functions: f^(k) = (2 pi)^{-1/2} int f(y) cos(k y) dy.
  auto transform = [](auto fn, double k, double r) {
    double sum = 0.0;
    for (const auto& node : gauss_legendre_panels(-r, r, 400)) sum += node.w * fn(node.x) * std::cos(k * node.x);
    return sum / std::sqrt(2.0 * pi);
  };
  for (double k : {0.0, 0.5, 1.0, 2.3}) {
    for (auto env : {Envelope::gaussian(), Envelope::sech()}) {
      const double ref = transform([&](double y) { return env(y); }, k, 60.0);
      CHECK(std::abs(env.fourier(k) - ref) < 1e-8 * std::max(1.0, std::abs(ref)));
    }
    for (auto pot : {Potential::gaussian(), Potential::sech2()}) {
      const double ref = transform([&](double y) { return pot(y); }, k, 60.0);
      CHECK(std::abs(pot.fourier(k) - ref) < 1e-8 * std::max(1.0, std::abs(ref)));
    }
  }
  CHECK(Envelope::gaussian().norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(Envelope::sech().norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(Potential::gaussian().fourier(1.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
  CHECK(Potential::zero().fourier(0.3) == 0.0);
  CHECK(std::abs(Potential::sech2().fourier(Potential::sech2().frequency_cutoff(1e-12))) <= 1e-12);
}

TEST_CASE("envelope derivative matches finite differences") {
  for (auto env : {Envelope::gaussian(), Envelope::sech()}) {
    for (double y : {-2.0, -0.3, 0.7, 1.9}) {
      const double h = 1e-5;
      CHECK(env.derivative(y) == doctest::Approx((env(y + h) - env(y - h)) / (2 * h)).epsilon(1e-7));
    }
  }
}

TEST_CASE("named shapes") {
  CHECK(Envelope::from_name("gaussian").shape() == Envelope::Shape::Gaussian);
  CHECK(Envelope::from_name("sech").shape() == Envelope::Shape::Sech);
  CHECK(Potential::from_name("sech2").shape() == Potential::Shape::Sech2);
  CHECK(Potential::from_name("zero").is_zero());
  CHECK_THROWS_AS(Envelope::from_name("box"), InvalidInput);
  CHECK_THROWS_AS(Potential::from_name("delta"), InvalidInput);
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid(0.0, 0.1, 1000), InvalidInput);
  CHECK_THROWS_AS(Grid(0.0, 0.1, 1), InvalidInput);
  CHECK_THROWS_AS(Grid(0.0, 0.0, 64), InvalidInput);
  const Grid g(-1.0, 0.25, 8);
  CHECK(g.x(3) == doctest::Approx(-0.25));
  CHECK(g.length() == doctest::Approx(2.0));
  CHECK(g.wavenumber(1) == doctest::Approx(pi));
  CHECK(g.wavenumber(4) == doctest::Approx(-4 * pi));
  CHECK(g.wavenumber(7) == doctest::Approx(-pi));
  CHECK(is_power_of_two(1024));
  CHECK_FALSE(is_power_of_two(1023));
  CHECK(next_power_of_two(1025) == 2048);
}

TEST_CASE("default grid") {
  for (double eps : {0.4, 0.3, 0.2, 0.15}) {
    const PhysParams p(eps, 1, 1, 2);
    const Grid g = default_grid(p, 8192);
    CHECK(is_power_of_two(g.size()));
    CHECK(g.dx() <= eps * eps * 2 * pi / 16 + 1e-15);
    CHECK(g.x_min() == doctest::Approx(-13.0));
    CHECK(g.length() == doctest::Approx(26.0));
    CHECK(nyquist_momentum(g, eps) > 1.0 + 6 * eps);
  }
  CHECK_THROWS_AS(default_grid(PhysParams(0.05, 1, 1, 2), 8192), ResolutionError);
  CHECK(default_time_step(PhysParams(0.2, 1, 1, 2)) == doctest::Approx(0.01));
  CHECK(default_time_step(PhysParams(0.2, 4, 1, 2)) == doctest::Approx(0.0025));
}

TEST_CASE("wavepacket sampling") {
  const PhysParams p(0.3, 1, 1, 2);
  const Grid g = default_grid(p);
  const auto phi = sample_wavepacket(g, p, Envelope::gaussian(), p.P());
  CHECK(std::abs(phi.norm() - 1.0) < 1e-8);
  CHECK(std::abs(position_expectation(phi)) < 1e-8);
  CHECK(std::abs(scaled_momentum_expectation(phi, p) - p.P()) < 1e-8);

  SUBCASE("norm independent of momentum and offset") {
    for (double K : {-1.3, 0.0, 0.4, 1.0})
      for (double X : {-3.0, 0.0, 2.5})
        CHECK(std::abs(sample_wavepacket(g, p, Envelope::gaussian(), K, X).norm() - phi.norm()) < 1e-8);
  }
  SUBCASE("under-resolved grid names the needed spacing") {
    const Grid coarse(-13.0, 26.0 / 128, 128);
    try {
      sample_wavepacket(coarse, p, Envelope::gaussian(), p.P());
      FAIL("expected ResolutionError");
    } catch (const ResolutionError& e) {
      CHECK(e.required_dx() == doctest::Approx(0.09 * pi / (1.0 + 1.8)));
      CHECK(std::string(e.what()).find("dx") != std::string::npos);
    }
  }
}

TEST_CASE("initial state") {
  const Model m = testing::standard_model(0.3);
  const Grid g = default_grid(m.params);
  const auto state = initial_state(g, m);
  REQUIRE(state.term_count() == 2);
  for (const auto& term : state.terms()) CHECK(term.particle1.up().norm() == 0.0);
  CHECK(std::abs(state.norm() - 1.0) < 1e-6);
  CHECK(spin_up_probability(state) == 0.0);

  SUBCASE("packet overlap at large eps") {
    const PhysParams p(0.5, 1, 1, 2);
    const Grid fine = centred_grid(8.0, 2048);
    const auto plus = sample_wavepacket(fine, p, Envelope::gaussian(), 1.0);
    const auto minus = sample_wavepacket(fine, p, Envelope::gaussian(), -1.0);
    const cplx overlap = inner(plus, minus);
    CHECK(std::abs(overlap.real() - std::exp(-4.0)) < 1e-8);
    CHECK(std::abs(overlap.imag()) < 1e-12);
    const auto wide = initial_state(fine, Model{p});
    CHECK(std::abs(wide.norm() - 1.0) < 1e-6);
  }
}

TEST_CASE("critical point of the phase") {
  for (double a : {0.5, 1.0, 2.0}) {
    for (double K : {0.5, 1.0, 3.0}) {
      const auto cp = CriticalPoint::of(a, K);
      CHECK(cp.tau_c * K == doctest::Approx(a).epsilon(1e-15));
      CHECK(cp.xi_c * K == doctest::Approx(-1.0).epsilon(1e-15));
      CHECK(CriticalPoint::phase(cp.tau_c, cp.xi_c, a, K) == doctest::Approx(a / K).epsilon(1e-14));
      for (double dtau : {-0.7, -0.1, 0.0, 0.4})
        for (double dxi : {-0.5, 0.0, 0.2, 1.1}) {
          const double tau = cp.tau_c + dtau, xi = cp.xi_c + dxi;
          const double rest = CriticalPoint::phase(tau, xi, a, K) - a / K - K * dtau * dxi;
          CHECK(std::abs(rest) < 1e-12);
        }
    }
  }
}
