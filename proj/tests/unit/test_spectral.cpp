#include <cmath>
#include <numbers>

#include "doctest.h"

#include "epr/errors.hpp"
#include "epr/observables.hpp"
#include "epr/spectral.hpp"
#include "support.hpp"

using namespace epr;
using epr::testing::relative_distance;
using epr::testing::standard_model;
using std::numbers::pi;

TEST_CASE("free propagation") {
  const Model m = standard_model(0.3);
  const auto& p = m.params;
  const Grid g = default_grid(p);
  const auto phi = sample_wavepacket(g, p, m.envelope, p.P());

  SUBCASE("t = 0 is the identity") {
    const auto same = free_propagate(phi, 0.0, p);
    CHECK(distance(same, phi) == 0.0);
  }
  SUBCASE("unitary") {
    for (double t : {0.1, 1.0, 2.0, -1.5}) CHECK(std::abs(free_propagate(phi, t, p).norm() - phi.norm()) < 1e-12);
  }
  SUBCASE("inverse and group law") {
    CHECK(distance(free_propagate(free_propagate(phi, 1.7, p), -1.7, p), phi) < 1e-10);
    const auto two_steps = free_propagate(free_propagate(phi, 0.4, p), 1.1, p);
    CHECK(distance(two_steps, free_propagate(phi, 1.5, p)) < 1e-10);
  }
  SUBCASE("packet centre moves with velocity P") {
    for (double t : {0.5, 2.0}) CHECK(std::abs(position_expectation(free_propagate(phi, t, p)) - p.P() * t) < 1e-6);
  }
}

TEST_CASE("spin-free propagation") {
  const Model m = standard_model(0.25);
  const auto& p = m.params;
  const Grid g = default_grid(p);
  const auto phi = sample_wavepacket(g, p, m.envelope, p.P());
  const SpinorField s(cplx(0.6) * phi, cplx(0.0, 0.8) * phi);

  const auto same = spin_free_propagate(s, 0.0, p);
  CHECK(distance(same, s) == 0.0);

  const double t = 1.3;
  const auto evolved = spin_free_propagate(s, t, p);
  CHECK(std::abs(evolved.norm() - s.norm()) < 1e-12);
  const auto free_up = free_propagate(s.up(), t, p);
  const auto free_down = free_propagate(s.down(), t, p);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    worst = std::max(worst, std::abs(std::abs(evolved.up()[i]) - std::abs(free_up[i])));
    worst = std::max(worst, std::abs(std::abs(evolved.down()[i]) - std::abs(free_down[i])));
  }
  CHECK(worst < 1e-12);

  // e^{it/(2 eps)} has period 4 pi eps = pi at eps = 0.25.
  const double period = 4.0 * pi * p.epsilon();
  CHECK(period == doctest::Approx(pi));
  const auto full_turn = spin_free_propagate(SpinorField::spin_down(phi), period, p);
  CHECK(distance(full_turn.down(), free_propagate(phi, period, p)) < 1e-10);
  const auto half_turn = spin_free_propagate(SpinorField::spin_down(phi), 0.5 * period, p);
  CHECK(distance(half_turn.down(), cplx(-1.0) * free_propagate(phi, 0.5 * period, p)) < 1e-10);
}

TEST_CASE("interacting evolution") {
  const Model m = standard_model(0.3);
  const auto& p = m.params;
  const Grid g = default_grid(p);
  const auto phi = sample_wavepacket(g, p, m.envelope, p.P());
  const auto start = SpinorField::spin_down(phi);
  const double dt = default_time_step(p);

  SUBCASE("vanishing potential reproduces the spin-free flow") {
    const auto split = evolve_interacting(start, 2.0, dt, p, Potential::zero());
    CHECK(distance(split, spin_free_propagate(start, 2.0, p)) < 1e-10);
  }
  SUBCASE("unitary over the full run") {
    const auto evolved = evolve_interacting(start, 2.0, dt, p, m.potential);
    CHECK(std::abs(evolved.norm() - 1.0) < 1e-10);
    CHECK(evolved.up().norm() > 0.0);
  }
  SUBCASE("t = 0 returns the input") { CHECK(distance(evolve_interacting(start, 0.0, dt, p, m.potential), start) == 0.0); }
  SUBCASE("invalid steps") {
    CHECK_THROWS_AS(evolve_interacting(start, 1.0, 0.0, p, m.potential), InvalidInput);
    CHECK_THROWS_AS(evolve_interacting(start, 1.0, -0.1, p, m.potential), InvalidInput);
    CHECK_THROWS_AS(evolve_interacting(start, -1.0, dt, p, m.potential), InvalidInput);
  }
  SUBCASE("step count does not need to divide t") {
    const auto a = evolve_interacting(start, 1.0, 0.3, p, Potential::zero());
    CHECK(distance(a, spin_free_propagate(start, 1.0, p)) < 1e-10);
  }
  SUBCASE("second-order convergence in dt") {
    const double coarse = 0.02;
    const auto reference = evolve_interacting(start, 2.0, coarse / 8.0, p, m.potential);
    const double e1 = distance(evolve_interacting(start, 2.0, coarse, p, m.potential), reference);
    const double e2 = distance(evolve_interacting(start, 2.0, coarse / 2.0, p, m.potential), reference);
    MESSAGE("error ratio " << e1 / e2);
    CHECK(e1 / e2 > 3.6);
    CHECK(e1 / e2 < 4.6);
  }
}

TEST_CASE("boundary monitor") {
  const PhysParams p(0.3, 1, 1, 2);
  const Grid g = default_grid(p);
  const auto near_edge = sample_wavepacket(g, p, Envelope::gaussian(), 1.0, (g.x_min() + 0.3) / 0.3);
  CHECK(boundary_mass(near_edge) > 1e-3);
  CHECK_THROWS_AS(require_boundary_clear(near_edge), BoundaryMassError);
  const auto centred = sample_wavepacket(g, p, Envelope::gaussian(), 1.0);
  CHECK(boundary_mass(centred) < 1e-20);
  // A packet that runs into the edge during the evolution is reported.
  const auto spinor = SpinorField::spin_down(sample_wavepacket(g, p, Envelope::gaussian(), 1.0, 9.0 / 0.3));
  CHECK_THROWS_AS(evolve_interacting(spinor, 2.0, 0.015, p, Potential::gaussian()), BoundaryMassError);
}

TEST_CASE("full two-particle state") {
  SUBCASE("t = 0 reproduces the initial state") {
    const Model m = standard_model(0.3);
    const Grid g = default_grid(m.params);
    const auto at_zero = assemble_full_state(m, g, 0.0, default_time_step(m.params));
    const auto initial = initial_state(g, m);
    REQUIRE(at_zero.term_count() == initial.term_count());
    for (std::size_t i = 0; i < initial.term_count(); ++i) {
      CHECK(distance(at_zero.terms()[i].particle1, initial.terms()[i].particle1) < 1e-10);
      CHECK(distance(at_zero.terms()[i].particle2, initial.terms()[i].particle2) < 1e-10);
      CHECK(at_zero.terms()[i].coefficient == initial.terms()[i].coefficient);
    }
  }
  SUBCASE("norm and spin flip after the collision") {
    const Model m = standard_model(0.2);
    const Grid g = default_grid(m.params);
    const double t = 2.0 * m.params.t_coll();
    const auto state = assemble_full_state(m, g, t, default_time_step(m.params));
    CHECK(std::abs(state.norm() - 1.0) < 1e-6);
    const double predicted = alpha(m.params, m.potential) * 0.04;
    CHECK(predicted == doctest::Approx(0.046228).epsilon(1e-4));
    const double P_u = spin_up_probability(state);
    MESSAGE("P_u = " << P_u);
    CHECK(std::abs(P_u / predicted - 1.0) < 0.3);
  }
}
