#pragma once

#include <cmath>

#include "epr/model.hpp"

namespace epr::testing {

inline Model standard_model(double eps, double P = 1.0, double a = 1.0, double t = 2.0) {
  return Model{PhysParams(eps, P, a, t)};
}

inline Model zero_potential_model(double eps, double P = 1.0, double a = 1.0, double t = 2.0) {
  Model m{PhysParams(eps, P, a, t)};
  m.potential = Potential::zero();
  return m;
}

inline double relative_distance(const ComplexField& a, const ComplexField& reference) {
  return distance(a, reference) / reference.norm();
}

}  // namespace epr::testing
