#pragma once

#include <cstddef>
#include <vector>

namespace epr {

struct QuadratureNode {
  double x;
  double w;
};

/// Composite 16-point Gauss-Legendre rule on [lo, hi] split into `panels`
/// equal panels.
std::vector<QuadratureNode> gauss_legendre_panels(double lo, double hi, std::size_t panels);

/// Stop rule for refined quadratures: successive refinements (panel counts
/// doubled) must differ by less than rel_tol in relative L2.
struct QuadratureOptions {
  double rel_tol = 1e-6;
  int max_refinements = 5;
};

}  // namespace epr
