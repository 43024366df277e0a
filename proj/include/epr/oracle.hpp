#pragma once

#include <cstddef>

#include "epr/field.hpp"
#include "epr/model.hpp"
#include "epr/quadrature.hpp"

namespace epr {

/// Oracles are O(n^2); grids beyond this are refused.
inline constexpr std::size_t kOracleMaxPoints = 2048;

/// U0(t) f(x) = (2 pi i eps^2 t)^{-1/2} int e^{i (x-y)^2 / (2 eps^2 t)} f(y) dy by
/// direct summation at every grid point. The input is band-limited
/// interpolated onto a finer y-grid first so the chirp is resolved.
/// t = 0 returns the input.
ComplexField kernel_propagate(const ComplexField& field, double t, const PhysParams& params);

struct ConsistencyResult {
  double relative_distance;
  /// True when ||I(t) phi_P|| vanishes (V = 0): distance reported as 0.
  bool degenerate;
};

/// ||i_operator_form - i_operator_reduced|| / ||i_operator_reduced|| on phi_P.
ConsistencyResult i_operator_consistency(double t, const Model& model, const Grid& grid,
                                         const QuadratureOptions& options = {});

}  // namespace epr
