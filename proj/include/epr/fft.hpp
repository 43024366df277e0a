#pragma once

#include <span>

#include "epr/field.hpp"

namespace epr::fft {

/// In-place unnormalized forward transform, X_j = sum_m x_m exp(-2 pi i j m / n).
void forward(std::span<cplx> data);

/// In-place inverse transform including the 1/n factor.
void inverse(std::span<cplx> data);

}  // namespace epr::fft
