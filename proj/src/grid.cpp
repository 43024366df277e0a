#include "epr/grid.hpp"

#include <cmath>
#include <string>

#include "epr/errors.hpp"

namespace epr {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

Grid::Grid(double x_min, double dx, std::size_t n) : x_min_(x_min), dx_(dx), n_(n) {
  if (n < 2 || !is_power_of_two(n)) {
    throw InvalidInput("grid point count must be a power of two >= 2, got " + std::to_string(n));
  }
  if (!(dx > 0.0) || !std::isfinite(dx)) throw InvalidInput("grid spacing must be positive");
  if (!std::isfinite(x_min)) throw InvalidInput("grid origin must be finite");
}

double Grid::wavenumber(std::size_t j) const {
  const auto n = static_cast<std::ptrdiff_t>(n_);
  auto m = static_cast<std::ptrdiff_t>(j);
  if (m >= n / 2) m -= n;
  return 2.0 * std::numbers::pi * static_cast<double>(m) / length();
}

}  // namespace epr
