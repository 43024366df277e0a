#pragma once

#include <cstddef>
#include <numbers>

namespace epr {

/// Uniform periodic grid x_i = x_min + i*dx, i in [0, n), n a power of two.
class Grid {
public:
  Grid(double x_min, double dx, std::size_t n);

  double x_min() const { return x_min_; }
  double dx() const { return dx_; }
  std::size_t size() const { return n_; }
  double length() const { return dx_ * static_cast<double>(n_); }

  double x(std::size_t i) const { return x_min_ + dx_ * static_cast<double>(i); }

  /// FFT-ordered angular wavenumber of mode j: 0, 1, ..., n/2-1, -n/2, ..., -1
  /// times 2*pi/L.
  double wavenumber(std::size_t j) const;

  double nyquist_wavenumber() const { return std::numbers::pi / dx_; }

  bool operator==(const Grid&) const = default;

private:
  double x_min_;
  double dx_;
  std::size_t n_;
};

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

}  // namespace epr
