#pragma once

#include <complex>
#include <span>
#include <vector>

#include "epr/grid.hpp"

namespace epr {

using cplx = std::complex<double>;

/// Complex samples of a one-particle wavefunction on a grid.
class ComplexField {
public:
  explicit ComplexField(const Grid& grid);
  ComplexField(const Grid& grid, std::vector<cplx> values);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  cplx& operator[](std::size_t i) { return values_[i]; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }

  std::span<cplx> values() { return values_; }
  std::span<const cplx> values() const { return values_; }

  double norm_squared() const;
  double norm() const;

  ComplexField& operator+=(const ComplexField& other);
  ComplexField& operator-=(const ComplexField& other);
  ComplexField& operator*=(cplx factor);

private:
  Grid grid_;
  std::vector<cplx> values_;
};

ComplexField operator+(ComplexField lhs, const ComplexField& rhs);
ComplexField operator-(ComplexField lhs, const ComplexField& rhs);
ComplexField operator*(cplx factor, ComplexField field);

/// <a, b> = sum conj(a_i) b_i dx.
cplx inner(const ComplexField& a, const ComplexField& b);
double distance(const ComplexField& a, const ComplexField& b);

/// Particle 1 with spin: upper (spin up) and lower (spin down) components.
class SpinorField {
public:
  SpinorField(ComplexField up, ComplexField down);

  const Grid& grid() const { return up_.grid(); }
  ComplexField& up() { return up_; }
  ComplexField& down() { return down_; }
  const ComplexField& up() const { return up_; }
  const ComplexField& down() const { return down_; }

  double norm_squared() const { return up_.norm_squared() + down_.norm_squared(); }
  double norm() const;

  /// (0, field): spin down.
  static SpinorField spin_down(ComplexField field);
  static SpinorField spin_up(ComplexField field);

private:
  ComplexField up_;
  ComplexField down_;
};

cplx inner(const SpinorField& a, const SpinorField& b);
double distance(const SpinorField& a, const SpinorField& b);

/// Sum of tensor products c_i (spinor_i ⊗ g_i). Never expanded onto a 2D grid;
/// every quadratic quantity goes through Gram matrices of the factors.
struct TensorTerm {
  SpinorField particle1;
  ComplexField particle2;
  cplx coefficient;
};

class TwoParticleState {
public:
  TwoParticleState() = default;
  explicit TwoParticleState(std::vector<TensorTerm> terms);

  void add(TensorTerm term);

  const std::vector<TensorTerm>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  /// sum_ij conj(c_i) c_j <u_i, u_j> <g_i, g_j>, cross terms included.
  double norm_squared() const;
  double norm() const;

private:
  std::vector<TensorTerm> terms_;
};

}  // namespace epr
