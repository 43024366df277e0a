#include "epr/field.hpp"

#include <cmath>

#include "epr/errors.hpp"

namespace epr {

namespace {

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) throw InvalidInput("fields live on different grids");
}

}  // namespace

ComplexField::ComplexField(const Grid& grid) : grid_(grid), values_(grid.size(), cplx{}) {}

ComplexField::ComplexField(const Grid& grid, std::vector<cplx> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw InvalidInput("field length does not match grid");
}

double ComplexField::norm_squared() const {
  double sum = 0.0;
  for (const auto& v : values_) sum += std::norm(v);
  return sum * grid_.dx();
}

double ComplexField::norm() const { return std::sqrt(norm_squared()); }

ComplexField& ComplexField::operator+=(const ComplexField& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ComplexField& ComplexField::operator-=(const ComplexField& other) {
  require_same_grid(grid_, other.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ComplexField& ComplexField::operator*=(cplx factor) {
  for (auto& v : values_) v *= factor;
  return *this;
}

ComplexField operator+(ComplexField lhs, const ComplexField& rhs) { return lhs += rhs; }
ComplexField operator-(ComplexField lhs, const ComplexField& rhs) { return lhs -= rhs; }
ComplexField operator*(cplx factor, ComplexField field) { return field *= factor; }

cplx inner(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.grid(), b.grid());
  cplx sum{};
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::conj(a[i]) * b[i];
  return sum * a.grid().dx();
}

double distance(const ComplexField& a, const ComplexField& b) { return (a - b).norm(); }

SpinorField::SpinorField(ComplexField up, ComplexField down) : up_(std::move(up)), down_(std::move(down)) {
  require_same_grid(up_.grid(), down_.grid());
}

double SpinorField::norm() const { return std::sqrt(norm_squared()); }

SpinorField SpinorField::spin_down(ComplexField field) {
  ComplexField zero(field.grid());
  return SpinorField(std::move(zero), std::move(field));
}

SpinorField SpinorField::spin_up(ComplexField field) {
  ComplexField zero(field.grid());
  return SpinorField(std::move(field), std::move(zero));
}

cplx inner(const SpinorField& a, const SpinorField& b) { return inner(a.up(), b.up()) + inner(a.down(), b.down()); }

double distance(const SpinorField& a, const SpinorField& b) {
  return std::sqrt(std::pow(distance(a.up(), b.up()), 2) + std::pow(distance(a.down(), b.down()), 2));
}

TwoParticleState::TwoParticleState(std::vector<TensorTerm> terms) {
  for (auto& t : terms) add(std::move(t));
}

void TwoParticleState::add(TensorTerm term) {
  if (!terms_.empty()) {
    require_same_grid(terms_.front().particle1.grid(), term.particle1.grid());
    require_same_grid(terms_.front().particle2.grid(), term.particle2.grid());
  }
  terms_.push_back(std::move(term));
}

double TwoParticleState::norm_squared() const {
  cplx sum{};
  for (const auto& ti : terms_) {
    for (const auto& tj : terms_) {
      sum += std::conj(ti.coefficient) * tj.coefficient * inner(ti.particle1, tj.particle1) *
             inner(ti.particle2, tj.particle2);
    }
  }
  return sum.real();
}

double TwoParticleState::norm() const { return std::sqrt(norm_squared()); }

}  // namespace epr
