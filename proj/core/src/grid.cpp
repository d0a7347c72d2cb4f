#include "fhnvs/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fhnvs/error.hpp"

namespace fhnvs {

Grid::Grid(int dim, double half_width, int nodes_per_axis)
    : dim_(dim), half_width_(half_width), n_(nodes_per_axis) {
  if (dim < 1 || dim > 3) {
    throw InvalidArgument("grid dimension must be 1, 2 or 3, got " + std::to_string(dim));
  }
  if (!std::isfinite(half_width) || half_width <= 0.0) {
    throw InvalidArgument("grid half-width must be finite and positive");
  }
  if (nodes_per_axis < 3) {
    throw InvalidArgument("grid needs at least 3 interior nodes per axis, got " +
                          std::to_string(nodes_per_axis));
  }
  h_ = 2.0 * half_width_ / (n_ + 1);
  quad_weight_ = std::pow(h_, dim_);
  size_ = 1;
  for (int k = 0; k < dim_; ++k) size_ *= static_cast<std::size_t>(n_);
  std::size_t s = 1;
  for (int k = dim_ - 1; k >= 0; --k) {
    strides_[k] = s;
    s *= static_cast<std::size_t>(n_);
  }
}

std::array<int, 3> Grid::index(std::size_t flat) const noexcept {
  std::array<int, 3> idx{0, 0, 0};
  for (int k = 0; k < dim_; ++k) {
    idx[k] = static_cast<int>((flat / strides_[k]) % static_cast<std::size_t>(n_)) + 1;
  }
  return idx;
}

std::size_t Grid::flat(const std::array<int, 3>& idx) const noexcept {
  std::size_t f = 0;
  for (int k = 0; k < dim_; ++k) f += static_cast<std::size_t>(idx[k] - 1) * strides_[k];
  return f;
}

Point Grid::coord(std::size_t flat) const noexcept {
  Point x{0.0, 0.0, 0.0};
  const auto idx = index(flat);
  for (int k = 0; k < dim_; ++k) x[k] = coord_axis(idx[k]);
  return x;
}

Grid build_grid(int dim, double half_width, int nodes_per_axis) {
  return Grid(dim, half_width, nodes_per_axis);
}

void require_same_grid(const Grid& a, const Grid& b, const char* context) {
  if (!(a == b)) throw GridMismatch(std::string(context) + ": fields live on different grids");
}

Field::Field(const Grid& grid, double value) : grid_(grid), values_(grid.size(), value) {}

Field::Field(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw GridMismatch("field has " + std::to_string(values_.size()) + " values, grid has " +
                       std::to_string(grid_.size()) + " nodes");
  }
}

Field Field::sample(const Grid& grid, const std::function<double(const Point&)>& fn) {
  Field f(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) f[i] = fn(grid.coord(i));
  return f;
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(grid_, other.grid_, "field addition");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(grid_, other.grid_, "field subtraction");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double s) noexcept {
  for (double& v : values_) v *= s;
  return *this;
}

Field& Field::axpy(double s, const Field& other) {
  require_same_grid(grid_, other.grid_, "field axpy");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * other.values_[i];
  return *this;
}

double Field::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

double Field::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool Field::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Field hadamard(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid(), "pointwise product");
  Field out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

Field positive_part(const Field& u) {
  Field out(u.grid());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] > 0.0 ? u[i] : 0.0;
  return out;
}

Field negative_part(const Field& u) {
  Field out(u.grid());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] < 0.0 ? u[i] : 0.0;
  return out;
}

double dot(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid(), "dot product");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace fhnvs
