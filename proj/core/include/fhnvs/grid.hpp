#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fhnvs {

using Point = std::array<double, 3>;

/// Uniform tensor-product grid of interior nodes on [-L, L]^dim with
/// homogeneous Dirichlet boundary. Node (i_1, ..., i_d), i_k in 1..n, sits at
/// x_k = -L + i_k h with h = 2L/(n+1). Flat storage is row-major, the last
/// axis varying fastest.
class Grid {
 public:
  Grid(int dim, double half_width, int nodes_per_axis);

  int dim() const noexcept { return dim_; }
  double half_width() const noexcept { return half_width_; }
  int n() const noexcept { return n_; }
  double spacing() const noexcept { return h_; }
  double quad_weight() const noexcept { return quad_weight_; }
  std::size_t size() const noexcept { return size_; }

  /// 1-based axis indices of a flat index; unused axes are 0.
  std::array<int, 3> index(std::size_t flat) const noexcept;
  std::size_t flat(const std::array<int, 3>& idx) const noexcept;
  /// Node coordinates; unused axes are 0.
  Point coord(std::size_t flat) const noexcept;
  double coord_axis(int i) const noexcept { return -half_width_ + i * h_; }
  /// Stride of axis k in flat storage.
  std::size_t stride(int axis) const noexcept { return strides_[axis]; }

  bool operator==(const Grid& other) const noexcept {
    return dim_ == other.dim_ && n_ == other.n_ && half_width_ == other.half_width_;
  }

 private:
  int dim_;
  double half_width_;
  int n_;
  double h_;
  double quad_weight_;
  std::size_t size_;
  std::array<std::size_t, 3> strides_{};
};

Grid build_grid(int dim, double half_width, int nodes_per_axis);

/// Interior nodal values of a grid function.
class Field {
 public:
  explicit Field(const Grid& grid, double value = 0.0);
  Field(const Grid& grid, std::vector<double> values);

  /// Samples fn(x) at every node.
  static Field sample(const Grid& grid, const std::function<double(const Point&)>& fn);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s) noexcept;
  /// this += s * other
  Field& axpy(double s, const Field& other);

  double min() const noexcept;
  double max() const noexcept;
  double max_abs() const noexcept;
  bool all_finite() const noexcept;

  friend Field operator+(Field lhs, const Field& rhs) { return lhs += rhs; }
  friend Field operator-(Field lhs, const Field& rhs) { return lhs -= rhs; }
  friend Field operator*(double s, Field f) { return f *= s; }
  friend Field operator-(Field f) { return f *= -1.0; }

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Pointwise product.
Field hadamard(const Field& a, const Field& b);
/// Pointwise max(u, 0) and min(u, 0).
Field positive_part(const Field& u);
Field negative_part(const Field& u);
/// Euclidean (unweighted) dot product of nodal vectors.
double dot(const Field& a, const Field& b);

void require_same_grid(const Grid& a, const Grid& b, const char* context);

}  // namespace fhnvs
