#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "induction/sbp.hpp"

namespace induction {

// Axes are numbered 0, 1, 2 (x, y, z). Node layout is x fastest:
// index(i, j, k) = i + n0 * (j + n1 * k).

struct GridSpec {
  std::array<std::size_t, 3> n{};
  std::array<double, 3> lo{0.0, 0.0, 0.0};
  std::array<double, 3> hi{1.0, 1.0, 1.0};
  std::array<bool, 3> periodic{false, false, false};
  int order = 2;

  static GridSpec cube(int order, std::size_t n, double lo, double hi, bool periodic = false);
};

class Grid {
 public:
  explicit Grid(const GridSpec& spec);

  const GridSpec& spec() const { return spec_; }
  int order() const { return spec_.order; }
  std::size_t n(int axis) const { return spec_.n[static_cast<std::size_t>(axis)]; }
  std::size_t size() const { return size_; }
  std::size_t stride(int axis) const { return stride_[static_cast<std::size_t>(axis)]; }
  bool periodic(int axis) const { return spec_.periodic[static_cast<std::size_t>(axis)]; }
  double dx(int axis) const { return dx_[static_cast<std::size_t>(axis)]; }
  double min_dx() const;
  double coord(int axis, std::size_t i) const;
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return i + spec_.n[0] * (j + spec_.n[1] * k); }
  std::array<std::size_t, 3> unravel(std::size_t idx) const;

  const SbpOperator& op(int axis) const { return ops_[static_cast<std::size_t>(axis)]; }
  /// Per-node quadrature weight of M = Mx (x) My (x) Mz.
  std::span<const double> mass() const { return mass_; }
  /// True if the node lies on a face of a non-periodic axis.
  bool on_boundary(std::size_t idx) const;
  bool same_shape(const Grid& other) const;

 private:
  GridSpec spec_;
  std::size_t size_ = 0;
  std::array<std::size_t, 3> stride_{};
  std::array<double, 3> dx_{};
  std::vector<SbpOperator> ops_;
  std::vector<double> mass_;
};

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(std::size_t n, double value = 0.0) : v_(n, value) {}
  explicit ScalarField(std::vector<double> values) : v_(std::move(values)) {}

  std::size_t size() const { return v_.size(); }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }
  std::span<double> span() { return v_; }
  std::span<const double> span() const { return v_; }
  const std::vector<double>& values() const { return v_; }
  auto begin() { return v_.begin(); }
  auto end() { return v_.end(); }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  void fill(double value);
  bool all_finite() const;

 private:
  std::vector<double> v_;
};

struct VectorField {
  std::array<ScalarField, 3> c;

  VectorField() = default;
  explicit VectorField(std::size_t n) : c{ScalarField(n), ScalarField(n), ScalarField(n)} {}

  ScalarField& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  const ScalarField& operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
  std::size_t size() const { return c[0].size(); }
  void fill(double value);
  bool all_finite() const;
};

// y += a * x
void axpy(double a, const ScalarField& x, ScalarField& y);
void axpy(double a, const VectorField& x, VectorField& y);
// x *= a
void scale(double a, VectorField& x);

/// Which one-dimensional operator to apply along an axis.
enum class AxisOp { D, DTranspose, D2, DDStar };

/// out = alpha * A_axis in, or out += alpha * A_axis in when accumulate is set.
void apply_axis(const Grid& grid, AxisOp which, int axis, const double* in, double* out, double alpha = 1.0,
                bool accumulate = false);

ScalarField apply_axis_d(const Grid& grid, int axis, const ScalarField& f);
ScalarField divergence(const Grid& grid, const VectorField& b);
void divergence(const Grid& grid, const VectorField& b, ScalarField& out);
/// (curl B)_i = eps_ijk D_j B_k
VectorField curl(const Grid& grid, const VectorField& b);
void curl(const Grid& grid, const VectorField& b, VectorField& out);
VectorField gradient(const Grid& grid, const ScalarField& phi);

double inner_m(const Grid& grid, const ScalarField& f, const ScalarField& g);
double norm_m(const Grid& grid, const ScalarField& f);
double inner_m(const Grid& grid, const VectorField& f, const VectorField& g);
double norm_m(const Grid& grid, const VectorField& f);
/// Sum over components of <B_i, B_i>_M.
double energy(const Grid& grid, const VectorField& b);
/// <1, f>_M
double integral_m(const Grid& grid, const ScalarField& f);

enum class LiftSign { Signed, Absolute };

/// M^{-1} E_axis data (signed) or M^{-1} |E_axis| data (absolute). Only the two
/// faces of the axis are nonzero; periodic axes give zero.
ScalarField boundary_lift(const Grid& grid, int axis, const ScalarField& data, LiftSign sign = LiftSign::Signed);

/// Calls fn(index, nu) for every node on the low (nu = -1) and high (nu = +1)
/// face of a non-periodic axis.
template <class Fn>
void for_each_face_node(const Grid& grid, int axis, Fn&& fn) {
  if (grid.periodic(axis)) return;
  const std::size_t n = grid.n(axis);
  const std::size_t len = grid.stride(axis);
  const std::size_t blocks = grid.size() / (n * len);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t lo = b * n * len;
    const std::size_t hi = lo + (n - 1) * len;
    for (std::size_t x = 0; x < len; ++x) fn(lo + x, -1.0);
    for (std::size_t x = 0; x < len; ++x) fn(hi + x, 1.0);
  }
}

void check_shape(const Grid& grid, const ScalarField& f, const char* what);
void check_shape(const Grid& grid, const VectorField& f, const char* what);

// Binary dump: three uint64 axis sizes, uint64 component count, then doubles
// component by component in layout order.
void write_binary(std::ostream& os, const Grid& grid, const VectorField& f);
VectorField read_binary(std::istream& is, std::array<std::size_t, 3>& n_out);
// CSV with columns x,y,z,f0[,f1,f2].
void write_csv(std::ostream& os, const Grid& grid, const VectorField& f);
void write_csv(std::ostream& os, const Grid& grid, const ScalarField& f);

}  // namespace induction
