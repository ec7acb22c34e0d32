#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "induction/banded.hpp"

namespace induction {

/// One-dimensional diagonal-norm summation-by-parts operator bundle.
///
/// Holds the first-derivative operator D, the diagonal mass weights M, the
/// narrow-stencil second derivative (when available), D^T and D M^{-1} D^T M.
/// All coefficients already include the grid spacing. Immutable after
/// construction.
class SbpOperator {
 public:
  /// Bounded operator with boundary closures; the boundary matrix is
  /// E = diag(-1, 0, ..., 0, 1).
  static SbpOperator build(int order, std::size_t n, double dx);

  /// Centered stencil of the same interior order on a periodic grid of n
  /// points. M = dx I and E = 0.
  static SbpOperator build_periodic(int order, std::size_t n, double dx);

  /// Number of closure rows per boundary for the given order.
  static std::size_t closure_rows(int order);
  /// Smallest admissible node count for a bounded operator.
  static std::size_t min_nodes(int order);

  int order() const { return order_; }
  std::size_t size() const { return n_; }
  double dx() const { return dx_; }
  bool periodic() const { return periodic_; }
  bool has_d2() const { return d2_.has_value(); }

  std::span<const double> m_weights() const { return m_; }
  /// Mass weight at the first (and, by symmetry, the last) node.
  double boundary_weight() const { return m_.front(); }
  /// Sign of E at the low (-1) and high (+1) boundary; zero when periodic.
  double low_sign() const { return periodic_ ? 0.0 : -1.0; }
  double high_sign() const { return periodic_ ? 0.0 : 1.0; }

  const BandedOperator& d() const { return d_; }
  const BandedOperator& d_transpose() const { return dt_; }
  const BandedOperator& d2() const;
  const BandedOperator& ddstar() const { return ddstar_; }

 private:
  SbpOperator() = default;
  void finish();

  int order_ = 0;
  std::size_t n_ = 0;
  double dx_ = 0.0;
  bool periodic_ = false;
  std::vector<double> m_;
  BandedOperator d_;
  BandedOperator dt_;
  std::optional<BandedOperator> d2_;
  BandedOperator ddstar_;
};

std::vector<double> apply_d(const SbpOperator& op, std::span<const double> line);
std::vector<double> apply_d_transpose(const SbpOperator& op, std::span<const double> line);
std::vector<double> apply_d2(const SbpOperator& op, std::span<const double> line);
/// D M^{-1} D^T M applied to a line.
std::vector<double> apply_ddstar(const SbpOperator& op, std::span<const double> line);

/// max |M D + D^T M - E| over all entries; zero up to rounding for a valid operator.
double sbp_identity_residual(const SbpOperator& op);

}  // namespace induction
