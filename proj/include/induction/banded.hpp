#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace induction {

// One row of a sparse operator: value vals[k] sits at column cols[k].
struct SparseRow {
  std::vector<std::size_t> cols;
  std::vector<double> vals;
};

// Square operator stored as explicit edge rows plus a uniform interior stencil.
// Rows in [interior_begin, interior_end) are out[i] = sum_k stencil[k] * in[i - half + k].
class BandedOperator {
 public:
  BandedOperator() = default;

  // Builds from a full list of rows and compresses the uniform interior.
  static BandedOperator from_rows(std::vector<SparseRow> rows, bool periodic);

  std::size_t size() const { return n_; }
  bool periodic() const { return periodic_; }
  std::size_t interior_begin() const { return interior_begin_; }
  std::size_t interior_end() const { return interior_end_; }
  std::size_t half_width() const { return half_; }
  std::span<const double> stencil() const { return stencil_; }
  const SparseRow& row(std::size_t i) const { return rows_[i]; }

  // Entry (i, j); zero outside the sparsity pattern.
  double entry(std::size_t i, std::size_t j) const;

  void apply(std::span<const double> in, std::span<double> out) const;

  BandedOperator transpose() const;
  // this * other
  BandedOperator compose(const BandedOperator& other) const;
  // diag(left) * this * diag(right)
  BandedOperator scaled(std::span<const double> left, std::span<const double> right) const;

 private:
  void compress();

  std::size_t n_ = 0;
  bool periodic_ = false;
  std::vector<SparseRow> rows_;
  std::vector<double> stencil_;
  std::size_t half_ = 0;
  std::size_t interior_begin_ = 0;
  std::size_t interior_end_ = 0;
};

}  // namespace induction
