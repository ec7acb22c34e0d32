#include "induction/banded.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace induction {

namespace {

bool dense_window(const SparseRow& r, std::size_t i, std::size_t half, std::size_t n, bool periodic,
                  std::vector<double>& out) {
  out.assign(2 * half + 1, 0.0);
  for (std::size_t k = 0; k < r.cols.size(); ++k) {
    std::ptrdiff_t off = static_cast<std::ptrdiff_t>(r.cols[k]) - static_cast<std::ptrdiff_t>(i);
    if (periodic) {
      const auto sn = static_cast<std::ptrdiff_t>(n);
      if (off > sn / 2) off -= sn;
      if (off < -sn / 2) off += sn;
    }
    if (off < -static_cast<std::ptrdiff_t>(half) || off > static_cast<std::ptrdiff_t>(half)) {
      return false;
    }
    out[static_cast<std::size_t>(off + static_cast<std::ptrdiff_t>(half))] += r.vals[k];
  }
  return true;
}

bool close(const std::vector<double>& a, const std::vector<double>& b) {
  double scale = 0.0;
  for (double v : b) scale = std::max(scale, std::abs(v));
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k] - b[k]) > 1e-14 * scale) return false;
  }
  return true;
}

SparseRow from_map(const std::map<std::size_t, double>& m) {
  SparseRow r;
  for (const auto& [c, v] : m) {
    if (v == 0.0) continue;
    r.cols.push_back(c);
    r.vals.push_back(v);
  }
  return r;
}

}  // namespace

BandedOperator BandedOperator::from_rows(std::vector<SparseRow> rows, bool periodic) {
  BandedOperator op;
  op.n_ = rows.size();
  op.periodic_ = periodic;
  op.rows_ = std::move(rows);
  for (auto& r : op.rows_) {
    std::vector<std::size_t> idx(r.cols.size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return r.cols[a] < r.cols[b]; });
    SparseRow s;
    for (std::size_t k : idx) {
      if (r.cols[k] >= op.n_) throw std::invalid_argument("BandedOperator: column out of range");
      s.cols.push_back(r.cols[k]);
      s.vals.push_back(r.vals[k]);
    }
    r = std::move(s);
  }
  op.compress();
  return op;
}

void BandedOperator::compress() {
  stencil_.clear();
  half_ = 0;
  interior_begin_ = interior_end_ = 0;
  if (n_ == 0) return;
  const std::size_t mid = n_ / 2;
  const SparseRow& r = rows_[mid];
  for (std::size_t c : r.cols) {
    std::ptrdiff_t off = static_cast<std::ptrdiff_t>(c) - static_cast<std::ptrdiff_t>(mid);
    half_ = std::max<std::size_t>(half_, static_cast<std::size_t>(std::abs(off)));
  }
  if (2 * half_ + 1 > n_) return;
  dense_window(r, mid, half_, n_, periodic_, stencil_);

  std::vector<double> w;
  auto matches = [&](std::size_t i) {
    if (!periodic_ && (i < half_ || i + half_ >= n_)) return false;
    return dense_window(rows_[i], i, half_, n_, periodic_, w) && close(w, stencil_);
  };
  std::size_t lo = mid;
  while (lo > 0 && matches(lo - 1)) --lo;
  std::size_t hi = mid + 1;
  while (hi < n_ && matches(hi)) ++hi;
  // Wrapped rows are handled explicitly so the stencil path never needs index arithmetic.
  interior_begin_ = std::max(lo, half_);
  interior_end_ = std::min(hi, n_ - half_);
  if (interior_end_ < interior_begin_) interior_end_ = interior_begin_;
}

double BandedOperator::entry(std::size_t i, std::size_t j) const {
  const SparseRow& r = rows_.at(i);
  for (std::size_t k = 0; k < r.cols.size(); ++k) {
    if (r.cols[k] == j) return r.vals[k];
  }
  return 0.0;
}

void BandedOperator::apply(std::span<const double> in, std::span<double> out) const {
  if (in.size() != n_ || out.size() != n_) throw std::invalid_argument("BandedOperator::apply: length mismatch");
  for (std::size_t i = 0; i < interior_begin_; ++i) {
    const SparseRow& r = rows_[i];
    double s = 0.0;
    for (std::size_t k = 0; k < r.cols.size(); ++k) s += r.vals[k] * in[r.cols[k]];
    out[i] = s;
  }
  const std::size_t w = stencil_.size();
  for (std::size_t i = interior_begin_; i < interior_end_; ++i) {
    const double* p = in.data() + (i - half_);
    double s = 0.0;
    for (std::size_t k = 0; k < w; ++k) s += stencil_[k] * p[k];
    out[i] = s;
  }
  for (std::size_t i = std::max(interior_end_, interior_begin_); i < n_; ++i) {
    const SparseRow& r = rows_[i];
    double s = 0.0;
    for (std::size_t k = 0; k < r.cols.size(); ++k) s += r.vals[k] * in[r.cols[k]];
    out[i] = s;
  }
}

BandedOperator BandedOperator::transpose() const {
  std::vector<std::map<std::size_t, double>> acc(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const SparseRow& r = rows_[i];
    for (std::size_t k = 0; k < r.cols.size(); ++k) acc[r.cols[k]][i] += r.vals[k];
  }
  std::vector<SparseRow> rows;
  rows.reserve(n_);
  for (const auto& m : acc) rows.push_back(from_map(m));
  return from_rows(std::move(rows), periodic_);
}

BandedOperator BandedOperator::compose(const BandedOperator& other) const {
  if (other.n_ != n_) throw std::invalid_argument("BandedOperator::compose: size mismatch");
  std::vector<SparseRow> rows;
  rows.reserve(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    std::map<std::size_t, double> m;
    const SparseRow& r = rows_[i];
    for (std::size_t k = 0; k < r.cols.size(); ++k) {
      const SparseRow& o = other.rows_[r.cols[k]];
      for (std::size_t l = 0; l < o.cols.size(); ++l) m[o.cols[l]] += r.vals[k] * o.vals[l];
    }
    rows.push_back(from_map(m));
  }
  return from_rows(std::move(rows), periodic_ && other.periodic_);
}

BandedOperator BandedOperator::scaled(std::span<const double> left, std::span<const double> right) const {
  if (left.size() != n_ || right.size() != n_) throw std::invalid_argument("BandedOperator::scaled: size mismatch");
  std::vector<SparseRow> rows = rows_;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = 0; k < rows[i].cols.size(); ++k) rows[i].vals[k] *= left[i] * right[rows[i].cols[k]];
  }
  return from_rows(std::move(rows), periodic_);
}

}  // namespace induction
