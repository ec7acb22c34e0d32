#include "induction/sbp.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace induction {

namespace {

struct Coefficients {
  std::vector<double> weights;                // boundary mass weights (units of dx)
  std::vector<std::vector<double>> d_block;   // D closure rows (units of 1/dx)
  std::vector<double> d_interior;             // centered stencil
  std::vector<std::vector<double>> d2_block;  // D2 closure rows (units of 1/dx^2)
  std::vector<double> d2_interior;
};

// Order-6 entries use the diagonal-norm operator of Mattsson and Nordstrom (2004),
// free parameter x1 = 342523/518400.
const Coefficients& coefficients(int order) {
  static const Coefficients c2{
      {1.0 / 2.0},
      {{-1.0, 1.0}},
      {-1.0 / 2.0, 0.0, 1.0 / 2.0},
      {{1.0, -2.0, 1.0}},
      {1.0, -2.0, 1.0},
  };
  static const Coefficients c4{
      {17.0 / 48.0, 59.0 / 48.0, 43.0 / 48.0, 49.0 / 48.0},
      {{-24.0 / 17.0, 59.0 / 34.0, -4.0 / 17.0, -3.0 / 34.0},
       {-1.0 / 2.0, 0.0, 1.0 / 2.0},
       {4.0 / 43.0, -59.0 / 86.0, 0.0, 59.0 / 86.0, -4.0 / 43.0},
       {3.0 / 98.0, 0.0, -59.0 / 98.0, 0.0, 32.0 / 49.0, -4.0 / 49.0}},
      {1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0},
      {{2.0, -5.0, 4.0, -1.0},
       {1.0, -2.0, 1.0},
       {-4.0 / 43.0, 59.0 / 43.0, -110.0 / 43.0, 59.0 / 43.0, -4.0 / 43.0},
       {-1.0 / 49.0, 0.0, 59.0 / 49.0, -118.0 / 49.0, 64.0 / 49.0, -4.0 / 49.0}},
      {-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0},
  };
  static const Coefficients c6{
      {13649.0 / 43200.0, 12013.0 / 8640.0, 2711.0 / 4320.0, 5359.0 / 4320.0, 7877.0 / 8640.0,
       43801.0 / 43200.0},
      {{-21600.0 / 13649.0, 104009.0 / 54596.0, 30443.0 / 81894.0, -33311.0 / 27298.0, 16863.0 / 27298.0,
        -15025.0 / 163788.0},
       {-104009.0 / 240260.0, 0.0, -311.0 / 72078.0, 20229.0 / 24026.0, -24337.0 / 48052.0, 36661.0 / 360390.0},
       {-30443.0 / 162660.0, 311.0 / 32532.0, 0.0, -11155.0 / 16266.0, 41287.0 / 32532.0, -21999.0 / 54220.0},
       {33311.0 / 107180.0, -20229.0 / 21436.0, 485.0 / 1398.0, 0.0, 4147.0 / 21436.0, 25427.0 / 321540.0,
        72.0 / 5359.0},
       {-16863.0 / 78770.0, 24337.0 / 31508.0, -41287.0 / 47262.0, -4147.0 / 15754.0, 0.0, 342523.0 / 472620.0,
        -1296.0 / 7877.0, 144.0 / 7877.0},
       {15025.0 / 525612.0, -36661.0 / 262806.0, 21999.0 / 87602.0, -25427.0 / 262806.0, -342523.0 / 525612.0,
        0.0, 32400.0 / 43801.0, -6480.0 / 43801.0, 720.0 / 43801.0}},
      {-1.0 / 60.0, 3.0 / 20.0, -3.0 / 4.0, 0.0, 3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0},
      {{114170.0 / 40947.0, -438107.0 / 54596.0, 336409.0 / 40947.0, -276997.0 / 81894.0, 3747.0 / 13649.0,
        21035.0 / 163788.0},
       {6173.0 / 5860.0, -2066.0 / 879.0, 3283.0 / 1758.0, -303.0 / 293.0, 2111.0 / 3516.0, -601.0 / 4395.0},
       {-52391.0 / 81330.0, 134603.0 / 32532.0, -21982.0 / 2711.0, 112915.0 / 16266.0, -46969.0 / 16266.0,
        30409.0 / 54220.0},
       {68603.0 / 321540.0, -12423.0 / 10718.0, 112915.0 / 32154.0, -75934.0 / 16077.0, 53369.0 / 21436.0,
        -54899.0 / 160770.0, 48.0 / 5359.0},
       {-7053.0 / 39385.0, 86551.0 / 94524.0, -46969.0 / 23631.0, 53369.0 / 15754.0, -87904.0 / 23631.0,
        820271.0 / 472620.0, -1296.0 / 7877.0, 96.0 / 7877.0},
       {21035.0 / 525612.0, -24641.0 / 131403.0, 30409.0 / 87602.0, -54899.0 / 131403.0, 820271.0 / 525612.0,
        -117600.0 / 43801.0, 64800.0 / 43801.0, -6480.0 / 43801.0, 480.0 / 43801.0}},
      {1.0 / 90.0, -3.0 / 20.0, 3.0 / 2.0, -49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0},
  };
  switch (order) {
    case 2:
      return c2;
    case 4:
      return c4;
    case 6:
      return c6;
    default:
      throw std::invalid_argument("unsupported SBP order " + std::to_string(order) + " (expected 2, 4 or 6)");
  }
}

SparseRow dense_row(std::size_t first, const std::vector<double>& vals, double scale) {
  SparseRow r;
  for (std::size_t k = 0; k < vals.size(); ++k) {
    if (vals[k] == 0.0) continue;
    r.cols.push_back(first + k);
    r.vals.push_back(vals[k] * scale);
  }
  return r;
}

// Closure rows mirrored at the high boundary with the given sign.
std::vector<SparseRow> bounded_rows(std::size_t n, const std::vector<std::vector<double>>& block,
                                    const std::vector<double>& interior, double scale, double mirror_sign) {
  const std::size_t r = block.size();
  const std::size_t h = interior.size() / 2;
  std::vector<SparseRow> rows(n);
  for (std::size_t i = 0; i < r; ++i) {
    rows[i] = dense_row(0, block[i], scale);
    SparseRow m;
    for (std::size_t j = block[i].size(); j-- > 0;) {
      if (block[i][j] == 0.0) continue;
      m.cols.push_back(n - 1 - j);
      m.vals.push_back(mirror_sign * block[i][j] * scale);
    }
    rows[n - 1 - i] = std::move(m);
  }
  for (std::size_t i = r; i + r < n; ++i) rows[i] = dense_row(i - h, interior, scale);
  return rows;
}

std::vector<SparseRow> periodic_rows(std::size_t n, const std::vector<double>& interior, double scale) {
  const std::size_t h = interior.size() / 2;
  std::vector<SparseRow> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<std::size_t, double>> entries;
    for (std::size_t k = 0; k < interior.size(); ++k) {
      if (interior[k] == 0.0) continue;
      entries.emplace_back((i + n + k - h) % n, interior[k] * scale);
    }
    SparseRow& row = rows[i];
    for (const auto& [c, v] : entries) {
      bool merged = false;
      for (std::size_t q = 0; q < row.cols.size(); ++q) {
        if (row.cols[q] == c) {
          row.vals[q] += v;
          merged = true;
        }
      }
      if (!merged) {
        row.cols.push_back(c);
        row.vals.push_back(v);
      }
    }
  }
  return rows;
}

}  // namespace

std::size_t SbpOperator::closure_rows(int order) { return coefficients(order).weights.size(); }

std::size_t SbpOperator::min_nodes(int order) { return 2 * closure_rows(order) + 1; }

SbpOperator SbpOperator::build(int order, std::size_t n, double dx) {
  const Coefficients& c = coefficients(order);
  if (!(dx > 0.0)) throw std::invalid_argument("SBP grid spacing must be positive");
  // The widest closure row must not reach the mirrored closure at the other end.
  std::size_t needed = min_nodes(order);
  for (const auto& row : c.d2_block) needed = std::max(needed, row.size());
  for (const auto& row : c.d_block) needed = std::max(needed, row.size());
  if (n < needed) {
    throw std::invalid_argument("SBP order " + std::to_string(order) + " needs at least " + std::to_string(needed) +
                                " nodes, got " + std::to_string(n));
  }
  SbpOperator op;
  op.order_ = order;
  op.n_ = n;
  op.dx_ = dx;
  op.periodic_ = false;
  op.m_.assign(n, dx);
  for (std::size_t i = 0; i < c.weights.size(); ++i) {
    op.m_[i] = c.weights[i] * dx;
    op.m_[n - 1 - i] = c.weights[i] * dx;
  }
  op.d_ = BandedOperator::from_rows(bounded_rows(n, c.d_block, c.d_interior, 1.0 / dx, -1.0), false);
  op.d2_ = BandedOperator::from_rows(bounded_rows(n, c.d2_block, c.d2_interior, 1.0 / (dx * dx), 1.0), false);
  op.finish();
  return op;
}

SbpOperator SbpOperator::build_periodic(int order, std::size_t n, double dx) {
  const Coefficients& c = coefficients(order);
  if (!(dx > 0.0)) throw std::invalid_argument("SBP grid spacing must be positive");
  if (n < c.d2_interior.size()) {
    throw std::invalid_argument("periodic order " + std::to_string(order) + " needs at least " +
                                std::to_string(c.d2_interior.size()) + " nodes");
  }
  SbpOperator op;
  op.order_ = order;
  op.n_ = n;
  op.dx_ = dx;
  op.periodic_ = true;
  op.m_.assign(n, dx);
  op.d_ = BandedOperator::from_rows(periodic_rows(n, c.d_interior, 1.0 / dx), true);
  op.d2_ = BandedOperator::from_rows(periodic_rows(n, c.d2_interior, 1.0 / (dx * dx)), true);
  op.finish();
  return op;
}

void SbpOperator::finish() {
  dt_ = d_.transpose();
  std::vector<double> minv(n_);
  std::vector<double> ones(n_, 1.0);
  for (std::size_t i = 0; i < n_; ++i) minv[i] = 1.0 / m_[i];
  // D* = M^{-1} D^T M
  BandedOperator dstar = dt_.scaled(minv, m_);
  ddstar_ = d_.compose(dstar);
}

const BandedOperator& SbpOperator::d2() const {
  if (!d2_) throw std::logic_error("SBP operator has no second-derivative table");
  return *d2_;
}

namespace {

std::vector<double> run(const BandedOperator& a, std::span<const double> line) {
  if (line.size() != a.size()) {
    throw std::invalid_argument("line length " + std::to_string(line.size()) + " does not match operator size " +
                                std::to_string(a.size()));
  }
  std::vector<double> out(line.size());
  a.apply(line, out);
  return out;
}

}  // namespace

std::vector<double> apply_d(const SbpOperator& op, std::span<const double> line) { return run(op.d(), line); }

std::vector<double> apply_d_transpose(const SbpOperator& op, std::span<const double> line) {
  return run(op.d_transpose(), line);
}

std::vector<double> apply_d2(const SbpOperator& op, std::span<const double> line) { return run(op.d2(), line); }

std::vector<double> apply_ddstar(const SbpOperator& op, std::span<const double> line) {
  return run(op.ddstar(), line);
}

double sbp_identity_residual(const SbpOperator& op) {
  const std::size_t n = op.size();
  const auto m = op.m_weights();
  std::map<std::pair<std::size_t, std::size_t>, double> q;
  for (std::size_t i = 0; i < n; ++i) {
    const SparseRow& r = op.d().row(i);
    for (std::size_t k = 0; k < r.cols.size(); ++k) {
      q[{i, r.cols[k]}] += m[i] * r.vals[k];
      q[{r.cols[k], i}] += m[i] * r.vals[k];
    }
  }
  if (!op.periodic()) {
    q[{0, 0}] -= op.low_sign();
    q[{n - 1, n - 1}] -= op.high_sign();
  }
  double worst = 0.0;
  for (const auto& [_, v] : q) worst = std::max(worst, std::abs(v));
  return worst;
}

}  // namespace induction
