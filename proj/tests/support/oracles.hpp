#pragma once

// Dense reference implementations used only by the tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <vector>

#include "induction/analytic.hpp"
#include "induction/banded.hpp"
#include "induction/fields.hpp"
#include "induction/induction_rhs.hpp"

namespace oracle {

using Mat = std::vector<std::vector<double>>;
using Vec = std::vector<double>;

inline Mat zeros(std::size_t r, std::size_t c) { return Mat(r, Vec(c, 0.0)); }

inline Mat identity(std::size_t n) {
  Mat a = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) a[i][i] = 1.0;
  return a;
}

inline Mat dense(const induction::BandedOperator& op) {
  const std::size_t n = op.size();
  Mat a = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = op.entry(i, j);
  }
  return a;
}

inline Mat transpose(const Mat& a) {
  Mat t = zeros(a.empty() ? 0 : a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  }
  return t;
}

inline Mat matmul(const Mat& a, const Mat& b) {
  const std::size_t r = a.size();
  const std::size_t k = b.size();
  const std::size_t c = b.empty() ? 0 : b[0].size();
  Mat out = zeros(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t q = 0; q < k; ++q) {
      const double v = a[i][q];
      if (v == 0.0) continue;
      for (std::size_t j = 0; j < c; ++j) out[i][j] += v * b[q][j];
    }
  }
  return out;
}

inline Vec matvec(const Mat& a, const Vec& x) {
  Vec y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += a[i][j] * x[j];
    y[i] = s;
  }
  return y;
}

inline Mat kron(const Mat& a, const Mat& b) {
  const std::size_t ra = a.size(), ca = a[0].size(), rb = b.size(), cb = b[0].size();
  Mat out = zeros(ra * rb, ca * cb);
  for (std::size_t i = 0; i < ra; ++i) {
    for (std::size_t j = 0; j < ca; ++j) {
      if (a[i][j] == 0.0) continue;
      for (std::size_t p = 0; p < rb; ++p) {
        for (std::size_t q = 0; q < cb; ++q) out[i * rb + p][j * cb + q] = a[i][j] * b[p][q];
      }
    }
  }
  return out;
}

/// Full matrix of the 1D operator `which` along `axis`, for x-fastest layout.
inline Mat axis_matrix(const induction::Grid& g, int axis, const Mat& one_d) {
  const Mat ix = identity(g.n(0));
  const Mat iy = identity(g.n(1));
  const Mat iz = identity(g.n(2));
  if (axis == 0) return kron(iz, kron(iy, one_d));
  if (axis == 1) return kron(iz, kron(one_d, ix));
  return kron(one_d, kron(iy, ix));
}

inline Mat axis_d(const induction::Grid& g, int axis) { return axis_matrix(g, axis, dense(g.op(axis).d())); }

/// Gaussian elimination with partial pivoting.
inline Vec solve(Mat a, Vec b) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    }
    if (a[p][c] == 0.0) throw std::runtime_error("singular matrix");
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      if (f == 0.0) continue;
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  Vec x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

/// Moore-Penrose pseudo-inverse of a symmetric matrix via cyclic Jacobi rotations.
inline Mat pinv_symmetric(Mat a, double rel_cut = 1e-10) {
  const std::size_t n = a.size();
  Mat v = identity(n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    }
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  double lmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) lmax = std::max(lmax, std::abs(a[i][i]));
  Mat out = zeros(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double l = a[k][k];
    if (std::abs(l) <= rel_cut * lmax) continue;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) out[i][j] += v[i][k] * v[j][k] / l;
    }
  }
  return out;
}

inline induction::ScalarField random_scalar(std::size_t n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  induction::ScalarField f(n);
  for (auto& v : f) v = dist(rng);
  return f;
}

inline induction::VectorField random_vector(std::size_t n, std::mt19937_64& rng, double lo = -1.0,
                                            double hi = 1.0) {
  induction::VectorField f(n);
  for (int i = 0; i < 3; ++i) f[i] = random_scalar(n, rng, lo, hi);
  return f;
}

inline Vec to_vec(const induction::ScalarField& f) { return f.values(); }

inline double max_abs_diff(const induction::ScalarField& a, const induction::ScalarField& b) {
  double m = 0.0;
  for (std::size_t q = 0; q < a.size(); ++q) m = std::max(m, std::abs(a[q] - b[q]));
  return m;
}

inline double max_abs_diff(const induction::VectorField& a, const induction::VectorField& b) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i) m = std::max(m, max_abs_diff(a[i], b[i]));
  return m;
}

inline double max_abs(const induction::VectorField& a) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (double v : a[i]) m = std::max(m, std::abs(v));
  }
  return m;
}

// Extended numerical fluxes of the three term families; m is the evaluation
// node and k the partner node on the same grid line.
inline double flux_uiBj(induction::FluxForm f, double uim, double uik, double bjm, double bjk) {
  switch (f) {
    case induction::FluxForm::Central:
      return 0.5 * (uim * bjm + uik * bjk);
    case induction::FluxForm::Split:
      return 0.25 * (uim + uik) * (bjm + bjk);
    case induction::FluxForm::Product:
      return 0.5 * (uim * bjk + uik * bjm);
  }
  return 0.0;
}

inline double flux_source(induction::SourceForm f, double uim, double uik, double bjm, double bjk) {
  switch (f) {
    case induction::SourceForm::Zero:
      return 0.0;
    case induction::SourceForm::Central:
      return -0.5 * uim * (bjk - bjm);
    case induction::SourceForm::Split:
      return -0.25 * (uim + uik) * (bjk - bjm);
  }
  return 0.0;
}

inline double flux_ujBi(induction::FluxForm f, double ujm, double ujk, double bim, double bik) {
  return -flux_uiBj(f, ujm, ujk, bim, bik);
}

/// VOL_i^(m) = sum_j sum_k 2 (D_j)_{mk} f^{ext,j}_{i,mk} with dense 3D D_j.
inline induction::VectorField extended_flux_volume(const induction::Grid& g, const induction::FormSelection& forms,
                                                   const induction::VectorField& u,
                                                   const induction::VectorField& b) {
  const std::size_t n = g.size();
  induction::VectorField out(n);
  for (int j = 0; j < 3; ++j) {
    const Mat dj = axis_d(g, j);
    for (int i = 0; i < 3; ++i) {
      for (std::size_t m = 0; m < n; ++m) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double d = dj[m][k];
          if (d == 0.0) continue;
          const double f = flux_uiBj(forms.uiBj, u[i][m], u[i][k], b[j][m], b[j][k]) +
                           flux_source(forms.source, u[i][m], u[i][k], b[j][m], b[j][k]) +
                           flux_ujBi(forms.ujBi, u[j][m], u[j][k], b[i][m], b[i][k]);
          s += 2.0 * d * f;
        }
        out[i][m] += s;
      }
    }
  }
  return out;
}

/// sum over faces of axis j of nu * (face weight) * f(node), where the face weight
/// is the product of the mass weights of the two other axes.
template <class Fn>
double face_quadrature(const induction::Grid& g, int axis, Fn&& f) {
  const double mb = g.op(axis).boundary_weight();
  const auto m = g.mass();
  double s = 0.0;
  induction::for_each_face_node(g, axis, [&](std::size_t q, double nu) { s += nu * (m[q] / mb) * f(q, nu); });
  return s;
}

/// 2 sum_i B_i^T M r_i
inline double energy_rate(const induction::Grid& g, const induction::VectorField& b, const induction::VectorField& r) {
  return 2.0 * induction::inner_m(g, b, r);
}

inline std::shared_ptr<const induction::FieldProvider> constant_provider(const induction::Vec3& v) {
  return std::make_shared<induction::FunctionProvider>([v](double, const induction::Vec3&) { return v; }, true);
}

/// Provider that returns stored grid values; only usable on the grid it was built for.
class TableProvider final : public induction::FieldProvider {
 public:
  TableProvider(const induction::Grid& g, induction::VectorField values) : g_(g), v_(std::move(values)) {}
  induction::Vec3 eval(double, const induction::Vec3&) const override {
    throw std::logic_error("TableProvider supports grid sampling only");
  }
  bool stationary() const override { return true; }
  void sample(const induction::Grid& grid, double, induction::VectorField& out) const override {
    if (grid.size() != g_.size()) throw std::logic_error("TableProvider grid mismatch");
    out = v_;
  }
  void sample_faces(const induction::Grid& grid, double t, induction::VectorField& out) const override {
    sample(grid, t, out);
  }

 private:
  const induction::Grid& g_;
  induction::VectorField v_;
};

}  // namespace oracle
