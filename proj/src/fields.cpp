#include "induction/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace induction {

GridSpec GridSpec::cube(int order, std::size_t n, double lo, double hi, bool periodic) {
  GridSpec s;
  s.n = {n, n, n};
  s.lo = {lo, lo, lo};
  s.hi = {hi, hi, hi};
  s.periodic = {periodic, periodic, periodic};
  s.order = order;
  return s;
}

Grid::Grid(const GridSpec& spec) : spec_(spec) {
  size_ = 1;
  for (int a = 0; a < 3; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    const std::size_t na = spec.n[ua];
    if (na == 0) throw std::invalid_argument("grid axis " + std::to_string(a) + " has no nodes");
    if (!(spec.hi[ua] > spec.lo[ua])) throw std::invalid_argument("grid axis " + std::to_string(a) + " has hi <= lo");
    stride_[ua] = size_;
    size_ *= na;
    const double len = spec.hi[ua] - spec.lo[ua];
    if (spec.periodic[ua]) {
      dx_[ua] = len / static_cast<double>(na);
      ops_.push_back(SbpOperator::build_periodic(spec.order, na, dx_[ua]));
    } else {
      if (na < 2) throw std::invalid_argument("non-periodic axis needs at least two nodes");
      dx_[ua] = len / static_cast<double>(na - 1);
      ops_.push_back(SbpOperator::build(spec.order, na, dx_[ua]));
    }
  }
  mass_.resize(size_);
  const auto mx = ops_[0].m_weights();
  const auto my = ops_[1].m_weights();
  const auto mz = ops_[2].m_weights();
  std::size_t idx = 0;
  for (std::size_t k = 0; k < spec.n[2]; ++k) {
    for (std::size_t j = 0; j < spec.n[1]; ++j) {
      const double wyz = my[j] * mz[k];
      for (std::size_t i = 0; i < spec.n[0]; ++i) mass_[idx++] = mx[i] * wyz;
    }
  }
}

double Grid::min_dx() const { return std::min({dx_[0], dx_[1], dx_[2]}); }

double Grid::coord(int axis, std::size_t i) const {
  const auto ua = static_cast<std::size_t>(axis);
  if (!spec_.periodic[ua] && i + 1 == spec_.n[ua]) return spec_.hi[ua];
  return spec_.lo[ua] + static_cast<double>(i) * dx_[ua];
}

std::array<std::size_t, 3> Grid::unravel(std::size_t idx) const {
  const std::size_t i = idx % spec_.n[0];
  const std::size_t rest = idx / spec_.n[0];
  return {i, rest % spec_.n[1], rest / spec_.n[1]};
}

bool Grid::on_boundary(std::size_t idx) const {
  const auto ijk = unravel(idx);
  for (std::size_t a = 0; a < 3; ++a) {
    if (spec_.periodic[a]) continue;
    if (ijk[a] == 0 || ijk[a] + 1 == spec_.n[a]) return true;
  }
  return false;
}

bool Grid::same_shape(const Grid& other) const { return spec_.n == other.spec_.n; }

void ScalarField::fill(double value) { std::fill(v_.begin(), v_.end(), value); }

bool ScalarField::all_finite() const {
  return std::all_of(v_.begin(), v_.end(), [](double x) { return std::isfinite(x); });
}

void VectorField::fill(double value) {
  for (auto& f : c) f.fill(value);
}

bool VectorField::all_finite() const {
  return c[0].all_finite() && c[1].all_finite() && c[2].all_finite();
}

void axpy(double a, const ScalarField& x, ScalarField& y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
  const double* px = x.data();
  double* py = y.data();
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) py[i] += a * px[i];
}

void axpy(double a, const VectorField& x, VectorField& y) {
  for (int i = 0; i < 3; ++i) axpy(a, x[i], y[i]);
}

void scale(double a, VectorField& x) {
  for (auto& f : x.c) {
    for (double& v : f) v *= a;
  }
}

namespace {

const BandedOperator& select(const SbpOperator& op, AxisOp which) {
  switch (which) {
    case AxisOp::D:
      return op.d();
    case AxisOp::DTranspose:
      return op.d_transpose();
    case AxisOp::D2:
      return op.d2();
    case AxisOp::DDStar:
      return op.ddstar();
  }
  throw std::logic_error("unknown axis operator");
}

inline void store(double* out, double v, double alpha, bool accumulate) {
  if (accumulate) {
    *out += alpha * v;
  } else {
    *out = alpha * v;
  }
}

// Contiguous lines (axis 0), stencil width fixed at compile time.
template <std::size_t W>
void lines_fixed(const BandedOperator& a, std::size_t lines, const double* in, double* out, double alpha,
                 bool accumulate) {
  const std::size_t n = a.size();
  const std::size_t h = a.half_width();
  const std::size_t ib = a.interior_begin();
  const std::size_t ie = a.interior_end();
  double c[W];
  for (std::size_t k = 0; k < W; ++k) c[k] = alpha * a.stencil()[k];
  for (std::size_t l = 0; l < lines; ++l) {
    const double* src = in + l * n;
    double* dst = out + l * n;
    for (std::size_t i = 0; i < ib; ++i) {
      const SparseRow& r = a.row(i);
      double s = 0.0;
      for (std::size_t q = 0; q < r.cols.size(); ++q) s += r.vals[q] * src[r.cols[q]];
      store(dst + i, s, alpha, accumulate);
    }
    if (accumulate) {
      for (std::size_t i = ib; i < ie; ++i) {
        const double* p = src + i - h;
        double s = 0.0;
        for (std::size_t k = 0; k < W; ++k) s += c[k] * p[k];
        dst[i] += s;
      }
    } else {
      for (std::size_t i = ib; i < ie; ++i) {
        const double* p = src + i - h;
        double s = 0.0;
        for (std::size_t k = 0; k < W; ++k) s += c[k] * p[k];
        dst[i] = s;
      }
    }
    for (std::size_t i = std::max(ie, ib); i < n; ++i) {
      const SparseRow& r = a.row(i);
      double s = 0.0;
      for (std::size_t q = 0; q < r.cols.size(); ++q) s += r.vals[q] * src[r.cols[q]];
      store(dst + i, s, alpha, accumulate);
    }
  }
}

void lines_generic(const BandedOperator& a, std::size_t lines, const double* in, double* out, double alpha,
                   bool accumulate) {
  const std::size_t n = a.size();
  for (std::size_t l = 0; l < lines; ++l) {
    const double* src = in + l * n;
    double* dst = out + l * n;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      if (i >= a.interior_begin() && i < a.interior_end()) {
        const double* p = src + i - a.half_width();
        const auto st = a.stencil();
        for (std::size_t k = 0; k < st.size(); ++k) s += st[k] * p[k];
      } else {
        const SparseRow& r = a.row(i);
        for (std::size_t q = 0; q < r.cols.size(); ++q) s += r.vals[q] * src[r.cols[q]];
      }
      store(dst + i, s, alpha, accumulate);
    }
  }
}

// One output plane of `len` contiguous values from a weighted sum of input planes.
template <std::size_t W>
void plane_combo(const double* const* src, const double* c, std::size_t len, double* dst, bool accumulate) {
  if (accumulate) {
    for (std::size_t x = 0; x < len; ++x) {
      double s = 0.0;
      for (std::size_t k = 0; k < W; ++k) s += c[k] * src[k][x];
      dst[x] += s;
    }
  } else {
    for (std::size_t x = 0; x < len; ++x) {
      double s = 0.0;
      for (std::size_t k = 0; k < W; ++k) s += c[k] * src[k][x];
      dst[x] = s;
    }
  }
}

void plane_combo_dyn(const double* const* src, const double* c, std::size_t w, std::size_t len, double* dst,
                     bool accumulate) {
  switch (w) {
    case 1:
      return plane_combo<1>(src, c, len, dst, accumulate);
    case 2:
      return plane_combo<2>(src, c, len, dst, accumulate);
    case 3:
      return plane_combo<3>(src, c, len, dst, accumulate);
    case 4:
      return plane_combo<4>(src, c, len, dst, accumulate);
    case 5:
      return plane_combo<5>(src, c, len, dst, accumulate);
    case 6:
      return plane_combo<6>(src, c, len, dst, accumulate);
    case 7:
      return plane_combo<7>(src, c, len, dst, accumulate);
    default:
      break;
  }
  if (!accumulate) std::fill(dst, dst + len, 0.0);
  for (std::size_t k = 0; k < w; ++k) {
    const double ck = c[k];
    const double* s = src[k];
    for (std::size_t x = 0; x < len; ++x) dst[x] += ck * s[x];
  }
}

// Strided axis: planes of `len` contiguous values separated by `len` within blocks of n planes.
void planes(const BandedOperator& a, std::size_t blocks, std::size_t len, const double* in, double* out,
            double alpha, bool accumulate) {
  const std::size_t n = a.size();
  std::vector<const double*> src;
  std::vector<double> c;
  for (std::size_t b = 0; b < blocks; ++b) {
    const double* bin = in + b * n * len;
    double* bout = out + b * n * len;
    for (std::size_t i = 0; i < n; ++i) {
      src.clear();
      c.clear();
      if (i >= a.interior_begin() && i < a.interior_end()) {
        const auto st = a.stencil();
        const std::size_t first = i - a.half_width();
        for (std::size_t k = 0; k < st.size(); ++k) {
          if (st[k] == 0.0) continue;
          src.push_back(bin + (first + k) * len);
          c.push_back(alpha * st[k]);
        }
      } else {
        const SparseRow& r = a.row(i);
        for (std::size_t q = 0; q < r.cols.size(); ++q) {
          src.push_back(bin + r.cols[q] * len);
          c.push_back(alpha * r.vals[q]);
        }
      }
      plane_combo_dyn(src.data(), c.data(), c.size(), len, bout + i * len, accumulate);
    }
  }
}

}  // namespace

void apply_axis(const Grid& grid, AxisOp which, int axis, const double* in, double* out, double alpha,
                bool accumulate) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("axis must be 0, 1 or 2");
  const BandedOperator& a = select(grid.op(axis), which);
  const std::size_t n = grid.n(axis);
  const std::size_t len = grid.stride(axis);
  const std::size_t blocks = grid.size() / (n * len);
  if (axis == 0) {
    switch (a.stencil().size()) {
      case 3:
        return lines_fixed<3>(a, blocks, in, out, alpha, accumulate);
      case 5:
        return lines_fixed<5>(a, blocks, in, out, alpha, accumulate);
      case 7:
        return lines_fixed<7>(a, blocks, in, out, alpha, accumulate);
      case 9:
        return lines_fixed<9>(a, blocks, in, out, alpha, accumulate);
      case 13:
        return lines_fixed<13>(a, blocks, in, out, alpha, accumulate);
      default:
        return lines_generic(a, blocks, in, out, alpha, accumulate);
    }
  }
  planes(a, blocks, len, in, out, alpha, accumulate);
}

void check_shape(const Grid& grid, const ScalarField& f, const char* what) {
  if (f.size() != grid.size()) {
    throw std::invalid_argument(std::string(what) + ": field has " + std::to_string(f.size()) +
                                " values, grid has " + std::to_string(grid.size()) + " nodes");
  }
}

void check_shape(const Grid& grid, const VectorField& f, const char* what) {
  for (int i = 0; i < 3; ++i) check_shape(grid, f[i], what);
}

ScalarField apply_axis_d(const Grid& grid, int axis, const ScalarField& f) {
  check_shape(grid, f, "apply_axis_d");
  ScalarField out(grid.size());
  apply_axis(grid, AxisOp::D, axis, f.data(), out.data());
  return out;
}

ScalarField divergence(const Grid& grid, const VectorField& b) {
  ScalarField out(grid.size());
  divergence(grid, b, out);
  return out;
}

void divergence(const Grid& grid, const VectorField& b, ScalarField& out) {
  check_shape(grid, b, "divergence");
  if (out.size() != grid.size()) out = ScalarField(grid.size());
  for (int j = 0; j < 3; ++j) apply_axis(grid, AxisOp::D, j, b[j].data(), out.data(), 1.0, j > 0);
}

VectorField curl(const Grid& grid, const VectorField& b) {
  VectorField out(grid.size());
  curl(grid, b, out);
  return out;
}

void curl(const Grid& grid, const VectorField& b, VectorField& out) {
  check_shape(grid, b, "curl");
  if (out.size() != grid.size()) out = VectorField(grid.size());
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    apply_axis(grid, AxisOp::D, j, b[k].data(), out[i].data(), 1.0, false);
    apply_axis(grid, AxisOp::D, k, b[j].data(), out[i].data(), -1.0, true);
  }
}

VectorField gradient(const Grid& grid, const ScalarField& phi) {
  check_shape(grid, phi, "gradient");
  VectorField out(grid.size());
  for (int j = 0; j < 3; ++j) apply_axis(grid, AxisOp::D, j, phi.data(), out[j].data());
  return out;
}

double inner_m(const Grid& grid, const ScalarField& f, const ScalarField& g) {
  check_shape(grid, f, "inner_m");
  check_shape(grid, g, "inner_m");
  const auto m = grid.mass();
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) s += m[i] * f[i] * g[i];
  return s;
}

double norm_m(const Grid& grid, const ScalarField& f) { return std::sqrt(inner_m(grid, f, f)); }

double inner_m(const Grid& grid, const VectorField& f, const VectorField& g) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) s += inner_m(grid, f[i], g[i]);
  return s;
}

double norm_m(const Grid& grid, const VectorField& f) { return std::sqrt(inner_m(grid, f, f)); }

double energy(const Grid& grid, const VectorField& b) { return inner_m(grid, b, b); }

double integral_m(const Grid& grid, const ScalarField& f) {
  check_shape(grid, f, "integral_m");
  const auto m = grid.mass();
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) s += m[i] * f[i];
  return s;
}

ScalarField boundary_lift(const Grid& grid, int axis, const ScalarField& data, LiftSign sign) {
  check_shape(grid, data, "boundary_lift");
  if (axis < 0 || axis > 2) throw std::invalid_argument("axis must be 0, 1 or 2");
  ScalarField out(grid.size());
  if (grid.periodic(axis)) return out;
  const SbpOperator& op = grid.op(axis);
  const double inv_m = 1.0 / op.boundary_weight();
  const double lo = (sign == LiftSign::Signed ? op.low_sign() : 1.0) * inv_m;
  const double hi = op.high_sign() * inv_m;
  const std::size_t n = grid.n(axis);
  const std::size_t len = grid.stride(axis);
  const std::size_t blocks = grid.size() / (n * len);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t base_lo = b * n * len;
    const std::size_t base_hi = base_lo + (n - 1) * len;
    for (std::size_t x = 0; x < len; ++x) {
      out[base_lo + x] = lo * data[base_lo + x];
      out[base_hi + x] = hi * data[base_hi + x];
    }
  }
  return out;
}

namespace {

void put_u64(std::ostream& os, std::uint64_t v) { os.write(reinterpret_cast<const char*>(&v), sizeof v); }

std::uint64_t get_u64(std::istream& is) {
  std::uint64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw std::runtime_error("binary dump: truncated header");
  return v;
}

}  // namespace

void write_binary(std::ostream& os, const Grid& grid, const VectorField& f) {
  check_shape(grid, f, "write_binary");
  if (!f.all_finite()) throw std::runtime_error("write_binary: field contains non-finite values");
  for (int a = 0; a < 3; ++a) put_u64(os, grid.n(a));
  put_u64(os, 3);
  for (int i = 0; i < 3; ++i) {
    os.write(reinterpret_cast<const char*>(f[i].data()), static_cast<std::streamsize>(f[i].size() * sizeof(double)));
  }
  if (!os) throw std::runtime_error("write_binary: stream error");
}

VectorField read_binary(std::istream& is, std::array<std::size_t, 3>& n_out) {
  std::size_t total = 1;
  for (auto& n : n_out) {
    n = static_cast<std::size_t>(get_u64(is));
    total *= n;
  }
  const std::uint64_t comps = get_u64(is);
  if (comps != 3) throw std::runtime_error("binary dump: expected 3 components");
  VectorField f(total);
  for (int i = 0; i < 3; ++i) {
    is.read(reinterpret_cast<char*>(f[i].data()), static_cast<std::streamsize>(total * sizeof(double)));
    if (!is) throw std::runtime_error("binary dump: truncated data");
  }
  if (!f.all_finite()) throw std::runtime_error("binary dump: non-finite values");
  return f;
}

namespace {

void csv_rows(std::ostream& os, const Grid& grid, const ScalarField* const* comps, int ncomp) {
  os << "x,y,z";
  for (int c = 0; c < ncomp; ++c) os << ",f" << c;
  os << '\n';
  const auto old_prec = os.precision(std::numeric_limits<double>::max_digits10);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const auto ijk = grid.unravel(idx);
    os << grid.coord(0, ijk[0]) << ',' << grid.coord(1, ijk[1]) << ',' << grid.coord(2, ijk[2]);
    for (int c = 0; c < ncomp; ++c) os << ',' << (*comps[c])[idx];
    os << '\n';
  }
  os.precision(old_prec);
}

}  // namespace

void write_csv(std::ostream& os, const Grid& grid, const VectorField& f) {
  check_shape(grid, f, "write_csv");
  const ScalarField* comps[3] = {&f[0], &f[1], &f[2]};
  csv_rows(os, grid, comps, 3);
}

void write_csv(std::ostream& os, const Grid& grid, const ScalarField& f) {
  check_shape(grid, f, "write_csv");
  const ScalarField* comps[1] = {&f};
  csv_rows(os, grid, comps, 1);
}

}  // namespace induction
