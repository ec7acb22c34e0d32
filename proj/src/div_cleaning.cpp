#include "induction/div_cleaning.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace induction {

std::string to_string(CleanMethod m) {
  switch (m) {
    case CleanMethod::None:
      return "none";
    case CleanMethod::WsDirichlet0:
      return "ws-d0";
    case CleanMethod::NsDirichlet0:
      return "ns-d0";
    case CleanMethod::WsLeastNorm:
      return "ws-ln";
  }
  return "?";
}

CleanMethod parse_clean_method(std::string_view s) {
  if (s == "none") return CleanMethod::None;
  if (s == "ws-d0") return CleanMethod::WsDirichlet0;
  if (s == "ns-d0") return CleanMethod::NsDirichlet0;
  if (s == "ws-ln") return CleanMethod::WsLeastNorm;
  throw std::invalid_argument("unknown cleaning method '" + std::string(s) + "' (expected none|ws-ln|ws-d0|ns-d0)");
}

void DivCleanConfig::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("cleaning tolerance must be positive");
  if (max_iter < 1) throw std::invalid_argument("cleaning needs max_iter >= 1");
}

CgResult cg_solve(const LinearMap& apply_a, const ScalarField& rhs, const InnerProduct& inner, double tol,
                  int max_iter, const StopNorm& stop_norm) {
  const std::size_t n = rhs.size();
  CgResult res;
  res.x = ScalarField(n);
  ScalarField r = rhs;
  ScalarField p = rhs;
  ScalarField ap(n);
  double rr = inner(r, r);
  auto measure = [&]() { return stop_norm ? stop_norm(res.x, r) : std::sqrt(std::max(rr, 0.0)); };
  double m = measure();
  if (!std::isfinite(m)) throw std::runtime_error("cg_solve: non-finite right-hand side");
  res.residual_history.push_back(m);
  if (m <= tol) {
    res.converged = true;
    return res;
  }
  for (int it = 0; it < max_iter; ++it) {
    apply_a(p, ap);
    const double pap = inner(p, ap);
    if (!std::isfinite(pap)) throw std::runtime_error("cg_solve: non-finite curvature");
    if (!(pap > 0.0)) {
      res.breakdown = true;
      return res;
    }
    const double alpha = rr / pap;
    axpy(alpha, p, res.x);
    axpy(-alpha, ap, r);
    const double rr_old = rr;
    rr = inner(r, r);
    res.iterations = it + 1;
    m = measure();
    if (!std::isfinite(m)) throw std::runtime_error("cg_solve: non-finite residual");
    res.residual_history.push_back(m);
    if (m <= tol) {
      res.converged = true;
      return res;
    }
    const double beta = rr / rr_old;
    double* pp = p.data();
    const double* pr = r.data();
    for (std::size_t q = 0; q < n; ++q) pp[q] = pr[q] + beta * pp[q];
  }
  return res;
}

VectorField div_star(const Grid& grid, const ScalarField& phi) {
  check_shape(grid, phi, "div_star");
  const auto m = grid.mass();
  ScalarField mphi(grid.size());
  for (std::size_t q = 0; q < grid.size(); ++q) mphi[q] = m[q] * phi[q];
  VectorField out(grid.size());
  for (int j = 0; j < 3; ++j) {
    apply_axis(grid, AxisOp::DTranspose, j, mphi.data(), out[j].data());
    double* o = out[j].data();
    for (std::size_t q = 0; q < grid.size(); ++q) o[q] /= m[q];
  }
  return out;
}

namespace {

std::vector<char> interior_mask(const Grid& grid) {
  std::vector<char> mask(grid.size());
  for (std::size_t q = 0; q < grid.size(); ++q) mask[q] = grid.on_boundary(q) ? 0 : 1;
  return mask;
}

void zero_boundary(const std::vector<char>& mask, ScalarField& f) {
  for (std::size_t q = 0; q < f.size(); ++q) {
    if (!mask[q]) f[q] = 0.0;
  }
}

}  // namespace

std::pair<VectorField, CleanStats> clean(const Grid& grid, const DivCleanConfig& cfg, const VectorField& b) {
  check_shape(grid, b, "clean");
  cfg.validate();
  CleanStats st;
  st.energy_before = energy(grid, b);
  ScalarField divb = divergence(grid, b);
  st.div_before = norm_m(grid, divb);
  VectorField out = b;

  auto finish = [&]() {
    st.energy_after = energy(grid, out);
    st.div_after = norm_m(grid, divergence(grid, out));
    for (int i = 0; i < 3; ++i) {
      ScalarField diff = out[i];
      axpy(-1.0, b[i], diff);
      st.mass_change[static_cast<std::size_t>(i)] = integral_m(grid, diff);
    }
    return std::make_pair(std::move(out), st);
  };

  if (cfg.method == CleanMethod::None) {
    st.skipped = true;
    st.div_after = st.div_before;
    st.energy_after = st.energy_before;
    return {std::move(out), st};
  }
  if (st.div_before <= cfg.tol) {
    st.skipped = true;
    st.converged = true;
    st.div_after = st.div_before;
    st.energy_after = st.energy_before;
    return {std::move(out), st};
  }

  const auto m = grid.mass();
  const InnerProduct inner = [m](const ScalarField& f, const ScalarField& g) {
    double s = 0.0;
    for (std::size_t q = 0; q < m.size(); ++q) s += m[q] * f[q] * g[q];
    return s;
  };

  if (cfg.method == CleanMethod::WsLeastNorm) {
    ScalarField rhs = divb;
    for (double& v : rhs) v = -v;
    const LinearMap a = [&grid](const ScalarField& phi, ScalarField& res) {
      for (int j = 0; j < 3; ++j) apply_axis(grid, AxisOp::DDStar, j, phi.data(), res.data(), 1.0, j > 0);
    };
    // Divergence of the partially corrected field, recomputed from the iterate.
    const StopNorm stop = [&](const ScalarField& phi, const ScalarField&) {
      VectorField trial = b;
      axpy(1.0, div_star(grid, phi), trial);
      return norm_m(grid, divergence(grid, trial));
    };
    CgResult cg = cg_solve(a, rhs, inner, cfg.tol, cfg.max_iter, stop);
    st.iterations = cg.iterations;
    st.converged = cg.converged;
    st.breakdown = cg.breakdown;
    st.residual_history = std::move(cg.residual_history);
    axpy(1.0, div_star(grid, cg.x), out);
    return finish();
  }

  for (int a = 0; a < 3; ++a) {
    if (grid.periodic(a)) throw std::invalid_argument("Dirichlet cleaning needs non-periodic axes");
  }
  const std::vector<char> mask = interior_mask(grid);
  const AxisOp second = cfg.method == CleanMethod::WsDirichlet0 ? AxisOp::D : AxisOp::D2;
  ScalarField tmp(grid.size());
  const LinearMap a = [&](const ScalarField& phi, ScalarField& res) {
    res.fill(0.0);
    for (int j = 0; j < 3; ++j) {
      if (second == AxisOp::D) {
        apply_axis(grid, AxisOp::D, j, phi.data(), tmp.data());
        apply_axis(grid, AxisOp::D, j, tmp.data(), res.data(), -1.0, true);
      } else {
        apply_axis(grid, AxisOp::D2, j, phi.data(), res.data(), -1.0, true);
      }
    }
    zero_boundary(mask, res);
  };
  ScalarField rhs = divb;
  zero_boundary(mask, rhs);
  CgResult cg = cg_solve(a, rhs, inner, cfg.tol, cfg.max_iter);
  st.iterations = cg.iterations;
  st.converged = cg.converged;
  st.breakdown = cg.breakdown;
  st.residual_history = std::move(cg.residual_history);
  axpy(1.0, gradient(grid, cg.x), out);
  return finish();
}

}  // namespace induction
