#include <doctest.h>

#include <cmath>
#include <random>

#include "induction/div_cleaning.hpp"
#include "oracles.hpp"

using namespace induction;

namespace {

const InnerProduct euclid = [](const ScalarField& a, const ScalarField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
};

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double v : f) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST_CASE("conjugate gradients") {
  SUBCASE("identity") {
    const ScalarField rhs(std::vector<double>{1.0, -2.0, 3.0});
    const LinearMap id = [](const ScalarField& x, ScalarField& y) { y = x; };
    const CgResult r = cg_solve(id, rhs, euclid, 1e-14, 10);
    CHECK(r.iterations == 1);
    CHECK(r.converged);
    CHECK(oracle::max_abs_diff(r.x, rhs) <= 1e-15);
  }
  SUBCASE("diagonal system") {
    const std::size_t k = 12;
    std::mt19937_64 rng(3);
    const ScalarField rhs = oracle::random_scalar(k, rng);
    const LinearMap diag = [](const ScalarField& x, ScalarField& y) {
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = static_cast<double>(i + 1) * x[i];
    };
    const CgResult r = cg_solve(diag, rhs, euclid, 1e-13, static_cast<int>(k));
    CHECK(r.iterations <= static_cast<int>(k));
    for (std::size_t i = 0; i < k; ++i) CHECK(std::abs(r.x[i] - rhs[i] / static_cast<double>(i + 1)) <= 1e-10);
    CHECK(r.residual_history.size() == static_cast<std::size_t>(r.iterations) + 1);
  }
  SUBCASE("zero right-hand side") {
    const LinearMap id = [](const ScalarField& x, ScalarField& y) { y = x; };
    const CgResult r = cg_solve(id, ScalarField(5), euclid, 1e-10, 10);
    CHECK(r.iterations == 0);
    CHECK(max_abs(r.x) == 0.0);
  }
  SUBCASE("indefinite operator reports breakdown") {
    const LinearMap neg = [](const ScalarField& x, ScalarField& y) {
      for (std::size_t i = 0; i < x.size(); ++i) y[i] = -x[i];
    };
    const CgResult r = cg_solve(neg, ScalarField(3, 1.0), euclid, 1e-10, 10);
    CHECK(r.breakdown);
    CHECK_FALSE(r.converged);
  }
  SUBCASE("non-finite data") {
    const LinearMap id = [](const ScalarField& x, ScalarField& y) { y = x; };
    CHECK_THROWS(cg_solve(id, ScalarField(3, std::nan("")), euclid, 1e-10, 10));
  }
}

TEST_CASE("method names and configuration") {
  for (CleanMethod m : {CleanMethod::None, CleanMethod::WsDirichlet0, CleanMethod::NsDirichlet0,
                        CleanMethod::WsLeastNorm}) {
    CHECK(parse_clean_method(to_string(m)) == m);
  }
  CHECK_THROWS(parse_clean_method("glm"));
  DivCleanConfig c;
  CHECK(c.tol == 1e-3);
  CHECK(c.max_iter == 50);
  c.tol = 0.0;
  CHECK_THROWS(c.validate());
  c.tol = 1e-3;
  c.max_iter = 0;
  CHECK_THROWS(c.validate());
}

TEST_CASE("divergence-free input is left alone") {
  const Grid g(GridSpec::cube(4, 10, 0.0, 1.0));
  VectorField b(g.size());
  b[0].fill(1.0);
  b[2].fill(-0.5);
  for (CleanMethod m : {CleanMethod::WsDirichlet0, CleanMethod::NsDirichlet0, CleanMethod::WsLeastNorm}) {
    const auto [out, st] = clean(g, {m, 1e-3, 50}, b);
    CHECK(st.iterations == 0);
    CHECK(st.skipped);
    CHECK(oracle::max_abs_diff(out, b) == 0.0);
  }
}

TEST_CASE("cleaning properties on random fields") {
  std::mt19937_64 rng(77);
  struct Case {
    CleanMethod method;
    int order;
  };
  const Case cases[] = {{CleanMethod::WsDirichlet0, 2}, {CleanMethod::WsDirichlet0, 4},
                        {CleanMethod::WsDirichlet0, 6}, {CleanMethod::NsDirichlet0, 2},
                        {CleanMethod::NsDirichlet0, 4}, {CleanMethod::WsLeastNorm, 2},
                        {CleanMethod::WsLeastNorm, 4},  {CleanMethod::WsLeastNorm, 6}};
  for (const Case& c : cases) {
    for (std::size_t n : {9u, 14u}) {
      if (n < SbpOperator::min_nodes(c.order)) continue;
      const Grid g(GridSpec::cube(c.order, n, 0.0, 1.0));
      const VectorField b = oracle::random_vector(g.size(), rng);
      const DivCleanConfig cfg{c.method, 1e-3, 3000};
      const auto [out, st] = clean(g, cfg, b);
      CAPTURE(to_string(c.method));
      CAPTURE(c.order);
      CAPTURE(n);
      CHECK_FALSE(st.breakdown);
      for (double dm : st.mass_change) CHECK(std::abs(dm) <= 1e-12);
      CHECK(st.energy_after <= st.energy_before * (1.0 + 1e-12));
      CHECK(st.div_after < st.div_before);
      if (c.method == CleanMethod::WsLeastNorm) {
        CHECK(st.converged);
        CHECK(st.div_after <= cfg.tol);
      }
    }
  }
}

TEST_CASE("wide-stencil Dirichlet matches a direct interior solve") {
  std::mt19937_64 rng(5);
  const Grid g(GridSpec::cube(2, 6, 0.0, 1.0));
  const std::size_t n = g.size();
  const VectorField b = oracle::random_vector(n, rng);

  oracle::Mat lap = oracle::zeros(n, n);
  for (int j = 0; j < 3; ++j) {
    const oracle::Mat d = oracle::axis_d(g, j);
    const oracle::Mat dd = oracle::matmul(d, d);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) lap[r][c] -= dd[r][c];
    }
  }
  std::vector<std::size_t> inner;
  for (std::size_t q = 0; q < n; ++q) {
    if (!g.on_boundary(q)) inner.push_back(q);
  }
  const ScalarField divb = divergence(g, b);
  oracle::Mat a = oracle::zeros(inner.size(), inner.size());
  oracle::Vec rhs(inner.size());
  for (std::size_t r = 0; r < inner.size(); ++r) {
    rhs[r] = divb[inner[r]];
    for (std::size_t c = 0; c < inner.size(); ++c) a[r][c] = lap[inner[r]][inner[c]];
  }
  const oracle::Vec phi_i = oracle::solve(a, rhs);
  ScalarField phi(n);
  for (std::size_t r = 0; r < inner.size(); ++r) phi[inner[r]] = phi_i[r];
  VectorField want = b;
  axpy(1.0, gradient(g, phi), want);

  const ScalarField div_want = divergence(g, want);
  for (std::size_t q : inner) CHECK(std::abs(div_want[q]) <= 1e-11);

  const auto [got, st] = clean(g, {CleanMethod::WsDirichlet0, 1e-13, 1000}, b);
  CHECK(st.converged);
  CHECK(oracle::max_abs_diff(got, want) <= 1e-9);
  const ScalarField div_got = divergence(g, got);
  for (std::size_t q : inner) CHECK(std::abs(div_got[q]) <= 1e-9);
  // Boundary nodes are not constrained.
  double boundary_div = 0.0;
  for (std::size_t q = 0; q < n; ++q) {
    if (g.on_boundary(q)) boundary_div = std::max(boundary_div, std::abs(div_got[q]));
  }
  CHECK(boundary_div > 1e-3);
}

TEST_CASE("least-norm correction is minimal") {
  std::mt19937_64 rng(6);
  for (int order : {2}) {
    const Grid g(GridSpec::cube(order, 5, 0.0, 1.0));
    const std::size_t n = g.size();
    const VectorField b = oracle::random_vector(n, rng);
    const auto m = g.mass();

    // beta = W^{-1} G^T (G W^{-1} G^T)^+ d with G = [D_0 D_1 D_2], W = diag(M, M, M), d = -div B.
    const oracle::Mat d[3] = {oracle::axis_d(g, 0), oracle::axis_d(g, 1), oracle::axis_d(g, 2)};
    oracle::Mat s = oracle::zeros(n, n);
    for (int j = 0; j < 3; ++j) {
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
          double v = 0.0;
          for (std::size_t k = 0; k < n; ++k) v += d[j][r][k] * d[j][c][k] / m[k];
          s[r][c] += v;
        }
      }
    }
    const oracle::Mat sp = oracle::pinv_symmetric(s, 1e-11);
    const ScalarField divb = divergence(g, b);
    oracle::Vec rhs(n);
    for (std::size_t q = 0; q < n; ++q) rhs[q] = -divb[q];
    const oracle::Vec lambda = oracle::matvec(sp, rhs);
    VectorField beta(n);
    for (int j = 0; j < 3; ++j) {
      for (std::size_t q = 0; q < n; ++q) {
        double v = 0.0;
        for (std::size_t k = 0; k < n; ++k) v += d[j][k][q] * lambda[k];
        beta[j][q] = v / m[q];
      }
    }

    const auto [got, st] = clean(g, {CleanMethod::WsLeastNorm, 1e-11, 2000}, b);
    CHECK(st.converged);
    VectorField got_beta = got;
    axpy(-1.0, b, got_beta);
    CHECK(oracle::max_abs_diff(got_beta, beta) <= 1e-9);

    // Any other correction with the same divergence is at least as large.
    for (int trial = 0; trial < 5; ++trial) {
      VectorField other = got_beta;
      axpy(1.0, curl(g, oracle::random_vector(n, rng)), other);
      CHECK(norm_m(g, other) >= norm_m(g, got_beta) - 1e-12);
    }
  }
}

TEST_CASE("div* is the M-adjoint of the divergence") {
  std::mt19937_64 rng(8);
  const Grid g(GridSpec::cube(4, 10, 0.0, 2.0));
  const ScalarField phi = oracle::random_scalar(g.size(), rng);
  const VectorField b = oracle::random_vector(g.size(), rng);
  CHECK(inner_m(g, divergence(g, b), phi) == doctest::Approx(inner_m(g, b, div_star(g, phi))).epsilon(1e-12));
}

TEST_CASE("Dirichlet cleaning needs bounded axes") {
  const Grid g(GridSpec::cube(2, 6, 0.0, 1.0, true));
  std::mt19937_64 rng(1);
  const VectorField b = oracle::random_vector(g.size(), rng);
  CHECK_THROWS(clean(g, {CleanMethod::WsDirichlet0, 1e-3, 50}, b));
  CHECK_NOTHROW(clean(g, {CleanMethod::WsLeastNorm, 1e-3, 50}, b));
}
