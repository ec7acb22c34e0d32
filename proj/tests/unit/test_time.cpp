#include <doctest.h>

#include <cmath>
#include <limits>

#include "induction/time_integration.hpp"
#include "oracles.hpp"

using namespace induction;

namespace {

using Rhs = std::function<void(double, const VectorField&, VectorField&)>;

// Integrates a one-node state (three components) to time T with n equal steps.
VectorField integrate(const Rhs& f, VectorField y, double T, int n) {
  const double dt = T / n;
  VectorField k(y.size()), w(y.size());
  for (int s = 0; s < n; ++s) {
    k.fill(0.0);
    lsrk_step(LsrkScheme::carpenter_kennedy_54(), f, s * dt, dt, y, k, w);
  }
  return y;
}

// exp(A) by scaling and squaring of a truncated Taylor series.
oracle::Mat expm(const oracle::Mat& a) {
  double norm = 0.0;
  for (const auto& r : a) {
    for (double v : r) norm = std::max(norm, std::abs(v));
  }
  int squarings = 0;
  while (norm > 0.1) {
    norm /= 2.0;
    ++squarings;
  }
  oracle::Mat s = a;
  for (auto& r : s) {
    for (double& v : r) v /= std::pow(2.0, squarings);
  }
  oracle::Mat sum = oracle::identity(a.size());
  oracle::Mat term = oracle::identity(a.size());
  for (int k = 1; k < 25; ++k) {
    term = oracle::matmul(term, s);
    for (auto& r : term) {
      for (double& v : r) v /= k;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < a.size(); ++j) sum[i][j] += term[i][j];
    }
  }
  for (int i = 0; i < squarings; ++i) sum = oracle::matmul(sum, sum);
  return sum;
}

}  // namespace

TEST_CASE("scheme coefficients") {
  const LsrkScheme& s = LsrkScheme::carpenter_kennedy_54();
  CHECK(s.a[0] == 0.0);
  CHECK(s.c[0] == 0.0);
  for (std::size_t i = 1; i < 5; ++i) CHECK(s.c[i] > s.c[i - 1]);
  CHECK(s.c[4] < 1.0);
}

TEST_CASE("zero right-hand side keeps the state") {
  VectorField y(4);
  y[0].fill(1.5);
  y[2][3] = -2.0;
  const VectorField y0 = y;
  const Rhs zero = [](double, const VectorField&, VectorField& o) { o.fill(0.0); };
  const VectorField out = integrate(zero, y, 1.0, 7);
  CHECK(oracle::max_abs_diff(out, y0) == 0.0);
}

TEST_CASE("fourth-order convergence on y' = -y") {
  const Rhs decay = [](double, const VectorField& y, VectorField& o) {
    for (int i = 0; i < 3; ++i) o[i][0] = -y[i][0];
  };
  VectorField y0(1);
  y0[0][0] = 1.0;
  std::vector<double> err;
  for (int n : {5, 10, 20, 40}) {
    const VectorField y = integrate(decay, y0, 1.0, n);
    err.push_back(std::abs(y[0][0] - std::exp(-1.0)));
  }
  for (std::size_t k = 1; k < err.size(); ++k) {
    const double eoc = std::log2(err[k - 1] / err[k]);
    CAPTURE(k);
    CHECK(eoc >= 3.8);
    CHECK(eoc <= 4.2);
  }
}

TEST_CASE("linear system against the matrix exponential") {
  const oracle::Mat a = {{-0.5, 2.0, 0.0}, {-2.0, -0.5, 1.0}, {0.3, 0.0, -1.0}};
  const Rhs lin = [&](double, const VectorField& y, VectorField& o) {
    for (std::size_t i = 0; i < 3; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < 3; ++j) s += a[i][j] * y[static_cast<int>(j)][0];
      o[static_cast<int>(i)][0] = s;
    }
  };
  VectorField y0(1);
  y0[0][0] = 1.0;
  y0[1][0] = -0.5;
  y0[2][0] = 0.25;
  const double T = 2.0;
  oracle::Mat at = a;
  for (auto& r : at) {
    for (double& v : r) v *= T;
  }
  const oracle::Vec want = oracle::matvec(expm(at), {1.0, -0.5, 0.25});
  double prev = 0.0;
  for (int n : {10, 20, 40}) {
    const VectorField y = integrate(lin, y0, T, n);
    double e = 0.0;
    for (int i = 0; i < 3; ++i) e = std::max(e, std::abs(y[i][0] - want[static_cast<std::size_t>(i)]));
    if (prev > 0.0) {
      CHECK(std::log2(prev / e) >= 3.8);
      CHECK(std::log2(prev / e) <= 4.2);
    }
    prev = e;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("time-dependent forcing uses the stage times") {
  // y' = t^3 has the exact solution T^4 / 4, integrated exactly by a fourth-order method.
  const Rhs f = [](double t, const VectorField&, VectorField& o) {
    o.fill(0.0);
    o[0][0] = t * t * t;
  };
  VectorField y0(1);
  const VectorField y = integrate(f, y0, 2.0, 3);
  CHECK(y[0][0] == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("non-finite states abort") {
  const Rhs bad = [](double, const VectorField&, VectorField& o) {
    o.fill(0.0);
    o[1][0] = std::numeric_limits<double>::infinity();
  };
  VectorField y(1);
  CHECK_THROWS_AS(lsrk_step(LsrkScheme::carpenter_kennedy_54(), bad, 0.0, 0.1, y), NonFiniteState);
}

TEST_CASE("step size selection") {
  StepControl c;
  c.cfl = 0.95;
  CHECK(compute_dt(c, 0.05, 2.0, 10.0).dt == doctest::Approx(0.02375));
  CHECK(compute_dt(c, 0.05, 2.0, 0.01).dt == 0.01);
  const DtResult d = compute_dt(c, 0.05, 0.0, 0.3);
  CHECK(d.degenerate_velocity);
  CHECK(d.dt == 0.3);

  StepControl h;
  h.cfl = 0.95;
  h.hall_mode = true;
  h.n_nodes = 40;
  CHECK(h.effective_cfl() == doctest::Approx(0.02375));
  CHECK(c.effective_cfl() == 0.95);

  const Grid g(GridSpec::cube(2, 5, 0.0, 1.0));
  VectorField u(g.size());
  u[1][7] = -3.0;
  u[2][2] = 2.0;
  CHECK(max_abs_velocity(u) == 3.0);
  CHECK(compute_dt(c, g, u, 1.0).dt == doctest::Approx(0.95 * 0.25 / 3.0));

  StepControl bad;
  bad.cfl = 0.0;
  CHECK_THROWS(compute_dt(bad, 0.1, 1.0, 1.0));
}
