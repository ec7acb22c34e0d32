#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>

#include "induction/fields.hpp"

namespace induction {

/// Five-stage, fourth-order 2N-storage Runge-Kutta scheme of Carpenter and Kennedy.
struct LsrkScheme {
  std::array<double, 5> a;
  std::array<double, 5> b;
  std::array<double, 5> c;

  static const LsrkScheme& carpenter_kennedy_54();
};

struct StepControl {
  double cfl = 0.95;
  /// Effective CFL number is cfl / n_nodes when set.
  bool hall_mode = false;
  std::size_t n_nodes = 1;

  double effective_cfl() const;
};

struct DtResult {
  double dt = 0.0;
  /// True if max|u| vanished and dt fell back to the remaining time.
  bool degenerate_velocity = false;
};

/// Largest |u_i| over all components and nodes.
double max_abs_velocity(const VectorField& u);

/// dt = cfl_eff * min dx / max|u_i|, clipped to t_remaining.
DtResult compute_dt(const StepControl& ctrl, const Grid& grid, const VectorField& u, double t_remaining);
DtResult compute_dt(const StepControl& ctrl, double min_dx, double max_u, double t_remaining);

class NonFiniteState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 2N-storage update of a generic state. State needs size-compatible
/// copy construction, axpy(a, x, y) and scale(a, x) overloads and
/// an all_finite() member.
template <class State>
void lsrk_step(const LsrkScheme& scheme, const std::function<void(double, const State&, State&)>& rhs_fn, double t,
               double dt, State& y, State& k, State& f) {
  for (std::size_t s = 0; s < scheme.a.size(); ++s) {
    rhs_fn(t + scheme.c[s] * dt, y, f);
    scale(scheme.a[s], k);
    axpy(dt, f, k);
    axpy(scheme.b[s], k, y);
  }
  if (!y.all_finite()) {
    throw NonFiniteState("non-finite state after step at t = " + std::to_string(t) + " with dt = " +
                         std::to_string(dt));
  }
}

/// Convenience overload allocating the two work registers.
template <class State>
void lsrk_step(const LsrkScheme& scheme, const std::function<void(double, const State&, State&)>& rhs_fn, double t,
               double dt, State& y) {
  State k = y;
  scale(0.0, k);
  State f = k;
  lsrk_step(scheme, rhs_fn, t, dt, y, k, f);
}

}  // namespace induction
