#include "induction/time_integration.hpp"

#include <algorithm>
#include <cmath>

namespace induction {

const LsrkScheme& LsrkScheme::carpenter_kennedy_54() {
  static const LsrkScheme s{
      {0.0, -567301805773.0 / 1357537059087.0, -2404267990393.0 / 2016746695238.0,
       -3550918686646.0 / 2091501179385.0, -1275806237668.0 / 842570457699.0},
      {1432997174477.0 / 9575080441755.0, 5161836677717.0 / 13612068292357.0, 1720146321549.0 / 2090206949498.0,
       3134564353537.0 / 4481467310338.0, 2277821191437.0 / 14882151754819.0},
      {0.0, 1432997174477.0 / 9575080441755.0, 2526269341429.0 / 6820363962896.0,
       2006345519317.0 / 3224310063776.0, 2802321613138.0 / 2924317926251.0},
  };
  return s;
}

double StepControl::effective_cfl() const {
  if (!(cfl > 0.0)) throw std::invalid_argument("CFL number must be positive");
  if (!hall_mode) return cfl;
  if (n_nodes == 0) throw std::invalid_argument("Hall-mode CFL needs a node count");
  return cfl / static_cast<double>(n_nodes);
}

double max_abs_velocity(const VectorField& u) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (double v : u[i]) m = std::max(m, std::abs(v));
  }
  return m;
}

DtResult compute_dt(const StepControl& ctrl, double min_dx, double max_u, double t_remaining) {
  const double cfl = ctrl.effective_cfl();
  if (!(max_u > 0.0)) return {t_remaining, true};
  return {std::min(cfl * min_dx / max_u, t_remaining), false};
}

DtResult compute_dt(const StepControl& ctrl, const Grid& grid, const VectorField& u, double t_remaining) {
  return compute_dt(ctrl, grid.min_dx(), max_abs_velocity(u), t_remaining);
}

}  // namespace induction
