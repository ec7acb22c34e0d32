#pragma once

#include <array>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "induction/fields.hpp"

namespace induction {

enum class CleanMethod { None, WsDirichlet0, NsDirichlet0, WsLeastNorm };

/// CLI names: none | ws-d0 | ns-d0 | ws-ln.
std::string to_string(CleanMethod m);
CleanMethod parse_clean_method(std::string_view s);

struct DivCleanConfig {
  CleanMethod method = CleanMethod::None;
  double tol = 1e-3;
  int max_iter = 50;

  void validate() const;
};

struct CleanStats {
  int iterations = 0;
  double div_before = 0.0;
  double div_after = 0.0;
  std::array<double, 3> mass_change{0.0, 0.0, 0.0};
  double energy_before = 0.0;
  double energy_after = 0.0;
  bool skipped = false;
  bool converged = false;
  bool breakdown = false;
  std::vector<double> residual_history;

  double energy_change() const { return energy_after - energy_before; }
};

struct CgResult {
  ScalarField x;
  int iterations = 0;
  std::vector<double> residual_history;
  bool converged = false;
  bool breakdown = false;
};

using LinearMap = std::function<void(const ScalarField&, ScalarField&)>;
using InnerProduct = std::function<double(const ScalarField&, const ScalarField&)>;
/// Optional stopping measure evaluated on the current iterate and CG residual.
using StopNorm = std::function<double(const ScalarField&, const ScalarField&)>;

/// Unpreconditioned conjugate gradients from a zero initial guess.
/// Stops when the stopping measure (default: residual norm in the given
/// inner product) is <= tol, or after max_iter iterations. The history holds
/// the measure before the first and after every iteration.
CgResult cg_solve(const LinearMap& apply_a, const ScalarField& rhs, const InnerProduct& inner, double tol,
                  int max_iter, const StopNorm& stop_norm = {});

std::pair<VectorField, CleanStats> clean(const Grid& grid, const DivCleanConfig& cfg, const VectorField& b);

/// (div* phi)_j = M^{-1} D_j^T M phi.
VectorField div_star(const Grid& grid, const ScalarField& phi);

}  // namespace induction
