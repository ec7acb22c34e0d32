#pragma once

#include <array>
#include <memory>
#include <string>
#include <string_view>

#include "induction/induction_rhs.hpp"

namespace induction {

enum class CaseKind { Rotation3D, ConfinedDomain, HallPeriodic, HallOutflow, DivergenceBound };

/// CLI names: rotation3d | confined | hall-periodic | hall-outflow | divbound.
std::string to_string(CaseKind k);
CaseKind parse_case(std::string_view s);

using Mat3 = std::array<std::array<double, 3>, 3>;

/// Rotation about the axis (1,1,1)/sqrt(3) by angle t.
Mat3 rotation_matrix(double t);

struct FieldPair {
  Vec3 b;
  Vec3 u;
};

FieldPair eval_rotation3d(double t, const Vec3& x);
FieldPair eval_confined(const Vec3& x);

struct HallPeriodicParams {
  double alpha = 0.5;
  double a = 1.0;
  double b = 1.0;
  double c = 1.0;
  Vec3 n{0.5773502691896257645, 0.5773502691896257645, 0.5773502691896257645};

  /// k = (1 - alpha^2) / alpha
  double k() const { return (1.0 - alpha * alpha) / alpha; }
};

/// B = alpha u + n with rho = 1.
FieldPair eval_hall_periodic(double t, const Vec3& x, const HallPeriodicParams& p = {});

/// Boundary data B^b = (sin(mode t), 0, 0).
Vec3 eval_divbound_boundary(double t, double mode);

/// Domain, final time and fields of one experiment.
struct TestCase {
  CaseKind kind = CaseKind::Rotation3D;
  std::array<double, 3> lo{};
  std::array<double, 3> hi{};
  bool periodic = false;
  double final_time = 0.0;
  HallPeriodicParams hall{};
  double divbound_mode = 1.0;

  static TestCase make(CaseKind kind);

  bool has_exact_solution() const;
  bool hall_enabled() const { return kind == CaseKind::HallPeriodic || kind == CaseKind::HallOutflow; }

  /// Initial magnetic field.
  Vec3 initial(const Vec3& x) const;
  /// Exact magnetic field; only for cases with an exact solution.
  Vec3 exact(double t, const Vec3& x) const;

  std::shared_ptr<const FieldProvider> velocity() const;
  std::shared_ptr<const FieldProvider> exact_field() const;
  /// Boundary data for linear inflow conditions.
  std::shared_ptr<const FieldProvider> boundary_data() const;
};

}  // namespace induction
