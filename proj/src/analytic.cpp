#include "induction/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace induction {

std::string to_string(CaseKind k) {
  switch (k) {
    case CaseKind::Rotation3D:
      return "rotation3d";
    case CaseKind::ConfinedDomain:
      return "confined";
    case CaseKind::HallPeriodic:
      return "hall-periodic";
    case CaseKind::HallOutflow:
      return "hall-outflow";
    case CaseKind::DivergenceBound:
      return "divbound";
  }
  return "?";
}

CaseKind parse_case(std::string_view s) {
  if (s == "rotation3d") return CaseKind::Rotation3D;
  if (s == "confined") return CaseKind::ConfinedDomain;
  if (s == "hall-periodic") return CaseKind::HallPeriodic;
  if (s == "hall-outflow") return CaseKind::HallOutflow;
  if (s == "divbound") return CaseKind::DivergenceBound;
  throw std::invalid_argument("unknown test case '" + std::string(s) +
                              "' (expected rotation3d|confined|hall-periodic|hall-outflow|divbound)");
}

Mat3 rotation_matrix(double t) {
  const double c = std::cos(t);
  const double s = std::sqrt(3.0) * std::sin(t);
  const double d = (1.0 + 2.0 * c) / 3.0;
  const double p = (1.0 - c + s) / 3.0;
  const double m = (1.0 - c - s) / 3.0;
  return {{{d, m, p}, {p, d, m}, {m, p, d}}};
}

namespace {

Vec3 mul(const Mat3& r, const Vec3& x) {
  return {r[0][0] * x[0] + r[0][1] * x[1] + r[0][2] * x[2], r[1][0] * x[0] + r[1][1] * x[1] + r[1][2] * x[2],
          r[2][0] * x[0] + r[2][1] * x[1] + r[2][2] * x[2]};
}

Vec3 rotation_b0(const Vec3& p) {
  const double s3 = std::sqrt(3.0);
  const double x = p[0];
  const double y = p[1];
  const double z = p[2];
  const double alpha = std::exp(-5.0 / 3.0 *
                                (3.0 - 2.0 * (3.0 + s3) * x + 12.0 * x * x - 2.0 * (-3.0 + s3) * y + 12.0 * y * y +
                                 4.0 * s3 * z + 12.0 * z * z));
  return {alpha * (3.0 - s3 - 4.0 * s3 * y + 4.0 * s3 * z) / 48.0,
          alpha * (-3.0 - s3 + 4.0 * s3 * x - 4.0 * s3 * z) / 48.0, alpha * (1.0 - 2.0 * x + 2.0 * y) / (8.0 * s3)};
}

Vec3 rotation_u(const Vec3& x) {
  const double f = 1.0 / std::sqrt(3.0);
  return {f * (x[2] - x[1]), f * (x[0] - x[2]), f * (x[1] - x[0])};
}

Vec3 confined_u(const Vec3& x) {
  const double pi = std::numbers::pi;
  const double sx = std::sin(pi * x[0]), cx = std::cos(pi * x[0]);
  const double sy = std::sin(pi * x[1]), cy = std::cos(pi * x[1]);
  const double sz = std::sin(pi * x[2]), cz = std::cos(pi * x[2]);
  return {sx * cy * cz, cx * sy * cz, -2.0 * cx * cy * sz};
}

Vec3 hall_u(double t, const Vec3& x, const HallPeriodicParams& p) {
  const double k = p.k();
  const double px = k * x[0] + p.alpha * k * t * p.n[0];
  const double py = k * x[1] + p.alpha * k * t * p.n[1];
  const double pz = k * x[2] + p.alpha * k * t * p.n[2];
  return {p.a * std::cos(py) + p.b * std::sin(pz), p.b * std::cos(pz) + p.c * std::sin(px),
          p.c * std::cos(px) + p.a * std::sin(py)};
}

class RotationVelocity final : public FieldProvider {
 public:
  Vec3 eval(double, const Vec3& x) const override { return rotation_u(x); }
  bool stationary() const override { return true; }
};

class RotationField final : public FieldProvider {
 public:
  Vec3 eval(double t, const Vec3& x) const override { return eval_rotation3d(t, x).b; }
};

class ConfinedField final : public FieldProvider {
 public:
  Vec3 eval(double, const Vec3& x) const override { return confined_u(x); }
  bool stationary() const override { return true; }
};

// Samples the separable Hall velocity from per-axis tables.
class HallVelocity final : public FieldProvider {
 public:
  explicit HallVelocity(HallPeriodicParams p) : p_(p) {}
  Vec3 eval(double t, const Vec3& x) const override { return hall_u(t, x, p_); }

  void sample(const Grid& grid, double t, VectorField& out) const override {
    if (out.size() != grid.size()) out = VectorField(grid.size());
    const double k = p_.k();
    std::array<std::vector<double>, 3> cs, sn;
    for (int a = 0; a < 3; ++a) {
      const auto ua = static_cast<std::size_t>(a);
      cs[ua].resize(grid.n(a));
      sn[ua].resize(grid.n(a));
      for (std::size_t i = 0; i < grid.n(a); ++i) {
        const double ph = k * grid.coord(a, i) + p_.alpha * k * t * p_.n[ua];
        cs[ua][i] = std::cos(ph);
        sn[ua][i] = std::sin(ph);
      }
    }
    std::size_t idx = 0;
    for (std::size_t kk = 0; kk < grid.n(2); ++kk) {
      for (std::size_t j = 0; j < grid.n(1); ++j) {
        for (std::size_t i = 0; i < grid.n(0); ++i, ++idx) {
          out[0][idx] = p_.a * cs[1][j] + p_.b * sn[2][kk];
          out[1][idx] = p_.b * cs[2][kk] + p_.c * sn[0][i];
          out[2][idx] = p_.c * cs[0][i] + p_.a * sn[1][j];
        }
      }
    }
  }

 private:
  HallPeriodicParams p_;
};

class HallField final : public FieldProvider {
 public:
  explicit HallField(HallPeriodicParams p) : p_(p) {}
  Vec3 eval(double t, const Vec3& x) const override { return eval_hall_periodic(t, x, p_).b; }

 private:
  HallPeriodicParams p_;
};

class ConstantVelocity final : public FieldProvider {
 public:
  explicit ConstantVelocity(Vec3 u) : u_(u) {}
  Vec3 eval(double, const Vec3&) const override { return u_; }
  bool stationary() const override { return true; }

 private:
  Vec3 u_;
};

class DivboundField final : public FieldProvider {
 public:
  explicit DivboundField(double mode) : mode_(mode) {}
  Vec3 eval(double t, const Vec3& x) const override {
    // Inflow at x = 0 transported with unit speed.
    if (x[0] >= t) return {0.0, 0.0, 0.0};
    return eval_divbound_boundary(t - x[0], mode_);
  }

 private:
  double mode_;
};

}  // namespace

FieldPair eval_rotation3d(double t, const Vec3& x) {
  const Vec3 back = mul(rotation_matrix(-t), x);
  return {mul(rotation_matrix(t), rotation_b0(back)), rotation_u(x)};
}

FieldPair eval_confined(const Vec3& x) {
  const Vec3 u = confined_u(x);
  return {u, u};
}

FieldPair eval_hall_periodic(double t, const Vec3& x, const HallPeriodicParams& p) {
  const Vec3 u = hall_u(t, x, p);
  return {{p.alpha * u[0] + p.n[0], p.alpha * u[1] + p.n[1], p.alpha * u[2] + p.n[2]}, u};
}

Vec3 eval_divbound_boundary(double t, double mode) { return {std::sin(mode * t), 0.0, 0.0}; }

TestCase TestCase::make(CaseKind kind) {
  TestCase c;
  c.kind = kind;
  const double pi = std::numbers::pi;
  switch (kind) {
    case CaseKind::Rotation3D:
      c.lo = {-1.0, -1.0, -1.0};
      c.hi = {1.0, 1.0, 1.0};
      c.final_time = 2.0 * pi;
      break;
    case CaseKind::ConfinedDomain:
      c.lo = {0.0, 0.0, 0.0};
      c.hi = {1.0, 1.0, 1.0};
      c.final_time = 2.0;
      break;
    case CaseKind::HallPeriodic:
      c.lo = {0.0, 0.0, 0.0};
      c.hi = {4.0 * pi / 3.0, 4.0 * pi / 3.0, 4.0 * pi / 3.0};
      c.periodic = true;
      c.final_time = 1.0;
      break;
    case CaseKind::HallOutflow:
      c.lo = {0.0, 0.0, 0.0};
      c.hi = {4.0 * pi / 3.0, 4.0 * pi / 3.0, 4.0 * pi / 3.0};
      c.final_time = 5.0;
      break;
    case CaseKind::DivergenceBound:
      c.lo = {0.0, 0.0, 0.0};
      c.hi = {pi, 1.0, 1.0};
      c.final_time = 4.0;
      break;
  }
  return c;
}

bool TestCase::has_exact_solution() const { return kind != CaseKind::HallOutflow; }

Vec3 TestCase::initial(const Vec3& x) const {
  switch (kind) {
    case CaseKind::HallOutflow:
      return eval_hall_periodic(0.0, x, hall).b;
    default:
      return exact(0.0, x);
  }
}

Vec3 TestCase::exact(double t, const Vec3& x) const {
  switch (kind) {
    case CaseKind::Rotation3D:
      return eval_rotation3d(t, x).b;
    case CaseKind::ConfinedDomain:
      return eval_confined(x).b;
    case CaseKind::HallPeriodic:
      return eval_hall_periodic(t, x, hall).b;
    case CaseKind::DivergenceBound:
      return DivboundField(divbound_mode).eval(t, x);
    case CaseKind::HallOutflow:
      break;
  }
  throw std::logic_error("test case " + to_string(kind) + " has no exact solution");
}

std::shared_ptr<const FieldProvider> TestCase::velocity() const {
  switch (kind) {
    case CaseKind::Rotation3D:
      return std::make_shared<RotationVelocity>();
    case CaseKind::ConfinedDomain:
      return std::make_shared<ConfinedField>();
    case CaseKind::HallPeriodic:
    case CaseKind::HallOutflow:
      return std::make_shared<HallVelocity>(hall);
    case CaseKind::DivergenceBound:
      return std::make_shared<ConstantVelocity>(Vec3{1.0, 0.0, 0.0});
  }
  return nullptr;
}

std::shared_ptr<const FieldProvider> TestCase::exact_field() const {
  switch (kind) {
    case CaseKind::Rotation3D:
      return std::make_shared<RotationField>();
    case CaseKind::ConfinedDomain:
      return std::make_shared<ConfinedField>();
    case CaseKind::HallPeriodic:
      return std::make_shared<HallField>(hall);
    case CaseKind::DivergenceBound:
      return std::make_shared<DivboundField>(divbound_mode);
    case CaseKind::HallOutflow:
      break;
  }
  throw std::logic_error("test case " + to_string(kind) + " has no exact solution");
}

std::shared_ptr<const FieldProvider> TestCase::boundary_data() const {
  if (kind == CaseKind::HallOutflow || kind == CaseKind::HallPeriodic) {
    throw std::logic_error("test case " + to_string(kind) + " has no linear inflow data");
  }
  return exact_field();
}

}  // namespace induction
