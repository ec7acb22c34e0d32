#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "induction/fields.hpp"

namespace induction {

using Vec3 = std::array<double, 3>;

/// Discretisation of d_j(u_i B_j) and of -d_j(u_j B_i).
enum class FluxForm { Central, Split, Product };
/// Discretisation of the source term -u_i d_j B_j.
enum class SourceForm { Zero, Central, Split };

struct FormSelection {
  FluxForm uiBj = FluxForm::Central;
  SourceForm source = SourceForm::Zero;
  FluxForm ujBi = FluxForm::Central;

  /// Parses "central|split|product", "zero|central|split", "central|split|product".
  static FormSelection parse(std::string_view uiBj, std::string_view source, std::string_view ujBi);
  /// Parses a dash-joined label such as "product-central-split".
  static FormSelection parse_label(std::string_view label);
  /// Named presets 1..6:
  /// central-zero-central, central-central-central, split-central-split,
  /// product-central-product, product-central-split, product-central-central.
  static FormSelection preset(int number);
  /// All 27 combinations.
  static std::vector<FormSelection> all();

  std::string label() const;
  bool operator==(const FormSelection&) const = default;
};

std::string to_string(FluxForm f);
std::string to_string(SourceForm f);
FluxForm parse_flux_form(std::string_view s);
SourceForm parse_source_form(std::string_view s);

/// A vector field given as a function of time and position.
class FieldProvider {
 public:
  virtual ~FieldProvider() = default;
  virtual Vec3 eval(double t, const Vec3& x) const = 0;
  /// True if eval does not depend on t.
  virtual bool stationary() const { return false; }
  /// Samples all nodes.
  virtual void sample(const Grid& grid, double t, VectorField& out) const;
  /// Samples only nodes on faces of non-periodic axes; other nodes are left untouched.
  virtual void sample_faces(const Grid& grid, double t, VectorField& out) const;
};

class FunctionProvider final : public FieldProvider {
 public:
  using Fn = std::function<Vec3(double, const Vec3&)>;
  FunctionProvider(Fn fn, bool stationary) : fn_(std::move(fn)), stationary_(stationary) {}
  Vec3 eval(double t, const Vec3& x) const override { return fn_(t, x); }
  bool stationary() const override { return stationary_; }

 private:
  Fn fn_;
  bool stationary_;
};

struct BoundaryCondition {
  enum class Kind { LinearInflow, HallOutflow, PeriodicNone };
  Kind kind = Kind::PeriodicNone;
  /// Boundary values B^b for LinearInflow.
  std::shared_ptr<const FieldProvider> boundary_data;
  /// HallOutflow: use u in place of u/2 in the indicator and coefficient.
  bool outflow_full_u = false;

  static BoundaryCondition linear_inflow(std::shared_ptr<const FieldProvider> data);
  static BoundaryCondition hall_outflow(bool full_u = false);
  static BoundaryCondition periodic_none();
};

struct HallParams {
  ScalarField rho;
  bool enabled = false;

  static HallParams disabled() { return {}; }
  static HallParams uniform(const Grid& grid, double rho);
  /// Throws unless rho is defined on the grid and strictly positive.
  void validate(const Grid& grid) const;
};

/// Derivatives of u needed by the linear volume terms.
struct VelocityGradient {
  std::array<std::array<ScalarField, 3>, 3> du;  // du[i][j] = D_j u_i
  ScalarField div;                               // sum_j D_j u_j

  static VelocityGradient compute(const Grid& grid, const VectorField& u);
  /// Recomputes in place, reusing storage.
  void update(const Grid& grid, const VectorField& u);
};

VectorField volume_linear(const Grid& grid, const FormSelection& forms, const VectorField& u, const VectorField& b);
/// Accumulates the linear volume terms into out.
void add_volume_linear(const Grid& grid, const FormSelection& forms, const VectorField& u,
                       const VelocityGradient& du, const VectorField& b, VectorField& out);

/// J = curl(B) / rho.
VectorField current(const Grid& grid, const HallParams& hall, const VectorField& b);
/// In-place variant; the density is assumed to be validated already.
void current(const Grid& grid, const HallParams& hall, const VectorField& b, VectorField& j);
/// Hall volume term sum_j D_j(J_j B_i - J_i B_j), i.e. -curl(J x B).
VectorField volume_hall(const Grid& grid, const HallParams& hall, const VectorField& b);
void add_volume_hall(const Grid& grid, const VectorField& j, const VectorField& b, VectorField& out);

/// M^{-1} E_j (1_{u.nu<0} u_j (B_i - B^b_i)); only face values of bdata are read.
VectorField sat_linear_inflow(const Grid& grid, const VectorField& u, const VectorField& b, const VectorField& bdata);
VectorField sat_linear_inflow(const Grid& grid, const VectorField& u, const VectorField& b,
                              const BoundaryCondition& bc, double t);
void add_sat_linear_inflow(const Grid& grid, const VectorField& u, const VectorField& b, const VectorField& bdata,
                           VectorField& out);

/// M^{-1} E_j (1_{(c u - J).nu<0} (c u_j - J_j) B_i + B_j J_i) with c = 1/2, or c = 1 when full_u.
VectorField sat_hall_outflow(const Grid& grid, const VectorField& u, const VectorField& b, const HallParams& hall,
                             bool full_u = false);
void add_sat_hall_outflow(const Grid& grid, const VectorField& u, const VectorField& j, const VectorField& b,
                          bool full_u, VectorField& out);

/// Semidiscrete right-hand side with cached velocity data.
class InductionRhs {
 public:
  InductionRhs(const Grid& grid, FormSelection forms, BoundaryCondition bc, HallParams hall,
               std::shared_ptr<const FieldProvider> velocity);

  void operator()(double t, const VectorField& b, VectorField& out);
  VectorField operator()(double t, const VectorField& b);

  /// Velocity sampled at time t (cached for stationary fields).
  const VectorField& velocity(double t);
  const VelocityGradient& velocity_gradient(double t);

  const Grid& grid() const { return grid_; }
  const FormSelection& forms() const { return forms_; }
  const BoundaryCondition& boundary() const { return bc_; }
  const HallParams& hall() const { return hall_; }

 private:
  void refresh(double t);

  const Grid& grid_;
  FormSelection forms_;
  BoundaryCondition bc_;
  HallParams hall_;
  std::shared_ptr<const FieldProvider> velocity_;
  VectorField u_;
  std::optional<VelocityGradient> du_;
  std::optional<double> sampled_at_;
  VectorField bdata_;
  VectorField j_;
};

VectorField rhs(const Grid& grid, const FormSelection& forms, const BoundaryCondition& bc, const HallParams& hall,
                const FieldProvider& u_eval, double t, const VectorField& b);

}  // namespace induction
