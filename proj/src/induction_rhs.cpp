#include "induction/induction_rhs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace induction {

std::string to_string(FluxForm f) {
  switch (f) {
    case FluxForm::Central:
      return "central";
    case FluxForm::Split:
      return "split";
    case FluxForm::Product:
      return "product";
  }
  return "?";
}

std::string to_string(SourceForm f) {
  switch (f) {
    case SourceForm::Zero:
      return "zero";
    case SourceForm::Central:
      return "central";
    case SourceForm::Split:
      return "split";
  }
  return "?";
}

FluxForm parse_flux_form(std::string_view s) {
  if (s == "central") return FluxForm::Central;
  if (s == "split") return FluxForm::Split;
  if (s == "product") return FluxForm::Product;
  throw std::invalid_argument("unknown flux form '" + std::string(s) + "' (expected central|split|product)");
}

SourceForm parse_source_form(std::string_view s) {
  if (s == "zero") return SourceForm::Zero;
  if (s == "central") return SourceForm::Central;
  if (s == "split") return SourceForm::Split;
  throw std::invalid_argument("unknown source form '" + std::string(s) + "' (expected zero|central|split)");
}

FormSelection FormSelection::parse(std::string_view uiBj, std::string_view source, std::string_view ujBi) {
  return {parse_flux_form(uiBj), parse_source_form(source), parse_flux_form(ujBi)};
}

FormSelection FormSelection::parse_label(std::string_view label) {
  const auto a = label.find('-');
  const auto b = a == std::string_view::npos ? a : label.find('-', a + 1);
  if (b == std::string_view::npos) {
    throw std::invalid_argument("form label '" + std::string(label) + "' must look like uiBj-source-ujBi");
  }
  return parse(label.substr(0, a), label.substr(a + 1, b - a - 1), label.substr(b + 1));
}

FormSelection FormSelection::preset(int number) {
  using F = FluxForm;
  using S = SourceForm;
  switch (number) {
    case 1:
      return {F::Central, S::Zero, F::Central};
    case 2:
      return {F::Central, S::Central, F::Central};
    case 3:
      return {F::Split, S::Central, F::Split};
    case 4:
      return {F::Product, S::Central, F::Product};
    case 5:
      return {F::Product, S::Central, F::Split};
    case 6:
      return {F::Product, S::Central, F::Central};
    default:
      throw std::invalid_argument("form preset must be in 1..6");
  }
}

std::vector<FormSelection> FormSelection::all() {
  std::vector<FormSelection> out;
  for (auto a : {FluxForm::Central, FluxForm::Split, FluxForm::Product}) {
    for (auto s : {SourceForm::Zero, SourceForm::Central, SourceForm::Split}) {
      for (auto c : {FluxForm::Central, FluxForm::Split, FluxForm::Product}) out.push_back({a, s, c});
    }
  }
  return out;
}

std::string FormSelection::label() const {
  return to_string(uiBj) + "-" + to_string(source) + "-" + to_string(ujBi);
}

void FieldProvider::sample(const Grid& grid, double t, VectorField& out) const {
  if (out.size() != grid.size()) out = VectorField(grid.size());
  std::size_t idx = 0;
  for (std::size_t k = 0; k < grid.n(2); ++k) {
    const double z = grid.coord(2, k);
    for (std::size_t j = 0; j < grid.n(1); ++j) {
      const double y = grid.coord(1, j);
      for (std::size_t i = 0; i < grid.n(0); ++i, ++idx) {
        const Vec3 v = eval(t, {grid.coord(0, i), y, z});
        out[0][idx] = v[0];
        out[1][idx] = v[1];
        out[2][idx] = v[2];
      }
    }
  }
}

void FieldProvider::sample_faces(const Grid& grid, double t, VectorField& out) const {
  if (out.size() != grid.size()) out = VectorField(grid.size());
  for (int a = 0; a < 3; ++a) {
    for_each_face_node(grid, a, [&](std::size_t idx, double) {
      const auto ijk = grid.unravel(idx);
      const Vec3 v = eval(t, {grid.coord(0, ijk[0]), grid.coord(1, ijk[1]), grid.coord(2, ijk[2])});
      out[0][idx] = v[0];
      out[1][idx] = v[1];
      out[2][idx] = v[2];
    });
  }
}

BoundaryCondition BoundaryCondition::linear_inflow(std::shared_ptr<const FieldProvider> data) {
  if (!data) throw std::invalid_argument("linear inflow boundary condition needs boundary data");
  BoundaryCondition bc;
  bc.kind = Kind::LinearInflow;
  bc.boundary_data = std::move(data);
  return bc;
}

BoundaryCondition BoundaryCondition::hall_outflow(bool full_u) {
  BoundaryCondition bc;
  bc.kind = Kind::HallOutflow;
  bc.outflow_full_u = full_u;
  return bc;
}

BoundaryCondition BoundaryCondition::periodic_none() { return {}; }

HallParams HallParams::uniform(const Grid& grid, double rho) {
  HallParams h;
  h.rho = ScalarField(grid.size(), rho);
  h.enabled = true;
  h.validate(grid);
  return h;
}

void HallParams::validate(const Grid& grid) const {
  check_shape(grid, rho, "Hall density");
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(rho[i] > 0.0) || !std::isfinite(rho[i])) {
      throw std::invalid_argument("Hall density must be positive and finite (node " + std::to_string(i) + ")");
    }
  }
}

VelocityGradient VelocityGradient::compute(const Grid& grid, const VectorField& u) {
  VelocityGradient g;
  g.update(grid, u);
  return g;
}

void VelocityGradient::update(const Grid& grid, const VectorField& u) {
  check_shape(grid, u, "velocity");
  const std::size_t n = grid.size();
  if (div.size() != n) div = ScalarField(n);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (du[i][j].size() != n) du[i][j] = ScalarField(n);
      apply_axis(grid, AxisOp::D, static_cast<int>(j), u[static_cast<int>(i)].data(), du[i][j].data());
    }
  }
  div.fill(0.0);
  for (std::size_t j = 0; j < 3; ++j) axpy(1.0, du[j][j], div);
}

namespace {

// Coefficients of the building blocks
//   P_i = sum_j D_j(u_i B_j),  Q_i = u_i div B,  R_i = sum_j B_j D_j u_i,
//   S_i = sum_j D_j(u_j B_i),  T_i = sum_j u_j D_j B_i,  U_i = B_i div u
// in the volume term aP P + aQ Q + aR R + aS S + aT T + aU U.
// Per-thread scratch so repeated right-hand side evaluations do not allocate.
ScalarField& scratch(int slot, std::size_t n) {
  thread_local std::array<ScalarField, 2> buf;
  ScalarField& f = buf[static_cast<std::size_t>(slot)];
  if (f.size() != n) f = ScalarField(n);
  return f;
}

struct Blocks {
  double aP = 0, aQ = 0, aR = 0, aS = 0, aT = 0, aU = 0;
};

Blocks blocks_for(const FormSelection& f) {
  Blocks c;
  switch (f.uiBj) {
    case FluxForm::Central:
      c.aP += 1.0;
      break;
    case FluxForm::Split:
      c.aP += 0.5;
      c.aQ += 0.5;
      c.aR += 0.5;
      break;
    case FluxForm::Product:
      c.aQ += 1.0;
      c.aR += 1.0;
      break;
  }
  switch (f.source) {
    case SourceForm::Zero:
      break;
    case SourceForm::Central:
      c.aQ -= 1.0;
      break;
    case SourceForm::Split:
      c.aQ -= 0.5;
      c.aP -= 0.5;
      c.aR += 0.5;
      break;
  }
  switch (f.ujBi) {
    case FluxForm::Central:
      c.aS -= 1.0;
      break;
    case FluxForm::Split:
      c.aS -= 0.5;
      c.aT -= 0.5;
      c.aU -= 0.5;
      break;
    case FluxForm::Product:
      c.aT -= 1.0;
      c.aU -= 1.0;
      break;
  }
  return c;
}

}  // namespace

void add_volume_linear(const Grid& grid, const FormSelection& forms, const VectorField& u,
                       const VelocityGradient& du, const VectorField& b, VectorField& out) {
  check_shape(grid, u, "volume_linear velocity");
  check_shape(grid, b, "volume_linear field");
  check_shape(grid, out, "volume_linear output");
  const Blocks c = blocks_for(forms);
  const std::size_t n = grid.size();
  ScalarField& tmp = scratch(0, n);

  // Conservative parts: D_j(aP u_i B_j + aS u_j B_i), fused per (i, j).
  if (c.aP != 0.0 || c.aS != 0.0) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double* ui = u[i].data();
        const double* uj = u[j].data();
        const double* bi = b[i].data();
        const double* bj = b[j].data();
        double* t = tmp.data();
        for (std::size_t q = 0; q < n; ++q) t[q] = c.aP * (ui[q] * bj[q]) + c.aS * (uj[q] * bi[q]);
        apply_axis(grid, AxisOp::D, j, tmp.data(), out[i].data(), 1.0, true);
      }
    }
  }

  // Non-conservative parts.
  ScalarField* divb = nullptr;
  if (c.aQ != 0.0) {
    divb = &scratch(1, n);
    divergence(grid, b, *divb);
  }
  for (int i = 0; i < 3; ++i) {
    const auto ui_ = static_cast<std::size_t>(i);
    double* o = out[i].data();
    if (c.aQ != 0.0 || c.aR != 0.0 || c.aU != 0.0) {
      const double* ui = u[i].data();
      const double* bi = b[i].data();
      const double* db = divb ? divb->data() : du.div.data();
      const double* d0 = du.du[ui_][0].data();
      const double* d1 = du.du[ui_][1].data();
      const double* d2 = du.du[ui_][2].data();
      const double* dv = du.div.data();
      const double* b0 = b[0].data();
      const double* b1 = b[1].data();
      const double* b2 = b[2].data();
      for (std::size_t q = 0; q < n; ++q) {
        o[q] += c.aQ * (ui[q] * db[q]) + c.aR * (b0[q] * d0[q] + b1[q] * d1[q] + b2[q] * d2[q]) +
                c.aU * (bi[q] * dv[q]);
      }
    }
    if (c.aT != 0.0) {
      for (int j = 0; j < 3; ++j) {
        apply_axis(grid, AxisOp::D, j, b[i].data(), tmp.data());
        const double* uj = u[j].data();
        const double* t = tmp.data();
        for (std::size_t q = 0; q < n; ++q) o[q] += c.aT * (uj[q] * t[q]);
      }
    }
  }
}

VectorField volume_linear(const Grid& grid, const FormSelection& forms, const VectorField& u, const VectorField& b) {
  VectorField out(grid.size());
  const VelocityGradient du = VelocityGradient::compute(grid, u);
  add_volume_linear(grid, forms, u, du, b, out);
  return out;
}

VectorField current(const Grid& grid, const HallParams& hall, const VectorField& b) {
  hall.validate(grid);
  VectorField j(grid.size());
  current(grid, hall, b, j);
  return j;
}

void current(const Grid& grid, const HallParams& hall, const VectorField& b, VectorField& j) {
  check_shape(grid, hall.rho, "Hall density");
  curl(grid, b, j);
  for (int i = 0; i < 3; ++i) {
    double* p = j[i].data();
    const double* r = hall.rho.data();
    for (std::size_t q = 0; q < grid.size(); ++q) p[q] /= r[q];
  }
}

void add_volume_hall(const Grid& grid, const VectorField& j, const VectorField& b, VectorField& out) {
  const std::size_t n = grid.size();
  ScalarField& tmp = scratch(0, n);
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      if (k == i) continue;
      const double* jk = j[k].data();
      const double* ji = j[i].data();
      const double* bi = b[i].data();
      const double* bk = b[k].data();
      double* t = tmp.data();
      for (std::size_t q = 0; q < n; ++q) t[q] = jk[q] * bi[q] - ji[q] * bk[q];
      apply_axis(grid, AxisOp::D, k, tmp.data(), out[i].data(), 1.0, true);
    }
  }
}

VectorField volume_hall(const Grid& grid, const HallParams& hall, const VectorField& b) {
  check_shape(grid, b, "volume_hall field");
  const VectorField j = current(grid, hall, b);
  VectorField out(grid.size());
  add_volume_hall(grid, j, b, out);
  return out;
}

void add_sat_linear_inflow(const Grid& grid, const VectorField& u, const VectorField& b, const VectorField& bdata,
                           VectorField& out) {
  check_shape(grid, u, "inflow SAT velocity");
  check_shape(grid, b, "inflow SAT field");
  check_shape(grid, bdata, "inflow SAT boundary data");
  for (int a = 0; a < 3; ++a) {
    if (grid.periodic(a)) continue;
    const double inv_m = 1.0 / grid.op(a).boundary_weight();
    for_each_face_node(grid, a, [&](std::size_t q, double nu) {
      const double un = u[a][q] * nu;
      if (!(un < 0.0)) return;
      const double w = un * inv_m;
      for (int i = 0; i < 3; ++i) out[i][q] += w * (b[i][q] - bdata[i][q]);
    });
  }
}

VectorField sat_linear_inflow(const Grid& grid, const VectorField& u, const VectorField& b, const VectorField& bdata) {
  VectorField out(grid.size());
  add_sat_linear_inflow(grid, u, b, bdata, out);
  return out;
}

VectorField sat_linear_inflow(const Grid& grid, const VectorField& u, const VectorField& b,
                              const BoundaryCondition& bc, double t) {
  if (bc.kind != BoundaryCondition::Kind::LinearInflow || !bc.boundary_data) {
    throw std::invalid_argument("linear inflow SAT needs a LinearInflow boundary condition with data");
  }
  VectorField bdata(grid.size());
  bc.boundary_data->sample_faces(grid, t, bdata);
  return sat_linear_inflow(grid, u, b, bdata);
}

void add_sat_hall_outflow(const Grid& grid, const VectorField& u, const VectorField& j, const VectorField& b,
                          bool full_u, VectorField& out) {
  check_shape(grid, u, "outflow SAT velocity");
  check_shape(grid, b, "outflow SAT field");
  const double cu = full_u ? 1.0 : 0.5;
  for (int a = 0; a < 3; ++a) {
    if (grid.periodic(a)) continue;
    const double inv_m = 1.0 / grid.op(a).boundary_weight();
    for_each_face_node(grid, a, [&](std::size_t q, double nu) {
      const double vn = cu * u[a][q] - j[a][q];
      const double ind = (vn * nu < 0.0) ? 1.0 : 0.0;
      const double w = nu * inv_m;
      const double ba = b[a][q];
      for (int i = 0; i < 3; ++i) out[i][q] += w * (ind * vn * b[i][q] + ba * j[i][q]);
    });
  }
}

VectorField sat_hall_outflow(const Grid& grid, const VectorField& u, const VectorField& b, const HallParams& hall,
                             bool full_u) {
  const VectorField j = current(grid, hall, b);
  VectorField out(grid.size());
  add_sat_hall_outflow(grid, u, j, b, full_u, out);
  return out;
}

InductionRhs::InductionRhs(const Grid& grid, FormSelection forms, BoundaryCondition bc, HallParams hall,
                           std::shared_ptr<const FieldProvider> velocity)
    : grid_(grid),
      forms_(forms),
      bc_(std::move(bc)),
      hall_(std::move(hall)),
      velocity_(std::move(velocity)),
      u_(grid.size()),
      bdata_(grid.size()) {
  if (!velocity_) throw std::invalid_argument("InductionRhs needs a velocity provider");
  if (hall_.enabled) hall_.validate(grid_);
  if (bc_.kind == BoundaryCondition::Kind::LinearInflow && !bc_.boundary_data) {
    throw std::invalid_argument("linear inflow boundary condition needs boundary data");
  }
  if (bc_.kind == BoundaryCondition::Kind::HallOutflow && !hall_.enabled) {
    throw std::invalid_argument("Hall outflow boundary condition requires the Hall term");
  }
}

void InductionRhs::refresh(double t) {
  if (sampled_at_ && (*sampled_at_ == t || velocity_->stationary())) return;
  velocity_->sample(grid_, t, u_);
  if (!du_) du_.emplace();
  du_->update(grid_, u_);
  sampled_at_ = t;
}

const VectorField& InductionRhs::velocity(double t) {
  refresh(t);
  return u_;
}

const VelocityGradient& InductionRhs::velocity_gradient(double t) {
  refresh(t);
  return *du_;
}

void InductionRhs::operator()(double t, const VectorField& b, VectorField& out) {
  check_shape(grid_, b, "rhs field");
  refresh(t);
  if (out.size() != grid_.size()) out = VectorField(grid_.size());
  out.fill(0.0);
  add_volume_linear(grid_, forms_, u_, *du_, b, out);
  if (hall_.enabled) {
    current(grid_, hall_, b, j_);
    add_volume_hall(grid_, j_, b, out);
  }
  switch (bc_.kind) {
    case BoundaryCondition::Kind::LinearInflow:
      bc_.boundary_data->sample_faces(grid_, t, bdata_);
      add_sat_linear_inflow(grid_, u_, b, bdata_, out);
      break;
    case BoundaryCondition::Kind::HallOutflow:
      add_sat_hall_outflow(grid_, u_, j_, b, bc_.outflow_full_u, out);
      break;
    case BoundaryCondition::Kind::PeriodicNone:
      break;
  }
}

VectorField InductionRhs::operator()(double t, const VectorField& b) {
  VectorField out(grid_.size());
  (*this)(t, b, out);
  return out;
}

VectorField rhs(const Grid& grid, const FormSelection& forms, const BoundaryCondition& bc, const HallParams& hall,
                const FieldProvider& u_eval, double t, const VectorField& b) {
  // Non-owning alias; the provider outlives this call.
  std::shared_ptr<const FieldProvider> u(&u_eval, [](const FieldProvider*) {});
  InductionRhs r(grid, forms, bc, hall, std::move(u));
  return r(t, b);
}

}  // namespace induction
