#include "induction/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace induction {

using nlohmann::json;

std::string to_string(BoundaryCondition::Kind k) {
  switch (k) {
    case BoundaryCondition::Kind::LinearInflow:
      return "inflow";
    case BoundaryCondition::Kind::HallOutflow:
      return "outflow";
    case BoundaryCondition::Kind::PeriodicNone:
      return "periodic";
  }
  return "?";
}

BoundaryCondition::Kind parse_bc_kind(const std::string& s) {
  if (s == "inflow") return BoundaryCondition::Kind::LinearInflow;
  if (s == "outflow") return BoundaryCondition::Kind::HallOutflow;
  if (s == "periodic") return BoundaryCondition::Kind::PeriodicNone;
  throw std::invalid_argument("unknown boundary condition '" + s + "' (expected inflow|outflow|periodic)");
}

RunConfig RunConfig::from_json(const json& j) {
  static const std::vector<std::string> known = {"case",  "order",  "N",  "forms",  "bc",
                                                 "hall",  "divclean", "cfl", "T",  "outdir",
                                                 "stride", "outflow_u_full", "divbound_mode"};
  if (!j.is_object()) throw std::invalid_argument("run configuration must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument("unknown configuration key '" + key + "'");
    }
  }
  RunConfig c;
  if (j.contains("case")) c.test_case = parse_case(j.at("case").get<std::string>());
  if (j.contains("order")) c.order = j.at("order").get<int>();
  if (j.contains("N")) c.N = j.at("N").get<std::size_t>();
  if (j.contains("forms")) {
    const json& f = j.at("forms");
    if (f.is_string()) {
      c.forms = FormSelection::parse_label(f.get<std::string>());
    } else if (f.is_number_integer()) {
      c.forms = FormSelection::preset(f.get<int>());
    } else {
      c.forms = FormSelection::parse(f.at("uiBj").get<std::string>(), f.at("source").get<std::string>(),
                                     f.at("ujBi").get<std::string>());
    }
  }
  if (j.contains("bc")) {
    const auto s = j.at("bc").get<std::string>();
    if (s != "auto") c.bc = parse_bc_kind(s);
  }
  if (j.contains("hall")) c.hall = j.at("hall").get<bool>();
  if (j.contains("divclean")) {
    const json& d = j.at("divclean");
    if (d.is_string()) {
      c.divclean.method = parse_clean_method(d.get<std::string>());
    } else {
      if (d.contains("method")) c.divclean.method = parse_clean_method(d.at("method").get<std::string>());
      if (d.contains("tol")) c.divclean.tol = d.at("tol").get<double>();
      if (d.contains("max_iter")) c.divclean.max_iter = d.at("max_iter").get<int>();
    }
  }
  if (j.contains("cfl")) c.cfl = j.at("cfl").get<double>();
  if (j.contains("T")) c.T = j.at("T").get<double>();
  if (j.contains("outdir")) c.outdir = j.at("outdir").get<std::string>();
  if (j.contains("stride")) c.stride = j.at("stride").get<std::size_t>();
  if (j.contains("outflow_u_full")) c.outflow_u_full = j.at("outflow_u_full").get<bool>();
  if (j.contains("divbound_mode")) c.divbound_mode = j.at("divbound_mode").get<double>();
  c.validate();
  return c;
}

json RunConfig::to_json() const {
  json j;
  j["case"] = to_string(test_case);
  j["order"] = order;
  j["N"] = N;
  j["forms"] = forms.label();
  j["bc"] = to_string(bc_kind());
  j["hall"] = hall_enabled();
  j["divclean"] = {{"method", to_string(divclean.method)}, {"tol", divclean.tol}, {"max_iter", divclean.max_iter}};
  j["cfl"] = cfl;
  j["T"] = final_time();
  j["outdir"] = outdir;
  j["stride"] = stride;
  j["outflow_u_full"] = outflow_u_full;
  j["divbound_mode"] = divbound_mode;
  return j;
}

TestCase RunConfig::test() const {
  TestCase tc = TestCase::make(test_case);
  tc.divbound_mode = divbound_mode;
  return tc;
}

BoundaryCondition::Kind RunConfig::bc_kind() const {
  if (bc) return *bc;
  switch (test_case) {
    case CaseKind::HallPeriodic:
      return BoundaryCondition::Kind::PeriodicNone;
    case CaseKind::HallOutflow:
      return BoundaryCondition::Kind::HallOutflow;
    default:
      return BoundaryCondition::Kind::LinearInflow;
  }
}

bool RunConfig::hall_enabled() const { return hall.value_or(test().hall_enabled()); }

double RunConfig::final_time() const { return T.value_or(test().final_time); }

GridSpec RunConfig::grid_spec() const {
  const TestCase tc = test();
  GridSpec s;
  s.order = order;
  s.lo = tc.lo;
  s.hi = tc.hi;
  s.periodic = {tc.periodic, tc.periodic, tc.periodic};
  if (test_case == CaseKind::DivergenceBound) {
    // Transverse directions carry no variation; use the smallest admissible line.
    const std::size_t nt = SbpOperator::min_nodes(order);
    s.n = {N, nt, nt};
  } else {
    s.n = {N, N, N};
  }
  return s;
}

void RunConfig::validate() const {
  if (order != 2 && order != 4 && order != 6) throw std::invalid_argument("order must be 2, 4 or 6");
  if (!(cfl > 0.0)) throw std::invalid_argument("cfl must be positive");
  if (stride == 0) throw std::invalid_argument("stride must be at least 1");
  if (T && !(*T >= 0.0)) throw std::invalid_argument("final time must be non-negative");
  divclean.validate();
  const TestCase tc = test();
  const auto k = bc_kind();
  if (k == BoundaryCondition::Kind::HallOutflow && !hall_enabled()) {
    throw std::invalid_argument("outflow boundary condition requires hall = true");
  }
  if (k == BoundaryCondition::Kind::PeriodicNone && !tc.periodic) {
    throw std::invalid_argument("case " + to_string(test_case) + " is not periodic");
  }
  if (k != BoundaryCondition::Kind::PeriodicNone && tc.periodic) {
    throw std::invalid_argument("case " + to_string(test_case) + " is periodic and takes no boundary condition");
  }
  if (k == BoundaryCondition::Kind::LinearInflow && !tc.has_exact_solution()) {
    throw std::invalid_argument("case " + to_string(test_case) + " has no inflow boundary data");
  }
  if (tc.periodic && (divclean.method == CleanMethod::WsDirichlet0 || divclean.method == CleanMethod::NsDirichlet0)) {
    throw std::invalid_argument("Dirichlet cleaning needs a non-periodic domain");
  }
}

namespace {

VectorField sample_initial(const Grid& grid, const TestCase& tc) {
  FunctionProvider p([&tc](double, const Vec3& x) { return tc.initial(x); }, true);
  VectorField b(grid.size());
  p.sample(grid, 0.0, b);
  return b;
}

BoundaryCondition make_bc(const RunConfig& cfg, const TestCase& tc) {
  switch (cfg.bc_kind()) {
    case BoundaryCondition::Kind::LinearInflow:
      return BoundaryCondition::linear_inflow(tc.boundary_data());
    case BoundaryCondition::Kind::HallOutflow:
      return BoundaryCondition::hall_outflow(cfg.outflow_u_full);
    case BoundaryCondition::Kind::PeriodicNone:
      break;
  }
  return BoundaryCondition::periodic_none();
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

RunResult run_simulation(const RunConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const TestCase tc = cfg.test();
  auto grid = std::make_shared<const Grid>(cfg.grid_spec());
  const double t_final = cfg.final_time();

  RunResult res;
  res.grid = grid;
  res.b = sample_initial(*grid, tc);

  HallParams hall = cfg.hall_enabled() ? HallParams::uniform(*grid, 1.0) : HallParams::disabled();
  InductionRhs rhs_op(*grid, cfg.forms, make_bc(cfg, tc), std::move(hall), tc.velocity());
  const std::function<void(double, const VectorField&, VectorField&)> f = [&rhs_op](double t, const VectorField& y,
                                                                                     VectorField& out) {
    rhs_op(t, y, out);
  };

  StepControl ctrl;
  ctrl.cfl = cfg.cfl;
  ctrl.hall_mode = cfg.hall_enabled();
  ctrl.n_nodes = cfg.N;
  const LsrkScheme& scheme = LsrkScheme::carpenter_kennedy_54();

  auto record = [&](double t) {
    res.series.push_back({t, energy(*grid, res.b), norm_m(*grid, divergence(*grid, res.b))});
  };

  VectorField k(grid->size());
  VectorField work(grid->size());
  double t = 0.0;
  record(t);
  while (t < t_final) {
    const double remaining = t_final - t;
    const DtResult dt = compute_dt(ctrl, *grid, rhs_op.velocity(t), remaining);
    res.degenerate_dt = res.degenerate_dt || dt.degenerate_velocity;
    const bool last = dt.dt >= remaining;
    k.fill(0.0);
    try {
      lsrk_step(scheme, f, t, dt.dt, res.b, k, work);
    } catch (const NonFiniteState&) {
      res.blew_up = true;
      res.series.push_back({t + dt.dt, kNaN, kNaN});
      break;
    }
    t = last ? t_final : t + dt.dt;
    ++res.steps;
    if (cfg.divclean.method != CleanMethod::None) {
      auto [cleaned, st] = clean(*grid, cfg.divclean, res.b);
      res.b = std::move(cleaned);
      res.clean.calls += 1;
      res.clean.skipped += st.skipped ? 1 : 0;
      res.clean.total_iterations += static_cast<std::size_t>(st.iterations);
      res.clean.not_converged += st.converged ? 0 : 1;
      res.clean.breakdowns += st.breakdown ? 1 : 0;
      for (double mc : st.mass_change) res.clean.max_mass_change = std::max(res.clean.max_mass_change, std::abs(mc));
      res.clean.max_energy_increase = std::max(res.clean.max_energy_increase, st.energy_change());
    }
    if (res.steps % cfg.stride == 0 || t >= t_final) record(t);
  }
  res.t_end = t;
  if (res.blew_up) {
    res.b.fill(kNaN);
  }
  res.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

ErrorNorms compute_errors(const Grid& grid, const VectorField& b, double t, const TestCase& tc) {
  check_shape(grid, b, "compute_errors");
  ErrorNorms e;
  if (!b.all_finite()) return {kNaN, kNaN};
  e.eps_div = norm_m(grid, divergence(grid, b));
  if (!tc.has_exact_solution()) {
    e.eps_b = kNaN;
    return e;
  }
  VectorField exact(grid.size());
  tc.exact_field()->sample(grid, t, exact);
  axpy(-1.0, b, exact);
  e.eps_b = norm_m(grid, exact);
  return e;
}

double eoc(double eps_coarse, double eps_fine, double n_coarse, double n_fine) {
  return std::log(eps_coarse / eps_fine) / std::log(n_fine / n_coarse);
}

ConvergenceReport run_convergence(const RunConfig& base, const std::vector<std::size_t>& n_list) {
  ConvergenceReport rep;
  for (std::size_t n : n_list) {
    RunConfig c = base;
    c.N = n;
    const RunResult r = run_simulation(c);
    const ErrorNorms e = compute_errors(*r.grid, r.b, r.t_end, c.test());
    ConvergenceRow row;
    row.N = n;
    row.eps_b = r.blew_up ? kNaN : e.eps_b;
    row.eps_div = r.blew_up ? kNaN : e.eps_div;
    row.runtime_s = r.runtime_s;
    if (!rep.rows.empty()) {
      const ConvergenceRow& prev = rep.rows.back();
      const auto dn = static_cast<double>(n);
      const auto dp = static_cast<double>(prev.N);
      row.eoc_b = eoc(prev.eps_b, row.eps_b, dp, dn);
      row.eoc_div = eoc(prev.eps_div, row.eps_div, dp, dn);
    }
    rep.rows.push_back(row);
  }
  return rep;
}

CflScanResult run_cfl_scan(const RunConfig& cfg, const std::vector<double>& cfl_list) {
  CflScanResult out;
  std::vector<double> sorted = cfl_list;
  std::sort(sorted.begin(), sorted.end());
  bool all_stable_so_far = true;
  for (double cfl : sorted) {
    RunConfig c = cfg;
    c.cfl = cfl;
    c.divclean.method = cfg.divclean.method;
    const RunResult r = run_simulation(c);
    out.rows.push_back({cfl, !r.blew_up});
    if (r.blew_up) all_stable_so_far = false;
    if (!r.blew_up && all_stable_so_far) out.max_stable = cfl;
  }
  return out;
}

std::vector<CleanStudyRow> run_clean_study(const RunConfig& cfg, const std::vector<CleanMethod>& methods) {
  std::vector<CleanStudyRow> rows;
  for (CleanMethod m : methods) {
    RunConfig c = cfg;
    c.divclean.method = m;
    const RunResult r = run_simulation(c);
    const ErrorNorms e = compute_errors(*r.grid, r.b, r.t_end, c.test());
    CleanStudyRow row;
    row.forms = c.forms;
    row.method = m;
    row.energy = r.blew_up ? kNaN : energy(*r.grid, r.b);
    row.eps_b = e.eps_b;
    row.eps_div = e.eps_div;
    rows.push_back(row);
  }
  return rows;
}

namespace {

class PrecisionGuard {
 public:
  explicit PrecisionGuard(std::ostream& os) : os_(os), old_(os.precision(std::numeric_limits<double>::max_digits10)) {}
  ~PrecisionGuard() { os_.precision(old_); }

 private:
  std::ostream& os_;
  std::streamsize old_;
};

void put(std::ostream& os, const std::optional<double>& v) {
  if (v) os << *v;
}

}  // namespace

void write_convergence_csv(std::ostream& os, const ConvergenceReport& r) {
  PrecisionGuard g(os);
  os << "N,eps_B,eoc_B,eps_divB,eoc_divB,runtime_s\n";
  for (const auto& row : r.rows) {
    os << row.N << ',' << row.eps_b << ',';
    put(os, row.eoc_b);
    os << ',' << row.eps_div << ',';
    put(os, row.eoc_div);
    os << ',' << row.runtime_s << '\n';
  }
}

void write_series_csv(std::ostream& os, const std::vector<SeriesPoint>& s) {
  PrecisionGuard g(os);
  os << "t,energy,div_norm\n";
  for (const auto& p : s) os << p.t << ',' << p.energy << ',' << p.div_norm << '\n';
}

void write_series_dat(std::ostream& os, const std::vector<SeriesPoint>& s, bool div_norm) {
  PrecisionGuard g(os);
  os << "# t " << (div_norm ? "div_norm" : "energy") << '\n';
  for (const auto& p : s) os << p.t << ' ' << (div_norm ? p.div_norm : p.energy) << '\n';
}

void write_clean_study_csv(std::ostream& os, const std::vector<CleanStudyRow>& rows) {
  PrecisionGuard g(os);
  os << "uiBj,source,ujBi,energy,eps_B,eps_divB,method\n";
  for (const auto& r : rows) {
    os << to_string(r.forms.uiBj) << ',' << to_string(r.forms.source) << ',' << to_string(r.forms.ujBi) << ','
       << r.energy << ',' << r.eps_b << ',' << r.eps_div << ',' << to_string(r.method) << '\n';
  }
}

void write_cfl_scan_csv(std::ostream& os, const CflScanResult& r) {
  PrecisionGuard g(os);
  os << "cfl,stable\n";
  for (const auto& row : r.rows) os << row.cfl << ',' << (row.stable ? 1 : 0) << '\n';
}

std::vector<SeriesPoint> read_series_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "t,energy,div_norm") {
    throw std::runtime_error("series CSV: unexpected header");
  }
  std::vector<SeriesPoint> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b, c;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    std::getline(ss, c, ',');
    out.push_back({std::stod(a), std::stod(b), std::stod(c)});
  }
  return out;
}

void emit_series(const std::string& dir, const std::vector<SeriesPoint>& s) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path p(dir);
  std::ofstream csv(p / "series.csv");
  write_series_csv(csv, s);
  std::ofstream e(p / "energy.dat");
  write_series_dat(e, s, false);
  std::ofstream d(p / "div_norm.dat");
  write_series_dat(d, s, true);
  if (!csv || !e || !d) throw std::runtime_error("could not write series files to " + dir);
}

}  // namespace induction
