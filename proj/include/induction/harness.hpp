#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "induction/analytic.hpp"
#include "induction/div_cleaning.hpp"
#include "induction/induction_rhs.hpp"
#include "induction/time_integration.hpp"

namespace induction {

struct RunConfig {
  CaseKind test_case = CaseKind::Rotation3D;
  int order = 4;
  std::size_t N = 40;
  FormSelection forms{};
  /// Unset means the natural condition of the case.
  std::optional<BoundaryCondition::Kind> bc;
  /// Unset means on for the Hall cases and off otherwise.
  std::optional<bool> hall;
  DivCleanConfig divclean{};
  double cfl = 0.95;
  /// Unset means the case's final time.
  std::optional<double> T;
  std::string outdir = ".";
  std::size_t stride = 10;
  bool outflow_u_full = false;
  double divbound_mode = 1.0;

  static RunConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  TestCase test() const;
  BoundaryCondition::Kind bc_kind() const;
  bool hall_enabled() const;
  double final_time() const;
  GridSpec grid_spec() const;
  void validate() const;
};

std::string to_string(BoundaryCondition::Kind k);
BoundaryCondition::Kind parse_bc_kind(const std::string& s);

struct SeriesPoint {
  double t = 0.0;
  double energy = 0.0;
  double div_norm = 0.0;
};

struct CleanSummary {
  std::size_t calls = 0;
  std::size_t skipped = 0;
  std::size_t total_iterations = 0;
  std::size_t not_converged = 0;
  std::size_t breakdowns = 0;
  double max_mass_change = 0.0;
  double max_energy_increase = 0.0;
};

struct RunResult {
  std::shared_ptr<const Grid> grid;
  VectorField b;
  std::vector<SeriesPoint> series;
  CleanSummary clean;
  bool blew_up = false;
  bool degenerate_dt = false;
  double t_end = 0.0;
  std::size_t steps = 0;
  double runtime_s = 0.0;
};

RunResult run_simulation(const RunConfig& cfg);

struct ErrorNorms {
  double eps_b = 0.0;
  double eps_div = 0.0;
};

/// eps_B = ||B - B_exact(t)||_M (NaN without an exact solution), eps_divB = ||div B||_M.
ErrorNorms compute_errors(const Grid& grid, const VectorField& b, double t, const TestCase& tc);

/// Experimental order of convergence between two resolutions.
double eoc(double eps_coarse, double eps_fine, double n_coarse, double n_fine);

struct ConvergenceRow {
  std::size_t N = 0;
  double eps_b = 0.0;
  std::optional<double> eoc_b;
  double eps_div = 0.0;
  std::optional<double> eoc_div;
  double runtime_s = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
};

ConvergenceReport run_convergence(const RunConfig& base, const std::vector<std::size_t>& n_list);

struct CflScanRow {
  double cfl = 0.0;
  bool stable = false;
};

struct CflScanResult {
  std::vector<CflScanRow> rows;
  /// Largest scanned CFL number below which every scanned value was stable.
  std::optional<double> max_stable;
};

CflScanResult run_cfl_scan(const RunConfig& cfg, const std::vector<double>& cfl_list);

struct CleanStudyRow {
  FormSelection forms;
  CleanMethod method = CleanMethod::None;
  double energy = 0.0;
  double eps_b = 0.0;
  double eps_div = 0.0;
};

std::vector<CleanStudyRow> run_clean_study(const RunConfig& cfg, const std::vector<CleanMethod>& methods);

void write_convergence_csv(std::ostream& os, const ConvergenceReport& r);
void write_series_csv(std::ostream& os, const std::vector<SeriesPoint>& s);
/// Two-column whitespace-separated data: t and the selected quantity.
void write_series_dat(std::ostream& os, const std::vector<SeriesPoint>& s, bool div_norm);
void write_clean_study_csv(std::ostream& os, const std::vector<CleanStudyRow>& rows);
void write_cfl_scan_csv(std::ostream& os, const CflScanResult& r);

std::vector<SeriesPoint> read_series_csv(std::istream& is);

/// Writes series.csv, energy.dat and div_norm.dat into dir (created if missing).
void emit_series(const std::string& dir, const std::vector<SeriesPoint>& s);

}  // namespace induction
