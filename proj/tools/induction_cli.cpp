#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "induction/harness.hpp"

using namespace induction;

namespace {

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  nlohmann::json j;
  in >> j;
  return RunConfig::from_json(j);
}

template <class T, class Parse>
std::vector<T> split_list(const std::string& s, Parse parse) {
  std::vector<T> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse(item));
  }
  if (out.empty()) throw std::invalid_argument("empty list '" + s + "'");
  return out;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream os(std::filesystem::path(dir) / name);
  if (!os) throw std::runtime_error("cannot write " + name + " in " + dir);
  return os;
}

int cmd_sbp_check(int order, std::size_t n) {
  const double dx = 1.0 / static_cast<double>(n - 1);
  const SbpOperator op = SbpOperator::build(order, n, dx);
  std::cout << "order " << order << " n " << n << '\n';
  std::cout << std::scientific << std::setprecision(3);
  std::cout << "  identity residual max|MD + D^T M - E| = " << sbp_identity_residual(op) << '\n';
  std::cout << "  boundary weight m_0 / dx = " << op.boundary_weight() / dx << '\n';
  std::vector<double> ones(n, 1.0);
  const auto d1 = apply_d(op, ones);
  double worst = 0.0;
  for (double v : d1) worst = std::max(worst, std::abs(v));
  std::cout << "  max|D 1| = " << worst << '\n';
  return 0;
}

int cmd_run(const std::string& config) {
  const RunConfig cfg = load_config(config);
  const RunResult r = run_simulation(cfg);
  const ErrorNorms e = compute_errors(*r.grid, r.b, r.t_end, cfg.test());
  emit_series(cfg.outdir, r.series);
  nlohmann::json summary = cfg.to_json();
  summary["steps"] = r.steps;
  summary["t_end"] = r.t_end;
  summary["blew_up"] = r.blew_up;
  summary["energy"] = r.blew_up ? nlohmann::json(nullptr) : nlohmann::json(energy(*r.grid, r.b));
  summary["eps_B"] = std::isfinite(e.eps_b) ? nlohmann::json(e.eps_b) : nlohmann::json(nullptr);
  summary["eps_divB"] = std::isfinite(e.eps_div) ? nlohmann::json(e.eps_div) : nlohmann::json(nullptr);
  summary["runtime_s"] = r.runtime_s;
  summary["clean_calls"] = r.clean.calls;
  summary["clean_iterations"] = r.clean.total_iterations;
  open_out(cfg.outdir, "summary.json") << summary.dump(2) << '\n';
  if (!r.blew_up) {
    std::ofstream bin(std::filesystem::path(cfg.outdir) / "final_field.bin", std::ios::binary);
    write_binary(bin, *r.grid, r.b);
  }
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int cmd_converge(const std::string& config, const std::string& n_list) {
  const RunConfig cfg = load_config(config);
  const auto ns = split_list<std::size_t>(n_list, [](const std::string& s) { return std::stoul(s); });
  const ConvergenceReport rep = run_convergence(cfg, ns);
  auto os = open_out(cfg.outdir, "convergence.csv");
  write_convergence_csv(os, rep);
  write_convergence_csv(std::cout, rep);
  return 0;
}

int cmd_cfl_scan(const std::string& config, const std::string& grid) {
  const RunConfig cfg = load_config(config);
  const auto cfls = split_list<double>(grid, [](const std::string& s) { return std::stod(s); });
  const CflScanResult r = run_cfl_scan(cfg, cfls);
  auto os = open_out(cfg.outdir, "cfl_scan.csv");
  write_cfl_scan_csv(os, r);
  write_cfl_scan_csv(std::cout, r);
  if (r.max_stable) {
    std::cout << "max stable cfl: " << *r.max_stable << '\n';
  } else {
    std::cout << "max stable cfl: none\n";
  }
  return 0;
}

int cmd_clean_study(const std::string& config, const std::string& methods) {
  const RunConfig cfg = load_config(config);
  const auto ms = split_list<CleanMethod>(methods, [](const std::string& s) { return parse_clean_method(s); });
  const auto rows = run_clean_study(cfg, ms);
  auto os = open_out(cfg.outdir, "clean_study.csv");
  write_clean_study_csv(os, rows);
  write_clean_study_csv(std::cout, rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SBP finite-difference solver for the magnetic induction equation"};
  app.require_subcommand(1);

  int order = 4;
  std::size_t n = 32;
  auto* sbp = app.add_subcommand("sbp-check", "Print SBP identity residuals");
  sbp->add_option("--order", order, "Interior order (2, 4, 6)")->required();
  sbp->add_option("--n", n, "Node count")->required();

  std::string config;
  auto* run = app.add_subcommand("run", "Run one simulation");
  run->add_option("--config", config, "JSON configuration file")->required();

  std::string n_list;
  auto* conv = app.add_subcommand("converge", "Convergence sweep over N");
  conv->add_option("--config", config, "JSON configuration file")->required();
  conv->add_option("--n", n_list, "Comma-separated node counts")->required();

  std::string cfl_grid;
  auto* scan = app.add_subcommand("cfl-scan", "Find the largest stable CFL number");
  scan->add_option("--config", config, "JSON configuration file")->required();
  scan->add_option("--cfl-grid", cfl_grid, "Comma-separated CFL numbers")->required();

  std::string methods = "none,ws-ln,ws-d0,ns-d0";
  auto* study = app.add_subcommand("clean-study", "Compare divergence cleaning methods");
  study->add_option("--config", config, "JSON configuration file")->required();
  study->add_option("--methods", methods, "Comma-separated methods");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sbp) return cmd_sbp_check(order, n);
    if (*run) return cmd_run(config);
    if (*conv) return cmd_converge(config, n_list);
    if (*scan) return cmd_cfl_scan(config, cfl_grid);
    if (*study) return cmd_clean_study(config, methods);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
