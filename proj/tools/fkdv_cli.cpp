// Command-line driver: single runs, convergence studies, operator
// consistency studies and invariant time series for the fractional KdV
// solver. Exit codes: 0 success, 1 validation error, 2 numerical failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "fkdv/config.hpp"
#include "fkdv/experiment.hpp"
#include "fkdv/grid.hpp"
#include "fkdv/reference_solutions.hpp"
#include "fkdv/time_steppers.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string preset = "bo";
  std::string scheme = "cn";
  std::optional<double> alpha;
  std::vector<double> alphas;
  int n = 256;
  std::string ns = "";
  std::optional<double> domain_a, domain_b;
  std::string mode = "periodic";
  std::optional<double> t_final;
  std::string dt_policy = "practical";
  double dt = 0.0;
  double delta = 0.5;
  double cfl_L = 0.5;
  double fp_tol = 1e-12;
  int fp_max_iters = 500;
  double solver_tol = 1e-12;
  std::string solver_backend = "auto";
  int n_ref = 8000;
  int snapshot_stride = 0;
  std::string output_dir = ".";
};

fkdv::Scheme parse_scheme(const std::string& s) {
  if (s == "ei") return fkdv::Scheme::euler_implicit;
  if (s == "cn") return fkdv::Scheme::crank_nicolson;
  if (s == "split") return fkdv::Scheme::operator_split;
  throw std::invalid_argument("unknown scheme '" + s + "' (known: ei, cn, split)");
}

fkdv::DtPolicy parse_dt_policy(const std::string& s) {
  if (s == "practical") return fkdv::DtPolicy::practical;
  if (s == "euler_cfl") return fkdv::DtPolicy::euler_cfl;
  if (s == "cn_cfl") return fkdv::DtPolicy::cn_cfl;
  if (s == "explicit_value") return fkdv::DtPolicy::explicit_value;
  throw std::invalid_argument("unknown dt_policy '" + s +
                              "' (known: practical, euler_cfl, cn_cfl, explicit_value)");
}

fkdv::BoundaryMode parse_mode(const std::string& s) {
  if (s == "periodic") return fkdv::BoundaryMode::periodic;
  if (s == "truncated") return fkdv::BoundaryMode::truncated;
  throw std::invalid_argument("unknown mode '" + s + "' (known: periodic, truncated)");
}

std::optional<fkdv::SolverBackend> parse_backend(const std::string& s) {
  if (s == "auto") return std::nullopt;
  if (s == "circulant_spectral") return fkdv::SolverBackend::circulant_spectral;
  if (s == "dense_lu") return fkdv::SolverBackend::dense_lu;
  if (s == "iterative") return fkdv::SolverBackend::iterative;
  throw std::invalid_argument("unknown solver_backend '" + s +
                              "' (known: auto, circulant_spectral, dense_lu, iterative)");
}

// Config entries act as defaults; flags given on the command line win.
void apply_config_file(Options& opt, const CLI::App* cmd) {
  if (opt.config_path.empty()) return;
  const auto entries = fkdv::parse_config_file(opt.config_path);
  fkdv::reject_unknown_keys(entries);
  auto get = [&](const char* key) -> std::optional<std::string> {
    if (cmd->count(std::string("--") + key) > 0) return std::nullopt;
    auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    return it->second;
  };
  if (auto v = get("preset")) opt.preset = *v;
  if (auto v = get("scheme")) opt.scheme = *v;
  if (auto v = get("alpha")) opt.alpha = std::stod(*v);
  if (auto v = get("N")) opt.n = std::stoi(*v);
  if (auto v = get("Ns")) opt.ns = *v;
  if (auto v = get("domain_a")) opt.domain_a = std::stod(*v);
  if (auto v = get("domain_b")) opt.domain_b = std::stod(*v);
  if (auto v = get("mode")) opt.mode = *v;
  if (auto v = get("T")) opt.t_final = std::stod(*v);
  if (auto v = get("dt_policy")) opt.dt_policy = *v;
  if (auto v = get("dt")) opt.dt = std::stod(*v);
  if (auto v = get("delta")) opt.delta = std::stod(*v);
  if (auto v = get("L")) opt.cfl_L = std::stod(*v);
  if (auto v = get("fp_tol")) opt.fp_tol = std::stod(*v);
  if (auto v = get("fp_max_iters")) opt.fp_max_iters = std::stoi(*v);
  if (auto v = get("solver_tol")) opt.solver_tol = std::stod(*v);
  if (auto v = get("solver_backend")) opt.solver_backend = *v;
  if (auto v = get("N_ref")) opt.n_ref = std::stoi(*v);
  if (auto v = get("snapshot_stride")) opt.snapshot_stride = std::stoi(*v);
  if (auto v = get("output_dir")) opt.output_dir = *v;
}

fkdv::SchemeConfig scheme_config(const Options& opt, const fkdv::ExperimentPreset& preset) {
  fkdv::SchemeConfig cfg;
  cfg.alpha = opt.alpha.value_or(preset.alpha);
  cfg.scheme = parse_scheme(opt.scheme);
  cfg.dt_policy = parse_dt_policy(opt.dt_policy);
  cfg.dt_value = opt.dt;
  cfg.delta = opt.delta;
  cfg.cfl_L = opt.cfl_L;
  cfg.fp_tol = opt.fp_tol;
  cfg.fp_max_iters = opt.fp_max_iters;
  cfg.solver_tol = opt.solver_tol;
  cfg.backend = parse_backend(opt.solver_backend);
  return cfg;
}

fkdv::ExperimentPreset configured_preset(const Options& opt) {
  fkdv::ExperimentPreset preset = fkdv::preset_from_name(opt.preset);
  if (opt.alpha) preset.alpha = *opt.alpha;
  if (opt.domain_a) preset.a = *opt.domain_a;
  if (opt.domain_b) preset.b = *opt.domain_b;
  if (opt.t_final) preset.t_final = *opt.t_final;
  return preset;
}

std::ofstream open_output(const Options& opt, const std::string& filename) {
  std::filesystem::create_directories(opt.output_dir);
  const auto path = std::filesystem::path(opt.output_dir) / filename;
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write to " + path.string());
  return out;
}

std::string time_tag(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", t);
  return buf;
}

int cmd_run(const Options& opt) {
  const fkdv::ExperimentPreset preset = configured_preset(opt);
  const fkdv::SchemeConfig cfg = scheme_config(opt, preset);
  const fkdv::Grid grid = fkdv::build_grid(preset.a, preset.b, opt.n, parse_mode(opt.mode));
  std::string warning;
  const fkdv::GridFn u0 = fkdv::make_initial(preset, grid, &warning);
  if (!warning.empty()) std::cerr << "warning: " << warning << '\n';

  const fkdv::Trajectory traj = fkdv::evolve(u0, preset.t_final, cfg, opt.snapshot_stride);
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    std::ofstream out = open_output(opt, "u_t" + time_tag(traj.times[i]) + ".csv");
    out << "x,u\n";
    const fkdv::GridFn& u = traj.snapshots[i];
    char line[80];
    for (int j = 0; j < u.grid.n; ++j) {
      std::snprintf(line, sizeof(line), "%.10e,%.10e\n", u.grid.node(j), u.values[j]);
      out << line;
    }
  }
  if (fkdv::has_exact_solution(preset)) {
    const fkdv::GridFn u_ref = fkdv::sample(
        grid, [&](double x) { return fkdv::exact_solution(preset, x, preset.t_final); });
    std::cout << "relative_l2_error=" << fkdv::relative_l2_error(traj.snapshots.back(), u_ref)
              << '\n';
  }
  std::cout << "steps=" << traj.reports.size() << " snapshots=" << traj.snapshots.size()
            << " T=" << traj.times.back() << '\n';
  return 0;
}

int cmd_convergence(const Options& opt) {
  const fkdv::ExperimentPreset base = configured_preset(opt);
  std::vector<double> alphas = opt.alphas;
  if (alphas.empty()) alphas.push_back(opt.alpha.value_or(base.alpha));

  std::ofstream out = open_output(opt, "convergence.csv");
  bool first = true;
  for (double alpha : alphas) {
    fkdv::StudyConfig study;
    study.preset = base;
    study.preset.alpha = alpha;
    study.scheme = scheme_config(opt, study.preset);
    study.scheme.alpha = alpha;
    study.ns = fkdv::parse_int_list(opt.ns.empty() ? "64,128,256,512" : opt.ns);
    study.mode = parse_mode(opt.mode);
    study.n_ref = opt.n_ref;
    const fkdv::ConvergenceReport report = fkdv::run_convergence(study);
    if (first) {
      fkdv::write_convergence_csv(report, out);
      first = false;
    } else {
      std::ostringstream buf;
      fkdv::write_convergence_csv(report, buf);
      const std::string text = buf.str();
      out << text.substr(text.find('\n') + 1);  // skip the repeated header
    }
    fkdv::print_convergence_table(report, std::cout);
  }
  return 0;
}

int cmd_consistency(const Options& opt) {
  const double a = opt.domain_a.value_or(-20.0);
  const double b = opt.domain_b.value_or(20.0);
  const double alpha = opt.alpha.value_or(1.5);
  const auto ns = fkdv::parse_int_list(opt.ns.empty() ? "128,256,512,1024" : opt.ns);
  // zero extension off the window matches the compactly supported test
  // function, so the truncated closure is the default here
  const fkdv::BoundaryMode mode =
      opt.mode == "periodic" ? fkdv::BoundaryMode::periodic : fkdv::BoundaryMode::truncated;
  const fkdv::ConsistencyReport report = fkdv::run_consistency(ns, alpha, a, b, mode);
  std::ofstream out = open_output(opt, "consistency.csv");
  fkdv::write_consistency_csv(report, out);
  fkdv::write_consistency_csv(report, std::cout);
  return 0;
}

int cmd_invariants(const Options& opt) {
  const fkdv::ExperimentPreset preset = configured_preset(opt);
  const fkdv::SchemeConfig cfg = scheme_config(opt, preset);
  const fkdv::Grid grid = fkdv::build_grid(preset.a, preset.b, opt.n, parse_mode(opt.mode));
  const fkdv::GridFn u0 = fkdv::make_initial(preset, grid);
  const int stride = opt.snapshot_stride > 0 ? opt.snapshot_stride : 10;
  const fkdv::Trajectory traj = fkdv::evolve(u0, preset.t_final, cfg, stride);
  std::ofstream out = open_output(opt, "invariants.csv");
  fkdv::write_invariant_series_csv(traj, cfg.alpha, out);
  std::ostringstream echo;
  fkdv::write_invariant_series_csv(traj, cfg.alpha, echo);
  std::cout << echo.str();
  return 0;
}

void add_common_options(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config_path, "flat key = value configuration file");
  cmd->add_option("--preset", opt.preset, "experiment preset: bo, sine, kdv2, kdv2_ei");
  cmd->add_option("--scheme", opt.scheme, "time scheme: ei, cn, split");
  cmd->add_option("--alpha", opt.alpha, "fractional order in [1,2)");
  cmd->add_option("--N", opt.n, "node count for single runs");
  cmd->add_option("--Ns", opt.ns, "comma-separated node counts");
  cmd->add_option("--domain_a", opt.domain_a, "left endpoint");
  cmd->add_option("--domain_b", opt.domain_b, "right endpoint");
  cmd->add_option("--mode", opt.mode, "boundary mode: periodic, truncated");
  cmd->add_option("--T", opt.t_final, "final time");
  cmd->add_option("--dt_policy", opt.dt_policy,
                  "practical, euler_cfl, cn_cfl, explicit_value");
  cmd->add_option("--dt", opt.dt, "time step for dt_policy=explicit_value");
  cmd->add_option("--delta", opt.delta, "euler_cfl margin in (0,1)");
  cmd->add_option("--L", opt.cfl_L, "cn_cfl parameter in (0,1)");
  cmd->add_option("--fp_tol", opt.fp_tol, "fixed-point stopping tolerance");
  cmd->add_option("--fp_max_iters", opt.fp_max_iters, "fixed-point iteration cap");
  cmd->add_option("--solver_tol", opt.solver_tol, "linear solver tolerance");
  cmd->add_option("--solver_backend", opt.solver_backend,
                  "auto, circulant_spectral, dense_lu, iterative");
  cmd->add_option("--N_ref", opt.n_ref, "fine-grid reference resolution");
  cmd->add_option("--snapshot_stride", opt.snapshot_stride, "record every k-th step");
  cmd->add_option("--output_dir", opt.output_dir, "directory for CSV output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-difference solver for the fractional KdV equation"};
  app.require_subcommand(1);

  Options run_opt, conv_opt, cons_opt, inv_opt;
  CLI::App* run = app.add_subcommand("run", "single simulation with snapshot CSVs");
  add_common_options(run, run_opt);
  CLI::App* conv = app.add_subcommand("convergence", "grid-refinement study table");
  add_common_options(conv, conv_opt);
  conv->add_option("--alphas", conv_opt.alphas, "fractional orders to sweep")->delimiter(',');
  CLI::App* cons = app.add_subcommand("consistency",
                                      "discrete operator vs singular-integral quadrature");
  add_common_options(cons, cons_opt);
  CLI::App* inv = app.add_subcommand("invariants", "normalized invariant time series");
  add_common_options(inv, inv_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (run->parsed()) {
      apply_config_file(run_opt, run);
      return cmd_run(run_opt);
    }
    if (conv->parsed()) {
      apply_config_file(conv_opt, conv);
      return cmd_convergence(conv_opt);
    }
    if (cons->parsed()) {
      apply_config_file(cons_opt, cons);
      return cmd_consistency(cons_opt);
    }
    if (inv->parsed()) {
      apply_config_file(inv_opt, inv);
      return cmd_invariants(inv_opt);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
