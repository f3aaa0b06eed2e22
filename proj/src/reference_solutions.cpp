#include "fkdv/reference_solutions.hpp"

#include <cmath>

namespace fkdv {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace

ExperimentPreset preset_from_name(std::string_view name) {
  ExperimentPreset p;
  if (name == "bo") {
    p.name = "bo";
    p.kind = PresetKind::bo_soliton;
    p.alpha = 1.0;
    p.a = -15.0;
    p.b = 15.0;
    p.params = {{"c", 0.25}, {"L", 15.0}};
    p.t_init_offset = 0.0;
    p.t_final = 120.0;
    return p;
  }
  if (name == "sine") {
    p.name = "sine";
    p.kind = PresetKind::sine_fractional;
    p.alpha = 1.5;
    p.a = -4.0 * kPi;
    p.b = 4.0 * kPi;
    p.params = {{"amplitude", 0.5}};
    p.t_init_offset = 0.0;
    p.t_final = 5.0;
    return p;
  }
  if (name == "kdv2") {
    p.name = "kdv2";
    p.kind = PresetKind::kdv_two_soliton;
    p.alpha = 1.999;
    p.a = -90.0;
    p.b = 90.0;
    p.params = {{"c", 0.5}, {"d", 1.0}};
    p.t_init_offset = -20.0;
    p.t_final = 40.0;
    return p;
  }
  if (name == "kdv2_ei") {
    p = preset_from_name("kdv2");
    p.name = "kdv2_ei";
    p.t_init_offset = -10.0;
    p.t_final = 20.0;
    return p;
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) +
                              "' (known: bo, sine, kdv2, kdv2_ei)");
}

bool has_exact_solution(const ExperimentPreset& preset) {
  return preset.kind != PresetKind::sine_fractional;
}

double exact_solution(const ExperimentPreset& preset, double x, double t) {
  switch (preset.kind) {
    case PresetKind::bo_soliton:
      return bo_soliton<double>(x, t + preset.t_init_offset, preset.params.at("c"),
                                preset.params.at("L"));
    case PresetKind::sine_fractional:
      if (t != 0.0)
        throw std::invalid_argument("sine preset has no closed-form solution for t > 0");
      return preset.params.at("amplitude") * std::sin(x);
    case PresetKind::kdv_two_soliton:
      return kdv_two_soliton<double>(x, t + preset.t_init_offset, preset.params.at("c"),
                                     preset.params.at("d"));
  }
  throw std::logic_error("exact_solution: unknown preset kind");
}

GridFn make_initial(const ExperimentPreset& preset, const Grid& grid, std::string* warning) {
  GridFn u0 = sample(grid, [&](double x) { return exact_solution(preset, x, 0.0); });
  if (warning) {
    warning->clear();
    // decay check only where the reference solution lives on the whole line
    if (preset.kind == PresetKind::kdv_two_soliton) {
      const double edge = std::max(std::abs(u0.values[0]), std::abs(u0.values[grid.n - 1]));
      if (edge > 1e-6)
        *warning = "initial data does not decay at the domain ends (|u| = " +
                   std::to_string(edge) + " > 1e-06); enlarge the domain";
    }
  }
  return u0;
}

GridFn restrict_to(const GridFn& fine, const Grid& coarse) {
  const Grid& fg = fine.grid;
  if (fg.a != coarse.a || fg.b != coarse.b)
    throw std::invalid_argument("restrict_to: grids span different intervals");
  if (coarse.n <= 0 || fg.n % coarse.n != 0)
    throw std::invalid_argument("restrict_to: fine node count " + std::to_string(fg.n) +
                                " is not a multiple of coarse count " + std::to_string(coarse.n));
  const int stride = fg.n / coarse.n;
  Eigen::ArrayXd v(coarse.n);
  for (int j = 0; j < coarse.n; ++j) v[j] = fine.values[j * stride];
  return GridFn{coarse, std::move(v)};
}

GridFn fine_grid_reference(const ExperimentPreset& preset, const SchemeConfig& cfg, int n_ref,
                           const Grid& coarse) {
  if (coarse.n <= 0 || n_ref % coarse.n != 0)
    throw std::invalid_argument("fine_grid_reference: n_ref " + std::to_string(n_ref) +
                                " is not a multiple of the coarse node count " +
                                std::to_string(coarse.n));
  const Grid fine = build_grid(coarse.a, coarse.b, n_ref, coarse.mode);
  SchemeConfig ref_cfg = cfg;
  ref_cfg.scheme = Scheme::crank_nicolson;
  ref_cfg.alpha = preset.alpha;
  const GridFn u0 = make_initial(preset, fine);
  const Trajectory traj = evolve(u0, preset.t_final, ref_cfg, 0);
  return restrict_to(traj.snapshots.back(), coarse);
}

}  // namespace fkdv
