#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fkdv/fractional_laplacian.hpp"
#include "fkdv/grid.hpp"
#include "fkdv/implicit_solver.hpp"

namespace fkdv {

enum class Scheme { euler_implicit, crank_nicolson, operator_split };

/// Time-step selection rule. `practical` is the rule the experiments use,
/// dt = 0.5 dx / ||u0||_inf; the two CFL policies derive guaranteed-stable
/// steps from the scheme-level stability and solvability bounds.
enum class DtPolicy { practical, euler_cfl, cn_cfl, explicit_value };

struct SchemeConfig {
  double alpha{1.0};
  Scheme scheme{Scheme::crank_nicolson};
  DtPolicy dt_policy{DtPolicy::practical};
  double dt_value{0.0};   // used by explicit_value
  double delta{0.5};      // euler_cfl stability margin, in (0,1)
  double cfl_L{0.5};      // cn_cfl contraction parameter, in (0,1)
  double fp_tol{1e-12};   // fixed-point stop: ||w^{l+1} - w^l|| <= fp_tol
  int fp_max_iters{500};
  double solver_tol{1e-12};
  std::optional<SolverBackend> backend{};  // defaults by boundary mode
};

struct StepReport {
  double dt_used{0.0};
  int fp_iterations{0};  // 0 for the non-iterative schemes
  double l2_before{0.0};
  double l2_after{0.0};
  double solver_residual{0.0};
};

struct Trajectory {
  std::vector<double> times;
  std::vector<GridFn> snapshots;
  std::vector<StepReport> reports;
};

struct FixedPointError : std::runtime_error {
  FixedPointError(const std::string& what, int iterations, double last_increment)
      : std::runtime_error(what), iterations(iterations), last_increment(last_increment) {}
  int iterations{0};
  double last_increment{0.0};
};

/// Aborted evolution carrying whatever was computed before the failure.
struct EvolveError : std::runtime_error {
  EvolveError(const std::string& what, Trajectory partial)
      : std::runtime_error(what), partial(std::move(partial)) {}
  Trajectory partial;
};

double select_dt(const GridFn& u0, const SchemeConfig& cfg);

/// u' solves (I + dt L D) u' = bar(u) - dt * bar(u) .* D u.
std::pair<GridFn, StepReport> step_euler_implicit(const GridFn& u, double dt, const FracLapOp& op,
                                                  const DispersiveSystem& system);

/// Lax-Friedrichs half step for the convective part, then the implicit
/// dispersive solve; algebraically identical to the Euler implicit step.
std::pair<GridFn, StepReport> step_operator_split(const GridFn& u, double dt, const FracLapOp& op,
                                                  const DispersiveSystem& system);

/// Fixed-point iteration w^{l+1} solving
///   (I + dt/2 L D) w^{l+1} = u - dt G((u + w^l)/2) - dt/2 L D u,
/// with G(v) = tilde(v) .* D v, started from w^0 = u. Stops when the l2
/// increment drops below cfg.fp_tol; throws FixedPointError past
/// cfg.fp_max_iters (the step CFL bound is then violated - reduce dt).
/// `fp_increments`, when given, receives the increment norms per sweep.
std::pair<GridFn, StepReport> step_crank_nicolson(const GridFn& u, double dt, const FracLapOp& op,
                                                  const DispersiveSystem& system,
                                                  const SchemeConfig& cfg,
                                                  std::vector<double>* fp_increments = nullptr);

/// Advances u0 to time T with dt from the configured policy, shortening the
/// final step to land exactly on T. Snapshots are recorded at t = 0, every
/// `snapshot_stride` steps (stride <= 0 keeps none of the interior states),
/// and at T.
Trajectory evolve(const GridFn& u0, double T, const SchemeConfig& cfg, int snapshot_stride = 0);

}  // namespace fkdv
