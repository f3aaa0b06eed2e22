#include "fkdv/time_steppers.hpp"

#include <cmath>
#include <string>

namespace fkdv {
namespace {

double practical_dt(const GridFn& u0) {
  const double amp = norm_inf(u0);
  if (amp == 0.0)
    throw std::invalid_argument("select_dt: practical rule undefined for zero initial data");
  return 0.5 * u0.grid.dx / amp;
}

// largest lambda with  q/3 + q^2/2 = (1-delta)/2,  q = lambda * ||u0||
double euler_cfl_dt(const GridFn& u0, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("select_dt: delta must lie in (0,1)");
  const double nrm = norm_l2(u0);
  if (nrm == 0.0)
    throw std::invalid_argument("select_dt: euler_cfl rule undefined for zero initial data");
  // positive root of q^2/2 + q/3 = (1 - delta)/2
  const double q = (-1.0 + std::sqrt(1.0 + 9.0 * (1.0 - delta))) / 3.0;
  const double lambda = q / nrm;
  return lambda * std::pow(u0.grid.dx, 1.5);
}

double cn_cfl_dt(const GridFn& u0, double L) {
  if (!(L > 0.0 && L < 1.0)) throw std::invalid_argument("select_dt: L must lie in (0,1)");
  const double K = (6.0 - L) / (1.0 - L);
  const double h2 = norm_h2(u0);
  if (h2 == 0.0)
    throw std::invalid_argument("select_dt: cn_cfl rule undefined for zero initial data");
  return u0.grid.dx * L / (K * h2);
}

GridFn convective_term(const GridFn& u) {
  GridFn g = central_difference(u);
  g.values *= bar_average(u).values;
  return g;
}

}  // namespace

double select_dt(const GridFn& u0, const SchemeConfig& cfg) {
  switch (cfg.dt_policy) {
    case DtPolicy::practical: return practical_dt(u0);
    case DtPolicy::euler_cfl: return euler_cfl_dt(u0, cfg.delta);
    case DtPolicy::cn_cfl: return cn_cfl_dt(u0, cfg.cfl_L);
    case DtPolicy::explicit_value:
      if (!(cfg.dt_value > 0.0))
        throw std::invalid_argument("select_dt: explicit dt must be positive");
      return cfg.dt_value;
  }
  throw std::logic_error("select_dt: unknown policy");
}

std::pair<GridFn, StepReport> step_euler_implicit(const GridFn& u, double dt,
                                                  const FracLapOp& /*op*/,
                                                  const DispersiveSystem& system) {
  if (system.theta != dt)
    throw std::invalid_argument("step_euler_implicit: system built for theta != dt");
  GridFn rhs = bar_average(u);
  rhs.values -= dt * convective_term(u).values;
  GridFn next = solve(system, rhs);
  StepReport report;
  report.dt_used = dt;
  report.l2_before = norm_l2(u);
  report.l2_after = norm_l2(next);
  report.solver_residual = residual_norm(system, next, rhs);
  if (!all_finite(next)) throw SolverError("step_euler_implicit: non-finite state", 0.0);
  return {std::move(next), report};
}

std::pair<GridFn, StepReport> step_operator_split(const GridFn& u, double dt,
                                                  const FracLapOp& /*op*/,
                                                  const DispersiveSystem& system) {
  if (system.theta != dt)
    throw std::invalid_argument("step_operator_split: system built for theta != dt");
  // Lax-Friedrichs half step: bar(u) - dt/(4 dx) * (u_{j+1}^2 - u_{j-1}^2)
  const double coeff = dt / (4.0 * u.grid.dx);
  Eigen::ArrayXd sq = u.values.square();
  GridFn usq{u.grid, std::move(sq)};
  Eigen::ArrayXd half = bar_average(u).values -
                        coeff * (shift(usq, +1).values - shift(usq, -1).values);
  GridFn rhs{u.grid, std::move(half)};
  GridFn next = solve(system, rhs);
  StepReport report;
  report.dt_used = dt;
  report.l2_before = norm_l2(u);
  report.l2_after = norm_l2(next);
  report.solver_residual = residual_norm(system, next, rhs);
  if (!all_finite(next)) throw SolverError("step_operator_split: non-finite state", 0.0);
  return {std::move(next), report};
}

std::pair<GridFn, StepReport> step_crank_nicolson(const GridFn& u, double dt, const FracLapOp& op,
                                                  const DispersiveSystem& system,
                                                  const SchemeConfig& cfg,
                                                  std::vector<double>* fp_increments) {
  if (system.theta != 0.5 * dt)
    throw std::invalid_argument("step_crank_nicolson: system built for theta != dt/2");
  GridFn fixed_rhs = apply_dispersive(op, u);
  fixed_rhs.values = u.values - (0.5 * dt) * fixed_rhs.values;

  GridFn w = u;
  GridFn rhs = u;  // reused buffer
  StepReport report;
  report.dt_used = dt;
  report.l2_before = norm_l2(u);

  int iterations = 0;
  double increment = 0.0;
  while (true) {
    if (iterations >= cfg.fp_max_iters)
      throw FixedPointError(
          "step_crank_nicolson: fixed point did not contract within " +
              std::to_string(cfg.fp_max_iters) + " sweeps (last increment " +
              std::to_string(increment) + "); the step violates the contraction CFL bound - "
              "reduce dt",
          iterations, increment);
    GridFn mid{u.grid, 0.5 * (u.values + w.values)};
    GridFn g = central_difference(mid);
    g.values *= tilde_average(mid).values;
    rhs.values = fixed_rhs.values - dt * g.values;
    GridFn w_next = solve(system, rhs);
    ++iterations;
    increment = norm_l2(GridFn{u.grid, w_next.values - w.values});
    if (fp_increments) fp_increments->push_back(increment);
    w = std::move(w_next);
    if (increment <= cfg.fp_tol) break;
  }

  report.fp_iterations = iterations;
  report.l2_after = norm_l2(w);
  report.solver_residual = residual_norm(system, w, rhs);
  if (!all_finite(w)) throw SolverError("step_crank_nicolson: non-finite state", 0.0);
  return {std::move(w), report};
}

Trajectory evolve(const GridFn& u0, double T, const SchemeConfig& cfg, int snapshot_stride) {
  if (!(T > 0.0)) throw std::invalid_argument("evolve: final time must be positive");

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.snapshots.push_back(u0);

  // zero data stays zero under every scheme; skip the solver machinery
  if (norm_inf(u0) == 0.0 && cfg.dt_policy == DtPolicy::explicit_value) {
    const double dt = select_dt(u0, cfg);
    const int steps = static_cast<int>(std::ceil(T / dt));
    StepReport report;
    report.dt_used = dt;
    traj.reports.assign(steps, report);
    traj.times.push_back(T);
    traj.snapshots.push_back(u0);
    return traj;
  }

  const double dt = select_dt(u0, cfg);
  const SolverBackend backend = cfg.backend.value_or(default_backend(u0.grid.mode));
  const FracLapOp op = build_operator(u0.grid, cfg.alpha);
  const double theta_scale = (cfg.scheme == Scheme::crank_nicolson) ? 0.5 : 1.0;
  DispersiveSystem system = build_system(op, theta_scale * dt, backend, cfg.solver_tol);

  long long full_steps = static_cast<long long>(std::floor(T / dt + 1e-9));
  double dt_last = T - static_cast<double>(full_steps) * dt;
  if (dt_last <= 1e-9 * dt) dt_last = 0.0;
  if (full_steps == 0) dt_last = T;  // T below one step: take a single short step

  GridFn u = u0;
  double t = 0.0;
  long long step_index = 0;
  auto advance = [&](double step_dt, const DispersiveSystem& sys) {
    std::pair<GridFn, StepReport> result = [&] {
      switch (cfg.scheme) {
        case Scheme::euler_implicit: return step_euler_implicit(u, step_dt, op, sys);
        case Scheme::operator_split: return step_operator_split(u, step_dt, op, sys);
        case Scheme::crank_nicolson: return step_crank_nicolson(u, step_dt, op, sys, cfg);
      }
      throw std::logic_error("evolve: unknown scheme");
    }();
    u = std::move(result.first);
    t += step_dt;
    ++step_index;
    traj.reports.push_back(result.second);
    if (snapshot_stride > 0 && step_index % snapshot_stride == 0) {
      traj.times.push_back(t);
      traj.snapshots.push_back(u);
    }
  };

  try {
    for (long long s = 0; s < full_steps; ++s) advance(dt, system);
    if (dt_last > 0.0) {
      DispersiveSystem last_system =
          build_system(op, theta_scale * dt_last, backend, cfg.solver_tol);
      advance(dt_last, last_system);
    }
  } catch (const std::exception& e) {
    throw EvolveError(std::string("evolve aborted at t = ") + std::to_string(t) + ": " + e.what(),
                      std::move(traj));
  }

  if (traj.times.back() != t) {
    traj.times.push_back(t);
    traj.snapshots.push_back(u);
  }
  return traj;
}

}  // namespace fkdv
