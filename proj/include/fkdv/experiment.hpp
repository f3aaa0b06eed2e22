#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fkdv/grid.hpp"
#include "fkdv/oracle.hpp"
#include "fkdv/reference_solutions.hpp"
#include "fkdv/time_steppers.hpp"

namespace fkdv {

/// Relative L2 distance ||u_num - u_ref|| / ||u_ref|| in the trapezoidal
/// norm (uniform weights on periodic grids, half weights at the ends of
/// truncated ones).
double relative_l2_error(const GridFn& u_num, const GridFn& u_ref);

double trapezoid_norm(const GridFn& u);

/// (ln e1 - ln e2) / (ln N2 - ln N1); requires positive errors and N2 > N1.
double convergence_rate(double e1, double e2, int n1, int n2);

std::string scheme_label(Scheme scheme);

struct StudyRow {
  int n{0};
  double dx{0.0};
  double dt{0.0};
  std::optional<double> error;
  std::optional<double> rate;
  std::optional<double> c1, c2, c3;
  std::optional<double> mean_fp_iters;
  double wall_s{0.0};
  std::string failure;  // non-empty when this resolution failed
};

struct ConvergenceReport {
  std::string scheme;
  double alpha{0.0};
  std::vector<StudyRow> rows;
};

struct StudyConfig {
  ExperimentPreset preset;
  SchemeConfig scheme;
  std::vector<int> ns;
  BoundaryMode mode{BoundaryMode::periodic};
  std::optional<double> t_final;  // overrides the preset's final time
  int n_ref{8000};                // fine-grid reference resolution (no closed form)
  /// Optional precomputed reference state on the n_ref grid, shared between
  /// studies over the same preset.
  std::shared_ptr<const GridFn> fine_reference;
};

/// One row per resolution: evolve, compare against the exact solution or the
/// fine-grid reference, attach invariant ratios, rates and iteration stats.
/// Failures are recorded in the row and the study continues. Deterministic.
ConvergenceReport run_convergence(const StudyConfig& config);

/// CSV with the fixed header
/// scheme,alpha,N,dx,dt,error,rate,C1,C2,C3,fp_iters,wall_s
void write_convergence_csv(const ConvergenceReport& report, std::ostream& out);

void print_convergence_table(const ConvergenceReport& report, std::ostream& out);

struct ConsistencyReport {
  double alpha{0.0};
  std::vector<int> ns;
  std::vector<ConsistencyPoint> points;
};

ConsistencyReport run_consistency(const std::vector<int>& ns, double alpha, double a, double b,
                                  BoundaryMode mode, double quad_tol = 1e-8);

/// CSV with header alpha,N,dx,error,order
void write_consistency_csv(const ConsistencyReport& report, std::ostream& out);

/// Time series of normalized invariants along a trajectory;
/// CSV header t,C1,C2,C3 (blank cells where a ratio is undefined).
void write_invariant_series_csv(const Trajectory& traj, double alpha, std::ostream& out);

}  // namespace fkdv
