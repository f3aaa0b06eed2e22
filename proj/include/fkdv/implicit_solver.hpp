#pragma once

#include <Eigen/Core>
#include <Eigen/LU>

#include <memory>
#include <stdexcept>

#include "fkdv/fractional_laplacian.hpp"
#include "fkdv/grid.hpp"

namespace fkdv {

enum class SolverBackend { circulant_spectral, dense_lu, iterative };

struct SolverError : std::runtime_error {
  SolverError(const std::string& what, double residual_estimate)
      : std::runtime_error(what), residual(residual_estimate) {}
  double residual{0.0};
};

/// Linear system (I + theta * L * D) w = rhs shared by both implicit schemes
/// (theta = dt for Euler implicit, dt/2 for Crank-Nicolson). L*D is
/// skew-symmetric on periodic grids, so <M w, w> = ||w||^2 and every Fourier
/// symbol value has modulus >= 1; the solve never expands the norm.
/// Immutable after build; solves are pure and thread-safe.
struct DispersiveSystem {
  FracLapOp op;
  double theta{0.0};
  SolverBackend backend{SolverBackend::circulant_spectral};
  double tol{1e-12};

  Eigen::ArrayXcd symbol;  // spectral backend: sigma_m = 1 + theta * (L D)_m
  std::shared_ptr<const Eigen::PartialPivLU<Eigen::MatrixXd>> lu;
};

SolverBackend default_backend(BoundaryMode mode);

/// theta may take any finite value (theta = 0 degenerates to the identity;
/// negative theta runs the time-reversed solve).
DispersiveSystem build_system(const FracLapOp& op, double theta, SolverBackend backend,
                              double tol = 1e-12);

GridFn solve(const DispersiveSystem& system, const GridFn& rhs);

/// || (I + theta L D) w - rhs ||, one extra operator application.
double residual_norm(const DispersiveSystem& system, const GridFn& w, const GridFn& rhs);

Eigen::MatrixXd dense_system_matrix(const FracLapOp& op, double theta);

}  // namespace fkdv
