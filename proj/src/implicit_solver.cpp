#include "fkdv/implicit_solver.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "fkdv/fft.hpp"

namespace fkdv {
namespace {

GridFn system_apply(const DispersiveSystem& system, const GridFn& w) {
  GridFn out = apply_dispersive(system.op, w);
  out.values = w.values + system.theta * out.values;
  return out;
}

// Full GMRES on the dispersive system; residual-minimizing by construction.
GridFn gmres_solve(const DispersiveSystem& system, const GridFn& rhs) {
  const int n = system.op.grid.n;
  const double rhs_norm = norm_l2(rhs);
  if (rhs_norm == 0.0) return zero_fn(rhs.grid);

  // full GMRES: at k = n the Krylov space is exact, so convergence is
  // guaranteed in exact arithmetic even for stiff theta
  const int max_iters = n;
  std::vector<Eigen::ArrayXd> basis;
  basis.reserve(max_iters + 1);

  // residual of the zero initial guess is just rhs
  basis.push_back(rhs.values / rhs.values.matrix().norm());
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(max_iters + 1, max_iters);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(max_iters + 1);
  g[0] = rhs.values.matrix().norm();
  std::vector<double> cs(max_iters), sn(max_iters);

  int k = 0;
  double rel_res = 1.0;
  for (; k < max_iters; ++k) {
    GridFn v = system_apply(system, GridFn{rhs.grid, basis[k]});
    Eigen::ArrayXd w = v.values;
    for (int i = 0; i <= k; ++i) {
      hess(i, k) = (w * basis[i]).sum();
      w -= hess(i, k) * basis[i];
    }
    const double subdiag = w.matrix().norm();
    hess(k + 1, k) = subdiag;
    if (subdiag > 0.0) basis.push_back(w / subdiag);

    // apply stored Givens rotations, then form the new one
    for (int i = 0; i < k; ++i) {
      const double t = cs[i] * hess(i, k) + sn[i] * hess(i + 1, k);
      hess(i + 1, k) = -sn[i] * hess(i, k) + cs[i] * hess(i + 1, k);
      hess(i, k) = t;
    }
    const double denom = std::hypot(hess(k, k), hess(k + 1, k));
    cs[k] = hess(k, k) / denom;
    sn[k] = hess(k + 1, k) / denom;
    hess(k, k) = denom;
    hess(k + 1, k) = 0.0;
    g[k + 1] = -sn[k] * g[k];
    g[k] = cs[k] * g[k];

    // basis vectors are Euclidean-orthonormal; rescale to the dx-weighted norm
    rel_res = std::abs(g[k + 1]) * std::sqrt(rhs.grid.dx) / rhs_norm;
    if (rel_res <= system.tol || subdiag == 0.0) {
      ++k;
      break;
    }
  }

  Eigen::VectorXd y = hess.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
  Eigen::ArrayXd x = Eigen::ArrayXd::Zero(n);
  for (int i = 0; i < k; ++i) x += y[i] * basis[i];
  GridFn w{rhs.grid, std::move(x)};

  const double res = residual_norm(system, w, rhs);
  if (res > system.tol * rhs_norm * 10.0)
    throw SolverError("iterative dispersive solve stalled: relative residual " +
                          std::to_string(res / rhs_norm) + " after " + std::to_string(k) +
                          " iterations",
                      res);
  return w;
}

}  // namespace

SolverBackend default_backend(BoundaryMode mode) {
  return mode == BoundaryMode::periodic ? SolverBackend::circulant_spectral
                                        : SolverBackend::dense_lu;
}

DispersiveSystem build_system(const FracLapOp& op, double theta, SolverBackend backend,
                              double tol) {
  if (!std::isfinite(theta)) throw std::invalid_argument("build_system: theta must be finite");
  if (!(tol > 0.0)) throw std::invalid_argument("build_system: tolerance must be positive");
  DispersiveSystem system;
  system.op = op;
  system.theta = theta;
  system.backend = backend;
  system.tol = tol;
  switch (backend) {
    case SolverBackend::circulant_spectral: {
      if (op.grid.mode != BoundaryMode::periodic)
        throw std::invalid_argument(
            "build_system: circulant_spectral needs a periodic grid (no circulant structure on "
            "truncated grids); use dense_lu or iterative");
      system.symbol = 1.0 + theta * op.dispersive_symbol;
      break;
    }
    case SolverBackend::dense_lu: {
      Eigen::MatrixXd m = dense_system_matrix(op, theta);
      system.lu = std::make_shared<Eigen::PartialPivLU<Eigen::MatrixXd>>(std::move(m));
      break;
    }
    case SolverBackend::iterative:
      break;
  }
  return system;
}

GridFn solve(const DispersiveSystem& system, const GridFn& rhs) {
  if (!(rhs.grid == system.op.grid))
    throw std::invalid_argument("solve: right-hand side on a different grid");
  switch (system.backend) {
    case SolverBackend::circulant_spectral: {
      Eigen::ArrayXcd spec = fft::forward_real(rhs.values);
      spec /= system.symbol;
      fft::inverse_inplace(spec);
      return GridFn{rhs.grid, spec.real()};
    }
    case SolverBackend::dense_lu: {
      Eigen::VectorXd w = system.lu->solve(rhs.values.matrix());
      return GridFn{rhs.grid, w.array()};
    }
    case SolverBackend::iterative:
      return gmres_solve(system, rhs);
  }
  throw std::logic_error("solve: unknown backend");
}

double residual_norm(const DispersiveSystem& system, const GridFn& w, const GridFn& rhs) {
  GridFn mw = apply_dispersive(system.op, w);
  mw.values = w.values + system.theta * mw.values - rhs.values;
  return norm_l2(mw);
}

Eigen::MatrixXd dense_system_matrix(const FracLapOp& op, double theta) {
  const int n = op.grid.n;
  return Eigen::MatrixXd::Identity(n, n) + theta * dense_dispersive_matrix(op);
}

}  // namespace fkdv
