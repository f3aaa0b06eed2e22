#pragma once

#include <Eigen/Core>

#include "fkdv/grid.hpp"

namespace fkdv {

/// Discrete fractional Laplacian of order alpha in [1, 2). The operator acts
/// on grid functions as
///
///   (L u)_j = sum_{m != 0} w_m (u_{j+m} - u_j),
///   w_m = c_alpha * dx^{-alpha} * (1 - (-1)^m) / |m|^{1+alpha},
///
/// so only odd offsets carry weight. It approximates the negative-definite
/// fractional Laplacian (Fourier symbol -|xi|^alpha). On periodic grids the
/// operator acts on n-periodic data, which folds the lattice kernel into the
/// exact circulant with ring weights sum_{m == r (mod n)} w_m (image sums
/// evaluated through Hurwitz zeta tails); its eigenvalues are then exactly
/// the lattice symbol, which at alpha = 1 is -|xi| up to the Nyquist mode.
/// On truncated grids the grid function is extended by zero and the diagonal
/// keeps the full-lattice weight sum, so the operator is a symmetric
/// Toeplitz matrix plus a constant diagonal.
struct FracLapOp {
  Grid grid;
  double alpha{1.0};
  double c_alpha{0.0};

  /// kernel[r]: periodic -> ring weight at offset r (kernel[0] = 0);
  /// truncated -> lattice weight w_r for r = 0..n-1.
  Eigen::ArrayXd kernel;
  /// Per-node diagonal (constant vector in both closures).
  Eigen::ArrayXd diag;

  /// Periodic fast path: real circulant eigenvalues of the operator and the
  /// complex eigenvalues of the composite L*D (central difference).
  Eigen::ArrayXd symbol;
  Eigen::ArrayXcd dispersive_symbol;

  /// Truncated fast path: spectrum of the power-of-two circulant embedding
  /// of the off-diagonal Toeplitz part.
  Eigen::ArrayXcd embed_spectrum;
  int embed_n{0};
};

/// Normalizing constant of the 1-D fractional Laplacian,
/// c_alpha = Gamma(alpha+1) * sin(pi*alpha/2) / pi. Vanishes linearly as
/// alpha -> 2 and equals 1/pi at alpha = 1.
double normalizing_constant(double alpha);

/// sum over odd m >= 1 of m^{-s}  (= (1 - 2^{-s}) * zeta(s)), s > 1.
double odd_weight_sum(double s);

FracLapOp build_operator(const Grid& grid, double alpha);

/// Structured fast application (circular convolution / Toeplitz embedding).
GridFn apply(const FracLapOp& op, const GridFn& u);

/// O(N^2) reference path; kept permanently as the definition the fast path
/// is checked against.
GridFn apply_dense(const FracLapOp& op, const GridFn& u);

/// Composite dispersive operator L(D u) with D the central difference.
GridFn apply_dispersive(const FracLapOp& op, const GridFn& u);
GridFn apply_dispersive_dense(const FracLapOp& op, const GridFn& u);

/// Dense matrix of the operator (reference backend, eigen-structure checks).
Eigen::MatrixXd dense_matrix(const FracLapOp& op);

/// Dense matrix of the central difference on this grid.
Eigen::MatrixXd dense_difference_matrix(const Grid& grid);

/// Dense matrix of the composite L*D.
Eigen::MatrixXd dense_dispersive_matrix(const FracLapOp& op);

/// Periodic-mode diagnostic: total lattice weight sum_{|m| > N/2} w_m that
/// wraps around the ring, i.e. how strongly the closest images interact.
/// Constant in N for a fixed domain length.
double wrapped_image_mass(const FracLapOp& op);

/// ||u|| + ||D+ u|| + ||D+D- u|| + ||L D u||
double norm_h1alpha(const FracLapOp& op, const GridFn& u);

}  // namespace fkdv
