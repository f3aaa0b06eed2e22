#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "fkdv/grid.hpp"

namespace fkdv {

struct QuadratureError : std::runtime_error {
  explicit QuadratureError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved(achieved_error) {}
  double achieved{0.0};
};

/// Adaptive-quadrature evaluation of the continuous operator
///
///   (c_alpha / 2) * INT (f(x+y) - 2 f(x) + f(x-y)) / |y|^{1+alpha} dy
///
/// for a twice continuously differentiable, decaying f. The integral is
/// split at |y| = 1. The inner singular part integrates the bounded second
/// quotient (f(x+y) - 2f(x) + f(x-y))/y^2 under the substitution
/// y = s^{2/(2-alpha)}, which removes the kernel singularity entirely; the
/// outer part integrates the decaying f(x+y) + f(x-y) piece over dyadic
/// blocks until a block falls below tol/10, while the constant -2 f(x) tail
/// is added in closed form.
/// Throws QuadratureError (carrying the achieved estimate) when the
/// requested tolerance cannot be met.
double continuous_fractional_laplacian(const std::function<double(double)>& f, double alpha,
                                       double x, double tol);

struct ConsistencyPoint {
  double dx{0.0};
  double l2_error{0.0};
};

/// Samples f on each grid, applies the discrete operator, and reports the
/// discrete L2 distance to the continuous operator at the nodes. f must be
/// smooth with its mass well inside every grid's interval.
std::vector<ConsistencyPoint> consistency_study(const std::function<double(double)>& f,
                                                const std::vector<Grid>& grids, double alpha,
                                                double quad_tol = 1e-8);

}  // namespace fkdv
