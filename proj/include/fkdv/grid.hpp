#pragma once

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace fkdv {

/// Boundary closure of the uniform mesh. Periodic wraps all index
/// arithmetic modulo N; truncated reads out-of-range neighbors as zero
/// (the grid function is extended by zero off the window).
enum class BoundaryMode { periodic, truncated };

/// Uniform 1-D mesh on [a, b) with N nodes, x_j = a + j*dx, dx = (b-a)/N.
struct Grid {
  double a{0.0};
  double b{1.0};
  int n{0};
  double dx{0.0};
  BoundaryMode mode{BoundaryMode::periodic};

  double node(int j) const { return a + j * dx; }

  Eigen::ArrayXd nodes() const {
    Eigen::ArrayXd x(n);
    for (int j = 0; j < n; ++j) x[j] = node(j);
    return x;
  }

  bool operator==(const Grid& other) const {
    return a == other.a && b == other.b && n == other.n && mode == other.mode;
  }
};

inline Grid build_grid(double a, double b, int n, BoundaryMode mode) {
  if (!(b > a))
    throw std::invalid_argument("build_grid: right endpoint must exceed left (a=" +
                                std::to_string(a) + ", b=" + std::to_string(b) + ")");
  if (n < 4)
    throw std::invalid_argument("build_grid: need at least 4 nodes, got " + std::to_string(n));
  Grid g;
  g.a = a;
  g.b = b;
  g.n = n;
  g.dx = (b - a) / n;
  g.mode = mode;
  return g;
}

/// Real-valued grid function: one value per node. Treated as an immutable
/// value; all operations below are pure and return fresh functions.
struct GridFn {
  Grid grid;
  Eigen::ArrayXd values;

  int size() const { return grid.n; }
};

inline GridFn make_grid_fn(const Grid& grid, Eigen::ArrayXd values) {
  if (static_cast<int>(values.size()) != grid.n)
    throw std::invalid_argument("make_grid_fn: value count " + std::to_string(values.size()) +
                                " does not match node count " + std::to_string(grid.n));
  return GridFn{grid, std::move(values)};
}

inline GridFn constant_fn(const Grid& grid, double value) {
  return GridFn{grid, Eigen::ArrayXd::Constant(grid.n, value)};
}

inline GridFn zero_fn(const Grid& grid) { return constant_fn(grid, 0.0); }

inline GridFn sample(const Grid& grid, const std::function<double(double)>& f) {
  Eigen::ArrayXd v(grid.n);
  for (int j = 0; j < grid.n; ++j) v[j] = f(grid.node(j));
  return GridFn{grid, std::move(v)};
}

inline bool all_finite(const GridFn& u) { return u.values.isFinite().all(); }

inline void require_same_grid(const GridFn& u, const GridFn& v, const char* where) {
  if (!(u.grid == v.grid))
    throw std::invalid_argument(std::string(where) + ": grid functions live on different grids");
}

/// Neighbor value at offset `off` from node j, resolved by boundary mode.
inline double neighbor(const GridFn& u, int j, int off) {
  int k = j + off;
  const int n = u.grid.n;
  if (u.grid.mode == BoundaryMode::periodic) {
    k %= n;
    if (k < 0) k += n;
    return u.values[k];
  }
  if (k < 0 || k >= n) return 0.0;
  return u.values[k];
}

enum class Stencil { dplus, dminus, dcentral, splus, sminus, bar_average, tilde_average };

inline GridFn forward_difference(const GridFn& u) {
  const double inv = 1.0 / u.grid.dx;
  Eigen::ArrayXd v(u.grid.n);
  for (int j = 0; j < u.grid.n; ++j) v[j] = (neighbor(u, j, +1) - u.values[j]) * inv;
  return GridFn{u.grid, std::move(v)};
}

inline GridFn backward_difference(const GridFn& u) {
  const double inv = 1.0 / u.grid.dx;
  Eigen::ArrayXd v(u.grid.n);
  for (int j = 0; j < u.grid.n; ++j) v[j] = (u.values[j] - neighbor(u, j, -1)) * inv;
  return GridFn{u.grid, std::move(v)};
}

inline GridFn central_difference(const GridFn& u) {
  const double inv = 0.5 / u.grid.dx;
  Eigen::ArrayXd v(u.grid.n);
  for (int j = 0; j < u.grid.n; ++j) v[j] = (neighbor(u, j, +1) - neighbor(u, j, -1)) * inv;
  return GridFn{u.grid, std::move(v)};
}

/// D+D- second difference, used by the h2 norm and CFL bookkeeping.
inline GridFn second_difference(const GridFn& u) {
  const double inv = 1.0 / (u.grid.dx * u.grid.dx);
  Eigen::ArrayXd v(u.grid.n);
  for (int j = 0; j < u.grid.n; ++j)
    v[j] = (neighbor(u, j, +1) - 2.0 * u.values[j] + neighbor(u, j, -1)) * inv;
  return GridFn{u.grid, std::move(v)};
}

inline GridFn shift(const GridFn& u, int off) {
  Eigen::ArrayXd v(u.grid.n);
  for (int j = 0; j < u.grid.n; ++j) v[j] = neighbor(u, j, off);
  return GridFn{u.grid, std::move(v)};
}

/// (v_{j+1} + v_{j-1}) / 2
inline GridFn bar_average(const GridFn& u) {
  Eigen::ArrayXd v(u.grid.n);
  for (int j = 0; j < u.grid.n; ++j) v[j] = 0.5 * (neighbor(u, j, +1) + neighbor(u, j, -1));
  return GridFn{u.grid, std::move(v)};
}

/// (v_{j+1} + v_j + v_{j-1}) / 3
inline GridFn tilde_average(const GridFn& u) {
  Eigen::ArrayXd v(u.grid.n);
  for (int j = 0; j < u.grid.n; ++j)
    v[j] = (neighbor(u, j, +1) + u.values[j] + neighbor(u, j, -1)) / 3.0;
  return GridFn{u.grid, std::move(v)};
}

inline GridFn apply_stencil(Stencil kind, const GridFn& u) {
  switch (kind) {
    case Stencil::dplus: return forward_difference(u);
    case Stencil::dminus: return backward_difference(u);
    case Stencil::dcentral: return central_difference(u);
    case Stencil::splus: return shift(u, +1);
    case Stencil::sminus: return shift(u, -1);
    case Stencil::bar_average: return bar_average(u);
    case Stencil::tilde_average: return tilde_average(u);
  }
  throw std::invalid_argument("apply_stencil: unknown stencil kind");
}

/// dx * sum_j u_j v_j
inline double inner(const GridFn& u, const GridFn& v) {
  require_same_grid(u, v, "inner");
  return u.grid.dx * (u.values * v.values).sum();
}

inline double norm_l2(const GridFn& u) {
  return std::sqrt(u.grid.dx) * std::sqrt(u.values.square().sum());
}

inline double norm_inf(const GridFn& u) {
  return u.grid.n == 0 ? 0.0 : u.values.abs().maxCoeff();
}

/// ||u|| + ||D+ u|| + ||D+D- u||
inline double norm_h2(const GridFn& u) {
  return norm_l2(u) + norm_l2(forward_difference(u)) + norm_l2(second_difference(u));
}

}  // namespace fkdv
