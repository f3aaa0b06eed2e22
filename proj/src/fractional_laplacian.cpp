#include "fkdv/fractional_laplacian.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "fkdv/fft.hpp"

namespace fkdv {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void require_alpha(double alpha) {
  if (!(alpha >= 1.0 && alpha < 2.0))
    throw std::invalid_argument("fractional order must lie in [1, 2), got " +
                                std::to_string(alpha));
}

// Hurwitz zeta(s, a) = sum_{k>=0} (a+k)^{-s} for s > 1, a in (0, 1], by
// Euler-Maclaurin with a short direct head.
double hurwitz_zeta(double s, double a) {
  constexpr int kHead = 16;
  double sum = 0.0;
  for (int k = 0; k < kHead; ++k) sum += std::pow(a + k, -s);
  const double t = a + kHead;
  const double inv = 1.0 / t;
  const double tp = std::pow(t, -s);
  sum += tp * t / (s - 1.0);
  sum += 0.5 * tp;
  sum += tp * inv * s / 12.0;
  sum -= tp * inv * inv * inv * s * (s + 1.0) * (s + 2.0) / 720.0;
  sum += tp * inv * inv * inv * inv * inv * s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) /
         30240.0;
  return sum;
}

// Total weight of all lattice offsets congruent to r modulo n (excluding 0):
// the exact circulant kernel of the lattice operator on n-periodic data.
// Odd offsets live in residue classes modulo 2n, so each direction
// contributes up to two Hurwitz tails.
double periodized_weight(int r, int n, double alpha, double scale) {
  const double s = 1.0 + alpha;
  const double m2 = 2.0 * n;
  double acc = 0.0;
  for (int rep : {r, r + n}) {          // positive offsets m = rep + 2n j
    if (rep % 2 == 1) acc += std::pow(m2, -s) * hurwitz_zeta(s, rep / m2);
  }
  for (int rep : {n - r, 2 * n - r}) {  // negative offsets |m| = rep + 2n j
    if (rep % 2 == 1) acc += std::pow(m2, -s) * hurwitz_zeta(s, rep / m2);
  }
  return 2.0 * scale * acc;
}

}  // namespace

double normalizing_constant(double alpha) {
  require_alpha(alpha);
  return std::tgamma(alpha + 1.0) * std::sin(kPi * alpha / 2.0) / kPi;
}

double odd_weight_sum(double s) {
  return (1.0 - std::pow(2.0, -s)) * std::riemann_zeta(s);
}

FracLapOp build_operator(const Grid& grid, double alpha) {
  require_alpha(alpha);
  FracLapOp op;
  op.grid = grid;
  op.alpha = alpha;
  op.c_alpha = normalizing_constant(alpha);

  const int n = grid.n;
  const double scale = op.c_alpha / std::pow(grid.dx, alpha);
  auto weight = [&](long long m) -> double {
    if (m % 2 == 0) return 0.0;
    return 2.0 * scale / std::pow(std::abs(static_cast<double>(m)), 1.0 + alpha);
  };

  op.kernel = Eigen::ArrayXd::Zero(n);
  if (grid.mode == BoundaryMode::periodic) {
    // full image sum over the lattice: the operator restricted to n-periodic
    // data is exactly this circulant, and its spectrum is the lattice symbol
    for (int r = 1; r < n; ++r) op.kernel[r] = periodized_weight(r, n, alpha, scale);
    op.diag = Eigen::ArrayXd::Constant(n, -op.kernel.sum());

    // circulant spectrum of the first column (diag at offset 0)
    Eigen::ArrayXd column = op.kernel;
    column[0] = op.diag[0];
    Eigen::ArrayXcd spec = fft::forward_real(column);
    op.symbol = spec.real();

    op.dispersive_symbol = Eigen::ArrayXcd(n);
    for (int m = 0; m < n; ++m) {
      const double mu = std::sin(2.0 * kPi * m / n) / grid.dx;  // iD eigenvalue / i
      op.dispersive_symbol[m] = std::complex<double>(0.0, op.symbol[m] * mu);
    }
  } else {
    for (int r = 1; r < n; ++r) op.kernel[r] = weight(r);
    // zero extension off the window: the diagonal keeps the full lattice sum
    const double full_sum = 4.0 * scale * odd_weight_sum(1.0 + alpha);
    op.diag = Eigen::ArrayXd::Constant(n, -full_sum);

    op.embed_n = 1;
    while (op.embed_n < 2 * n) op.embed_n <<= 1;
    Eigen::ArrayXd embed = Eigen::ArrayXd::Zero(op.embed_n);
    for (int r = 1; r < n; ++r) {
      embed[r] = op.kernel[r];
      embed[op.embed_n - r] = op.kernel[r];
    }
    op.embed_spectrum = fft::forward_real(embed);
  }
  return op;
}

GridFn apply(const FracLapOp& op, const GridFn& u) {
  if (!(u.grid == op.grid))
    throw std::invalid_argument("fractional Laplacian: grid function on a different grid");
  const int n = op.grid.n;
  if (op.grid.mode == BoundaryMode::periodic) {
    Eigen::ArrayXcd spec = fft::forward_real(u.values);
    spec *= op.symbol.cast<std::complex<double>>();
    fft::inverse_inplace(spec);
    return GridFn{op.grid, spec.real()};
  }
  Eigen::ArrayXcd padded = Eigen::ArrayXcd::Zero(op.embed_n);
  padded.head(n) = u.values.cast<std::complex<double>>();
  fft::forward_inplace(padded);
  padded *= op.embed_spectrum;
  fft::inverse_inplace(padded);
  Eigen::ArrayXd out = padded.head(n).real() + op.diag * u.values;
  return GridFn{op.grid, std::move(out)};
}

GridFn apply_dense(const FracLapOp& op, const GridFn& u) {
  if (!(u.grid == op.grid))
    throw std::invalid_argument("fractional Laplacian: grid function on a different grid");
  const int n = op.grid.n;
  Eigen::ArrayXd out(n);
  if (op.grid.mode == BoundaryMode::periodic) {
    for (int j = 0; j < n; ++j) {
      double acc = op.diag[j] * u.values[j];
      for (int r = 1; r < n; ++r) {
        int k = j - r;
        if (k < 0) k += n;
        acc += op.kernel[r] * u.values[k];
      }
      out[j] = acc;
    }
  } else {
    for (int j = 0; j < n; ++j) {
      double acc = op.diag[j] * u.values[j];
      for (int k = 0; k < n; ++k) {
        if (k == j) continue;
        acc += op.kernel[std::abs(j - k)] * u.values[k];
      }
      out[j] = acc;
    }
  }
  return GridFn{op.grid, std::move(out)};
}

GridFn apply_dispersive(const FracLapOp& op, const GridFn& u) {
  if (!(u.grid == op.grid))
    throw std::invalid_argument("dispersive operator: grid function on a different grid");
  if (op.grid.mode == BoundaryMode::periodic) {
    Eigen::ArrayXcd spec = fft::forward_real(u.values);
    spec *= op.dispersive_symbol;
    fft::inverse_inplace(spec);
    return GridFn{op.grid, spec.real()};
  }
  return apply(op, central_difference(u));
}

GridFn apply_dispersive_dense(const FracLapOp& op, const GridFn& u) {
  return apply_dense(op, central_difference(u));
}

Eigen::MatrixXd dense_matrix(const FracLapOp& op) {
  const int n = op.grid.n;
  Eigen::MatrixXd a(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j == k) {
        a(j, k) = op.diag[j];
      } else if (op.grid.mode == BoundaryMode::periodic) {
        int r = j - k;
        if (r < 0) r += n;
        a(j, k) = op.kernel[r];
      } else {
        a(j, k) = op.kernel[std::abs(j - k)];
      }
    }
  }
  return a;
}

Eigen::MatrixXd dense_difference_matrix(const Grid& grid) {
  const int n = grid.n;
  const double inv = 0.5 / grid.dx;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const int jp = (j + 1) % n;
    const int jm = (j - 1 + n) % n;
    if (grid.mode == BoundaryMode::periodic || j + 1 < n) d(j, jp) += inv;
    if (grid.mode == BoundaryMode::periodic || j - 1 >= 0) d(j, jm) -= inv;
  }
  return d;
}

Eigen::MatrixXd dense_dispersive_matrix(const FracLapOp& op) {
  return dense_matrix(op) * dense_difference_matrix(op.grid);
}

double wrapped_image_mass(const FracLapOp& op) {
  if (op.grid.mode != BoundaryMode::periodic)
    throw std::invalid_argument("wrapped_image_mass: defined for periodic operators only");
  const int n = op.grid.n;
  const double scale = op.c_alpha / std::pow(op.grid.dx, op.alpha);
  const double full_sum = 4.0 * scale * odd_weight_sum(1.0 + op.alpha);
  double near_sum = 0.0;
  for (int m = 1; m <= n / 2; ++m)
    if (m % 2 == 1) near_sum += 2.0 * 2.0 * scale / std::pow(static_cast<double>(m), 1.0 + op.alpha);
  return full_sum - near_sum;
}

double norm_h1alpha(const FracLapOp& op, const GridFn& u) {
  return norm_h2(u) + norm_l2(apply_dispersive(op, u));
}

}  // namespace fkdv
