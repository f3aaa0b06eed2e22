#include "fkdv/invariants.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "fkdv/fft.hpp"

namespace fkdv {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace

double discrete_mass(const GridFn& u) { return u.grid.dx * u.values.sum(); }

GridFn fractional_half_power(const GridFn& u, double alpha) {
  if (u.grid.mode != BoundaryMode::periodic)
    throw std::invalid_argument(
        "fractional_half_power: the spectral definition needs a periodic grid");
  const int n = u.grid.n;
  const double length = u.grid.b - u.grid.a;
  Eigen::ArrayXcd spec = fft::forward_real(u.values);
  for (int m = 0; m < n; ++m) {
    const int freq = (m <= n / 2) ? m : m - n;
    const double xi = 2.0 * kPi * freq / length;
    spec[m] *= std::pow(std::abs(xi), alpha / 2.0);
  }
  fft::inverse_inplace(spec);
  return GridFn{u.grid, spec.real()};
}

InvariantTriple compute_invariants(const GridFn& u, double alpha) {
  InvariantTriple out;
  out.mass = discrete_mass(u);
  out.momentum = norm_l2(u);
  const GridFn half = fractional_half_power(u, alpha);
  out.energy = u.grid.dx * (half.values.square() - u.values.cube() / 3.0).sum();
  return out;
}

std::array<double, 3> normalized_invariants(const GridFn& u, const GridFn& u0, double alpha) {
  require_same_grid(u, u0, "normalized_invariants");
  const InvariantTriple now = compute_invariants(u, alpha);
  const InvariantTriple ref = compute_invariants(u0, alpha);
  auto ratio = [](double num, double den, const char* name) {
    if (den == 0.0)
      throw std::invalid_argument(std::string("normalized_invariants: reference ") + name +
                                  " vanishes; the normalized ratio is undefined");
    return num / den;
  };
  return {ratio(now.mass, ref.mass, "mass"), ratio(now.momentum, ref.momentum, "momentum"),
          ratio(now.energy, ref.energy, "energy")};
}

}  // namespace fkdv
