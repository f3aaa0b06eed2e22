#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fkdv/grid.hpp"
#include "fkdv/time_steppers.hpp"

namespace fkdv {

/// Periodic Benjamin-Ono soliton
///   u(x,t) = 2 c delta^2 / (1 - sqrt(1 - delta^2) cos(c delta (x - c t))),
///   delta = pi / (c L),
/// spatial period 2L, temporal period 2L/c. Requires 0 < delta < 1 so the
/// denominator stays positive.
///
/// The delta^2 numerator is forced by the traveling-wave algebra: writing
/// the profile through the Poisson kernel P = sum rho^|n| e^{in theta}
/// (which satisfies P^2 = (1+rho^2)/(1-rho^2) P + Q with Q the |n|-weighted
/// sum the half-Laplacian produces), the wave ansatz m + A P solves the
/// integrated equation exactly when A = 2k and v = m + k/delta, k = c delta.
/// A = 2k then makes the numerator 2 c delta^2 and the speed exactly c.
template <class Real>
Real bo_soliton(Real x, Real t, Real c, Real L) {
  const Real pi = static_cast<Real>(3.141592653589793238462643383279502884L);
  const Real delta = pi / (c * L);
  if (!(delta > Real(0) && delta < Real(1)))
    throw std::invalid_argument("bo_soliton: pi/(c L) must lie in (0,1), the denominator can "
                                "vanish otherwise");
  using std::cos;
  using std::sqrt;
  const Real root = sqrt(Real(1) - delta * delta);
  return Real(2) * c * delta * delta / (Real(1) - root * cos(c * delta * (x - c * t)));
}

/// Two-soliton solution of u_t + (u^2/2)_x + u_xxx = 0 with crest speeds 2c
/// and 2d (amplitudes 6c and 6d), d > c. Written with reciprocal hyperbolic
/// functions so large arguments underflow cleanly instead of overflowing.
/// The carrier has a removable singularity at x = 2 d t; evaluation exactly
/// there is rejected.
template <class Real>
Real kdv_two_soliton(Real x, Real t, Real c, Real d) {
  if (!(d > c && c > Real(0)))
    throw std::invalid_argument("kdv_two_soliton: parameters must satisfy d > c > 0");
  using std::cosh;
  using std::sinh;
  using std::sqrt;
  using std::tanh;
  const Real zc = sqrt(c / Real(2)) * (x - Real(2) * c * t);
  const Real zd = sqrt(d / Real(2)) * (x - Real(2) * d * t);
  if (zd == Real(0))
    throw std::domain_error("kdv_two_soliton: evaluation at the carrier singularity x = 2 d t");
  const Real sh = sinh(zd);
  const Real csch2 = Real(1) / (sh * sh);
  const Real ch = cosh(zc);
  const Real sech2 = Real(1) / (ch * ch);
  const Real coth = Real(1) / tanh(zd);
  const Real denom_root = sqrt(c) * tanh(zc) - sqrt(d) * coth;
  return Real(6) * (d - c) * (d * csch2 + c * sech2) / (denom_root * denom_root);
}

enum class PresetKind { bo_soliton, sine_fractional, kdv_two_soliton };

/// One of the stock experiment setups: closed-form or fine-grid reference,
/// initial-data generator, domain, fractional order and final time.
struct ExperimentPreset {
  std::string name;
  PresetKind kind{PresetKind::bo_soliton};
  double alpha{1.0};
  double a{0.0};
  double b{1.0};
  std::map<std::string, double> params;
  double t_init_offset{0.0};  // initial data samples the exact solution here
  double t_final{0.0};
};

/// Known presets: "bo" (Benjamin-Ono soliton, alpha=1, [-15,15], T=120),
/// "sine" (0.5 sin x, alpha=1.5, [-4pi,4pi], T=5, fine-grid reference),
/// "kdv2" (two-soliton, alpha=1.999, [-90,90], u0 = u2(.,-20), T=40) and
/// "kdv2_ei" (same but u0 = u2(.,-10), T=20).
ExperimentPreset preset_from_name(std::string_view name);

bool has_exact_solution(const ExperimentPreset& preset);

/// Exact solution at simulation time t (t = 0 is the initial data).
double exact_solution(const ExperimentPreset& preset, double x, double t);

/// Samples the preset's initial data on the grid. When the sampled data does
/// not decay below 1e-6 at the domain ends (compact-support assumption of
/// the truncated comparisons), a warning is written to *warning; never fatal.
GridFn make_initial(const ExperimentPreset& preset, const Grid& grid,
                    std::string* warning = nullptr);

/// Restriction by exact node coincidence; fine.n must be a multiple of
/// coarse.n and both grids must span the same interval.
GridFn restrict_to(const GridFn& fine, const Grid& coarse);

/// Crank-Nicolson run on an n_ref-node grid to the preset's final time,
/// restricted onto `coarse`. Used where no closed form exists.
GridFn fine_grid_reference(const ExperimentPreset& preset, const SchemeConfig& cfg, int n_ref,
                           const Grid& coarse);

}  // namespace fkdv
