#pragma once

#include <array>

#include "fkdv/grid.hpp"

namespace fkdv {

/// Discrete mass, momentum and energy of a state:
///   mass     = dx * sum_j u_j
///   momentum = ||u||  (the l2 norm, not its square)
///   energy   = dx * sum_j ( ((-Lap)^{alpha/4} u)_j^2 - u_j^3 / 3 )
/// The fractional half power is realized by the discrete Fourier multiplier
/// |xi_m|^{alpha/2} with xi_m = 2 pi m / (b - a), so the energy needs a
/// periodic grid.
struct InvariantTriple {
  double mass{0.0};
  double momentum{0.0};
  double energy{0.0};
};

double discrete_mass(const GridFn& u);

/// (-Lap)^{alpha/4} u via the spectral multiplier; periodic grids only.
GridFn fractional_half_power(const GridFn& u, double alpha);

InvariantTriple compute_invariants(const GridFn& u, double alpha);

/// Componentwise ratios invariant(u) / invariant(u0). Throws when a
/// denominator vanishes, naming the degenerate invariant.
std::array<double, 3> normalized_invariants(const GridFn& u, const GridFn& u0, double alpha);

}  // namespace fkdv
