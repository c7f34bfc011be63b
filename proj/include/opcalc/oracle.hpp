#pragma once

#include "opcalc/grid.hpp"

namespace opcalc {

/// Reference (𝒜 − λ)⁻¹F from a dense finite-difference boundary-value solve that shares no code
/// with the library's resolvents: all N_θ nodes are unknowns, ψ₁ = 0 and the second-order
/// one-sided ψ₁′ = 0 at both ends replace the equations at the first two and last two nodes,
/// and the interior rows use the plain five-point fourth difference. ψ₂ = λψ₁ + F₁.
StateVector dense_clamped_oracle(cplx lambda, const StateVector& F, const AngularGrid& grid);

}  // namespace opcalc
