#pragma once

#include "opcalc/grid.hpp"

#include <Eigen/Sparse>

/// Matrices of the discrete operators acting on interior unknowns.
/// Angular unknowns are θ_1..θ_{n−2} (ψ vanishes at both ends, ghost reflection
/// closes ψ′ = 0); temporal unknowns are t_1..t_{n−2} (V(0) = 0 and V(T) = 0).
namespace opcalc::discrete {

using SpMat = Eigen::SparseMatrix<cplx>;

SpMat angular_d2(int n, double h);
SpMat angular_d4(int n, double h);

/// Block matrix of 𝒜_h on (ψ₁, ψ₂) interior values, stacked ψ₁ first.
SpMat angular_A(int n, double h);

/// (D_t − ν)² with Dirichlet ends.
SpMat temporal_L1(int n, double h, double nu);

/// Stack interior values (ψ₁ then ψ₂).
CVector pack(const StateVector& sv);
StateVector unpack(const CVector& x, int n, DomainTag tag);

/// Coupled operator L₁,h ⊗ I − I ⊗ 𝒜_h on interior unknowns. Unknowns are
/// ordered component-major, then t, then θ.
SpMat sum_operator(const TemporalGrid& tg, const AngularGrid& ag, double nu);
CVector pack(const SpaceTimeField& V);
SpaceTimeField unpack(const CVector& x, const TemporalGrid& tg, const AngularGrid& ag);

/// The coupled operator applied to a field; boundary rows of the result are zero.
SpaceTimeField apply_sum(const SpaceTimeField& V, double nu);

}  // namespace opcalc::discrete
