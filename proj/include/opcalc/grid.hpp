#pragma once

#include "opcalc/types.hpp"

namespace opcalc {

/// Physical parameters of the sector problem. ν is derived from p and never stored.
struct ProblemParams {
    double p = 2.0;
    double omega = pi / 2;
    double k = 1.0;
    double rho = 1.0;

    [[nodiscard]] double nu() const noexcept { return 3.0 - 2.0 / p; }

    /// Throws DomainError unless p > 1, ω ∈ (0, 2π], k ≥ 0 and ρ > 0.
    /// k = 0 is accepted so the unperturbed problem can run through the same path.
    void validate() const;
};

/// Uniform nodes x_i = i·L/(n−1), endpoints included.
class UniformGrid {
public:
    UniformGrid(double length, int n, int min_nodes);

    [[nodiscard]] double length() const noexcept { return length_; }
    [[nodiscard]] int size() const noexcept { return n_; }
    [[nodiscard]] double h() const noexcept { return length_ / (n_ - 1); }
    [[nodiscard]] double node(int i) const noexcept { return i * h(); }
    [[nodiscard]] RVector nodes() const;

    bool operator==(const UniformGrid&) const = default;

private:
    double length_;
    int n_;
};

/// Discretization of (0, ω). Needs at least 7 nodes for the fourth-order stencils.
class AngularGrid : public UniformGrid {
public:
    AngularGrid(double omega, int n) : UniformGrid(omega, n, 7) {}
    [[nodiscard]] double omega() const noexcept { return length(); }
};

/// Truncation of (0, +∞) to [0, T].
class TemporalGrid : public UniformGrid {
public:
    TemporalGrid(double T, int n) : UniformGrid(T, n, 5) {}
    [[nodiscard]] double T() const noexcept { return length(); }
};

/// How fourth derivatives are closed at the two ends of the interval.
///  - one_sided: skewed six-point stencils; accurate on any smooth function.
///  - ghost: reflected ghost values ψ(−h) = ψ(h), the closure used by every linear system here.
enum class Closure { one_sided, ghost };

CVector d1(const CVector& f, double h);
CVector d2(const CVector& f, double h);
CVector d4(const CVector& f, double h, Closure closure = Closure::one_sided);

/// Trapezoid-weighted discrete L^p norm (h Σ' |f_i|^p)^{1/p}.
double lp_norm(const CVector& f, double h, double p);

/// Membership tag of a state vector: X = W₀^{2,p} × L^p, or the domain D(𝒜).
enum class DomainTag { X, DA };

struct StateVector {
    CVector psi1;
    CVector psi2;
    DomainTag tag = DomainTag::X;

    static StateVector zeros(int n, DomainTag tag = DomainTag::X);
    [[nodiscard]] int size() const noexcept { return static_cast<int>(psi1.size()); }
};

/// ‖ψ₁‖ + ‖ψ₁′‖ + ‖ψ₁″‖ + ‖ψ₂‖, all in discrete L^p.
double x_norm(const StateVector& sv, const AngularGrid& grid, double p);

/// True when ψ(0) = ψ(ω) = 0 and the one-sided first derivatives are small
/// relative to the function's own scale.
bool is_clamped(const CVector& f, double h, double rel_tol = 1e-6);

/// V(t, θ) sampled on a temporal × angular grid. Row m of v1/v2 is the state at t_m.
struct SpaceTimeField {
    TemporalGrid tgrid;
    AngularGrid agrid;
    CMatrix v1;
    CMatrix v2;

    SpaceTimeField(TemporalGrid tg, AngularGrid ag);

    [[nodiscard]] StateVector state(int m) const;
    void set_state(int m, const StateVector& sv);
    [[nodiscard]] bool same_grids(const SpaceTimeField& other) const;

    SpaceTimeField& operator+=(const SpaceTimeField& o);
    SpaceTimeField& operator-=(const SpaceTimeField& o);
    SpaceTimeField& operator*=(cplx c);
};

SpaceTimeField operator+(SpaceTimeField a, const SpaceTimeField& b);
SpaceTimeField operator-(SpaceTimeField a, const SpaceTimeField& b);
SpaceTimeField operator*(cplx c, SpaceTimeField a);

/// (∫₀^T ‖V(t)‖_X^p dt)^{1/p}, trapezoid in t.
double e_norm(const SpaceTimeField& V, double p);

/// Largest |imaginary part| over both components.
double max_imag(const SpaceTimeField& V);

/// Column-wise derivatives in t (one-sided at t = 0 and t = T).
CMatrix dt1(const CMatrix& values, double h);
CMatrix dt2(const CMatrix& values, double h);

// Operators of the abstract problem, applied on the grid.

/// 𝒜(ψ₁, ψ₂) = (ψ₂, −(∂² + 1)²ψ₁ − 2(∂² − 1)ψ₂). Requires the D(𝒜) tag.
StateVector apply_A(const StateVector& sv, const AngularGrid& grid, Closure closure = Closure::one_sided);

/// Row-wise 𝒜 on a field. Checks ψ₁ and ψ₂ vanish at θ ∈ {0, ω}.
SpaceTimeField apply_A(const SpaceTimeField& V, Closure closure = Closure::one_sided);

/// 𝒜₀(ψ₁, ψ₂) = (0, (∂² + 1)ψ₁ + ψ₂).
StateVector apply_A0(const StateVector& sv, const AngularGrid& grid);

/// B₂V = (0, −2(∂_t − ν)V₁).
SpaceTimeField apply_B2(const SpaceTimeField& V, double nu);

struct L1Options {
    bool check_domain = true;
    double decay_tol = 1e-10;
};

/// (∂_t − ν)²V componentwise. With check_domain, V(0) must vanish and the
/// state at T must be below decay_tol relative to the field's peak.
SpaceTimeField apply_L1(const SpaceTimeField& V, double nu, const L1Options& opts = {});

}  // namespace opcalc
