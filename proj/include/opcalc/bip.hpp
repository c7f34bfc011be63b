#pragma once

#include "opcalc/types.hpp"

#include <vector>

namespace opcalc {

/// λ₁ = 2 + 4πξ + 4π²ξ², λ₂ = 2 − 4πξ + 4π²ξ²; both stay above 2 − 1 > 0.
double bip_lambda1(double xi);
double bip_lambda2(double xi);

/// m(ξ) = (λ₂^{ir} − λ₁^{ir})/(8πξ), with the limit −2^{ir−1}ir at ξ = 0.
/// Evaluated as −2i sin(rΔ/2)e^{ir(ln λ₁ + ln λ₂)/2}/(8πξ), Δ = log1p(8πξ/λ₂), so small ξ
/// does not cancel.
cplx multiplier(double xi, double r);

/// The closed form (ir/32)(λ₂^{ir−1}(−1 + 2πξ) − λ₁^{ir−1}(1 + 2πξ)) − (λ₂^{ir} − λ₁^{ir})/(32πξ),
/// limit 3·2^{ir−5}ir at ξ = 0. This is not ξ·m′(ξ); see xi_dm_dxi.
cplx xi_times_mprime(double xi, double r);

/// ξ·dm/dξ = (ir/2)(λ₂^{ir−1}(−1 + 2πξ) − λ₁^{ir−1}(1 + 2πξ)) − m(ξ); tends to 0 as ξ → 0.
cplx xi_dm_dxi(double xi, double r);

/// ±ξ with log spacing on [lo, hi], per_decade points per decade, sorted ascending.
std::vector<double> symmetric_log_grid(double lo = 1e-8, double hi = 1e4, int per_decade = 2000);

struct SupBounds {
    double r = 0.0;
    double sup_m = 0.0;
    double sup_xm = 0.0;            // of the closed form xi_times_mprime
    double mikhlin_sum = 0.0;
    double argmax_m = 0.0;
    double argmax_xm = 0.0;
    double limit_m = 0.0;           // |m| at the smallest |ξ| of the grid
    double limit_xm = 0.0;
    double sup_true_derivative = 0.0;  // of |xi_dm_dxi|
    double argmax_true_derivative = 0.0;
    /// Both suprema equal their values at the smallest |ξ| up to rel_tol. Near ξ = 0 the samples
    /// agree to round-off, so the argmax itself is not a reliable witness.
    [[nodiscard]] bool attained_at_origin(double rel_tol = 1e-12) const;
};

SupBounds sup_bounds(double r, const std::vector<double>& grid);

struct GammaSample {
    cplx z;
    cplx integral;     // ∫₀^∞ σ^{−z}/(σ + 1) dσ
    cplx reflection;   // π / sin(πz)
    cplx shifted;      // π / sin(π(z − 1)) = Γ(z − 1)Γ(2 − z)
    double error = 0.0;       // |integral − reflection| / |reflection|
    double flip_error = 0.0;  // |integral + shifted| / |reflection|
};

struct GammaReport {
    std::vector<GammaSample> samples;
    [[nodiscard]] double max_error() const;
    [[nodiscard]] double max_flip_error() const;
};

/// Trapezoid rule after σ = eˣ, on ∫ e^{(1−z)x}/(eˣ + 1) dx along a line parallel to ℝ inside
/// the pole-free strip |Im x| < π. Samples need 0 < Re z < 1 and |sin πz| ≥ 1e−8.
GammaReport gamma_reflection_check(const std::vector<cplx>& z_samples);

}  // namespace opcalc
