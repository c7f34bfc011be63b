#pragma once

#include "opcalc/grid.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace opcalc {

/// [P₁V](t) = −e^{−2t}𝒜₀V(t).
SpaceTimeField apply_P1(const SpaceTimeField& V);

/// [P₂V](t) = (0, 2e^{−2t}(∂_t − ν)V₁(t)).
SpaceTimeField apply_P2(const SpaceTimeField& V, double nu);

/// (L₁,h + L₂,h)V + kρ²(P₁ + P₂)V on interior nodes; boundary rows and columns are zero.
SpaceTimeField apply_full(const SpaceTimeField& V, const ProblemParams& params);

/// Any approximation of (L₁ + L₂)⁻¹ on the grid (DP-G inverter, direct solve, ...).
using SumInverse = std::function<SpaceTimeField(const SpaceTimeField&)>;

struct FixedPointOptions {
    double fp_tol = 1e-8;
    int max_iter = 100;
    std::optional<double> rho0;     // when set, ρ > ρ₀ is refused unless allow_above_rho0
    bool allow_above_rho0 = false;
    int divergence_window = 5;
};

struct IterationTrace {
    std::vector<double> increments;  // ‖W_{n+1} − W_n‖_E / ‖F‖_E
    std::vector<double> ratios;      // successive increment ratios
    bool converged = false;
    [[nodiscard]] int iterations() const noexcept { return static_cast<int>(increments.size()); }
    /// Largest ratio after the second step, or 0 when there are too few steps.
    [[nodiscard]] double max_ratio_after(int skip = 1) const;
};

class DivergenceError : public ConvergenceError {
public:
    DivergenceError(const std::string& what, IterationTrace trace)
        : ConvergenceError(what), trace_(std::move(trace)) {}
    [[nodiscard]] const IterationTrace& trace() const noexcept { return trace_; }

private:
    IterationTrace trace_;
};

struct FullSolution {
    SpaceTimeField V;
    IterationTrace trace;
    double residual = 0.0;  // ‖apply_full(V) − F‖_E / ‖F‖_E
};

/// Neumann iteration on the right-hand side: W₀ = F, W_{n+1} = F − kρ²(P₁ + P₂)S⁻¹W_n,
/// stopped when ‖W_{n+1} − W_n‖ ≤ fp_tol·‖F‖; returns V = S⁻¹W.
FullSolution solve_full(const SpaceTimeField& F, const ProblemParams& params, const SumInverse& inverse,
                        const FixedPointOptions& opts = {}, double p = 2.0);

/// ρ₀ = √(safety / (k·q₁)), q₁ the maximum of ‖(P₁ + P₂)S⁻¹F‖ / ‖F‖ over the probes and
/// `power_steps` normalized power iterates of each. Smooth probes alone underestimate the norm.
/// Returns +∞ for k = 0.
double estimate_rho0(double k, const std::vector<SpaceTimeField>& probes, double nu, const SumInverse& inverse,
                     double p = 2.0, double safety = 0.5, int power_steps = 8);

struct RegularityThresholds {
    double c_max = 1e4;          // bound on ‖V″‖/‖F‖ and ‖𝒜V‖/‖F‖
    double origin_tol = 1e-12;   // |V(0)| relative to the peak
    double trace_tol = 0.05;     // endpoint slope of ψ₁ relative to its scale
    double decay_tol = 1e-3;     // last interior row relative to the peak
};

struct RegularityReport {
    double norm_F = 0.0;
    double norm_Vtt = 0.0;
    double norm_AV = 0.0;
    double c_tt = 0.0;
    double c_A = 0.0;
    double origin = 0.0;
    double trace_value = 0.0;
    double trace_slope = 0.0;
    double tail = 0.0;
    RegularityThresholds thresholds;
    [[nodiscard]] bool finite() const;
    [[nodiscard]] bool passed() const;
};

RegularityReport classical_regularity_check(const SpaceTimeField& V, const SpaceTimeField& F, double p = 2.0,
                                            const RegularityThresholds& thresholds = {});

/// Radii of the reconstruction; angles are the nodes of the field's angular grid.
struct PolarGrid {
    std::vector<double> radii;
};

struct SectorField {
    std::vector<double> radii;
    std::vector<double> thetas;
    CMatrix u;  // rows follow radii
    /// max |u| on θ ∈ {0, ω}.
    [[nodiscard]] double trace_value() const;
    /// max |(1/r)∂_θ u| on θ ∈ {0, ω}, one-sided second-order differences.
    [[nodiscard]] double trace_normal_derivative() const;
};

/// u(r, θ) = r·e^{−νt}V₁(t, θ) with t = ln(ρ/r), cubic B-spline in t.
SectorField reconstruct_u(const SpaceTimeField& V, const ProblemParams& params, const PolarGrid& polar);

/// Inverse map at the temporal nodes: V₁(t_m, θ) = e^{νt_m}u(ρe^{−t_m}, θ)/(ρe^{−t_m}),
/// with u given as a callable in (r, θ).
CMatrix v1_from_u(const std::function<cplx(double, double)>& u, const TemporalGrid& tg, const AngularGrid& ag,
                  const ProblemParams& params);

}  // namespace opcalc
