#pragma once

#include "opcalc/angular.hpp"
#include "opcalc/grid.hpp"
#include "opcalc/temporal.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace opcalc {

/// Parabola z(s) = (ν′ + is)², which is the level set Re√z = ν′. Parameter nodes are
/// s_q = sinh(u_q) on a uniform midpoint grid in u, so they cluster near s = 0.
struct Contour {
    double nu = 0.0;
    double nu_prime = 0.0;
    double margin = 0.0;  // min_j Re√λ_j − ν
    double s_max = 0.0;
    int n_nodes = 0;
    std::vector<double> s;
    std::vector<double> ds;  // quadrature weights in s
    std::vector<cplx> z;
    std::vector<cplx> dz_ds;
    double tail_estimate = 0.0;  // ∫_{|s|>s_max} of the |z|^{−3/2} envelope
};

/// Default s_max keeps the analytic tail below about 1e−3 at n_nodes = 200; larger
/// truncations need more nodes (see README).
Contour build_contour(const ProblemParams& params, const std::vector<cplx>& eigs, int n_nodes = 200,
                      double s_max = 2000.0, std::optional<double> nu_prime = std::nullopt);

/// How each node's two resolvents are evaluated.
///  - discrete: exact inverses of the finite-difference operators, so the result is the
///    contour-integral representation of the coupled finite-difference inverse.
///  - kernel: closed-form angular kernel formulas and the temporal integral representation.
enum class ResolventBackend { discrete, kernel };

struct DpgOptions {
    ResolventBackend backend = ResolventBackend::discrete;
    AngularResolventOptions angular{};
    TemporalResolventOptions temporal{.margin_min = 1e-3, .decay_tol = 1e-10, .check_decay = false};
};

/// Applies V = −(1/2πi) ∫_Γ (L₁ − z)⁻¹(L₂ + z)⁻¹F dz, with (L₂ + z)⁻¹ = −(𝒜 − z)⁻¹.
/// Node factorizations are built once; apply() can be called repeatedly.
class DpgInverter {
public:
    DpgInverter(const TemporalGrid& tg, const AngularGrid& ag, double nu, Contour contour, DpgOptions opts = {});
    ~DpgInverter();
    DpgInverter(DpgInverter&&) noexcept;
    DpgInverter& operator=(DpgInverter&&) noexcept;

    [[nodiscard]] SpaceTimeField apply(const SpaceTimeField& F) const;

    /// E-norm of the integrand at every node, (1/2π)|dz/ds|·‖(L₁ − z)⁻¹(𝒜 − z)⁻¹F‖.
    [[nodiscard]] std::vector<double> integrand_norms(const SpaceTimeField& F, double p) const;

    [[nodiscard]] const Contour& contour() const noexcept { return contour_; }

private:
    struct NodeCache;
    [[nodiscard]] SpaceTimeField node_term(int q, const SpaceTimeField& F) const;
    [[nodiscard]] SpaceTimeField sum_range(int lo, int hi, const SpaceTimeField& F) const;

    TemporalGrid tg_;
    AngularGrid ag_;
    double nu_;
    Contour contour_;
    DpgOptions opts_;
    std::vector<std::unique_ptr<NodeCache>> cache_;
};

SpaceTimeField dpg_apply_inverse(const SpaceTimeField& F, const Contour& contour, double nu,
                                 const DpgOptions& opts = {});

/// Sparse LU of the coupled finite-difference operator L₁,h − 𝒜_h on interior unknowns.
class DirectSumSolver {
public:
    DirectSumSolver(const TemporalGrid& tg, const AngularGrid& ag, double nu);
    ~DirectSumSolver();
    DirectSumSolver(DirectSumSolver&&) noexcept;
    DirectSumSolver& operator=(DirectSumSolver&&) noexcept;

    /// Solve; `residual` receives ‖Ax − b‖/‖b‖.
    [[nodiscard]] SpaceTimeField solve(const SpaceTimeField& F, double* residual = nullptr) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

SpaceTimeField direct_sum_solve(const SpaceTimeField& F, double nu, double* residual = nullptr);

}  // namespace opcalc
