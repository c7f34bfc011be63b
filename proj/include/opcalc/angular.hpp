#pragma once

#include "opcalc/grid.hpp"
#include "opcalc/quadrature.hpp"

#include <Eigen/SparseLU>

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace opcalc {

/// Which U± pair closes the clamped conditions.
///  - paper_eq: U∓ = 1 − e^{−2ωs} ∓ 2ωs e^{−ωs}.
///  - proof_derived: U∓ = 1 − e^{−2ωs} ∓ 2s e^{−ωs} sin ω. Only this one gives a clamped solution.
enum class UVariant { paper_eq, proof_derived };

struct AngularResolventOptions {
    UVariant variant = UVariant::proof_derived;
    KernelQuadrature quadrature = KernelQuadrature::product;
    double spectral_margin = 1e-8;
};

/// Everything the closed-form resolvent builds on the way to ψ₁. s = √(−λ).
struct ResolventIngredients {
    cplx lambda, s, alpha1, alpha2;
    CVector I, v, J, S;
    std::array<cplx, 4> beta;
    cplx U_minus, U_plus;
    UVariant variant;
};

/// K(x) = ∫₀^x e^{−(x−s)α} f(s) ds + ∫_x^ω e^{−(s−x)α} f(s) ds at every node. Needs Re α > 0.
CVector kernel_convolution(cplx alpha, const CVector& f, const AngularGrid& grid,
                           KernelQuadrature q = KernelQuadrature::product);

/// Build the closed-form pieces for (𝒜 − λ)⁻¹F. F₁″ defaults to the d2 stencil of F₁.
ResolventIngredients resolvent_ingredients(cplx lambda, const StateVector& F, const AngularGrid& grid,
                                           const AngularResolventOptions& opts = {},
                                           const CVector* f1pp = nullptr);

/// ψ₁ from the ingredients.
CVector psi1_from(const ResolventIngredients& ing, const AngularGrid& grid);

/// (𝒜 − λ)⁻¹F by the kernel formulas, λ ∈ ℂ off [0, ∞). The result is tagged D(𝒜).
StateVector resolve_A(cplx lambda, const StateVector& F, const AngularGrid& grid,
                      const AngularResolventOptions& opts = {}, const CVector* f1pp = nullptr);

/// (𝒜_h − z)⁻¹ for the ghost-closed finite-difference 𝒜_h, factored once for a fixed z.
/// Eliminating ψ₂ = zψ₁ + F₁ leaves (D4 + 2(1+z)D2 + (z−1)²)ψ₁ = −F₂ − 2(D2F₁ − F₁) − zF₁.
class DiscreteAngularResolvent {
public:
    DiscreteAngularResolvent(const AngularGrid& grid, cplx z);

    [[nodiscard]] StateVector apply(const StateVector& F) const;
    /// Row-wise on a block of states: rows are time slices, columns are θ nodes.
    void apply_rows(const CMatrix& F1, const CMatrix& F2, CMatrix& psi1, CMatrix& psi2) const;
    [[nodiscard]] cplx z() const noexcept { return z_; }

private:
    int n_;
    double h_;
    cplx z_;
    Eigen::SparseMatrix<cplx> d2_;
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu_;
};

/// 𝒜Ψ = F at λ = 0 by the finite-difference clamped solve; ψ₂ = F₁ exactly.
StateVector solve_A_at_zero(const StateVector& F, const AngularGrid& grid);

/// Data given as functions of θ, so F₁″ is exact and the lemma identity can be checked
/// without stencil error.
struct AngularData {
    std::function<cplx(double)> f1, f1pp, f2;
};

StateVector sample(const AngularData& F, const AngularGrid& grid);
CVector sample_f1pp(const AngularData& F, const AngularGrid& grid);

struct InequalityCheck {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    [[nodiscard]] double slack() const { return rhs - lhs; }
    [[nodiscard]] bool holds() const { return lhs <= rhs; }
};

struct LemmaReport {
    double lambda = 0.0;
    double epsilon0 = 0.0;
    bool precondition = true;  // λ ≤ −ε₀
    std::vector<InequalityCheck> inequalities;
    double identity_error = 0.0;  // max relative defect of the integration-by-parts identity
    [[nodiscard]] bool all_hold(double identity_tol = 1e-8) const;
};

/// Checks every inequality of the I, v, J, exponential-difference and β estimates at a real λ < 0,
/// plus the integration-by-parts identity for K, computed with adaptive quadrature.
LemmaReport verify_lemma_bounds(double lambda, const AngularData& F, double omega, double p, double epsilon0,
                                int n_theta = 1025);

struct ResolventBoundReport {
    std::vector<double> lambdas;
    std::vector<double> ratios;         // r(λ) = max over corpus of ‖Ψ‖_X / ‖F‖_X
    std::vector<double> scaled;         // (1 + |λ|)·r(λ)
    double constant = 0.0;              // max of scaled
    double spread = 0.0;                // max / min of scaled
    double tail_slope = 0.0;            // log-log slope of r over |λ| ≥ tail_start
    bool bounded = false;
    bool slope_ok = false;
};

/// Empirical (𝒜 − λ)⁻¹ norms over a corpus for real λ ≤ 0 (λ = 0 uses the finite-difference solve).
ResolventBoundReport verify_resolvent_bound(const std::vector<double>& lambdas, const std::vector<StateVector>& corpus,
                                            const AngularGrid& grid, double p, double tail_start = 100.0,
                                            double max_spread = 10.0, double slope_tol = 0.15);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace opcalc
