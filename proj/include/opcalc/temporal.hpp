#pragma once

#include "opcalc/grid.hpp"
#include "opcalc/quadrature.hpp"

#include <Eigen/SparseLU>

#include <vector>

namespace opcalc {

struct SpectralRegion {
    enum class Kind { sigma_nu, sigma_L1 };
    Kind kind = Kind::sigma_nu;
    double nu = 2.0;
    double eps_L1 = 0.1;
};

/// Σ_ν: Re√z > ν, decided as y² + 4ν²x − 4ν⁴ > 0 or x > ν², with ℝ₋ excluded.
/// Σ_{L₁} additionally needs |arg z| ≤ π − 2ε and |z| ≥ 4ν²/sin²ε.
bool in_region(cplx z, const SpectralRegion& region);

struct TemporalResolventOptions {
    double margin_min = 1e-3;
    double decay_tol = 1e-10;
    bool check_decay = true;
    KernelQuadrature quadrature = KernelQuadrature::product;
};

/// (L₁ − λ)⁻¹ on one scalar function of t via the three-integral representation
/// V(t) = e^{t(ν−√λ)}/(2√λ) ∫₀^∞ e^{−s(ν+√λ)}R − 1/(2√λ)[∫₀^t e^{(t−s)(ν−√λ)}R + ∫_t^∞ e^{−(s−t)(ν+√λ)}R],
/// truncated at T.
CVector resolve_L1(cplx lambda, const CVector& R, const TemporalGrid& grid, double nu,
                   const TemporalResolventOptions& opts = {});

/// Column-wise over θ and both components.
SpaceTimeField resolve_L1(cplx lambda, const SpaceTimeField& R, double nu, const TemporalResolventOptions& opts = {});

/// e^{−(ν + Re√λ)T}: size of the dropped part of the outer integral relative to ‖R‖.
double truncation_tail(cplx lambda, double nu, double T);

/// (L₁,h − z)⁻¹ for the Dirichlet finite-difference L₁,h, factored once.
class DiscreteTemporalResolvent {
public:
    DiscreteTemporalResolvent(const TemporalGrid& grid, double nu, cplx z);
    /// Interior rows of `rhs` are used; the result has zero first and last rows.
    [[nodiscard]] CMatrix apply(const CMatrix& rhs) const;

private:
    int n_;
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu_;
};

struct L1BoundSample {
    cplx lambda;
    bool in_sigma_L1 = false;
    double ratio = 0.0;          // max over corpus of ‖V‖_E / ‖R‖_E
    double bound = 0.0;          // (4 / sin ε) / |λ|
    double proof_bound = 0.0;    // 2 / ((Re√λ − ν)√|λ|)
    [[nodiscard]] bool holds() const { return ratio <= bound; }
    [[nodiscard]] bool proof_holds() const { return ratio <= proof_bound; }
};

struct L1BoundReport {
    std::vector<L1BoundSample> samples;
    double max_scaled = 0.0;  // max of ratio·|λ|
    double constant = 0.0;    // 4 / sin ε
    [[nodiscard]] bool all_hold() const;
};

L1BoundReport verify_L1_bound(const std::vector<cplx>& lambdas, const std::vector<SpaceTimeField>& corpus, double nu,
                              double eps_L1, double p, const TemporalResolventOptions& opts = {});

}  // namespace opcalc
