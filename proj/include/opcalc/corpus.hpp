#pragma once

#include "opcalc/angular.hpp"
#include "opcalc/grid.hpp"

#include <cstdint>
#include <vector>

/// Seeded test data shared by the tests, the acceptance binary and the CLI `verify` run.
namespace opcalc::corpus {

/// Clamped shapes on [0, ω] with exact second derivatives, x = θ/ω:
///  0: 1 − cos(2πk x), 1: x²(1 − x)², 2: x³(1 − x)².
AngularData clamped_shape(int kind, int k, double omega, cplx scale = 1.0);

/// F₁ a random combination of clamped shapes, F₂ a random combination of sin(jπθ/ω), j ≤ 3.
std::vector<AngularData> angular_corpus(int n, double omega, std::uint64_t seed);

std::vector<StateVector> sample_corpus(const std::vector<AngularData>& data, const AngularGrid& grid);

/// Smooth separable sums g(t)·(F₁(θ), F₂(θ)) with g(t) = t^a e^{−bt}, a ∈ {1, 2}, b ∈ [2, 3].
std::vector<SpaceTimeField> field_corpus(int n, const TemporalGrid& tg, const AngularGrid& ag, std::uint64_t seed);

/// A decaying scalar profile in each column, for the temporal resolvent: t^a e^{−bt}·c(θ),
/// with b ≥ 3 so the tail at T = 16 is far below 1e−10 of the peak.
std::vector<SpaceTimeField> temporal_corpus(int n, const TemporalGrid& tg, const AngularGrid& ag, std::uint64_t seed);

/// V* = (t²e^{−2t} sin²(πθ/ω), t e^{−2t} x²(1 − x)²), zero on every boundary row and column.
SpaceTimeField manufactured(const TemporalGrid& tg, const AngularGrid& ag);

/// n points of Σ_{L₁}: |z| log-uniform in [r_min, r_max], |arg z| ≤ π − 2ε, with
/// r_min = 1.05·4ν²/sin²ε unless larger.
std::vector<cplx> sigma_L1_samples(int n, double nu, double eps, std::uint64_t seed, double r_max = 1e5);

struct LemmaCase {
    double lambda;
    double omega;
    AngularData data;
};

/// λ log-uniform in [−10³, −ε₀(ω)·1.5], ω drawn from {π/3, π/2, 3π/4}.
std::vector<LemmaCase> lemma_cases(int n, std::uint64_t seed);

}  // namespace opcalc::corpus
