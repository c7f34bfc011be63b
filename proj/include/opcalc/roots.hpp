#pragma once

#include "opcalc/types.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace opcalc {

/// Determinant families whose zeros give the angular spectrum.
///  - minus, plus: sinh z ∓ z.
///  - proof_minus, proof_plus: sinh z ∓ (sin ω / ω) z, i.e. sinh(ω√−λ) ∓ √−λ sin ω with z = ω√−λ.
enum class Family { minus, plus, proof_minus, proof_plus };

std::string_view to_string(Family f);
Family family_from_string(std::string_view s);

/// One determinant, with ω attached so that roots can be turned into eigenvalues.
struct Determinant {
    Family family = Family::minus;
    double omega = pi / 2;

    [[nodiscard]] double slope() const;  // the c in sinh z ∓ c z, signed
    [[nodiscard]] cplx value(cplx z) const;
    [[nodiscard]] cplx derivative(cplx z) const;
    [[nodiscard]] cplx eigenvalue(cplx z) const { return -z * z / (omega * omega); }
};

struct Box {
    double re_min, re_max, im_min, im_max;

    [[nodiscard]] bool contains(cplx z) const {
        return z.real() > re_min && z.real() < re_max && z.imag() > im_min && z.imag() < im_max;
    }
};

inline constexpr Box default_box{0.1, 40.0, 0.0, 40.0};

struct TranscendentalRoot {
    cplx value;
    Family family;
    int index = 0;          // ordinal by increasing |Im|
    double residual = 0.0;  // |determinant(value)|
    cplx eigenvalue;
    bool conjugate_paired = true;  // the conjugate is a root too and is not stored
};

struct RootDiagnostic {
    cplx seed;
    cplx last_iterate;
    std::string message;
};

struct RootSearchOptions {
    int max_iter = 50;
    double boundary_margin = 1e-6;
    double scan_step = 0.25;
    int refinements = 4;
};

struct RootSearchResult {
    std::vector<TranscendentalRoot> roots;
    std::vector<RootDiagnostic> diagnostics;
    int argument_count = 0;  // winding number of the box
};

/// All roots of the determinant inside the box (upper half only, Re > 0),
/// Newton-polished, cross-checked against count_roots.
RootSearchResult find_roots(const Determinant& det, const Box& box, double tol = 1e-12,
                            const RootSearchOptions& opts = {});

struct RootCount {
    int count = 0;
    double raw = 0.0;           // (1/2πi)∮ f′/f dz before rounding
    double min_boundary = 0.0;  // smallest |f| sampled on the boundary
};

/// Argument-principle count of zeros inside the box.
RootCount count_roots(const Determinant& det, const Box& box, double boundary_margin = 1e-6);

/// min |Im| over a root list.
double tau(const std::vector<TranscendentalRoot>& roots);

/// τ from both sinh z ∓ z families on the default box, computed once.
double reference_tau();

struct Separation {
    bool holds = false;
    double margin = 0.0;  // τ − ων
};

Separation check_separation(double omega, double nu, double tau);
Separation check_separation(double omega, double nu);

/// Roots of the proof families on the imaginary axis, z = iy with y > 0, y ≠ ω.
/// They give real positive eigenvalues λ = (y/ω)² and appear once sin ω / ω is small.
std::vector<double> imaginary_axis_roots(const Determinant& det, double y_max);

/// Eigenvalues of 𝒜 from the proof families (both conjugates), sorted by Re√λ.
std::vector<cplx> angular_eigenvalues(double omega, const Box& box = default_box, double tol = 1e-12);

/// Half the distance from 0 to the nearest eigenvalue.
double estimate_epsilon0(double omega);

}  // namespace opcalc
