#include "opcalc/roots.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace opcalc {

std::string_view to_string(Family f) {
    switch (f) {
        case Family::minus: return "minus";
        case Family::plus: return "plus";
        case Family::proof_minus: return "proof-minus";
        case Family::proof_plus: return "proof-plus";
    }
    return "?";
}

Family family_from_string(std::string_view s) {
    if (s == "minus") return Family::minus;
    if (s == "plus") return Family::plus;
    if (s == "proof-minus" || s == "proof_minus") return Family::proof_minus;
    if (s == "proof-plus" || s == "proof_plus") return Family::proof_plus;
    throw DomainError("unknown determinant family: " + std::string(s));
}

double Determinant::slope() const {
    switch (family) {
        case Family::minus: return 1.0;
        case Family::plus: return -1.0;
        case Family::proof_minus: return std::sin(omega) / omega;
        case Family::proof_plus: return -std::sin(omega) / omega;
    }
    return 0.0;
}

cplx Determinant::value(cplx z) const { return std::sinh(z) - slope() * z; }
cplx Determinant::derivative(cplx z) const { return std::cosh(z) - slope(); }

namespace {

struct Edge {
    cplx a, b;
};

std::vector<Edge> box_edges(const Box& box) {
    const cplx c00{box.re_min, box.im_min}, c10{box.re_max, box.im_min};
    const cplx c11{box.re_max, box.im_max}, c01{box.re_min, box.im_max};
    return {{c00, c10}, {c10, c11}, {c11, c01}, {c01, c00}};
}

// ∮ f′/f dz along the boundary with `panels_per_unit` Gauss panels per unit length.
cplx log_derivative_integral(const Determinant& det, const Box& box, double panels_per_unit, double& min_modulus) {
    using Gauss = boost::math::quadrature::gauss<double, 20>;
    cplx total = 0.0;
    for (const Edge& e : box_edges(box)) {
        const double len = std::abs(e.b - e.a);
        const int panels = std::max(4, static_cast<int>(std::ceil(len * panels_per_unit)));
        const cplx dir = (e.b - e.a) / len;
        for (int k = 0; k < panels; ++k) {
            const double s0 = len * k / panels, s1 = len * (k + 1) / panels;
            total += Gauss::integrate(
                [&](double s) {
                    const cplx z = e.a + dir * s;
                    const cplx f = det.value(z);
                    min_modulus = std::min(min_modulus, std::abs(f));
                    return det.derivative(z) / f * dir;
                },
                s0, s1);
        }
    }
    return total;
}

struct NewtonOutcome {
    cplx z;
    bool converged;
};

NewtonOutcome newton(const Determinant& det, cplx z, double tol, int max_iter) {
    for (int it = 0; it < max_iter; ++it) {
        const cplx f = det.value(z);
        const cplx df = det.derivative(z);
        if (df == 0.0 || !std::isfinite(std::abs(f))) return {z, false};
        const cplx step = f / df;
        z -= step;
        if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z)) && std::abs(det.value(z)) < tol) return {z, true};
    }
    return {z, std::abs(det.value(z)) < tol};
}

std::vector<cplx> asymptotic_seeds(const Determinant& det, const Box& box) {
    // sinh z ≈ e^z/2 = c z for large |z| gives Re z ≈ ln(2|c| y), y ≈ (2k ± ½)π.
    std::vector<cplx> seeds;
    const double c = det.slope();
    if (c == 0.0) return seeds;
    const double offset = c > 0 ? 0.5 * pi : -0.5 * pi;
    for (int k = 0;; ++k) {
        const double y = 2 * pi * k + offset;
        if (y > box.im_max + 2 * pi) break;
        if (y <= 0) continue;
        seeds.emplace_back(std::log(2 * std::abs(c) * y), y);
    }
    return seeds;
}

std::vector<cplx> scan_seeds(const Determinant& det, const Box& box, double step) {
    const int nx = std::max(3, static_cast<int>(std::ceil((box.re_max - box.re_min) / step)) + 1);
    const int ny = std::max(3, static_cast<int>(std::ceil((box.im_max - box.im_min) / step)) + 1);
    const double hx = (box.re_max - box.re_min) / (nx - 1), hy = (box.im_max - box.im_min) / (ny - 1);
    std::vector<double> mod(static_cast<std::size_t>(nx) * ny);
    auto at = [&](int i, int j) -> double& { return mod[static_cast<std::size_t>(j) * nx + i]; };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            at(i, j) = std::abs(det.value({box.re_min + i * hx, box.im_min + j * hy}));
    std::vector<cplx> seeds;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            bool is_min = true;
            for (int dj = -1; dj <= 1 && is_min; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    if (di == 0 && dj == 0) continue;
                    const int ii = i + di, jj = j + dj;
                    if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
                    if (at(ii, jj) < at(i, j)) {
                        is_min = false;
                        break;
                    }
                }
            if (is_min) seeds.emplace_back(box.re_min + i * hx, box.im_min + j * hy);
        }
    return seeds;
}

}  // namespace

RootCount count_roots(const Determinant& det, const Box& box, double boundary_margin) {
    if (!(box.re_min > 0.0) || box.re_max <= box.re_min || box.im_max <= box.im_min)
        throw DomainError("search box must be a nondegenerate rectangle in Re z > 0");
    double density = 4.0;
    double min_mod = std::numeric_limits<double>::infinity();
    cplx prev = log_derivative_integral(det, box, density, min_mod);
    for (int level = 0; level < 7; ++level) {
        if (min_mod < boundary_margin) {
            std::ostringstream os;
            os << "root too close to contour: |f| = " << min_mod << " on the box boundary; perturb the box";
            throw DomainError(os.str());
        }
        density *= 2;
        const cplx next = log_derivative_integral(det, box, density, min_mod);
        const double raw = (next / (2 * pi * I)).real();
        const double change = std::abs(next - prev) / (2 * pi);
        const double rounding = std::abs(raw - std::round(raw));
        if (change < 1e-6 && rounding < 0.1) return {static_cast<int>(std::lround(raw)), raw, min_mod};
        prev = next;
    }
    throw ConvergenceError("argument-principle quadrature did not settle on an integer");
}

RootSearchResult find_roots(const Determinant& det, const Box& box, double tol, const RootSearchOptions& opts) {
    if (!(tol > 0.0)) throw DomainError("root tolerance must be positive");
    RootSearchResult result;
    result.argument_count = count_roots(det, box, opts.boundary_margin).count;

    std::vector<cplx> found;
    auto add = [&](cplx z) {
        for (const cplx& w : found)
            if (std::abs(w - z) < 1e-8 * (1.0 + std::abs(z))) return;
        found.push_back(z);
    };

    double step = opts.scan_step;
    for (int round = 0; round <= opts.refinements; ++round) {
        std::vector<cplx> seeds = round == 0 ? asymptotic_seeds(det, box) : std::vector<cplx>{};
        for (const cplx& s : scan_seeds(det, box, step)) seeds.push_back(s);
        for (const cplx& seed : seeds) {
            const NewtonOutcome out = newton(det, seed, tol, opts.max_iter);
            if (!out.converged) {
                if (box.contains(seed) && round == opts.refinements)
                    result.diagnostics.push_back({seed, out.z, "Newton polish did not converge"});
                continue;
            }
            cplx z = out.z;
            if (z.imag() < 0) z = std::conj(z);
            if (box.contains(z)) add(z);
        }
        if (static_cast<int>(found.size()) >= result.argument_count) break;
        step *= 0.5;
    }

    if (static_cast<int>(found.size()) != result.argument_count) {
        std::ostringstream os;
        os << "found " << found.size() << " roots but the argument principle counts " << result.argument_count;
        result.diagnostics.push_back({cplx{}, cplx{}, os.str()});
    }

    std::sort(found.begin(), found.end(), [](cplx a, cplx b) { return std::abs(a.imag()) < std::abs(b.imag()); });
    int index = 1;
    for (const cplx& z : found) {
        TranscendentalRoot r;
        r.value = z;
        r.family = det.family;
        r.index = index++;
        r.residual = std::abs(det.value(z));
        r.eigenvalue = det.eigenvalue(z);
        r.conjugate_paired = z.imag() != 0.0;
        result.roots.push_back(r);
    }
    return result;
}

double tau(const std::vector<TranscendentalRoot>& roots) {
    if (roots.empty()) throw DomainError("tau of an empty root list");
    double t = std::numeric_limits<double>::infinity();
    for (const auto& r : roots) t = std::min(t, std::abs(r.value.imag()));
    return t;
}

double reference_tau() {
    static const double value = [] {
        std::vector<TranscendentalRoot> all;
        for (Family f : {Family::minus, Family::plus}) {
            auto res = find_roots(Determinant{f, pi / 2}, default_box);
            all.insert(all.end(), res.roots.begin(), res.roots.end());
        }
        return tau(all);
    }();
    return value;
}

Separation check_separation(double omega, double nu, double tau_value) {
    return {omega * nu < tau_value, tau_value - omega * nu};
}

Separation check_separation(double omega, double nu) { return check_separation(omega, nu, reference_tau()); }

std::vector<double> imaginary_axis_roots(const Determinant& det, double y_max) {
    // f(iy) = i (sin y − c y).
    const double c = det.slope();
    auto g = [c](double y) { return std::sin(y) - c * y; };
    std::vector<double> roots;
    const double dy = 0.01;
    double y0 = 1e-3, g0 = g(y0);
    for (double y1 = y0 + dy; y1 <= y_max; y1 += dy) {
        const double g1 = g(y1);
        if (g0 == 0.0 || (g0 < 0) != (g1 < 0)) {
            boost::uintmax_t iters = 100;
            auto bracket = boost::math::tools::toms748_solve(g, y0, y1, g0, g1,
                                                             boost::math::tools::eps_tolerance<double>(50), iters);
            const double y = 0.5 * (bracket.first + bracket.second);
            // z = iω makes α₂ = 0 and is an artefact of the factorization, not an eigenvalue.
            if (std::abs(y - det.omega) > 1e-6) roots.push_back(y);
        }
        y0 = y1;
        g0 = g1;
    }
    return roots;
}

std::vector<cplx> angular_eigenvalues(double omega, const Box& box, double tol) {
    std::vector<cplx> eigs;
    for (Family f : {Family::proof_minus, Family::proof_plus}) {
        const Determinant det{f, omega};
        for (const auto& r : find_roots(det, box, tol).roots) {
            eigs.push_back(r.eigenvalue);
            if (r.conjugate_paired) eigs.push_back(std::conj(r.eigenvalue));
        }
        for (double y : imaginary_axis_roots(det, box.im_max)) eigs.emplace_back(y * y / (omega * omega), 0.0);
    }
    std::sort(eigs.begin(), eigs.end(), [](cplx a, cplx b) {
        const double ra = std::sqrt(a).real(), rb = std::sqrt(b).real();
        if (ra != rb) return ra < rb;
        return a.imag() < b.imag();
    });
    return eigs;
}

double estimate_epsilon0(double omega) {
    const auto eigs = angular_eigenvalues(omega);
    if (eigs.empty()) throw DomainError("no eigenvalues found to estimate epsilon0");
    double d = std::numeric_limits<double>::infinity();
    for (const cplx& l : eigs) d = std::min(d, std::abs(l));
    return 0.5 * d;
}

}  // namespace opcalc
