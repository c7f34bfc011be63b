#include "opcalc/bip.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace opcalc {

double bip_lambda1(double xi) { return 2.0 + 4.0 * pi * xi + 4.0 * pi * pi * xi * xi; }
double bip_lambda2(double xi) { return 2.0 - 4.0 * pi * xi + 4.0 * pi * pi * xi * xi; }

namespace {

cplx ipow(double lambda, cplx e) { return std::exp(e * std::log(lambda)); }

}  // namespace

cplx multiplier(double xi, double r) {
    if (xi == 0.0) return -ipow(2.0, I * r - 1.0) * I * r;
    const double l1 = bip_lambda1(xi), l2 = bip_lambda2(xi);
    const double delta = std::log1p(8.0 * pi * xi / l2);
    const double mean = 0.5 * (std::log(l1) + std::log(l2));
    return -2.0 * I * std::sin(0.5 * r * delta) * std::exp(I * r * mean) / (8.0 * pi * xi);
}

cplx xi_times_mprime(double xi, double r) {
    if (xi == 0.0) return 3.0 * ipow(2.0, I * r - 5.0) * I * r;
    const double l1 = bip_lambda1(xi), l2 = bip_lambda2(xi);
    const cplx e = I * r - 1.0;
    const cplx first = (I * r / 32.0) * (ipow(l2, e) * (-1.0 + 2.0 * pi * xi) - ipow(l1, e) * (1.0 + 2.0 * pi * xi));
    // (λ₂^{ir} − λ₁^{ir})/(32πξ) = m/4.
    return first - 0.25 * multiplier(xi, r);
}

cplx xi_dm_dxi(double xi, double r) {
    if (xi == 0.0) return 0.0;
    const double l1 = bip_lambda1(xi), l2 = bip_lambda2(xi);
    const cplx e = I * r - 1.0;
    const cplx first = (I * r / 2.0) * (ipow(l2, e) * (-1.0 + 2.0 * pi * xi) - ipow(l1, e) * (1.0 + 2.0 * pi * xi));
    return first - multiplier(xi, r);
}

std::vector<double> symmetric_log_grid(double lo, double hi, int per_decade) {
    if (!(lo > 0 && hi > lo) || per_decade < 1) throw DomainError("symmetric_log_grid needs 0 < lo < hi");
    const double decades = std::log10(hi / lo);
    const int n = static_cast<int>(std::ceil(decades * per_decade)) + 1;
    std::vector<double> pos(n);
    for (int i = 0; i < n; ++i) pos[i] = lo * std::pow(10.0, decades * i / (n - 1));
    std::vector<double> out;
    out.reserve(2 * n);
    for (int i = n - 1; i >= 0; --i) out.push_back(-pos[i]);
    out.insert(out.end(), pos.begin(), pos.end());
    return out;
}

bool SupBounds::attained_at_origin(double rel_tol) const {
    return sup_m <= limit_m * (1.0 + rel_tol) && sup_xm <= limit_xm * (1.0 + rel_tol);
}

SupBounds sup_bounds(double r, const std::vector<double>& grid) {
    if (grid.empty()) throw DomainError("empty frequency grid");
    SupBounds b;
    b.r = r;
    double smallest = std::abs(grid.front());
    for (double xi : grid) smallest = std::min(smallest, std::abs(xi));
    bool limit_set = false;
    for (double xi : grid) {
        const double am = std::abs(multiplier(xi, r));
        const double ax = std::abs(xi_times_mprime(xi, r));
        const double at = std::abs(xi_dm_dxi(xi, r));
        // Strict comparisons keep the first (smallest |ξ| on the negative side) maximizer on ties.
        if (am > b.sup_m) { b.sup_m = am; b.argmax_m = xi; }
        if (ax > b.sup_xm) { b.sup_xm = ax; b.argmax_xm = xi; }
        if (at > b.sup_true_derivative) { b.sup_true_derivative = at; b.argmax_true_derivative = xi; }
        if (!limit_set && std::abs(xi) == smallest) {
            b.limit_m = am;
            b.limit_xm = ax;
            limit_set = true;
        }
    }
    b.mikhlin_sum = b.sup_m + b.sup_xm;
    return b;
}

double GammaReport::max_error() const {
    double w = 0.0;
    for (const auto& s : samples) w = std::max(w, s.error);
    return w;
}

double GammaReport::max_flip_error() const {
    double w = 0.0;
    for (const auto& s : samples) w = std::max(w, s.flip_error);
    return w;
}

GammaReport gamma_reflection_check(const std::vector<cplx>& z_samples) {
    GammaReport rep;
    for (const cplx& z : z_samples) {
        const double eps = z.real();
        if (!(eps > 0.0 && eps < 1.0)) {
            std::ostringstream os;
            os << "sample z = " << z << " needs 0 < Re z < 1";
            throw DomainError(os.str());
        }
        const cplx s = std::sin(pi * z);
        if (std::abs(s) < 1e-8) {
            std::ostringstream os;
            os << "sample z = " << z << " is too close to a pole of 1/sin(pi z)";
            throw DomainError(os.str());
        }
        // The integrand's poles sit at x = ±iπ. Shifting the line to Im x = δ, toward the pole on
        // the side where |e^{−zx}| shrinks, keeps the terms near the size of the result instead of
        // cancelling down to e^{−π|Im z|}. The step keeps the trapezoid error e^{−2π·0.5/h} below
        // that size as well.
        const double r = -z.imag();
        const double delta = r == 0.0 ? 0.0 : std::copysign(pi - 0.5, r);
        const double h = pi / (4.0 * std::abs(r) + 40.0);
        const double y_hi = 40.0 / eps, y_lo = -40.0 / (1.0 - eps);
        const cplx a = 1.0 - z;
        auto f = [&](double y) {
            const cplx x(y, delta);
            // e^{(1−z)x}/(eˣ + 1), written to avoid overflow on either side.
            return y > 0 ? std::exp(-z * x) / (1.0 + std::exp(-x)) : std::exp(a * x) / (std::exp(x) + 1.0);
        };
        cplx sum = 0.0;
        const long n_lo = static_cast<long>(std::floor(y_lo / h)), n_hi = static_cast<long>(std::ceil(y_hi / h));
        for (long k = n_lo; k <= n_hi; ++k) sum += f(k * h);
        GammaSample g;
        g.z = z;
        g.integral = h * sum;
        g.reflection = pi / s;
        g.shifted = pi / std::sin(pi * (z - 1.0));
        g.error = std::abs(g.integral - g.reflection) / std::abs(g.reflection);
        g.flip_error = std::abs(g.integral + g.shifted) / std::abs(g.reflection);
        rep.samples.push_back(g);
    }
    return rep;
}

}  // namespace opcalc
