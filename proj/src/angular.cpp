#include "opcalc/angular.hpp"

#include "opcalc/discrete.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace opcalc {

CVector kernel_convolution(cplx alpha, const CVector& f, const AngularGrid& grid, KernelQuadrature q) {
    if (!(alpha.real() > 0.0)) throw DomainError("kernel_convolution needs Re alpha > 0");
    if (f.size() != grid.size()) throw DomainError("samples do not match the angular grid");
    return forward_sweep(alpha, f, grid.h(), q) + backward_sweep(alpha, f, grid.h(), q);
}

namespace {

void require_off_cut(cplx lambda) {
    if (lambda == cplx(0.0))
        throw NearSpectrumError("lambda = 0: the kernel formulas degenerate, use solve_A_at_zero");
    if (lambda.real() >= 0.0 && std::abs(lambda.imag()) <= 1e-14 * std::max(1.0, std::abs(lambda))) {
        std::ostringstream os;
        os << "lambda = " << lambda << " lies on the branch cut [0, inf) of sqrt(-lambda); "
           << "this part of the spectrum belongs to the temporal operator";
        throw NearSpectrumError(os.str());
    }
}

void require_nonzero(cplx value, double margin, const char* what, cplx lambda) {
    if (std::abs(value) < margin) {
        std::ostringstream os;
        os << "near-eigenvalue lambda = " << lambda << ": |" << what << "| = " << std::abs(value);
        throw NearSpectrumError(os.str());
    }
}

}  // namespace

ResolventIngredients resolvent_ingredients(cplx lambda, const StateVector& F, const AngularGrid& grid,
                                           const AngularResolventOptions& opts, const CVector* f1pp) {
    require_off_cut(lambda);
    if (F.size() != grid.size()) throw DomainError("state vector does not match the angular grid");
    if (!is_clamped(F.psi1, grid.h(), 1e-2)) throw DomainError("F1 must be clamped: F1 = F1' = 0 at both ends");

    const double w = grid.omega();
    const RVector th = grid.nodes();
    const CVector& F1 = F.psi1;
    const CVector& F2 = F.psi2;
    const CVector F1pp = f1pp ? *f1pp : d2(F1, grid.h());
    if (F1pp.size() != grid.size()) throw DomainError("F1'' does not match the angular grid");

    ResolventIngredients ing;
    ing.lambda = lambda;
    ing.variant = opts.variant;
    const cplx s = std::sqrt(-lambda);
    const cplx a1 = s + I, a2 = s - I;
    ing.s = s;
    ing.alpha1 = a1;
    ing.alpha2 = a2;

    const cplx e1 = std::exp(-w * a1), e2 = std::exp(-w * a2);
    const cplx den1 = 1.0 - e1 * e1, den2 = 1.0 - e2 * e2;
    require_nonzero(den1, opts.spectral_margin, "1 - exp(-2 omega alpha1)", lambda);
    require_nonzero(den2, opts.spectral_margin, "1 - exp(-2 omega alpha2)", lambda);
    require_nonzero(1.0 - e2, opts.spectral_margin, "1 - exp(-omega alpha2)", lambda);
    require_nonzero(1.0 + e2, opts.spectral_margin, "1 + exp(-omega alpha2)", lambda);

    const cplx lam_a = lambda / (a1 * a1 * a2 * a2);
    const Eigen::ArrayXcd ex1 = (-a1 * th.array().cast<cplx>()).exp();
    const Eigen::ArrayXcd ex1r = (-a1 * (w - th.array()).cast<cplx>()).exp();
    const Eigen::ArrayXcd ex2 = (-a2 * th.array().cast<cplx>()).exp();
    const Eigen::ArrayXcd ex2r = (-a2 * (w - th.array()).cast<cplx>()).exp();
    const Eigen::Index last = grid.size() - 1;

    // The F₁″ coefficient is −λ/α₁²: two integrations by parts of the λF₁ term give that sign.
    const CVector g = -F2 - 2.0 * (F1pp - F1) - (lambda / (a1 * a1)) * F1pp;
    ing.I = kernel_convolution(a1, g, grid, opts.quadrature);
    const cplx I0 = ing.I[0], Iw = ing.I[last];
    ing.v = (ex1 / (2.0 * a1 * den1) * (I0 - e1 * Iw) + lam_a * F1pp.array() +
             ex1r / (2.0 * a1 * den1) * (Iw - e1 * I0) - ing.I.array() / (2.0 * a1))
                .matrix();

    ing.J = kernel_convolution(a2, ing.v, grid, opts.quadrature);
    const cplx J0 = ing.J[0], Jw = ing.J[last];
    ing.S = (ex2 / (2.0 * a2 * den2) * (J0 - e2 * Jw) - lam_a * F1.array() + ex2r / (2.0 * a2 * den2) * (Jw - e2 * J0) -
             ing.J.array() / (2.0 * a2))
                .matrix();

    const double fac = opts.variant == UVariant::proof_derived ? std::sin(w) : w;
    const cplx es = std::exp(-w * s);
    ing.U_minus = 1.0 - es * es - 2.0 * s * es * fac;
    ing.U_plus = 1.0 - es * es + 2.0 * s * es * fac;
    require_nonzero(ing.U_minus, opts.spectral_margin, "U-", lambda);
    require_nonzero(ing.U_plus, opts.spectral_margin, "U+", lambda);

    const cplx q = 1.0 / (4.0 * I);
    ing.beta[0] = q / ing.U_minus * (1.0 - e1) / (1.0 - e2) * (J0 - Jw);
    ing.beta[1] = -q / ing.U_minus * (J0 - Jw);
    // β₃, β₄ carry the opposite signs to β₁, β₂; with them ψ₁′ vanishes at both ends.
    ing.beta[2] = q / ing.U_plus * (1.0 + e1) / (1.0 + e2) * (J0 + Jw);
    ing.beta[3] = -q / ing.U_plus * (J0 + Jw);
    return ing;
}

CVector psi1_from(const ResolventIngredients& ing, const AngularGrid& grid) {
    const double w = grid.omega();
    const RVector th = grid.nodes();
    const auto& b = ing.beta;
    const Eigen::ArrayXcd ex1 = (-ing.alpha1 * th.array().cast<cplx>()).exp();
    const Eigen::ArrayXcd ex1r = (-ing.alpha1 * (w - th.array()).cast<cplx>()).exp();
    const Eigen::ArrayXcd ex2 = (-ing.alpha2 * th.array().cast<cplx>()).exp();
    const Eigen::ArrayXcd ex2r = (-ing.alpha2 * (w - th.array()).cast<cplx>()).exp();
    return (ex2 * (b[0] + b[1] + b[2] + b[3]) + ex2r * (b[2] + b[3] - b[0] - b[1]) + ing.S.array() +
            (ex1 - ex2) * (b[1] + b[3]) + (ex1r - ex2r) * (b[3] - b[1]))
        .matrix();
}

StateVector resolve_A(cplx lambda, const StateVector& F, const AngularGrid& grid, const AngularResolventOptions& opts,
                      const CVector* f1pp) {
    const ResolventIngredients ing = resolvent_ingredients(lambda, F, grid, opts, f1pp);
    StateVector out;
    out.psi1 = psi1_from(ing, grid);
    // The closed form vanishes at the ends only up to quadrature error; pin the traces.
    out.psi1[0] = 0.0;
    out.psi1[grid.size() - 1] = 0.0;
    out.psi2 = lambda * out.psi1 + F.psi1;
    out.tag = DomainTag::DA;
    return out;
}

DiscreteAngularResolvent::DiscreteAngularResolvent(const AngularGrid& grid, cplx z)
    : n_(grid.size()), h_(grid.h()), z_(z), d2_(discrete::angular_d2(grid.size(), grid.h())) {
    const int m = n_ - 2;
    Eigen::SparseMatrix<cplx> id(m, m);
    id.setIdentity();
    Eigen::SparseMatrix<cplx> M = discrete::angular_d4(n_, h_) + 2.0 * (1.0 + z) * d2_ + (z - 1.0) * (z - 1.0) * id;
    M.makeCompressed();
    lu_.compute(M);
    if (lu_.info() != Eigen::Success) {
        const double rcond = Eigen::PartialPivLU<CMatrix>(CMatrix(M)).rcond();
        std::ostringstream os;
        os << "singular clamped system at z = " << z << " (reciprocal condition estimate " << rcond << ")";
        throw NearSpectrumError(os.str());
    }
}

void DiscreteAngularResolvent::apply_rows(const CMatrix& F1, const CMatrix& F2, CMatrix& psi1, CMatrix& psi2) const {
    const int m = n_ - 2;
    const CMatrix f1 = F1.middleCols(1, m).transpose();
    const CMatrix f2 = F2.middleCols(1, m).transpose();
    const CMatrix g = -f2 - 2.0 * (d2_ * f1 - f1) - z_ * f1;
    const CMatrix p1 = lu_.solve(g);
    psi1 = CMatrix::Zero(F1.rows(), n_);
    psi2 = CMatrix::Zero(F1.rows(), n_);
    psi1.middleCols(1, m) = p1.transpose();
    psi2.middleCols(1, m) = (z_ * p1 + f1).transpose();
}

StateVector DiscreteAngularResolvent::apply(const StateVector& F) const {
    if (F.size() != n_) throw DomainError("state vector does not match the angular grid");
    CMatrix p1, p2;
    apply_rows(F.psi1.transpose(), F.psi2.transpose(), p1, p2);
    return StateVector{p1.row(0).transpose(), p2.row(0).transpose(), DomainTag::DA};
}

StateVector solve_A_at_zero(const StateVector& F, const AngularGrid& grid) {
    if (F.size() != grid.size()) throw DomainError("state vector does not match the angular grid");
    if (!is_clamped(F.psi1, grid.h(), 1e-2)) throw DomainError("F1 must be clamped: F1 = F1' = 0 at both ends");
    StateVector out = DiscreteAngularResolvent(grid, 0.0).apply(F);
    out.psi2 = F.psi1;
    return out;
}

StateVector sample(const AngularData& F, const AngularGrid& grid) {
    StateVector sv = StateVector::zeros(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        sv.psi1[i] = F.f1(grid.node(i));
        sv.psi2[i] = F.f2(grid.node(i));
    }
    return sv;
}

CVector sample_f1pp(const AngularData& F, const AngularGrid& grid) {
    CVector out(grid.size());
    for (int i = 0; i < grid.size(); ++i) out[i] = F.f1pp(grid.node(i));
    return out;
}

bool LemmaReport::all_hold(double identity_tol) const {
    return identity_error <= identity_tol &&
           std::all_of(inequalities.begin(), inequalities.end(), [](const auto& c) { return c.holds(); });
}

namespace {

// K(α, f)(x) by composite 20-point Gauss–Legendre on each side of x. Panels are short enough
// that |α|·width ≤ 1/4, so the exponential is resolved to roundoff on every panel.
cplx side_integral(cplx alpha, const std::function<cplx(double)>& f, double x, double a, double b) {
    using G = boost::math::quadrature::gauss<double, 20>;
    const int panels = static_cast<int>(std::ceil(4.0 * std::abs(alpha) * (b - a))) + 1;
    const double w = (b - a) / panels;
    cplx sum = 0.0;
    for (int k = 0; k < panels; ++k)
        sum += G::integrate([&](double s) { return std::exp(-std::abs(x - s) * alpha) * f(s); }, a + k * w,
                            a + (k + 1) * w);
    return sum;
}

cplx kernel_exact(cplx alpha, const std::function<cplx(double)>& f, double x, double omega) {
    cplx out = 0.0;
    if (x > 0) out += side_integral(alpha, f, x, 0.0, x);
    if (x < omega) out += side_integral(alpha, f, x, x, omega);
    return out;
}

double identity_defect(cplx alpha, const AngularData& F, double omega) {
    double worst = 0.0, scale = 0.0;
    std::vector<cplx> defects;
    const int points = 17;
    for (int k = 0; k < points; ++k) {
        const double x = omega * k / (points - 1);
        const cplx K = kernel_exact(alpha, F.f1, x, omega);
        const cplx Kpp = kernel_exact(alpha, F.f1pp, x, omega);
        defects.push_back(K - 2.0 / alpha * F.f1(x) - Kpp / (alpha * alpha));
        scale = std::max(scale, std::abs(K));
    }
    for (const cplx& d : defects) worst = std::max(worst, std::abs(d));
    return scale > 0 ? worst / scale : worst;
}

}  // namespace

LemmaReport verify_lemma_bounds(double lambda, const AngularData& F, double omega, double p, double epsilon0,
                                int n_theta) {
    if (!(lambda < 0.0)) throw DomainError("verify_lemma_bounds needs a real lambda < 0");
    const AngularGrid grid(omega, n_theta);
    const double h = grid.h();
    const StateVector Fs = sample(F, grid);
    const CVector f1pp = sample_f1pp(F, grid);

    LemmaReport rep;
    rep.lambda = lambda;
    rep.epsilon0 = epsilon0;
    rep.precondition = lambda <= -epsilon0;

    const ResolventIngredients ing = resolvent_ingredients(lambda, Fs, grid, {}, &f1pp);
    const double s = std::sqrt(-lambda);
    const Eigen::Index last = grid.size() - 1;
    const double B = lp_norm(Fs.psi2, h, p) + 2 * lp_norm(Fs.psi1, h, p) + 3 * lp_norm(f1pp, h, p);
    const double se = std::sqrt(epsilon0);
    const double M1 = 2.0 + 2.0 / (1.0 - std::exp(-2 * omega * se));
    const double f0 = 1.0 - std::exp(-2 * omega * se) - 2 * omega * se * std::exp(-omega * se);
    const double s_low = std::pow(s, 1.0 - 1.0 / p);
    const double v_norm = lp_norm(ing.v, h, p);

    auto add = [&](std::string name, double lhs, double rhs) { rep.inequalities.push_back({std::move(name), lhs, rhs}); };
    add("I_norm", lp_norm(ing.I, h, p), 2.0 / s * B);
    add("I_ends", std::abs(ing.I[0]) + std::abs(ing.I[last]), 2.0 / s_low * B);
    add("v_norm", v_norm, M1 / (-lambda) * B);
    add("J_norm", lp_norm(ing.J, h, p), 2.0 / s * v_norm);
    add("J_ends", std::abs(ing.J[0]) + std::abs(ing.J[last]), 2.0 / s_low * v_norm);

    CVector dl(grid.size()), dr(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        const double th = grid.node(i);
        dl[i] = std::exp(-th * ing.alpha1) - std::exp(-th * ing.alpha2);
        dr[i] = std::exp(-(omega - th) * ing.alpha1) - std::exp(-(omega - th) * ing.alpha2);
    }
    const double exp_rhs = 4.0 / std::pow(s, 1.0 + 1.0 / p);
    add("exp_difference_left", lp_norm(dl, h, p), exp_rhs);
    add("exp_difference_right", lp_norm(dr, h, p), exp_rhs);

    const auto& b = ing.beta;
    add("beta_sums", std::max(std::abs(b[0] + b[1]), std::abs(b[2] + b[3])),
        M1 * B / (omega * (-lambda) * std::pow(s, 2.0 - 1.0 / p) * f0 * (1.0 - std::exp(-omega * se))));
    add("beta_single", std::max(std::abs(b[1]), std::abs(b[3])), M1 * B / (2.0 * (-lambda) * s_low * f0));
    add("U_positive", -std::min(ing.U_minus.real(), ing.U_plus.real()), 0.0);

    rep.identity_error = std::max(identity_defect(ing.alpha1, F, omega), identity_defect(ing.alpha2, F, omega));
    return rep;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("slope fit needs two or more points");
    double mx = 0, my = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]) / n;
        my += std::log(y[i]) / n;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

ResolventBoundReport verify_resolvent_bound(const std::vector<double>& lambdas, const std::vector<StateVector>& corpus,
                                            const AngularGrid& grid, double p, double tail_start, double max_spread,
                                            double slope_tol) {
    ResolventBoundReport rep;
    rep.lambdas = lambdas;
    std::vector<double> tail_x, tail_y;
    for (double lam : lambdas) {
        if (lam > 0.0) throw DomainError("verify_resolvent_bound takes lambda <= 0");
        double r = 0.0;
        for (const StateVector& F : corpus) {
            const StateVector psi = lam == 0.0 ? solve_A_at_zero(F, grid) : resolve_A(lam, F, grid);
            r = std::max(r, x_norm(psi, grid, p) / x_norm(F, grid, p));
        }
        rep.ratios.push_back(r);
        rep.scaled.push_back((1.0 + std::abs(lam)) * r);
        if (std::abs(lam) >= tail_start) {
            tail_x.push_back(std::abs(lam));
            tail_y.push_back(r);
        }
    }
    if (!rep.scaled.empty()) {
        const auto [lo, hi] = std::minmax_element(rep.scaled.begin(), rep.scaled.end());
        rep.constant = *hi;
        rep.spread = *hi / *lo;
        rep.bounded = std::isfinite(rep.constant) && rep.spread <= max_spread;
    }
    if (tail_x.size() >= 2) {
        rep.tail_slope = loglog_slope(tail_x, tail_y);
        rep.slope_ok = std::abs(rep.tail_slope + 1.0) <= slope_tol;
    }
    return rep;
}

}  // namespace opcalc
