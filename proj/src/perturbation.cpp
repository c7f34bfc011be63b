#include "opcalc/perturbation.hpp"

#include "opcalc/discrete.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace opcalc {

namespace {

void zero_boundary(SpaceTimeField& V) {
    const Eigen::Index nt = V.tgrid.size(), na = V.agrid.size();
    for (CMatrix* c : {&V.v1, &V.v2}) {
        c->row(0).setZero();
        c->row(nt - 1).setZero();
        c->col(0).setZero();
        c->col(na - 1).setZero();
    }
}

double peak(const SpaceTimeField& V) {
    return std::max(V.v1.cwiseAbs().maxCoeff(), V.v2.cwiseAbs().maxCoeff());
}

}  // namespace

SpaceTimeField apply_P1(const SpaceTimeField& V) {
    SpaceTimeField out(V.tgrid, V.agrid);
    for (int m = 0; m < V.tgrid.size(); ++m) {
        StateVector s = apply_A0(V.state(m), V.agrid);
        const double w = -std::exp(-2.0 * V.tgrid.node(m));
        s.psi1 *= w;
        s.psi2 *= w;
        out.set_state(m, s);
    }
    return out;
}

SpaceTimeField apply_P2(const SpaceTimeField& V, double nu) {
    SpaceTimeField out = apply_B2(V, nu);
    for (int m = 0; m < V.tgrid.size(); ++m) out.v2.row(m) *= -std::exp(-2.0 * V.tgrid.node(m));
    return out;
}

SpaceTimeField apply_full(const SpaceTimeField& V, const ProblemParams& params) {
    SpaceTimeField pert = apply_P1(V) + apply_P2(V, params.nu());
    zero_boundary(pert);
    SpaceTimeField out = discrete::apply_sum(V, params.nu());
    out += cplx(params.k * params.rho * params.rho) * pert;
    return out;
}

double IterationTrace::max_ratio_after(int skip) const {
    double worst = 0.0;
    for (std::size_t i = static_cast<std::size_t>(std::max(skip, 0)); i < ratios.size(); ++i)
        worst = std::max(worst, ratios[i]);
    return worst;
}

FullSolution solve_full(const SpaceTimeField& F, const ProblemParams& params, const SumInverse& inverse,
                        const FixedPointOptions& opts, double p) {
    params.validate();
    if (opts.rho0 && params.rho > *opts.rho0 && !opts.allow_above_rho0) {
        std::ostringstream os;
        os << "rho = " << params.rho << " exceeds the estimated rho0 = " << *opts.rho0
           << "; set allow_above_rho0 to override";
        throw DomainError(os.str());
    }
    const double nu = params.nu();
    const cplx coupling = params.k * params.rho * params.rho;
    const double normF = e_norm(F, p);

    FullSolution sol{SpaceTimeField(F.tgrid, F.agrid), {}, 0.0};
    if (normF == 0.0) {
        sol.trace.converged = true;
        return sol;
    }

    SpaceTimeField W = F;
    SpaceTimeField V = inverse(W);
    int rising = 0;
    for (int n = 0; n < opts.max_iter; ++n) {
        SpaceTimeField next = F;
        if (coupling != 0.0) {
            SpaceTimeField pert = apply_P1(V) + apply_P2(V, nu);
            zero_boundary(pert);
            next -= coupling * pert;
        }
        const double inc = e_norm(next - W, p) / normF;
        if (!sol.trace.increments.empty()) {
            const double prev = sol.trace.increments.back();
            const double ratio = prev > 0 ? inc / prev : 0.0;
            sol.trace.ratios.push_back(ratio);
            rising = ratio >= 1.0 ? rising + 1 : 0;
        }
        sol.trace.increments.push_back(inc);
        W = std::move(next);
        if (!std::isfinite(inc) || rising >= opts.divergence_window) {
            std::ostringstream os;
            os << "rho exceeds contraction threshold: increment ratio >= 1 for " << rising
               << " consecutive steps (last increment " << inc << ")";
            throw DivergenceError(os.str(), sol.trace);
        }
        if (inc <= opts.fp_tol) {
            sol.trace.converged = true;
            break;
        }
        V = inverse(W);
    }
    if (!sol.trace.converged) {
        std::ostringstream os;
        os << "fixed-point iteration did not reach " << opts.fp_tol << " in " << opts.max_iter << " steps";
        throw ConvergenceError(os.str());
    }
    sol.V = inverse(W);
    sol.residual = e_norm(apply_full(sol.V, params) - F, p) / normF;
    return sol;
}

double estimate_rho0(double k, const std::vector<SpaceTimeField>& probes, double nu, const SumInverse& inverse,
                     double p, double safety, int power_steps) {
    if (k < 0) throw DomainError("k must be nonnegative");
    if (probes.empty()) throw DomainError("estimate_rho0 needs at least one probe field");
    if (k == 0.0) return std::numeric_limits<double>::infinity();
    double q1 = 0.0;
    for (const SpaceTimeField& probe : probes) {
        SpaceTimeField F = probe;
        for (int step = 0; step <= power_steps; ++step) {
            const double nf = e_norm(F, p);
            if (nf == 0.0) break;
            const SpaceTimeField V = inverse(F);
            SpaceTimeField pert = apply_P1(V) + apply_P2(V, nu);
            zero_boundary(pert);
            const double np = e_norm(pert, p);
            q1 = std::max(q1, np / nf);
            if (np == 0.0) break;
            F = cplx(1.0 / np) * pert;
        }
    }
    if (q1 == 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt(safety / (k * q1));
}

bool RegularityReport::finite() const {
    return std::isfinite(norm_Vtt) && std::isfinite(norm_AV) && std::isfinite(c_tt) && std::isfinite(c_A);
}

bool RegularityReport::passed() const {
    return finite() && c_tt <= thresholds.c_max && c_A <= thresholds.c_max && origin <= thresholds.origin_tol &&
           trace_value <= thresholds.origin_tol && trace_slope <= thresholds.trace_tol && tail <= thresholds.decay_tol;
}

RegularityReport classical_regularity_check(const SpaceTimeField& V, const SpaceTimeField& F, double p,
                                            const RegularityThresholds& thresholds) {
    RegularityReport rep;
    rep.thresholds = thresholds;
    rep.norm_F = e_norm(F, p);
    const double top = peak(V);
    if (top == 0.0) return rep;

    SpaceTimeField Vtt(V.tgrid, V.agrid);
    Vtt.v1 = dt2(V.v1, V.tgrid.h());
    Vtt.v2 = dt2(V.v2, V.tgrid.h());
    rep.norm_Vtt = e_norm(Vtt, p);

    const Eigen::Index na = V.agrid.size(), nt = V.tgrid.size();
    const double edge = std::max({V.v1.col(0).cwiseAbs().maxCoeff(), V.v1.col(na - 1).cwiseAbs().maxCoeff(),
                                  V.v2.col(0).cwiseAbs().maxCoeff(), V.v2.col(na - 1).cwiseAbs().maxCoeff()});
    rep.trace_value = edge / top;
    // The equation's own closure, so 𝒜V is the operator the solve inverted.
    if (rep.trace_value <= thresholds.origin_tol) rep.norm_AV = e_norm(apply_A(V, Closure::ghost), p);
    else rep.norm_AV = std::numeric_limits<double>::infinity();

    rep.c_tt = rep.norm_F > 0 ? rep.norm_Vtt / rep.norm_F : std::numeric_limits<double>::infinity();
    rep.c_A = rep.norm_F > 0 ? rep.norm_AV / rep.norm_F : std::numeric_limits<double>::infinity();
    rep.origin = std::max(V.v1.row(0).cwiseAbs().maxCoeff(), V.v2.row(0).cwiseAbs().maxCoeff()) / top;
    rep.tail = std::max(V.v1.row(nt - 2).cwiseAbs().maxCoeff(), V.v2.row(nt - 2).cwiseAbs().maxCoeff()) / top;

    // Endpoint slopes of ψ₁ times ω relative to max|ψ₁|, worst over t. Same fourth-order
    // one-sided differences as is_clamped.
    const double h = V.agrid.h();
    const double scale1 = V.v1.cwiseAbs().maxCoeff();
    if (scale1 > 0 && na >= 5) {
        double slope = 0.0;
        for (Eigen::Index m = 0; m < nt; ++m) {
            const auto r = V.v1.row(m);
            const double left = std::abs(-25.0 * r(0) + 48.0 * r(1) - 36.0 * r(2) + 16.0 * r(3) - 3.0 * r(4));
            const double right = std::abs(25.0 * r(na - 1) - 48.0 * r(na - 2) + 36.0 * r(na - 3) -
                                          16.0 * r(na - 4) + 3.0 * r(na - 5));
            slope = std::max({slope, left / (12.0 * h), right / (12.0 * h)});
        }
        rep.trace_slope = slope * V.agrid.omega() / scale1;
    }
    return rep;
}

double SectorField::trace_value() const {
    if (u.size() == 0) return 0.0;
    return std::max(u.col(0).cwiseAbs().maxCoeff(), u.col(u.cols() - 1).cwiseAbs().maxCoeff());
}

double SectorField::trace_normal_derivative() const {
    const Eigen::Index n = u.cols();
    if (n < 3 || u.rows() == 0) return 0.0;
    const double h = thetas[1] - thetas[0];
    double worst = 0.0;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        const auto r = u.row(i);
        const double left = std::abs(-3.0 * r(0) + 4.0 * r(1) - r(2)) / (2.0 * h);
        const double right = std::abs(3.0 * r(n - 1) - 4.0 * r(n - 2) + r(n - 3)) / (2.0 * h);
        worst = std::max({worst, left / radii[i], right / radii[i]});
    }
    return worst;
}

SectorField reconstruct_u(const SpaceTimeField& V, const ProblemParams& params, const PolarGrid& polar) {
    params.validate();
    const double rho = params.rho, nu = params.nu(), T = V.tgrid.T();
    const double r_min = rho * std::exp(-T);
    SectorField out;
    out.radii = polar.radii;
    const RVector th = V.agrid.nodes();
    out.thetas.assign(th.data(), th.data() + th.size());
    out.u = CMatrix::Zero(static_cast<Eigen::Index>(polar.radii.size()), V.agrid.size());
    for (double r : polar.radii)
        if (!(r > r_min && r <= rho)) {
            std::ostringstream os;
            os << "radius " << r << " is outside the resolved annulus (" << r_min << ", " << rho << "]";
            throw DomainError(os.str());
        }

    using Spline = boost::math::interpolators::cardinal_cubic_b_spline<double>;
    const double h = V.tgrid.h();
    std::vector<double> re(V.tgrid.size()), im(V.tgrid.size());
    for (Eigen::Index j = 0; j < V.agrid.size(); ++j) {
        for (Eigen::Index m = 0; m < V.tgrid.size(); ++m) {
            re[m] = V.v1(m, j).real();
            im[m] = V.v1(m, j).imag();
        }
        const Spline sre(re.begin(), re.end(), 0.0, h);
        const Spline sim(im.begin(), im.end(), 0.0, h);
        for (std::size_t i = 0; i < polar.radii.size(); ++i) {
            const double r = polar.radii[i];
            const double t = std::clamp(std::log(rho / r), 0.0, T);
            out.u(static_cast<Eigen::Index>(i), j) = r * std::exp(-nu * t) * cplx(sre(t), sim(t));
        }
    }
    return out;
}

CMatrix v1_from_u(const std::function<cplx(double, double)>& u, const TemporalGrid& tg, const AngularGrid& ag,
                  const ProblemParams& params) {
    const double nu = params.nu();
    CMatrix out(tg.size(), ag.size());
    for (int m = 0; m < tg.size(); ++m) {
        const double t = tg.node(m);
        const double r = params.rho * std::exp(-t);
        for (int j = 0; j < ag.size(); ++j) out(m, j) = std::exp(nu * t) * u(r, ag.node(j)) / r;
    }
    return out;
}

}  // namespace opcalc
