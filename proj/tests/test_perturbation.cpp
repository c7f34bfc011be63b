#include "opcalc/corpus.hpp"
#include "opcalc/dpg.hpp"
#include "opcalc/perturbation.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace opcalc;

namespace {

const TemporalGrid kTg(16.0, 64);
const AngularGrid kAg(pi / 2, 32);

SumInverse direct_inverse(double nu) {
    auto solver = std::make_shared<DirectSumSolver>(kTg, kAg, nu);
    return [solver](const SpaceTimeField& F) { return solver->solve(F); };
}

double rel(const SpaceTimeField& a, const SpaceTimeField& b) { return e_norm(a - b, 2.0) / e_norm(b, 2.0); }

CVector profile(const AngularGrid& g) {
    CVector v(g.size());
    for (int i = 0; i < g.size(); ++i) v[i] = std::pow(std::sin(2.0 * g.node(i)), 2);
    return v;
}

}  // namespace

TEST_SUITE("perturbation") {

TEST_CASE("P1 examples") {
    const TemporalGrid tg(2.0, 41);
    const AngularGrid ag(pi / 2, 33);
    SpaceTimeField V(tg, ag);
    CHECK(e_norm(apply_P1(V), 2.0) == 0.0);

    const CVector phi = profile(ag);
    const CVector kernel = -(d2(phi, ag.h()) + phi);
    for (int m = 0; m < tg.size(); ++m) {
        V.v1.row(m) = phi.transpose();
        V.v2.row(m) = kernel.transpose();
    }
    CHECK(apply_P1(V).v2.cwiseAbs().maxCoeff() < 1e-12);

    SpaceTimeField W(tg, ag);
    for (int m = 0; m < tg.size(); ++m) W.v2.row(m) = std::exp(2.0 * tg.node(m)) * phi.transpose();
    const SpaceTimeField P = apply_P1(W);
    for (int m = 0; m < tg.size(); ++m) CHECK((P.v2.row(m).transpose() + phi).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("P2 examples") {
    const double nu = 2.0;
    const TemporalGrid tg(2.0, 801);
    const AngularGrid ag(pi / 2, 9);
    SpaceTimeField V(tg, ag);
    CHECK(e_norm(apply_P2(V, nu), 2.0) == 0.0);
    const CVector phi = profile(ag);
    for (int m = 0; m < tg.size(); ++m) V.v1.row(m) = std::exp(nu * tg.node(m)) * phi.transpose();
    CHECK(apply_P2(V, nu).v2.cwiseAbs().maxCoeff() < 1e-4);
    for (int m = 0; m < tg.size(); ++m) V.v1.row(m) = tg.node(m) * phi.transpose();
    const SpaceTimeField P = apply_P2(V, nu);
    for (int m = 0; m < tg.size(); ++m) {
        const double t = tg.node(m);
        CHECK((P.v2.row(m).transpose() - 2.0 * std::exp(-2.0 * t) * (1.0 - nu * t) * phi).cwiseAbs().maxCoeff() <
              1e-9);
    }
}

TEST_CASE("k = 0 reduces to one inverse application") {
    ProblemParams P;
    P.k = 0.0;
    const auto inv = direct_inverse(P.nu());
    const auto F = corpus::field_corpus(1, kTg, kAg, 41).front();
    const FullSolution s = solve_full(F, P, inv);
    CHECK(s.trace.converged);
    CHECK(s.trace.iterations() <= 1);
    CHECK(rel(s.V, inv(F)) < 1e-14);
}

TEST_CASE("small perturbation converges geometrically and recovers a manufactured field") {
    ProblemParams P;
    P.k = 1.0;
    P.rho = 0.3;
    const auto inv = direct_inverse(P.nu());
    const SpaceTimeField Vs = corpus::manufactured(kTg, kAg);
    const SpaceTimeField F = apply_full(Vs, P);
    const FullSolution s = solve_full(F, P, inv);
    CHECK(s.trace.converged);
    CHECK(s.trace.iterations() <= 5);
    CHECK(s.trace.max_ratio_after() < 0.1);
    CHECK(rel(s.V, Vs) < 1e-7);
    CHECK(s.residual < 1e-7);
}

TEST_CASE("rho0 scales as 1/sqrt(k) and brackets the contraction") {
    const double nu = 2.0;
    const auto inv = direct_inverse(nu);
    const auto probes = corpus::field_corpus(3, kTg, kAg, 43);
    const double r1 = estimate_rho0(1.0, probes, nu, inv);
    const double r4 = estimate_rho0(4.0, probes, nu, inv);
    CHECK(r4 == doctest::Approx(r1 / 2.0).epsilon(1e-12));
    CHECK(std::isinf(estimate_rho0(0.0, probes, nu, inv)));

    ProblemParams P;
    P.rho = r1;
    FixedPointOptions fo;
    fo.rho0 = r1;
    const FullSolution ok = solve_full(probes[0], P, inv, fo);
    CHECK(ok.trace.converged);
    CHECK(ok.trace.max_ratio_after() < 1.0);

    P.rho = 4.0 * r1;
    CHECK_THROWS_AS(solve_full(probes[0], P, inv, fo), DomainError);
    fo.allow_above_rho0 = true;
    CHECK_THROWS_AS(solve_full(probes[0], P, inv, fo), DivergenceError);
}

TEST_CASE("regularity report") {
    const SpaceTimeField Z(kTg, kAg);
    const RegularityReport zero = classical_regularity_check(Z, Z);
    CHECK(zero.norm_Vtt == 0.0);
    CHECK(zero.norm_AV == 0.0);
    CHECK(zero.passed());

    const double nu = 2.0;
    const SpaceTimeField Vs = corpus::manufactured(kTg, kAg);
    ProblemParams P;
    const RegularityReport rep = classical_regularity_check(Vs, apply_full(Vs, P));
    CHECK(rep.finite());
    CHECK(rep.passed());
    (void)nu;

    SpaceTimeField bad = Vs;
    bad.v1.row(0).setConstant(1.0);
    CHECK_FALSE(classical_regularity_check(bad, apply_full(Vs, P)).passed());
}

TEST_CASE("sector reconstruction") {
    ProblemParams P;
    P.rho = 2.0;
    const TemporalGrid tg(8.0, 801);
    const AngularGrid ag(pi / 2, 33);
    const PolarGrid polar{{0.01, 0.1, 0.5, 1.0, 2.0}};

    const SectorField zero = reconstruct_u(SpaceTimeField(tg, ag), P, polar);
    CHECK(zero.u.norm() == 0.0);

    // u(r, θ) = r³ sin²(2θ): clamped in θ.
    auto u = [](double r, double th) { return cplx(r * r * r * std::pow(std::sin(2.0 * th), 2)); };
    SpaceTimeField V(tg, ag);
    V.v1 = v1_from_u(u, tg, ag, P);
    const SectorField S = reconstruct_u(V, P, polar);
    double err = 0.0;
    for (std::size_t i = 0; i < polar.radii.size(); ++i)
        for (int j = 0; j < ag.size(); ++j)
            err = std::max(err, std::abs(S.u(static_cast<Eigen::Index>(i), j) - u(polar.radii[i], ag.node(j))));
    CHECK(err < 1e-6);
    CHECK(S.trace_value() < 1e-12);
    CHECK(S.trace_normal_derivative() < 0.05);
    CHECK_THROWS_AS(reconstruct_u(V, P, PolarGrid{{3.0}}), DomainError);
}

}
