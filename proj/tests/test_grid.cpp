#include "opcalc/grid.hpp"

#include <doctest.h>

#include <cmath>

using namespace opcalc;

namespace {

CVector sampled(const AngularGrid& g, double (*f)(double)) {
    CVector v(g.size());
    for (int i = 0; i < g.size(); ++i) v[i] = f(g.node(i));
    return v;
}

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("params validation and derived nu") {
    ProblemParams P;
    CHECK(P.nu() == doctest::Approx(2.0));
    P.p = 4.0;
    CHECK(P.nu() == doctest::Approx(2.5));
    CHECK_NOTHROW(P.validate());
    P.p = 1.0;
    CHECK_THROWS_AS(P.validate(), DomainError);
    P = {};
    P.omega = 7.0;
    CHECK_THROWS_AS(P.validate(), DomainError);
    P = {};
    P.k = 0.0;
    CHECK_NOTHROW(P.validate());
    P.rho = 0.0;
    CHECK_THROWS_AS(P.validate(), DomainError);
    CHECK_THROWS_AS(AngularGrid(1.0, 6), DomainError);
    CHECK_THROWS_AS(TemporalGrid(-1.0, 10), DomainError);
}

TEST_CASE("lp_norm examples") {
    const AngularGrid g(pi / 2, 257);
    CHECK(lp_norm(CVector::Zero(g.size()), g.h(), 2.0) == 0.0);
    CHECK(lp_norm(CVector::Ones(g.size()), g.h(), 2.0) == doctest::Approx(std::sqrt(g.omega())).epsilon(1e-12));
    const CVector s = sampled(g, [](double x) { return std::sin(2.0 * x); });
    CHECK(lp_norm(s, g.h(), 2.0) == doctest::Approx(std::sqrt(g.omega() / 2)).epsilon(1e-4));
    CHECK_THROWS_AS(lp_norm(s, g.h(), 1.0), DomainError);
}

TEST_CASE("stencils are exact on low-degree polynomials") {
    const AngularGrid g(1.3, 41);
    const CVector q = sampled(g, [](double x) { return x * x; });
    const CVector q4 = sampled(g, [](double x) { return x * x * x * x; });
    const CVector a = d2(q, g.h());
    const CVector b = d4(q4, g.h());
    for (int i = 0; i < g.size(); ++i) {
        CHECK(std::abs(a[i] - 2.0) < 1e-8);
        CHECK(std::abs(b[i] - 24.0) < 1e-4);
    }
}

TEST_CASE("d2 of sin converges at second order") {
    double prev = 0.0;
    for (int n : {33, 65, 129}) {
        const AngularGrid g(pi / 2, n);
        const CVector s = sampled(g, [](double x) { return std::sin(x); });
        const CVector dd = d2(s, g.h());
        double err = 0.0;
        for (int i = 1; i + 1 < n; ++i) err = std::max(err, std::abs(dd[i] + s[i]));
        if (prev > 0) CHECK(std::log2(prev / err) == doctest::Approx(2.0).epsilon(0.1));
        prev = err;
    }
}

TEST_CASE("apply_A on a clamped profile matches the hand derivative") {
    const double w = pi / 2;
    const AngularGrid g(w, 257);
    const double c = pi / w;
    StateVector sv = StateVector::zeros(g.size(), DomainTag::DA);
    for (int i = 0; i < g.size(); ++i) sv.psi1[i] = std::pow(std::sin(c * g.node(i)), 2);
    const StateVector out = apply_A(sv, g);
    // sin²(cx) = (1 − cos 2cx)/2, so (∂² + 1)² of it is 1/2 − (1 − 4c²)² cos(2cx)/2.
    double err = 0.0, scale = 0.0;
    for (int i = 2; i + 2 < g.size(); ++i) {
        const double x = g.node(i);
        const double exact = -(0.5 - std::pow(1 - 4 * c * c, 2) * std::cos(2 * c * x) / 2);
        err = std::max(err, std::abs(out.psi2[i] - exact));
        scale = std::max(scale, std::abs(exact));
        CHECK(std::abs(out.psi1[i]) == 0.0);
    }
    CHECK(err / scale < 1e-3);
    CHECK(apply_A(StateVector::zeros(g.size(), DomainTag::DA), g).psi2.norm() == 0.0);
    CHECK_THROWS_AS(apply_A(StateVector::zeros(g.size(), DomainTag::X), g), DomainError);
}

TEST_CASE("A0 and B2 examples") {
    const AngularGrid g(pi / 2, 65);
    StateVector sv = StateVector::zeros(g.size());
    for (int i = 0; i < g.size(); ++i) sv.psi2[i] = std::sin(2.0 * g.node(i));
    const StateVector a0 = apply_A0(sv, g);
    CHECK((a0.psi2 - sv.psi2).norm() == 0.0);
    CHECK(a0.psi1.norm() == 0.0);

    // Kernel of 𝒜₀: ψ₂ = −(d2 + 1)ψ₁.
    StateVector k = StateVector::zeros(g.size());
    for (int i = 0; i < g.size(); ++i) k.psi1[i] = std::pow(std::sin(2.0 * g.node(i)), 2);
    k.psi2 = -(d2(k.psi1, g.h()) + k.psi1);
    CHECK(apply_A0(k, g).psi2.cwiseAbs().maxCoeff() < 1e-12);

    const double nu = 2.0;
    const TemporalGrid tg(2.0, 401);
    SpaceTimeField V(tg, g);
    for (int m = 0; m < tg.size(); ++m)
        for (int i = 0; i < g.size(); ++i) V.v1(m, i) = std::exp(nu * tg.node(m)) * std::sin(2.0 * g.node(i));
    const SpaceTimeField B = apply_B2(V, nu);
    CHECK(B.v2.cwiseAbs().maxCoeff() / V.v1.cwiseAbs().maxCoeff() < 1e-3);

    for (int m = 0; m < tg.size(); ++m) V.v1.row(m).setConstant(tg.node(m));
    const SpaceTimeField Bt = apply_B2(V, nu);
    for (int m = 0; m < tg.size(); ++m) CHECK(std::abs(Bt.v2(m, 3) + 2.0 * (1.0 - nu * tg.node(m))) < 1e-9);
}

TEST_CASE("apply_L1 examples") {
    const double nu = 2.0;
    const AngularGrid g(pi / 2, 9);
    const TemporalGrid tg(1.0, 201);
    SpaceTimeField V(tg, g);
    CHECK(apply_L1(V, nu).v1.norm() == 0.0);

    for (int m = 0; m < tg.size(); ++m) V.v1.row(m).setConstant(tg.node(m) * std::exp(nu * tg.node(m)));
    const SpaceTimeField K = apply_L1(V, nu, {.check_domain = false});
    const double top = V.v1.cwiseAbs().maxCoeff();
    for (int m = 1; m + 1 < tg.size(); ++m) CHECK(std::abs(K.v1(m, 0)) < 1e-3 * top);

    for (int m = 0; m < tg.size(); ++m) V.v1.row(m).setConstant(std::exp(-tg.node(m)));
    const SpaceTimeField E = apply_L1(V, nu, {.check_domain = false});
    for (int m = 1; m + 1 < tg.size(); ++m)
        CHECK(std::abs(E.v1(m, 0) - (1 + nu) * (1 + nu) * std::exp(-tg.node(m))) < 1e-3);
    CHECK_THROWS_AS(apply_L1(V, nu), DomainError);
}

TEST_CASE("is_clamped and field arithmetic") {
    const AngularGrid g(pi / 2, 129);
    const CVector clamped = sampled(g, [](double x) { return std::pow(std::sin(2.0 * x), 2); });
    const CVector hinged = sampled(g, [](double x) { return std::sin(2.0 * x); });
    CHECK(is_clamped(clamped, g.h(), 1e-6));
    CHECK_FALSE(is_clamped(hinged, g.h(), 1e-2));

    const TemporalGrid tg(4.0, 17);
    SpaceTimeField a(tg, g), b(tg, g);
    a.v1.setConstant(1.0);
    b.v2.setConstant(cplx(0, 2));
    const SpaceTimeField c = 2.0 * a + b - a;
    CHECK(c.v1(3, 3) == cplx(1.0));
    CHECK(max_imag(c) == doctest::Approx(2.0));
    CHECK(e_norm(SpaceTimeField(tg, g), 2.0) == 0.0);
    const SpaceTimeField other(TemporalGrid(4.0, 19), g);
    CHECK_FALSE(a.same_grids(other));
}

}
