#include "opcalc/corpus.hpp"
#include "opcalc/discrete.hpp"
#include "opcalc/dpg.hpp"
#include "opcalc/roots.hpp"

#include <doctest.h>

#include <cmath>

using namespace opcalc;

namespace {

struct Desk {
    ProblemParams params{};
    TemporalGrid tg{16.0, 64};
    AngularGrid ag{pi / 2, 32};
    std::vector<cplx> eigs = angular_eigenvalues(pi / 2);
};

double rel(const SpaceTimeField& a, const SpaceTimeField& b) { return e_norm(a - b, 2.0) / e_norm(b, 2.0); }

// V* from the corpus and its exact (L₁ + L₂)V* evaluated from hand derivatives.
SpaceTimeField exact_image(const TemporalGrid& tg, const AngularGrid& ag, double nu) {
    SpaceTimeField F(tg, ag);
    const double w = ag.omega(), c = pi / w;
    for (int m = 1; m + 1 < tg.size(); ++m) {
        const double t = tg.node(m), e = std::exp(-2.0 * t);
        const double a = t * t * e, da = (2 * t - 2 * t * t) * e, dda = (2 - 8 * t + 4 * t * t) * e;
        const double b = 16 * t * e, db = 16 * (1 - 2 * t) * e, ddb = 16 * (4 * t - 4) * e;
        const double La = dda - 2 * nu * da + nu * nu * a, Lb = ddb - 2 * nu * db + nu * nu * b;
        for (int j = 1; j + 1 < ag.size(); ++j) {
            const double th = ag.node(j), x = th / w;
            const double g1 = std::pow(std::sin(c * th), 2), g1pp = 2 * c * c * std::cos(2 * c * th);
            const double g1pppp = -8 * std::pow(c, 4) * std::cos(2 * c * th);
            const double g2 = x * x * (1 - x) * (1 - x), g2pp = (2 - 12 * x + 12 * x * x) / (w * w);
            F.v1(m, j) = La * g1 - b * g2;
            F.v2(m, j) = Lb * g2 + a * (g1pppp + 2 * g1pp + g1) + 2 * b * (g2pp - g2);
        }
    }
    return F;
}

}  // namespace

TEST_SUITE("dpg") {

TEST_CASE("contour sits between nu and the spectrum") {
    Desk d;
    const Contour c = build_contour(d.params, d.eigs);
    CHECK(c.nu_prime > 2.0);
    CHECK(c.margin > 0.0);
    CHECK(c.n_nodes == 200);
    CHECK(c.z.size() == 200);
    for (std::size_t q = 0; q < c.z.size(); ++q) {
        CHECK(std::sqrt(c.z[q]).real() == doctest::Approx(c.nu_prime));
        CHECK(std::abs(c.z[q] - std::conj(c.z[c.z.size() - 1 - q])) < 1e-9 * std::abs(c.z[q]));
    }
    CHECK(c.tail_estimate == doctest::Approx(2.0 / (pi * 2000.0)));
}

TEST_CASE("contour preconditions") {
    Desk d;
    ProblemParams bad = d.params;
    bad.omega = 2 * pi;
    bad.p = 2.0;
    CHECK_THROWS_AS(build_contour(bad, d.eigs), DomainError);
    CHECK_THROWS_AS(build_contour(d.params, {}), DomainError);
    CHECK_THROWS_AS(build_contour(d.params, d.eigs, 201), DomainError);
    CHECK_THROWS_AS(build_contour(d.params, d.eigs, 200, 2000.0, 1.5), DomainError);
}

TEST_CASE("zero, linearity and realness") {
    Desk d;
    const DpgInverter inv(d.tg, d.ag, d.params.nu(), build_contour(d.params, d.eigs));
    CHECK(e_norm(inv.apply(SpaceTimeField(d.tg, d.ag)), 2.0) == 0.0);
    const auto fs = corpus::field_corpus(2, d.tg, d.ag, 17);
    const cplx a(2.0, -1.0), b(0.5, 0.0);
    const SpaceTimeField lhs = inv.apply(a * fs[0] + b * fs[1]);
    const SpaceTimeField rhs = a * inv.apply(fs[0]) + b * inv.apply(fs[1]);
    CHECK(rel(lhs, rhs) < 1e-12);

    SpaceTimeField real = fs[0];
    real.v1 = real.v1.real().cast<cplx>();
    real.v2 = real.v2.real().cast<cplx>();
    const SpaceTimeField V = inv.apply(real);
    CHECK(max_imag(V) < 1e-10 * V.v1.cwiseAbs().maxCoeff());
}

TEST_CASE("matches the direct coupled solve") {
    Desk d;
    const DpgInverter inv(d.tg, d.ag, d.params.nu(), build_contour(d.params, d.eigs));
    const DirectSumSolver direct(d.tg, d.ag, d.params.nu());
    SpaceTimeField F(d.tg, d.ag);
    for (int m = 1; m + 1 < d.tg.size(); ++m)
        for (int j = 1; j + 1 < d.ag.size(); ++j)
            F.v2(m, j) = std::exp(-d.tg.node(m)) * std::pow(std::sin(2.0 * d.ag.node(j)), 2);
    double res = 1.0;
    const SpaceTimeField ref = direct.solve(F, &res);
    CHECK(res < 1e-10);
    CHECK(rel(inv.apply(F), ref) < 1e-3);
    for (const auto& G : corpus::field_corpus(3, d.tg, d.ag, 23)) CHECK(rel(inv.apply(G), direct.solve(G)) < 1e-3);
}

TEST_CASE("doubling the truncation moves the result by less than the tail estimate") {
    Desk d;
    const Contour c1 = build_contour(d.params, d.eigs, 200, 2000.0);
    const Contour c2 = build_contour(d.params, d.eigs, 400, 4000.0);
    const auto F = corpus::field_corpus(1, d.tg, d.ag, 29).front();
    const SpaceTimeField a = DpgInverter(d.tg, d.ag, 2.0, c1).apply(F);
    const SpaceTimeField b = DpgInverter(d.tg, d.ag, 2.0, c2).apply(F);
    CHECK(rel(a, b) < c1.tail_estimate);
}

TEST_CASE("integrand decays along the contour") {
    Desk d;
    const Contour c = build_contour(d.params, d.eigs);
    const DpgInverter inv(d.tg, d.ag, 2.0, c);
    const auto F = corpus::field_corpus(1, d.tg, d.ag, 31).front();
    const auto w = inv.integrand_norms(F, 2.0);
    REQUIRE(w.size() == c.z.size());
    CHECK(w.front() < 1e-3 * w[w.size() / 2]);
    CHECK(w.back() < 1e-3 * w[w.size() / 2]);
}

TEST_CASE("kernel backend agrees with the discrete one at desk scale") {
    ProblemParams P;
    const TemporalGrid tg(16.0, 129);
    const AngularGrid ag(pi / 2, 65);
    const Contour c = build_contour(P, angular_eigenvalues(pi / 2), 120, 400.0);
    DpgOptions ko;
    ko.backend = ResolventBackend::kernel;
    const auto F = corpus::field_corpus(1, tg, ag, 37).front();
    const SpaceTimeField a = DpgInverter(tg, ag, 2.0, c).apply(F);
    const SpaceTimeField b = DpgInverter(tg, ag, 2.0, c, ko).apply(F);
    CHECK(rel(b, a) < 5e-2);
}

TEST_CASE("manufactured solution: exact recovery and second-order refinement") {
    const double nu = 2.0;
    {
        const TemporalGrid tg(16.0, 64);
        const AngularGrid ag(pi / 2, 32);
        const SpaceTimeField Vs = corpus::manufactured(tg, ag);
        const SpaceTimeField F = discrete::apply_sum(Vs, nu);
        CHECK(rel(direct_sum_solve(F, nu), Vs) < 1e-10);
    }
    std::vector<double> errs;
    for (int k : {1, 2, 4}) {
        const TemporalGrid tg(16.0, 64 * k + 1);
        const AngularGrid ag(pi / 2, 16 * k + 1);
        const SpaceTimeField V = direct_sum_solve(exact_image(tg, ag, nu), nu);
        errs.push_back(rel(V, corpus::manufactured(tg, ag)));
    }
    const double o1 = std::log2(errs[0] / errs[1]), o2 = std::log2(errs[1] / errs[2]);
    CHECK(o1 == doctest::Approx(2.0).epsilon(0.25));
    CHECK(o2 == doctest::Approx(2.0).epsilon(0.25));
}

}
