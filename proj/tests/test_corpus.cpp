#include "opcalc/corpus.hpp"
#include "opcalc/roots.hpp"
#include "opcalc/temporal.hpp"

#include <doctest.h>

#include <cmath>

using namespace opcalc;

TEST_SUITE("corpus") {

TEST_CASE("seeded corpora are deterministic") {
    const TemporalGrid tg(16.0, 33);
    const AngularGrid ag(pi / 2, 17);
    const auto a = corpus::field_corpus(3, tg, ag, 99);
    const auto b = corpus::field_corpus(3, tg, ag, 99);
    const auto c = corpus::field_corpus(3, tg, ag, 100);
    for (int i = 0; i < 3; ++i) CHECK((a[i].v1 - b[i].v1).norm() == 0.0);
    CHECK((a[0].v1 - c[0].v1).norm() > 0.0);
}

TEST_CASE("clamped shapes have the stated second derivatives") {
    const double w = pi / 3;
    const AngularGrid g(w, 2049);
    for (int kind : {0, 1, 2}) {
        const AngularData d = corpus::clamped_shape(kind, 2, w, 3.0);
        const StateVector s = sample(d, g);
        CHECK(is_clamped(s.psi1, g.h(), 1e-4));
        const CVector fd = d2(s.psi1, g.h());
        const CVector ex = sample_f1pp(d, g);
        CHECK((fd - ex).segment(1, g.size() - 2).cwiseAbs().maxCoeff() < 1e-4 * ex.cwiseAbs().maxCoeff());
    }
    CHECK_THROWS_AS(corpus::clamped_shape(7, 1, w), DomainError);
}

TEST_CASE("angular corpus data is clamped") {
    const AngularGrid g(pi / 2, 129);
    for (const auto& s : corpus::sample_corpus(corpus::angular_corpus(6, g.omega(), 3), g))
        CHECK(is_clamped(s.psi1, g.h(), 1e-2));
}

TEST_CASE("fields vanish on the boundary and decay") {
    const TemporalGrid tg(16.0, 65);
    const AngularGrid ag(pi / 2, 33);
    for (const auto& F : corpus::field_corpus(4, tg, ag, 5)) {
        CHECK(F.v1.row(0).norm() == 0.0);
        CHECK(F.v1.col(0).norm() == 0.0);
        CHECK(F.v2.col(ag.size() - 1).norm() == 0.0);
        CHECK(F.v1.row(tg.size() - 2).cwiseAbs().maxCoeff() < 1e-8 * F.v1.cwiseAbs().maxCoeff());
    }
    const SpaceTimeField M = corpus::manufactured(tg, ag);
    CHECK(M.v1.row(0).norm() == 0.0);
    CHECK(M.v2.col(0).norm() == 0.0);
}

TEST_CASE("sector samples lie in Sigma_L1") {
    const SpectralRegion L{SpectralRegion::Kind::sigma_L1, 2.0, 0.1};
    for (const cplx& z : corpus::sigma_L1_samples(50, 2.0, 0.1, 1)) CHECK(in_region(z, L));
}

TEST_CASE("lemma cases satisfy the precondition") {
    for (const auto& c : corpus::lemma_cases(6, 8)) {
        CHECK(c.lambda < 0.0);
        CHECK(c.lambda <= -estimate_epsilon0(c.omega));
        CHECK(c.lambda >= -1e3);
    }
}

}
