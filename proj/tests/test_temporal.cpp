#include "opcalc/corpus.hpp"
#include "opcalc/temporal.hpp"

#include <doctest.h>

#include <cmath>

using namespace opcalc;

TEST_SUITE("temporal") {

TEST_CASE("region membership examples") {
    const double nu = 2.0;
    const SpectralRegion S{SpectralRegion::Kind::sigma_nu, nu, 0.1};
    CHECK_FALSE(in_region(nu * nu, S));
    CHECK(in_region(4 * nu * nu, S));
    CHECK_FALSE(in_region(-1.0, S));
    CHECK(in_region(cplx(0.0, 40.0), S));
    const SpectralRegion L{SpectralRegion::Kind::sigma_L1, nu, 0.1};
    // 4ν²/sin²(0.1) ≈ 1605.3, so 1600 sits just inside the excluded ball.
    CHECK_FALSE(in_region(1600.0, L));
    CHECK(in_region(1610.0, L));
    CHECK_FALSE(in_region(std::polar(1e4, pi - 0.1), L));
    CHECK(in_region(std::polar(1e4, pi - 0.21), L));
}

TEST_CASE("zero data gives zero") {
    const TemporalGrid tg(16.0, 257);
    const CVector V = resolve_L1(16.0, CVector::Zero(tg.size()), tg, 2.0);
    CHECK(V.norm() == 0.0);
}

TEST_CASE("exact exponential example") {
    const double nu = 2.0, lam = 16.0;
    const TemporalGrid tg(24.0, 12001);
    CVector R(tg.size());
    for (int m = 0; m < tg.size(); ++m) R[m] = std::exp(-tg.node(m));
    TemporalResolventOptions opts;
    opts.check_decay = false;
    const CVector V = resolve_L1(lam, R, tg, nu, opts);
    const double c = 1.0 / ((1 + nu) * (1 + nu) - lam);
    double err = 0.0;
    for (int m = 0; m < tg.size(); ++m) {
        const double t = tg.node(m);
        err = std::max(err, std::abs(V[m] - c * (std::exp(-t) - std::exp((nu - std::sqrt(lam)) * t))));
    }
    CHECK(err < 1e-6);
    CHECK(truncation_tail(lam, nu, tg.T()) == doctest::Approx(std::exp(-6.0 * 24.0)));
}

TEST_CASE("residual of (L1 - lambda)V = R at lambda = 4 nu^2 shrinks at second order") {
    const double nu = 2.0, lam = 16.0;
    const AngularGrid ag(pi / 2, 9);
    auto residual = [&](int n) {
        const TemporalGrid tg(16.0, n);
        double worst = 0.0;
        for (const auto& R : corpus::temporal_corpus(3, tg, ag, 7)) {
            const SpaceTimeField V = resolve_L1(lam, R, nu);
            const SpaceTimeField LV = apply_L1(V, nu, {.check_domain = false});
            double err = 0.0;
            for (int m = 1; m + 1 < tg.size(); ++m)
                err = std::max(err, (LV.v1.row(m) - lam * V.v1.row(m) - R.v1.row(m)).cwiseAbs().maxCoeff());
            worst = std::max(worst, err / R.v1.cwiseAbs().maxCoeff());
            CHECK(V.v1.row(0).cwiseAbs().maxCoeff() < 1e-8 * V.v1.cwiseAbs().maxCoeff());
        }
        return worst;
    };
    const double coarse = residual(1601), fine = residual(3201);
    CHECK(coarse < 1e-2);
    CHECK(std::log2(coarse / fine) == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("discrete temporal resolvent agrees with the representation") {
    const double nu = 2.0;
    const TemporalGrid tg(16.0, 801);
    const AngularGrid ag(pi / 2, 9);
    const auto R = corpus::temporal_corpus(1, tg, ag, 3).front();
    for (cplx lam : {cplx(16.0, 0.0), cplx(20.0, 30.0)}) {
        const SpaceTimeField a = resolve_L1(lam, R, nu);
        const CMatrix b = DiscreteTemporalResolvent(tg, nu, lam).apply(R.v1);
        CHECK((a.v1 - b).norm() / a.v1.norm() < 1e-3);
    }
}

TEST_CASE("refuses parameters outside Sigma_nu") {
    const TemporalGrid tg(16.0, 257);
    const CVector R = CVector::Zero(tg.size());
    CHECK_THROWS_AS(resolve_L1(4.0, R, tg, 2.0), NearSpectrumError);
    CHECK_THROWS_AS(resolve_L1(-1.0, R, tg, 2.0), NearSpectrumError);
    CVector slow(tg.size());
    for (int m = 0; m < tg.size(); ++m) slow[m] = tg.node(m) * std::exp(-0.5 * tg.node(m));
    CHECK_THROWS_AS(resolve_L1(16.0, slow, tg, 2.0), DomainError);
}

TEST_CASE("sector bound holds on a sweep and is homogeneous") {
    const double nu = 2.0, eps = 0.1;
    const TemporalGrid tg(16.0, 1601);
    const AngularGrid ag(pi / 2, 9);
    auto data = corpus::temporal_corpus(3, tg, ag, 9);
    const auto lams = corpus::sigma_L1_samples(12, nu, eps, 4);
    const auto rep = verify_L1_bound(lams, data, nu, eps, 2.0);
    CHECK(rep.all_hold());
    for (const auto& s : rep.samples) {
        CHECK(s.in_sigma_L1);
        CHECK(s.proof_holds());
    }

    // λ = 1600 is just outside Σ_{L₁}, yet the bound still holds there.
    const auto one = verify_L1_bound({1600.0}, data, nu, eps, 2.0);
    CHECK_FALSE(one.samples[0].in_sigma_L1);
    CHECK(one.samples[0].holds());
    for (auto& R : data) R *= 100.0;
    const auto scaled = verify_L1_bound({1600.0}, data, nu, eps, 2.0);
    CHECK(scaled.samples[0].ratio == doctest::Approx(one.samples[0].ratio).epsilon(1e-12));

    std::vector<cplx> ray;
    for (double r : {1e3, 1e4, 1e5}) ray.push_back(std::polar(r, pi - 2 * eps));
    const auto rr = verify_L1_bound(ray, data, nu, eps, 2.0);
    CHECK(rr.max_scaled <= rr.constant);
}

}
