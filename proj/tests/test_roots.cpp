#include "opcalc/roots.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace opcalc;

TEST_SUITE("roots") {

TEST_CASE("tau from both sinh z -/+ z families") {
    CHECK(reference_tau() == doctest::Approx(4.21239).epsilon(1e-3 / 4.21239));
    CHECK(reference_tau() == doctest::Approx(4.21239).epsilon(2e-6));
}

TEST_CASE("tau is the plus-family lowest root; the minus family starts higher") {
    const Box b30{0.1, 30.0, 0.0, 30.0};
    const auto minus = find_roots(Determinant{Family::minus, pi / 2}, b30);
    const auto plus = find_roots(Determinant{Family::plus, pi / 2}, b30);
    REQUIRE_FALSE(minus.roots.empty());
    REQUIRE_FALSE(plus.roots.empty());
    CHECK(tau(plus.roots) == doctest::Approx(4.21239).epsilon(1e-5));
    CHECK(tau(minus.roots) > 7.0);
    for (const auto& r : minus.roots) {
        CHECK(r.value.real() > 0.0);
        CHECK(r.residual < 1e-9);
        CHECK(std::abs(std::sinh(r.value) - r.value) < 1e-9);
        CHECK(std::abs(r.eigenvalue + r.value * r.value / (pi * pi / 4)) < 1e-9 * std::abs(r.eigenvalue));
    }
}

TEST_CASE("tau does not depend on the box once the lowest root is inside") {
    const Box small{0.1, 30.0, 0.0, 30.0}, big{0.1, 60.0, 0.0, 60.0};
    auto both = [](const Box& b) {
        std::vector<TranscendentalRoot> all;
        for (Family f : {Family::minus, Family::plus}) {
            auto r = find_roots(Determinant{f, pi / 2}, b).roots;
            all.insert(all.end(), r.begin(), r.end());
        }
        return tau(all);
    };
    CHECK(both(small) == both(big));
}

TEST_CASE("origin is excluded and empty boxes give nothing") {
    const Box tiny{0.1, 0.5, 0.0, 0.5};
    const Determinant det{Family::minus, pi / 2};
    CHECK(find_roots(det, tiny).roots.empty());
    CHECK(count_roots(det, tiny).count == 0);
}

TEST_CASE("argument count agrees with Newton roots and is additive") {
    const Determinant det{Family::minus, pi / 2};
    const Box full{0.1, 20.0, 0.0, 20.0};
    const auto found = find_roots(det, full);
    const auto c = count_roots(det, full);
    CHECK(c.count == static_cast<int>(found.roots.size()));
    CHECK(found.argument_count == c.count);
    CHECK(std::abs(c.raw - c.count) < 1e-3);

    const Box left{0.1, 20.0, 0.0, 9.7}, right{0.1, 20.0, 9.7, 20.0};
    CHECK(count_roots(det, left).count + count_roots(det, right).count == c.count);
}

TEST_CASE("singleton tau") {
    TranscendentalRoot r;
    r.value = cplx(1.0, 5.0);
    CHECK(tau({r}) == 5.0);
}

TEST_CASE("separation condition") {
    const auto s = check_separation(pi / 2, 2.0);
    CHECK(s.holds);
    CHECK(s.margin == doctest::Approx(4.21239 - pi).epsilon(1e-4));
    CHECK_FALSE(check_separation(2 * pi, 3.0).holds);
    const double t = reference_tau();
    CHECK_FALSE(check_separation(t / 2.0, 2.0, t).holds);
}

TEST_CASE("sinh-family eigenvalues scale as 1/omega^2") {
    const auto a = find_roots(Determinant{Family::plus, pi / 2}, default_box).roots;
    const auto b = find_roots(Determinant{Family::plus, pi}, default_box).roots;
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(std::abs(a[i].eigenvalue - 4.0 * b[i].eigenvalue) < 1e-9 * std::abs(a[i].eigenvalue));
}

TEST_CASE("proof-family eigenvalues are roots and avoid the origin") {
    for (double w : {pi / 3, pi / 2, 3 * pi / 4}) {
        const auto eigs = angular_eigenvalues(w);
        REQUIRE_FALSE(eigs.empty());
        for (std::size_t i = 1; i < eigs.size(); ++i)
            CHECK(std::sqrt(eigs[i - 1]).real() <= std::sqrt(eigs[i]).real() + 1e-12);
        const double e0 = estimate_epsilon0(w);
        CHECK(e0 > 0.0);
        for (const cplx& l : eigs) {
            CHECK(std::abs(l) >= 2 * e0 - 1e-12);
            const cplx s = std::sqrt(-l);
            const double c = std::sin(w) / w;
            const double d = std::min(std::abs(std::sinh(w * s) - c * w * s), std::abs(std::sinh(w * s) + c * w * s));
            CHECK(d < 1e-8 * std::max(1.0, std::abs(std::sinh(w * s))));
        }
    }
}

TEST_CASE("family names round-trip") {
    for (Family f : {Family::minus, Family::plus, Family::proof_minus, Family::proof_plus})
        CHECK(family_from_string(to_string(f)) == f);
    CHECK_THROWS_AS(family_from_string("bogus"), DomainError);
}

}
