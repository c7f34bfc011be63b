#include "opcalc/corpus.hpp"

#include "opcalc/roots.hpp"

#include <array>
#include <cmath>
#include <map>
#include <random>

namespace opcalc::corpus {

AngularData clamped_shape(int kind, int k, double omega, cplx scale) {
    const double w2 = omega * omega;
    switch (kind) {
        case 0: {
            const double q = 2.0 * pi * k;
            return {[=](double th) { return scale * (1.0 - std::cos(q * th / omega)); },
                    [=](double th) { return scale * (q * q / w2) * std::cos(q * th / omega); },
                    [](double) { return cplx(0.0); }};
        }
        case 1:
            return {[=](double th) {
                        const double x = th / omega;
                        return scale * x * x * (1 - x) * (1 - x);
                    },
                    [=](double th) {
                        const double x = th / omega;
                        return scale * (2.0 - 12.0 * x + 12.0 * x * x) / w2;
                    },
                    [](double) { return cplx(0.0); }};
        case 2:
            return {[=](double th) {
                        const double x = th / omega;
                        return scale * x * x * x * (1 - x) * (1 - x);
                    },
                    [=](double th) {
                        const double x = th / omega;
                        return scale * (6.0 * x - 24.0 * x * x + 20.0 * x * x * x) / w2;
                    },
                    [](double) { return cplx(0.0); }};
        default:
            throw DomainError("clamped_shape kind must be 0, 1 or 2");
    }
}

namespace {

AngularData random_data(std::mt19937_64& rng, double omega) {
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_int_distribution<int> freq(1, 3);
    std::vector<AngularData> parts;
    for (int kind = 0; kind < 3; ++kind) {
        const cplx c(coef(rng), coef(rng));
        parts.push_back(clamped_shape(kind, freq(rng), omega, kind == 0 ? c : 16.0 * c));
    }
    std::array<cplx, 3> d{};
    for (cplx& x : d) x = cplx(coef(rng), coef(rng));
    AngularData out;
    out.f1 = [parts](double th) {
        cplx s = 0.0;
        for (const auto& p : parts) s += p.f1(th);
        return s;
    };
    out.f1pp = [parts](double th) {
        cplx s = 0.0;
        for (const auto& p : parts) s += p.f1pp(th);
        return s;
    };
    out.f2 = [d, omega](double th) {
        cplx s = 0.0;
        for (int j = 0; j < 3; ++j) s += d[j] * std::sin((j + 1) * pi * th / omega);
        return s;
    };
    return out;
}

void zero_edges(SpaceTimeField& V) {
    const Eigen::Index nt = V.tgrid.size(), na = V.agrid.size();
    for (CMatrix* c : {&V.v1, &V.v2}) {
        c->row(0).setZero();
        c->row(nt - 1).setZero();
        c->col(0).setZero();
        c->col(na - 1).setZero();
    }
}

}  // namespace

std::vector<AngularData> angular_corpus(int n, double omega, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<AngularData> out;
    for (int i = 0; i < n; ++i) out.push_back(random_data(rng, omega));
    return out;
}

std::vector<StateVector> sample_corpus(const std::vector<AngularData>& data, const AngularGrid& grid) {
    std::vector<StateVector> out;
    for (const auto& d : data) out.push_back(sample(d, grid));
    return out;
}

std::vector<SpaceTimeField> field_corpus(int n, const TemporalGrid& tg, const AngularGrid& ag, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> rate(2.0, 3.0);
    std::uniform_int_distribution<int> power(1, 2);
    std::vector<SpaceTimeField> out;
    for (int i = 0; i < n; ++i) {
        SpaceTimeField F(tg, ag);
        for (int term = 0; term < 2; ++term) {
            const AngularData d = random_data(rng, ag.omega());
            const StateVector s = sample(d, ag);
            const double b = rate(rng);
            const int a = power(rng);
            for (int m = 0; m < tg.size(); ++m) {
                const double t = tg.node(m);
                const double g = std::pow(t, a) * std::exp(-b * t);
                F.v1.row(m) += g * s.psi1.transpose();
                F.v2.row(m) += g * s.psi2.transpose();
            }
        }
        zero_edges(F);
        out.push_back(std::move(F));
    }
    return out;
}

std::vector<SpaceTimeField> temporal_corpus(int n, const TemporalGrid& tg, const AngularGrid& ag,
                                            std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> rate(3.0, 5.0);
    std::uniform_int_distribution<int> power(1, 3);
    std::vector<SpaceTimeField> out;
    for (int i = 0; i < n; ++i) {
        const AngularData d = random_data(rng, ag.omega());
        const StateVector s = sample(d, ag);
        const double b = rate(rng);
        const int a = power(rng);
        SpaceTimeField R(tg, ag);
        for (int m = 0; m < tg.size(); ++m) {
            const double t = tg.node(m);
            const double g = std::pow(t, a) * std::exp(-b * t);
            R.v1.row(m) = g * s.psi1.transpose();
            R.v2.row(m) = g * s.psi2.transpose();
        }
        out.push_back(std::move(R));
    }
    return out;
}

SpaceTimeField manufactured(const TemporalGrid& tg, const AngularGrid& ag) {
    SpaceTimeField V(tg, ag);
    const double omega = ag.omega();
    for (int m = 0; m < tg.size(); ++m) {
        const double t = tg.node(m);
        for (int j = 0; j < ag.size(); ++j) {
            const double x = ag.node(j) / omega;
            const double s = std::sin(pi * x);
            V.v1(m, j) = t * t * std::exp(-2.0 * t) * s * s;
            V.v2(m, j) = t * std::exp(-2.0 * t) * 16.0 * x * x * (1 - x) * (1 - x);
        }
    }
    zero_edges(V);
    return V;
}

std::vector<cplx> sigma_L1_samples(int n, double nu, double eps, std::uint64_t seed, double r_max) {
    const double se = std::sin(eps);
    const double r_min = 1.05 * 4.0 * nu * nu / (se * se);
    if (r_max <= r_min) throw DomainError("r_max must exceed the Sigma_L1 radius");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> logr(std::log(r_min), std::log(r_max));
    std::uniform_real_distribution<double> arg(-(pi - 2.0 * eps), pi - 2.0 * eps);
    std::vector<cplx> out;
    for (int i = 0; i < n; ++i) out.push_back(std::polar(std::exp(logr(rng)), arg(rng)));
    return out;
}

std::vector<LemmaCase> lemma_cases(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::array<double, 3> omegas{pi / 3, pi / 2, 3 * pi / 4};
    std::map<double, double> eps0;
    std::uniform_int_distribution<int> pick(0, 2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<LemmaCase> out;
    for (int i = 0; i < n; ++i) {
        const double omega = omegas[pick(rng)];
        if (!eps0.count(omega)) eps0[omega] = estimate_epsilon0(omega);
        const double lo = std::log(1.5 * eps0[omega]), hi = std::log(1e3);
        const double lambda = -std::exp(lo + (hi - lo) * unit(rng));
        out.push_back({lambda, omega, random_data(rng, omega)});
    }
    return out;
}

}  // namespace opcalc::corpus
