#include "opcalc/dpg.hpp"

#include "opcalc/discrete.hpp"
#include "opcalc/roots.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace opcalc {

Contour build_contour(const ProblemParams& params, const std::vector<cplx>& eigs, int n_nodes, double s_max,
                      std::optional<double> nu_prime) {
    params.validate();
    const double nu = params.nu();
    if (eigs.empty()) throw DomainError("build_contour needs a nonempty eigenvalue list");
    if (n_nodes < 2 || n_nodes % 2 != 0) throw DomainError("n_nodes must be a positive even number");
    if (!(s_max > 0.0)) throw DomainError("s_max must be positive");

    double lowest = std::numeric_limits<double>::infinity();
    for (const cplx& l : eigs) lowest = std::min(lowest, std::sqrt(l).real());
    const Separation sep = check_separation(params.omega, nu);
    if (!sep.holds || lowest - nu <= 0.0) {
        std::ostringstream os;
        os << "hypothesis omega*nu < tau violated or eigenvalue too low: omega*nu = " << params.omega * nu
           << ", lowest Re sqrt(lambda_j) - nu = " << lowest - nu;
        throw DomainError(os.str());
    }

    Contour c;
    c.nu = nu;
    c.margin = lowest - nu;
    c.nu_prime = nu_prime.value_or(0.5 * (nu + lowest));
    if (!(c.nu_prime > nu && c.nu_prime < lowest))
        throw DomainError("contour abscissa must lie strictly between nu and the lowest Re sqrt(lambda_j)");
    c.s_max = s_max;
    c.n_nodes = n_nodes;

    const double U = std::asinh(s_max);
    const double du = 2.0 * U / n_nodes;
    for (int q = 0; q < n_nodes; ++q) {
        const double u = -U + (q + 0.5) * du;
        const double s = std::sinh(u);
        const cplx w = c.nu_prime + I * s;
        c.s.push_back(s);
        c.ds.push_back(std::cosh(u) * du);
        c.z.push_back(w * w);
        c.dz_ds.push_back(2.0 * I * w);
    }
    c.tail_estimate = (2.0 / pi) / s_max;
    return c;
}

struct DpgInverter::NodeCache {
    std::optional<DiscreteAngularResolvent> angular;
    std::optional<DiscreteTemporalResolvent> temporal;
};

DpgInverter::DpgInverter(const TemporalGrid& tg, const AngularGrid& ag, double nu, Contour contour, DpgOptions opts)
    : tg_(tg), ag_(ag), nu_(nu), contour_(std::move(contour)), opts_(opts) {
    if (contour_.z.empty()) throw DomainError("empty contour");
    if (opts_.backend == ResolventBackend::discrete) {
        cache_.reserve(contour_.z.size());
        for (const cplx& z : contour_.z) {
            auto node = std::make_unique<NodeCache>();
            try {
                node->angular.emplace(ag_, z);
                node->temporal.emplace(tg_, nu_, z);
            } catch (const NearSpectrumError& e) {
                throw NearSpectrumError(std::string("contour node rejected, rebuild the contour: ") + e.what());
            }
            cache_.push_back(std::move(node));
        }
    }
}

DpgInverter::~DpgInverter() = default;
DpgInverter::DpgInverter(DpgInverter&&) noexcept = default;
DpgInverter& DpgInverter::operator=(DpgInverter&&) noexcept = default;

SpaceTimeField DpgInverter::node_term(int q, const SpaceTimeField& F) const {
    const cplx z = contour_.z[q];
    const cplx weight = contour_.ds[q] * contour_.dz_ds[q] / (2.0 * pi * I);
    SpaceTimeField W(tg_, ag_);
    if (opts_.backend == ResolventBackend::discrete) {
        CMatrix y1, y2;
        cache_[q]->angular->apply_rows(F.v1, F.v2, y1, y2);
        W.v1 = cache_[q]->temporal->apply(y1);
        W.v2 = cache_[q]->temporal->apply(y2);
    } else {
        SpaceTimeField Y(tg_, ag_);
        try {
            for (int m = 0; m < tg_.size(); ++m) Y.set_state(m, resolve_A(z, F.state(m), ag_, opts_.angular));
            W = resolve_L1(z, Y, nu_, opts_.temporal);
        } catch (const NearSpectrumError& e) {
            throw NearSpectrumError(std::string("contour node rejected, rebuild the contour: ") + e.what());
        }
    }
    W *= weight;
    return W;
}

SpaceTimeField DpgInverter::sum_range(int lo, int hi, const SpaceTimeField& F) const {
    if (hi - lo == 1) return node_term(lo, F);
    const int mid = lo + (hi - lo) / 2;
    SpaceTimeField left = sum_range(lo, mid, F);
    left += sum_range(mid, hi, F);
    return left;
}

SpaceTimeField DpgInverter::apply(const SpaceTimeField& F) const {
    if (!(static_cast<const UniformGrid&>(F.tgrid) == tg_) || !(static_cast<const UniformGrid&>(F.agrid) == ag_))
        throw DomainError("field grids differ from the inverter's grids");
    return sum_range(0, static_cast<int>(contour_.z.size()), F);
}

std::vector<double> DpgInverter::integrand_norms(const SpaceTimeField& F, double p) const {
    std::vector<double> out;
    for (int q = 0; q < static_cast<int>(contour_.z.size()); ++q) out.push_back(e_norm(node_term(q, F), p) / contour_.ds[q]);
    return out;
}

SpaceTimeField dpg_apply_inverse(const SpaceTimeField& F, const Contour& contour, double nu, const DpgOptions& opts) {
    return DpgInverter(F.tgrid, F.agrid, nu, contour, opts).apply(F);
}

struct DirectSumSolver::Impl {
    TemporalGrid tg;
    AngularGrid ag;
    discrete::SpMat A;
    Eigen::SparseLU<discrete::SpMat> lu;
};

DirectSumSolver::DirectSumSolver(const TemporalGrid& tg, const AngularGrid& ag, double nu)
    : impl_(new Impl{tg, ag, discrete::sum_operator(tg, ag, nu), {}}) {
    impl_->A.makeCompressed();
    impl_->lu.compute(impl_->A);
    if (impl_->lu.info() != Eigen::Success)
        throw NearSpectrumError("coupled system is singular: " + impl_->lu.lastErrorMessage());
}

DirectSumSolver::~DirectSumSolver() = default;
DirectSumSolver::DirectSumSolver(DirectSumSolver&&) noexcept = default;
DirectSumSolver& DirectSumSolver::operator=(DirectSumSolver&&) noexcept = default;

SpaceTimeField DirectSumSolver::solve(const SpaceTimeField& F, double* residual) const {
    if (!(static_cast<const UniformGrid&>(F.tgrid) == impl_->tg) ||
        !(static_cast<const UniformGrid&>(F.agrid) == impl_->ag))
        throw DomainError("field grids differ from the solver's grids");
    const CVector b = discrete::pack(F);
    const CVector x = impl_->lu.solve(b);
    if (residual) {
        const double nb = b.norm();
        *residual = nb > 0 ? (impl_->A * x - b).norm() / nb : (impl_->A * x).norm();
    }
    return discrete::unpack(x, F.tgrid, F.agrid);
}

SpaceTimeField direct_sum_solve(const SpaceTimeField& F, double nu, double* residual) {
    return DirectSumSolver(F.tgrid, F.agrid, nu).solve(F, residual);
}

}  // namespace opcalc
