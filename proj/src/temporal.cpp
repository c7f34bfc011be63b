#include "opcalc/temporal.hpp"

#include "opcalc/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace opcalc {

bool in_region(cplx z, const SpectralRegion& region) {
    const double x = z.real(), y = z.imag(), nu = region.nu;
    const double nu2 = nu * nu;
    // √(x² + y²) > 2ν² − x, squared; this also rejects the negative real axis.
    const bool sigma_nu = y * y + 4.0 * nu2 * x - 4.0 * nu2 * nu2 > 0.0;
    if (region.kind == SpectralRegion::Kind::sigma_nu || !sigma_nu) return sigma_nu;
    const double se = std::sin(region.eps_L1);
    return std::abs(std::arg(z)) <= pi - 2.0 * region.eps_L1 && std::abs(z) >= 4.0 * nu2 / (se * se);
}

double truncation_tail(cplx lambda, double nu, double T) { return std::exp(-(nu + std::sqrt(lambda).real()) * T); }

namespace {

void require_margin(cplx lambda, double nu, double margin_min) {
    const double margin = std::sqrt(lambda).real() - nu;
    if (margin < margin_min) {
        std::ostringstream os;
        os << "lambda = " << lambda << " is too close to the boundary of Sigma_nu: Re sqrt(lambda) - nu = " << margin;
        throw NearSpectrumError(os.str());
    }
}

void require_decay(double tail, double peak, double tol) {
    if (peak > 0 && tail > tol * peak) {
        std::ostringstream os;
        os << "right-hand side has not decayed at T: tail/peak = " << tail / peak << " exceeds " << tol;
        throw DomainError(os.str());
    }
}

CVector resolve_column(const CVector& R, double h, cplx sq, double nu, KernelQuadrature q) {
    const cplx a = sq - nu;  // forward decay rate
    const cplx b = sq + nu;  // backward decay rate
    const CVector fwd = forward_sweep(a, R, h, q);
    const CVector bwd = backward_sweep(b, R, h, q);
    const cplx outer = bwd[0];
    CVector V(R.size());
    for (Eigen::Index m = 0; m < R.size(); ++m) {
        const double t = m * h;
        V[m] = (std::exp(-a * t) * outer - (fwd[m] + bwd[m])) / (2.0 * sq);
    }
    return V;
}

}  // namespace

CVector resolve_L1(cplx lambda, const CVector& R, const TemporalGrid& grid, double nu,
                   const TemporalResolventOptions& opts) {
    if (R.size() != grid.size()) throw DomainError("samples do not match the temporal grid");
    require_margin(lambda, nu, opts.margin_min);
    if (opts.check_decay && R.size() > 0)
        require_decay(std::abs(R[R.size() - 1]), R.cwiseAbs().maxCoeff(), opts.decay_tol);
    return resolve_column(R, grid.h(), std::sqrt(lambda), nu, opts.quadrature);
}

SpaceTimeField resolve_L1(cplx lambda, const SpaceTimeField& R, double nu, const TemporalResolventOptions& opts) {
    require_margin(lambda, nu, opts.margin_min);
    if (opts.check_decay) {
        const Eigen::Index last = R.tgrid.size() - 1;
        const double peak = std::max(R.v1.cwiseAbs().maxCoeff(), R.v2.cwiseAbs().maxCoeff());
        const double tail = std::max(R.v1.row(last).cwiseAbs().maxCoeff(), R.v2.row(last).cwiseAbs().maxCoeff());
        require_decay(tail, peak, opts.decay_tol);
    }
    const cplx sq = std::sqrt(lambda);
    const double h = R.tgrid.h();
    SpaceTimeField V(R.tgrid, R.agrid);
    for (Eigen::Index j = 0; j < R.v1.cols(); ++j) {
        V.v1.col(j) = resolve_column(R.v1.col(j), h, sq, nu, opts.quadrature);
        V.v2.col(j) = resolve_column(R.v2.col(j), h, sq, nu, opts.quadrature);
    }
    return V;
}

DiscreteTemporalResolvent::DiscreteTemporalResolvent(const TemporalGrid& grid, double nu, cplx z) : n_(grid.size()) {
    Eigen::SparseMatrix<cplx> id(n_ - 2, n_ - 2);
    id.setIdentity();
    Eigen::SparseMatrix<cplx> M = discrete::temporal_L1(n_, grid.h(), nu) - z * id;
    M.makeCompressed();
    lu_.compute(M);
    if (lu_.info() != Eigen::Success) {
        std::ostringstream os;
        os << "singular temporal system at z = " << z;
        throw NearSpectrumError(os.str());
    }
}

CMatrix DiscreteTemporalResolvent::apply(const CMatrix& rhs) const {
    CMatrix out = CMatrix::Zero(n_, rhs.cols());
    // Solve into a contiguous matrix: SparseLU's in-place triangular solves
    // mishandle a strided block destination.
    const CMatrix x = lu_.solve(CMatrix(rhs.middleRows(1, n_ - 2)));
    out.middleRows(1, n_ - 2) = x;
    return out;
}

bool L1BoundReport::all_hold() const {
    return !samples.empty() && std::all_of(samples.begin(), samples.end(), [](const L1BoundSample& s) {
        return s.in_sigma_L1 && s.holds() && s.proof_holds();
    });
}

L1BoundReport verify_L1_bound(const std::vector<cplx>& lambdas, const std::vector<SpaceTimeField>& corpus, double nu,
                              double eps_L1, double p, const TemporalResolventOptions& opts) {
    L1BoundReport rep;
    rep.constant = 4.0 / std::sin(eps_L1);
    const SpectralRegion region{SpectralRegion::Kind::sigma_L1, nu, eps_L1};
    for (const cplx& lam : lambdas) {
        L1BoundSample s;
        s.lambda = lam;
        s.in_sigma_L1 = in_region(lam, region);
        for (const SpaceTimeField& R : corpus) {
            const SpaceTimeField V = resolve_L1(lam, R, nu, opts);
            s.ratio = std::max(s.ratio, e_norm(V, p) / e_norm(R, p));
        }
        s.bound = rep.constant / std::abs(lam);
        s.proof_bound = 2.0 / ((std::sqrt(lam).real() - nu) * std::sqrt(std::abs(lam)));
        rep.max_scaled = std::max(rep.max_scaled, s.ratio * std::abs(lam));
        rep.samples.push_back(s);
    }
    return rep;
}

}  // namespace opcalc
