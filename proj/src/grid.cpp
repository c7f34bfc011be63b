#include "opcalc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace opcalc {

void ProblemParams::validate() const {
    if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("p must lie in (1, inf)");
    if (!(omega > 0.0) || omega > 2 * pi + 1e-15) throw DomainError("omega must lie in (0, 2pi]");
    if (!(k >= 0.0) || !std::isfinite(k)) throw DomainError("k must be a nonnegative real");
    if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("rho must be positive");
}

UniformGrid::UniformGrid(double length, int n, int min_nodes) : length_(length), n_(n) {
    if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("grid length must be positive");
    if (n < min_nodes) {
        std::ostringstream os;
        os << "grid too small: " << n << " nodes, need at least " << min_nodes;
        throw DomainError(os.str());
    }
}

RVector UniformGrid::nodes() const {
    RVector x(n_);
    for (int i = 0; i < n_; ++i) x[i] = node(i);
    return x;
}

CVector d1(const CVector& f, double h) {
    const Eigen::Index n = f.size();
    if (n < 3) throw DomainError("d1 needs at least 3 nodes");
    CVector out(n);
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2 * h);
    for (Eigen::Index i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - f[i - 1]) / (2 * h);
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2 * h);
    return out;
}

CVector d2(const CVector& f, double h) {
    const Eigen::Index n = f.size();
    if (n < 4) throw DomainError("d2 needs at least 4 nodes");
    const double h2 = h * h;
    CVector out(n);
    // Four-point one-sided formula, exact on cubics.
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    for (Eigen::Index i = 1; i + 1 < n; ++i) out[i] = (f[i - 1] - 2.0 * f[i] + f[i + 1]) / h2;
    out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
    return out;
}

CVector d4(const CVector& f, double h, Closure closure) {
    const Eigen::Index n = f.size();
    if (n < 7) throw DomainError("d4 needs at least 7 nodes");
    const double h4 = h * h * h * h;
    CVector out(n);
    for (Eigen::Index i = 2; i + 2 < n; ++i)
        out[i] = (f[i - 2] - 4.0 * f[i - 1] + 6.0 * f[i] - 4.0 * f[i + 1] + f[i + 2]) / h4;

    // Ends are symmetric: apply the same weights to the reversed sequence.
    auto ends = [&](auto at, auto put) {
        if (closure == Closure::one_sided) {
            // Six-point skewed stencils, exact on quintics.
            put(0, (3.0 * at(0) - 14.0 * at(1) + 26.0 * at(2) - 24.0 * at(3) + 11.0 * at(4) - 2.0 * at(5)) / h4);
            put(1, (2.0 * at(0) - 9.0 * at(1) + 16.0 * at(2) - 14.0 * at(3) + 6.0 * at(4) - at(5)) / h4);
        } else {
            put(0, (6.0 * at(0) - 8.0 * at(1) + 2.0 * at(2)) / h4);
            put(1, (-4.0 * at(0) + 7.0 * at(1) - 4.0 * at(2) + at(3)) / h4);
        }
    };
    ends([&](Eigen::Index j) { return f[j]; }, [&](Eigen::Index j, cplx v) { out[j] = v; });
    ends([&](Eigen::Index j) { return f[n - 1 - j]; }, [&](Eigen::Index j, cplx v) { out[n - 1 - j] = v; });
    return out;
}

double lp_norm(const CVector& f, double h, double p) {
    if (!(p > 1.0)) throw DomainError("lp_norm needs p > 1");
    const Eigen::Index n = f.size();
    if (n == 0) return 0.0;
    if (n == 1) return 0.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        acc += w * std::pow(std::abs(f[i]), p);
    }
    return std::pow(h * acc, 1.0 / p);
}

StateVector StateVector::zeros(int n, DomainTag tag) {
    return StateVector{CVector::Zero(n), CVector::Zero(n), tag};
}

double x_norm(const StateVector& sv, const AngularGrid& grid, double p) {
    if (sv.psi1.size() != grid.size() || sv.psi2.size() != grid.size())
        throw DomainError("state vector does not match the angular grid");
    const double h = grid.h();
    return lp_norm(sv.psi1, h, p) + lp_norm(d1(sv.psi1, h), h, p) + lp_norm(d2(sv.psi1, h), h, p) +
           lp_norm(sv.psi2, h, p);
}

bool is_clamped(const CVector& f, double h, double rel_tol) {
    const Eigen::Index n = f.size();
    const double scale = f.cwiseAbs().maxCoeff();
    if (scale == 0.0) return true;
    if (std::abs(f[0]) > 1e-12 * scale || std::abs(f[n - 1]) > 1e-12 * scale) return false;
    const double length = h * (n - 1);
    if (n < 5) return true;
    // Fourth-order one-sided differences: a clamped shape with a large third derivative would
    // otherwise show an O(h²) endpoint slope on coarse grids.
    const cplx left = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    const cplx right =
        (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / (12.0 * h);
    return std::abs(left) * length <= rel_tol * scale && std::abs(right) * length <= rel_tol * scale;
}

SpaceTimeField::SpaceTimeField(TemporalGrid tg, AngularGrid ag)
    : tgrid(tg), agrid(ag), v1(CMatrix::Zero(tg.size(), ag.size())), v2(CMatrix::Zero(tg.size(), ag.size())) {}

StateVector SpaceTimeField::state(int m) const {
    return StateVector{v1.row(m).transpose(), v2.row(m).transpose(), DomainTag::X};
}

void SpaceTimeField::set_state(int m, const StateVector& sv) {
    if (sv.size() != agrid.size()) throw DomainError("state vector does not match the angular grid");
    v1.row(m) = sv.psi1.transpose();
    v2.row(m) = sv.psi2.transpose();
}

bool SpaceTimeField::same_grids(const SpaceTimeField& o) const {
    return static_cast<const UniformGrid&>(tgrid) == o.tgrid && static_cast<const UniformGrid&>(agrid) == o.agrid;
}

SpaceTimeField& SpaceTimeField::operator+=(const SpaceTimeField& o) {
    if (!same_grids(o)) throw DomainError("field grids differ");
    v1 += o.v1;
    v2 += o.v2;
    return *this;
}

SpaceTimeField& SpaceTimeField::operator-=(const SpaceTimeField& o) {
    if (!same_grids(o)) throw DomainError("field grids differ");
    v1 -= o.v1;
    v2 -= o.v2;
    return *this;
}

SpaceTimeField& SpaceTimeField::operator*=(cplx c) {
    v1 *= c;
    v2 *= c;
    return *this;
}

SpaceTimeField operator+(SpaceTimeField a, const SpaceTimeField& b) { return a += b; }
SpaceTimeField operator-(SpaceTimeField a, const SpaceTimeField& b) { return a -= b; }
SpaceTimeField operator*(cplx c, SpaceTimeField a) { return a *= c; }

double e_norm(const SpaceTimeField& V, double p) {
    const int nt = V.tgrid.size();
    double acc = 0.0;
    for (int m = 0; m < nt; ++m) {
        const double w = (m == 0 || m == nt - 1) ? 0.5 : 1.0;
        acc += w * std::pow(x_norm(V.state(m), V.agrid, p), p);
    }
    return std::pow(V.tgrid.h() * acc, 1.0 / p);
}

double max_imag(const SpaceTimeField& V) {
    return std::max(V.v1.imag().cwiseAbs().maxCoeff(), V.v2.imag().cwiseAbs().maxCoeff());
}

CMatrix dt1(const CMatrix& values, double h) {
    CMatrix out(values.rows(), values.cols());
    for (Eigen::Index j = 0; j < values.cols(); ++j) out.col(j) = d1(values.col(j), h);
    return out;
}

CMatrix dt2(const CMatrix& values, double h) {
    CMatrix out(values.rows(), values.cols());
    for (Eigen::Index j = 0; j < values.cols(); ++j) out.col(j) = d2(values.col(j), h);
    return out;
}

StateVector apply_A(const StateVector& sv, const AngularGrid& grid, Closure closure) {
    if (sv.tag != DomainTag::DA) throw DomainError("apply_A needs a state tagged as an element of D(A)");
    if (sv.size() != grid.size()) throw DomainError("state vector does not match the angular grid");
    const double h = grid.h();
    const CVector d2psi1 = d2(sv.psi1, h);
    StateVector out{sv.psi2, CVector(), DomainTag::X};
    out.psi2 = -(d4(sv.psi1, h, closure) + 2.0 * d2psi1 + sv.psi1) - 2.0 * (d2(sv.psi2, h) - sv.psi2);
    return out;
}

namespace {

void require_angular_traces(const SpaceTimeField& V) {
    const double scale = std::max({V.v1.cwiseAbs().maxCoeff(), V.v2.cwiseAbs().maxCoeff(), 1e-300});
    const Eigen::Index last = V.agrid.size() - 1;
    const double edge = std::max({V.v1.col(0).cwiseAbs().maxCoeff(), V.v1.col(last).cwiseAbs().maxCoeff(),
                                  V.v2.col(0).cwiseAbs().maxCoeff(), V.v2.col(last).cwiseAbs().maxCoeff()});
    if (edge > 1e-12 * scale) throw DomainError("field does not vanish at theta = 0, omega; not in D(A)");
}

}  // namespace

SpaceTimeField apply_A(const SpaceTimeField& V, Closure closure) {
    require_angular_traces(V);
    SpaceTimeField out(V.tgrid, V.agrid);
    for (int m = 0; m < V.tgrid.size(); ++m) {
        StateVector s = V.state(m);
        s.tag = DomainTag::DA;
        out.set_state(m, apply_A(s, V.agrid, closure));
    }
    return out;
}

StateVector apply_A0(const StateVector& sv, const AngularGrid& grid) {
    if (sv.size() != grid.size()) throw DomainError("state vector does not match the angular grid");
    return StateVector{CVector::Zero(sv.size()), d2(sv.psi1, grid.h()) + sv.psi1 + sv.psi2, DomainTag::X};
}

SpaceTimeField apply_B2(const SpaceTimeField& V, double nu) {
    SpaceTimeField out(V.tgrid, V.agrid);
    out.v2 = -2.0 * (dt1(V.v1, V.tgrid.h()) - nu * V.v1);
    return out;
}

SpaceTimeField apply_L1(const SpaceTimeField& V, double nu, const L1Options& opts) {
    if (opts.check_domain) {
        const double peak = std::max(V.v1.cwiseAbs().maxCoeff(), V.v2.cwiseAbs().maxCoeff());
        const Eigen::Index last = V.tgrid.size() - 1;
        const double head = std::max(V.v1.row(0).cwiseAbs().maxCoeff(), V.v2.row(0).cwiseAbs().maxCoeff());
        const double tail = std::max(V.v1.row(last).cwiseAbs().maxCoeff(), V.v2.row(last).cwiseAbs().maxCoeff());
        if (head > 1e-12 * peak) throw DomainError("field is not zero at t = 0; not in D(L1)");
        if (tail > opts.decay_tol * peak) {
            std::ostringstream os;
            os << "insufficient decay at T: tail/peak = " << tail / peak << " exceeds " << opts.decay_tol;
            throw DomainError(os.str());
        }
    }
    const double h = V.tgrid.h();
    SpaceTimeField out(V.tgrid, V.agrid);
    out.v1 = dt2(V.v1, h) - 2.0 * nu * dt1(V.v1, h) + nu * nu * V.v1;
    out.v2 = dt2(V.v2, h) - 2.0 * nu * dt1(V.v2, h) + nu * nu * V.v2;
    return out;
}

}  // namespace opcalc
