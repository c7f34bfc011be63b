#include "opcalc/discrete.hpp"

#include <vector>

namespace opcalc::discrete {

namespace {

using Triplet = Eigen::Triplet<cplx>;

SpMat from_triplets(int rows, int cols, const std::vector<Triplet>& t) {
    SpMat m(rows, cols);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

std::vector<Triplet> to_triplets(const SpMat& m, int row_offset = 0, int col_offset = 0, cplx scale = 1.0) {
    std::vector<Triplet> out;
    out.reserve(m.nonZeros());
    for (int k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it)
            out.emplace_back(static_cast<int>(it.row()) + row_offset, static_cast<int>(it.col()) + col_offset,
                             scale * it.value());
    return out;
}

}  // namespace

SpMat angular_d2(int n, double h) {
    const int m = n - 2;
    const double c = 1.0 / (h * h);
    std::vector<Triplet> t;
    for (int i = 0; i < m; ++i) {
        if (i > 0) t.emplace_back(i, i - 1, c);
        t.emplace_back(i, i, -2.0 * c);
        if (i + 1 < m) t.emplace_back(i, i + 1, c);
    }
    return from_triplets(m, m, t);
}

SpMat angular_d4(int n, double h) {
    const int m = n - 2;
    const double c = 1.0 / (h * h * h * h);
    const double w[5] = {1.0, -4.0, 6.0, -4.0, 1.0};
    std::vector<Triplet> t;
    for (int i = 0; i < m; ++i)
        for (int k = -2; k <= 2; ++k) {
            const int j = i + k;
            if (j >= 0 && j < m) t.emplace_back(i, j, w[k + 2] * c);
        }
    // Reflected ghost ψ(−h) = ψ(h) folds one extra copy onto the first and last diagonal entry.
    t.emplace_back(0, 0, c);
    t.emplace_back(m - 1, m - 1, c);
    return from_triplets(m, m, t);
}

SpMat angular_A(int n, double h) {
    const int m = n - 2;
    SpMat id(m, m);
    id.setIdentity();
    const SpMat D2 = angular_d2(n, h);
    const SpMat lower_left = -(angular_d4(n, h) + 2.0 * D2 + id);
    const SpMat lower_right = -2.0 * (D2 - id);
    std::vector<Triplet> t = to_triplets(id, 0, m);
    for (const auto& x : to_triplets(lower_left, m, 0)) t.push_back(x);
    for (const auto& x : to_triplets(lower_right, m, m)) t.push_back(x);
    return from_triplets(2 * m, 2 * m, t);
}

SpMat temporal_L1(int n, double h, double nu) {
    const int m = n - 2;
    const double a = 1.0 / (h * h) + nu / h;   // coefficient of V_{i−1}
    const double b = -2.0 / (h * h) + nu * nu;  // diagonal
    const double c = 1.0 / (h * h) - nu / h;   // coefficient of V_{i+1}
    std::vector<Triplet> t;
    for (int i = 0; i < m; ++i) {
        if (i > 0) t.emplace_back(i, i - 1, a);
        t.emplace_back(i, i, b);
        if (i + 1 < m) t.emplace_back(i, i + 1, c);
    }
    return from_triplets(m, m, t);
}

CVector pack(const StateVector& sv) {
    const int m = sv.size() - 2;
    CVector x(2 * m);
    x.head(m) = sv.psi1.segment(1, m);
    x.tail(m) = sv.psi2.segment(1, m);
    return x;
}

StateVector unpack(const CVector& x, int n, DomainTag tag) {
    const int m = n - 2;
    StateVector sv = StateVector::zeros(n, tag);
    sv.psi1.segment(1, m) = x.head(m);
    sv.psi2.segment(1, m) = x.tail(m);
    return sv;
}

SpMat sum_operator(const TemporalGrid& tg, const AngularGrid& ag, double nu) {
    const int mt = tg.size() - 2;
    const int ma = ag.size() - 2;
    const int block = mt * ma;
    const SpMat L1 = temporal_L1(tg.size(), tg.h(), nu);
    const SpMat A = angular_A(ag.size(), ag.h());
    auto index = [&](int comp, int t, int th) { return comp * block + t * ma + th; };

    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(2 * block) * 10);
    // L₁ acts along t on each (component, θ) line.
    for (int k = 0; k < L1.outerSize(); ++k)
        for (SpMat::InnerIterator it(L1, k); it; ++it)
            for (int comp = 0; comp < 2; ++comp)
                for (int th = 0; th < ma; ++th)
                    trip.emplace_back(index(comp, static_cast<int>(it.row()), th),
                                      index(comp, static_cast<int>(it.col()), th), it.value());
    // −𝒜 acts along θ on each time slice; A's rows and columns are (component, θ).
    for (int k = 0; k < A.outerSize(); ++k)
        for (SpMat::InnerIterator it(A, k); it; ++it) {
            const int rc = static_cast<int>(it.row()) / ma, rth = static_cast<int>(it.row()) % ma;
            const int cc = static_cast<int>(it.col()) / ma, cth = static_cast<int>(it.col()) % ma;
            for (int t = 0; t < mt; ++t) trip.emplace_back(index(rc, t, rth), index(cc, t, cth), -it.value());
        }
    return from_triplets(2 * block, 2 * block, trip);
}

CVector pack(const SpaceTimeField& V) {
    const int mt = V.tgrid.size() - 2;
    const int ma = V.agrid.size() - 2;
    CVector x(2 * mt * ma);
    for (int t = 0; t < mt; ++t)
        for (int th = 0; th < ma; ++th) {
            x[t * ma + th] = V.v1(t + 1, th + 1);
            x[mt * ma + t * ma + th] = V.v2(t + 1, th + 1);
        }
    return x;
}

SpaceTimeField unpack(const CVector& x, const TemporalGrid& tg, const AngularGrid& ag) {
    const int mt = tg.size() - 2;
    const int ma = ag.size() - 2;
    SpaceTimeField V(tg, ag);
    for (int t = 0; t < mt; ++t)
        for (int th = 0; th < ma; ++th) {
            V.v1(t + 1, th + 1) = x[t * ma + th];
            V.v2(t + 1, th + 1) = x[mt * ma + t * ma + th];
        }
    return V;
}

SpaceTimeField apply_sum(const SpaceTimeField& V, double nu) {
    SpaceTimeField l1 = apply_L1(V, nu, L1Options{.check_domain = false});
    SpaceTimeField a(V.tgrid, V.agrid);
    for (int m = 0; m < V.tgrid.size(); ++m) {
        StateVector s = V.state(m);
        s.tag = DomainTag::DA;
        a.set_state(m, apply_A(s, V.agrid, Closure::ghost));
    }
    SpaceTimeField out = l1 - a;
    const Eigen::Index nt = V.tgrid.size(), na = V.agrid.size();
    for (CMatrix* c : {&out.v1, &out.v2}) {
        c->row(0).setZero();
        c->row(nt - 1).setZero();
        c->col(0).setZero();
        c->col(na - 1).setZero();
    }
    return out;
}

}  // namespace opcalc::discrete
