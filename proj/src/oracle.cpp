#include "opcalc/oracle.hpp"

namespace opcalc {

StateVector dense_clamped_oracle(cplx lambda, const StateVector& F, const AngularGrid& grid) {
    const int n = grid.size();
    if (F.size() != n) throw DomainError("state vector does not match the angular grid");
    const double h = grid.h(), h2 = h * h, h4 = h2 * h2;
    CMatrix M = CMatrix::Zero(n, n);
    CVector g = CVector::Zero(n);

    M(0, 0) = 1.0;
    M(1, 0) = -3.0;
    M(1, 1) = 4.0;
    M(1, 2) = -1.0;
    M(n - 1, n - 1) = 1.0;
    M(n - 2, n - 1) = -3.0;
    M(n - 2, n - 2) = 4.0;
    M(n - 2, n - 3) = -1.0;

    const cplx c2 = 2.0 * (1.0 + lambda), c0 = (lambda - 1.0) * (lambda - 1.0);
    const double q4[5] = {1, -4, 6, -4, 1};
    for (int i = 2; i < n - 2; ++i) {
        for (int k = 0; k < 5; ++k) M(i, i - 2 + k) += q4[k] / h4;
        M(i, i - 1) += c2 / h2;
        M(i, i) += -2.0 * c2 / h2 + c0;
        M(i, i + 1) += c2 / h2;
        const cplx f1pp = (F.psi1[i - 1] - 2.0 * F.psi1[i] + F.psi1[i + 1]) / h2;
        g[i] = -F.psi2[i] - 2.0 * (f1pp - F.psi1[i]) - lambda * F.psi1[i];
    }
    StateVector out;
    out.psi1 = M.partialPivLu().solve(g);
    out.psi2 = lambda * out.psi1 + F.psi1;
    out.tag = DomainTag::DA;
    return out;
}

}  // namespace opcalc
