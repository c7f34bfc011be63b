#include "opcalc/quadrature.hpp"

#include <cmath>

namespace opcalc {

namespace {

struct StepWeights {
    cplx decay;  // e^{−ah}
    cplx far;    // weight of the sample one step away
    cplx near;   // weight of the sample at the evaluation node
};

// ∫₀¹ e^{−zt} t dt and ∫₀¹ e^{−zt}(1 − t) dt, with series near z = 0.
StepWeights step_weights(cplx a, double h, KernelQuadrature q) {
    const cplx z = a * h;
    const cplx e = std::exp(-z);
    if (q == KernelQuadrature::trapezoid) return {e, 0.5 * h * e, cplx(0.5 * h)};
    cplx w_far, w_near;
    if (std::abs(z) < 0.5) {
        cplx term = 1.0;  // (−z)^k / k!
        w_far = 0.0;
        w_near = 0.0;
        for (int k = 0; k < 24; ++k) {
            w_far += term / double(k + 2);
            w_near += term / double((k + 1) * (k + 2));
            term *= -z / double(k + 1);
        }
    } else {
        const cplx e0 = (1.0 - e) / z;
        const cplx e1 = (1.0 - e - z * e) / (z * z);
        w_far = e1;
        w_near = e0 - e1;
    }
    return {e, h * w_far, h * w_near};
}

}  // namespace

CVector forward_sweep(cplx a, const CVector& f, double h, KernelQuadrature q) {
    const StepWeights w = step_weights(a, h, q);
    CVector out(f.size());
    if (f.size() == 0) return out;
    out[0] = 0.0;
    for (Eigen::Index i = 1; i < f.size(); ++i) out[i] = w.decay * out[i - 1] + w.far * f[i - 1] + w.near * f[i];
    return out;
}

CVector backward_sweep(cplx a, const CVector& f, double h, KernelQuadrature q) {
    const StepWeights w = step_weights(a, h, q);
    const Eigen::Index n = f.size();
    CVector out(n);
    if (n == 0) return out;
    out[n - 1] = 0.0;
    for (Eigen::Index i = n - 2; i >= 0; --i) out[i] = w.decay * out[i + 1] + w.far * f[i + 1] + w.near * f[i];
    return out;
}

}  // namespace opcalc
