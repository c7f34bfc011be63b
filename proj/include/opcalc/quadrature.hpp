#pragma once

#include "opcalc/types.hpp"

namespace opcalc {

/// How exponential-kernel integrals are discretized on a uniform grid.
///  - trapezoid: composite trapezoid with exact nodal kernel values.
///  - product: the kernel is integrated exactly against the piecewise-linear
///    interpolant of the data, so accuracy does not degrade when |a|·h is large.
enum class KernelQuadrature { trapezoid, product };

/// L_i = ∫_{x_0}^{x_i} e^{−(x_i − s)a} f(s) ds at every node. Needs Re a ≥ 0.
CVector forward_sweep(cplx a, const CVector& f, double h, KernelQuadrature q);

/// R_i = ∫_{x_i}^{x_{n−1}} e^{−(s − x_i)a} f(s) ds at every node. Needs Re a ≥ 0.
CVector backward_sweep(cplx a, const CVector& f, double h, KernelQuadrature q);

}  // namespace opcalc
