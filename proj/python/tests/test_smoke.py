import math

import numpy as np
import pytest

import opcalc


def test_tau():
    assert abs(opcalc.reference_tau() - 4.21239) < 1e-3
    roots = opcalc.find_roots("plus", math.pi / 2, (0.1, 30.0, 0.0, 30.0))
    assert min(abs(r.value.imag) for r in roots) == pytest.approx(4.21239, abs=1e-5)
    assert roots[0].family == "plus"
    holds, margin = opcalc.check_separation(math.pi / 2, 2.0)
    assert holds and margin == pytest.approx(4.21239 - math.pi, abs=1e-4)


def test_params():
    P = opcalc.ProblemParams(p=4.0)
    assert P.nu == pytest.approx(2.5)
    with pytest.raises(opcalc.DomainError):
        opcalc.ProblemParams(p=0.5)


def test_angular_resolvent_matches_oracle():
    w = math.pi / 2
    th = np.linspace(0.0, w, 257)
    f1 = np.zeros_like(th, dtype=complex)
    f2 = (th**2 * (w - th) ** 2).astype(complex)
    psi1, psi2 = opcalc.resolve_A(-1.0, f1, f2, w)
    r1, r2 = opcalc.dense_oracle(-1.0, f1, f2, w)
    err = opcalc.x_norm(psi1 - r1, psi2 - r2, w) / opcalc.x_norm(r1, r2, w)
    assert err < 1e-3
    with pytest.raises(opcalc.NearSpectrumError):
        opcalc.resolve_A(4.0, f1, f2, w)


def test_temporal_exact_example():
    nu, lam, T = 2.0, 16.0, 24.0
    t = np.linspace(0.0, T, 12001)
    V = opcalc.resolve_L1(lam, np.exp(-t).astype(complex), T, nu, check_decay=False)
    c = 1.0 / ((1 + nu) ** 2 - lam)
    exact = c * (np.exp(-t) - np.exp((nu - math.sqrt(lam)) * t))
    assert np.max(np.abs(V - exact)) < 1e-6


def test_dpg_and_full_solve():
    like = opcalc.Field(16.0, 64, math.pi / 2, 32)
    P = opcalc.ProblemParams()
    F = opcalc.field_corpus(1, like, 5)[0]
    dpg = opcalc.Inverter(like, P, "dpg")
    direct = opcalc.Inverter(like, P, "direct")
    a, b = dpg.apply(F), direct.apply(F)
    assert (a - b).e_norm() / b.e_norm() < 1e-3

    P.rho = 0.5
    Vs = opcalc.manufactured(like)
    V, trace, residual = opcalc.solve_full(opcalc.apply_full(Vs, P), P, direct)
    assert trace["converged"]
    assert (V - Vs).e_norm() / Vs.e_norm() < 1e-6
    assert opcalc.regularity(V, opcalc.apply_full(Vs, P))["passed"]
    u = opcalc.reconstruct_u(V, P, [0.25, 0.5])
    assert u.shape == (2, 32)


def test_multiplier():
    xi = np.array([1e-8, 0.5, 2.0])
    m = opcalc.multiplier(xi, 1.0)
    assert abs(m[0]) == pytest.approx(0.5, rel=1e-6)
    assert np.all(np.abs(m[1:]) < 0.5)
    b = opcalc.sup_bounds(1.0, per_decade=200)
    assert b["mikhlin_sum"] == pytest.approx(19 / 32, abs=1e-4)
    integral, reflection, err = opcalc.gamma_reflection(0.5)
    assert integral == pytest.approx(math.pi, rel=1e-10)


def test_config_and_acceptance():
    cfg = opcalc.parse_config("[problem]\nomega = pi/3\n")
    assert float(cfg["problem.omega"]) == pytest.approx(math.pi / 3)
    with pytest.raises(opcalc.DomainError):
        opcalc.parse_config("[problem]\nbogus = 1\n")
    results = opcalc.acceptance(only=[1, 2])
    assert [r["id"] for r in results] == [1, 2]
    assert all(r["passed"] for r in results)
