import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dualorlicz import bodies as bd
from dualorlicz import functionals as fn
from dualorlicz.errors import NumericalDomainError, UnsupportedRepresentationError
from dualorlicz.orlicz import constant, power
from dualorlicz.sphgrid import build_grid, unit_ball_volume

# frozen before the build: 0.5 * integral of rho^3 for rho of diag(2, 1/2)B,
# by 1e6-node trapezoid and adaptive quadrature (agreeing to 6e-8)
ORACLE_ELLIPSE_DUAL_MIXED = 4.2892108875784


# ---------------------------------------------------------------------------
# volume / vrad

def test_volume_ball_n3(grid3):
    assert fn.volume(bd.ball(3), grid3).value == pytest.approx(4 * math.pi / 3, rel=1e-3)


def test_volume_ellipsoid(grid2):
    E = bd.ellipsoid(semi_axes=[2.0, 0.5])
    assert fn.volume(E, grid2).value == pytest.approx(math.pi, rel=1e-10)


def test_volume_cube_n3():
    g = build_grid(3, 20000, "fibonacci")
    assert fn.volume(bd.cube(3, 1.0), g).value == pytest.approx(8.0, rel=1e-2)


def test_vrad_scaled_ball(grid2):
    assert fn.vrad(bd.ball(2, 3.0), grid2) == pytest.approx(3.0, rel=1e-14)


def test_vrad_sl_invariance(grid2):
    TK = bd.transform(np.array([[1.0, 0.7], [0.0, 1.0]]), bd.ball(2))
    assert fn.vrad(TK, grid2) == pytest.approx(1.0, rel=1e-10)


def test_vrad_square(grid2):
    assert fn.vrad(bd.cube(2, 1.0), grid2) == pytest.approx(math.sqrt(4 / math.pi), rel=1e-3)


def test_volume_overflow_error(grid2):
    huge = bd.ball(2, 1e200)
    with pytest.raises(NumericalDomainError):
        fn.volume_value(huge, grid2)


# ---------------------------------------------------------------------------
# dual mixed volume

def test_dual_mixed_dilate_identity(grid2):
    K = bd.ball(2)
    L = bd.ball(2, 2.0)
    got = fn.dual_mixed_volume(power(3), K, L, grid2).value
    assert got == pytest.approx(8 * math.pi, rel=1e-12)


def test_dual_mixed_constant_phi(grid2):
    K = bd.make_random_star(2, grid2, seed=8, roughness=0.3)
    got = fn.dual_mixed_volume(constant(2.5), K, bd.ball(2), grid2).value
    assert got == pytest.approx(2.5 * fn.volume_value(K, grid2), rel=1e-13)


def test_dual_mixed_frozen_oracle(grid2):
    K = bd.ellipsoid(semi_axes=[2.0, 0.5])
    got = fn.dual_mixed_volume(power(-1), K, bd.ball(2), grid2).value
    assert got == pytest.approx(ORACLE_ELLIPSE_DUAL_MIXED, rel=1e-6)


def test_dual_mixed_ratio_clamp(grid2):
    with pytest.raises(NumericalDomainError):
        fn.dual_mixed_value(power(1), bd.ball(2), bd.ball(2, 1e-13), grid2)


# ---------------------------------------------------------------------------
# dual surface area / mean radius

def test_dual_surface_equal_volume_ball(grid2):
    # K = 2B: the equal-volume ball is K itself; value phi(1/2) * n * |K|
    phi = power(-1)
    got = fn.dual_surface_area(phi, bd.ball(2, 2.0), grid2).value
    assert got == pytest.approx(float(phi(0.5)) * 2 * 4 * math.pi, rel=1e-12)


def test_dual_surface_homogeneity(grid2):
    K = bd.make_random_star(2, grid2, seed=12, roughness=0.35)
    lam, p = 2.0, 1.0
    scaled = bd.transform(bd.LinearMap.scaling(2, lam), K)
    s_k = fn.dual_surface_area(power(p), K, grid2).value
    s_scaled = fn.dual_surface_area(power(p), scaled, grid2).value
    assert s_scaled == pytest.approx(lam ** (2 - p) * s_k, rel=1e-10)


def test_dual_surface_constant(grid2):
    K = bd.ellipsoid(semi_axes=[1.4, 0.8])
    got = fn.dual_surface_area(constant(1.0), K, grid2).value
    assert got == pytest.approx(2 * fn.volume_value(K, grid2), rel=1e-13)


def test_dual_mean_radius_scaled_ball(grid2):
    phi = power(2)
    assert fn.dual_mean_radius(phi, bd.ball(2, 3.0), grid2).value == pytest.approx(9.0, rel=1e-13)


def test_dual_mean_radius_equal_volume_ball(grid2):
    K = bd.make_random_star(2, grid2, seed=3, roughness=0.3)
    phi = power(2)
    b_k = bd.ball(2, fn.vrad(K, grid2))
    got = fn.dual_mean_radius(phi, b_k, grid2).value
    assert got == pytest.approx(float(phi(fn.vrad(K, grid2))), rel=1e-12)


def test_dual_mean_radius_constant(grid2):
    got = fn.dual_mean_radius(constant(3.0), bd.cube(2, 1.0), grid2).value
    assert got == pytest.approx(3.0, rel=1e-13)


# ---------------------------------------------------------------------------
# primal functionals (polytopes and balls)

def test_primal_self_mixed_volume_is_volume(grid2):
    sq = bd.cube(2, 1.0)
    got = fn.primal_mixed_volume(power(2), sq, sq, grid2).value
    assert got == pytest.approx(4.0, rel=1e-12)


def test_primal_surface_area_ball(grid2):
    phi = power(2)
    r = 2.0
    got = fn.primal_surface_area(phi, bd.ball(2, r), grid2).value
    expected = float(phi(1 / r)) * 2 * math.pi * r**2
    assert got == pytest.approx(expected, rel=1e-12)


def test_primal_mean_width_ball(grid2):
    K = bd.cube(2, 1.0)
    phi = power(2)
    b_k = bd.ball(2, fn.vrad(K, grid2))
    got = fn.primal_mean_width(phi, b_k, grid2).value
    assert got == pytest.approx(float(phi(fn.vrad(K, grid2))), rel=1e-12)


def test_primal_rejects_general_bodies(grid2):
    with pytest.raises(UnsupportedRepresentationError):
        fn.primal_mixed_volume(power(1), bd.ellipsoid(semi_axes=[2, 1]), bd.ball(2), grid2)


# ---------------------------------------------------------------------------
# multi-body and i-th variants

def test_multi_reduces_to_single(grid2):
    K = bd.make_random_star(2, grid2, seed=5, roughness=0.3)
    L = bd.ellipsoid(semi_axes=[1.2, 0.9])
    phi = power(1.5)
    multi = fn.multi_dual_mixed_volume([phi, phi], [K, K], [L, L], grid2).value
    single = fn.dual_mixed_volume(phi, K, L, grid2).value
    assert multi == pytest.approx(single, rel=1e-12)


def test_multi_unit_balls(grid2):
    B = bd.ball(2)
    got = fn.multi_dual_mixed_volume([power(0.5), power(2)], [B, B], [B, B], grid2).value
    assert got == pytest.approx(math.pi, rel=1e-13)


def test_multi_constant_integrand(grid2):
    B = bd.ball(2)
    got = fn.multi_dual_mixed_volume([power(1), power(1)],
                                     [B, bd.ball(2, 2.0)], [B, B], grid2).value
    assert got == pytest.approx(math.sqrt(2) * math.pi, rel=1e-13)


def test_multi_slot_count(grid2):
    with pytest.raises(UnsupportedRepresentationError):
        fn.multi_dual_mixed_volume([power(1)], [bd.ball(2)], [bd.ball(2)], grid2)


def test_ith_endpoint_reductions(grid2):
    K = bd.ellipsoid(semi_axes=[2.0, 0.5])
    L = bd.make_random_star(2, grid2, seed=4, roughness=0.3)
    Q1, Q2 = bd.ball(2, 2.0), bd.ball(2, 0.8)
    phi1, phi2 = power(1), power(0.5)
    at0 = fn.ith_dual_mixed_volume(phi1, phi2, 0.0, K, L, Q1, Q2, grid2).value
    assert at0 == pytest.approx(fn.dual_mixed_volume(phi1, K, Q1, grid2).value, rel=1e-12)
    at_n = fn.ith_dual_mixed_volume(phi1, phi2, 2.0, K, L, Q1, Q2, grid2).value
    assert at_n == pytest.approx(fn.dual_mixed_volume(phi2, L, Q2, grid2).value, rel=1e-12)


def test_ith_constant_integrand(grid2):
    B = bd.ball(2)
    phi1, phi2 = power(0.5), power(1.5)
    for i in (-1.0, 0.7, 3.0):
        got = fn.ith_dual_mixed_volume(phi1, phi2, i, B, B, B, B, grid2).value
        assert got == pytest.approx(math.pi, rel=1e-12)


# ---------------------------------------------------------------------------
# invariants

def test_sl_invariance_dual_mixed(grid2):
    T = np.array([[1.0, 0.6], [0.0, 1.0]])
    K = bd.ellipsoid(semi_axes=[1.5, 0.7])
    L = bd.ellipsoid(semi_axes=[0.9, 1.2])
    phi = power(-1)
    a = fn.dual_mixed_value(phi, K, L, grid2)
    b = fn.dual_mixed_value(phi, bd.transform(T, K), bd.transform(T, L), grid2)
    assert b == pytest.approx(a, rel=3e-3)


def test_monotone_in_phi_exact_on_grid(grid2):
    K = bd.make_random_star(2, grid2, seed=31, roughness=0.4)
    L = bd.make_random_star(2, grid2, seed=32, roughness=0.4)
    lo = power(-1)
    hi = constant(1.0)  # t^-1 <= 1 fails; use phi <= 2*phi instead

    def double_phi(t):
        return 2.0 * np.power(np.asarray(t, float), -1.0)

    from dualorlicz.orlicz import from_callable
    hi = from_callable(double_phi, label="2*t^-1")
    assert fn.dual_mixed_value(lo, K, L, grid2) <= fn.dual_mixed_value(hi, K, L, grid2)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10**6),
       s=st.floats(-3.0, -0.2), r=st.floats(0.2, 1.8), q=st.floats(2.2, 5.0))
def test_lyapunov_kernel_exact(grid2, seed, s, r, q):
    # for s < r < q the power interpolation inequality holds on any grid
    K = bd.make_random_star(2, grid2, seed=seed, roughness=0.45)
    Q = bd.make_random_star(2, grid2, seed=seed + 1, roughness=0.45)
    v = {p: 2 * fn.dual_mixed_value(power(p), K, Q, grid2) for p in (s, r, q)}
    lam = (q - r) / (q - s)
    rhs = math.exp(lam * math.log(v[s]) + (1 - lam) * math.log(v[q]))
    assert v[r] <= rhs * (1 + 1e-12)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10**6), lam=st.floats(0.3, 3.0))
def test_dual_minkowski_both_branches(grid2, seed, lam):
    K = bd.make_random_star(2, grid2, seed=seed, roughness=0.45)
    L = bd.make_random_star(2, grid2, seed=seed + 7, roughness=0.45)
    vol_k = fn.volume_value(K, grid2)
    vol_l = fn.volume_value(L, grid2)
    ratio = (vol_l / vol_k) ** 0.5
    concave = power(1)     # F(t) = sqrt(t) concave
    convex = power(-1)     # F(t) = 1/sqrt(t) convex
    assert fn.dual_mixed_value(concave, K, L, grid2) <= vol_k * float(concave(ratio)) * (1 + 1e-12)
    assert fn.dual_mixed_value(convex, K, L, grid2) >= vol_k * float(convex(ratio)) * (1 - 1e-12)
    # equality for dilates
    L2 = bd.transform(bd.LinearMap.scaling(2, lam), K)
    got = fn.dual_mixed_value(convex, K, L2, grid2)
    assert got == pytest.approx(float(convex(lam)) * vol_k, rel=1e-10)


def test_alexander_fenchel_kernel_exact(grid2):
    rng = np.random.default_rng(0)
    n = 2
    Ks = [bd.make_random_star(n, grid2, seed=int(rng.integers(1e6)), roughness=0.4)
          for _ in range(n)]
    Ls = [bd.make_random_star(n, grid2, seed=int(rng.integers(1e6)), roughness=0.4)
          for _ in range(n)]
    phis = [power(0.6), power(1.4)]
    vec = fn.multi_dual_mixed_value(phis, Ks, Ls, grid2)
    for m in range(1, n + 1):
        rhs = 1.0
        for i in range(m):
            idx = list(range(n - m)) + [n - 1 - i] * m
            rhs *= fn.multi_dual_mixed_value([phis[j] for j in idx],
                                             [Ks[j] for j in idx],
                                             [Ls[j] for j in idx], grid2)
        assert vec**m <= rhs * (1 + 1e-12)


def test_blaschke_santalo_equality_on_ellipsoids(grid2):
    from dualorlicz.bodies import polar

    for axes in ([1.0, 1.0], [2.0, 0.5], [1.6, 0.9]):
        E = bd.ellipsoid(semi_axes=axes)
        product = fn.vrad(E, grid2) * fn.vrad(polar(E, grid2), grid2)
        assert product == pytest.approx(1.0, rel=1e-10)


def test_functional_value_metadata(grid2):
    fv = fn.dual_mixed_volume(power(1), bd.ball(2), bd.ball(2, 2.0), grid2)
    assert fv.quadrature_error >= 0.0
    assert len(fv.digest) == 16
    assert float(fv) == fv.value
