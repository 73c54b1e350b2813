"""Closed-form functionals: volumes, dual Orlicz mixed volumes and their
multi-body / i-th variants, dual surface area and mean radius, and the
primal Orlicz mixed volume / surface area / mean width for polytopes and
balls.

Every public operation returns a :class:`FunctionalValue` carrying the
value, a quadrature error estimate (the difference against a half
resolution re-evaluation), and a digest of the inputs.  The private
``*_value`` kernels return bare floats and are shared with the extremal
estimators.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from . import bodies as bd
from .errors import NumericalDomainError, UnsupportedRepresentationError
from .orlicz import OrliczFunction
from .sphgrid import SphericalGrid, unit_ball_volume

RATIO_MIN, RATIO_MAX = 1e-12, 1e12


@dataclass
class FunctionalValue:
    value: float
    quadrature_error: float
    digest: str

    def __float__(self) -> float:
        return self.value


def _digest(*parts) -> str:
    text = "|".join(str(p) for p in parts)
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def _check_ratios(ratios: np.ndarray) -> np.ndarray:
    bad = ~np.isfinite(ratios) | (ratios < RATIO_MIN) | (ratios > RATIO_MAX)
    if np.any(bad):
        idx = int(np.argmax(bad))
        raise NumericalDomainError(
            f"radial ratio {ratios[idx]} at node {idx} outside [{RATIO_MIN}, {RATIO_MAX}]",
            node_index=idx,
        )
    return ratios


def _check_phi_values(vals: np.ndarray, label: str) -> np.ndarray:
    finite = np.isfinite(vals)
    if not finite.all():
        idx = int(np.argmin(finite))
        raise NumericalDomainError(
            f"{label} evaluated to {vals[idx]} at node {idx}", node_index=idx
        )
    return vals


def _rho(K: bd.StarBody, grid: SphericalGrid) -> np.ndarray:
    return bd.radial_eval(K, grid).rho.values


# ---------------------------------------------------------------------------
# bare kernels

def volume_value(K: bd.StarBody, grid: SphericalGrid) -> float:
    n = grid.dimension
    rho = _rho(K, grid)
    with np.errstate(over="ignore"):
        powed = rho**n
    if np.any(~np.isfinite(powed)):
        idx = int(np.argmin(np.isfinite(powed)))
        raise NumericalDomainError(f"rho^n overflow at node {idx}", node_index=idx)
    return float(np.dot(grid.weights, powed)) / n


def dual_mixed_value(phi: OrliczFunction, K: bd.StarBody, L: bd.StarBody,
                     grid: SphericalGrid) -> float:
    n = grid.dimension
    rho_k, rho_l = _rho(K, grid), _rho(L, grid)
    ratios = _check_ratios(rho_l / rho_k)
    phi_vals = _check_phi_values(phi(ratios), phi.label)
    return float(np.dot(grid.weights, phi_vals * rho_k**n)) / n


def dual_mean_radius_value(phi: OrliczFunction, K: bd.StarBody, grid: SphericalGrid) -> float:
    n = grid.dimension
    rho = _rho(K, grid)
    phi_vals = _check_phi_values(phi(_check_ratios(rho)), phi.label)
    return float(np.dot(grid.weights, phi_vals)) / (n * unit_ball_volume(n))


def multi_dual_mixed_value(phis, Ks, Ls, grid: SphericalGrid) -> float:
    n = grid.dimension
    if not (len(phis) == len(Ks) == len(Ls) == n):
        raise UnsupportedRepresentationError(
            f"multi dual mixed volume needs n={n} functions and bodies per slot"
        )
    log_prod = np.zeros(len(grid))
    for phi, K, L in zip(phis, Ks, Ls):
        rho_k, rho_l = _rho(K, grid), _rho(L, grid)
        factor = _check_phi_values(phi(_check_ratios(rho_l / rho_k)), phi.label) * rho_k**n
        if np.any(factor <= 0) or np.any(~np.isfinite(factor)):
            idx = int(np.argmax((factor <= 0) | ~np.isfinite(factor)))
            raise NumericalDomainError(
                f"non-positive factor under the n-th root at node {idx}", node_index=idx
            )
        log_prod += np.log(factor)
    return float(np.dot(grid.weights, np.exp(log_prod / n))) / n


def ith_dual_mixed_value(phi1: OrliczFunction, phi2: OrliczFunction, i: float,
                         K: bd.StarBody, L: bd.StarBody, Q1: bd.StarBody, Q2: bd.StarBody,
                         grid: SphericalGrid) -> float:
    n = grid.dimension
    rho_k, rho_l = _rho(K, grid), _rho(L, grid)
    rho_q1, rho_q2 = _rho(Q1, grid), _rho(Q2, grid)
    f1 = _check_phi_values(phi1(_check_ratios(rho_q1 / rho_k)), phi1.label) * rho_k**n
    f2 = _check_phi_values(phi2(_check_ratios(rho_q2 / rho_l)), phi2.label) * rho_l**n
    if np.any(f1 <= 0) or np.any(f2 <= 0):
        idx = int(np.argmax((f1 <= 0) | (f2 <= 0)))
        raise NumericalDomainError(f"non-positive factor at node {idx}", node_index=idx)
    integrand = np.exp(((n - i) / n) * np.log(f1) + (i / n) * np.log(f2))
    return float(np.dot(grid.weights, integrand)) / n


def primal_mixed_value(phi: OrliczFunction, K: bd.StarBody, Q: bd.StarBody,
                       grid: SphericalGrid) -> float:
    n = grid.dimension
    if K.kind == "polytope":
        A = K.params["normals"]
        b = K.params["offsets"]
        areas = bd.polytope_facet_areas(K)
        h_q = bd.support_values(Q, grid, A)
        phi_vals = _check_phi_values(phi(_check_ratios(h_q / b)), phi.label)
        return float(np.sum(phi_vals * b * areas)) / n
    if K.kind == "ball":
        r = K.params["radius"]
        h_q = bd.support_values(Q, grid, grid.nodes)
        phi_vals = _check_phi_values(phi(_check_ratios(h_q / r)), phi.label)
        return float(np.dot(grid.weights, phi_vals)) * r**n / n
    raise UnsupportedRepresentationError(
        "primal mixed volume requires K to be a facet polytope or a ball"
    )


# ---------------------------------------------------------------------------
# public operations (value + half-resolution error estimate + digest)

def _with_error(fn, grid: SphericalGrid, digest: str) -> FunctionalValue:
    value = fn(grid)
    coarse = fn(grid.coarsen())
    return FunctionalValue(value=value, quadrature_error=abs(value - coarse), digest=digest)


def volume(K: bd.StarBody, grid: SphericalGrid) -> FunctionalValue:
    """|K| = (1/n) ∫ rho_K^n dσ."""
    return _with_error(lambda g: volume_value(K, g), grid,
                       _digest("volume", K.describe(), grid.describe()))


def vrad(K: bd.StarBody, grid: SphericalGrid) -> float:
    """Volume radius (|K| / omega_n)^(1/n)."""
    n = grid.dimension
    return (volume_value(K, grid) / unit_ball_volume(n)) ** (1.0 / n)


def dual_mixed_volume(phi: OrliczFunction, K: bd.StarBody, L: bd.StarBody,
                      grid: SphericalGrid) -> FunctionalValue:
    """Dual Orlicz mixed volume (1/n) ∫ phi(rho_L/rho_K) rho_K^n dσ."""
    return _with_error(lambda g: dual_mixed_value(phi, K, L, g), grid,
                       _digest("dual-mixed", phi.label, K.describe(), L.describe(), grid.describe()))


def dual_surface_area(phi: OrliczFunction, K: bd.StarBody, grid: SphericalGrid) -> FunctionalValue:
    """n times the dual mixed volume against the unit ball."""
    B = bd.ball(K.dimension)
    n = grid.dimension
    return _with_error(lambda g: n * dual_mixed_value(phi, K, B, g), grid,
                       _digest("dual-surface", phi.label, K.describe(), grid.describe()))


def dual_mean_radius(phi: OrliczFunction, K: bd.StarBody, grid: SphericalGrid) -> FunctionalValue:
    """(1/(n omega_n)) ∫ phi(rho_K) dσ."""
    return _with_error(lambda g: dual_mean_radius_value(phi, K, g), grid,
                       _digest("dual-mean-radius", phi.label, K.describe(), grid.describe()))


def primal_mixed_volume(phi: OrliczFunction, K: bd.StarBody, Q: bd.StarBody,
                        grid: SphericalGrid) -> FunctionalValue:
    """Orlicz mixed volume (1/n) ∫ phi(h_Q/h_K) h_K dS(K, ·).

    K must be a facet polytope (exact facet sums) or a ball
    (dS = r^{n-1} dσ); Q needs a support evaluator.
    """
    digest = _digest("primal-mixed", phi.label, K.describe(), Q.describe(), grid.describe())
    if K.kind == "polytope":
        value = primal_mixed_value(phi, K, Q, grid)
        coarse = primal_mixed_value(phi, K, Q, grid.coarsen()) if not Q.has_analytic_support else value
        return FunctionalValue(value=value, quadrature_error=abs(value - coarse), digest=digest)
    return _with_error(lambda g: primal_mixed_value(phi, K, Q, g), grid, digest)


def primal_surface_area(phi: OrliczFunction, K: bd.StarBody, grid: SphericalGrid) -> FunctionalValue:
    """n V_phi(K, B)."""
    B = bd.ball(K.dimension)
    fv = primal_mixed_volume(phi, K, B, grid)
    n = grid.dimension
    return FunctionalValue(n * fv.value, n * fv.quadrature_error,
                           _digest("primal-surface", phi.label, K.describe(), grid.describe()))


def primal_mean_width(phi: OrliczFunction, Q: bd.StarBody, grid: SphericalGrid) -> FunctionalValue:
    """V_phi(B, Q) / omega_n = (1/(n omega_n)) ∫ phi(h_Q) dσ."""
    B = bd.ball(Q.dimension)
    fv = primal_mixed_volume(phi, B, Q, grid)
    w = unit_ball_volume(grid.dimension)
    return FunctionalValue(fv.value / w, fv.quadrature_error / w,
                           _digest("primal-mean-width", phi.label, Q.describe(), grid.describe()))


def multi_dual_mixed_volume(phis, Ks, Ls, grid: SphericalGrid) -> FunctionalValue:
    """(1/n) ∫ prod_k [phi_k(rho_{L_k}/rho_{K_k}) rho_{K_k}^n]^{1/n} dσ."""
    digest = _digest("multi-dual", [p.label for p in phis],
                     [K.describe() for K in Ks], [L.describe() for L in Ls], grid.describe())
    return _with_error(lambda g: multi_dual_mixed_value(phis, Ks, Ls, g), grid, digest)


def ith_dual_mixed_volume(phi1, phi2, i: float, K, L, Q1, Q2, grid: SphericalGrid) -> FunctionalValue:
    """(1/n) ∫ [phi1(rho_{Q1}/rho_K) rho_K^n]^{(n-i)/n} [phi2(rho_{Q2}/rho_L) rho_L^n]^{i/n} dσ."""
    digest = _digest("ith-dual", phi1.label, phi2.label, i, K.describe(), L.describe(),
                     Q1.describe(), Q2.describe(), grid.describe())
    return _with_error(lambda g: ith_dual_mixed_value(phi1, phi2, i, K, L, Q1, Q2, g), grid, digest)
