"""Executable checks for the inequality corpus, with pass/fail/monitor reports.

Each registered check turns a theorem about the functionals into a
predicate over seeded random inputs.  Estimate-level inequalities are
evaluated over *shared candidate pools*: every functional appearing in one
predicate sees exactly the same prepared candidates, so inequalities whose
proofs reduce to Hoelder / Jensen steps on the defining integrals hold on
the discrete grid up to floating-point rounding, independent of quadrature
accuracy.  The pools always contain the unit ball and the (symmetrized)
input body, so bound-by-seeding arguments hold by construction.

Estimates over the symmetric candidate class bias infima upward and
suprema downward; every registered predicate is arranged so this bias
cannot produce a spurious failure (checks that would be one-sided-unsound
run in monitor mode instead).
"""

from __future__ import annotations

import hashlib
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import bodies as bd
from .errors import DualOrliczError
from .extremal import (CandidateEvaluator, estimate_ellipsoid_restricted,
                       ExtremalProblem, sense_for)
from .functionals import (dual_mean_radius_value, dual_mixed_value,
                          primal_mixed_value, volume_value)
from .orlicz import OrliczFunction, compose, from_expression, power
from .sphgrid import SphericalGrid, build_grid, unit_ball_volume

DEFAULT_TRIALS = 100
TOL_QUADRATURE = 1e-3
TOL_DISCRETE = 1e-9
TOL_EXACT = 1e-12
TOL_OPTIMIZER = 3e-2
TOL_AFFINE = 5e-2


# ---------------------------------------------------------------------------
# report plumbing

@dataclass
class Row:
    label: str
    lhs: float
    rhs: float
    margin: float


@dataclass
class TrialResult:
    rows: list = field(default_factory=list)
    monitors: list = field(default_factory=list)   # (quantity, value)
    inputs: list = field(default_factory=list)

    def geq(self, label, lhs, rhs):
        """Assert lhs >= rhs; margin is the normalized slack."""
        scale = max(abs(lhs), abs(rhs), 1e-300)
        self.rows.append(Row(label, lhs, rhs, (lhs - rhs) / scale))

    def leq(self, label, lhs, rhs):
        scale = max(abs(lhs), abs(rhs), 1e-300)
        self.rows.append(Row(label, lhs, rhs, (rhs - lhs) / scale))

    def equal(self, label, lhs, rhs):
        scale = max(abs(rhs), 1e-300)
        self.rows.append(Row(label, lhs, rhs, -abs(lhs - rhs) / scale))

    def monitor(self, quantity, value):
        self.monitors.append((quantity, float(value)))


@dataclass
class Check:
    id: str
    statement: str
    inputs: str             # declarative summary of the trial generator
    mode: str               # "exact" or "monitor"
    tolerance: float
    runner: object
    soundness: str = ""     # why the symmetric-candidate bias cannot fail this check
    index: int = 0


@dataclass
class CheckReport:
    check_id: str
    trials: int
    failures: list
    min_margin: float
    verdict: str            # pass | fail | recorded
    rows: list = field(default_factory=list)        # binding row per trial
    monitor_rows: list = field(default_factory=list)
    errors: list = field(default_factory=list)


class TrialContext:
    """Deterministic per-trial state handed to check runners."""

    def __init__(self, rng: np.random.Generator, grid: SphericalGrid, trial: int,
                 tolerance: float, search_budget: int):
        self.rng = rng
        self.grid = grid
        self.n = grid.dimension
        self.trial = trial
        self.tolerance = tolerance
        self.search_budget = search_budget
        self.result = TrialResult()

    # -- input generators ---------------------------------------------------
    def seed(self) -> int:
        return int(self.rng.integers(0, 2**31 - 1))

    def sym_star(self, roughness=0.35) -> bd.StarBody:
        body = bd.make_random_star(self.n, self.grid, seed=self.seed(),
                                   roughness=roughness, symmetric=True)
        self.result.inputs.append(body.label)
        return body

    def convex_sym(self, roughness=0.35) -> bd.StarBody:
        body = bd.convex_hull(self.sym_star(roughness), self.grid)
        body.symmetry = True
        return body

    def random_ellipsoid(self, ratio_max=4.0, scaled=True) -> bd.StarBody:
        n = self.n
        logs = self.rng.uniform(-0.5 * math.log(ratio_max), 0.5 * math.log(ratio_max), n)
        logs -= logs.mean()
        M = np.diag(np.exp(logs))
        if n == 2:
            theta = self.rng.uniform(0.0, math.pi)
            M = bd.LinearMap.rotation2d(theta).matrix @ M
        if scaled:
            M = M * self.rng.uniform(0.75, 1.3)
        body = bd.ellipsoid(matrix=M)
        self.result.inputs.append(body.label)
        return body

    def random_polygon(self, m=8) -> bd.StarBody:
        if self.n != 2:
            return bd.convex_hull(self.sym_star(), self.grid)
        angles = np.sort(self.rng.uniform(0.0, math.pi, m))
        radii = self.rng.uniform(0.6, 1.4, m)
        pts = np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])
        pts = np.vstack([pts, -pts])
        from scipy.spatial import ConvexHull

        hull = ConvexHull(pts)
        A = hull.equations[:, :2]
        b = -hull.equations[:, 2]
        body = bd.polytope(A, b)
        self.result.inputs.append(body.label)
        return body

    def digest(self) -> str:
        text = "|".join(self.result.inputs) or f"trial{self.trial}"
        return hashlib.sha256(text.encode()).hexdigest()[:12]


# ---------------------------------------------------------------------------
# shared-pool estimate machinery

class BodyCtx:
    def __init__(self, grid: SphericalGrid, K: bd.StarBody):
        self.grid = grid
        self.rho = bd.radial_eval(K, grid).rho.values
        self.rho_n = self.rho ** grid.dimension
        self.volume = float(np.dot(grid.weights, self.rho_n)) / grid.dimension

    @property
    def n_volume(self) -> float:
        return self.grid.dimension * self.volume

    @property
    def vrad(self) -> float:
        n = self.grid.dimension
        return (self.volume / unit_ball_volume(n)) ** (1.0 / n)


class Pools:
    """Candidate radii prepared once per trial for both targets."""

    def __init__(self, ctx: TrialContext, K: bd.StarBody, extra_bodies=(),
                 with_ellipsoid_search=None, include_random=True):
        grid = ctx.grid
        from .extremal import _symmetric_seed, candidate_radii

        raw = [np.ones(len(grid)), _symmetric_seed(K, grid)]
        if include_random:
            star = bd.make_random_star(ctx.n, grid, seed=ctx.seed(), roughness=0.3,
                                       symmetric=True)
            raw.append(candidate_radii(star, grid))
        for body in extra_bodies:
            raw.append(candidate_radii(body, grid))
        if with_ellipsoid_search is not None:
            phi, target = with_ellipsoid_search
            prob = ExtremalProblem(target=target, phi=phi, body=K, grid=grid,
                                   budget=ctx.search_budget, restarts=1)
            res = estimate_ellipsoid_restricted(prob)
            raw.append(candidate_radii(res.candidate, grid))
        self.raw = raw
        aff = CandidateEvaluator(grid, "affine")
        geo = CandidateEvaluator(grid, "geominimal")
        self.affine = [aff.prepare(r) for r in raw]
        self.geominimal = [geo.prepare(r) for r in raw]
        self.grid = grid


def dual_obj(bctx: BodyCtx, phi: OrliczFunction, prep) -> float:
    """n V~_phi(K, scale * candidate) for one prepared candidate."""
    rho_c, lam = prep
    vals = phi(lam * rho_c / bctx.rho)
    return float(np.dot(bctx.grid.weights, vals * bctx.rho_n))


def pool_extrema(bctx: BodyCtx, phi: OrliczFunction, pools: Pools,
                 sense: str) -> tuple[float, float]:
    """(affine, geominimal) extrema over the shared pool.

    Affine candidates include the convexified ones, so the ordering
    affine <= geominimal (inf) or >= (sup) holds by construction.
    """
    geo_vals = [dual_obj(bctx, phi, p) for p in pools.geominimal]
    aff_vals = [dual_obj(bctx, phi, p) for p in pools.affine] + geo_vals
    if sense == "inf":
        return min(aff_vals), min(geo_vals)
    return max(aff_vals), max(geo_vals)


def seed_value(bctx: BodyCtx, phi: OrliczFunction, pools: Pools, target: str,
               index: int) -> float:
    prep = (pools.affine if target == "affine" else pools.geominimal)[index]
    return dual_obj(bctx, phi, prep)


def ith_obj(bK: BodyCtx, bL: BodyCtx, phi1, phi2, i: float, prep1, prep2) -> float:
    n = bK.grid.dimension
    f1 = phi1(prep1[1] * prep1[0] / bK.rho) * bK.rho_n
    f2 = phi2(prep2[1] * prep2[0] / bL.rho) * bL.rho_n
    integrand = np.exp(((n - i) / n) * np.log(f1) + (i / n) * np.log(f2))
    return float(np.dot(bK.grid.weights, integrand))


def ith_extrema(bK, bL, phi1, phi2, i, poolsK: Pools, poolsL: Pools,
                sense: str) -> tuple[float, float]:
    geo_vals = [ith_obj(bK, bL, phi1, phi2, i, p1, p2)
                for p1, p2 in itertools.product(poolsK.geominimal, poolsL.geominimal)]
    aff_vals = [ith_obj(bK, bL, phi1, phi2, i, p1, p2)
                for p1, p2 in itertools.product(poolsK.affine, poolsL.affine)] + geo_vals
    if sense == "inf":
        return min(aff_vals), min(geo_vals)
    return max(aff_vals), max(geo_vals)


def vec_obj(bctxs, phis, preps) -> float:
    grid = bctxs[0].grid
    n = grid.dimension
    log_prod = np.zeros(len(grid))
    for bctx, phi, prep in zip(bctxs, phis, preps):
        log_prod += np.log(phi(prep[1] * prep[0] / bctx.rho) * bctx.rho_n)
    return float(np.dot(grid.weights, np.exp(log_prod / n)))


def vec_extrema(bctxs, phis, pools_list, sense: str) -> tuple[float, float]:
    geo_vals = [vec_obj(bctxs, phis, combo)
                for combo in itertools.product(*[p.geominimal for p in pools_list])]
    aff_vals = [vec_obj(bctxs, phis, combo)
                for combo in itertools.product(*[p.affine for p in pools_list])] + geo_vals
    if sense == "inf":
        return min(aff_vals), min(geo_vals)
    return max(aff_vals), max(geo_vals)


def slot_extrema(bctx, phi, pools: Pools, sense: str) -> tuple[float, float]:
    return pool_extrema(bctx, phi, pools, sense)


# ---------------------------------------------------------------------------
# closed forms

def ball_closed_form(phi: OrliczFunction, radius: float, n: int) -> float:
    """Affine/geominimal value of a centered ball: phi(1/r) * n * |rB|."""
    return float(phi(1.0 / radius)) * n * unit_ball_volume(n) * radius**n


def _phi_pairs_for(n: int):
    """Representative functions per class, valid for any dimension n >= 2."""
    return {
        "convex_decreasing": power(-1.0, n),
        "convex_increasing": power(n + 1.0, n),
        "concave": power(n / 2.0, n),
        "concave_alt": from_expression("log(1 + t)"),
    }


# ---------------------------------------------------------------------------
# check runners

def _run_orlicz_minkowski(ctx: TrialContext):
    res = ctx.result
    K = ctx.random_polygon() if ctx.trial % 3 else bd.ball(ctx.n, 1.0 + 0.5 * ctx.rng.random())
    L = ctx.random_polygon() if ctx.trial % 2 else ctx.random_ellipsoid()
    vol_k = bd.exact_volume(K)
    vol_l = bd.exact_volume(L) if bd.exact_volume(L) is not None else volume_value(L, ctx.grid)
    for phi in (power(1.0), power(2.0), from_expression("t + t^3")):
        lhs = primal_mixed_value(phi, K, L, ctx.grid)
        rhs = vol_k * float(phi((vol_l / vol_k) ** (1.0 / ctx.n)))
        res.geq(f"minkowski[{phi.label}]", lhs, rhs)
    lam = 1.7
    L_dilate = bd.transform(bd.LinearMap.scaling(ctx.n, lam), K)
    phi = power(2.0)
    res.equal("dilate-equality", primal_mixed_value(phi, K, L_dilate, ctx.grid),
              vol_k * float(phi(lam)))


def _run_orlicz_isoperimetric(ctx: TrialContext):
    res = ctx.result
    K = ctx.random_polygon()
    vol_k = bd.exact_volume(K)
    vr = (vol_k / unit_ball_volume(ctx.n)) ** (1.0 / ctx.n)
    for phi in (power(1.0), power(2.0)):
        s_k = ctx.n * primal_mixed_value(phi, K, bd.ball(ctx.n), ctx.grid)
        s_ball = float(phi(1.0 / vr)) * ctx.n * vol_k
        res.geq(f"isoperimetric[{phi.label}]", s_k, s_ball)
    r = 0.5 + ctx.rng.random()
    ball_body = bd.ball(ctx.n, r)
    phi = power(2.0)
    res.equal("ball-equality",
              ctx.n * primal_mixed_value(phi, ball_body, bd.ball(ctx.n), ctx.grid),
              ball_closed_form(phi, r, ctx.n))


def _run_orlicz_urysohn(ctx: TrialContext):
    res = ctx.result
    Q = ctx.random_polygon() if ctx.trial % 2 else ctx.random_ellipsoid()
    vol_q = bd.exact_volume(Q)
    vr = (vol_q / unit_ball_volume(ctx.n)) ** (1.0 / ctx.n)
    B = bd.ball(ctx.n)
    for phi in (power(1.0), power(2.0)):
        mean_width = primal_mixed_value(phi, B, Q, ctx.grid) / unit_ball_volume(ctx.n)
        res.geq(f"urysohn[{phi.label}]", mean_width, float(phi(vr)))


def _run_dual_minkowski(ctx: TrialContext):
    res = ctx.result
    pairs = _phi_pairs_for(ctx.n)
    K = ctx.sym_star()
    L = ctx.sym_star()
    vol_k, vol_l = volume_value(K, ctx.grid), volume_value(L, ctx.grid)
    ratio = (vol_l / vol_k) ** (1.0 / ctx.n)
    for name in ("concave", "concave_alt"):
        phi = pairs[name]
        res.leq(f"concave-F[{phi.label}]", dual_mixed_value(phi, K, L, ctx.grid),
                vol_k * float(phi(ratio)))
    for name in ("convex_decreasing", "convex_increasing"):
        phi = pairs[name]
        res.geq(f"convex-F[{phi.label}]", dual_mixed_value(phi, K, L, ctx.grid),
                vol_k * float(phi(ratio)))
    lam = 0.5 if ctx.trial % 2 else 2.0
    L2 = bd.transform(bd.LinearMap.scaling(ctx.n, lam), K)
    phi = pairs["convex_decreasing"]
    res.equal("dilate-equality", dual_mixed_value(phi, K, L2, ctx.grid),
              float(phi(lam)) * vol_k)


def _run_dual_isoperimetric(ctx: TrialContext):
    res = ctx.result
    pairs = _phi_pairs_for(ctx.n)
    K = ctx.sym_star()
    bctx = BodyCtx(ctx.grid, K)
    for name, cmp_fn in (("concave", res.leq), ("concave_alt", res.leq),
                         ("convex_decreasing", res.geq), ("convex_increasing", res.geq)):
        phi = pairs[name]
        s_k = ctx.n * dual_mixed_value(phi, K, bd.ball(ctx.n), ctx.grid)
        s_ball = float(phi(1.0 / bctx.vrad)) * bctx.n_volume
        cmp_fn(f"dual-isoperimetric[{phi.label}]", s_k, s_ball)


def _run_dual_urysohn(ctx: TrialContext):
    res = ctx.result
    pairs = _phi_pairs_for(ctx.n)
    K = ctx.sym_star()
    bctx = BodyCtx(ctx.grid, K)
    for name, cmp_fn in (("concave", res.leq), ("convex_decreasing", res.geq),
                         ("convex_increasing", res.geq)):
        phi = pairs[name]
        omega_k = dual_mean_radius_value(phi, K, ctx.grid)
        cmp_fn(f"dual-urysohn[{phi.label}]", omega_k, float(phi(bctx.vrad)))


def _run_sp_power_isoperimetric(ctx: TrialContext):
    res = ctx.result
    n = ctx.n
    K = ctx.sym_star()
    bctx = BodyCtx(ctx.grid, K)
    vol_ratio = bctx.volume / unit_ball_volume(n)
    n_omega = n * unit_ball_volume(n)
    for p in (-1.0, float(n), n + 1.0):
        s_p = n * dual_mixed_value(power(p), K, bd.ball(n), ctx.grid)
        res.geq(f"p={p:g}", s_p / n_omega, vol_ratio ** ((n - p) / n))
    for p in (0.25 * n, 0.5 * n):
        s_p = n * dual_mixed_value(power(p), K, bd.ball(n), ctx.grid)
        res.leq(f"p={p:g}", s_p / n_omega, vol_ratio ** ((n - p) / n))


def _run_ordering_chain(ctx: TrialContext):
    res = ctx.result
    K = ctx.sym_star()
    bctx = BodyCtx(ctx.grid, K)
    pools = Pools(ctx, K)
    for phi in (power(-1.0, ctx.n), power(ctx.n + 1.0, ctx.n)):
        om, gm = pool_extrema(bctx, phi, pools, "inf")
        s_phi = seed_value(bctx, phi, pools, "affine", 0)
        res.leq(f"affine<=geominimal[{phi.label}]", om, gm)
        res.leq(f"geominimal<=dual-surface[{phi.label}]", gm, s_phi)
    phi = power(ctx.n / 2.0, ctx.n)
    om, gm = pool_extrema(bctx, phi, pools, "sup")
    s_phi = seed_value(bctx, phi, pools, "affine", 0)
    res.geq(f"affine>=geominimal[{phi.label}]", om, gm)
    res.geq(f"geominimal>=dual-surface[{phi.label}]", gm, s_phi)


def _run_monotone_in_phi(ctx: TrialContext):
    res = ctx.result
    K = ctx.sym_star()
    bctx = BodyCtx(ctx.grid, K)
    pools = Pools(ctx, K)
    cases = [
        ("inf", power(-1.0, ctx.n), from_expression("t^-1 + 0.5")),
        ("inf", power(-1.0, ctx.n), from_expression("2 * t^-1")),
        ("sup", power(ctx.n / 2.0, ctx.n), from_expression(f"t^{ctx.n / 2.0:g} + 1")),
    ]
    for sense, lo, hi in cases:
        om_lo, gm_lo = pool_extrema(bctx, lo, pools, sense)
        om_hi, gm_hi = pool_extrema(bctx, hi, pools, sense)
        res.leq(f"affine[{lo.label}<={hi.label}]", om_lo, om_hi)
        res.leq(f"geominimal[{lo.label}<={hi.label}]", gm_lo, gm_hi)


def _sl_maps(ctx: TrialContext):
    n = ctx.n
    if n == 2:
        return [
            bd.LinearMap(np.array([[1.0, 1.0], [0.0, 1.0]])),
            bd.LinearMap(np.diag([2.0, 0.5])),
            bd.LinearMap(bd.LinearMap.rotation2d(math.pi / 6).matrix @ np.diag([1.5, 1 / 1.5])),
        ]
    diag = np.ones(n)
    diag[0], diag[1] = 1.5, 1.0 / 1.5
    M = np.eye(n)
    M[0, 1] = 0.5
    return [bd.LinearMap(np.diag(diag)), bd.LinearMap(M)]


def _run_affine_invariance(ctx: TrialContext):
    res = ctx.result
    K = ctx.sym_star(roughness=0.3)
    phi = power(-1.0, ctx.n) if ctx.trial % 2 else power(ctx.n / 2.0, ctx.n)
    sense = sense_for(phi, ctx.n)
    T = _sl_maps(ctx)[ctx.trial % len(_sl_maps(ctx))]
    TK = bd.transform(T, K)
    # matched candidate sets: the TK pool is the T-image of the K pool plus
    # each side's own ellipsoid-restricted optimum (the family is SL-closed)
    star = bd.make_random_star(ctx.n, ctx.grid, seed=ctx.seed(), roughness=0.3, symmetric=True)
    pools_k = Pools(ctx, K, extra_bodies=[star], include_random=False,
                    with_ellipsoid_search=(phi, "affine"))
    prob = ExtremalProblem(target="affine", phi=phi, body=TK, grid=ctx.grid,
                           budget=ctx.search_budget, restarts=1)
    ell_tk = estimate_ellipsoid_restricted(prob)
    pools_tk = Pools(ctx, TK, extra_bodies=[bd.transform(T, star), ell_tk.candidate],
                     include_random=False)
    om_k, gm_k = pool_extrema(BodyCtx(ctx.grid, K), phi, pools_k, sense)
    om_tk, gm_tk = pool_extrema(BodyCtx(ctx.grid, TK), phi, pools_tk, sense)
    res.equal(f"affine-invariant[{phi.label}]", om_tk, om_k)
    res.equal(f"geominimal-invariant[{phi.label}]", gm_tk, gm_k)


def _run_ellipsoid_closed_form(ctx: TrialContext):
    res = ctx.result
    E = ctx.random_ellipsoid(ratio_max=4.0)
    bctx = BodyCtx(ctx.grid, E)
    for phi in (power(-1.0, ctx.n), power(ctx.n / 2.0, ctx.n)):
        sense = sense_for(phi, ctx.n)
        pools = Pools(ctx, E, with_ellipsoid_search=(phi, "affine"))
        om, gm = pool_extrema(bctx, phi, pools, sense)
        closed = float(phi(1.0 / bctx.vrad)) * bctx.n_volume
        res.equal(f"affine[{phi.label}]", om, closed)
        res.equal(f"geominimal[{phi.label}]", gm, closed)


def _run_volume_bounds(ctx: TrialContext):
    res = ctx.result
    K_star = ctx.sym_star()
    K_conv = ctx.convex_sym()
    for K, tag in ((K_star, "star"), (K_conv, "convex")):
        bctx = BodyCtx(ctx.grid, K)
        pools = Pools(ctx, K)
        polar_vrad = BodyCtx(ctx.grid, bd.polar(K, ctx.grid)).vrad
        for phi in (power(-1.0, ctx.n), power(ctx.n + 1.0, ctx.n)):
            om, gm = pool_extrema(bctx, phi, pools, "inf")
            bound = float(phi(polar_vrad)) * bctx.n_volume
            res.leq(f"{tag}-upper[{phi.label}]", om, bound)
            if tag == "convex":
                res.leq(f"{tag}-upper-geo[{phi.label}]", gm, bound)
        phi = power(-1.0, ctx.n)   # decreasing branch: lower volume bound
        om, gm = pool_extrema(bctx, phi, pools, "inf")
        lower = float(phi(1.0 / bctx.vrad)) * bctx.n_volume
        res.geq(f"{tag}-lower[{phi.label}]", om, lower)
        res.geq(f"{tag}-lower-geo[{phi.label}]", gm, lower)
        phi = power(ctx.n / 2.0, ctx.n)  # reversed inequalities
        om, gm = pool_extrema(bctx, phi, pools, "sup")
        res.geq(f"{tag}-rev-lower[{phi.label}]", om, float(phi(polar_vrad)) * bctx.n_volume)
        res.leq(f"{tag}-rev-upper[{phi.label}]", om, float(phi(1.0 / bctx.vrad)) * bctx.n_volume)
        res.leq(f"{tag}-rev-upper-geo[{phi.label}]", gm,
                float(phi(1.0 / bctx.vrad)) * bctx.n_volume)


def _run_affine_isoperimetric_i(ctx: TrialContext):
    res = ctx.result
    K = ctx.sym_star()
    bctx = BodyCtx(ctx.grid, K)
    pools = Pools(ctx, K)
    phi = power(-1.0, ctx.n)
    om, gm = pool_extrema(bctx, phi, pools, "inf")
    ball_val = float(phi(1.0 / bctx.vrad)) * bctx.n_volume
    res.geq("geominimal>=affine", gm, om)
    res.geq("affine>=ball", om, ball_val)
    phi = power(ctx.n / 2.0, ctx.n)
    om, gm = pool_extrema(bctx, phi, pools, "sup")
    ball_val = float(phi(1.0 / bctx.vrad)) * bctx.n_volume
    res.leq("rev-geominimal<=affine", gm, om)
    res.leq("rev-affine<=ball", om, ball_val)


def _run_affine_isoperimetric_ii(ctx: TrialContext):
    res = ctx.result
    use_ellipsoid = ctx.trial % 4 == 0
    K = ctx.random_ellipsoid() if use_ellipsoid else ctx.sym_star()
    bctx = BodyCtx(ctx.grid, K)
    phi = power(-1.0, ctx.n)
    pools = Pools(ctx, K, with_ellipsoid_search=(phi, "affine") if use_ellipsoid else None)
    om, gm = pool_extrema(bctx, phi, pools, "inf")
    polar_vrad = BodyCtx(ctx.grid, bd.polar(K, ctx.grid)).vrad
    rhs = ball_closed_form(phi, 1.0 / polar_vrad, ctx.n)
    res.leq("affine<=polar-ball", om, rhs)
    K_conv = bd.convex_hull(K, ctx.grid)
    if K_conv is not K:
        bctx_c = BodyCtx(ctx.grid, K_conv)
        pools_c = Pools(ctx, K_conv)
        om_c, gm_c = pool_extrema(bctx_c, phi, pools_c, "inf")
        polar_vrad_c = BodyCtx(ctx.grid, bd.polar(K_conv, ctx.grid)).vrad
        res.leq("geominimal<=polar-ball", gm_c,
                ball_closed_form(phi, 1.0 / polar_vrad_c, ctx.n))
    if use_ellipsoid:
        res.equal("ellipsoid-equality", om, rhs)


def _run_santalo_products(ctx: TrialContext):
    res = ctx.result
    n = ctx.n
    kind = ctx.trial % 3
    K = (ctx.random_ellipsoid() if kind == 0 else
         ctx.random_polygon() if kind == 1 else ctx.convex_sym())
    K_polar = bd.polar(K, ctx.grid)
    bk, bp = BodyCtx(ctx.grid, K), BodyCtx(ctx.grid, K_polar)
    pools_k, pools_p = Pools(ctx, K), Pools(ctx, K_polar)
    n_omega = n * unit_ball_volume(n)
    res.monitor("mahler-product", bk.vrad * bp.vrad)

    for p, regime in ((-1.0, "i"), (-(n + 1.0), "ii"), (0.5 * n, "iii"), (n + 1.0, "iv")):
        phi = power(p, n)
        sense = sense_for(phi, n)
        om_k, gm_k = pool_extrema(bk, phi, pools_k, sense)
        om_p, gm_p = pool_extrema(bp, phi, pools_p, sense)
        if sense == "inf":
            res.leq(f"({regime})-affine<=geominimal", om_k * om_p, gm_k * gm_p)
        else:
            res.geq(f"({regime})-affine>=geominimal", om_k * om_p, gm_k * gm_p)
        if regime in ("i", "iv"):
            res.leq(f"({regime})-geominimal<=ball", gm_k * gm_p, n_omega**2)
            res.leq(f"({regime})-affine<=ball", om_k * om_p, n_omega**2)
        if regime == "iii":
            res.leq(f"({regime})-affine<=ball", om_k * om_p, n_omega**2)
        if regime == "i" and kind == 0:
            res.equal("(i)-ellipsoid-equality", gm_k * gm_p, n_omega**2)
        # constant-c sides: record margins only
        res.monitor(f"({regime})-c-side-product", (om_k * om_p) / n_omega**2)


def _cyclic_h_cases(n: int):
    pairs = _phi_pairs_for(n)
    return [
        # (case, phi, psi, expected monotonicity, expected shape, direction, all_bodies)
        ("a", power(n + 1.0, n), power(n / 2.0, n), "increasing", None, "leq", False),
        ("b", power(-1.0, n), power(n + 1.0, n), "decreasing", None, "leq", False),
        ("c", power(n / 2.0, n), power(2.0 * (n + 1.0), n), "increasing", None, "geq", False),
        ("d", power(-1.0, n), power(-2.0, n), "increasing", "concave", "leq", True),
        ("d", pairs["concave_alt"], power(n / 2.0, n), "increasing", "concave", "leq", True),
        ("e", from_expression("exp(1/t)"), power(n / 2.0, n), "decreasing", "convex", "geq", True),
        ("e", power(n / 2.0, n), power(-2.0, n), "decreasing", "convex", "geq", True),
        ("f", power(-2.0, n), power(-1.0, n), "increasing", "convex", "geq", True),
        ("f", power(n / 2.0, n), power(n / 4.0, n), "increasing", "convex", "geq", True),
    ]


def _run_cyclic_h(ctx: TrialContext):
    res = ctx.result
    n = ctx.n
    K = ctx.sym_star()
    bctx = BodyCtx(ctx.grid, K)
    pools = Pools(ctx, K)
    # cases (a)-(c) state the geominimal inequality for convex bodies only
    K_conv = bd.convex_hull(K, ctx.grid)
    bctx_conv = BodyCtx(ctx.grid, K_conv)
    pools_conv = Pools(ctx, K_conv)
    for case, phi, psi, mono, shape, direction, all_star in _cyclic_h_cases(n):
        H = compose(phi, psi)
        if H.monotonicity != mono or (shape is not None and H.convexity != shape):
            raise DualOrliczError(
                f"case ({case}) dispatch: H probes gave {H.monotonicity}/{H.convexity}"
            )
        om_phi, _ = pool_extrema(bctx, phi, pools, sense_for(phi, n))
        om_psi, _ = pool_extrema(bctx, psi, pools, sense_for(psi, n))
        if all_star:
            _, gm_phi = pool_extrema(bctx, phi, pools, sense_for(phi, n))
            _, gm_psi = pool_extrema(bctx, psi, pools, sense_for(psi, n))
            rows = (("affine", om_phi, om_psi, bctx.n_volume),
                    ("geominimal", gm_phi, gm_psi, bctx.n_volume))
        else:
            _, gm_phi = pool_extrema(bctx_conv, phi, pools_conv, sense_for(phi, n))
            _, gm_psi = pool_extrema(bctx_conv, psi, pools_conv, sense_for(psi, n))
            rows = (("affine", om_phi, om_psi, bctx.n_volume),
                    ("geominimal", gm_phi, gm_psi, bctx_conv.n_volume))
        for tag, lhs, rhs_arg, nk in rows:
            rhs = nk * H(rhs_arg / nk)
            if direction == "leq":
                res.leq(f"({case})-{tag}[{phi.label};{psi.label}]", lhs, rhs)
            else:
                res.geq(f"({case})-{tag}[{phi.label};{psi.label}]", lhs, rhs)


def _cyclic_triples(n: int):
    return [
        (-2.0, -1.0, 0.5 * n),        # s < r < 0 < q < n
        (0.2 * n, 0.4 * n, 0.8 * n),  # 0 < s < r < q < n
        (0.5 * n, 1.5 * n, 2.0 * n),  # 0 < s < n < r < q
    ]


def _power_extrema(bctx, pools, p, n):
    phi = power(p, n)
    return pool_extrema(bctx, phi, pools, sense_for(phi, n))


def _cyclic_rows(res, tag, vals_s, vals_r, vals_q, s, r, q):
    w_q = (r - s) / (q - s)
    w_s = (q - r) / (q - s)
    for level, (e_s, e_r, e_q) in (("affine", (vals_s[0], vals_r[0], vals_q[0])),
                                   ("geominimal", (vals_s[1], vals_r[1], vals_q[1]))):
        rhs = math.exp(w_q * math.log(e_q) + w_s * math.log(e_s))
        res.leq(f"{tag}-{level}[s={s:g},r={r:g},q={q:g}]", e_r, rhs)


def _run_cyclic_powers(ctx: TrialContext):
    res = ctx.result
    n = ctx.n
    K = ctx.sym_star()
    bctx = BodyCtx(ctx.grid, K)
    pools = Pools(ctx, K)
    for s, r, q in _cyclic_triples(n):
        vals = {p: _power_extrema(bctx, pools, p, n) for p in (s, r, q)}
        _cyclic_rows(res, "cyclic", vals[s], vals[r], vals[q], s, r, q)


def _run_mixed_alexander_fenchel(ctx: TrialContext):
    res = ctx.result
    n = ctx.n
    Ks = [ctx.sym_star() for _ in range(n)]
    bctxs = [BodyCtx(ctx.grid, K) for K in Ks]
    pools = [Pools(ctx, K) for K in Ks]
    for class_tag, phis in (("F-convex", [power(-1.0 - k, n) for k in range(n)]),
                            ("F-concave", [power(n * (k + 1.0) / (n + 1.0), n) for k in range(n)])):
        sense = sense_for(phis[0], n)
        om_vec, gm_vec = vec_extrema(bctxs, phis, pools, sense)
        om_prod, gm_prod = 1.0, 1.0
        for bctx, phi, pool in zip(bctxs, phis, pools):
            om_i, gm_i = pool_extrema(bctx, phi, pool, sense)
            om_prod *= om_i
            gm_prod *= gm_i
        res.leq(f"{class_tag}-affine-product", om_vec**n, om_prod)
        res.leq(f"{class_tag}-geominimal-product", gm_vec**n, gm_prod)
        if sense == "sup":
            # Alexander-Fenchel chain, 1 <= m <= n
            for m in range(1, n + 1):
                om_rhs, gm_rhs = 1.0, 1.0
                for i in range(m):
                    idx = [j for j in range(n - m)] + [n - 1 - i] * m
                    om_t, gm_t = vec_extrema([bctxs[j] for j in idx],
                                             [phis[j] for j in idx],
                                             [pools[j] for j in idx], sense)
                    om_rhs *= om_t
                    gm_rhs *= gm_t
                res.leq(f"AF-chain-affine[m={m}]", om_vec**m, om_rhs)
                res.leq(f"AF-chain-geominimal[m={m}]", gm_vec**m, gm_rhs)


def _run_mixed_isoperimetric(ctx: TrialContext):
    res = ctx.result
    n = ctx.n
    # F-concave branch over star bodies
    Ks = [ctx.sym_star() for _ in range(n)]
    bctxs = [BodyCtx(ctx.grid, K) for K in Ks]
    pools = [Pools(ctx, K) for K in Ks]
    phis = [power(n / 2.0, n) for _ in range(n)]
    om_vec, gm_vec = vec_extrema(bctxs, phis, pools, "sup")
    rhs = 1.0
    for phi, bctx in zip(phis, bctxs):
        rhs *= float(phi(1.0 / bctx.vrad)) * bctx.n_volume
    res.leq("concave-geominimal<=affine", gm_vec**n, om_vec**n)
    res.leq("concave-affine<=balls", om_vec**n, rhs)
    # F-convex-decreasing branch over convex bodies
    Ks = [ctx.convex_sym() for _ in range(n)]
    bctxs = [BodyCtx(ctx.grid, K) for K in Ks]
    pools = [Pools(ctx, K) for K in Ks]
    phis = [power(-1.0 - k, n) for k in range(n)]
    om_vec, gm_vec = vec_extrema(bctxs, phis, pools, "inf")
    rhs_om, rhs_gm = 1.0, 1.0
    for phi, K, bctx in zip(phis, Ks, bctxs):
        pv = BodyCtx(ctx.grid, bd.polar(K, ctx.grid)).vrad
        closed = ball_closed_form(phi, 1.0 / pv, n)
        rhs_om *= closed
        rhs_gm *= closed
    res.leq("decreasing-affine<=geominimal", om_vec**n, gm_vec**n)
    res.leq("decreasing-geominimal<=polar-balls", gm_vec**n, rhs_gm)
    res.leq("decreasing-affine<=polar-balls", om_vec**n, rhs_om)


def _run_cyclic_powers_multi(ctx: TrialContext):
    res = ctx.result
    n = ctx.n
    Ks = [ctx.sym_star() for _ in range(n)]
    bctxs = [BodyCtx(ctx.grid, K) for K in Ks]
    pools = [Pools(ctx, K) for K in Ks]
    for s, r, q in _cyclic_triples(n):
        vals = {}
        for p in (s, r, q):
            phi_vec = [power(p, n) for _ in range(n)]
            vals[p] = vec_extrema(bctxs, phi_vec, pools, sense_for(phi_vec[0], n))
        _cyclic_rows(res, "multi-cyclic", vals[s], vals[r], vals[q], s, r, q)


def _run_ith_cyclic(ctx: TrialContext):
    res = ctx.result
    n = ctx.n
    K, L = ctx.sym_star(), ctx.sym_star()
    bK, bL = BodyCtx(ctx.grid, K), BodyCtx(ctx.grid, L)
    poolsK, poolsL = Pools(ctx, K), Pools(ctx, L)
    phi1, phi2 = power(n / 2.0, n), power(n / 4.0, n)
    i, j, k = 0.25 * n, 0.5 * n, 0.85 * n
    vals = {t: ith_extrema(bK, bL, phi1, phi2, t, poolsK, poolsL, "sup")
            for t in (i, j, k)}
    for level, om_or_gm in (("affine", 0), ("geominimal", 1)):
        e_i, e_j, e_k = vals[i][om_or_gm], vals[j][om_or_gm], vals[k][om_or_gm]
        rhs = math.exp(((k - j) / (k - i)) * math.log(e_i) +
                       ((j - i) / (k - i)) * math.log(e_k))
        res.leq(f"ith-cyclic-{level}", e_j, rhs)


def _run_ith_bounds(ctx: TrialContext):
    res = ctx.result
    n = ctx.n
    # (i) decreasing pair, convex inputs
    K, L = ctx.convex_sym(), ctx.convex_sym()
    bK, bL = BodyCtx(ctx.grid, K), BodyCtx(ctx.grid, L)
    poolsK, poolsL = Pools(ctx, K), Pools(ctx, L)
    phi1, phi2 = power(-1.0, n), power(-2.0, n)
    pvK = BodyCtx(ctx.grid, bd.polar(K, ctx.grid)).vrad
    pvL = BodyCtx(ctx.grid, bd.polar(L, ctx.grid)).vrad
    closed1 = ball_closed_form(phi1, 1.0 / pvK, n)
    closed2 = ball_closed_form(phi2, 1.0 / pvL, n)
    for i in (0.0, 0.35 * n, 0.7 * n, float(n)):
        om, gm = ith_extrema(bK, bL, phi1, phi2, i, poolsK, poolsL, "inf")
        res.leq(f"(i)-affine<=geominimal[i={i:g}]", om**n, gm**n)
        res.leq(f"(i)-geominimal<=polar-balls[i={i:g}]", gm**n,
                closed1 ** (n - i) * closed2**i)
    # (ii) concave pair, star inputs
    K, L = ctx.sym_star(), ctx.sym_star()
    bK, bL = BodyCtx(ctx.grid, K), BodyCtx(ctx.grid, L)
    poolsK, poolsL = Pools(ctx, K), Pools(ctx, L)
    phi1, phi2 = power(n / 2.0, n), power(n / 4.0, n)
    ball1 = float(phi1(1.0 / bK.vrad)) * bK.n_volume
    ball2 = float(phi2(1.0 / bL.vrad)) * bL.n_volume
    for i in (0.0, 0.5 * n, float(n)):
        om, gm = ith_extrema(bK, bL, phi1, phi2, i, poolsK, poolsL, "sup")
        res.leq(f"(ii)-geominimal<=affine[i={i:g}]", gm**n, om**n)
        res.leq(f"(ii)-affine<=balls[i={i:g}]", om**n, ball1 ** (n - i) * ball2**i)
    # (iii) concave pair, i > n, second body an ellipsoid
    E = ctx.random_ellipsoid()
    bE = BodyCtx(ctx.grid, E)
    poolsE = Pools(ctx, E)
    ball1 = float(phi1(1.0 / bK.vrad)) * bK.n_volume
    closedE = float(phi2(1.0 / bE.vrad)) * bE.n_volume
    for i in (1.25 * n, 1.5 * n):
        om, gm = ith_extrema(bK, bE, phi1, phi2, i, poolsK, poolsE, "sup")
        res.geq(f"(iii)-affine>=geominimal[i={i:g}]", om**n, gm**n)
        res.geq(f"(iii)-geominimal>=balls[i={i:g}]", gm**n,
                ball1 ** (n - i) * closedE**i)


# ---------------------------------------------------------------------------
# registry

def build_registry() -> list[Check]:
    checks = [
        Check("orlicz-minkowski",
              "V_phi(K,L) >= |K| phi((|L|/|K|)^(1/n)) for increasing convex phi",
              "random symmetric polygons / balls / ellipsoids; increasing convex functions",
              "exact", TOL_QUADRATURE, _run_orlicz_minkowski,
              soundness="exact polytope sums; no estimates involved"),
        Check("orlicz-isoperimetric", "S_phi(K) >= S_phi(B_K)",
              "random symmetric polygons and balls; increasing convex powers",
              "exact", TOL_DISCRETE, _run_orlicz_isoperimetric,
              soundness="exact polytope sums; no estimates involved"),
        Check("orlicz-urysohn", "omega_phi(K) >= omega_phi(B_K)",
              "random symmetric polygons and ellipsoids; increasing convex powers",
              "exact", TOL_QUADRATURE, _run_orlicz_urysohn,
              soundness="quadrature only; no estimates involved"),
        Check("dual-orlicz-minkowski",
              "dual mixed volume vs |K| phi((|L|/|K|)^(1/n)), both F branches",
              "pairs of random symmetric stars; both F branches plus dilates",
              "exact", TOL_DISCRETE, _run_dual_minkowski,
              soundness="discrete Jensen instance, exact on any grid"),
        Check("dual-isoperimetric", "dual surface area vs the equal-volume ball",
              "random symmetric stars; both F branches",
              "exact", TOL_DISCRETE, _run_dual_isoperimetric,
              soundness="discrete Jensen instance, exact on any grid"),
        Check("dual-urysohn", "dual mean radius vs the equal-volume ball",
              "random symmetric stars; both F branches",
              "exact", TOL_DISCRETE, _run_dual_urysohn,
              soundness="discrete Jensen instance, exact on any grid"),
        Check("sp-power-isoperimetric",
              "S_p(K)/S_p(B) vs (|K|/omega_n)^((n-p)/n) by p-regime",
              "random symmetric stars; powers in all three p-regimes",
              "exact", TOL_DISCRETE, _run_sp_power_isoperimetric,
              soundness="discrete Jensen instance, exact on any grid"),
        Check("ordering-chain", "affine <= geominimal <= dual surface area (inf case)",
              "random symmetric stars; shared candidate pools",
              "exact", TOL_OPTIMIZER, _run_ordering_chain,
              soundness="affine pools contain every convexified candidate, so the chain holds by construction"),
        Check("monotone-in-phi", "phi <= psi pointwise implies ordered estimates",
              "random symmetric stars; pointwise-ordered function pairs",
              "exact", TOL_DISCRETE, _run_monotone_in_phi,
              soundness="shared candidate pools; pointwise ordering of the integrands"),
        Check("affine-invariance", "estimates agree for K and TK, det T = 1",
              "random symmetric stars; fixed volume-preserving maps; matched pools",
              "exact", TOL_AFFINE, _run_affine_invariance,
              soundness="matched pools (T-image) plus the SL-closed ellipsoid family on both sides"),
        Check("ellipsoid-closed-form",
              "estimates reproduce phi(1/vrad E) n |E| on ellipsoids",
              "random ellipsoids (axis ratio <= 4); decreasing and concave powers",
              "exact", 1e-2, _run_ellipsoid_closed_form,
              soundness="inf/sup estimates can only land between the closed form and the seed value"),
        Check("volume-bounds", "upper/lower volume bounds on the estimates",
              "random symmetric stars and their hulls; three function classes",
              "exact", TOL_QUADRATURE, _run_volume_bounds,
              soundness="upper bounds achieved by the body seed; lower bounds are true bounds of the restricted extremum"),
        Check("affine-isoperimetric-i",
              "estimates attain their extremum over fixed volume at balls",
              "random symmetric stars; decreasing and concave powers",
              "exact", TOL_QUADRATURE, _run_affine_isoperimetric_i,
              soundness="estimate bias points away from the tested bound in both classes"),
        Check("affine-isoperimetric-ii",
              "affine estimate <= value at the polar equal-volume ball",
              "random symmetric stars, every 4th trial an ellipsoid",
              "exact", TOL_QUADRATURE, _run_affine_isoperimetric_ii,
              soundness="body-seed value is below the ball bound via the Santalo step for symmetric inputs"),
        Check("santalo-products", "products over K and its polar by p-regime",
              "ellipsoids / symmetric polygons / convex hulls with their polars",
              "exact", TOL_QUADRATURE, _run_santalo_products,
              soundness="seed-value chains plus grid-level Santalo products; c-sides monitored only"),
        Check("cyclic-H", "composition inequalities, cases (a)-(f)",
              "random symmetric stars and their hulls; nine (phi, psi) instances",
              "exact", TOL_QUADRATURE, _run_cyclic_h,
              soundness="seed values share one normalization scale; Jensen cases use shared pools"),
        Check("cyclic-powers", "power cyclic inequality, three regimes",
              "random symmetric stars; triples from the three regimes",
              "exact", TOL_EXACT, _run_cyclic_powers,
              soundness="shared pools make the Hoelder split exact per regime"),
        Check("mixed-alexander-fenchel",
              "multi-body estimates vs products of single-body estimates",
              "n random symmetric stars; one tuple per class",
              "exact", TOL_EXACT, _run_mixed_alexander_fenchel,
              soundness="cross-product pools contain all projected tuples"),
        Check("mixed-isoperimetric", "multi-body estimates vs ball closed forms",
              "n random symmetric stars / hulls per branch",
              "exact", TOL_QUADRATURE, _run_mixed_isoperimetric,
              soundness="bias direction matches the bound in both branches"),
        Check("cyclic-powers-multi", "multi-body power cyclic inequality",
              "n random symmetric stars; triples from the three regimes",
              "exact", TOL_EXACT, _run_cyclic_powers_multi,
              soundness="shared tuple pools make the Hoelder split exact per regime"),
        Check("ith-cyclic", "i-th mixed cyclic inequality in (i, j, k)",
              "two random symmetric stars; concave pair; i<j<k",
              "exact", TOL_EXACT, _run_ith_cyclic,
              soundness="shared pair pools make the Hoelder split exact"),
        Check("ith-bounds", "i-th mixed estimates vs ball closed forms, parts (i)-(iii)",
              "hulled and star pairs plus an ellipsoid; i inside and above [0, n]",
              "exact", TOL_QUADRATURE, _run_ith_bounds,
              soundness="pair pools contain the seed pairs; reverse-Hoelder case pairs the ball with the slot optimum"),
    ]
    for idx, c in enumerate(checks):
        c.index = idx
    return checks


REGISTRY = build_registry()
CHECK_IDS = [c.id for c in REGISTRY]


def get_check(check_id: str) -> Check:
    for c in REGISTRY:
        if c.id == check_id:
            return c
    raise DualOrliczError(f"unknown check id {check_id!r}")


def run_check(check: Check, trials: int = DEFAULT_TRIALS, seed: int = 1,
              grid: SphericalGrid | None = None, search_budget: int = 300,
              tolerance: float | None = None) -> CheckReport:
    """Run one check on ``trials`` seeded inputs; deterministic per seed."""
    grid = grid or build_grid(2, 512, "uniform-angle")
    tol = check.tolerance if tolerance is None else tolerance
    failures, rows, monitor_rows, errors = [], [], [], []
    min_margin = math.inf
    for trial in range(trials):
        rng = np.random.default_rng(np.random.SeedSequence([seed, check.index, trial]))
        ctx = TrialContext(rng, grid, trial, tol, search_budget)
        try:
            check.runner(ctx)
        except DualOrliczError as exc:
            errors.append({"trial": trial, "error": str(exc)})
            rows.append({"check": check.id, "seed": seed, "trial": trial,
                         "lhs": math.nan, "rhs": math.nan, "margin": -math.inf,
                         "verdict": "error"})
            min_margin = -math.inf
            continue
        res = ctx.result
        digest = ctx.digest()
        for quantity, value in res.monitors:
            monitor_rows.append({"check": check.id, "seed": seed, "trial": trial,
                                 "quantity": quantity, "value": value})
        if not res.rows:
            continue
        binding = min(res.rows, key=lambda r: r.margin)
        min_margin = min(min_margin, binding.margin)
        ok = binding.margin >= -tol
        rows.append({"check": check.id, "seed": seed, "trial": trial,
                     "lhs": binding.lhs, "rhs": binding.rhs,
                     "margin": binding.margin,
                     "verdict": "pass" if ok else f"fail[{binding.label}]"})
        if not ok:
            failures.append({"digest": digest, "label": binding.label,
                             "lhs": binding.lhs, "rhs": binding.rhs,
                             "margin": binding.margin, "trial": trial,
                             "inputs": list(res.inputs)})
    if check.mode == "monitor":
        verdict = "recorded"
    else:
        verdict = "pass" if not failures and not errors else "fail"
    return CheckReport(check_id=check.id, trials=trials, failures=failures,
                       min_margin=min_margin, verdict=verdict, rows=rows,
                       monitor_rows=monitor_rows, errors=errors)


def run_suite(check_ids=None, trials: int = DEFAULT_TRIALS, seed: int = 1,
              grid: SphericalGrid | None = None,
              search_budget: int = 300) -> list[CheckReport]:
    grid = grid or build_grid(2, 512, "uniform-angle")
    selected = REGISTRY if not check_ids else [get_check(cid) for cid in check_ids]
    return [run_check(c, trials=trials, seed=seed, grid=grid,
                      search_budget=search_budget) for c in selected]
