"""Optimization-based estimators for the dual Orlicz affine and geominimal
surface areas.

Both quantities are extrema of the normalized objective
``n * V~_phi(K, vrad(L°) L)`` over candidate bodies L: an infimum when
``F(t) = phi(t^{1/n})`` is convex, a supremum when it is increasing
concave.  The affine variant ranges over star bodies, the geominimal
variant over convex bodies (candidates are convexified by a double polar
before evaluation).

Candidates are restricted to origin-symmetric bodies, which guarantees the
polar-centering constraint (the polar of a symmetric body has centroid at
the origin).  Consequently an infimum estimate is an upper bound of the
true infimum and a supremum estimate a lower bound; reports carry this
bias note.

The search is a multi-start coordinate pattern search with shrinking step
over log-radial node values (n = 2, with antipodal values tied) or over
the coefficients of an even polynomial basis (n >= 3).  A cheap search
restricted to origin-symmetric ellipsoids is used both as a warm start and
as an independent marker.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bodies as bd
from .errors import ConfigurationError, ContractError, OptimizationFailureError
from .functionals import dual_mixed_value, volume_value
from .orlicz import FunctionClass, OrliczFunction
from .sphgrid import SphericalGrid, unit_ball_volume

SYMMETRY_BIAS_NOTE = (
    "candidates restricted to origin-symmetric bodies: an inf estimate is an "
    "upper bound of the true infimum, a sup estimate a lower bound"
)

DEFAULT_BUDGET = 6000
DEFAULT_RESTARTS = 5
MIN_STEP = 5e-5
CONVERGED_STEP = 1e-4
CONVERGED_AGREEMENT = 1e-3


def sense_for(phi: OrliczFunction, n: int) -> str:
    """inf for F-convex functions, sup for F-concave-increasing ones."""
    classes = phi.classify(n)
    if phi.is_constant:
        return "inf"
    if FunctionClass.F_CONVEX in classes:
        return "inf"
    if FunctionClass.F_CONCAVE_INCREASING in classes:
        return "sup"
    raise ContractError(
        f"{phi.label} is in neither admissible function class for n={n}"
    )


@dataclass
class ExtremalProblem:
    target: str                      # "affine" | "geominimal"
    phi: OrliczFunction
    body: bd.StarBody
    grid: SphericalGrid
    sense: str | None = None         # derived from the classification when None
    budget: int = DEFAULT_BUDGET
    restarts: int = DEFAULT_RESTARTS
    seed: int = 0
    min_step: float = MIN_STEP       # pattern-step floor (also the converged gate)

    def __post_init__(self):
        if self.target not in ("affine", "geominimal"):
            raise ConfigurationError(f"unknown target {self.target!r}")
        if self.body.dimension != self.grid.dimension:
            raise ConfigurationError("body and grid dimensions differ")
        derived = sense_for(self.phi, self.grid.dimension)
        if self.sense is None:
            self.sense = derived
        elif not self.phi.is_constant and self.sense != derived:
            raise ContractError(
                f"sense {self.sense!r} contradicts the class of {self.phi.label} "
                f"(expected {derived!r})"
            )


@dataclass
class ExtremalResult:
    value: float
    candidate: object                # StarBody, or a tuple of bodies for mixed problems
    trace: list = field(default_factory=list)   # (evaluation index, objective, step)
    markers: dict = field(default_factory=dict)
    converged: bool = False
    evaluations: int = 0
    restart_values: list = field(default_factory=list)
    sense: str = "inf"
    bias_note: str = SYMMETRY_BIAS_NOTE


# ---------------------------------------------------------------------------
# candidate preparation (hull + polar-volume normalization), shared by all
# objectives so that identical candidates produce identical floats

class CandidateEvaluator:
    """Turns raw candidate radii into normalized (and convexified) radii."""

    def __init__(self, grid: SphericalGrid, target: str):
        self.grid = grid
        self.target = target
        self.n = grid.dimension
        self.omega = unit_ball_volume(self.n)
        N = len(grid)
        self._gram = grid.nodes @ grid.nodes.T if N <= 2048 else None

    def _support(self, rho: np.ndarray) -> np.ndarray:
        if self._gram is not None:
            return (self._gram * rho[None, :]).max(axis=1)
        return bd.cloud_support(self.grid.nodes, rho, self.grid.nodes)

    def prepare(self, rho: np.ndarray) -> tuple[np.ndarray, float]:
        """Return (candidate radii, scale) with ``scale * radii`` the
        normalized candidate vrad(L°) L (convexified first for geominimal)."""
        h = self._support(rho)
        rho_polar = 1.0 / h
        polar_vol = float(np.dot(self.grid.weights, rho_polar**self.n)) / self.n
        lam = (polar_vol / self.omega) ** (1.0 / self.n)
        if self.target == "geominimal":
            hull_rho = 1.0 / self._support(rho_polar)
            return hull_rho, lam
        return rho, lam


class ObjectiveFn:
    """The normalized objective for one (K, phi, target, grid) tuple."""

    def __init__(self, problem: ExtremalProblem, evaluator: CandidateEvaluator | None = None):
        self.problem = problem
        self.grid = problem.grid
        self.n = self.grid.dimension
        self.evaluator = evaluator or CandidateEvaluator(self.grid, problem.target)
        self.rho_k = bd.radial_eval(problem.body, self.grid).rho.values
        self.rho_k_n = self.rho_k**self.n
        self.phi = problem.phi

    def value_prepared(self, rho_cand: np.ndarray, lam: float) -> float:
        ratios = lam * rho_cand / self.rho_k
        vals = self.phi(ratios)
        out = float(np.dot(self.grid.weights, vals * self.rho_k_n))
        return out

    def value(self, rho: np.ndarray) -> float:
        rho_cand, lam = self.evaluator.prepare(rho)
        return self.value_prepared(rho_cand, lam)


# ---------------------------------------------------------------------------
# parameterizations

class _Parameterization:
    def to_rho(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def from_rho(self, rho_plus: np.ndarray, rho_minus: np.ndarray) -> np.ndarray:
        raise NotImplementedError


class _NodeParam(_Parameterization):
    """Log-radial values on a uniform-angle grid with antipodal nodes tied."""

    def __init__(self, grid: SphericalGrid):
        if len(grid) % 2:
            raise ConfigurationError("node parameterization needs an even node count")
        self.half = len(grid) // 2

    def to_rho(self, x):
        return np.exp(np.concatenate([x, x]))

    def from_rho(self, rho_plus, rho_minus):
        logs = 0.5 * (np.log(rho_plus) + np.log(rho_minus))
        return 0.5 * (logs[: self.half] + logs[self.half:])


class _BasisParam(_Parameterization):
    """Even polynomial basis (degrees 0, 2, 4 in the coordinates of u)."""

    def __init__(self, grid: SphericalGrid):
        u = grid.nodes
        n = grid.dimension
        cols = [np.ones(len(grid))]
        for i in range(n):
            for j in range(i, n):
                cols.append(u[:, i] * u[:, j])
        for i in range(n):
            for j in range(i, n):
                for k in range(j, n):
                    for l in range(k, n):
                        cols.append(u[:, i] * u[:, j] * u[:, k] * u[:, l])
        self.matrix = np.column_stack(cols)
        if self.matrix.shape[1] > 64:
            self.matrix = self.matrix[:, :64]

    def to_rho(self, x):
        return np.exp(self.matrix @ x)

    def from_rho(self, rho_plus, rho_minus):
        logs = 0.5 * (np.log(rho_plus) + np.log(rho_minus))
        coef, *_ = np.linalg.lstsq(self.matrix, logs, rcond=None)
        return coef


def _parameterization(grid: SphericalGrid) -> _Parameterization:
    if grid.dimension == 2 and grid.scheme == "uniform-angle":
        return _NodeParam(grid)
    return _BasisParam(grid)


def _symmetric_seed(body: bd.StarBody, grid: SphericalGrid) -> np.ndarray:
    """Radii of the geometric-mean symmetrization (equal to rho for symmetric bodies)."""
    plus = bd.radial_eval(body, grid).rho.values
    minus = body.radial(-grid.nodes)
    return np.sqrt(plus * minus)


# ---------------------------------------------------------------------------
# pattern search

class _Recorder:
    def __init__(self):
        self.trace = []
        self.count = 0

    def record(self, value: float, step: float):
        self.count += 1
        self.trace.append((self.count, value, step))


def _pattern_search(fn, x0, sense, step0, min_step, budget, recorder):
    """Greedy coordinate pattern search with shrinking step.

    Probes rotate through signed coordinate moves; the step halves after a
    quiet streak (no improvement over a capped number of consecutive
    probes), which keeps the shrink schedule affordable in high dimension.
    Moves must improve by a small relative margin (sufficient decrease), so
    the search does not chase mesh-level noise of the discretized objective
    and the step can actually shrink near an optimum.
    """
    better = (lambda a, b: a < b) if sense == "inf" else (lambda a, b: a > b)
    x = np.array(x0, dtype=float)
    fx = fn(x)
    recorder.record(fx, step0)
    evals = 1
    step = step0
    d = len(x)
    quiet_limit = min(2 * d, max(16, d // 4))
    quiet = 0
    coord, sign = 0, 1.0
    while evals < budget and step >= min_step:
        xt = x.copy()
        xt[coord] += sign * step
        ft = fn(xt)
        evals += 1
        recorder.record(ft, step)
        sufficient = 1e-7 * max(abs(fx), 1e-12)
        if math.isfinite(ft) and better(ft, fx) and abs(ft - fx) > sufficient:
            x, fx = xt, ft
            quiet = 0
        else:
            quiet += 1
            if quiet >= quiet_limit:
                step *= 0.5
                quiet = 0
        if sign > 0:
            sign = -1.0
        else:
            sign = 1.0
            coord = (coord + 1) % d
    return x, fx, step, evals


# ---------------------------------------------------------------------------
# ellipsoid-restricted search

def _traceless_symmetric(params: np.ndarray, n: int) -> np.ndarray:
    S = np.zeros((n, n))
    diag = params[: n - 1]
    S[np.arange(n - 1), np.arange(n - 1)] = diag
    S[n - 1, n - 1] = -float(np.sum(diag))
    idx = n - 1
    for i in range(n):
        for j in range(i + 1, n):
            S[i, j] = S[j, i] = params[idx]
            idx += 1
    return S


def _pack_traceless(S: np.ndarray) -> np.ndarray:
    n = S.shape[0]
    params = list(np.diag(S)[: n - 1])
    for i in range(n):
        for j in range(i + 1, n):
            params.append(S[i, j])
    return np.array(params, dtype=float)


def _expm_symmetric(S: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(S)
    return (vecs * np.exp(vals)) @ vecs.T


def _ellipsoid_rho(A: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    return 1.0 / np.linalg.norm(nodes @ np.linalg.inv(A).T, axis=1)


def _ellipsoid_warm_start(body: bd.StarBody) -> np.ndarray | None:
    if body.kind == "ball":
        return None  # identity is already a start point
    if body.kind != "ellipsoid":
        return None
    M = body.params["matrix"]
    vals, vecs = np.linalg.eigh(M @ M.T)
    half_logs = 0.5 * np.log(vals)
    half_logs -= half_logs.mean()
    return _pack_traceless((vecs * half_logs) @ vecs.T)


def estimate_ellipsoid_restricted(problem: ExtremalProblem) -> ExtremalResult:
    """Optimize only over origin-symmetric ellipsoids T B with det T = 1.

    Cheap (the parameter space has dimension n(n+1)/2 - 1), guaranteed to
    produce convex candidates, and used as a warm start and independent
    marker for the full search.  Candidates in this family satisfy the
    polar-volume constraint exactly, so no sampled normalization (with its
    mesh-level bias) is applied.
    """
    grid = problem.grid
    n = grid.dimension
    if problem.phi.is_constant:
        return _constant_result(problem)
    objective = ObjectiveFn(problem)
    recorder = _Recorder()

    def fn(params):
        A = _expm_symmetric(_traceless_symmetric(params, n))
        return objective.value_prepared(_ellipsoid_rho(A, grid.nodes), 1.0)

    d = n * (n + 1) // 2 - 1
    starts = [np.zeros(d)]
    warm = _ellipsoid_warm_start(problem.body)
    if warm is not None:
        starts.append(warm)
    budget_each = max(100, min(problem.budget, 1200) // len(starts))
    best = None
    finals = []
    for x0 in starts:
        x, fx, step, _ = _pattern_search(fn, x0, problem.sense, 0.3, 1e-7, budget_each, recorder)
        finals.append(fx)
        if best is None or _better(problem.sense, fx, best[1]):
            best = (x, fx, step)
    x_best, f_best, step_best = best
    A = _expm_symmetric(_traceless_symmetric(x_best, n))
    candidate = bd.ellipsoid(matrix=A)
    return ExtremalResult(
        value=f_best,
        candidate=candidate,
        trace=recorder.trace,
        markers={"objective_at_ball": objective.value_prepared(np.ones(len(grid)), 1.0)},
        converged=step_best < CONVERGED_STEP,
        evaluations=recorder.count,
        restart_values=finals,
        sense=problem.sense,
    )


def _better(sense, a, b):
    return a < b if sense == "inf" else a > b


def _constant_result(problem: ExtremalProblem) -> ExtremalResult:
    """Constant phi = alpha short-circuits to alpha * n |K| with no search."""
    grid = problem.grid
    n = grid.dimension
    alpha = float(problem.phi(1.0))
    value = alpha * n * volume_value(problem.body, grid)
    return ExtremalResult(
        value=value,
        candidate=bd.ball(n),
        markers={"constant_shortcut": alpha},
        converged=True,
        sense=problem.sense,
    )


# ---------------------------------------------------------------------------
# public operations

def normalize_polar_volume(L: bd.StarBody, grid: SphericalGrid) -> bd.StarBody:
    """Scale L so its polar has the volume of the unit ball: vrad(L°) L."""
    polar_body = bd.polar(L, grid)
    lam = (volume_value(polar_body, grid) / unit_ball_volume(grid.dimension)) ** (
        1.0 / grid.dimension
    )
    return bd.transform(bd.LinearMap.scaling(grid.dimension, lam), L)


def objective(problem: ExtremalProblem, L: bd.StarBody) -> float:
    """The quantity n V~_phi(K, vrad(L°)L) for one candidate.

    Geominimal candidates are convexified first; the normalization scale
    comes from the polar body on the grid (analytic polars for analytic
    kinds, the sampled point cloud otherwise).
    """
    grid = problem.grid
    candidate = L
    if problem.target == "geominimal":
        candidate = bd.convex_hull(candidate, grid)
    normalized = normalize_polar_volume(candidate, grid)
    return grid.dimension * dual_mixed_value(problem.phi, problem.body, normalized, grid)


def candidate_radii(body: bd.StarBody, grid: SphericalGrid) -> np.ndarray:
    return bd.radial_eval(body, grid).rho.values


def default_seeds(problem: ExtremalProblem) -> list[tuple[str, np.ndarray]]:
    """The standard restart seeds: ball, symmetrized K, two random symmetric bodies."""
    grid = problem.grid
    seeds = [("ball", np.ones(len(grid)))]
    seeds.append(("body", _symmetric_seed(problem.body, grid)))
    for k in range(2):
        star = bd.make_random_star(grid.dimension, grid, seed=977 + 13 * problem.seed + k,
                                   roughness=0.3, symmetric=True)
        seeds.append((f"random{k}", candidate_radii(star, grid)))
    return seeds


def estimate(problem: ExtremalProblem, extra_seeds: list | None = None) -> ExtremalResult:
    """Multi-start pattern-search estimate of the affine / geominimal value.

    Restarts: the unit ball, the (symmetrized) input body, the
    ellipsoid-restricted optimum, and two seeded random symmetric bodies;
    ``extra_seeds`` may add bodies or radii arrays (used e.g. to seed the
    affine run with a geominimal optimizer so the ordering chain holds by
    construction).
    """
    grid = problem.grid
    if problem.phi.is_constant:
        return _constant_result(problem)

    objective_fn = ObjectiveFn(problem)
    param = _parameterization(grid)
    recorder = _Recorder()

    def fn(x):
        return objective_fn.value(param.to_rho(x))

    core = default_seeds(problem)
    ell = estimate_ellipsoid_restricted(problem)
    ell_rho = candidate_radii(ell.candidate, grid)
    randoms = core[2:]
    seeds = core[:2] + [("ellipsoid", ell_rho)]
    seeds += randoms[: max(0, problem.restarts - len(seeds))]
    for j, extra in enumerate(extra_seeds or []):
        rho = candidate_radii(extra, grid) if isinstance(extra, bd.StarBody) else np.asarray(extra, float)
        seeds.append((f"extra{j}", rho))

    best_value, best_rho, best_step = None, None, math.inf
    finals = []
    remaining = max(problem.budget - ell.evaluations, len(seeds) * 8)
    for idx, (name, rho_seed) in enumerate(seeds):
        direct = objective_fn.value(rho_seed)
        recorder.record(direct, 0.0)
        remaining -= 1
        if not math.isfinite(direct):
            continue
        if best_value is None or _better(problem.sense, direct, best_value):
            best_value, best_rho, best_step = direct, rho_seed, math.inf
        alloc = max(8, remaining // (len(seeds) - idx))
        x0 = param.from_rho(rho_seed, _antipodal_values(rho_seed, grid))
        x, fx, step, used = _pattern_search(fn, x0, problem.sense, 0.2,
                                            problem.min_step, alloc, recorder)
        remaining -= used
        finals.append(fx)
        if _better(problem.sense, fx, best_value) or fx == best_value:
            best_value, best_rho, best_step = fx, param.to_rho(x), step

    if best_value is None:
        raise OptimizationFailureError("no successful objective evaluation within budget")

    # normalized optimizer body, re-evaluated through the public objective so
    # that value == objective(problem, candidate) holds by construction
    rho_cand, lam = objective_fn.evaluator.prepare(best_rho)
    candidate = bd.from_grid_values(grid, lam * rho_cand, symmetry=True, convexity=(
        True if problem.target == "geominimal" else None),
        label=f"optimizer({problem.target},{problem.phi.label})")
    final_value = objective(problem, candidate)
    ball_value = objective(problem, bd.ball(grid.dimension))
    if _better(problem.sense, ball_value, final_value):
        candidate = bd.ball(grid.dimension)
        final_value = ball_value

    ordered = sorted(finals, reverse=(problem.sense == "sup"))
    agree = len(ordered) >= 2 and abs(ordered[0] - ordered[1]) <= CONVERGED_AGREEMENT * max(
        abs(ordered[0]), 1e-300)
    markers = {
        "objective_at_ball": ball_value,
        "objective_at_body": objective_fn.value(_symmetric_seed(problem.body, grid)),
        "ellipsoid_restricted": ell.value,
    }
    markers.update(_volume_bound_markers(problem))
    return ExtremalResult(
        value=final_value,
        candidate=candidate,
        trace=recorder.trace,
        markers=markers,
        converged=bool(best_step < CONVERGED_STEP and agree),
        evaluations=recorder.count + ell.evaluations,
        restart_values=finals,
        sense=problem.sense,
    )


def _antipode_index(grid: SphericalGrid) -> np.ndarray:
    N = len(grid)
    return (np.arange(N) + N // 2) % N


def _minus_radii(rho: np.ndarray, grid: SphericalGrid) -> np.ndarray:
    # nearest-node lookup of rho at the antipodal directions
    from scipy.spatial import cKDTree

    tree = cKDTree(grid.nodes)
    _, idx = tree.query(-grid.nodes)
    return rho[idx]


def _volume_bound_markers(problem: ExtremalProblem) -> dict:
    n = problem.grid.dimension
    classes = problem.phi.classify(n)
    vol = volume_value(problem.body, problem.grid)
    vr = (vol / unit_ball_volume(n)) ** (1.0 / n)
    bound = float(problem.phi(1.0 / vr)) * n * vol
    if FunctionClass.F_CONVEX_DECREASING in classes:
        return {"volume_bound_lower": bound}
    if FunctionClass.F_CONCAVE_INCREASING in classes:
        return {"volume_bound_upper": bound}
    return {}


# ---------------------------------------------------------------------------
# i-th mixed estimator

def estimate_ith_mixed(phi1: OrliczFunction, phi2: OrliczFunction, i: float,
                       K: bd.StarBody, L: bd.StarBody, grid: SphericalGrid,
                       target: str = "affine", budget: int = DEFAULT_BUDGET,
                       seed: int = 0) -> ExtremalResult:
    """Extremum of n V~_{phi1,phi2,i}(K, L; Q1, Q2) over normalized pairs.

    Both functions must lie in the same class (inf for the F-convex pair,
    sup for the F-concave pair); mixed classes raise ContractError.
    """
    n = grid.dimension
    s1, s2 = sense_for(phi1, n), sense_for(phi2, n)
    if s1 != s2:
        raise ContractError("phi1 and phi2 must belong to the same function class")
    sense = s1
    evaluator = CandidateEvaluator(grid, target)
    rho_k = bd.radial_eval(K, grid).rho.values
    rho_l = bd.radial_eval(L, grid).rho.values
    rk_n, rl_n = rho_k**n, rho_l**n
    w = grid.weights

    def pair_value(rho1, rho2):
        c1, lam1 = evaluator.prepare(rho1)
        c2, lam2 = evaluator.prepare(rho2)
        f1 = phi1(lam1 * c1 / rho_k) * rk_n
        f2 = phi2(lam2 * c2 / rho_l) * rl_n
        if np.any(f1 <= 0) or np.any(f2 <= 0):
            return math.inf if sense == "inf" else -math.inf
        integrand = np.exp(((n - i) / n) * np.log(f1) + (i / n) * np.log(f2))
        return float(np.dot(w, integrand))

    param = _parameterization(grid)
    recorder = _Recorder()
    N = len(grid)

    def fn(x):
        half = len(x) // 2
        return pair_value(param.to_rho(x[:half]), param.to_rho(x[half:]))

    seeds = [
        ("balls", np.ones(N), np.ones(N)),
        ("bodies", _symmetric_seed(K, grid), _symmetric_seed(L, grid)),
        ("random", candidate_radii(
            bd.make_random_star(n, grid, seed=1201 + seed, roughness=0.3, symmetric=True), grid),
         candidate_radii(
            bd.make_random_star(n, grid, seed=1601 + seed, roughness=0.3, symmetric=True), grid)),
    ]
    best_value, best_pair = None, None
    finals = []
    per_restart = max(8, budget // len(seeds))
    for name, r1, r2 in seeds:
        direct = pair_value(r1, r2)
        recorder.record(direct, 0.0)
        if math.isfinite(direct) and (best_value is None or _better(sense, direct, best_value)):
            best_value, best_pair = direct, (r1, r2)
        x0 = np.concatenate([
            param.from_rho(r1, _antipodal_values(r1, grid)),
            param.from_rho(r2, _antipodal_values(r2, grid)),
        ])
        x, fx, step, _ = _pattern_search(fn, x0, sense, 0.2, MIN_STEP, per_restart, recorder)
        finals.append(fx)
        if _better(sense, fx, best_value):
            half = len(x) // 2
            best_value, best_pair = fx, (param.to_rho(x[:half]), param.to_rho(x[half:]))

    if best_value is None:
        raise OptimizationFailureError("no successful objective evaluation within budget")
    cands = []
    for rho in best_pair:
        c, lam = evaluator.prepare(rho)
        cands.append(bd.from_grid_values(grid, lam * c, symmetry=True,
                                         label="ith-mixed optimizer"))
    ordered = sorted(finals, reverse=(sense == "sup"))
    agree = len(ordered) >= 2 and abs(ordered[0] - ordered[1]) <= CONVERGED_AGREEMENT * max(
        abs(ordered[0]), 1e-300)
    return ExtremalResult(
        value=best_value,
        candidate=tuple(cands),
        trace=recorder.trace,
        markers={},
        converged=agree,
        evaluations=recorder.count,
        restart_values=finals,
        sense=sense,
    )


def _antipodal_values(rho: np.ndarray, grid: SphericalGrid) -> np.ndarray:
    if grid.dimension == 2 and grid.scheme == "uniform-angle":
        return rho[_antipode_index(grid)]
    return _minus_radii(rho, grid)


# ---------------------------------------------------------------------------
# multi-body estimator (n <= 3)

def estimate_multi(phis, Ks, grid: SphericalGrid, target: str = "affine",
                   mode: str = "joint", budget: int = DEFAULT_BUDGET,
                   seed: int = 0) -> ExtremalResult:
    """Extremum of n V~_phivec(Kvec; Lvec) over per-slot normalized candidates.

    Supported for n in {2, 3} only.  ``mode="per-slot"`` optimizes each slot
    through its single-body problem and evaluates the joint objective at the
    combination; ``mode="joint"`` refines that start with a joint block
    search.  Slots with identical bodies and functions share candidates.
    """
    n = grid.dimension
    if n > 3:
        raise ConfigurationError("multi-body estimation is supported for n <= 3 only")
    if len(phis) != n or len(Ks) != n:
        raise ContractError(f"need exactly n={n} functions and bodies")
    senses = {sense_for(p, n) for p in phis if not p.is_constant}
    if len(senses) > 1:
        raise ContractError("all functions must share one class")
    sense = senses.pop() if senses else "inf"

    evaluator = CandidateEvaluator(grid, target)
    w = grid.weights
    rho_ks = [bd.radial_eval(K, grid).rho.values for K in Ks]

    def vec_value(rhos):
        log_prod = np.zeros(len(grid))
        for phi, rho_k, rho in zip(phis, rho_ks, rhos):
            c, lam = evaluator.prepare(rho)
            factor = phi(lam * c / rho_k) * rho_k**n
            if np.any(factor <= 0) or np.any(~np.isfinite(factor)):
                return math.inf if sense == "inf" else -math.inf
            log_prod += np.log(factor)
        return float(np.dot(w, np.exp(log_prod / n)))

    # per-slot solutions, shared across identical (phi, K) slots
    slot_cache: dict[tuple, np.ndarray] = {}
    slot_rhos = []
    sub_budget = max(200, budget // (2 * n))
    for phi, K in zip(phis, Ks):
        key = (phi.label, K.label)
        if key not in slot_cache:
            prob = ExtremalProblem(target=target, phi=phi, body=K, grid=grid,
                                   budget=sub_budget, restarts=3, seed=seed)
            res = estimate(prob)
            slot_cache[key] = candidate_radii(res.candidate, grid)
        slot_rhos.append(slot_cache[key])
    per_slot_value = vec_value(slot_rhos)

    if mode == "per-slot":
        cands = tuple(_normalized_body(evaluator, grid, r) for r in slot_rhos)
        return ExtremalResult(value=per_slot_value, candidate=cands,
                              markers={"mode": "per-slot"}, converged=True,
                              sense=sense)
    if mode != "joint":
        raise ConfigurationError(f"unknown multi-body mode {mode!r}")

    param = _parameterization(grid)
    recorder = _Recorder()
    sizes = None

    def pack(rhos):
        vecs = [param.from_rho(r, _antipodal_values(r, grid)) for r in rhos]
        return np.concatenate(vecs), [len(v) for v in vecs]

    x0, sizes = pack(slot_rhos)

    def fn(x):
        rhos, start = [], 0
        for size in sizes:
            rhos.append(param.to_rho(x[start:start + size]))
            start += size
        return vec_value(rhos)

    recorder.record(per_slot_value, 0.0)
    x, fx, step, _ = _pattern_search(fn, x0, sense, 0.1, MIN_STEP,
                                     max(8, budget - recorder.count), recorder)
    if _better(sense, per_slot_value, fx):
        fx, x = per_slot_value, x0
    rhos, start = [], 0
    for size in sizes:
        rhos.append(param.to_rho(x[start:start + size]))
        start += size
    cands = tuple(_normalized_body(evaluator, grid, r) for r in rhos)
    return ExtremalResult(
        value=fx, candidate=cands, trace=recorder.trace,
        markers={"mode": "joint", "per_slot_value": per_slot_value},
        converged=step < CONVERGED_STEP, evaluations=recorder.count, sense=sense,
    )


def _normalized_body(evaluator: CandidateEvaluator, grid: SphericalGrid,
                     rho: np.ndarray) -> bd.StarBody:
    c, lam = evaluator.prepare(rho)
    return bd.from_grid_values(grid, lam * c, symmetry=True, label="multi optimizer")
