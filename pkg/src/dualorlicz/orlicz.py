"""Orlicz functions phi: (0,inf) -> (0,inf) and their classification.

A function phi is classified relative to a dimension n through
``F(t) = phi(t**(1/n))``:

* ``F_CONVEX``            : F is constant or strictly convex,
* ``F_CONCAVE_INCREASING`` : F is constant or increasing and strictly concave,
* ``F_CONVEX_DECREASING``  : F is constant or decreasing and strictly convex
  (a subset of ``F_CONVEX``).

Constant functions are admitted to every class.  For power functions the
classification is exact (``t**p`` lands in ``F_CONVEX`` iff p < 0 or p > n,
in ``F_CONCAVE_INCREASING`` iff 0 < p < n, and additionally in
``F_CONVEX_DECREASING`` iff p < 0); for custom functions it is a numeric
probe and should be treated as advisory.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ContractError, InvalidCompositionError, NumericalDomainError
from ._expr import compile_expression

PROBE_GRID = 10.0 ** np.linspace(-4.0, 4.0, 161)
POSITIVITY_GRID = 10.0 ** np.linspace(-6.0, 6.0, 121)
CONVEXITY_TOL = 1e-9


class FunctionClass(enum.Enum):
    F_CONVEX = "F-convex"
    F_CONCAVE_INCREASING = "F-concave-increasing"
    F_CONVEX_DECREASING = "F-convex-decreasing"


ALL_CLASSES = frozenset(FunctionClass)


@dataclass
class OrliczFunction:
    """A positive continuous function on (0, inf) with classification metadata."""

    evaluator: Callable[[np.ndarray], np.ndarray]
    label: str
    p: float | None = None  # exponent when the function is a pure power
    _classes: dict = field(default_factory=dict, repr=False)
    _monotonicity: str | None = field(default=None, repr=False)

    def __post_init__(self):
        vals = np.asarray(self.evaluator(POSITIVITY_GRID), dtype=float)
        if np.any(np.isnan(vals)) or np.any(vals <= 0.0):
            raise NumericalDomainError(
                f"{self.label}: evaluator must be positive on (0, inf)"
            )

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        out = np.asarray(self.evaluator(arr), dtype=float)
        if out.shape != arr.shape:
            out = np.broadcast_to(out, arr.shape).copy()
        return out if arr.ndim else float(out)

    @property
    def monotonicity(self) -> str:
        """One of increasing / decreasing / constant / mixed, probed on (0, inf)."""
        if self._monotonicity is None:
            if self.p is not None:
                self._monotonicity = (
                    "constant" if self.p == 0 else ("increasing" if self.p > 0 else "decreasing")
                )
            else:
                vals = self(PROBE_GRID)
                vals = vals[np.isfinite(vals)]  # ignore overflow regions
                self._monotonicity = _sign_census(vals)
        return self._monotonicity

    @property
    def is_constant(self) -> bool:
        return self.monotonicity == "constant"

    def classify(self, n: int) -> frozenset[FunctionClass]:
        """Classes of this function relative to dimension ``n`` (cached)."""
        if n not in self._classes:
            if self.p is not None:
                self._classes[n] = _classify_power(self.p, n)
            else:
                self._classes[n] = _classify_numeric(self, n)
        return self._classes[n]

    def describe(self) -> str:
        return self.label


def power(p: float, n: int | None = None) -> OrliczFunction:
    """The power function ``t**p`` with exact classification.

    When ``n`` is given the classification for that dimension is
    pre-computed; ``p == n`` classifies to the empty set (the excluded
    borderline where ``F(t) = t`` is affine).
    """
    if not math.isfinite(p):
        raise ContractError("power exponent must be finite")
    p = float(p)
    fn = OrliczFunction(evaluator=lambda t, _p=p: np.power(t, _p), label=f"power({p:g})", p=p)
    if n is not None:
        fn.classify(n)
    return fn


def constant(alpha: float) -> OrliczFunction:
    if alpha <= 0:
        raise ContractError("constant Orlicz functions must be positive")
    a = float(alpha)
    return OrliczFunction(
        evaluator=lambda t, _a=a: np.full_like(np.asarray(t, dtype=float), _a),
        label=f"const({a:g})",
        p=0.0 if a == 1.0 else None,
    )


def from_expression(expr: str) -> OrliczFunction:
    """Parse an arithmetic expression in ``t`` (operators + - * / ^, exp, log)."""
    fn = compile_expression(expr)
    return OrliczFunction(evaluator=fn, label=f"expr({expr})")


def from_callable(fn: Callable, label: str = "custom") -> OrliczFunction:
    return OrliczFunction(evaluator=lambda t, _f=fn: np.asarray(_f(np.asarray(t, dtype=float))), label=label)


def _sign_census(vals: np.ndarray) -> str:
    """Monotonicity from value differences, tolerating rounding-level ties.

    Differences smaller than a few ulps of the local magnitude count as
    zero, which keeps functions spanning hundreds of orders of magnitude
    classifiable.
    """
    d = np.diff(vals)
    local = np.maximum(np.abs(vals[1:]), np.abs(vals[:-1]))
    d = np.where(np.abs(d) <= 1e-14 * local, 0.0, d)
    has_pos, has_neg = bool(np.any(d > 0)), bool(np.any(d < 0))
    if not has_pos and not has_neg:
        return "constant"
    if has_pos and not has_neg:
        return "increasing"
    if has_neg and not has_pos:
        return "decreasing"
    return "mixed"


def _classify_power(p: float, n: int) -> frozenset[FunctionClass]:
    if p == 0:
        return ALL_CLASSES
    if p == n:
        return frozenset()
    classes = set()
    if p < 0 or p > n:
        classes.add(FunctionClass.F_CONVEX)
    if 0 < p < n:
        classes.add(FunctionClass.F_CONCAVE_INCREASING)
    if p < 0:
        classes.add(FunctionClass.F_CONVEX_DECREASING)
    return frozenset(classes)


def _classify_numeric(phi: OrliczFunction, n: int) -> frozenset[FunctionClass]:
    t = PROBE_GRID
    F = phi(t ** (1.0 / n))
    if not np.all(np.isfinite(F)):
        idx = int(np.argmin(np.isfinite(F)))
        raise NumericalDomainError(
            f"{phi.label}: F(t)=phi(t^(1/n)) non-finite at probe t={t[idx]:g}",
            node_index=idx,
        )
    scale = max(float(np.max(np.abs(F))), 1e-300)
    if float(np.max(F) - np.min(F)) <= 1e-12 * scale:
        return ALL_CLASSES

    d1 = np.diff(F) / np.diff(t)
    # second divided differences, normalized to be scale- and grid-free
    # (for F = t^a the normalized value is a*(a-1), a constant)
    d2 = 2.0 * (d1[1:] - d1[:-1]) / (t[2:] - t[:-2])
    mid = t[1:-1]
    d2n = d2 * mid**2 / np.maximum(np.abs(F[1:-1]), 1e-300)

    strictly_convex = bool(np.all(d2n > CONVEXITY_TOL))
    strictly_concave = bool(np.all(d2n < -CONVEXITY_TOL))
    increasing = bool(np.all(np.diff(F) > 0))
    decreasing = bool(np.all(np.diff(F) < 0))

    classes = set()
    if strictly_convex:
        classes.add(FunctionClass.F_CONVEX)
        if decreasing:
            classes.add(FunctionClass.F_CONVEX_DECREASING)
    if strictly_concave and increasing:
        classes.add(FunctionClass.F_CONCAVE_INCREASING)
    return frozenset(classes)


@dataclass
class Composition:
    """The composition H(t) = phi(psi^{-1}(t)) with monotonicity/shape probes."""

    phi: OrliczFunction
    psi: OrliczFunction
    _increasing_psi: bool = field(default=True, repr=False)
    monotonicity: str = field(default="", repr=False)
    convexity: str = field(default="", repr=False)  # convex / concave / affine / mixed

    def __post_init__(self):
        s = PROBE_GRID
        psi_vals = self.psi(s)
        diffs = np.diff(psi_vals)
        if np.all(diffs > 0):
            self._increasing_psi = True
        elif np.all(diffs < 0):
            self._increasing_psi = False
        else:
            raise InvalidCompositionError(
                f"{self.psi.label} is not strictly monotone on the probe range"
            )
        self._probe()
        # round-trip consistency on the finite part of a probe subset
        sub = s[::8]
        phi_at = self.phi(sub)
        finite = np.isfinite(phi_at)
        if finite.sum() < 4:
            raise InvalidCompositionError("composition overflows on the whole probe range")
        sub, phi_at = sub[finite], phi_at[finite]
        h_at = self(self.psi(sub))
        rel = np.max(np.abs(h_at - phi_at) / np.maximum(np.abs(phi_at), 1e-300))
        if rel > 1e-8:
            raise InvalidCompositionError(
                f"composition round-trip failed (relative error {rel:.2e})"
            )

    def invert_psi(self, y: float) -> float:
        """Monotone bisection solve of psi(s) = y to relative tolerance 1e-10."""
        lo, hi = 1e-12, 1e12
        f = lambda s: self.psi(np.asarray([s]))[0] - y
        sign = 1.0 if self._increasing_psi else -1.0
        flo, fhi = sign * f(lo), sign * f(hi)
        if flo > 0 or fhi < 0:
            raise NumericalDomainError(f"value {y} outside the invertible range of {self.psi.label}")
        # bisection in log-space, tightened well below the 1e-10 contract so
        # steep compositions (large log-derivative) keep their round-trip
        llo, lhi = math.log(lo), math.log(hi)
        for _ in range(250):
            mid = 0.5 * (llo + lhi)
            if sign * f(math.exp(mid)) <= 0:
                llo = mid
            else:
                lhi = mid
            if lhi - llo < 1e-13:
                break
        return math.exp(0.5 * (llo + lhi))

    def __call__(self, t):
        arr = np.atleast_1d(np.asarray(t, dtype=float))
        s = np.array([self.invert_psi(float(y)) for y in arr])
        out = self.phi(s)
        return float(out[0]) if np.ndim(t) == 0 else out

    def _probe(self):
        s = PROBE_GRID[::4]
        x = self.psi(s)          # probe points in H's domain
        y = self.phi(s)          # H at those points, by construction
        finite = np.isfinite(x) & np.isfinite(y)
        if finite.sum() < 8:
            raise InvalidCompositionError("composition has too few finite probe points")
        x, y = x[finite], y[finite]
        order = np.argsort(x)
        x, y = x[order], y[order]
        d1 = np.diff(y) / np.diff(x)
        self.monotonicity = _sign_census(y)
        d2 = 2.0 * (d1[1:] - d1[:-1]) / (x[2:] - x[:-2])
        d2n = d2 * x[1:-1] ** 2 / np.maximum(np.abs(y[1:-1]), 1e-300)
        if np.max(np.abs(d2n)) <= CONVEXITY_TOL:
            self.convexity = "affine"
        elif np.all(d2n >= -CONVEXITY_TOL):
            self.convexity = "convex"
        elif np.all(d2n <= CONVEXITY_TOL):
            self.convexity = "concave"
        else:
            self.convexity = "mixed"

    def describe(self) -> str:
        return f"H[{self.phi.label} o inv({self.psi.label})]"


def compose(phi: OrliczFunction, psi: OrliczFunction) -> Composition:
    """Build H = phi o psi^{-1}; raises if psi is not strictly monotone."""
    return Composition(phi=phi, psi=psi)


def classify(phi: OrliczFunction, n: int) -> frozenset[FunctionClass]:
    return phi.classify(n)


def parse_function_spec(spec) -> OrliczFunction:
    """Build a function from a declarative spec: number, expression string,
    or mapping ``{kind: power|expr, ...}``."""
    if isinstance(spec, OrliczFunction):
        return spec
    if isinstance(spec, (int, float)):
        return constant(float(spec))
    if isinstance(spec, str):
        return from_expression(spec)
    if isinstance(spec, dict):
        kind = spec.get("kind")
        if kind == "power":
            return power(float(spec["p"]))
        if kind == "expr":
            return from_expression(str(spec["expr"]))
        raise ContractError(f"unknown function kind {kind!r}")
    raise ContractError(f"cannot interpret function spec {spec!r}")
