"""Quadrature grids on the unit sphere S^{n-1}.

All functionals in this package reduce to integrals against the spherical
measure sigma, approximated here by weighted node sums.  Three schemes are
provided:

* ``uniform-angle`` (n = 2): equispaced angles with equal weights, which is
  the trapezoid rule on the circle and spectrally accurate for smooth
  periodic integrands;
* ``fibonacci`` (n = 3): a Fibonacci lattice with the uniform weight
  ``4*pi/N``;
* ``monte-carlo`` (n >= 2): seeded uniform directions with weights
  normalized so the weight sum is exactly ``n * omega_n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigurationError, NumericalDomainError

SCHEMES = ("uniform-angle", "fibonacci", "monte-carlo")

_GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


def unit_ball_volume(n: int) -> float:
    """Volume omega_n of the n-dimensional unit ball, pi^(n/2) / Gamma(n/2 + 1)."""
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def sphere_measure(n: int) -> float:
    """Total spherical measure sigma(S^{n-1}) = n * omega_n."""
    return n * unit_ball_volume(n)


@dataclass
class SphericalGrid:
    """Quadrature nodes and weights approximating the spherical measure.

    Attributes
    ----------
    dimension : ambient dimension n (nodes live on S^{n-1})
    nodes : (N, n) array of unit vectors
    weights : (N,) array of strictly positive weights summing to n * omega_n
    scheme : one of ``SCHEMES``
    resolution : requested node count
    seed : RNG seed (monte-carlo only)
    """

    dimension: int
    nodes: np.ndarray
    weights: np.ndarray
    scheme: str
    resolution: int
    seed: int | None = None
    _coarse: "SphericalGrid | None" = field(default=None, repr=False)

    def __post_init__(self):
        self.nodes = np.ascontiguousarray(self.nodes, dtype=float)
        self.weights = np.ascontiguousarray(self.weights, dtype=float)
        norms = np.linalg.norm(self.nodes, axis=1)
        if np.max(np.abs(norms - 1.0)) > 1e-12:
            raise ConfigurationError("grid nodes must be unit vectors")
        if np.any(self.weights <= 0.0):
            raise ConfigurationError("grid weights must be strictly positive")
        total = sphere_measure(self.dimension)
        if abs(math.fsum(self.weights) - total) > 1e-12 * total:
            raise ConfigurationError("grid weights must sum to n * omega_n")
        self.nodes.flags.writeable = False
        self.weights.flags.writeable = False

    def __len__(self) -> int:
        return self.nodes.shape[0]

    @property
    def mesh_tol(self) -> float:
        """Heuristic sampling tolerance used for hull/support error bounds."""
        n_nodes = len(self)
        if self.scheme == "uniform-angle":
            return (2.0 * math.pi / n_nodes) ** 2
        if self.scheme == "fibonacci":
            return 4.0 * math.pi / n_nodes
        return 6.0 * n_nodes ** (-1.0 / (self.dimension - 1))

    @property
    def angles(self) -> np.ndarray:
        """Node angles in [0, 2*pi) (uniform-angle grids only)."""
        if self.scheme != "uniform-angle":
            raise ConfigurationError("angles are defined for uniform-angle grids only")
        return 2.0 * math.pi * np.arange(len(self)) / len(self)

    def coarsen(self) -> "SphericalGrid":
        """Half-resolution companion grid used for quadrature error estimates."""
        if self._coarse is None:
            res = max(8, self.resolution // 2)
            self._coarse = build_grid(self.dimension, res, self.scheme, seed=self.seed)
        return self._coarse

    def describe(self) -> str:
        return f"grid(n={self.dimension},N={self.resolution},{self.scheme},seed={self.seed})"


@dataclass
class GridFunction:
    """Real values attached to the nodes of a grid."""

    grid: SphericalGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(self.grid),):
            raise ConfigurationError(
                f"expected {len(self.grid)} values, got shape {self.values.shape}"
            )

    @classmethod
    def from_callable(cls, grid: SphericalGrid, fn: Callable[[np.ndarray], np.ndarray]) -> "GridFunction":
        return cls(grid, np.asarray(fn(grid.nodes), dtype=float))


def build_grid(dimension: int, resolution: int, scheme: str, seed: int | None = None) -> SphericalGrid:
    """Build a quadrature grid on S^{dimension-1}.

    ``seed`` is required for (and only used by) the monte-carlo scheme.
    Raises :class:`ConfigurationError` for unsupported (dimension, scheme)
    pairs.  Deterministic for fixed inputs.
    """
    if dimension < 2:
        raise ConfigurationError("dimension must be >= 2")
    if resolution < 8:
        raise ConfigurationError("resolution must be >= 8")
    if scheme not in SCHEMES:
        raise ConfigurationError(f"unknown scheme {scheme!r}; expected one of {SCHEMES}")

    if scheme == "uniform-angle":
        if dimension != 2:
            raise ConfigurationError("uniform-angle grids require dimension 2")
        theta = 2.0 * math.pi * np.arange(resolution) / resolution
        nodes = np.column_stack([np.cos(theta), np.sin(theta)])
        weights = np.full(resolution, 2.0 * math.pi / resolution)
        nodes[:, 0][np.abs(nodes[:, 0]) < 1e-15] = 0.0
        nodes[:, 1][np.abs(nodes[:, 1]) < 1e-15] = 0.0
        nodes /= np.linalg.norm(nodes, axis=1)[:, None]
        return SphericalGrid(2, nodes, weights, scheme, resolution)

    if scheme == "fibonacci":
        if dimension != 3:
            raise ConfigurationError("fibonacci grids require dimension 3")
        idx = np.arange(resolution, dtype=float) + 0.5
        polar = np.arccos(1.0 - 2.0 * idx / resolution)
        azimuth = 2.0 * math.pi * idx / _GOLDEN
        nodes = np.column_stack([
            np.cos(azimuth) * np.sin(polar),
            np.sin(azimuth) * np.sin(polar),
            np.cos(polar),
        ])
        nodes /= np.linalg.norm(nodes, axis=1)[:, None]
        weights = np.full(resolution, 4.0 * math.pi / resolution)
        return SphericalGrid(3, nodes, weights, scheme, resolution)

    # monte-carlo
    if seed is None:
        raise ConfigurationError("monte-carlo grids require a seed")
    rng = np.random.default_rng(seed)
    nodes = rng.standard_normal((resolution, dimension))
    norms = np.linalg.norm(nodes, axis=1)
    while np.any(norms < 1e-12):  # pragma: no cover - essentially impossible
        bad = norms < 1e-12
        nodes[bad] = rng.standard_normal((int(bad.sum()), dimension))
        norms = np.linalg.norm(nodes, axis=1)
    nodes /= norms[:, None]
    weights = np.full(resolution, sphere_measure(dimension) / resolution)
    return SphericalGrid(dimension, nodes, weights, scheme, resolution, seed=seed)


def integrate(f: GridFunction) -> float:
    """Integrate a grid function against the spherical measure.

    Returns ``sum_i w_i f(u_i)`` using exactly rounded summation, so the
    result is invariant under node permutations.  Raises
    :class:`NumericalDomainError` (with the offending node index) if any
    value is non-finite.
    """
    values = f.values
    finite = np.isfinite(values)
    if not finite.all():
        idx = int(np.argmin(finite))
        raise NumericalDomainError(
            f"non-finite value {values[idx]} at node {idx}", node_index=idx
        )
    return math.fsum(f.grid.weights * values)
