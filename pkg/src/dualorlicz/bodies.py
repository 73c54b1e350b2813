"""Star bodies and convex bodies: radial/support evaluation, polarity, hulls.

A star body (about the origin) is represented by its radial function
``rho_K(u) = max{lam : lam*u in K}``, evaluated either in closed form
(balls, ellipsoids, lp-balls, facet polytopes, generated analytic shapes)
or from grid samples with interpolation.  A convex body additionally has a
support function ``h_K(u) = max_{x in K} <x, u>``; for sampled bodies the
support of the node cloud is used, which equals the support of the convex
hull of the samples.

Conventions:

* radial and support evaluators are vectorized, mapping an (m, n) array of
  unit directions to an (m,) array of values;
* grid-sampled bodies on n = 2 grids interpolate by periodic linear
  interpolation in angle; on n >= 3 grids by nearest node.  Transforming a
  grid-sampled body therefore loses one order of accuracy compared to
  analytic kinds, which evaluate exactly through the transform rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConfigurationError, InvalidBodyError
from .sphgrid import GridFunction, SphericalGrid, unit_ball_volume

KINDS = ("ball", "ellipsoid", "lp-ball", "polytope", "grid-sampled", "custom")

_SUPPORT_CHUNK = 1024


@dataclass
class LinearMap:
    """An invertible linear transform with its absolute determinant."""

    matrix: np.ndarray
    det_abs: float | None = None

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=float)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise ConfigurationError("linear map matrix must be square")
        det = float(np.linalg.det(self.matrix))
        if abs(det) < 1e-14:
            raise ConfigurationError("linear map must be invertible")
        if self.det_abs is None:
            self.det_abs = abs(det)
        elif abs(self.det_abs - abs(det)) > 1e-10 * max(1.0, abs(det)):
            raise ConfigurationError("det_abs does not match the matrix determinant")

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def inverse(self) -> "LinearMap":
        return LinearMap(np.linalg.inv(self.matrix))

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        return LinearMap(self.matrix @ other.matrix)

    @classmethod
    def scaling(cls, dimension: int, factor: float) -> "LinearMap":
        return cls(np.eye(dimension) * factor)

    @classmethod
    def rotation2d(cls, theta: float) -> "LinearMap":
        c, s = math.cos(theta), math.sin(theta)
        return cls(np.array([[c, -s], [s, c]]))


@dataclass
class StarBody:
    """A star body, immutable by convention once constructed."""

    dimension: int
    kind: str
    label: str
    radial_fn: Callable[[np.ndarray], np.ndarray]
    symmetry: bool | None = None      # origin symmetry: yes / no / unknown
    convexity: bool | None = None
    support_fn: Callable[[np.ndarray], np.ndarray] | None = None
    params: dict = field(default_factory=dict)

    def radial(self, directions: np.ndarray) -> np.ndarray:
        u = np.atleast_2d(np.asarray(directions, dtype=float))
        return np.asarray(self.radial_fn(u), dtype=float)

    @property
    def has_analytic_support(self) -> bool:
        return self.support_fn is not None

    def describe(self) -> str:
        return self.label


@dataclass
class BodyOnGrid:
    """A body sampled on a grid: radii and (optionally) support values."""

    body: StarBody
    grid: SphericalGrid
    rho: GridFunction
    support: GridFunction | None = None


# ---------------------------------------------------------------------------
# constructors

def ball(dimension: int, radius: float = 1.0) -> StarBody:
    if radius <= 0:
        raise InvalidBodyError("ball radius must be positive")
    r = float(radius)
    return StarBody(
        dimension=dimension,
        kind="ball",
        label=f"ball(n={dimension},r={r:g})",
        radial_fn=lambda u, _r=r: np.full(u.shape[0], _r),
        symmetry=True,
        convexity=True,
        support_fn=lambda u, _r=r: np.full(u.shape[0], _r),
        params={"radius": r},
    )


def ellipsoid(matrix=None, semi_axes=None) -> StarBody:
    """The ellipsoid M * B for an invertible matrix M (or diag(semi_axes))."""
    if matrix is None:
        if semi_axes is None:
            raise ConfigurationError("ellipsoid needs a matrix or semi-axes")
        matrix = np.diag(np.asarray(semi_axes, dtype=float))
    M = np.asarray(matrix, dtype=float)
    n = M.shape[0]
    if abs(np.linalg.det(M)) < 1e-14:
        raise InvalidBodyError("ellipsoid matrix must be invertible")
    Minv = np.linalg.inv(M)
    return StarBody(
        dimension=n,
        kind="ellipsoid",
        label=f"ellipsoid({np.array2string(M, precision=6, separator=',')})",
        radial_fn=lambda u, _A=Minv: 1.0 / np.linalg.norm(u @ _A.T, axis=1),
        symmetry=True,
        convexity=True,
        support_fn=lambda u, _M=M: np.linalg.norm(u @ _M, axis=1),
        params={"matrix": M},
    )


def lp_ball(dimension: int, p: float) -> StarBody:
    """The unit ball of ||x||_p (star-shaped for any p > 0, convex iff p >= 1)."""
    if p <= 0:
        raise InvalidBodyError("lp-ball requires p > 0")
    p = float(p)
    support = None
    if p >= 1.0:
        q = math.inf if p == 1.0 else p / (p - 1.0)

        def support(u, _q=q):
            if _q == math.inf:
                return np.abs(u).max(axis=1)
            return (np.abs(u) ** _q).sum(axis=1) ** (1.0 / _q)

    return StarBody(
        dimension=dimension,
        kind="lp-ball",
        label=f"lp-ball(n={dimension},p={p:g})",
        radial_fn=lambda u, _p=p: (np.abs(u) ** _p).sum(axis=1) ** (-1.0 / _p),
        symmetry=True,
        convexity=p >= 1.0,
        support_fn=support,
        params={"p": p},
    )


def polytope(normals, offsets) -> StarBody:
    """The polytope {x : <a_j, x> <= b_j} with b_j > 0 (origin interior).

    Normal rows are normalized to unit length.  A probe pass rejects facet
    lists whose normals do not positively span the space (which would leave
    directions with no boundary, i.e. an unbounded set).
    """
    A = np.atleast_2d(np.asarray(normals, dtype=float))
    b = np.asarray(offsets, dtype=float)
    if A.shape[0] != b.shape[0]:
        raise ConfigurationError("facet normals and offsets must have equal length")
    if np.any(b <= 0):
        raise InvalidBodyError("facet offsets must be positive (origin interior)")
    norms = np.linalg.norm(A, axis=1)
    if np.any(norms < 1e-14):
        raise InvalidBodyError("zero facet normal")
    A = A / norms[:, None]
    b = b / norms
    n = A.shape[1]

    probes = _boundedness_probes(n)
    if np.any((probes @ A.T).max(axis=1) <= 1e-12):
        raise InvalidBodyError("polytope facets do not bound the body in all directions")

    def radial(u, _A=A, _b=b):
        dots = u @ _A.T
        with np.errstate(divide="ignore"):
            ratios = np.where(dots > 1e-14, _b / np.maximum(dots, 1e-300), np.inf)
        return ratios.min(axis=1)

    body = StarBody(
        dimension=n,
        kind="polytope",
        label=f"polytope(n={n},m={A.shape[0]})",
        radial_fn=radial,
        symmetry=_facets_symmetric(A, b),
        convexity=True,
        params={"normals": A, "offsets": b, "_cache": {}},
    )
    body.support_fn = lambda u, _body=body: (u @ polytope_vertices(_body).T).max(axis=1)
    return body


def cube(dimension: int, half_width: float = 1.0) -> StarBody:
    eye = np.eye(dimension)
    A = np.vstack([eye, -eye])
    b = np.full(2 * dimension, float(half_width))
    body = polytope(A, b)
    body.label = f"cube(n={dimension},h={half_width:g})"
    return body


def cross_polytope(dimension: int, scale: float = 1.0) -> StarBody:
    """The set {x : sum |x_i| <= scale}."""
    signs = np.array(np.meshgrid(*([[-1.0, 1.0]] * dimension))).T.reshape(-1, dimension)
    A = signs / math.sqrt(dimension)
    b = np.full(A.shape[0], float(scale) / math.sqrt(dimension))
    body = polytope(A, b)
    body.label = f"cross-polytope(n={dimension},s={scale:g})"
    return body


def from_grid_values(grid: SphericalGrid, values, symmetry: bool | None = None,
                     convexity: bool | None = None, label: str | None = None) -> StarBody:
    """A body defined by radial samples on a grid, with interpolation."""
    vals = np.asarray(values, dtype=float)
    if vals.shape != (len(grid),):
        raise ConfigurationError("one radial value per grid node is required")
    if np.any(~np.isfinite(vals)) or np.any(vals <= 0):
        raise InvalidBodyError("radial samples must be positive and finite")

    if grid.scheme == "uniform-angle":
        angles = grid.angles
        ext_ang = np.concatenate([angles, [2.0 * math.pi]])
        ext_val = np.concatenate([vals, [vals[0]]])

        def radial(u, _a=ext_ang, _v=ext_val):
            theta = np.mod(np.arctan2(u[:, 1], u[:, 0]), 2.0 * math.pi)
            return np.interp(theta, _a, _v)

    else:
        from scipy.spatial import cKDTree

        tree = cKDTree(grid.nodes)

        def radial(u, _t=tree, _v=vals):
            _, idx = _t.query(u)
            return _v[idx]

    return StarBody(
        dimension=grid.dimension,
        kind="grid-sampled",
        label=label or f"grid-sampled({grid.describe()})",
        radial_fn=radial,
        symmetry=symmetry,
        convexity=convexity,
        params={"grid": grid, "values": vals},
    )


def custom_body(dimension: int, radial_fn, label: str = "custom",
                symmetry: bool | None = None, convexity: bool | None = None) -> StarBody:
    """A body given by an arbitrary vectorized radial evaluator."""
    return StarBody(
        dimension=dimension,
        kind="custom",
        label=label,
        radial_fn=radial_fn,
        symmetry=symmetry,
        convexity=convexity,
    )


def star_polygon(vertices) -> StarBody:
    """A (possibly nonconvex) polygon star-shaped about the origin, n = 2.

    Vertices must be ordered counterclockwise by angle; the radial function
    is evaluated exactly from the edge lines.
    """
    V = np.asarray(vertices, dtype=float)
    if V.ndim != 2 or V.shape[1] != 2 or V.shape[0] < 3:
        raise ConfigurationError("star_polygon expects an (m, 2) vertex array, m >= 3")
    ang = np.mod(np.arctan2(V[:, 1], V[:, 0]), 2.0 * math.pi)
    order = np.argsort(ang)
    V, ang = V[order], ang[order]
    nxt = np.roll(V, -1, axis=0)
    cross_pq = V[:, 0] * nxt[:, 1] - V[:, 1] * nxt[:, 0]
    if np.any(cross_pq <= 1e-14):
        raise InvalidBodyError("polygon edges must wind counterclockwise around the origin")
    edge = nxt - V

    def radial(u, _ang=ang, _edge=edge, _cpq=cross_pq):
        theta = np.mod(np.arctan2(u[:, 1], u[:, 0]), 2.0 * math.pi)
        k = np.searchsorted(_ang, theta, side="right") - 1
        k = np.mod(k, len(_ang))
        denom = u[:, 0] * _edge[k, 1] - u[:, 1] * _edge[k, 0]
        return _cpq[k] / denom

    return StarBody(
        dimension=2,
        kind="custom",
        label=f"star-polygon(m={V.shape[0]})",
        radial_fn=radial,
        symmetry=None,
        convexity=None,
        params={"vertices": V},
    )


def make_random_star(dimension: int, grid: SphericalGrid, seed: int, roughness: float,
                     symmetric: bool = False) -> StarBody:
    """A seeded smooth random star body rho = 1 + roughness * g, sup|g| <= 1.

    ``g`` is a short sum of plane-wave terms in the coordinates of ``u``;
    the symmetric flag restricts to even terms so the body is
    origin-symmetric.  Deterministic for a fixed seed.
    """
    if not 0.0 <= roughness < 1.0:
        raise ConfigurationError("roughness must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    k = 4
    freq = rng.normal(0.0, 1.5, size=(k, dimension))
    amp = rng.dirichlet(np.ones(k))
    phase = rng.uniform(0.0, 2.0 * math.pi, size=k)

    if symmetric:
        def g(u, _w=freq, _a=amp):
            return np.cos(u @ _w.T) @ _a
    else:
        def g(u, _w=freq, _a=amp, _d=phase):
            return np.sin(u @ _w.T + _d) @ _a

    r = float(roughness)

    def radial(u, _g=g, _r=r):
        return 1.0 + _r * _g(u)

    body = StarBody(
        dimension=dimension,
        kind="custom",
        label=f"random-star(seed={seed},rough={r:g},sym={symmetric})",
        radial_fn=radial,
        symmetry=True if symmetric else None,
        convexity=True if roughness == 0.0 else None,
        params={"seed": seed, "roughness": r, "symmetric": symmetric},
    )
    radial_eval(body, grid)  # validates positivity on the grid
    return body


# ---------------------------------------------------------------------------
# polytope machinery

def _boundedness_probes(n: int) -> np.ndarray:
    rng = np.random.default_rng(0)
    probes = rng.standard_normal((256 * n, n))
    probes /= np.linalg.norm(probes, axis=1)[:, None]
    axes = np.vstack([np.eye(n), -np.eye(n)])
    return np.vstack([probes, axes])


def _facets_symmetric(A: np.ndarray, b: np.ndarray) -> bool | None:
    """True when the facet list is invariant under x -> -x."""
    rows = np.hstack([A, b[:, None]])
    flipped = np.hstack([-A, b[:, None]])
    for row in flipped:
        if np.min(np.linalg.norm(rows - row, axis=1)) > 1e-9:
            return None
    return True


def polytope_vertices(body: StarBody) -> np.ndarray:
    """Vertices of a facet polytope (cached)."""
    if body.kind != "polytope":
        raise ConfigurationError("vertices are defined for facet polytopes")
    cache = body.params.setdefault("_cache", {})
    if "vertices" not in cache:
        from scipy.spatial import HalfspaceIntersection

        A, b = body.params["normals"], body.params["offsets"]
        halfspaces = np.hstack([A, -b[:, None]])
        hi = HalfspaceIntersection(halfspaces, np.zeros(body.dimension))
        verts = hi.intersections
        rounded = np.round(verts, 10)
        _, keep = np.unique(rounded, axis=0, return_index=True)
        cache["vertices"] = verts[np.sort(keep)]
    return cache["vertices"]


def _simplex_measure(points: np.ndarray) -> float:
    edges = points[1:] - points[0]
    gram = edges @ edges.T
    det = float(np.linalg.det(gram))
    return math.sqrt(max(det, 0.0)) / math.factorial(points.shape[0] - 1)


def polytope_facet_areas(body: StarBody) -> np.ndarray:
    """(n-1)-dimensional measure of each facet, in facet-list order (cached)."""
    cache = body.params.setdefault("_cache", {})
    if "facet_areas" not in cache:
        from scipy.spatial import ConvexHull

        A, b = body.params["normals"], body.params["offsets"]
        verts = polytope_vertices(body)
        hull = ConvexHull(verts)
        areas = np.zeros(A.shape[0])
        for simplex in hull.simplices:
            pts = verts[simplex]
            resid = np.abs(A @ pts.T - b[:, None]).max(axis=1)
            j = int(np.argmin(resid))
            if resid[j] > 1e-8 * max(1.0, abs(b[j])):
                raise InvalidBodyError("hull facet does not match any input facet")
            areas[j] += _simplex_measure(pts)
        vol_check = float(b @ areas) / body.dimension
        if abs(vol_check - hull.volume) > 1e-8 * hull.volume:
            raise InvalidBodyError("facet areas inconsistent with the polytope volume")
        cache["facet_areas"] = areas
        cache["volume"] = float(hull.volume)
    return cache["facet_areas"]


def exact_volume(body: StarBody) -> float | None:
    """Closed-form volume for analytic kinds, None otherwise."""
    n = body.dimension
    if body.kind == "ball":
        return unit_ball_volume(n) * body.params["radius"] ** n
    if body.kind == "ellipsoid":
        return unit_ball_volume(n) * abs(float(np.linalg.det(body.params["matrix"])))
    if body.kind == "polytope":
        polytope_facet_areas(body)
        return body.params["_cache"]["volume"]
    return None


# ---------------------------------------------------------------------------
# operations

def radial_eval(K: StarBody, grid: SphericalGrid, with_support: bool = False) -> BodyOnGrid:
    """Sample the radial (and optionally support) function on a grid."""
    if K.dimension != grid.dimension:
        raise ConfigurationError("body and grid dimensions differ")
    rho = K.radial(grid.nodes)
    if np.any(~np.isfinite(rho)) or np.any(rho <= 0):
        bad = int(np.argmin(np.isfinite(rho) & (rho > 0)))
        raise InvalidBodyError(
            f"{K.label}: radial value {rho[bad]} at node {bad} violates the star-body condition"
        )
    support = GridFunction(grid, support_eval(K, grid).values) if with_support else None
    return BodyOnGrid(body=K, grid=grid, rho=GridFunction(grid, rho), support=support)


def cloud_support(nodes: np.ndarray, rho: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Support of the point cloud {rho_j * u_j} at the target directions."""
    points = nodes * rho[:, None]
    out = np.empty(targets.shape[0])
    for start in range(0, targets.shape[0], _SUPPORT_CHUNK):
        block = targets[start:start + _SUPPORT_CHUNK]
        out[start:start + block.shape[0]] = (block @ points.T).max(axis=1)
    return out


def support_values(K: StarBody, grid: SphericalGrid, targets: np.ndarray) -> np.ndarray:
    """Support values h_K at explicit target directions.

    Analytic kinds use closed forms; other kinds use the support of the
    point cloud sampled on ``grid``, which equals the support of the convex
    hull of the samples (error O(mesh width^2) for smooth bodies).
    """
    where = np.atleast_2d(np.asarray(targets, dtype=float))
    if K.has_analytic_support:
        return np.asarray(K.support_fn(where), dtype=float)
    bog = radial_eval(K, grid)
    return cloud_support(grid.nodes, bog.rho.values, where)


def support_eval(K: StarBody, grid: SphericalGrid) -> GridFunction:
    """Support values h_K at the grid nodes."""
    return GridFunction(grid, support_values(K, grid, grid.nodes))


def polar(K: StarBody, grid: SphericalGrid) -> StarBody:
    """The polar body K° with rho = 1/h_K; always convex."""
    if K.kind == "ball":
        return ball(K.dimension, 1.0 / K.params["radius"])
    if K.kind == "ellipsoid":
        return ellipsoid(matrix=np.linalg.inv(K.params["matrix"]).T)
    if K.kind == "polytope":
        verts = polytope_vertices(K)
        norms = np.linalg.norm(verts, axis=1)
        return polytope(verts / norms[:, None], 1.0 / norms)
    if K.kind == "lp-ball" and K.params["p"] >= 1.0:
        p = K.params["p"]
        if p == 1.0:
            return cube(K.dimension, 1.0)
        q = p / (p - 1.0)
        return lp_ball(K.dimension, q)
    h = support_eval(K, grid).values
    if np.any(h <= 0):
        bad = int(np.argmin(h > 0))
        raise InvalidBodyError(f"support vanishes at node {bad}; origin not interior to conv K")
    return from_grid_values(grid, 1.0 / h, symmetry=K.symmetry, convexity=True,
                            label=f"polar({K.label})")


def convex_hull(K: StarBody, grid: SphericalGrid) -> StarBody:
    """The convex hull (K°)° via two polar applications (identity on convex K)."""
    if K.convexity is True:
        return K
    return polar(polar(K, grid), grid)


def transform(T: LinearMap | np.ndarray, K: StarBody) -> StarBody:
    """The image TK, with rho_TK(v) = rho_K(T^{-1}v / |T^{-1}v|) / |T^{-1}v|."""
    if not isinstance(T, LinearMap):
        T = LinearMap(T)
    if T.dimension != K.dimension:
        raise ConfigurationError("transform and body dimensions differ")
    M = T.matrix
    if K.kind == "ball":
        return ellipsoid(matrix=M * K.params["radius"])
    if K.kind == "ellipsoid":
        return ellipsoid(matrix=M @ K.params["matrix"])
    if K.kind == "polytope":
        A, b = K.params["normals"], K.params["offsets"]
        new_A = A @ np.linalg.inv(M)
        return polytope(new_A, b)

    Minv = np.linalg.inv(M)

    def radial(v, _K=K, _Mi=Minv):
        w = v @ _Mi.T
        norms = np.linalg.norm(w, axis=1)
        return _K.radial(w / norms[:, None]) / norms

    return StarBody(
        dimension=K.dimension,
        kind="custom",
        label=f"transform({K.label})",
        radial_fn=radial,
        symmetry=K.symmetry,
        convexity=K.convexity,
        params={"parent": K.label},
    )


def centroid(K: StarBody, grid: SphericalGrid) -> np.ndarray:
    """Centroid via polar coordinates: c_j = [∫ rho^{n+1} u_j dσ / (n+1)] / |K|."""
    n = K.dimension
    rho = radial_eval(K, grid).rho.values
    w = grid.weights
    volume = float(np.dot(w, rho**n)) / n
    moments = (w * rho ** (n + 1)) @ grid.nodes / (n + 1)
    return moments / volume


def centered_membership(K: StarBody, grid: SphericalGrid, which: str = "centroid",
                        tol: float = 1e-3) -> bool:
    """Numeric membership test for the polar-centering classes.

    ``which="centroid"`` tests whether the centroid sits at the origin
    (norm at most tol * vrad(K)); ``which="santalo"`` applies the same test
    to the centroid of the polar body.  Exact membership is not decidable
    numerically; the threshold is configurable.
    """
    if which == "santalo":
        return centered_membership(polar(K, grid), grid, "centroid", tol)
    if which != "centroid":
        raise ConfigurationError("which must be 'centroid' or 'santalo'")
    n = K.dimension
    rho = radial_eval(K, grid).rho.values
    vrad = (float(np.dot(grid.weights, rho**n)) / n / unit_ball_volume(n)) ** (1.0 / n)
    return bool(np.linalg.norm(centroid(K, grid)) <= tol * vrad)
