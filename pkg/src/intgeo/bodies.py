"""Convex bodies in R^n and the exact predicates the estimators rely on.

Four representations are supported: balls, ellipsoids (center + orthonormal
principal axes + semiaxes), H-polytopes (bounded intersections of halfspaces)
and V-polytopes (convex hulls of finite vertex sets). Emptiness, membership,
separation and distance queries are exact up to the stated tolerance TOL;
nothing here is sampled. Polytope distance queries require n <= 3, which is
all the Monte Carlo layers above ever ask for.

Bodies serialize to plain JSON dicts with a "type" tag so the CLI and the
cache files can round-trip them; see body_to_dict / body_from_dict.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from . import linprog

TOL = 1e-9


class EmptyBody:
    """Marker for an empty intersection; evaluates false and has no points."""

    def __repr__(self) -> str:
        return "EmptyBody()"

    def __bool__(self) -> bool:
        return False


EMPTY = EmptyBody()


@dataclass
class AffineMap:
    """x |-> matrix @ x + offset with an invertible linear part."""

    matrix: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=float)
        self.offset = np.asarray(self.offset, dtype=float)

    def __call__(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        return points @ self.matrix.T + self.offset


@dataclass
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        self.center = np.atleast_1d(np.asarray(self.center, dtype=float))
        self.radius = float(self.radius)
        if self.radius <= 0:
            raise ValueError("ball radius must be positive")

    @property
    def dim(self) -> int:
        return self.center.size


@dataclass
class Ellipsoid:
    """{center + axes @ diag(semiaxes) @ z : ||z|| <= 1}; axes columns orthonormal."""

    center: np.ndarray
    axes: np.ndarray
    semiaxes: np.ndarray

    def __post_init__(self):
        self.center = np.atleast_1d(np.asarray(self.center, dtype=float))
        self.axes = np.asarray(self.axes, dtype=float)
        self.semiaxes = np.atleast_1d(np.asarray(self.semiaxes, dtype=float))
        n = self.center.size
        if self.axes.shape != (n, n) or self.semiaxes.shape != (n,):
            raise ValueError("inconsistent ellipsoid dimensions")
        if np.any(self.semiaxes <= 0):
            raise ValueError("semiaxes must be positive")
        if np.max(np.abs(self.axes.T @ self.axes - np.eye(n))) > 1e-10:
            raise ValueError("axes must be orthonormal to 1e-10")

    @property
    def dim(self) -> int:
        return self.center.size


@dataclass
class HPolytope:
    """{x : normals @ x <= offsets}, verified nonempty and bounded on construction.

    Rows are normalized to unit length so TOL acts as a geometric distance.
    Pass validate=False only for systems already known feasible and bounded
    (e.g. the output of intersect_hrep on two valid polytopes).
    """

    normals: np.ndarray
    offsets: np.ndarray
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        self.normals = np.atleast_2d(np.asarray(self.normals, dtype=float))
        self.offsets = np.atleast_1d(np.asarray(self.offsets, dtype=float))
        if self.normals.shape[0] != self.offsets.size:
            raise ValueError("normals/offsets length mismatch")
        norms = np.linalg.norm(self.normals, axis=1)
        if np.any(norms < TOL):
            raise ValueError("zero normal row in halfspace system")
        self.normals = self.normals / norms[:, None]
        self.offsets = self.offsets / norms
        if self.validate:
            if linprog.feasible(self.normals, self.offsets) is None:
                raise ValueError("halfspace system is infeasible")
            n = self.normals.shape[1]
            for k in range(n):
                u = np.zeros(n)
                for s in (1.0, -1.0):
                    u[k] = s
                    try:
                        linprog.support_hrep(self.normals, self.offsets, u)
                    except ValueError:
                        raise ValueError("halfspace system is unbounded")
                u[k] = 0.0

    @property
    def dim(self) -> int:
        return self.normals.shape[1]


@dataclass
class VPolytope:
    vertices: np.ndarray

    def __post_init__(self):
        self.vertices = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        if self.vertices.size == 0:
            raise ValueError("a V-polytope needs at least one vertex")

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]


ConvexBody = Ball | Ellipsoid | HPolytope | VPolytope


# ---------------------------------------------------------------------------
# membership and support


def contains_points(body: ConvexBody, points: np.ndarray, tol: float = TOL) -> np.ndarray:
    """Vectorized membership test; points has shape (m, n), result (m,) bool."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if isinstance(body, Ball):
        return np.linalg.norm(points - body.center, axis=1) <= body.radius + tol
    if isinstance(body, Ellipsoid):
        local = (points - body.center) @ body.axes / body.semiaxes
        return np.einsum("ij,ij->i", local, local) <= (1.0 + tol) ** 2
    if isinstance(body, HPolytope):
        return np.all(points @ body.normals.T <= body.offsets + tol, axis=1)
    if isinstance(body, VPolytope):
        eqs = _hull_equations(body)
        if eqs is not None:
            return np.all(points @ eqs[:, :-1].T + eqs[:, -1] <= tol, axis=1)
        return np.array([_vpolytope_member_lp(body, p, tol) for p in points])
    raise TypeError(f"unsupported body {type(body).__name__}")


def membership(body: ConvexBody, x: np.ndarray, tol: float = TOL) -> bool:
    """Whether x lies in the body, with slack tol on the defining inequalities.

    V-polytope membership is decided by linear feasibility over convex
    combination weights, so it stays exact for degenerate (flat) vertex sets.
    """
    x = np.asarray(x, dtype=float)
    if isinstance(body, VPolytope):
        return _vpolytope_member_lp(body, x, tol)
    return bool(contains_points(body, x[None, :], tol)[0])


def _vpolytope_member_lp(body: VPolytope, x: np.ndarray, tol: float) -> bool:
    V = body.vertices
    m, n = V.shape
    scale = max(1.0, float(np.max(np.abs(V))))
    A_eq = np.vstack([V.T / scale, np.ones((1, m))])
    b_eq = np.concatenate([np.asarray(x, dtype=float) / scale, [1.0]])
    w = linprog.feasible(None, None, nonneg=True, A_eq=A_eq, b_eq=b_eq)
    if w is not None:
        return True
    # retry with slack for points within tol of the hull boundary
    if tol > 0:
        d = distance_to_body(body, x[None, :])[0] if n <= 3 else None
        if d is not None:
            return d <= tol
    return False


def support(body: ConvexBody, u: np.ndarray) -> float:
    """Support function h(u) = max_{x in body} <u, x>."""
    u = np.asarray(u, dtype=float)
    if isinstance(body, Ball):
        return float(u @ body.center + body.radius * np.linalg.norm(u))
    if isinstance(body, Ellipsoid):
        return float(u @ body.center + np.linalg.norm(body.semiaxes * (u @ body.axes)))
    if isinstance(body, VPolytope):
        return float(np.max(body.vertices @ u))
    if isinstance(body, HPolytope):
        val, _ = linprog.support_hrep(body.normals, body.offsets, u)
        return val
    raise TypeError(f"unsupported body {type(body).__name__}")


def bounding_box(body: ConvexBody) -> tuple[np.ndarray, np.ndarray]:
    """Axis-aligned (lower, upper) corners via 2n support evaluations."""
    n = body.dim
    lo = np.empty(n)
    hi = np.empty(n)
    e = np.zeros(n)
    for k in range(n):
        e[k] = 1.0
        hi[k] = support(body, e)
        e[k] = -1.0
        lo[k] = -support(body, e)
        e[k] = 0.0
    return lo, hi


def outer_radius(body: ConvexBody) -> float:
    """An upper bound on max ||x|| over the body (exact for V-polytopes)."""
    if isinstance(body, Ball):
        return float(np.linalg.norm(body.center) + body.radius)
    if isinstance(body, Ellipsoid):
        return float(np.linalg.norm(body.center) + np.max(body.semiaxes))
    if isinstance(body, VPolytope):
        return float(np.max(np.linalg.norm(body.vertices, axis=1)))
    lo, hi = bounding_box(body)
    corner = np.maximum(np.abs(lo), np.abs(hi))
    return float(np.linalg.norm(corner))


# ---------------------------------------------------------------------------
# affine images


def affine_image(body: ConvexBody, amap: AffineMap) -> ConvexBody:
    """Image of the body under x |-> A x + t; A must be invertible.

    A ball maps back to a Ball when A is a scalar multiple of an orthogonal
    matrix and to an Ellipsoid otherwise. Halfspace systems transform by
    (u, alpha) |-> (A^-T u, alpha + <A^-T u, t>).
    """
    A = amap.matrix
    t = amap.offset
    n = A.shape[0]
    if A.shape != (n, n) or t.shape != (n,):
        raise ValueError("affine map has inconsistent shapes")
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[-1] <= 1e-12 * max(1.0, sv[0]):
        raise ValueError("affine map must have an invertible linear part")

    if isinstance(body, Ball):
        gram = A.T @ A
        lam2 = gram[0, 0]
        if np.max(np.abs(gram - lam2 * np.eye(n))) <= 1e-12 * max(1.0, lam2):
            return Ball(A @ body.center + t, body.radius * np.sqrt(lam2))
        U, s, _ = np.linalg.svd(A)
        return Ellipsoid(A @ body.center + t, U, body.radius * s)
    if isinstance(body, Ellipsoid):
        U, s, _ = np.linalg.svd(A @ (body.axes * body.semiaxes))
        return Ellipsoid(A @ body.center + t, U, s)
    if isinstance(body, HPolytope):
        new_normals = np.linalg.solve(A.T, body.normals.T).T
        new_offsets = body.offsets + new_normals @ t
        return HPolytope(new_normals, new_offsets, validate=False)
    if isinstance(body, VPolytope):
        return VPolytope(amap(body.vertices))
    raise TypeError(f"unsupported body {type(body).__name__}")


# ---------------------------------------------------------------------------
# intersections and separation


def intersect_hrep(a: HPolytope, b: HPolytope) -> HPolytope | EmptyBody:
    """Intersection of two H-polytopes, or EMPTY when infeasible.

    Degenerate but nonempty intersections (shared faces) are kept as bodies
    with zero volume rather than collapsed to EMPTY.
    """
    normals = np.vstack([a.normals, b.normals])
    offsets = np.concatenate([a.offsets, b.offsets])
    res = linprog.signed_margin(normals, offsets)
    if res is not None and res[0] < -TOL:
        return EMPTY
    if res is None and linprog.feasible(normals, offsets) is None:
        return EMPTY
    return HPolytope(normals, offsets, validate=False)


def separating_hyperplane(a: VPolytope, b: VPolytope):
    """A hyperplane (u, alpha) with a in {<x,u> <= alpha} and b in {<x,u> >= alpha}.

    Returns None when the polytopes overlap with nonempty interior. Touching
    bodies are separable and yield a supporting hyperplane. Solved as a
    max-margin LP over 2n sign-normalized subproblems (u_k fixed to +-1) so
    the trivial u = 0 never wins; the margin objective is homogeneous in u,
    hence some maximizer attains the box bound and the enumeration is exact.
    """
    if not isinstance(a, VPolytope) or not isinstance(b, VPolytope):
        raise TypeError("separating_hyperplane expects two V-polytopes")
    n = a.dim
    VA, VB = a.vertices, b.vertices
    best = None
    for k in range(n):
        for sign in (1.0, -1.0):
            # variables (u, alpha, delta), maximize delta
            rows = []
            rhs = []
            for v in VA:  # <v,u> - alpha + delta <= 0
                rows.append(np.concatenate([v, [-1.0, 1.0]]))
                rhs.append(0.0)
            for v in VB:  # -<v,u> + alpha + delta <= 0
                rows.append(np.concatenate([-v, [1.0, 1.0]]))
                rhs.append(0.0)
            for l in range(n):
                e = np.zeros(n + 2)
                e[l] = 1.0
                rows.append(e.copy())
                rhs.append(1.0)
                e[l] = -1.0
                rows.append(e)
                rhs.append(1.0)
            A_eq = np.zeros((1, n + 2))
            A_eq[0, k] = 1.0
            c = np.zeros(n + 2)
            c[-1] = -1.0
            res = linprog.solve_lp(c, A_ub=np.array(rows), b_ub=np.array(rhs),
                                   A_eq=A_eq, b_eq=np.array([sign]))
            if res.status != "optimal":
                continue
            delta = res.x[-1]
            if best is None or delta > best[0]:
                best = (delta, res.x[:n].copy(), res.x[n])
    if best is None or best[0] < -TOL:
        return None
    delta, u, alpha = best
    nrm = np.linalg.norm(u)
    return u / nrm, float(alpha / nrm)


def _to_unit_ball_map(e: Ellipsoid) -> AffineMap:
    # T(x) = diag(1/a) U^T (x - c) sends the ellipsoid onto the unit ball
    A = (e.axes / e.semiaxes).T
    return AffineMap(A, -A @ e.center)


def intersects(a: ConvexBody, b: ConvexBody, tol: float = TOL) -> bool:
    """Exact emptiness test for the intersection of two bodies.

    Ellipsoid pairs reduce to ball-vs-ellipsoid through the affine map that
    sends one of them onto the unit ball; polytope pairs are LP feasibility.
    Mixed ellipsoid/polytope queries need n <= 3 (polytope distance).
    """
    order = {Ball: 0, Ellipsoid: 1, HPolytope: 2, VPolytope: 3}
    if order[type(a)] > order[type(b)]:
        a, b = b, a
    if isinstance(a, Ball) and isinstance(b, Ball):
        return np.linalg.norm(a.center - b.center) <= a.radius + b.radius + tol
    if isinstance(a, Ball) and isinstance(b, Ellipsoid):
        return distance_to_body(b, a.center[None, :])[0] <= a.radius + tol
    if isinstance(a, Ellipsoid) and isinstance(b, Ellipsoid):
        amap = _to_unit_ball_map(a)
        return intersects(Ball(np.zeros(a.dim), 1.0), affine_image(b, amap), tol)
    if isinstance(a, Ball) and isinstance(b, (HPolytope, VPolytope)):
        return distance_to_body(b, a.center[None, :])[0] <= a.radius + tol
    if isinstance(a, Ellipsoid):
        amap = _to_unit_ball_map(a)
        return intersects(Ball(np.zeros(a.dim), 1.0), affine_image(b, amap), tol)
    if isinstance(a, HPolytope) and isinstance(b, HPolytope):
        return not isinstance(intersect_hrep(a, b), EmptyBody)
    if isinstance(a, HPolytope) and isinstance(b, VPolytope):
        W = b.vertices
        m = W.shape[0]
        A_ub = np.hstack([a.normals @ W.T])  # rows: N (V^T w) <= o
        A_eq = np.ones((1, m))
        return linprog.feasible(A_ub, a.offsets, nonneg=True,
                                A_eq=A_eq, b_eq=np.array([1.0])) is not None
    if isinstance(a, VPolytope) and isinstance(b, VPolytope):
        V, W = a.vertices, b.vertices
        ma, mb = V.shape[0], W.shape[0]
        n = a.dim
        A_eq = np.zeros((n + 2, ma + mb))
        A_eq[:n, :ma] = V.T
        A_eq[:n, ma:] = -W.T
        A_eq[n, :ma] = 1.0
        A_eq[n + 1, ma:] = 1.0
        b_eq = np.concatenate([np.zeros(n), [1.0, 1.0]])
        return linprog.feasible(None, None, nonneg=True, A_eq=A_eq, b_eq=b_eq) is not None
    raise TypeError("unsupported body pair")


# ---------------------------------------------------------------------------
# distances


def distance_to_body(body: ConvexBody, points: np.ndarray) -> np.ndarray:
    """Euclidean distance from each point to the body (0 for interior points).

    Balls are analytic, ellipsoids use a bisection on the Lagrange multiplier
    of the closest-point problem, polytopes project onto faces (n <= 3).
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    if isinstance(body, Ball):
        return np.maximum(np.linalg.norm(points - body.center, axis=1) - body.radius, 0.0)
    if isinstance(body, Ellipsoid):
        return _ellipsoid_distance(body, points)
    if isinstance(body, VPolytope):
        return _vpolytope_distance(body, points)
    if isinstance(body, HPolytope):
        return _vpolytope_distance(as_vpolytope(body), points)
    raise TypeError(f"unsupported body {type(body).__name__}")


def _ellipsoid_distance(e: Ellipsoid, points: np.ndarray) -> np.ndarray:
    P = (points - e.center) @ e.axes
    a2 = e.semiaxes**2
    gauge2 = np.einsum("ij,j->i", P * P, 1.0 / a2)
    out = np.zeros(points.shape[0])
    mask = gauge2 > 1.0
    if not np.any(mask):
        return out
    Q = P[mask]
    # root of f(mu) = sum a_i^2 q_i^2 / (a_i^2 + mu)^2 - 1 in mu > 0
    lo = np.zeros(Q.shape[0])
    hi = np.max(e.semiaxes) * np.linalg.norm(Q, axis=1) * 2.0 + 1e-30
    for _ in range(90):
        mid = 0.5 * (lo + hi)
        f = np.einsum("ij,ij->i", a2 * Q * Q, 1.0 / (a2 + mid[:, None]) ** 2)
        high = f > 1.0
        lo = np.where(high, mid, lo)
        hi = np.where(high, hi, mid)
    mu = 0.5 * (lo + hi)
    diff = mu[:, None] * Q / (a2 + mu[:, None])
    out[mask] = np.linalg.norm(diff, axis=1)
    return out


def _segment_distance(p0: np.ndarray, p1: np.ndarray, points: np.ndarray) -> np.ndarray:
    d = p1 - p0
    denom = float(d @ d)
    if denom < 1e-30:
        return np.linalg.norm(points - p0, axis=1)
    t = np.clip((points - p0) @ d / denom, 0.0, 1.0)
    return np.linalg.norm(points - (p0 + t[:, None] * d), axis=1)


def _triangle_distance(tri: np.ndarray, points: np.ndarray) -> np.ndarray:
    a, b, c = tri
    nrm = np.cross(b - a, c - a)
    nn = float(nrm @ nrm)
    if nn < 1e-30:
        return np.minimum(_segment_distance(a, b, points),
                          np.minimum(_segment_distance(b, c, points),
                                     _segment_distance(a, c, points)))
    w = points - a
    dist_plane = w @ nrm / np.sqrt(nn)
    proj = points - dist_plane[:, None] * nrm / np.sqrt(nn)
    # barycentric test of the projections
    v0, v1 = b - a, c - a
    v2 = proj - a
    d00, d01, d11 = v0 @ v0, v0 @ v1, v1 @ v1
    d20, d21 = v2 @ v0, v2 @ v1
    den = d00 * d11 - d01 * d01
    s = (d11 * d20 - d01 * d21) / den
    t = (d00 * d21 - d01 * d20) / den
    inside = (s >= -1e-12) & (t >= -1e-12) & (s + t <= 1 + 1e-12)
    edge = np.minimum(_segment_distance(a, b, points),
                      np.minimum(_segment_distance(b, c, points),
                                 _segment_distance(a, c, points)))
    return np.where(inside, np.abs(dist_plane), edge)


def _hull_equations(body: VPolytope) -> np.ndarray | None:
    """Facet equations [normal | offset] with <n,x> + offset <= 0 inside, or None."""
    if body.vertices.shape[0] <= body.dim:
        return None
    try:
        return ConvexHull(body.vertices).equations
    except QhullError:
        return None


def _vpolytope_distance(body: VPolytope, points: np.ndarray) -> np.ndarray:
    V = body.vertices
    n = body.dim
    if n > 3:
        raise NotImplementedError("polytope distance supported for n <= 3")
    if V.shape[0] == 1:
        return np.linalg.norm(points - V[0], axis=1)
    # rank-deficient vertex sets degrade to segments / planar fans
    centered = V - V.mean(axis=0)
    rank = np.linalg.matrix_rank(centered, tol=1e-10)
    if rank == 0:
        return np.linalg.norm(points - V[0], axis=1)
    if rank == 1:
        d = centered[np.argmax(np.linalg.norm(centered, axis=1))]
        proj = centered @ d
        return _segment_distance(V[np.argmin(proj)], V[np.argmax(proj)], points)
    if n == 1:
        lo, hi = V.min(), V.max()
        return np.maximum.reduce([lo - points[:, 0], points[:, 0] - hi, np.zeros(len(points))])
    if n == 2:
        hull = ConvexHull(V)
        order = hull.vertices
        inside = np.all(points @ hull.equations[:, :-1].T + hull.equations[:, -1] <= TOL, axis=1)
        dist = np.full(points.shape[0], np.inf)
        for i in range(len(order)):
            p0, p1 = V[order[i]], V[order[(i + 1) % len(order)]]
            dist = np.minimum(dist, _segment_distance(p0, p1, points))
        return np.where(inside, 0.0, dist)
    if rank == 2:
        # flat polytope in R^3: fan over its planar hull
        u, s, vt = np.linalg.svd(centered, full_matrices=False)
        plane = vt[:2]
        coords = centered @ plane.T
        hull2 = ConvexHull(coords)
        order = hull2.vertices
        dist = np.full(points.shape[0], np.inf)
        for i in range(1, len(order) - 1):
            tri = np.array([V[order[0]], V[order[i]], V[order[i + 1]]])
            dist = np.minimum(dist, _triangle_distance(tri, points))
        return dist
    hull = ConvexHull(V)
    inside = np.all(points @ hull.equations[:, :-1].T + hull.equations[:, -1] <= TOL, axis=1)
    dist = np.full(points.shape[0], np.inf)
    for simplex in hull.simplices:
        dist = np.minimum(dist, _triangle_distance(V[simplex], points))
    return np.where(inside, 0.0, dist)


def polygon_boundary_distance(body: VPolytope, points: np.ndarray) -> np.ndarray:
    """Distance to the boundary of a full-dimensional polygon (n = 2), any side."""
    if body.dim != 2:
        raise ValueError("boundary distance implemented for polygons only")
    V = body.vertices
    hull = ConvexHull(V)
    order = hull.vertices
    points = np.atleast_2d(points)
    dist = np.full(points.shape[0], np.inf)
    for i in range(len(order)):
        p0, p1 = V[order[i]], V[order[(i + 1) % len(order)]]
        dist = np.minimum(dist, _segment_distance(p0, p1, points))
    return dist


# ---------------------------------------------------------------------------
# diameter, Minkowski sums, conversions


def diameter(body: ConvexBody) -> float:
    """Exact diameter. H-polytopes are vertex-enumerated first (needs n <= 3);
    for higher-dimensional halfspace systems use diameter_upper_bound."""
    if isinstance(body, Ball):
        return 2.0 * body.radius
    if isinstance(body, Ellipsoid):
        return 2.0 * float(np.max(body.semiaxes))
    if isinstance(body, HPolytope):
        body = as_vpolytope(body)
    V = body.vertices
    diff = V[:, None, :] - V[None, :, :]
    return float(np.sqrt(np.max(np.einsum("ijk,ijk->ij", diff, diff))))


def diameter_upper_bound(body: ConvexBody) -> float:
    """Bounding-box diagonal; an upper bound valid in any dimension."""
    lo, hi = bounding_box(body)
    return float(np.linalg.norm(hi - lo))


def minkowski_sum_vpolytopes(a: VPolytope, b: VPolytope) -> VPolytope:
    """Hull of all pairwise vertex sums."""
    sums = (a.vertices[:, None, :] + b.vertices[None, :, :]).reshape(-1, a.dim)
    try:
        hull = ConvexHull(sums)
        return VPolytope(sums[hull.vertices])
    except QhullError:
        return VPolytope(np.unique(np.round(sums, 12), axis=0))


def as_vpolytope(body: HPolytope) -> VPolytope:
    """Vertex enumeration for n <= 3 by solving all n-row subsystems."""
    from itertools import combinations

    N, o = body.normals, body.offsets
    m, n = N.shape
    if n > 3:
        raise NotImplementedError("vertex enumeration supported for n <= 3")
    verts = []
    for idx in combinations(range(m), n):
        sub = N[list(idx)]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        x = np.linalg.solve(sub, o[list(idx)])
        if np.all(N @ x <= o + 1e-7):
            verts.append(x)
    if not verts:
        raise ValueError("halfspace system yielded no vertices")
    arr = np.array(verts)
    _, keep = np.unique(np.round(arr, 9), axis=0, return_index=True)
    return VPolytope(arr[sorted(keep)])


def random_polytope(n: int, k: int, rng: np.random.Generator,
                    radius: float = 1.0, center=None) -> VPolytope:
    """Hull of k points drawn uniformly from a ball, handy for randomized tests."""
    z = rng.standard_normal((k, n))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    r = radius * rng.random(k) ** (1.0 / n)
    pts = z * r[:, None]
    if center is not None:
        pts = pts + np.asarray(center, dtype=float)
    try:
        hull = ConvexHull(pts)
        return VPolytope(pts[hull.vertices])
    except QhullError:
        return VPolytope(pts)


# ---------------------------------------------------------------------------
# serialization


def body_to_dict(body: ConvexBody) -> dict:
    if isinstance(body, Ball):
        return {"type": "ball", "center": body.center.tolist(), "radius": body.radius}
    if isinstance(body, Ellipsoid):
        return {"type": "ellipsoid", "center": body.center.tolist(),
                "axes": body.axes.T.tolist(), "semiaxes": body.semiaxes.tolist()}
    if isinstance(body, HPolytope):
        return {"type": "hpolytope", "normals": body.normals.tolist(),
                "offsets": body.offsets.tolist()}
    if isinstance(body, VPolytope):
        return {"type": "vpolytope", "vertices": body.vertices.tolist()}
    raise TypeError(f"unsupported body {type(body).__name__}")


def body_from_dict(data: dict) -> ConvexBody:
    """Inverse of body_to_dict; raises ValueError on malformed input.

    Ellipsoid "axes" is the list of principal axis vectors (rows of the JSON
    array), matching body_to_dict.
    """
    if not isinstance(data, dict) or "type" not in data:
        raise ValueError("body description must be a dict with a 'type' key")
    kind = data["type"]
    try:
        if kind == "ball":
            return Ball(np.array(data["center"], dtype=float), float(data["radius"]))
        if kind == "ellipsoid":
            axes = np.array(data["axes"], dtype=float).T
            return Ellipsoid(np.array(data["center"], dtype=float), axes,
                             np.array(data["semiaxes"], dtype=float))
        if kind == "hpolytope":
            return HPolytope(np.array(data["normals"], dtype=float),
                             np.array(data["offsets"], dtype=float))
        if kind == "vpolytope":
            return VPolytope(np.array(data["vertices"], dtype=float))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed {kind} description: {exc}") from exc
    raise ValueError(f"unknown body type {kind!r}")


def load_body(path: str) -> ConvexBody:
    with open(path) as fh:
        return body_from_dict(json.load(fh))


def unit_ball(n: int) -> Ball:
    return Ball(np.zeros(n), 1.0)


def cube(n: int, side: float = 1.0, centered: bool = False) -> HPolytope:
    """Axis-aligned cube [0, side]^n, or [-side/2, side/2]^n when centered."""
    normals = np.vstack([np.eye(n), -np.eye(n)])
    if centered:
        offsets = np.full(2 * n, side / 2.0)
    else:
        offsets = np.concatenate([np.full(n, side), np.zeros(n)])
    return HPolytope(normals, offsets, validate=False)
