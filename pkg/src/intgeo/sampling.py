"""Samplers for the product measure on the motion group and for affine flats.

A group element is g = k exp(X) with k Haar on O(n) (or a chosen component),
X Gaussian on Sym(n), and a translation t. The translation marginal is
Lebesgue, so estimators restrict t to the box hull of the translations that
can make M meet g L (the support of the integrand) and multiply the box
volume back in as an importance factor; everything outside contributes zero.

Affine j-flats E = span(U) + offset carry the rigid-motion invariant measure
normalized so that the flats meeting the unit ball have total mass
kappa_{n-j}; the sampler realizes it as Haar directions times a uniform
offset in a (n-j)-ball window of radius R, weighted by kappa_{n-j} R^{n-j}.
The window must dominate sup_{x in M} ||x|| or flats meeting M are missed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import bodies as bd
from . import linprog
from .symmetric import expm_sym, sample_gaussian_sym, sample_haar_orthogonal
from .volumes import kappa


@dataclass
class GroupElement:
    """g = k exp(X) plus translation t; k orthogonal, X symmetric."""

    k: np.ndarray
    X: np.ndarray
    t: np.ndarray

    @property
    def linear(self) -> np.ndarray:
        return self.k @ expm_sym(self.X)

    def as_affine_map(self) -> bd.AffineMap:
        return bd.AffineMap(self.linear, self.t)


@dataclass
class AffineFlat:
    """Affine j-flat {offset + basis @ s}; basis columns orthonormal, offset
    orthogonal to the span (the canonical representative)."""

    basis: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        self.basis = np.asarray(self.basis, dtype=float)
        self.offset = np.asarray(self.offset, dtype=float)
        if self.basis.ndim != 2:
            raise ValueError("basis must be (n, j)")
        n, j = self.basis.shape
        if j:
            if np.max(np.abs(self.basis.T @ self.basis - np.eye(j))) > 1e-9:
                raise ValueError("flat basis must be orthonormal")
            if np.max(np.abs(self.basis.T @ self.offset)) > 1e-8:
                raise ValueError("offset must lie in the orthogonal complement")

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def translation_region(M: bd.ConvexBody, moved: bd.ConvexBody) -> tuple[np.ndarray, np.ndarray]:
    """Axis box containing every t with M meeting (moved + t).

    That set is the Minkowski difference body M + (-moved); the box comes
    from 2n support evaluations, hi_k = h_M(e_k) + h_moved(-e_k).
    """
    n = M.dim
    lo = np.empty(n)
    hi = np.empty(n)
    e = np.zeros(n)
    for k in range(n):
        e[k] = 1.0
        hp = bd.support(M, e)
        hm = bd.support(moved, e)
        e[k] = -1.0
        hi[k] = hp + bd.support(moved, e)
        lo[k] = -(bd.support(M, e) + hm)
        e[k] = 0.0
    return lo, hi


def sample_group_element(M: bd.ConvexBody, L: bd.ConvexBody,
                         rng: np.random.Generator, component: str = "full",
                         compact: bool = False,
                         strata: int = 0) -> tuple[GroupElement, float]:
    """Draw one group element with t uniform in the translation box of (M, gL).

    Returns (g, region_volume); region_volume is the importance factor the
    caller must multiply into its integrand. With compact=True the symmetric
    part is pinned to zero (rigid motions only).
    """
    n = M.dim
    if L.dim != n:
        raise ValueError("bodies must share a dimension")
    k = sample_haar_orthogonal(n, rng, component=component)
    X = np.zeros((n, n)) if compact else sample_gaussian_sym(n, rng, strata=strata)
    moved = bd.affine_image(L, bd.AffineMap(k @ expm_sym(X), np.zeros(n)))
    lo, hi = translation_region(M, moved)
    t = lo + rng.random(n) * (hi - lo)
    return GroupElement(k, X, t), float(np.prod(hi - lo))


def sample_affine_flat(n: int, j: int, rng: np.random.Generator,
                       window_radius: float) -> AffineFlat:
    """A random j-flat from the normalized invariant measure, windowed.

    The direction is the span of the first j columns of a Haar orthogonal
    matrix; the offset is uniform in the (n-j)-ball of the window radius
    inside the orthogonal complement.
    """
    if not 0 <= j <= n:
        raise ValueError("need 0 <= j <= n")
    if window_radius <= 0:
        raise ValueError("window radius must be positive")
    Q = sample_haar_orthogonal(n, rng)
    U = Q[:, :j]
    W = Q[:, j:]
    d = n - j
    if d == 0:
        return AffineFlat(U, np.zeros(n))
    z = rng.standard_normal(d)
    z /= max(np.linalg.norm(z), 1e-300)
    r = window_radius * rng.random() ** (1.0 / d)
    return AffineFlat(U, W @ (r * z))


def flat_weight(n: int, j: int, window_radius: float) -> float:
    """Importance mass of the windowed flat measure, kappa_{n-j} R^{n-j}."""
    return kappa(n - j) * window_radius ** (n - j)


def flat_hits(body: bd.ConvexBody, flat: AffineFlat, tol: float = 1e-9) -> bool:
    """Whether the flat meets the body (exact per representation).

    Balls compare the orthogonal distance to the radius, ellipsoids minimize
    the gauge quadratic over the flat, polytopes solve an LP in the flat
    coordinates.
    """
    U = flat.basis
    off = flat.offset
    n = U.shape[0]
    j = U.shape[1]
    if j == n:
        return True
    if isinstance(body, bd.Ball):
        w = body.center - off
        perp = w - U @ (U.T @ w) if j else w
        return float(np.linalg.norm(perp)) <= body.radius + tol
    if isinstance(body, bd.Ellipsoid):
        D = body.axes / body.semiaxes  # rows of D^T are scaled axis coords
        w = off - body.center
        if j == 0:
            val = np.linalg.norm(D.T @ w) ** 2
        else:
            A = D.T @ U
            b = D.T @ w
            s, *_ = np.linalg.lstsq(A, -b, rcond=None)
            val = float(np.linalg.norm(A @ s + b) ** 2)
        return val <= 1.0 + tol
    if isinstance(body, bd.HPolytope):
        if j == 0:
            return bool(bd.membership(body, off, tol))
        A_ub = body.normals @ U
        b_ub = body.offsets - body.normals @ off
        return linprog.feasible(A_ub, b_ub) is not None
    if isinstance(body, bd.VPolytope):
        V = body.vertices
        m = V.shape[0]
        if j == 0:
            return bool(bd.membership(body, off, tol))
        # convex weights w and flat coordinates s with V^T w = off + U s
        A_eq = np.zeros((n + 1, m + 2 * j))
        A_eq[:n, :m] = V.T
        A_eq[:n, m:m + j] = -U
        A_eq[:n, m + j:] = U
        A_eq[n, :m] = 1.0
        b_eq = np.concatenate([off, [1.0]])
        return linprog.feasible(None, None, nonneg=True, A_eq=A_eq, b_eq=b_eq) is not None
    raise TypeError(f"unsupported body {type(body).__name__}")
