"""Intrinsic volumes: closed forms, quadrature for ellipsoids, and MC fits.

V_j is normalized so that it is intrinsic (independent of the ambient
dimension): V_0 = Euler characteristic, V_1 = a multiple of mean width,
V_{n-1} = half surface area, V_n = volume. For the unit ball,
V_j(B^n) = binom(n, j) kappa_n / kappa_{n-j} with kappa_j the volume of B^j.

Ellipsoid intrinsic volumes follow the principal-axis representation

    V_j(E(a)) = kappa_j * sum_i a_i^2 e_{j-1}(a^2 without i) * I_i,
    I_i = int_0^inf t^{j-1} dt / ((a_i^2 t^2 + 1) prod_l sqrt(a_l^2 t^2 + 1)),

evaluated two ways: an adaptive quadrature on the substitution t = u/(1-u)
(the reference, absolute tolerance 1e-10 after scale normalization), and a
fixed trapezoid grid in s = log t used by the million-sample Monte Carlo
layers. The two agree to ~1e-10 relative on the spectra the samplers produce
and a regression test keeps them pinned together.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.spatial import ConvexHull

from . import bodies as bd
from .estimation import EstimatorResult, RunningMean, resolve_rng


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to converge (pathological axis ratios)."""


def kappa(j: int) -> float:
    """Volume of the unit ball in R^j; kappa_0 = 1."""
    if j < 0:
        raise ValueError("dimension must be nonnegative")
    return math.pi ** (j / 2.0) / math.gamma(j / 2.0 + 1.0)


def intrinsic_volume_ball(n: int, j: int, radius: float = 1.0) -> float:
    if not 0 <= j <= n:
        raise ValueError("need 0 <= j <= n")
    return math.comb(n, j) * kappa(n) / kappa(n - j) * radius**j


def intrinsic_volume_cube(n: int, j: int, side: float = 1.0) -> float:
    if not 0 <= j <= n:
        raise ValueError("need 0 <= j <= n")
    return math.comb(n, j) * side**j


def _elementary_symmetric(vals: np.ndarray, k: int) -> float:
    # direct DP, exact for the small n used here
    e = np.zeros(k + 1)
    e[0] = 1.0
    for v in vals:
        if k:
            e[1:] = e[1:] + v * e[:-1]
    return float(e[k])


def intrinsic_volume_ellipsoid(semiaxes, j: int, epsabs: float = 1e-10) -> float:
    """V_j of an ellipsoid with the given semiaxes, by adaptive quadrature.

    Axes are scale-normalized first (V_j is j-homogeneous), so epsabs refers
    to the normalized integral. Axis ratios beyond about e^60 raise
    QuadratureError rather than returning an untrusted value.
    """
    a = np.atleast_1d(np.asarray(semiaxes, dtype=float))
    n = a.size
    if np.any(a <= 0):
        raise ValueError("semiaxes must be positive")
    if not 0 <= j <= n:
        raise ValueError("need 0 <= j <= n")
    if j == 0:
        return 1.0
    scale = float(a.max())
    b = a / scale
    if float(b.min()) < np.exp(-60.0):
        raise QuadratureError("axis ratio beyond supported range")
    b2 = b * b
    total = 0.0
    # u-substitution t = u/(1-u); integrand transitions sit at u = 1/(1+b_l)
    pts = sorted(set(float(1.0 / (1.0 + bl)) for bl in b))
    for i in range(n):
        rest = np.delete(b2, i)
        ek = _elementary_symmetric(rest, j - 1)

        def integrand(u, i=i):
            w = 1.0 - u
            den = (b2[i] * u * u + w * w) * np.sqrt(np.prod(b2 * u * u + w * w))
            return u ** (j - 1) * w ** (n + 1 - j) / den

        val, err = quad(integrand, 0.0, 1.0, points=pts, limit=400,
                        epsabs=epsabs, epsrel=1e-11)
        if not np.isfinite(val) or err > max(epsabs, 1e-8 * abs(val)) * 50:
            raise QuadratureError("ellipsoid quadrature did not converge")
        total += b2[i] * ek * val
    return kappa(j) * total * scale**j


# fixed log-grid for the batch evaluator; covers normalized axes down to e^-25
_GRID_H = 0.30
_GRID_S = np.arange(-32.0, 30.0 + _GRID_H / 2, _GRID_H)


def batch_ellipsoid_intrinsic_volumes(semiaxes: np.ndarray, js) -> dict[int, np.ndarray]:
    """V_j for a stack of ellipsoids, all j in js at once.

    semiaxes has shape (m, n). Fixed trapezoid rule in s = log t with shared
    denominators across j; accurate to ~1e-9 relative for axis log-spreads up
    to +-10, which covers Gaussian spectra by a wide margin.
    """
    A = np.atleast_2d(np.asarray(semiaxes, dtype=float))
    m, n = A.shape
    js = sorted(set(int(j) for j in js))
    if any(j < 0 or j > n for j in js):
        raise ValueError("need 0 <= j <= n")
    scale = A.max(axis=1, keepdims=True)
    B2 = (A / scale) ** 2
    T2 = np.exp(2.0 * _GRID_S)
    out: dict[int, np.ndarray] = {}
    pos = [j for j in js if j > 0]
    if 0 in js:
        out[0] = np.ones(m)
    if not pos:
        return out
    fac = np.empty((m, n, T2.size))
    P = np.ones((m, T2.size))
    for l in range(n):
        fl = B2[:, l, None] * T2[None, :] + 1.0
        fac[:, l] = fl
        P *= np.sqrt(fl)
    for j in pos:
        ejs = np.exp(j * _GRID_S)
        core = np.zeros(m)
        for i in range(n):
            rest = np.delete(B2, i, axis=1)
            e = np.zeros((m, j))
            e[:, 0] = 1.0
            for l in range(n - 1):
                if j > 1:
                    e[:, 1:] = e[:, 1:] + rest[:, l][:, None] * e[:, :-1]
            integral = _GRID_H * np.einsum("k,mk->m", ejs, 1.0 / (fac[:, i] * P))
            core += B2[:, i] * e[:, j - 1] * integral
        out[j] = kappa(j) * core * scale[:, 0] ** j
    return out


def euler_characteristic(body) -> int:
    """1 for every nonempty convex body, 0 for the empty marker."""
    if isinstance(body, bd.EmptyBody):
        return 0
    if isinstance(body, (bd.Ball, bd.Ellipsoid, bd.HPolytope, bd.VPolytope)):
        return 1
    raise TypeError(f"unsupported body {type(body).__name__}")


def volume_exact(body) -> float:
    """Lebesgue volume by closed form or hull computation."""
    if isinstance(body, bd.EmptyBody):
        return 0.0
    if isinstance(body, bd.Ball):
        return kappa(body.dim) * body.radius**body.dim
    if isinstance(body, bd.Ellipsoid):
        return kappa(body.dim) * float(np.prod(body.semiaxes))
    if isinstance(body, bd.VPolytope):
        if body.vertices.shape[0] <= body.dim:
            return 0.0
        try:
            return float(ConvexHull(body.vertices).volume)
        except Exception:
            return 0.0
    if isinstance(body, bd.HPolytope):
        return volume_exact(bd.as_vpolytope(body))
    raise TypeError(f"unsupported body {type(body).__name__}")


def _box_sides(body: bd.HPolytope) -> np.ndarray | None:
    """Side lengths when the polytope is an axis-aligned box, else None."""
    n = body.dim
    if body.normals.shape[0] != 2 * n:
        return None
    lo = np.full(n, np.nan)
    hi = np.full(n, np.nan)
    for row, off in zip(body.normals, body.offsets):
        k = int(np.argmax(np.abs(row)))
        e = np.zeros(n)
        e[k] = np.sign(row[k])
        if np.max(np.abs(row - e)) > 1e-12:
            return None
        if e[k] > 0:
            hi[k] = off
        else:
            lo[k] = -off
    if np.any(np.isnan(lo)) or np.any(np.isnan(hi)) or np.any(hi < lo):
        return None
    return hi - lo


def closed_intrinsic_volumes(body) -> np.ndarray:
    """The vector (V_0, ..., V_n) for bodies with a closed form.

    Supported: balls, ellipsoids, axis-aligned boxes, and polygons (n = 2).
    Raises ValueError otherwise; use steiner_fit for general bodies.
    """
    if isinstance(body, bd.Ball):
        n = body.dim
        return np.array([intrinsic_volume_ball(n, j, body.radius) for j in range(n + 1)])
    if isinstance(body, bd.Ellipsoid):
        n = body.dim
        return np.array([intrinsic_volume_ellipsoid(body.semiaxes, j) for j in range(n + 1)])
    if isinstance(body, bd.HPolytope):
        sides = _box_sides(body)
        if sides is not None:
            n = body.dim
            vals = np.zeros(n + 1)
            for j in range(n + 1):
                e = np.zeros(j + 1)
                e[0] = 1.0
                for s in sides:
                    if j:
                        e[1:] = e[1:] + s * e[:-1]
                vals[j] = e[j]
            return vals
        if body.dim == 2:
            return closed_intrinsic_volumes(bd.as_vpolytope(body))
        raise ValueError("no closed form for this halfspace system")
    if isinstance(body, bd.VPolytope) and body.dim == 2:
        hull = ConvexHull(body.vertices)
        V = body.vertices[hull.vertices]
        per = float(np.sum(np.linalg.norm(np.roll(V, -1, axis=0) - V, axis=1)))
        return np.array([1.0, per / 2.0, float(hull.volume)])
    raise ValueError(f"no closed form for {type(body).__name__}")


def volume_mc(body, samples: int, rng, batch: int = 65536) -> EstimatorResult:
    """Hit-or-miss volume estimate inside the body's bounding box."""
    rng, seed = resolve_rng(rng)
    lo, hi = bd.bounding_box(body)
    widths = hi - lo
    box_vol = float(np.prod(widths))
    acc = RunningMean()
    done = 0
    while done < samples:
        k = min(batch, samples - done)
        pts = lo + rng.random((k, lo.size)) * widths
        hits = bd.contains_points(body, pts)
        acc.update(np.where(hits, box_vol, 0.0))
        done += k
    return EstimatorResult.from_accumulator(acc, seed, importance_volume=box_vol)


@dataclass
class SteinerFit:
    """Weighted least-squares recovery of all V_j from parallel volumes.

    Fits vol(M + eps B^n) = sum_j kappa_{n-j} eps^{n-j} V_j(M) across the
    dilation radii; values[j] estimates V_j(M).
    """

    values: np.ndarray
    std_errors: np.ndarray
    covariance: np.ndarray
    radii: np.ndarray
    measured: np.ndarray
    measured_se: np.ndarray
    samples: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "values": self.values.tolist(),
            "std_errors": self.std_errors.tolist(),
            "radii": self.radii.tolist(),
            "measured": self.measured.tolist(),
            "measured_se": self.measured_se.tolist(),
            "samples": self.samples,
            "seed": self.seed,
        }


def steiner_fit(body, radii, samples: int, rng, batch: int = 65536) -> SteinerFit:
    """Estimate all intrinsic volumes of a body from dilated volume samples.

    samples is the total budget, split evenly across the dilation radii. The
    number of radii must be at least n + 1 so the Vandermonde-like design
    matrix has full column rank.
    """
    rng, seed = resolve_rng(rng)
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    n = body.dim if not isinstance(body, bd.EmptyBody) else 0
    if radii.size < n + 1:
        raise ValueError("need at least n + 1 dilation radii")
    if np.any(radii <= 0):
        raise ValueError("dilation radii must be positive")
    per = max(int(samples) // radii.size, 1)
    lo, hi = bd.bounding_box(body)
    y = np.empty(radii.size)
    var = np.empty(radii.size)
    for i, eps in enumerate(radii):
        blo = lo - eps
        bwid = (hi - lo) + 2.0 * eps
        box_vol = float(np.prod(bwid))
        hits = 0
        done = 0
        while done < per:
            k = min(batch, per - done)
            pts = blo + rng.random((k, n)) * bwid
            hits += int(np.sum(bd.distance_to_body(body, pts) <= eps))
            done += k
        p = hits / per
        y[i] = box_vol * p
        var[i] = box_vol**2 * max(p * (1.0 - p), 1e-12) / per
    D = np.empty((radii.size, n + 1))
    for j in range(n + 1):
        D[:, j] = kappa(n - j) * radii ** (n - j)
    W = 1.0 / var
    gram = D.T @ (W[:, None] * D)
    cov = np.linalg.inv(gram)
    beta = cov @ (D.T @ (W * y))
    return SteinerFit(values=beta, std_errors=np.sqrt(np.diag(cov)),
                      covariance=cov, radii=radii, measured=y,
                      measured_se=np.sqrt(var), samples=per * radii.size,
                      seed=seed)


@dataclass
class Valuation:
    """A functional on convex bodies, zero on the empty marker.

    degree records homogeneity (phi(lambda M) = lambda^degree phi(M)) when
    known; it is informational and used by diagnostics only.
    """

    name: str
    func: Callable
    degree: float | None = None

    def __call__(self, body) -> float:
        if isinstance(body, bd.EmptyBody):
            return 0.0
        return float(self.func(body))


def euler_valuation() -> Valuation:
    return Valuation("chi", euler_characteristic, degree=0.0)


def volume_valuation(n: int) -> Valuation:
    return Valuation("volume", volume_exact, degree=float(n))


def valuation_norm_estimate(phi: Valuation, n: int, rng, trials: int = 200) -> float:
    """Diagnostic sup of |phi| over a family of convex subsets of the unit ball.

    A finite stand-in for the supremum over all K contained in B^n; useful for
    checking that a custom valuation is bounded before integrating it.
    """
    from . import symmetric as sym

    rng, _ = resolve_rng(rng)
    best = 0.0
    for i in range(trials):
        kind = i % 3
        if kind == 0:
            r = rng.random() ** (1.0 / n)
            c = rng.standard_normal(n)
            c *= (1.0 - r) * rng.random() / max(np.linalg.norm(c), 1e-12)
            body = bd.Ball(c, max(r, 1e-3))
        elif kind == 1:
            q = sym.sample_haar_orthogonal(n, rng)
            a = rng.random(n) * 0.999 + 1e-3
            a /= max(1.0, a.max())
            body = bd.Ellipsoid(np.zeros(n), q, a)
        else:
            body = bd.random_polytope(n, n + 3 + int(rng.integers(0, 6)), rng)
        best = max(best, abs(phi(body)))
    return best
