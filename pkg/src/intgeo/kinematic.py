"""Monte Carlo kinematic integrals over rigid motions and affine deformations.

The left-hand side integrates phi(M cap g L) over group elements g = k exp(X)
plus translation, with k Haar (probability measure) on O(n) or SO(n) and X
Gaussian on Sym(n); the compact groups pin X = 0. The right-hand side is the
Hadwiger-style expansion sum_j c_j phi_{n-j}(M) V_j(L) with Crofton
coefficients phi_{n-j}(M) estimated over random flats and the deformation
constants c_j from the weyl module.

Normalization note: with the probability Haar measure used here, the direct
integral equals the plain sum (the "half" convention); doubling the component
masses of O(n) doubles it. Reports carry both candidates and the z-score of
the estimate against each, so the convention is pinned by data, not fiat.

separation_lemma_check exercises the boundary characterization of the
difference body: t lies on the boundary of M + (-gL) exactly when M and
gL + t intersect but admit a separating hyperplane.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import bodies as bd
from .estimation import EstimatorResult, RunningMean, resolve_rng, z_score
from .sampling import flat_hits, flat_weight, sample_affine_flat, sample_group_element
from .symmetric import sample_gaussian_sym, sample_haar_orthogonal
from .volumes import (Valuation, closed_intrinsic_volumes, kappa, volume_exact)

GROUPS = {"gl": ("full", False), "o": ("full", True), "so": ("special", True)}


def _phi_kind(phi) -> str:
    if isinstance(phi, Valuation):
        return {"chi": "chi", "volume": "volume"}.get(phi.name, "custom")
    if phi in ("chi", "volume"):
        return phi
    raise ValueError(f"unknown valuation {phi!r}")


def _frame(body) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(lin, center, inv) with body = {center + lin z : ||z|| <= 1}."""
    if isinstance(body, bd.Ball):
        n = body.dim
        return (body.radius * np.eye(n), body.center, np.eye(n) / body.radius)
    if isinstance(body, bd.Ellipsoid):
        lin = body.axes * body.semiaxes
        inv = (body.axes / body.semiaxes).T
        return lin, body.center, inv
    raise TypeError("frame requires a ball or ellipsoid")


def _dist_leq(P: np.ndarray, S: np.ndarray, thresh: float) -> np.ndarray:
    """Whether dist(origin-shifted point, centered ellipsoid) <= thresh, batched.

    P holds the point in the ellipsoid's principal frame, S the semiaxes.
    """
    g2 = np.einsum("ij,ij->i", P / S, P / S)
    res = g2 <= 1.0
    out = ~res
    if np.any(out):
        Q = P[out]
        A2 = S[out] ** 2
        lo = np.zeros(Q.shape[0])
        hi = 2.0 * np.max(S[out], axis=1) * np.linalg.norm(Q, axis=1) + 1e-30
        for _ in range(70):
            mid = 0.5 * (lo + hi)
            f = np.einsum("ij,ij->i", A2 * Q * Q, 1.0 / (A2 + mid[:, None]) ** 2)
            gt = f > 1.0
            lo = np.where(gt, mid, lo)
            hi = np.where(gt, hi, mid)
        mu = 0.5 * (lo + hi)
        d = np.linalg.norm(mu[:, None] * Q / (A2 + mu[:, None]), axis=1)
        res[out] = d <= thresh
    return res


def lhs_kinematic(group: str, phi, M, L, samples: int, rng, *,
                  inner_samples: int = 256, strata: int = 0,
                  batch: int = 4096) -> EstimatorResult:
    """The group-side integral, estimated with the translation box folded in.

    phi may be "chi", "volume", or a Valuation; custom valuations need both
    bodies as H-polytopes (the intersection must be constructible). Ball and
    ellipsoid pairs run on a vectorized path; other pairs fall back to the
    per-sample predicates.
    """
    if group not in GROUPS:
        raise ValueError(f"unknown group {group!r}")
    kind = _phi_kind(phi)
    if M.dim != L.dim:
        raise ValueError("bodies must share a dimension")
    rng, seed = resolve_rng(rng)
    fast = (isinstance(M, (bd.Ball, bd.Ellipsoid))
            and isinstance(L, (bd.Ball, bd.Ellipsoid))
            and kind in ("chi", "volume"))
    if fast:
        acc = _lhs_fast(group, kind, M, L, samples, rng, inner_samples,
                        strata, batch)
    else:
        acc = _lhs_generic(group, phi, kind, M, L, samples, rng, inner_samples,
                           strata)
    return EstimatorResult.from_accumulator(acc, seed)


def _lhs_fast(group, kind, M, L, samples, rng, inner, strata, batch) -> RunningMean:
    component, compact = GROUPS[group]
    n = M.dim
    _, cM, invM = _frame(M)
    linL0, cL, invL0 = _frame(L)
    e = np.eye(n)
    hMp = np.array([bd.support(M, e[k]) for k in range(n)])
    hMm = np.array([bd.support(M, -e[k]) for k in range(n)])
    loM, hiM = bd.bounding_box(M)
    acc = RunningMean()
    done = 0
    while done < samples:
        B = min(batch, samples - done)
        k = sample_haar_orthogonal(n, rng, component=component, size=B)
        if compact:
            G = k
        else:
            X = sample_gaussian_sym(n, rng, size=B, strata=strata)
            lam, V = np.linalg.eigh(X)
            expX = np.einsum("bij,bj,bkj->bik", V, np.exp(lam), V)
            G = k @ expX
        linL = G @ linL0
        cg = np.einsum("bij,j->bi", G, cL) if np.any(cL) else np.zeros((B, n))
        hw = np.linalg.norm(linL, axis=2)  # support of the centered image at +-e_i
        hi = hMp[None, :] + hw - cg
        lo = -(hMm[None, :] + hw + cg)
        wid = hi - lo
        volbox = np.prod(wid, axis=1)
        t = lo + rng.random((B, n)) * wid
        center = cg + t
        if kind == "chi":
            c2 = np.einsum("ij,bj->bi", invM, center - cM)
            lin2 = np.einsum("ij,bjk->bik", invM, linL)
            U2, S2, _ = np.linalg.svd(lin2)
            P = -np.einsum("bji,bj->bi", U2, c2)
            hit = _dist_leq(P, S2, 1.0)
            acc.update(np.where(hit, volbox, 0.0))
        else:
            loI = np.maximum(loM[None, :], center - hw)
            hiI = np.minimum(hiM[None, :], center + hw)
            widI = np.clip(hiI - loI, 0.0, None)
            volI = np.prod(widI, axis=1)
            u = rng.random((B, inner, n))
            pts = loI[:, None, :] + u * widI[:, None, :]
            y = np.einsum("ij,bkj->bki", invM, pts - cM)
            inM = np.einsum("bki,bki->bk", y, y) <= 1.0
            if compact:
                invG = np.swapaxes(k, 1, 2)
            else:
                expXinv = np.einsum("bij,bj,bkj->bik", V, np.exp(-lam), V)
                invG = np.einsum("bij,bkj->bik", expXinv, k)
            invlin = np.einsum("ij,bjk->bik", invL0, invG)
            z = np.einsum("bij,bkj->bki", invlin, pts - center[:, None, :])
            inL = np.einsum("bki,bki->bk", z, z) <= 1.0
            frac = np.mean(inM & inL, axis=1)
            acc.update(volbox * volI * frac)
        done += B
    return acc


def _lhs_generic(group, phi, kind, M, L, samples, rng, inner, strata) -> RunningMean:
    component, compact = GROUPS[group]
    if kind == "custom" and not (isinstance(M, bd.HPolytope)
                                 and isinstance(L, bd.HPolytope)):
        raise ValueError("custom valuations need H-polytope bodies "
                         "(the intersection must be explicit)")
    acc = RunningMean()
    n = M.dim
    for _ in range(int(samples)):
        g, vol = sample_group_element(M, L, rng, component=component,
                                      compact=compact, strata=strata)
        moved = bd.affine_image(L, g.as_affine_map())
        if kind == "chi":
            val = vol if bd.intersects(M, moved) else 0.0
        elif kind == "volume":
            loM, hiM = bd.bounding_box(M)
            loL, hiL = bd.bounding_box(moved)
            loI = np.maximum(loM, loL)
            hiI = np.minimum(hiM, hiL)
            widI = np.clip(hiI - loI, 0.0, None)
            volI = float(np.prod(widI))
            if volI <= 0.0:
                val = 0.0
            else:
                pts = loI + rng.random((inner, n)) * widI
                hits = bd.contains_points(M, pts) & bd.contains_points(moved, pts)
                val = vol * volI * float(np.mean(hits))
        else:
            inter = bd.intersect_hrep(M, moved)
            val = vol * phi(inter)
        acc.update(np.array([val]))
    return acc


def crofton_coefficient(phi, M, j: int, samples: int, rng, *,
                        window_radius: float | None = None,
                        batch: int = 16384) -> EstimatorResult:
    """phi_{n-j}(M): the integral of phi(M cap E) over the j-flat measure.

    The flat measure is normalized so flats meeting the unit ball have mass
    kappa_{n-j}. window_radius defaults to 1.5x the outer radius of M and
    must dominate it, otherwise contributing flats would be missed.
    """
    kind = _phi_kind(phi)
    n = M.dim
    if not 0 <= j <= n:
        raise ValueError("need 0 <= j <= n")
    rng, seed = resolve_rng(rng)
    rad = bd.outer_radius(M)
    if window_radius is None:
        window_radius = 1.5 * rad
    if window_radius < rad - 1e-12:
        raise ValueError("window radius must dominate the body's outer radius")
    weight = flat_weight(n, j, window_radius)
    if kind == "volume":
        mean = volume_exact(M) * kappa(0) if j == n else 0.0
        return EstimatorResult(mean=mean, std_error=0.0, samples=int(samples),
                               seed=seed, importance_volume=weight)
    if kind == "custom":
        raise ValueError("crofton coefficients support chi and volume only")
    if j == n:
        return EstimatorResult(mean=float(kappa(0)), std_error=0.0,
                               samples=int(samples), seed=seed,
                               importance_volume=weight)
    acc = RunningMean()
    if isinstance(M, bd.Ball):
        c = M.center
        done = 0
        while done < samples:
            B = min(batch, samples - done)
            Q = sample_haar_orthogonal(n, rng, size=B)
            W = Q[:, :, j:]
            d = n - j
            z = rng.standard_normal((B, d))
            z /= np.linalg.norm(z, axis=1, keepdims=True)
            r = window_radius * rng.random(B) ** (1.0 / d)
            off = np.einsum("bik,bk->bi", W, r[:, None] * z)
            if j:
                U = Q[:, :, :j]
                proj = np.einsum("bik,bk->bi", U, np.einsum("bik,i->bk", U, c))
                cperp = c[None, :] - proj
            else:
                cperp = np.broadcast_to(c, (B, n))
            hit = np.linalg.norm(cperp - off, axis=1) <= M.radius
            acc.update(np.where(hit, weight, 0.0))
            done += B
    else:
        for _ in range(int(samples)):
            flat = sample_affine_flat(n, j, rng, window_radius)
            acc.update(np.array([weight if flat_hits(M, flat) else 0.0]))
    return EstimatorResult.from_accumulator(acc, seed, importance_volume=weight)


def rhs_hadwiger_gl(phi, M, L, constants: dict[int, EstimatorResult],
                    crofton: dict[int, EstimatorResult]) -> dict:
    """Assemble both right-hand-side candidates from estimated pieces.

    Needs c_j and phi_{n-j}(M) for every 0 <= j <= n and a closed form for
    the intrinsic volumes of L. Returns the per-j terms (half convention),
    their sum, the doubled sum, and propagated standard errors.
    """
    n = M.dim
    vL = closed_intrinsic_volumes(L)
    terms = []
    var = 0.0
    for j in range(n + 1):
        c = constants[j]
        f = crofton[j]
        term = c.mean * f.mean * float(vL[j])
        tvar = (c.mean * f.std_error * vL[j]) ** 2 + (f.mean * c.std_error * vL[j]) ** 2
        var += tvar
        terms.append({"j": j, "c_j": c.mean, "c_j_se": c.std_error,
                      "phi_coeff": f.mean, "phi_coeff_se": f.std_error,
                      "v_j": float(vL[j]), "term": term,
                      "std_error": float(np.sqrt(tvar))})
    half = float(sum(t["term"] for t in terms))
    se = float(np.sqrt(var))
    return {"terms": terms, "rhs_half": half, "rhs_total": 2.0 * half,
            "se_half": se, "se_total": 2.0 * se}


@dataclass
class KinematicReport:
    """Everything needed to compare the two sides of the formula."""

    group: str
    phi: str
    n: int
    seed: int
    samples: int
    lhs: EstimatorResult
    rhs: dict
    constants: dict[int, EstimatorResult]
    crofton: dict[int, EstimatorResult]
    z_total: float
    z_half: float
    convention: str

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "phi": self.phi,
            "n": self.n,
            "seed": self.seed,
            "samples": self.samples,
            "lhs": self.lhs.to_dict(),
            "rhs": self.rhs,
            "constants": {str(j): r.to_dict() for j, r in sorted(self.constants.items())},
            "crofton": {str(j): r.to_dict() for j, r in sorted(self.crofton.items())},
            "z_total": self.z_total,
            "z_half": self.z_half,
            "convention": self.convention,
        }

    def csv_rows(self) -> list[list]:
        rows = [["j", "c_j", "phi_coeff", "v_j", "term", "std_error"]]
        for t in self.rhs["terms"]:
            rows.append([t["j"], t["c_j"], t["phi_coeff"], t["v_j"],
                         t["term"], t["std_error"]])
        return rows


def build_report(group: str, phi, M, L, samples: int, seed: int, *,
                 inner_samples: int = 256,
                 cj_samples: int | None = None,
                 crofton_samples: int | None = None,
                 window_radius: float | None = None,
                 constants: dict[int, EstimatorResult] | None = None,
                 lhs_result: EstimatorResult | None = None) -> KinematicReport:
    """Run both sides and package the comparison.

    Substreams are spawned from the seed so the three estimation stages stay
    independent; precomputed constants (e.g. from a cache file) or a
    presharded lhs estimate can be injected.
    """
    n = M.dim
    kind = _phi_kind(phi)
    cj_samples = cj_samples or max(samples // 4, 10000)
    crofton_samples = crofton_samples or max(samples // 4, 10000)
    streams = np.random.SeedSequence(seed).spawn(n + 3)
    if lhs_result is None:
        lhs_result = lhs_kinematic(group, phi, M, L, samples,
                                   np.random.default_rng(streams[0]),
                                   inner_samples=inner_samples)
        lhs_result.seed = seed
    if constants is None:
        if group in ("o", "so"):
            constants = {j: EstimatorResult(1.0, 0.0, 1, seed) for j in range(n + 1)}
        else:
            from .weyl import c_direct
            constants = c_direct(n, cj_samples, np.random.default_rng(streams[1]))
    crofton = {
        j: crofton_coefficient(phi, M, j, crofton_samples,
                               np.random.default_rng(streams[2 + j]),
                               window_radius=window_radius)
        for j in range(n + 1)
    }
    rhs = rhs_hadwiger_gl(phi, M, L, constants, crofton)
    zt = z_score(lhs_result.mean, lhs_result.std_error, rhs["rhs_total"], rhs["se_total"])
    zh = z_score(lhs_result.mean, lhs_result.std_error, rhs["rhs_half"], rhs["se_half"])
    return KinematicReport(group=group, phi=kind, n=n, seed=seed, samples=samples,
                           lhs=lhs_result, rhs=rhs, constants=constants,
                           crofton=crofton, z_total=zt, z_half=zh,
                           convention="half" if zh <= zt else "total")


# ---------------------------------------------------------------------------
# separation lemma check


@dataclass
class LemmaCheck:
    trials: int
    agreements: int
    disagreements: int
    boundary_skips: int
    stratum_counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"trials": self.trials, "agreements": self.agreements,
                "disagreements": self.disagreements,
                "boundary_skips": self.boundary_skips,
                "stratum_counts": self.stratum_counts,
                "failures": self.failures}


def _hull_edges(poly: bd.VPolytope) -> list[tuple[np.ndarray, np.ndarray]]:
    from scipy.spatial import ConvexHull

    V = poly.vertices
    order = ConvexHull(V).vertices
    return [(V[order[i]], V[order[(i + 1) % len(order)]]) for i in range(len(order))]


def separation_lemma_check(M: bd.VPolytope, L: bd.VPolytope, trials: int, rng, *,
                           skip_margin: float = 1e-6) -> LemmaCheck:
    """Stress the boundary biconditional on random deformations of L.

    For each trial, draw g = k exp(X), build the difference body
    D = M + (-gL), and plant the translation t in one of three strata:
    interior of D, boundary of D (edge point with tangential jitter), or
    exterior. The claim under test: M and gL + t intersect AND admit a
    separating hyperplane exactly when t lies on the boundary of D.
    Interior/exterior samples landing within skip_margin of the boundary are
    counted as boundary_skips instead of being classified.
    """
    if M.dim != 2 or L.dim != 2:
        raise ValueError("the lemma check runs polygons in the plane")
    rng, _ = resolve_rng(rng)
    from .symmetric import expm_sym

    result = LemmaCheck(trials=trials, agreements=0, disagreements=0,
                        boundary_skips=0,
                        stratum_counts={"interior": 0, "boundary": 0, "exterior": 0})
    strata = ("interior", "boundary", "exterior")
    for trial in range(int(trials)):
        stratum = strata[trial % 3]
        k = sample_haar_orthogonal(2, rng)
        X = sample_gaussian_sym(2, rng)
        gL = bd.VPolytope(L.vertices @ (k @ expm_sym(X)).T)
        D = bd.minkowski_sum_vpolytopes(M, bd.VPolytope(-gL.vertices))
        lo, hi = bd.bounding_box(D)
        span = hi - lo
        t = None
        if stratum == "interior":
            for _ in range(400):
                cand = lo + rng.random(2) * span
                if (bd.contains_points(D, cand[None, :])[0]
                        and bd.polygon_boundary_distance(D, cand[None, :])[0] > skip_margin):
                    t = cand
                    break
        elif stratum == "exterior":
            blo = lo - 0.5 * span
            bspan = 2.0 * span
            for _ in range(400):
                cand = blo + rng.random(2) * bspan
                if (not bd.contains_points(D, cand[None, :], tol=0.0)[0]
                        and bd.polygon_boundary_distance(D, cand[None, :])[0] > skip_margin):
                    t = cand
                    break
        else:
            edges = _hull_edges(D)
            lengths = np.array([np.linalg.norm(b - a) for a, b in edges])
            probs = lengths / lengths.sum()
            idx = int(rng.choice(len(edges), p=probs))
            a, b = edges[idx]
            u = rng.random()
            u = float(np.clip(u + 0.1 * rng.standard_normal(), 0.0, 1.0))
            t = a + u * (b - a)
        if t is None:
            result.boundary_skips += 1
            continue
        result.stratum_counts[stratum] += 1
        moved = bd.VPolytope(gL.vertices + t)
        nonempty = bd.intersects(M, moved)
        separable = bd.separating_hyperplane(M, moved) is not None
        on_boundary = stratum == "boundary"
        if (nonempty and separable) == on_boundary:
            result.agreements += 1
        else:
            result.disagreements += 1
            if len(result.failures) < 10:
                result.failures.append({"stratum": stratum, "t": t.tolist(),
                                        "nonempty": bool(nonempty),
                                        "separable": bool(separable)})
    return result
