"""Symmetric matrices, their Gaussian measure, and Haar sampling on O(n).

The coordinate chart on Sym(n) is the orthonormal basis (Frobenius inner
product) made of the diagonal units Delta_ii followed by the off-diagonal
units (Delta_ij + Delta_ji)/sqrt(2) in lexicographic order. Drawing iid
standard normal coefficients in that chart gives the density
exp(-||X||_F^2 / 2) up to normalization, i.e. diagonal entries of variance 1
and off-diagonal entries of variance 1/2.
"""

from __future__ import annotations

import numpy as np

SYM_TOL = 1e-10


def sym_dim(n: int) -> int:
    return n * (n + 1) // 2


def sym_basis(n: int) -> list[np.ndarray]:
    """Orthonormal basis of Sym(n): diagonal units, then symmetrized off-diagonals."""
    basis = []
    for i in range(n):
        B = np.zeros((n, n))
        B[i, i] = 1.0
        basis.append(B)
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    for i in range(n):
        for j in range(i + 1, n):
            B = np.zeros((n, n))
            B[i, j] = B[j, i] = inv_sqrt2
            basis.append(B)
    return basis


def _offdiag_indices(n: int) -> tuple[np.ndarray, np.ndarray]:
    iu = np.triu_indices(n, k=1)
    return iu


def coords_to_sym(coords: np.ndarray, n: int) -> np.ndarray:
    """Map chart coordinates (..., n(n+1)/2) to symmetric matrices (..., n, n)."""
    coords = np.asarray(coords, dtype=float)
    lead = coords.shape[:-1]
    X = np.zeros(lead + (n, n))
    idx = np.arange(n)
    X[..., idx, idx] = coords[..., :n]
    iu, ju = _offdiag_indices(n)
    off = coords[..., n:] / np.sqrt(2.0)
    X[..., iu, ju] = off
    X[..., ju, iu] = off
    return X


def sym_to_coords(X: np.ndarray) -> np.ndarray:
    """Inverse chart; an isometry between Frobenius and Euclidean norms."""
    X = np.asarray(X, dtype=float)
    n = X.shape[-1]
    idx = np.arange(n)
    iu, ju = _offdiag_indices(n)
    return np.concatenate(
        [X[..., idx, idx], X[..., iu, ju] * np.sqrt(2.0)], axis=-1)


def as_symmetric(X: np.ndarray, tol: float = SYM_TOL) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if np.max(np.abs(X - X.T)) > tol:
        raise ValueError("matrix is not symmetric to tolerance")
    return 0.5 * (X + X.T)


def as_orthogonal(Q: np.ndarray, tol: float = SYM_TOL) -> np.ndarray:
    Q = np.asarray(Q, dtype=float)
    n = Q.shape[0]
    if np.max(np.abs(Q.T @ Q - np.eye(n))) > tol:
        raise ValueError("matrix is not orthogonal to tolerance")
    return Q


def sample_gaussian_sym(n: int, rng: np.random.Generator, size: int | None = None,
                        strata: int = 0) -> np.ndarray:
    """Gaussian symmetric matrices in the chart above; (n, n) or (size, n, n).

    With strata > 0 the Frobenius norm is stratified over equal-probability
    chi quantile bins (variance reduction for norm-sensitive integrands);
    directions stay uniform, so the marginal law is unchanged.
    """
    d = sym_dim(n)
    m = 1 if size is None else int(size)
    if strata and strata > 1:
        from scipy.stats import chi

        z = rng.standard_normal((m, d))
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        bins = np.arange(m) % strata
        u = (bins + rng.random(m)) / strata
        r = chi.ppf(u, df=d)
        coords = z * r[:, None]
    else:
        coords = rng.standard_normal((m, d))
    X = coords_to_sym(coords, n)
    return X[0] if size is None else X


def eigendecompose(X: np.ndarray, tol: float = 1e-13,
                   max_sweeps: int = 60) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi eigendecomposition of a symmetric matrix.

    Returns (eigenvalues descending, V with orthonormal eigenvector columns)
    with X = V diag(eigenvalues) V^T. Sweeps run until the off-diagonal
    Frobenius mass falls below tol * ||X||_F.
    """
    A = as_symmetric(X).copy()
    n = A.shape[0]
    V = np.eye(n)
    scale = np.linalg.norm(A)
    if scale == 0.0:
        return np.zeros(n), V
    for _ in range(max_sweeps + 1):
        # direct off-diagonal mass; the sum-minus-diagonal form cancels
        # catastrophically once the mass drops below sqrt(eps) * ||A||
        od = A.copy()
        np.fill_diagonal(od, 0.0)
        off = float(np.linalg.norm(od))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    # theta^2 overflows; the rotation angle is ~1/(2 theta)
                    t = 0.5 / theta
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta == 0.0:
                        t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot_p = c * A[:, p] - s * A[:, q]
                rot_q = s * A[:, p] + c * A[:, q]
                A[:, p], A[:, q] = rot_p, rot_q
                rot_p = c * A[p, :] - s * A[q, :]
                rot_q = s * A[p, :] + c * A[q, :]
                A[p, :], A[q, :] = rot_p, rot_q
                # the rotation annihilates this pair by construction; assign
                # exact zeros so rounding drift cannot accumulate asymmetry
                A[p, q] = A[q, p] = 0.0
                rot_p = c * V[:, p] - s * V[:, q]
                rot_q = s * V[:, p] + c * V[:, q]
                V[:, p], V[:, q] = rot_p, rot_q
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    lam = np.diag(A).copy()
    order = np.argsort(lam)[::-1]
    return lam[order], V[:, order]


def expm_sym(X: np.ndarray) -> np.ndarray:
    """Matrix exponential of a symmetric matrix via its eigendecomposition."""
    lam, V = eigendecompose(X)
    return (V * np.exp(lam)) @ V.T


def eigvals_sym_batch(X: np.ndarray) -> np.ndarray:
    """Eigenvalues (descending) for a stack of symmetric matrices.

    Internal throughput path for the Monte Carlo layers; the scalar
    eigendecompose op stays the reference implementation and a property test
    pins the two against each other.
    """
    return np.linalg.eigvalsh(X)[..., ::-1]


def sample_haar_orthogonal(n: int, rng: np.random.Generator,
                           component: str = "full",
                           size: int | None = None) -> np.ndarray:
    """Haar samples on O(n) via sign-fixed QR of a Gaussian matrix.

    component selects the measure: "special" conditions on det = +1 (flip one
    column when det = -1), "reflection" on det = -1, and "full" takes the
    rotation representative and flips a column with probability 1/2, giving
    the probability Haar measure on all of O(n).
    """
    if component not in ("full", "special", "reflection"):
        raise ValueError(f"unknown component {component!r}")
    m = 1 if size is None else int(size)
    G = rng.standard_normal((m, n, n))
    Q, R = np.linalg.qr(G)
    d = np.sign(np.einsum("mii->mi", R))
    d[d == 0] = 1.0
    Q = Q * d[:, None, :]
    det = np.linalg.det(Q)
    if component == "special":
        flip = det < 0
    elif component == "reflection":
        flip = det > 0
    else:
        Q[det < 0, :, -1] *= -1.0
        flip = rng.random(m) < 0.5
    Q[flip, :, -1] *= -1.0
    return Q[0] if size is None else Q
