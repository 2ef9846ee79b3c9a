"""Independent brute-force reference computations.

Nothing here shares code with the vectorized paths in ``curvature`` and
``parallel``: the model tensor is evaluated term by term on explicit vectors,
the action matrix is built from per-pair matrix products on an unnormalized
basis, and ranks come from Gaussian elimination with complete pivoting
instead of an SVD.
"""
from __future__ import annotations

import numpy as np

from .curvature import CurvatureParams
from .structure import FpkStructure


def curvature_terms(F: FpkStructure, P: CurvatureParams, X, Y, Z) -> np.ndarray:
    """``R(X, Y) Z`` summed term by term from the defining formula."""
    phi, g, xi, eta = F.phi, F.g, F.xi, F.eta

    def gg(a, b):
        return float(a @ g @ b)

    pX, pY, pZ = phi @ X, phi @ Y, phi @ Z
    p2X, p2Y = phi @ pX, phi @ pY
    out = P.F1 * (gg(pX, pZ) * p2Y - gg(pY, pZ) * p2X)
    out = out + P.F2 * (gg(Z, pY) * pX - gg(Z, pX) * pY + 2.0 * gg(X, pY) * pZ)
    for i in range(F.s):
        for j in range(F.s):
            f = P.Fij[i, j]
            if f == 0.0:
                continue
            out = out + f * (
                (eta[i] @ X) * (eta[j] @ Z) * p2Y
                - (eta[i] @ Y) * (eta[j] @ Z) * p2X
                + gg(pY, pZ) * (eta[i] @ X) * xi[j]
                - gg(pX, pZ) * (eta[i] @ Y) * xi[j]
            )
    return out


def brute_force_curvature(F: FpkStructure, P: CurvatureParams) -> np.ndarray:
    """Raised components ``up[l, i, j, k]`` by looping over basis triples."""
    dim = F.dim
    E = np.eye(dim)
    up = np.zeros((dim, dim, dim, dim))
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                up[:, i, j, k] = curvature_terms(F, P, E[i], E[j], E[k])
    return up


def unnormalized_basis(dim: int, subspace: str) -> list[np.ndarray]:
    out = []
    for i in range(dim):
        for j in range(i, dim):
            B = np.zeros((dim, dim))
            if subspace == "symmetric":
                B[i, j] = B[j, i] = 1.0
            elif subspace == "skew":
                if i == j:
                    continue
                B[i, j], B[j, i] = 1.0, -1.0
            else:
                raise ValueError(subspace)
            out.append(B)
    return out


def brute_force_action_matrix(up: np.ndarray, subspace: str) -> np.ndarray:
    """Rows: all (i, j, k, m); columns: unnormalized subspace basis."""
    dim = up.shape[0]
    cols = []
    for H in unnormalized_basis(dim, subspace):
        col = np.zeros((dim, dim, dim, dim))
        for i in range(dim):
            for j in range(dim):
                Rij = up[:, i, j, :]           # Rij[l, k] = R(e_i, e_j) e_k component l
                # H(R e_k, e_m) + H(e_k, R e_m)
                col[i, j] = Rij.T @ H + H @ Rij
        cols.append(col.ravel())
    return np.array(cols).T


def row_reduce_rank(M: np.ndarray, rel_tol: float = 1e-9) -> int:
    """Rank by Gaussian elimination with complete pivoting.

    A pivot counts when it exceeds ``rel_tol * max|M| * ncols``.
    """
    A = np.array(M, dtype=float, copy=True)
    rows, cols = A.shape
    if A.size == 0:
        return 0
    scale = np.abs(A).max()
    if scale == 0.0:
        return 0
    thresh = rel_tol * scale * cols
    rank = 0
    for _ in range(min(rows, cols)):
        sub = np.abs(A[rank:, rank:])
        r, c = np.unravel_index(np.argmax(sub), sub.shape)
        if sub[r, c] <= thresh:
            break
        r += rank
        c += rank
        A[[rank, r]] = A[[r, rank]]
        A[:, [rank, c]] = A[:, [c, rank]]
        pivot_row = A[rank, rank:] / A[rank, rank]
        A[rank + 1:, rank:] -= np.outer(A[rank + 1:, rank], pivot_row)
        rank += 1
    return rank


def brute_force_nullity(F: FpkStructure, P: CurvatureParams, subspace: str,
                        rel_tol: float = 1e-9) -> int:
    up = brute_force_curvature(F, P)
    M = brute_force_action_matrix(up, subspace)
    return M.shape[1] - row_reduce_rank(M, rel_tol)
