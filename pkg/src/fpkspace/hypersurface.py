"""Pointwise hypersurface models tangent to the structure vector fields.

A hypersurface at a point is just an admissible unit normal ``N``.  The
tangent space gets an adapted g-orthonormal basis

    u_1, phi u_1, ..., u_{n-1}, phi u_{n-1}, W = -phi N, xi_1, ..., xi_s

which makes the normal curvature component easy to read off.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .curvature import CurvatureParams, CurvatureTensor
from .errors import NormalizationError, PreconditionError, TangencyError
from .parallel import DEFAULT_RANK_TOL, KernelBasis, Subspace, action_entries, form_basis, \
    kernel_from_entries, project_onto_span
from .structure import DEFAULT_TOL, FpkStructure, check_shapes

RANDOM_TRIPLES = 1000


@dataclass(frozen=True)
class HypersurfaceModel:
    ambient: FpkStructure
    normal: np.ndarray
    tangent_basis: np.ndarray   # (dim - 1, dim), rows are g-orthonormal
    W: np.ndarray
    T: np.ndarray               # T[a, b] = g(t_a, phi t_b)
    w: np.ndarray               # w[b] = g(t_b, W)

    @property
    def tangent_dim(self) -> int:
        return self.tangent_basis.shape[0]

    def tangent_coords(self, X) -> np.ndarray:
        return self.tangent_basis @ self.ambient.g @ np.asarray(X, dtype=float)

    def is_tangent(self, X, tol: float = DEFAULT_TOL) -> bool:
        return abs(self.ambient.inner(X, self.normal)) < tol


def _adapted_tangent_basis(F: FpkStructure, N: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Complete ``{W, xi_i}`` to a g-orthonormal basis of ``N^perp`` using phi-pairs."""
    g, phi = F.g, F.phi
    pairs: list[np.ndarray] = []
    fixed = [N, W] + list(F.xi)
    for e in np.eye(F.dim):
        if len(pairs) == 2 * (F.n - 1):
            break
        v = e.copy()
        for _ in range(2):  # re-orthogonalize once for stability
            for b in fixed + pairs:
                v = v - (b @ g @ v) / (b @ g @ b) * b
        norm = np.sqrt(v @ g @ v)
        if norm < 1e-8:
            continue
        u = v / norm
        pairs += [u, phi @ u]
    return np.array(pairs + [W] + list(F.xi)).reshape(-1, F.dim)


def make_hypersurface(F: FpkStructure, N, tol: float = DEFAULT_TOL) -> HypersurfaceModel:
    check_shapes(F)
    N = np.asarray(N, dtype=float)
    if N.shape != (F.dim,):
        raise PreconditionError(f"normal must have length {F.dim}")
    if abs(F.inner(N, N) - 1.0) >= tol:
        raise NormalizationError(f"normal has g(N,N) = {F.inner(N, N):.6g}, expected 1")
    if np.abs(F.eta @ N).max() >= tol:
        raise TangencyError("structure vector fields must be tangent: eta^i(N) != 0")
    W = -F.phi @ N
    basis = _adapted_tangent_basis(F, N, W)
    g = F.g
    T = basis @ g @ F.phi @ basis.T
    w = basis @ g @ W
    return HypersurfaceModel(ambient=F, normal=N, tangent_basis=basis, W=W, T=T, w=w)


def random_normal(F: FpkStructure, rng: np.random.Generator) -> np.ndarray:
    """Random g-unit normal orthogonal to every structure vector field."""
    while True:
        v = F.horizontal_part(rng.standard_normal(F.dim))
        norm = np.sqrt(F.inner(v, v))
        if norm > 1e-6:
            v = F.horizontal_part(v / norm)
            return v / np.sqrt(F.inner(v, v))


def _require_tangent(Hs: HypersurfaceModel, *vectors, tol: float = DEFAULT_TOL) -> None:
    for X in vectors:
        scale = max(1.0, float(np.sqrt(Hs.ambient.inner(X, X))))
        if abs(Hs.ambient.inner(X, Hs.normal)) >= tol * scale:
            raise PreconditionError("vector is not tangent to the hypersurface")


def phi_decomposition(Hs: HypersurfaceModel, X, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, float]:
    """Split ``phi X`` into its tangent part ``TX`` and ``w(X) N``."""
    X = np.asarray(X, dtype=float)
    _require_tangent(Hs, X, tol=tol)
    F = Hs.ambient
    wX = F.inner(X, Hs.W)
    return F.phi @ X - wX * Hs.normal, wX


class NormalComponent(NamedTuple):
    value: float
    closed_form: float | None
    residual: float | None


def normal_closed_form(Hs: HypersurfaceModel, F2: float, X, Y, Z) -> float:
    """``F2 (g(Z,phiY) w(X) - g(Z,phiX) w(Y) + 2 g(X,phiY) w(Z))``."""
    F = Hs.ambient
    w = lambda V: F.inner(V, Hs.W)
    pX, pY = F.phi @ X, F.phi @ Y
    return F2 * (F.inner(Z, pY) * w(X) - F.inner(Z, pX) * w(Y) + 2.0 * F.inner(X, pY) * w(Z))


def normal_curvature_component(Hs: HypersurfaceModel, R: CurvatureTensor, X, Y, Z,
                               P: CurvatureParams | None = None,
                               tol: float = DEFAULT_TOL) -> NormalComponent:
    """``g(R(X,Y)Z, N)`` for tangent ``X, Y, Z``, with the F2 closed form when ``P`` is given."""
    X, Y, Z = (np.asarray(V, dtype=float) for V in (X, Y, Z))
    _require_tangent(Hs, X, Y, Z, tol=tol)
    value = Hs.ambient.inner(R.apply(X, Y, Z), Hs.normal)
    if P is None:
        return NormalComponent(value, None, None)
    closed = normal_closed_form(Hs, P.F2, X, Y, Z)
    return NormalComponent(value, closed, abs(value - closed))


def normal_components(Hs: HypersurfaceModel, R: CurvatureTensor) -> np.ndarray:
    """``out[a, b, c] = g(R(t_a, t_b) t_c, N)`` over the tangent basis."""
    t = Hs.tangent_basis
    return np.einsum("ijkm,ai,bj,ck,m->abc", R.low, t, t, t, Hs.normal)


class Witness(NamedTuple):
    X: np.ndarray
    Y: np.ndarray
    Z: np.ndarray
    value: float


def parallel_obstruction_witness(Hs: HypersurfaceModel, R: CurvatureTensor,
                                 P: CurvatureParams | None = None,
                                 tol: float = DEFAULT_TOL, seed: int = 0,
                                 n_random: int = RANDOM_TRIPLES) -> Witness | None:
    """First tangent triple with a non-vanishing normal curvature component.

    Scan order: basis pairs ``(X, Y)`` with ``Z = W``, then every basis
    triple in lexicographic order, then ``n_random`` seeded random triples.
    ``P`` is accepted for reporting symmetry with the closed form; the scan
    itself uses only ``R``.
    """
    t = Hs.tangent_basis
    comps = normal_components(Hs, R)
    w_index = int(np.argmax(np.abs(Hs.w)))
    for a in range(len(t)):
        for b in range(len(t)):
            if abs(comps[a, b, w_index]) > tol:
                return Witness(t[a], t[b], t[w_index], float(comps[a, b, w_index]))
    hits = np.argwhere(np.abs(comps) > tol)
    if len(hits):
        a, b, c = hits[0]
        return Witness(t[a], t[b], t[c], float(comps[a, b, c]))
    rng = np.random.default_rng(seed)
    for _ in range(n_random):
        X, Y, Z = rng.standard_normal((3, len(t))) @ t
        value = Hs.ambient.inner(R.apply(X, Y, Z), Hs.normal)
        if abs(value) > tol:
            return Witness(X, Y, Z, float(value))
    return None


def tangent_curvature(Hs: HypersurfaceModel, R: CurvatureTensor) -> np.ndarray:
    """Tangent projection of the ambient curvature in tangent-basis coordinates.

    ``out[l, a, b, c] = g(R(t_a, t_b) t_c, t_l)``; the basis is g-orthonormal
    so these are components.
    """
    t = Hs.tangent_basis
    return np.einsum("ijkm,ai,bj,ck,lm->labc", R.low, t, t, t, t)


def semi_parallel_kernel(Hs: HypersurfaceModel, R: CurvatureTensor,
                         rank_tol: float = DEFAULT_RANK_TOL) -> KernelBasis:
    """Symmetric tangent forms ``h`` with ``-h(R(X,Y)Z,W) - h(Z,R(X,Y)W) = 0``.

    Forms are returned in tangent-basis coordinates.
    """
    up = tangent_curvature(Hs, R)
    m = Hs.tangent_dim
    entries = action_entries(up, Subspace.SYMMETRIC, sign=-1.0)
    return kernel_from_entries(entries, form_basis(m, Subspace.SYMMETRIC),
                               Subspace.SYMMETRIC, rank_tol, m)


def tangent_span_residuals(Hs: HypersurfaceModel, K: KernelBasis) -> list[float]:
    """Relative residual of each kernel form against ``span{g|T, eta^a (.) eta^b |T}``."""
    F = Hs.ambient
    t = Hs.tangent_basis
    eta_t = F.eta @ t.T   # restriction of each eta^a to the tangent basis
    span = [np.eye(Hs.tangent_dim)]
    for a in range(F.s):
        for b in range(a, F.s):
            span.append(0.5 * (np.outer(eta_t[a], eta_t[b]) + np.outer(eta_t[b], eta_t[a])))
    return [project_onto_span(span, h.matrix)[1] for h in K.forms]
