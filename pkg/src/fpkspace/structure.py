"""Pointwise metric f.pk-structures on a single tangent space.

A structure is stored in a fixed basis of ``R^(2n+s)``:

* ``phi`` -- the (1,1) tensor, ``phi[l, k]`` is the l-th component of ``phi(e_k)``;
* ``xi`` -- shape ``(s, dim)``, row ``i`` holds the components of ``xi_i``;
* ``eta`` -- shape ``(s, dim)``, row ``i`` holds the covector ``eta^i``;
* ``g`` -- the metric, ``g(X, Y) = X @ g @ Y``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import DomainError, StructuralError

DEFAULT_TOL = 1e-10
MAX_CONDITION = 1e3
MAX_RESAMPLES = 16


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FpkStructure:
    n: int
    s: int
    phi: np.ndarray
    xi: np.ndarray
    eta: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        for name in ("phi", "xi", "eta", "g"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @property
    def dim(self) -> int:
        return 2 * self.n + self.s

    def horizontal_part(self, X: np.ndarray) -> np.ndarray:
        """Remove the components of ``X`` along the structure vectors."""
        X = np.asarray(X, dtype=float)
        return X - (self.eta @ X) @ self.xi

    def inner(self, X, Y) -> float:
        return float(np.asarray(X) @ self.g @ np.asarray(Y))


class Symmetry(str, Enum):
    SYMMETRIC = "symmetric"
    SKEW = "skew"
    GENERAL = "general"


@dataclass(frozen=True)
class BilinearForm:
    """A (0,2) tensor ``H(X, Y) = X @ matrix @ Y`` with a symmetry tag."""

    matrix: np.ndarray
    symmetry: Symmetry = Symmetry.GENERAL

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen(self.matrix))
        object.__setattr__(self, "symmetry", Symmetry(self.symmetry))
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise StructuralError(f"bilinear form must be square, got {m.shape}")
        scale = max(1.0, float(np.abs(m).max(initial=0.0)))
        if self.symmetry is Symmetry.SYMMETRIC and np.abs(m - m.T).max() > 1e-8 * scale:
            raise StructuralError("matrix tagged symmetric is not symmetric")
        if self.symmetry is Symmetry.SKEW and np.abs(m + m.T).max() > 1e-8 * scale:
            raise StructuralError("matrix tagged skew is not skew-symmetric")

    @classmethod
    def infer(cls, matrix, tol: float = 1e-10) -> "BilinearForm":
        """Tag ``matrix`` as symmetric or skew when it is so within ``tol`` (relative)."""
        m = np.asarray(matrix, dtype=float)
        scale = max(1.0, float(np.abs(m).max(initial=0.0)))
        if np.abs(m - m.T).max(initial=0.0) <= tol * scale:
            return cls(m, Symmetry.SYMMETRIC)
        if np.abs(m + m.T).max(initial=0.0) <= tol * scale:
            return cls(m, Symmetry.SKEW)
        return cls(m, Symmetry.GENERAL)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __call__(self, X, Y) -> float:
        return float(np.asarray(X) @ self.matrix @ np.asarray(Y))


@dataclass(frozen=True)
class ValidationReport:
    residuals: dict[str, float]
    tolerance: float
    min_eigenvalue: float = field(default=float("nan"))

    @property
    def passed(self) -> bool:
        return all(r < self.tolerance for r in self.residuals.values())

    def to_dict(self) -> dict:
        return {
            "residuals": dict(self.residuals),
            "min_eigenvalue": self.min_eigenvalue,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def canonical_structure(n: int, s: int) -> FpkStructure:
    """Standard structure on the basis ``e_1..e_n, f_1..f_n, xi_1..xi_s``.

    ``phi e_a = f_a``, ``phi f_a = -e_a``, ``phi xi_i = 0`` and ``g`` is the identity.
    """
    if int(n) != n or int(s) != s:
        raise DomainError("n and s must be integers")
    n, s = int(n), int(s)
    if n < 1 or s < 1:
        raise DomainError(f"need n >= 1 and s >= 1, got n={n}, s={s}")
    dim = 2 * n + s
    phi = np.zeros((dim, dim))
    for a in range(n):
        phi[n + a, a] = 1.0
        phi[a, n + a] = -1.0
    xi = np.zeros((s, dim))
    xi[np.arange(s), 2 * n + np.arange(s)] = 1.0
    return FpkStructure(n=n, s=s, phi=phi, xi=xi, eta=xi.copy(), g=np.eye(dim))


def check_shapes(F: FpkStructure) -> None:
    dim = F.dim
    expected = {"phi": (dim, dim), "xi": (F.s, dim), "eta": (F.s, dim), "g": (dim, dim)}
    for name, shape in expected.items():
        got = getattr(F, name).shape
        if got != shape:
            raise StructuralError(f"{name} has shape {got}, expected {shape} for n={F.n}, s={F.s}")


def validate_structure(F: FpkStructure, tol: float = DEFAULT_TOL) -> ValidationReport:
    """Evaluate every algebraic axiom of a metric f.pk-structure.

    Each residual is a maximum absolute entry. Positive-definiteness is
    scored as ``max(0, tol - lambda_min)``, which is below ``tol`` exactly
    when the smallest eigenvalue of ``g`` is positive.
    """
    check_shapes(F)
    phi, xi, eta, g = F.phi, F.xi, F.eta, F.g
    dim, s = F.dim, F.s
    eye = np.eye(dim)

    def amax(a):
        return float(np.abs(a).max(initial=0.0))

    proj = xi.T @ eta  # sum_i xi_i (x) eta^i as an endomorphism
    g_sym = 0.5 * (g + g.T)
    lam_min = float(np.linalg.eigvalsh(g_sym).min())
    residuals = {
        "phi_cubed_plus_phi": amax(phi @ phi @ phi + phi),
        "phi_squared": amax(phi @ phi + eye - proj),
        "eta_xi_duality": amax(eta @ xi.T - np.eye(s)),
        "phi_xi": amax(phi @ xi.T),
        "eta_phi": amax(eta @ phi),
        "metric_compatibility": amax(phi.T @ g @ phi - g + eta.T @ eta),
        "metric_symmetry": amax(g - g.T),
        "metric_positive_definite": max(0.0, tol - lam_min),
    }
    return ValidationReport(residuals=residuals, tolerance=tol, min_eigenvalue=lam_min)


def fundamental_two_form(F: FpkStructure) -> BilinearForm:
    """``Phi(X, Y) = g(X, phi Y)``."""
    m = F.g @ F.phi
    return BilinearForm(0.5 * (m - m.T), Symmetry.SKEW)


def transform_structure(F: FpkStructure, B: np.ndarray) -> FpkStructure:
    """Express ``F`` in the basis whose k-th vector has old components ``B[:, k]``."""
    B = np.asarray(B, dtype=float)
    Binv = np.linalg.inv(B)
    return FpkStructure(
        n=F.n,
        s=F.s,
        phi=Binv @ F.phi @ B,
        xi=F.xi @ Binv.T,
        eta=F.eta @ B,
        g=B.T @ F.g @ B,
    )


def adapted_frame_change(F: FpkStructure, seed: int) -> tuple[FpkStructure, np.ndarray]:
    """Random well-conditioned basis change; returns the new structure and ``B``.

    ``B = Q U`` with ``Q`` orthogonal (QR of a Gaussian matrix) and ``U``
    upper triangular with positive diagonal, so the new metric is not the
    identity in general.
    """
    check_shapes(F)
    rng = np.random.default_rng(seed)
    dim = F.dim
    for _ in range(MAX_RESAMPLES):
        Q, r = np.linalg.qr(rng.standard_normal((dim, dim)))
        Q = Q * np.sign(np.diag(r))
        U = np.triu(0.3 * rng.standard_normal((dim, dim)), k=1)
        U += np.diag(np.exp(0.3 * rng.standard_normal(dim)))
        B = Q @ U
        if np.linalg.cond(B) <= MAX_CONDITION:
            return transform_structure(F, B), B
    raise DomainError(f"no basis change with condition number <= {MAX_CONDITION:g} "
                      f"after {MAX_RESAMPLES} draws (seed={seed})")


def random_adapted_frame(F: FpkStructure, seed: int) -> FpkStructure:
    return adapted_frame_change(F, seed)[0]


def numerical_rank(a: np.ndarray, tol: float = DEFAULT_TOL) -> int:
    sv = np.linalg.svd(np.asarray(a, dtype=float), compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int((sv > tol * max(1.0, sv[0])).sum())


def g_orthonormal_frame(g: np.ndarray) -> np.ndarray:
    """Columns form a g-orthonormal basis (inverse transpose of the Cholesky factor)."""
    L = np.linalg.cholesky(0.5 * (g + g.T))
    return np.linalg.inv(L).T
