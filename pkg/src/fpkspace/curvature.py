"""Model curvature of a generalized f.pk-space form at a point.

Index conventions
-----------------
``up[l, i, j, k]`` is the l-th component of ``R(e_i, e_j) e_k`` and
``low[i, j, k, m] = g(R(e_i, e_j) e_k, e_m)``.  With this lowering the
sectional curvature of a plane ``{X, Y}`` is ``low(X, Y, Y, X)`` divided by
the Gram determinant.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import DomainError, PreconditionError, StructuralError
from .structure import (
    DEFAULT_TOL,
    BilinearForm,
    FpkStructure,
    check_shapes,
    g_orthonormal_frame,
)


class PresetKind(str, Enum):
    S_SPACE_FORM = "s_space_form"
    SASAKIAN = "sasakian"
    KENMOTSU = "kenmotsu"
    COSYMPLECTIC = "cosymplectic"
    GENERALIZED_SASAKIAN = "generalized_sasakian"

    @classmethod
    def parse(cls, value: "str | PresetKind") -> "PresetKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).replace("-", "_").lower())
        except ValueError:
            raise DomainError(f"unknown preset {value!r}") from None


@dataclass(frozen=True)
class CurvatureParams:
    F1: float
    F2: float
    Fij: np.ndarray

    def __post_init__(self):
        Fij = np.array(self.Fij, dtype=float)
        if Fij.ndim != 2 or Fij.shape[0] != Fij.shape[1]:
            raise StructuralError(f"Fij must be square, got shape {Fij.shape}")
        Fij.setflags(write=False)
        object.__setattr__(self, "Fij", Fij)
        object.__setattr__(self, "F1", float(self.F1))
        object.__setattr__(self, "F2", float(self.F2))

    @property
    def s(self) -> int:
        return self.Fij.shape[0]

    @property
    def phi_sectional(self) -> float:
        return self.F1 + 3.0 * self.F2

    @property
    def has_nonzero_family(self) -> bool:
        return bool(np.any(self.Fij != 0.0))

    def to_dict(self) -> dict:
        return {"F1": self.F1, "F2": self.F2, "Fij": self.Fij.tolist()}


def preset_params(kind, c: float = 0.0, s: int = 1,
                  extra: Sequence[float] | None = None) -> CurvatureParams:
    """Parameter values of the classical special cases.

    ``generalized_sasakian`` takes ``extra = (f1, f2, f3)`` and maps it to
    ``F1 = f1, F2 = f2, F11 = f1 - f3``; ``c`` is ignored there.
    """
    kind = PresetKind.parse(kind)
    if s < 1:
        raise DomainError(f"s must be >= 1, got {s}")
    if kind is not PresetKind.S_SPACE_FORM and s != 1:
        raise DomainError(f"preset {kind.value} is defined only for s = 1, got s={s}")
    if kind is PresetKind.GENERALIZED_SASAKIAN:
        if extra is None or len(extra) != 3:
            raise DomainError("generalized_sasakian needs extra=(f1, f2, f3)")
        f1, f2, f3 = map(float, extra)
        return CurvatureParams(f1, f2, [[f1 - f3]])
    if extra is not None:
        raise DomainError(f"preset {kind.value} takes no extra parameters")
    c = float(c)
    if kind is PresetKind.S_SPACE_FORM:
        return CurvatureParams((c + 3 * s) / 4, (c - s) / 4, np.ones((s, s)))
    if kind is PresetKind.SASAKIAN:
        return CurvatureParams((c + 3) / 4, (c - 1) / 4, [[1.0]])
    if kind is PresetKind.KENMOTSU:
        return CurvatureParams((c - 3) / 4, (c + 1) / 4, [[-1.0]])
    return CurvatureParams(c / 4, c / 4, [[0.0]])


@dataclass(frozen=True)
class CurvatureTensor:
    up: np.ndarray
    low: np.ndarray

    def __post_init__(self):
        for name in ("up", "low"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def dim(self) -> int:
        return self.up.shape[0]

    @classmethod
    def from_up(cls, up: np.ndarray, g: np.ndarray) -> "CurvatureTensor":
        return cls(up=up, low=np.einsum("lijk,lm->ijkm", up, g))

    def apply(self, X, Y, Z) -> np.ndarray:
        """Components of ``R(X, Y) Z`` for arbitrary vectors."""
        return np.einsum("lijk,i,j,k->l", self.up, X, Y, Z)

    def transformed(self, B: np.ndarray, g_new: np.ndarray) -> "CurvatureTensor":
        """Components in the basis given by the columns of ``B``."""
        Binv = np.linalg.inv(B)
        up = np.einsum("al,lijk,ib,jc,kd->abcd", Binv, self.up, B, B, B)
        return CurvatureTensor.from_up(up, g_new)


def model_curvature(F: FpkStructure, P: CurvatureParams) -> CurvatureTensor:
    """Evaluate the three-block model tensor on every basis triple.

    ``R(X,Y)Z = F1 (g(phiX,phiZ) phi^2 Y - g(phiY,phiZ) phi^2 X)
              + F2 (g(Z,phiY) phiX - g(Z,phiX) phiY + 2 g(X,phiY) phiZ)
              + sum_ij Fij (eta^i(X) eta^j(Z) phi^2 Y - eta^i(Y) eta^j(Z) phi^2 X
                            + g(phiY,phiZ) eta^i(X) xi_j - g(phiX,phiZ) eta^i(Y) xi_j)``
    """
    check_shapes(F)
    if P.s != F.s:
        raise StructuralError(f"params have s={P.s}, structure has s={F.s}")
    phi, g = F.phi, F.g
    p2 = phi @ phi
    A = phi.T @ g @ phi            # A[i, k] = g(phi e_i, phi e_k)
    Gp = g @ phi                   # Gp[k, j] = g(e_k, phi e_j)
    M = F.eta.T @ P.Fij @ F.eta    # M[i, k] = sum Fab eta^a_i eta^b_k
    Q = F.eta.T @ P.Fij @ F.xi     # Q[i, l] = sum Fab eta^a_i xi_b^l

    up = P.F1 * (np.einsum("ik,lj->lijk", A, p2) - np.einsum("jk,li->lijk", A, p2))
    up += P.F2 * (np.einsum("kj,li->lijk", Gp, phi)
                  - np.einsum("ki,lj->lijk", Gp, phi)
                  + 2.0 * np.einsum("ij,lk->lijk", Gp, phi))
    up += (np.einsum("ik,lj->lijk", M, p2) - np.einsum("jk,li->lijk", M, p2)
           + np.einsum("jk,il->lijk", A, Q) - np.einsum("ik,jl->lijk", A, Q))
    return CurvatureTensor.from_up(up, g)


@dataclass(frozen=True)
class SymmetryReport:
    residuals: dict[str, float]
    tolerance: float

    @property
    def flags(self) -> dict[str, bool]:
        return {k: v < self.tolerance for k, v in self.residuals.items()}

    @property
    def passed(self) -> bool:
        return all(self.flags.values())

    def to_dict(self) -> dict:
        return {"residuals": dict(self.residuals), "flags": self.flags,
                "tolerance": self.tolerance}


def symmetry_audit(R: CurvatureTensor, tol: float = DEFAULT_TOL) -> SymmetryReport:
    L = R.low

    def amax(a):
        return float(np.abs(a).max(initial=0.0))

    residuals = {
        "skew_12": amax(L + L.transpose(1, 0, 2, 3)),
        "skew_34": amax(L + L.transpose(0, 1, 3, 2)),
        "pair_symmetry": amax(L - L.transpose(2, 3, 0, 1)),
        "first_bianchi": amax(L + L.transpose(1, 2, 0, 3) + L.transpose(2, 0, 1, 3)),
    }
    return SymmetryReport(residuals=residuals, tolerance=tol)


def phi_sectional_curvature(F: FpkStructure, R: CurvatureTensor, X,
                            tol: float = DEFAULT_TOL) -> float:
    """Sectional curvature of the plane spanned by ``X`` and ``phi X``.

    ``X`` must be a unit vector orthogonal to every structure vector field.
    """
    X = np.asarray(X, dtype=float)
    if X.shape != (F.dim,):
        raise StructuralError(f"X must have length {F.dim}")
    if np.abs(F.eta @ X).max() >= tol:
        raise PreconditionError("X is not orthogonal to the structure vector fields")
    if abs(F.inner(X, X) - 1.0) >= tol:
        raise PreconditionError("X is not a unit vector")
    Y = F.phi @ X
    denom = F.inner(X, X) * F.inner(Y, Y) - F.inner(X, Y) ** 2
    num = float(np.einsum("ijkm,i,j,k,m->", R.low, X, Y, Y, X))
    return num / denom


def random_horizontal_unit(F: FpkStructure, rng: np.random.Generator) -> np.ndarray:
    """Random g-unit vector annihilated by every ``eta^i``."""
    while True:
        X = F.horizontal_part(rng.standard_normal(F.dim))
        norm = np.sqrt(F.inner(X, X))
        if norm > 1e-6:
            X = X / norm
            # one refinement pass keeps eta(X) at roundoff level
            return F.horizontal_part(X) / np.sqrt(F.inner(X, X))


def ricci_tensor(R: CurvatureTensor, g: np.ndarray) -> BilinearForm:
    """``S(Y, Z) = trace(X -> R(X, Y) Z)`` via a g-orthonormal frame."""
    E = g_orthonormal_frame(np.asarray(g, dtype=float))
    # S(Y,Z) = sum_a g(R(E_a, Y) Z, E_a)
    S = np.einsum("ia,ijkm,ma->jk", E, R.low, E)
    return BilinearForm.infer(S, tol=1e-10)
