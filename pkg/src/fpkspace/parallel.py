"""Second-order parallel tensors via the kernel of the curvature action.

A parallel (0,2) tensor ``H`` satisfies ``H(R(X,Y)Z, W) + H(Z, R(X,Y)W) = 0``.
That condition is linear in ``H``; it is assembled here as a matrix acting
on an isometric vectorization of the symmetric or skew forms, and its kernel
is compared with ``span{g, eta^a (.) eta^b}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .curvature import CurvatureParams, CurvatureTensor, model_curvature, ricci_tensor
from .errors import StructuralError
from .oracle import brute_force_nullity
from .structure import BilinearForm, FpkStructure, Symmetry

DEFAULT_RANK_TOL = 1e-9
DEFAULT_SPAN_TOL = 1e-8
ORACLE_MAX_DIM = 9


class Subspace(str, Enum):
    FULL = "full"
    SYMMETRIC = "symmetric"
    SKEW = "skew"

    @property
    def symmetry(self) -> Symmetry:
        return {Subspace.FULL: Symmetry.GENERAL, Subspace.SYMMETRIC: Symmetry.SYMMETRIC,
                Subspace.SKEW: Symmetry.SKEW}[self]


def form_basis(dim: int, subspace: Subspace | str) -> list[np.ndarray]:
    """Frobenius-orthonormal basis of the chosen form space, row-major ``(i, j)`` order.

    symmetric: ``E_ii`` and ``(E_ij + E_ji)/sqrt 2`` for ``i < j``;
    skew: ``(E_ij - E_ji)/sqrt 2`` for ``i < j``; full: every ``E_ij``.
    """
    subspace = Subspace(subspace)
    r = 1.0 / np.sqrt(2.0)
    out = []
    for i in range(dim):
        for j in range(dim):
            B = np.zeros((dim, dim))
            if subspace is Subspace.FULL:
                B[i, j] = 1.0
            elif j < i:
                continue
            elif subspace is Subspace.SYMMETRIC:
                if i == j:
                    B[i, i] = 1.0
                else:
                    B[i, j] = B[j, i] = r
            else:
                if i == j:
                    continue
                B[i, j], B[j, i] = r, -r
            out.append(B)
    return out


def _action(up: np.ndarray, H: np.ndarray) -> np.ndarray:
    # A[i,j,k,m] = H(R(e_i,e_j)e_k, e_m) + H(e_k, R(e_i,e_j)e_m)
    return np.einsum("lijk,lm->ijkm", up, H) + np.einsum("kl,lijm->ijkm", H, up)


def curvature_action(R: CurvatureTensor, H: BilinearForm | np.ndarray) -> np.ndarray:
    """``A(H)(X,Y,Z,W) = H(R(X,Y)Z, W) + H(Z, R(X,Y)W)`` on all basis 4-tuples."""
    m = H.matrix if isinstance(H, BilinearForm) else np.asarray(H, dtype=float)
    if m.shape != (R.dim, R.dim):
        raise StructuralError(f"form has shape {m.shape}, curvature has dim {R.dim}")
    return _action(R.up, m)


@dataclass(frozen=True)
class ActionMatrix:
    """Matrix of ``H -> A(H)`` restricted to one form subspace.

    Rows are the 4-tuples ``(i, j, k, m)`` with ``i < j`` (``A(H)`` is
    skew in its first two slots) in lexicographic order; columns follow
    :func:`form_basis`.
    """

    entries: np.ndarray
    subspace: Subspace
    dim: int

    @property
    def basis(self) -> list[np.ndarray]:
        return form_basis(self.dim, self.subspace)


def _pair_rows(dim: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(dim, k=1)


def action_entries(up: np.ndarray, subspace: Subspace | str, sign: float = 1.0) -> np.ndarray:
    dim = up.shape[0]
    iu, ju = _pair_rows(dim)
    basis = form_basis(dim, subspace)
    if not basis:
        return np.zeros((len(iu) * dim * dim, 0))
    stack = np.array(basis)                         # (ncols, dim, dim)
    A = (np.einsum("lijk,blm->bijkm", up, stack)
         + np.einsum("bkl,lijm->bijkm", stack, up))
    A = A[:, iu, ju]                                # (ncols, npairs, dim, dim)
    return sign * A.reshape(len(basis), -1).T


def assemble_action_matrix(R: CurvatureTensor, subspace: Subspace | str) -> ActionMatrix:
    subspace = Subspace(subspace)
    return ActionMatrix(action_entries(R.up, subspace), subspace, R.dim)


@dataclass(frozen=True)
class KernelBasis:
    forms: list[BilinearForm]
    singular_values: np.ndarray
    tolerance: float
    subspace: Subspace = Subspace.SYMMETRIC

    @property
    def dimension(self) -> int:
        return len(self.forms)


def kernel_from_entries(entries: np.ndarray, basis: list[np.ndarray], subspace: Subspace,
                        rank_tol: float, dim: int) -> KernelBasis:
    ncols = entries.shape[1]
    if ncols == 0:
        return KernelBasis([], np.zeros(0), 0.0, subspace)
    _, sv, vt = np.linalg.svd(entries, full_matrices=True)
    smax = sv[0] if sv.size else 0.0
    thresh = rank_tol * smax * dim
    rank = int((sv > thresh).sum()) if smax > 0.0 else 0
    stack = np.array(basis)
    forms = []
    for v in vt[rank:]:
        m = np.tensordot(v, stack, axes=1)
        if subspace is Subspace.SYMMETRIC:
            m = 0.5 * (m + m.T)
        elif subspace is Subspace.SKEW:
            m = 0.5 * (m - m.T)
        forms.append(BilinearForm(m, subspace.symmetry))
    return KernelBasis(forms, sv, thresh, subspace)


def nullspace(M: ActionMatrix, rank_tol: float = DEFAULT_RANK_TOL) -> KernelBasis:
    """Orthonormal kernel basis; singular values ``<= rank_tol * sigma_max * dim`` count as zero."""
    return kernel_from_entries(M.entries, M.basis, M.subspace, rank_tol, M.dim)


def structure_span_basis(F: FpkStructure) -> list[BilinearForm]:
    """``g`` followed by ``eta^a (.) eta^b`` for ``a <= b``."""
    out = [BilinearForm(F.g, Symmetry.SYMMETRIC)]
    for a in range(F.s):
        for b in range(a, F.s):
            m = 0.5 * (np.outer(F.eta[a], F.eta[b]) + np.outer(F.eta[b], F.eta[a]))
            out.append(BilinearForm(m, Symmetry.SYMMETRIC))
    return out


def span_labels(s: int) -> list[str]:
    return ["g"] + [f"eta{a + 1}.eta{b + 1}" for a in range(s) for b in range(a, s)]


def project_onto_span(forms: list[BilinearForm] | list[np.ndarray],
                      target: np.ndarray) -> tuple[np.ndarray, float]:
    """Least-squares coefficients and the relative Frobenius residual."""
    mats = [f.matrix if isinstance(f, BilinearForm) else np.asarray(f) for f in forms]
    target = np.asarray(target, dtype=float)
    norm = np.linalg.norm(target)
    if not mats:
        return np.zeros(0), (0.0 if norm == 0.0 else 1.0)
    G = np.array([m.ravel() for m in mats]).T
    coeffs, *_ = np.linalg.lstsq(G, target.ravel(), rcond=None)
    if norm == 0.0:
        return coeffs, 0.0
    return coeffs, float(np.linalg.norm(G @ coeffs - target.ravel()) / norm)


class Verdict(str, Enum):
    CONTAINED = "contained_in_span"
    NOT_CONTAINED = "not_contained"


@dataclass(frozen=True)
class ClassificationReport:
    kernel_dimension: int
    residuals: list[float]
    coefficients: list[dict[str, float]]
    verdict: Verdict
    tolerance: float
    # span elements that are themselves annihilated by the action
    reverse_containment: dict[str, bool] = field(default_factory=dict)
    reverse_residuals: dict[str, float] = field(default_factory=dict)
    # max |H(X, xi_r) - sum_a eta^a(X) H(xi_a, xi_r)| over kernel elements
    xi_column_residual: float = 0.0
    # spread of sum_j (F_kj / F_kr) H(xi_j, xi_r) over admissible (k, r)
    lambda_spread: float = 0.0

    def to_dict(self) -> dict:
        return {
            "kernel_dimension": self.kernel_dimension,
            "verdict": self.verdict.value,
            "residuals": list(self.residuals),
            "coefficients": [dict(c) for c in self.coefficients],
            "reverse_containment": dict(self.reverse_containment),
            "reverse_residuals": dict(self.reverse_residuals),
            "xi_column_residual": self.xi_column_residual,
            "lambda_spread": self.lambda_spread,
            "tolerance": self.tolerance,
        }


def _lambda_spread(F: FpkStructure, P: CurvatureParams, H: np.ndarray) -> float:
    Hxx = F.xi @ H @ F.xi.T
    values = []
    for k in range(F.s):
        for r in range(F.s):
            if P.Fij[k, r] != 0.0:
                values.append(float(P.Fij[k] @ Hxx[:, r]) / P.Fij[k, r])
    return max(values) - min(values) if values else 0.0


def classify_symmetric_kernel(F: FpkStructure, K: KernelBasis, tol: float = DEFAULT_SPAN_TOL,
                              R: CurvatureTensor | None = None,
                              P: CurvatureParams | None = None) -> ClassificationReport:
    """Project every kernel element onto the structure span.

    ``R`` enables the reverse check (which span elements lie in the kernel);
    ``P`` enables the coefficient-consistency spread.
    """
    span = structure_span_basis(F)
    labels = span_labels(F.s)
    residuals, coeffs = [], []
    xi_res, spread = 0.0, 0.0
    for H in K.forms:
        c, res = project_onto_span(span, H.matrix)
        residuals.append(res)
        coeffs.append(dict(zip(labels, map(float, c))))
        m = H.matrix
        scale = max(np.linalg.norm(m), 1e-300)
        # H(X, xi_r) against sum_a eta^a(X) H(xi_a, xi_r), X over the basis
        lhs = m @ F.xi.T
        rhs = F.eta.T @ (F.xi @ m @ F.xi.T)
        xi_res = max(xi_res, float(np.abs(lhs - rhs).max(initial=0.0)) / scale)
        if P is not None:
            spread = max(spread, _lambda_spread(F, P, m / scale))
    verdict = Verdict.CONTAINED if all(r < tol for r in residuals) else Verdict.NOT_CONTAINED
    rev, rev_res = {}, {}
    if R is not None:
        rnorm = max(np.abs(R.up).max(initial=0.0), 1.0)
        for label, B in zip(labels, span):
            r = float(np.abs(curvature_action(R, B)).max(initial=0.0))
            r /= rnorm * max(np.abs(B.matrix).max(initial=0.0), 1e-300)
            rev_res[label] = r
            rev[label] = r < tol
    return ClassificationReport(
        kernel_dimension=K.dimension,
        residuals=residuals,
        coefficients=coeffs,
        verdict=verdict,
        tolerance=tol,
        reverse_containment=rev,
        reverse_residuals=rev_res,
        xi_column_residual=xi_res,
        lambda_spread=spread,
    )


@dataclass(frozen=True)
class RicciReport:
    coefficients: dict[str, float]
    membership_residual: float
    semisymmetry_residual: float  # max |S(R(X,Y)Z,W) + S(Z,R(X,Y)W)|
    symmetric: bool

    def to_dict(self) -> dict:
        return {
            "coefficients": dict(self.coefficients),
            "membership_residual": self.membership_residual,
            "semisymmetry_residual": self.semisymmetry_residual,
            "symmetric": self.symmetric,
        }


def ricci_report(F: FpkStructure, R: CurvatureTensor) -> RicciReport:
    S = ricci_tensor(R, F.g)
    c, res = project_onto_span(structure_span_basis(F), S.matrix)
    semi = float(np.abs(curvature_action(R, S)).max(initial=0.0))
    return RicciReport(
        coefficients=dict(zip(span_labels(F.s), map(float, c))),
        membership_residual=res,
        semisymmetry_residual=semi,
        symmetric=S.symmetry is Symmetry.SYMMETRIC,
    )


class Outcome(str, Enum):
    CONFIRMED = "confirmed"
    REFUTED = "refuted"
    HYPOTHESIS_NOT_MET = "hypothesis_not_met"


@dataclass(frozen=True)
class TheoremReport:
    hypothesis_met: bool          # some F_ij != 0
    s_at_least_two: bool
    symmetric_dimension: int
    symmetric_oracle_dimension: int | None
    classification: ClassificationReport
    skew_dimension: int
    skew_oracle_dimension: int | None
    ricci: RicciReport

    @property
    def symmetric_outcome(self) -> Outcome:
        if not self.hypothesis_met:
            return Outcome.HYPOTHESIS_NOT_MET
        ok = self.classification.verdict is Verdict.CONTAINED
        return Outcome.CONFIRMED if ok else Outcome.REFUTED

    @property
    def skew_outcome(self) -> Outcome:
        if not self.hypothesis_met:
            return Outcome.HYPOTHESIS_NOT_MET
        return Outcome.CONFIRMED if self.skew_dimension == 0 else Outcome.REFUTED

    def to_dict(self) -> dict:
        return {
            "hypothesis_met": self.hypothesis_met,
            "s_at_least_two": self.s_at_least_two,
            "symmetric": {
                "dimension": self.symmetric_dimension,
                "oracle_dimension": self.symmetric_oracle_dimension,
                "outcome": self.symmetric_outcome.value,
                "classification": self.classification.to_dict(),
            },
            "skew": {
                "dimension": self.skew_dimension,
                "oracle_dimension": self.skew_oracle_dimension,
                "outcome": self.skew_outcome.value,
            },
            "ricci": self.ricci.to_dict(),
        }


def verify_theorems(F: FpkStructure, P: CurvatureParams, tol: float = DEFAULT_SPAN_TOL,
                    rank_tol: float = DEFAULT_RANK_TOL, with_oracle: bool = True) -> TheoremReport:
    """Run the symmetric and skew kernel pipelines plus the Ricci checks.

    The brute-force oracle dimensions are filled in when ``with_oracle`` is
    set and ``dim <= ORACLE_MAX_DIM``.
    """
    R = model_curvature(F, P)
    Ksym = nullspace(assemble_action_matrix(R, Subspace.SYMMETRIC), rank_tol)
    Kskew = nullspace(assemble_action_matrix(R, Subspace.SKEW), rank_tol)
    cls = classify_symmetric_kernel(F, Ksym, tol, R=R, P=P)
    use_oracle = with_oracle and F.dim <= ORACLE_MAX_DIM
    return TheoremReport(
        hypothesis_met=P.has_nonzero_family,
        s_at_least_two=F.s >= 2,
        symmetric_dimension=Ksym.dimension,
        symmetric_oracle_dimension=brute_force_nullity(F, P, "symmetric", rank_tol) if use_oracle else None,
        classification=cls,
        skew_dimension=Kskew.dimension,
        skew_oracle_dimension=brute_force_nullity(F, P, "skew", rank_tol) if use_oracle else None,
        ricci=ricci_report(F, R),
    )
