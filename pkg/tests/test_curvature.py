import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fpkspace.curvature import (
    CurvatureParams,
    PresetKind,
    model_curvature,
    phi_sectional_curvature,
    preset_params,
    random_horizontal_unit,
    ricci_tensor,
    symmetry_audit,
)
from fpkspace.errors import DomainError, PreconditionError, StructuralError
from fpkspace.oracle import brute_force_curvature, curvature_terms
from fpkspace.parallel import project_onto_span, structure_span_basis
from fpkspace.structure import Symmetry, adapted_frame_change, canonical_structure, random_adapted_frame


# Preset values as printed in the special-case remarks for the Sasakian,
# S-space-form, cosymplectic and Kenmotsu cases.
@pytest.mark.parametrize("kind,c,s,F1,F2,Fij", [
    ("sasakian", 5, 1, 2.0, 1.0, [[1.0]]),
    ("s_space_form", 1, 2, 7 / 4, -1 / 4, [[1.0, 1.0], [1.0, 1.0]]),
    ("cosymplectic", 0, 1, 0.0, 0.0, [[0.0]]),
    ("kenmotsu", 1, 1, -1 / 2, 1 / 2, [[-1.0]]),
])
def test_presets(kind, c, s, F1, F2, Fij):
    P = preset_params(kind, c, s)
    assert P.F1 == F1 and P.F2 == F2
    np.testing.assert_array_equal(P.Fij, Fij)


def test_generalized_sasakian_mapping():
    P = preset_params("generalized-sasakian", extra=(1.5, 0.25, 0.5))
    assert (P.F1, P.F2) == (1.5, 0.25)
    assert P.Fij[0, 0] == 1.0   # f1 - f3


@pytest.mark.parametrize("c", [-3.0, 0.0, 2.5])
def test_sasakian_matches_generalized_f3_equals_f2(c):
    # the Sasakian preset is the generalized one with f3 = f2 = (c - 1)/4
    P = preset_params("sasakian", c)
    Q = preset_params("generalized_sasakian", extra=((c + 3) / 4, (c - 1) / 4, (c - 1) / 4))
    assert (P.F1, P.F2, P.Fij[0, 0]) == (Q.F1, Q.F2, Q.Fij[0, 0])


@pytest.mark.parametrize("kind", ["sasakian", "kenmotsu", "cosymplectic"])
def test_preset_s_mismatch(kind):
    with pytest.raises(DomainError):
        preset_params(kind, 1.0, s=2)


def test_preset_generalized_needs_extra():
    with pytest.raises(DomainError):
        preset_params(PresetKind.GENERALIZED_SASAKIAN, 1.0)
    with pytest.raises(DomainError):
        preset_params("bogus", 1.0)


def test_zero_params_zero_tensor():
    F = canonical_structure(2, 2)
    R = model_curvature(F, CurvatureParams(0, 0, np.zeros((2, 2))))
    assert not R.up.any() and not R.low.any()


def test_shape_mismatch():
    with pytest.raises(StructuralError):
        model_curvature(canonical_structure(1, 2), preset_params("sasakian", 1.0))


@pytest.mark.parametrize("c", [-2.0, 0.5, 7.0])
def test_R_e1_xi_e1(c):
    F = canonical_structure(1, 1)
    P = preset_params("sasakian", c)
    R = model_curvature(F, P)
    e1, xi = np.eye(3)[0], np.eye(3)[2]
    np.testing.assert_allclose(R.apply(e1, xi, e1), -P.Fij[0, 0] * xi, atol=1e-14)
    np.testing.assert_allclose(curvature_terms(F, P, e1, xi, e1), -xi, atol=1e-14)


def test_phi_plane_component_sign():
    # low[i,j,k,m] = g(R(e_i,e_j)e_k, e_m): the phi-sectional value c sits at (e1,f1,f1,e1)
    F = canonical_structure(2, 1)
    R = model_curvature(F, preset_params("sasakian", 5.0))
    e1, f1 = 0, 2
    assert R.low[e1, f1, f1, e1] == pytest.approx(5.0, abs=1e-12)
    assert R.low[e1, f1, e1, f1] == pytest.approx(-5.0, abs=1e-12)


@pytest.mark.parametrize("n,s", [(1, 1), (2, 2), (3, 1)])
def test_matches_brute_force(n, s):
    rng = np.random.default_rng(n * 10 + s)
    F = random_adapted_frame(canonical_structure(n, s), n + s)
    P = CurvatureParams(rng.normal(), rng.normal(), rng.normal(size=(s, s)))
    R = model_curvature(F, P)
    np.testing.assert_allclose(R.up, brute_force_curvature(F, P), atol=1e-12)


def test_lowering_consistent():
    F = random_adapted_frame(canonical_structure(2, 1), 2)
    R = model_curvature(F, preset_params("kenmotsu", 2.0))
    np.testing.assert_allclose(R.low, np.einsum("lijk,lm->ijkm", R.up, F.g), atol=1e-13)


def test_audit_zero_tensor():
    F = canonical_structure(1, 1)
    assert symmetry_audit(model_curvature(F, CurvatureParams(0, 0, [[0]]))).passed


@pytest.mark.parametrize("c", [-1.0, 1.0, 5.0])
def test_audit_s_space_form(c):
    R = model_curvature(canonical_structure(2, 2), preset_params("s_space_form", c, 2))
    assert symmetry_audit(R, 1e-10).passed


def test_audit_nonsymmetric_family():
    P = CurvatureParams(0, 0, [[0, 1], [0, 0]])
    rep = symmetry_audit(model_curvature(canonical_structure(1, 2), P), 1e-10)
    assert rep.flags["skew_12"]
    assert rep.residuals["pair_symmetry"] > 0.1


@settings(max_examples=25, deadline=None)
@given(n=st.integers(1, 3), s=st.integers(1, 3), seed=st.integers(0, 2**31))
def test_skew_in_first_pair_for_any_params(n, s, seed):
    rng = np.random.default_rng(seed)
    F = random_adapted_frame(canonical_structure(n, s), seed % 1000)
    P = CurvatureParams(rng.normal(), rng.normal(), rng.normal(size=(s, s)))
    R = model_curvature(F, P)
    assert np.abs(R.up + R.up.transpose(0, 2, 1, 3)).max() < 1e-12


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_frame_covariance(seed):
    F = canonical_structure(2, 2)
    P = preset_params("s_space_form", 3.0, 2)
    Fr, B = adapted_frame_change(F, seed)
    direct = model_curvature(Fr, P)
    moved = model_curvature(F, P).transformed(B, Fr.g)
    assert np.abs(direct.up - moved.up).max() < 1e-8


def test_phi_sectional_sasakian():
    F = canonical_structure(2, 1)
    R = model_curvature(F, preset_params("sasakian", 5.0))
    assert phi_sectional_curvature(F, R, np.eye(5)[0]) == pytest.approx(5.0, abs=1e-12)


def test_phi_sectional_cosymplectic_zero():
    F = canonical_structure(2, 1)
    R = model_curvature(F, preset_params("cosymplectic", 0.0))
    X = np.array([0.6, 0, 0, 0.8, 0])
    assert phi_sectional_curvature(F, R, X) == 0.0


def test_phi_sectional_s_space_form_mixed_vector():
    F = canonical_structure(2, 2)
    R = model_curvature(F, preset_params("s_space_form", 1.0, 2))
    X = (np.eye(6)[0] + np.eye(6)[3]) / np.sqrt(2)   # (e1 + f2)/sqrt 2
    assert phi_sectional_curvature(F, R, X) == pytest.approx(1.0, abs=1e-10)


def test_phi_sectional_constant_over_random_vectors():
    F = random_adapted_frame(canonical_structure(3, 2), 9)
    P = CurvatureParams(0.3, -1.1, [[2.0, 0.5], [-0.4, 1.0]])
    R = model_curvature(F, P)
    rng = np.random.default_rng(0)
    dev = max(abs(phi_sectional_curvature(F, R, random_horizontal_unit(F, rng)) - P.phi_sectional)
              for _ in range(100))
    assert dev < 1e-9


def test_phi_sectional_preconditions():
    F = canonical_structure(1, 1)
    R = model_curvature(F, preset_params("sasakian", 1.0))
    with pytest.raises(PreconditionError):
        phi_sectional_curvature(F, R, np.eye(3)[2])
    with pytest.raises(PreconditionError):
        phi_sectional_curvature(F, R, 2 * np.eye(3)[0])


def test_ricci_zero():
    F = canonical_structure(1, 2)
    S = ricci_tensor(model_curvature(F, CurvatureParams(0, 0, np.zeros((2, 2)))), F.g)
    assert not S.matrix.any()


@pytest.mark.parametrize("n,c", [(2, 5.0), (3, -3.0), (1, 2.0)])
def test_ricci_sasakian_closed_form(n, c):
    # Sasakian space form: S = (n(c+3)/2 + (c-1)/2) g - (n+1)(c-1)/2 eta (x) eta
    F = canonical_structure(n, 1)
    S = ricci_tensor(model_curvature(F, preset_params("sasakian", c)), F.g)
    a = n * (c + 3) / 2 + (c - 1) / 2
    b = -(n + 1) * (c - 1) / 2
    expected = a * F.g + b * np.outer(F.eta[0], F.eta[0])
    np.testing.assert_allclose(S.matrix, expected, atol=1e-12)
    coeffs, res = project_onto_span(structure_span_basis(F), S.matrix)
    np.testing.assert_allclose(coeffs, [a, b], atol=1e-10)
    assert res < 1e-10


def test_ricci_equals_plain_trace_in_random_frame():
    F = random_adapted_frame(canonical_structure(2, 2), 6)
    R = model_curvature(F, preset_params("s_space_form", 1.0, 2))
    S = ricci_tensor(R, F.g)
    np.testing.assert_allclose(S.matrix, np.einsum("iijk->jk", R.up), atol=1e-10)
    assert S.symmetry is Symmetry.SYMMETRIC
    _, res = project_onto_span(structure_span_basis(F), S.matrix)
    assert res < 1e-10
