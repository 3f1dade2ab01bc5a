import numpy as np
import pytest
from conftest import metric
from hypothesis import given
from hypothesis import strategies as st
from oracles import principal_ricci, scalar_curvature

from metriclie import catalog, samples
from metriclie.catalog import FamilyParams, SemidirectSpec, canonicalize, make, make_named, make_semidirect
from metriclie.core import ValidationError, change_basis, from_matrix_basis
from metriclie.curvature import riemann, sectional
from metriclie.homogeneous import is_cyclic, tv_decompose

FIXED = [
    FamilyParams("Gn", {"alphas": [1.0, 2.0]}),
    FamilyParams("Gn", {"alphas": [0.5, -1.0, 2.5, 0.25]}),
    FamilyParams("HyperbolicHn", {"n": 4, "c": 1.5}),
    FamilyParams("E11", {"alpha": 0.8}),
    FamilyParams("Hnp1", {"rhos": [1.0, 1.0, 1.0], "lambdas": [1.0, 0.0]}),
    FamilyParams("Hnp1", {"rhos": [1.0, -2.0], "lambdas": [0.5]}),
    FamilyParams("HnpHat", {"sigmas": [1.0, -1.0], "mus": [1.0, 2.0, -3.0]}),
    FamilyParams("HnpHat", {"sigmas": [0.7, -0.7], "mus": [1.0, 0.5, 0.25]}),
    FamilyParams("Sl2Cyclic", {"l1": 1.0, "l2": 1.0}),
    FamilyParams("Sl2Cyclic", {"l1": 0.3, "l2": 2.0}),
    FamilyParams("So3Biinv", {"beta": 1.0}),
    FamilyParams("So3Biinv", {"beta": 2.5}),
    FamilyParams("Heisenberg", {}),
    FamilyParams("Abelian", {"n": 3}),
    FamilyParams("DirectProduct", {}, 0, (FamilyParams("Sl2Cyclic", {"l1": 1.0, "l2": 2.0}),
                                          FamilyParams("Gn", {"alphas": [1.0]}))),
]


def check_reference(entry, tol=1e-9):
    m, ref = entry.algebra, entry.reference
    d = riemann(m)
    scale = max(1.0, float(np.max(np.abs(d.R_lower))))
    if ref.curvature is not None:
        assert np.allclose(d.R, ref.curvature, atol=tol * scale)
    if ref.ricci is not None:
        assert np.allclose(d.ricci, ref.ricci, atol=tol * scale)
    if ref.principal_ricci is not None:
        assert np.allclose(d.ricci_eigenvalues, np.sort(ref.principal_ricci), atol=tol * scale)
    if ref.scalar is not None:
        assert d.scalar == pytest.approx(ref.scalar, abs=tol * scale * m.dim)
    e = np.eye(m.dim)
    for (i, j), K in ref.basic_sectional.items():
        assert sectional(m, e[i], e[j], d) == pytest.approx(K, abs=tol * scale)
    if ref.tv_verdict is not None:
        assert tv_decompose(m).class_verdict == ref.tv_verdict
    if ref.unimodular is not None:
        assert bool(abs(np.einsum("ijj->i", m.c)).max() < 1e-12) == ref.unimodular


@pytest.mark.parametrize("fp", FIXED, ids=lambda f: f.tag)
def test_reference_invariants_match_computation(fp):
    check_reference(make(fp))


@pytest.mark.parametrize("fp", FIXED, ids=lambda f: f.tag)
def test_ricci_matches_textbook_oracle(fp):
    m = make(fp).algebra
    assert np.allclose(riemann(m).ricci_eigenvalues, principal_ricci(m.c, m.gram), atol=1e-9)
    assert riemann(m).scalar == pytest.approx(scalar_curvature(m.c, m.gram), abs=1e-9)


@given(st.integers(0, 10 ** 6), st.integers(3, 5))
def test_random_family_references(seed, n):
    e = samples.random_catalog_draw(n, np.random.default_rng(seed))
    assert is_cyclic(e.algebra)[0]
    check_reference(e)


def test_cyclic_families_are_cyclic_and_reference_ones_are_not():
    for fp in FIXED:
        ok = is_cyclic(make(fp).algebra)[0]
        assert ok == (fp.tag not in ("So3Biinv", "Heisenberg"))


def test_gn_harmonic_flag():
    assert make_named("Gn", {"alphas": [1.0, 1.0, -(2.0 ** (1 / 3))]}).reference.extras["harmonic_immersion"]
    assert not make_named("Gn", {"alphas": [1.0, 2.0]}).reference.extras["harmonic_immersion"]


def test_hyperbolic_constant_curvature():
    m = make_named("HyperbolicHn", {"n": 4, "c": 0.5}).algebra
    rng = np.random.default_rng(0)
    for _ in range(5):
        x, y = rng.standard_normal((2, 4))
        assert sectional(m, x, y) == pytest.approx(-0.25)


def test_e11_rotated_frame():
    e = make_named("E11", {"alpha": 1.5})
    r = change_basis(e.algebra, e.isometries["rotated_frame"])
    assert np.allclose(r.gram, np.eye(3))
    assert np.allclose(r.c[0, 1], [0, 0, 1.5])
    assert np.allclose(r.c[2, 0], [0, -1.5, 0])
    assert np.allclose(r.c[1, 2], 0)


@pytest.mark.parametrize("l1,l2", [(1.0, 1.0), (0.4, 1.7), (3.0, 0.2)])
def test_sl2_matrix_model_reproduces_constants(l1, l2):
    a, b, g = make_named("Sl2Cyclic", {"l1": l1, "l2": l2}).isometries["matrix_scales"]
    mats = [a * catalog.SL2_MATRICES[0], b * catalog.SL2_MATRICES[1], g * catalog.SL2_MATRICES[2]]
    # independent expansion of commutators in the scaled basis
    M = np.array([x.ravel() for x in mats]).T
    c = np.zeros((3, 3, 3))
    for i in range(3):
        for j in range(3):
            comm = mats[i] @ mats[j] - mats[j] @ mats[i]
            c[i, j] = np.linalg.lstsq(M, comm.ravel(), rcond=None)[0]
    assert np.allclose(c, catalog.sl2_constants(l1, l2))
    assert np.allclose(from_matrix_basis(mats).structure_constants, c)


def test_family_parameter_validation():
    with pytest.raises(ValidationError):
        FamilyParams("NoSuchFamily", {})
    with pytest.raises(ValidationError):
        make_named("Hnp1", {"rhos": [1.0, 1.0], "lambdas": [1.0, 1.0]})
    with pytest.raises(ValidationError):
        make_named("Sl2Cyclic", {"l1": -1.0, "l2": 1.0})
    with pytest.raises(ValidationError):
        make_named("HyperbolicHn", {"n": 3, "c": 0.0})
    assert make_named("Hnp1", {"rhos": [1.0, 2.0, 3.0], "lambdas": [1.0, -0.5, -0.5]}).family.params["lambdas"] == [
        1.0, -0.5]


def test_family_dict_round_trip():
    for fp in FIXED:
        fp2 = make(fp).family
        assert FamilyParams.from_dict(fp2.to_dict()) == fp2


@pytest.mark.parametrize("fp,tag,vec", [
    (FamilyParams("Gn", {"alphas": [2.0, -2.0]}), "E11", [2.0]),
    (FamilyParams("Gn", {"alphas": [-1.0, -1.0, -1.0]}), "HyperbolicHn", [1.0, 4.0]),
    (FamilyParams("Gn", {"alphas": [-1.0, -2.0]}), "Gn", [2.0, 1.0]),
    (FamilyParams("Gn", {"alphas": [0.5, 3.0]}), "Gn", [3.0, 0.5]),
    (FamilyParams("Sl2Cyclic", {"l1": 1.0, "l2": 2.0}), "Sl2Cyclic", [2.0, 1.0]),
    (FamilyParams("Hnp1", {"rhos": [1.0, 1.0, 1.0], "lambdas": [1.0, 0.0]}), "Hnp1", [1.0, 0.0, 1.0, 1.0, 1.0]),
])
def test_canonical_forms(fp, tag, vec):
    c = canonicalize(fp)
    assert c.tag == tag
    assert np.allclose(c.vector(), vec)


@given(st.integers(0, 10 ** 6), st.integers(3, 5))
def test_canonicalize_is_idempotent_and_isometric(seed, n):
    fp = samples.random_family(n, np.random.default_rng(seed))
    c = canonicalize(fp)
    cc = canonicalize(c)
    assert cc.tag == c.tag and np.allclose(cc.vector(), c.vector(), atol=1e-9)
    d1, d2 = riemann(make(fp).algebra), riemann(make(c).algebra)
    assert np.allclose(d1.ricci_eigenvalues, d2.ricci_eigenvalues, atol=1e-9)
    assert d1.scalar == pytest.approx(d2.scalar, abs=1e-9)


# ---------------------------------------------------------------------------
# semidirect sums


def abelian(k, G=None):
    return metric(np.zeros((k, k, k)), G)


@pytest.mark.parametrize("a,b", [(1.0, 2.0), (0.5, -0.5)])
def test_line_acting_diagonally_is_gn(a, b):
    m = make_semidirect(SemidirectSpec(abelian(1), abelian(2), np.diag([a, b])[None]))
    P = np.eye(3)[:, [1, 2, 0]]  # reorder to (v1, v2, w)
    assert np.allclose(change_basis(m, P).c, make_named("Gn", {"alphas": [a, b]}).algebra.c)
    assert is_cyclic(m)[0]


def test_plane_acting_diagonally_is_h4():
    rho, lam = [1.0, 2.0], [0.5, -0.5]
    D = np.array([np.diag(rho), np.diag(lam)])
    m = make_semidirect(SemidirectSpec(abelian(2), abelian(2), D))
    assert np.allclose(m.c, make_named("Hnp1", {"rhos": rho, "lambdas": lam[:1]}).algebra.c)
    assert is_cyclic(m)[0]


def test_skew_action_is_not_cyclic():
    D = np.array([[[1.0, -1.0], [1.0, 1.0]]])
    spec = SemidirectSpec(abelian(1), abelian(2), D)
    assert spec.selfadjoint_defect() == pytest.approx(2.0)
    assert not is_cyclic(make_semidirect(spec))[0]


def test_semidirect_rejects_non_homomorphism():
    D = np.array([[[1.0, 0.0], [0.0, 0.0]], [[0.0, 1.0], [0.0, 0.0]]])
    spec = SemidirectSpec(abelian(2), abelian(2), D)
    assert spec.homomorphism_defect() > 0
    with pytest.raises(ValidationError, match="homomorphism"):
        make_semidirect(spec)


@given(st.integers(0, 10 ** 6), st.booleans())
def test_semidirect_cyclic_iff_selfadjoint(seed, selfadjoint):
    spec, m = samples.random_semidirect(np.random.default_rng(seed), selfadjoint)
    scale = max(1.0, float(np.max(np.abs(spec.action))))
    assert (spec.selfadjoint_defect() <= 1e-9 * scale) == selfadjoint
    assert is_cyclic(m)[0] == selfadjoint
