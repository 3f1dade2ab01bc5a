import numpy as np
import pytest
from conftest import gn, heisenberg_constants, metric
from hypothesis import given
from hypothesis import strategies as st

from metriclie import samples
from metriclie.catalog import FamilyParams, canonicalize, make, make_named
from metriclie.classifier import adapted_basis, classify, decomposability, orthogonal_split
from metriclie.core import NotCyclicError, UnsupportedError, ValidationError, change_basis, structure_report
from metriclie.homogeneous import is_cyclic


def params_close(a: FamilyParams, b: FamilyParams, tol=1e-6) -> bool:
    va, vb = a.vector(), b.vector()
    return a.tag == b.tag and va.shape == vb.shape and np.allclose(va, vb, atol=tol)


def test_adapted_basis_of_heisenberg_starts_at_center():
    ab = adapted_basis(metric(heisenberg_constants(), np.diag([1.0, 2.0, 0.5])))
    E = ab.basis_matrix
    assert np.allclose(np.abs(E[:, 0]) / np.linalg.norm(E[:, 0]), [0, 0, 1])
    assert ab.solv_defect() <= 1e-12


@pytest.mark.parametrize("alphas", [(1.0, 2.0), (1.0, -1.0), (0.5, 1.5, -2.0)])
def test_adapted_basis_of_gn(alphas):
    m = gn(*alphas)
    ab = adapted_basis(m)
    E = ab.basis_matrix
    assert np.allclose(E.T @ m.gram @ E, np.eye(m.dim))
    assert ab.solv_defect() <= 1e-12
    assert ab.symmetric_pairs_defect() <= 1e-12
    assert ab.selfadjoint_defect() <= 1e-12


def test_adapted_basis_rejects_nonsolvable():
    with pytest.raises(ValidationError, match="not solvable"):
        adapted_basis(make_named("Sl2Cyclic", {"l1": 1.0, "l2": 1.0}).algebra)


@given(st.integers(0, 10 ** 6), st.integers(3, 5))
def test_cyclic_iff_symmetric_pairs_in_adapted_basis(seed, n):
    rng = np.random.default_rng(seed)
    m = samples.random_cyclic(n, rng) if rng.random() < 0.5 else samples.random_metric_lie_algebra(n, rng)
    if not structure_report(m).solvable:
        return
    ab = adapted_basis(m)
    scale = max(1.0, float(np.max(np.abs(ab.constants))))
    assert ab.solv_defect() <= 1e-9 * scale
    assert is_cyclic(m)[0] == (ab.symmetric_pairs_defect() <= 1e-8 * scale)


def test_orthogonal_split_nonunimodular():
    s = orthogonal_split(gn(1.0, 2.0))
    assert np.allclose(s.line, [0, 0, 1])
    assert s.ideal.shape == (3, 2) and np.allclose(s.ideal[2], 0)
    assert s.selfadjoint_defect <= 1e-12 and s.ideal_cyclic


@given(st.integers(0, 10 ** 6), st.integers(3, 5))
def test_orthogonal_split_properties(seed, n):
    rng = np.random.default_rng(seed)
    m = samples.random_cyclic(n, rng)
    rep = structure_report(m)
    if not rep.solvable or rep.abelian:
        with pytest.raises(ValidationError):
            orthogonal_split(m)
        return
    s = orthogonal_split(m)
    scale = max(1.0, float(np.max(np.abs(m.c)))) * max(1.0, float(np.max(np.abs(m.gram))))
    assert s.selfadjoint_defect <= 1e-8 * scale
    assert s.ideal_cyclic
    assert abs(s.line @ m.gram @ s.ideal).max() <= 1e-9 * scale
    assert m.norm(s.line) == pytest.approx(1.0)


def test_orthogonal_split_rejects_noncyclic():
    with pytest.raises(NotCyclicError):
        orthogonal_split(metric(heisenberg_constants()))


@pytest.mark.parametrize("fp,tag,vec", [
    (FamilyParams("Gn", {"alphas": [1.0, 2.0]}), "Gn", [2.0, 1.0]),
    (FamilyParams("Gn", {"alphas": [2.0, -2.0]}), "E11", [2.0]),
    (FamilyParams("HyperbolicHn", {"n": 4, "c": -0.5}), "HyperbolicHn", [0.5, 4.0]),
    (FamilyParams("Sl2Cyclic", {"l1": 1.0, "l2": 2.0}), "Sl2Cyclic", [2.0, 1.0]),
    (FamilyParams("Hnp1", {"rhos": [1.0, 1.0, 1.0], "lambdas": [1.0, 0.0]}), "Hnp1", [1.0, 0.0, 1.0, 1.0, 1.0]),
])
def test_classify_examples(fp, tag, vec):
    rng = np.random.default_rng(3)
    m = samples.random_basis_change(make(fp).algebra, rng)
    res = classify(m)
    assert res.tag == tag
    assert np.allclose(res.family.vector(), vec, atol=1e-7)
    assert res.residual <= 1e-8
    mw = change_basis(m, res.witness)
    assert np.allclose(mw.c, res.representative.c, atol=1e-8)
    assert np.allclose(mw.gram, np.eye(m.dim), atol=1e-8)


def test_classify_direct_product_with_line():
    fp = FamilyParams("DirectProduct", {}, 4, (FamilyParams("Sl2Cyclic", {"l1": 1.0, "l2": 2.0}),
                                               FamilyParams("Abelian", {"n": 1})))
    res = classify(samples.random_basis_change(make(fp).algebra, np.random.default_rng(1)))
    assert res.tag == "DirectProduct" and res.decomposable
    assert [f.tag for f in res.factors] == ["Sl2Cyclic", "Abelian"]
    assert res.unimodular


def test_classify_errors():
    with pytest.raises(NotCyclicError):
        classify(metric(heisenberg_constants()))
    with pytest.raises(UnsupportedError):
        classify(metric(np.zeros((6, 6, 6))))


def test_decomposability_of_indecomposable_gn():
    assert not decomposability(gn(1.0, 2.0)).decomposable
    d = decomposability(make_named("Gn", {"alphas": [1.0, 0.0, 0.0]}).algebra)
    assert d.decomposable
    assert [f.tag for f in d.factors] == ["HyperbolicHn", "Abelian"]


@given(st.integers(0, 10 ** 6), st.integers(3, 5))
def test_classification_is_basis_independent(seed, n):
    rng = np.random.default_rng(seed)
    fp = samples.random_family(n, rng)
    want = canonicalize(fp)
    m = samples.random_basis_change(make(fp).algebra, rng)
    res = classify(m, seed=seed % 13)
    assert params_close(res.family, want), (res.family.describe(), want.describe())
    assert res.residual <= 1e-8 * max(1.0, float(np.max(np.abs(res.representative.c))))
    assert res.unimodular == structure_report(m).unimodular
