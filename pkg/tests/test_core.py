import numpy as np
import pytest
from conftest import gn, heisenberg_constants, metric, sl2_hef, so3
from hypothesis import given
from hypothesis import strategies as st
from oracles import killing

from metriclie import samples
from metriclie.core import (
    DimensionError,
    InnerProduct,
    LieAlgebra,
    MetricLieAlgebra,
    ValidationError,
    ad_matrix,
    bracket,
    killing_form,
    structure_report,
    subspace_ops,
    validate,
)


def test_validate_abelian_and_so3():
    for c in (np.zeros((3, 3, 3)), so3()):
        d = validate(c)
        assert (d.antisymmetry_defect, d.jacobi_defect) == (0.0, 0.0)
        assert d.passed


def test_validate_one_sided_perturbation_fails_on_antisymmetry():
    c = so3().copy()
    c[0, 1, 2] = 1.1
    d = validate(c)
    assert d.antisymmetry_defect == pytest.approx(0.1)
    assert not d.passed
    with pytest.raises(ValidationError):
        LieAlgebra(c)


def test_validate_antisymmetric_perturbation_of_so3_is_still_lie():
    # every 3-dim bracket of the form [e_i, e_j] = a_k e_k satisfies Jacobi
    c = so3().copy()
    c[0, 1, 2], c[1, 0, 2] = 1.1, -1.1
    d = validate(c)
    assert d.jacobi_defect == 0.0 and d.passed


def test_validate_detects_jacobi_failure():
    # [e1,e2] = e2, [e2,e3] = e1, [e1,e3] = 0 is antisymmetric but not Lie
    raw = np.zeros((3, 3, 3))
    raw[0, 1, 1], raw[1, 0, 1] = 1.0, -1.0
    raw[1, 2, 0], raw[2, 1, 0] = 1.0, -1.0
    d = validate(raw)
    assert d.antisymmetry_defect == 0.0
    assert d.jacobi_defect == pytest.approx(1.0)
    with pytest.raises(ValidationError):
        LieAlgebra(raw)


def test_dimension_errors():
    with pytest.raises(DimensionError):
        validate(np.zeros((2, 3, 3)))
    with pytest.raises(DimensionError):
        validate(np.zeros((3, 3, 3)), dim=4)
    with pytest.raises(DimensionError):
        MetricLieAlgebra(LieAlgebra.abelian(3), InnerProduct.identity(2))
    with pytest.raises(DimensionError):
        bracket(metric(so3()), [1, 0], [0, 1, 0])


def test_inner_product_rejects_bad_gram():
    with pytest.raises(ValidationError):
        InnerProduct(np.array([[1.0, 0.5], [0.4, 1.0]]))
    with pytest.raises(ValidationError):
        InnerProduct(np.diag([1.0, -1.0]))


def test_bracket_examples():
    m = metric(so3())
    e = np.eye(3)
    assert np.allclose(bracket(m, e[0], e[1]), e[2])
    x = np.array([0.3, -1.2, 2.0])
    assert np.allclose(bracket(m, x, x), 0)
    g = gn(0.7, 1.9)
    assert np.allclose(bracket(g, e[2], e[0]), 0.7 * e[0])


def test_ad_matrix_examples():
    e = np.eye(3)
    assert np.allclose(ad_matrix(metric(np.zeros((3, 3, 3))), e[0]), 0)
    A = ad_matrix(gn(0.7, 1.9), e[2])
    assert np.allclose(A, np.diag([0.7, 1.9, 0.0]))
    R = ad_matrix(metric(so3()), e[2])
    assert np.allclose(R, [[0, -1, 0], [1, 0, 0], [0, 0, 0]])


def test_killing_examples():
    kd = killing_form(metric(np.zeros((3, 3, 3))))
    assert np.allclose(kd.matrix, 0) and kd.signature == (0, 0, 3)
    assert np.allclose(killing_form(metric(heisenberg_constants())).matrix, 0)
    kd = killing_form(metric(sl2_hef()))
    assert kd.matrix[0, 0] == pytest.approx(8.0)
    assert kd.matrix[1, 2] == pytest.approx(4.0)
    assert kd.matrix[1, 1] == 0.0 and kd.matrix[0, 1] == 0.0
    assert kd.signature == (2, 1, 0)
    assert np.allclose(killing_form(metric(so3())).matrix, -2 * np.eye(3))


def test_structure_report_examples():
    h = structure_report(metric(heisenberg_constants()))
    assert h.nilpotent and h.solvable and h.unimodular and not h.semisimple
    assert h.center.shape == (3, 1) and np.allclose(np.abs(h.center[:, 0]), [0, 0, 1])
    assert tuple(h.lower_central_dims) == (3, 1, 0)
    s = structure_report(metric(sl2_hef()))
    assert s.semisimple and not s.solvable and s.unimodular
    g = structure_report(gn(1.0, 2.0))
    assert g.solvable and not g.unimodular
    K = g.unimodular_kernel
    assert K.shape == (3, 2) and np.allclose(K[2], 0)


def test_subspace_ops_examples():
    h = metric(heisenberg_constants())
    assert subspace_ops(h, np.eye(3)).is_ideal
    assert subspace_ops(h, np.eye(3)[:, [2]]).is_ideal
    info = subspace_ops(gn(1.0, 2.0), np.eye(3)[:, [2]])
    assert not info.is_ideal
    assert info.complement.shape == (3, 2)


def test_subspace_ops_rank_deficiency_names_vector():
    with pytest.raises(ValidationError, match="vector 2 "):
        subspace_ops(metric(so3()), np.array([[1.0, 2.0], [0.0, 0.0], [0.0, 0.0]]))


def test_biinvariant_complement_of_ideal_is_ideal():
    # so(3) + R with a metric that is -B on so(3); every ideal's complement is an ideal
    c = np.zeros((4, 4, 4))
    c[:3, :3, :3] = so3()
    m = metric(c, np.diag([2.0, 2.0, 2.0, 0.7]))
    for basis in (np.eye(4)[:, :3], np.eye(4)[:, [3]]):
        info = subspace_ops(m, basis)
        assert info.is_ideal
        assert subspace_ops(m, info.complement).is_ideal


@given(st.integers(0, 10 ** 6), st.integers(2, 6))
def test_killing_matches_oracle_and_is_invariant(seed, n):
    rng = np.random.default_rng(seed)
    m = samples.random_metric_lie_algebra(n, rng)
    B = killing_form(m).matrix
    assert np.allclose(B, killing(np.asarray(m.c)), atol=1e-9 * max(1.0, np.max(np.abs(B))))
    x, y, z = rng.standard_normal((3, n))
    scale = max(1.0, float(np.max(np.abs(m.c)))) ** 2 * max(1.0, float(np.max(np.abs(B))))
    val = bracket(m, x, y) @ B @ z + y @ B @ bracket(m, x, z)
    assert abs(val) <= 1e-9 * scale * 10


@given(st.integers(0, 10 ** 6), st.integers(1, 6))
def test_structure_report_implications(seed, n):
    rng = np.random.default_rng(seed)
    m = samples.random_metric_lie_algebra(n, rng)
    r = structure_report(m)
    if r.nilpotent:
        assert r.solvable
    if r.semisimple:
        assert r.unimodular
    ds = list(r.derived_series_dims)
    assert all(a > b for a, b in zip(ds, ds[1:]))
    assert r.solvable == (ds[-1] == 0)
    lc = list(r.lower_central_dims)
    assert all(a >= b for a, b in zip(lc, lc[1:]))
    assert r.nilpotent == (lc[-1] == 0)
    assert r.abelian == (ds == [n, 0]) == (not np.any(m.c))
    assert r.unimodular == (r.unimodular_kernel.shape[1] == n)
    kd = r.killing
    assert sum(kd.signature) == n and r.semisimple == (kd.signature[2] == 0)
