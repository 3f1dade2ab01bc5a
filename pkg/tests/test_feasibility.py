import itertools

import numpy as np
import pytest
from conftest import heisenberg_constants, metric, sl2_hef, so3
from hypothesis import given
from hypothesis import strategies as st
from oracles import cyclic_defect

from metriclie import catalog, samples
from metriclie.acceptance import su2_algebra
from metriclie.core import InnerProduct, ValidationError, derived_series, direct_sum, killing_form, restrict
from metriclie.feasibility import (
    CERTIFIED_INFEASIBLE,
    FEASIBLE,
    apply_constraints,
    cyclic_constraint_system,
    find_cyclic_metric,
    semisimple_cyclic_metrics,
)
from metriclie.homogeneous import is_cyclic


def test_abelian_system_is_unconstrained():
    sys_ = cyclic_constraint_system(np.zeros((4, 4, 4)))
    assert not np.any(sys_.matrix)
    assert sys_.nullity == 10
    res = find_cyclic_metric(np.zeros((4, 4, 4)), restarts=2, iters=20)
    assert res.status == FEASIBLE


def test_nullspace_is_annihilated():
    for c in (heisenberg_constants(), sl2_hef(), so3()):
        sys_ = cyclic_constraint_system(c)
        for N in sys_.nullspace_basis:
            assert np.allclose(N, N.T)
            assert np.max(np.abs(apply_constraints(c, N))) <= 1e-10


def test_heisenberg_single_constraint_forces_g33_zero():
    c = heisenberg_constants()
    G = np.diag([1.0, 2.0, 3.0])
    assert np.allclose(apply_constraints(c, G), [3.0])
    res = find_cyclic_metric(c)
    assert res.status == CERTIFIED_INFEASIBLE
    assert res.solution is None and res.certificate


@pytest.mark.parametrize("c", [so3(), su2_algebra()])
def test_compact_simple_is_infeasible(c):
    res = find_cyclic_metric(c)
    assert res.status == CERTIFIED_INFEASIBLE
    ss = semisimple_cyclic_metrics(c)
    assert not ss.feasible
    assert np.all(ss.epsilons < 0)


def test_sl2_is_feasible_and_witness_is_cyclic():
    res = find_cyclic_metric(sl2_hef())
    assert res.feasible
    G = res.solution
    assert np.linalg.norm(G) == pytest.approx(1.0)
    assert np.linalg.eigvalsh(G)[0] > 0
    m = metric(sl2_hef(), G)
    assert is_cyclic(m, 1e-8)[0]
    assert cyclic_defect(sl2_hef(), G) <= 1e-8


def test_sl2_semisimple_route():
    ss = semisimple_cyclic_metrics(sl2_hef())
    assert ss.feasible
    lam = ss.Q_eigenvalues
    assert np.all(ss.epsilons * lam > 0)
    assert lam.min() < 0 < lam.max()  # not all of one sign
    for i, j, k in ss.constraints:
        assert abs(ss.transformed_constants[i, j, k] * (lam[i] + lam[j] + lam[k])) <= 1e-9
    assert cyclic_defect(sl2_hef(), ss.gram) <= 1e-8
    # the basis is Killing-orthonormal with the reported signs
    C = ss.b_orthonormal_basis
    B = killing_form(sl2_hef()).matrix
    assert np.allclose(C.T @ B @ C, np.diag(ss.epsilons))


def test_semisimple_route_rejects_solvable():
    with pytest.raises(ValidationError, match="rank 0"):
        semisimple_cyclic_metrics(heisenberg_constants())


def test_sl2_plus_sl2_agrees_with_sign_enumeration():
    s = catalog.sl2_matrix_algebra().structure_constants
    c = direct_sum(metric(s), metric(s)).c
    ss = semisimple_cyclic_metrics(c)
    N, eps = ss.solution_basis, ss.epsilons
    # brute force: sign patterns of vertices of a grid over the solution space
    found = False
    grid = np.linspace(-1, 1, 9)
    for y in itertools.product(grid, repeat=min(N.shape[1], 4)):
        y = np.array(y + (0.0,) * (N.shape[1] - len(y)))
        if np.all(eps * (N @ y) > 1e-9):
            found = True
            break
    if ss.feasible:
        assert np.linalg.eigvalsh(ss.gram)[0] > 0
        assert cyclic_defect(c, ss.gram) <= 1e-8
    if found:
        assert ss.feasible


@given(st.integers(0, 10 ** 6), st.integers(3, 5))
def test_constraint_operator_is_linear(seed, n):
    rng = np.random.default_rng(seed)
    c = samples.random_metric_lie_algebra(n, rng).c
    G1, G2 = rng.standard_normal((2, n, n))
    G1, G2 = G1 + G1.T, G2 + G2.T
    a, b = rng.standard_normal(2)
    lhs = apply_constraints(c, a * G1 + b * G2)
    rhs = a * apply_constraints(c, G1) + b * apply_constraints(c, G2)
    assert np.allclose(lhs, rhs, atol=1e-10 * max(1.0, np.max(np.abs(c))) * 10)


@given(st.integers(0, 10 ** 6), st.integers(2, 5))
def test_abelian_accepts_any_metric(seed, n):
    G = samples.random_gram(n, np.random.default_rng(seed))
    assert not np.any(apply_constraints(np.zeros((n, n, n)), G))
    assert is_cyclic(metric(np.zeros((n, n, n)), G))[0]


@given(st.integers(0, 10 ** 6), st.integers(3, 5))
def test_feasible_witness_is_sound_and_restricts(seed, n):
    rng = np.random.default_rng(seed)
    m = samples.random_metric_lie_algebra(n, rng)
    res = find_cyclic_metric(m.c, restarts=6, iters=200, seed=seed, keep_trace=False)
    if not res.feasible:
        return
    InnerProduct(res.solution)
    w = metric(m.c, res.solution)
    assert is_cyclic(w, 1e-8)[0]
    D = derived_series(w)[1]
    if 0 < D.shape[1] < n:
        assert is_cyclic(restrict(w, D), 1e-8)[0]
