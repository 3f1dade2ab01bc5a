"""Random metric Lie algebras for property checks and the acceptance suite.

Generators return valid algebras only: every draw is built from a construction
whose Jacobi identity holds by design (semidirect sums with an abelian ideal,
two-step nilpotent brackets, direct sums with known simple algebras), then
pushed through a random change of basis with a random Gram matrix.
"""

from __future__ import annotations

import numpy as np
from scipy.stats import ortho_group

from . import catalog
from .catalog import FamilyParams, SemidirectSpec, make_semidirect
from .core import MetricLieAlgebra, change_basis, direct_sum
from .feasibility import find_cyclic_metric


def random_orthogonal(n: int, rng) -> np.ndarray:
    if n == 1:
        return np.array([[rng.choice([-1.0, 1.0])]])
    return ortho_group.rvs(n, random_state=rng)


def random_gram(n: int, rng, spread: float = 3.0) -> np.ndarray:
    Q = random_orthogonal(n, rng)
    w = np.exp(rng.uniform(-np.log(spread), np.log(spread), n))
    G = Q @ np.diag(w) @ Q.T
    return 0.5 * (G + G.T)


def random_basis_change(m: MetricLieAlgebra, rng, orthogonal: bool = False) -> MetricLieAlgebra:
    """Same metric Lie algebra in a random basis (orthonormal frames stay orthonormal if ``orthogonal``)."""
    n = m.dim
    if orthogonal:
        return change_basis(m, random_orthogonal(n, rng))
    P = random_orthogonal(n, rng) @ np.diag(np.exp(rng.uniform(-0.7, 0.7, n))) @ random_orthogonal(n, rng)
    return change_basis(m, P)


def _with_metric(c: np.ndarray, rng) -> MetricLieAlgebra:
    n = c.shape[0]
    return MetricLieAlgebra.build(c, random_gram(n, rng))


def _line_action(D: np.ndarray) -> np.ndarray:
    """``R`` acting on ``R^q`` by ``D``; the acting vector is last."""
    q = D.shape[0]
    n = q + 1
    c = np.zeros((n, n, n))
    c[q, :q, :q] = D.T
    c[:q, q, :q] = -D.T
    return c


def _two_step(n: int, rng) -> np.ndarray:
    """Random two-step nilpotent brackets ``[x_i, x_j] in span(z)``."""
    k = int(rng.integers(1, max(2, n // 2)))
    p = n - k
    c = np.zeros((n, n, n))
    for i in range(p):
        for j in range(i + 1, p):
            v = rng.standard_normal(k)
            c[i, j, p:] = v
            c[j, i, p:] = -v
    return c


def random_metric_lie_algebra(n: int, rng) -> MetricLieAlgebra:
    """A valid metric Lie algebra of dimension ``n`` with a random construction, basis and metric."""
    kind = int(rng.integers(0, 6)) if n >= 3 else int(rng.integers(0, 2))
    if kind == 0 or n == 1:
        c = _line_action(rng.standard_normal((n - 1, n - 1))) if n > 1 else np.zeros((1, 1, 1))
    elif kind == 1:
        S = rng.standard_normal((n - 1, n - 1))
        D = S @ np.diag(rng.standard_normal(n - 1)) @ np.linalg.inv(S)
        c = _line_action(D)
    elif kind == 2:
        c = _two_step(n, rng)
    elif kind == 3:
        base = catalog.sl2_matrix_algebra().structure_constants if rng.random() < 0.5 else catalog.so3_constants()
        if n == 3:
            c = base
        else:
            rest = _line_action(rng.standard_normal((n - 4, n - 4))) if n >= 5 else np.zeros((1, 1, 1))
            c = direct_sum(MetricLieAlgebra.build(base), MetricLieAlgebra.build(rest)).c
    elif kind == 4:
        e = random_catalog_draw(n, rng) if 3 <= n <= 5 else None
        c = e.algebra.c if e is not None else _line_action(rng.standard_normal((n - 1, n - 1)))
    else:
        c = np.zeros((n, n, n))
    m = _with_metric(np.asarray(c, float), rng)
    return random_basis_change(m, rng)


# ---------------------------------------------------------------------------
# cyclic draws


def _weights(k: int, rng) -> np.ndarray:
    return np.round(rng.uniform(-2.0, 2.0, k), 6) + 0.0


def _positive(rng) -> float:
    return float(np.round(rng.uniform(0.2, 3.0), 6))


def _nonzero(rng) -> float:
    return float(np.round(rng.choice([-1.0, 1.0]) * rng.uniform(0.2, 3.0), 6))


def random_family(n: int, rng) -> FamilyParams:
    """Random parameters for a catalog family of dimension ``n`` (3 to 5) drawn from the cyclic families."""
    opts = ["Gn", "HyperbolicHn"]
    if n == 3:
        opts += ["Sl2Cyclic", "E11"]
    if n >= 4:
        opts += ["Hnp1", "Sl2xR"]
    if n == 5:
        opts += ["HnpHat", "Sl2xH2", "Sl2xR2"]
    kind = opts[int(rng.integers(len(opts)))]
    if kind == "Gn":
        al = _weights(n - 1, rng)
        while np.max(np.abs(al)) < 0.2:
            al = _weights(n - 1, rng)
        return FamilyParams("Gn", {"alphas": al.tolist()}, n)
    if kind == "HyperbolicHn":
        return FamilyParams("HyperbolicHn", {"n": n, "c": _positive(rng)}, n)
    if kind == "E11":
        return FamilyParams("E11", {"alpha": _positive(rng)}, 3)
    if kind == "Sl2Cyclic":
        return FamilyParams("Sl2Cyclic", {"l1": _positive(rng), "l2": _positive(rng)}, 3)
    if kind == "Hnp1":
        q = n - 2
        rho = _weights(q, rng)
        lam = _weights(q - 1, rng)
        while np.max(np.abs(rho)) < 0.2:
            rho = _weights(q, rng)
        while np.max(np.abs(lam)) < 0.2:
            lam = _weights(q - 1, rng)
        return FamilyParams("Hnp1", {"rhos": rho.tolist(), "lambdas": lam.tolist()}, n)
    if kind == "HnpHat":
        s = _nonzero(rng)
        m1, m2 = _nonzero(rng), _nonzero(rng)
        return FamilyParams("HnpHat", {"sigmas": [s, -s], "mus": [m1, m2, -m1 - m2]}, 5)
    sl = FamilyParams("Sl2Cyclic", {"l1": _positive(rng), "l2": _positive(rng)}, 3)
    if kind == "Sl2xR":
        rest = FamilyParams("Abelian", {"n": n - 3}, n - 3)
    elif kind == "Sl2xR2":
        rest = FamilyParams("Abelian", {"n": 2}, 2)
    else:
        rest = FamilyParams("HyperbolicHn", {"n": 2, "c": _positive(rng)}, 2)
    return FamilyParams("DirectProduct", {}, n, (sl, rest))


def random_catalog_draw(n: int, rng) -> catalog.CatalogEntry:
    return catalog.make(random_family(n, rng))


def random_cyclic_by_feasibility(n: int, rng, restarts: int = 8, iters: int = 300) -> MetricLieAlgebra | None:
    """Cyclic metric found by the feasibility search on a random algebra that admits one.

    The algebra is ``R`` acting on ``R^{n-1}`` by a diagonalizable matrix with
    real spectrum, presented in a random basis; ``None`` if the search fails.
    """
    S = rng.standard_normal((n - 1, n - 1))
    D = S @ np.diag(np.round(rng.uniform(-2, 2, n - 1), 3)) @ np.linalg.inv(S)
    c = _line_action(D)
    m = random_basis_change(MetricLieAlgebra.build(c), rng)
    res = find_cyclic_metric(m.c, restarts=restarts, iters=iters, seed=int(rng.integers(2 ** 31)),
                             keep_trace=False)
    if not res.feasible:
        return None
    return MetricLieAlgebra.build(m.c, res.solution)


def random_cyclic(n: int, rng) -> MetricLieAlgebra:
    """Random cyclic metric: a catalog draw in a random basis, or a feasibility witness."""
    if rng.random() < 0.3:
        m = random_cyclic_by_feasibility(n, rng)
        if m is not None:
            return m
    return random_basis_change(random_catalog_draw(n, rng).algebra, rng)


# ---------------------------------------------------------------------------
# semidirect sums


def random_commuting_selfadjoint(p: int, q: int, rng, gram: np.ndarray | None = None) -> np.ndarray:
    """``p`` commuting matrices on ``R^q``, selfadjoint for ``gram``."""
    G = np.eye(q) if gram is None else gram
    L = np.linalg.cholesky(G)
    Q = random_orthogonal(q, rng)
    B = np.linalg.solve(L.T, Q)
    Binv = np.linalg.inv(B)
    return np.array([B @ np.diag(rng.standard_normal(q)) @ Binv for _ in range(p)])


def random_semidirect(rng, selfadjoint: bool = True) -> tuple:
    """Abelian ``R^p`` acting on abelian ``R^q`` with a random right metric.

    With ``selfadjoint=False`` an antisymmetric part of size at least one is
    added to one generator; other generators are set to zero so the action
    stays a homomorphism.
    """
    p = int(rng.integers(1, 3))
    q = int(rng.integers(2, 4))
    G2 = random_gram(q, rng)
    G1 = random_gram(p, rng)
    D = random_commuting_selfadjoint(p, q, rng, G2)
    if not selfadjoint:
        K = rng.standard_normal((q, q))
        K = K - K.T
        K /= np.max(np.abs(K))
        # skew with respect to G2: G2 X antisymmetric
        X = np.linalg.solve(G2, K)
        D = np.zeros_like(D)
        D[0] = random_commuting_selfadjoint(1, q, rng, G2)[0] + (1.0 + rng.random()) * X
    left = MetricLieAlgebra.build(np.zeros((p, p, p)), G1)
    right = MetricLieAlgebra.build(np.zeros((q, q, q)), G2)
    spec = SemidirectSpec(left, right, D)
    return spec, make_semidirect(spec)
