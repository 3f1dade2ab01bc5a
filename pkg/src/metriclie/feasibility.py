"""Existence of cyclic inner products on a given Lie algebra.

A Gram matrix ``G`` is cyclic when ``sum_cyc <[e_i, e_j], e_k> = 0`` for all
``i < j < k``.  That is a linear condition on ``G``; the question is whether
its solution space meets the positive-definite cone.  The search maximizes
the smallest eigenvalue over the unit sphere of the solution space, which is
a concave problem, by projected supergradient ascent from several starts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np
from scipy import linalg as sla
from scipy.optimize import linprog

from .core import (
    DEFAULT_RTOL,
    PD_TOL,
    InnerProduct,
    LieAlgebra,
    MetricLieAlgebra,
    ValidationError,
    killing_form,
)

FEASIBLE = "feasible"
CERTIFIED_INFEASIBLE = "certified_infeasible"
INFEASIBLE_WITHIN_BUDGET = "infeasible_within_budget"


def symmetric_basis(n: int) -> np.ndarray:
    """Frobenius-orthonormal basis of symmetric ``n x n`` matrices, shape ``(n(n+1)/2, n, n)``."""
    out = []
    for i in range(n):
        for j in range(i, n):
            E = np.zeros((n, n))
            if i == j:
                E[i, i] = 1.0
            else:
                E[i, j] = E[j, i] = 1.0 / np.sqrt(2.0)
            out.append(E)
    return np.array(out)


def triples(n: int) -> list:
    return list(combinations(range(n), 3))


def constraint_row_matrices(c: np.ndarray) -> np.ndarray:
    """Symmetric ``R_t`` with ``<R_t, G>_F`` equal to the cyclic sum for triple ``t``."""
    n = c.shape[0]
    rows = []
    for i, j, k in triples(n):
        R = np.zeros((n, n))
        # sum_m c_ij^m G_mk + c_jk^m G_mi + c_ki^m G_mj
        R[:, k] += c[i, j]
        R[:, i] += c[j, k]
        R[:, j] += c[k, i]
        rows.append(0.5 * (R + R.T))
    return np.array(rows).reshape(-1, n, n)


def apply_constraints(c: np.ndarray, G: np.ndarray) -> np.ndarray:
    n = c.shape[0]
    out = []
    for i, j, k in triples(n):
        out.append(c[i, j] @ G[:, k] + c[j, k] @ G[:, i] + c[k, i] @ G[:, j])
    return np.array(out)


@dataclass(frozen=True)
class ConstraintSystem:
    matrix: np.ndarray
    row_matrices: np.ndarray
    nullspace_basis: np.ndarray
    triples: tuple

    @property
    def nullity(self) -> int:
        return self.nullspace_basis.shape[0]


def cyclic_constraint_system(a, rtol: float = 1e-10) -> ConstraintSystem:
    """Constraint operator on symmetric matrices (in the Frobenius-orthonormal basis) and its kernel."""
    c = _constants(a)
    n = c.shape[0]
    E = symmetric_basis(n)
    rows = constraint_row_matrices(c)
    if rows.shape[0] == 0:
        return ConstraintSystem(np.zeros((0, E.shape[0])), rows, E, ())
    M = np.einsum("tab,sab->ts", rows, E)
    if not np.any(M):
        return ConstraintSystem(M, rows, E, tuple(triples(n)))
    _, s, Vt = np.linalg.svd(M)
    r = int(np.sum(s > rtol * max(1.0, s[0])))
    N = Vt[r:]
    return ConstraintSystem(M, rows, np.einsum("ds,sab->dab", N, E), tuple(triples(n)))


def _constants(a) -> np.ndarray:
    if isinstance(a, MetricLieAlgebra):
        return a.c
    if isinstance(a, LieAlgebra):
        return a.structure_constants
    return np.asarray(a, float)


@dataclass(frozen=True)
class CyclicFeasibilityResult:
    status: str
    constraint_matrix: np.ndarray
    nullspace_basis: np.ndarray
    solution: np.ndarray | None
    best_min_eigenvalue: float
    certificate: str
    search_trace: list = field(default_factory=list, repr=False)

    @property
    def feasible(self) -> bool:
        return self.status == FEASIBLE


def _ascent(basis: np.ndarray, y0: np.ndarray, iters: int, step: float, trace: list | None, tag: str):
    """Projected supergradient ascent of ``lambda_min(sum y_d N_d)`` on the unit sphere, batched."""
    Y = y0 / np.linalg.norm(y0, axis=1, keepdims=True)
    best_val = np.full(Y.shape[0], -np.inf)
    best_Y = Y.copy()
    for t in range(iters):
        Gs = np.einsum("rd,dab->rab", Y, basis)
        w, V = np.linalg.eigh(Gs)
        lam = w[:, 0]
        improved = lam > best_val
        best_val = np.where(improved, lam, best_val)
        best_Y[improved] = Y[improved]
        v = V[:, :, 0]
        g = np.einsum("ra,dab,rb->rd", v, basis, v)
        g -= np.einsum("rd,rd->r", g, Y)[:, None] * Y
        Y = Y + (step / np.sqrt(t + 1.0)) * g
        Y /= np.linalg.norm(Y, axis=1, keepdims=True)
        if trace is not None and (t % 50 == 0 or t == iters - 1):
            trace.append({"phase": tag, "iteration": t, "best_min_eigenvalue": float(best_val.max())})
    k = int(np.argmax(best_val))
    return float(best_val[k]), best_Y[k]


def _starts(basis: np.ndarray, restarts: int, rng) -> np.ndarray:
    d, n, _ = basis.shape
    proj_id = np.einsum("dab,ab->d", basis, np.eye(n))
    starts = [proj_id if np.linalg.norm(proj_id) > 1e-12 else rng.standard_normal(d)]
    starts += [rng.standard_normal(d) for _ in range(max(restarts - 1, 0))]
    return np.array(starts)


def _certificate(system: ConstraintSystem, n: int) -> str:
    if system.nullity == 0:
        return "only the zero matrix satisfies the constraints"
    for t, R in zip(system.triples, system.row_matrices):
        w = np.linalg.eigvalsh(R)
        scale = max(1.0, float(np.max(np.abs(w))))
        if np.max(np.abs(w)) > 0 and (w[0] >= -1e-12 * scale or w[-1] <= 1e-12 * scale):
            i, j, k = (x + 1 for x in t)
            return f"constraint for triple ({i},{j},{k}) pairs G with a semidefinite matrix"
    N = system.nullspace_basis
    for k in range(n):
        if np.max(np.abs(N[:, k, k])) <= 1e-12:
            return f"constraints force the diagonal entry G[{k + 1},{k + 1}] to vanish"
    return ""


def find_cyclic_metric(
    a,
    restarts: int = 32,
    iters: int = 500,
    seed: int = 0,
    step: float = 0.5,
    pd_tol: float = PD_TOL,
    keep_trace: bool = True,
) -> CyclicFeasibilityResult:
    """Search for a positive-definite cyclic Gram matrix.

    Status is ``feasible`` with a witness normalized to unit Frobenius norm,
    ``certified_infeasible`` when an exact obstruction is found, or
    ``infeasible_within_budget`` otherwise.  Exact obstructions are: an empty
    solution space, a semidefinite constraint row, a diagonal entry forced to
    zero, or a positive-definite matrix in the span of the constraint rows
    (which pairs positively with every positive-definite ``G``).
    """
    c = _constants(a)
    n = c.shape[0]
    system = cyclic_constraint_system(c)
    trace: list | None = [] if keep_trace else None
    cert = _certificate(system, n)
    if system.nullity == 0:
        return CyclicFeasibilityResult(CERTIFIED_INFEASIBLE, system.matrix, system.nullspace_basis, None,
                                       -np.inf, cert, trace or [])
    rng = np.random.default_rng(seed)
    N = system.nullspace_basis
    best, y = _ascent(N, _starts(N, restarts, rng), iters, step, trace, "primal")
    if best > pd_tol:
        G = np.einsum("d,dab->ab", y, N)
        G = 0.5 * (G + G.T)
        G /= np.linalg.norm(G)
        return CyclicFeasibilityResult(FEASIBLE, system.matrix, N, G, best, "", trace or [])
    if not cert and system.row_matrices.shape[0]:
        # dual search: a positive-definite element of the row span rules out every PD solution
        E = symmetric_basis(n)
        M = system.matrix
        U, s, Vt = np.linalg.svd(M, full_matrices=False)
        r = int(np.sum(s > 1e-10 * max(1.0, s[0])))
        R = np.einsum("ds,sab->dab", Vt[:r], E)
        dual, _ = _ascent(R, _starts(R, restarts, rng), iters, step, trace, "dual")
        if dual > 1e-9:
            cert = f"the constraint rows span a positive-definite matrix (min eigenvalue {dual:.3g})"
    status = CERTIFIED_INFEASIBLE if cert else INFEASIBLE_WITHIN_BUDGET
    return CyclicFeasibilityResult(status, system.matrix, N, None, best, cert, trace or [])


# ---------------------------------------------------------------------------
# semisimple algebras


@dataclass(frozen=True)
class SemisimpleCyclicSolution:
    b_orthonormal_basis: np.ndarray
    epsilons: np.ndarray
    transformed_constants: np.ndarray
    constraints: tuple
    solution_basis: np.ndarray
    solution_space_dim: int
    feasible: bool
    Q_eigenvalues: np.ndarray | None
    gram: np.ndarray | None
    margin: float


def semisimple_cyclic_metrics(a, rtol: float = DEFAULT_RTOL) -> SemisimpleCyclicSolution:
    """Cyclic metrics that are diagonal in a fixed Killing-orthonormal basis.

    In such a basis ``{f_i}`` with ``B(f_i, f_i) = eps_i``, a diagonal metric
    ``<f_i, f_i> = eps_i * lam_i`` is cyclic iff
    ``cbar_ij^k (lam_i + lam_j + lam_k) = 0`` for ``i < j < k``.  A linear
    program looks for ``lam`` in that solution space with every
    ``eps_i * lam_i`` positive.
    """
    c = _constants(a)
    n = c.shape[0]
    kd = killing_form(c)
    if kd.signature[2] != 0:
        raise ValidationError(
            f"algebra is not semisimple: Killing form has rank {kd.rank} < {n}",
            {"killing_rank": kd.rank},
        )
    w, V = np.linalg.eigh(kd.matrix)
    C = V / np.sqrt(np.abs(w))
    eps = np.sign(w)
    Cinv = np.linalg.inv(C)
    cb = np.einsum("ia,jb,ijk,lk->abl", C, C, c, Cinv)
    scale = max(1.0, float(np.max(np.abs(cb))))
    rows, active = [], []
    for i, j, k in triples(n):
        if abs(cb[i, j, k]) > rtol * scale:
            r = np.zeros(n)
            r[[i, j, k]] = 1.0
            rows.append(r)
            active.append((i, j, k))
    A = np.array(rows) if rows else np.zeros((0, n))
    Nsol = sla.null_space(A) if rows else np.eye(n)
    d = Nsol.shape[1]
    lam = gram = None
    margin = -np.inf
    if d:
        # maximize t subject to eps_i (N y)_i >= t, |y_j| <= 1
        cost = np.zeros(d + 1)
        cost[-1] = -1.0
        A_ub = np.hstack([-(eps[:, None] * Nsol), np.ones((n, 1))])
        res = linprog(cost, A_ub=A_ub, b_ub=np.zeros(n),
                      bounds=[(-1, 1)] * d + [(None, None)], method="highs")
        if res.status == 0:
            margin = float(res.x[-1]) + 0.0  # no negative zero in reports
            if margin > 1e-9:
                lam = Nsol @ res.x[:d]
                D = np.diag(eps * lam)
                gram = Cinv.T @ D @ Cinv
                gram = 0.5 * (gram + gram.T)
                resid = np.max(np.abs(apply_constraints(c, gram)), initial=0.0)
                if resid > 1e-8 * max(1.0, float(np.max(np.abs(gram)))):
                    raise ValidationError(f"semisimple solution fails the cyclic system (residual {resid:.3g})")
                InnerProduct(gram)
    return SemisimpleCyclicSolution(
        b_orthonormal_basis=C,
        epsilons=eps,
        transformed_constants=cb,
        constraints=tuple(active),
        solution_basis=Nsol,
        solution_space_dim=d,
        feasible=lam is not None,
        Q_eigenvalues=lam,
        gram=gram,
        margin=margin,
    )
