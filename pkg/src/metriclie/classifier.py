"""Adapted bases, orthogonal splits and the normal form of cyclic metric Lie
algebras of dimension at most five.

Every nonabelian cyclic metric Lie algebra in this range is either solvable
of the form ``R^p`` acting by commuting selfadjoint derivations on an abelian
ideal, or an orthogonal product of the cyclic ``sl(2, R)`` family with a
solvable factor of dimension at most two.  :func:`classify` reduces the input
to that shape, reads off weights, and delegates the canonical choice of
parameters to :func:`metriclie.catalog.normal_form`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla

from . import catalog
from .catalog import FamilyParams, acting_kernel, normal_form
from .core import (
    ClassificationFailed,
    MetricLieAlgebra,
    NotCyclicError,
    UnsupportedError,
    ValidationError,
    bracket_span,
    center,
    change_basis,
    coefficient_scale,
    orthogonal_complement,
    restrict,
    span,
    structure_report,
    trace_form,
    unimodular_kernel,
)
from .homogeneous import is_cyclic

MAX_DIM = 5
RESIDUAL_TOL = 1e-8


# ---------------------------------------------------------------------------
# adapted bases


@dataclass(frozen=True)
class AdaptedBasis:
    basis_matrix: np.ndarray
    chain_dims: tuple
    constants: np.ndarray

    def solv_defect(self) -> float:
        """``max |c_ij^k|`` over ``k >= max(i, j)``."""
        c = self.constants
        n = c.shape[0]
        vals = [abs(c[i, j, k]) for i in range(n) for j in range(n) for k in range(max(i, j), n)]
        return float(max(vals, default=0.0))

    def symmetric_pairs_defect(self) -> float:
        """``max |c_ik^j - c_jk^i|`` over ``i < j < k``."""
        c = self.constants
        n = c.shape[0]
        vals = [abs(c[i, k, j] - c[j, k, i]) for i in range(n) for j in range(i + 1, n) for k in range(j + 1, n)]
        return float(max(vals, default=0.0))

    def selfadjoint_defect(self) -> float:
        """``max`` asymmetry of ``ad_{e_k}`` on ``span{e_1..e_k}``."""
        c = self.constants
        n = c.shape[0]
        worst = 0.0
        for k in range(n):
            A = c[k, : k + 1, : k + 1].T
            worst = max(worst, float(np.max(np.abs(A - A.T), initial=0.0)))
        return worst


def adapted_basis(m: MetricLieAlgebra) -> AdaptedBasis:
    """Orthonormal basis ``e_1..e_n`` with ``span{e_1..e_i}`` a chain of codimension-one subideals.

    Each step keeps ``[g_r, g_r]`` and drops the last vector of a pivoted
    orthonormal completion; the dropped vector becomes the next basis vector
    counted from the top.
    """
    n = m.dim
    cur = span(m, np.eye(n))
    normals = []
    while cur.shape[1] > 0:
        D = bracket_span(m, cur, cur)
        if D.shape[1] >= cur.shape[1]:
            raise ValidationError(
                f"algebra is not solvable: a {cur.shape[1]}-dimensional term equals its own derived algebra")
        if D.shape[1]:
            rest = cur - D @ (D.T @ m.gram @ cur)
            comp = span(m, rest)
        else:
            comp = cur
        if comp.shape[1] + D.shape[1] != cur.shape[1]:
            raise ValidationError("no codimension-one subideal found (numerical rank trouble)")
        normals.append(comp[:, -1])
        cur = np.column_stack([D, comp[:, :-1]]) if D.shape[1] + comp.shape[1] > 1 else np.zeros((n, 0))
    E = np.column_stack(normals[::-1]) if normals else np.zeros((n, 0))
    cons = change_basis(m, E).c
    return AdaptedBasis(E, tuple(range(n, -1, -1)), cons)


@dataclass(frozen=True)
class OrthogonalSplit:
    line: np.ndarray
    ideal: np.ndarray
    ideal_algebra: MetricLieAlgebra
    selfadjoint_defect: float
    ideal_cyclic: bool


def orthogonal_split(m: MetricLieAlgebra, tol: float | None = None) -> OrthogonalSplit:
    """``g = R W + u`` with ``u`` an ideal and ``ad_W`` selfadjoint on ``u``.

    Nonunimodular input splits along its unimodular kernel with ``tr ad_W > 0``;
    unimodular input uses the top adapted basis vector.
    """
    ok, defect = is_cyclic(m, tol)
    if not ok:
        raise NotCyclicError(f"metric is not cyclic (defect {defect:.3g})", defect)
    rep = structure_report(m)
    if not rep.solvable:
        raise ValidationError("orthogonal_split needs a solvable algebra")
    if rep.abelian:
        raise ValidationError("orthogonal_split needs a nonabelian algebra")
    if not rep.unimodular:
        U = unimodular_kernel(m)
        W = orthogonal_complement(m, U)[:, 0]
        if trace_form(m) @ W < 0:
            W = -W
    else:
        ab = adapted_basis(m)
        W = ab.basis_matrix[:, -1]
        U = ab.basis_matrix[:, :-1]
    sub = restrict(m, U)
    adW = np.einsum("i,ijk->kj", W, m.c)
    M = U.T @ m.gram @ adW @ U
    sdef = float(np.max(np.abs(M - M.T), initial=0.0))
    return OrthogonalSplit(W, U, sub, sdef, bool(is_cyclic(sub)[0]))


# ---------------------------------------------------------------------------
# normal forms on an orthonormal frame


@dataclass(frozen=True)
class FamilyIdentification:
    family: FamilyParams
    witness: np.ndarray
    residual: float
    decomposable: bool
    unimodular: bool
    factors: tuple
    representative: MetricLieAlgebra

    @property
    def tag(self) -> str:
        return self.family.tag


def _commuting_diagonalization(mats, seed=0):
    """Orthogonal ``Q`` diagonalizing commuting symmetric matrices, and the off-diagonal defect."""
    q = mats[0].shape[0]
    rng = np.random.default_rng(seed)
    comb = sum(rng.standard_normal() * M for M in mats) if mats else np.zeros((q, q))
    _, Q = np.linalg.eigh(0.5 * (comb + comb.T))
    worst = 0.0
    for M in mats:
        D = Q.T @ M @ Q
        worst = max(worst, float(np.max(np.abs(D - np.diag(np.diag(D))), initial=0.0)))
    return Q, worst


def _solvable_normal_form(m0: MetricLieAlgebra, tol: float, seed: int = 0):
    """Family and representative frame (columns in ``m0`` coordinates) of an orthonormal solvable cyclic algebra."""
    n = m0.dim
    full = np.eye(n)
    rep = structure_report(m0)
    if rep.abelian:
        return FamilyParams("Abelian", {"n": n}, n), full
    D = bracket_span(m0, full, full)
    Z = center(m0)
    V = span(m0, np.column_stack([D, Z]))
    diag = {"derived_dim": D.shape[1], "center_dim": Z.shape[1], "ideal_dim": V.shape[1]}
    if V.shape[1] != D.shape[1] + Z.shape[1]:
        raise ClassificationFailed("center meets the derived algebra", diag)
    A = orthogonal_complement(m0, V)
    c = m0.c
    vv = np.einsum("ia,jb,ijk->kab", V, V, c)
    aa = np.einsum("ia,jb,ijk->kab", A, A, c)
    diag["ideal_bracket"] = float(np.max(np.abs(vv), initial=0.0))
    diag["acting_bracket"] = float(np.max(np.abs(aa), initial=0.0))
    if diag["ideal_bracket"] > tol or diag["acting_bracket"] > tol:
        raise ClassificationFailed("algebra is not an abelian action on an abelian ideal", diag)
    mats = []
    for s in range(A.shape[1]):
        adA = np.einsum("i,ijk->kj", A[:, s], c)
        M = V.T @ adA @ V
        diag.setdefault("asymmetry", 0.0)
        diag["asymmetry"] = max(diag["asymmetry"], float(np.max(np.abs(M - M.T), initial=0.0)))
        mats.append(0.5 * (M + M.T))
    if diag.get("asymmetry", 0.0) > tol:
        raise ClassificationFailed("acting derivations are not selfadjoint", diag)
    Q, off = _commuting_diagonalization(mats, seed)
    diag["simultaneous_diagonalization"] = off
    if off > tol:
        raise ClassificationFailed("acting derivations do not commute", diag)
    Vq = V @ Q
    W = np.array([[Q[:, i] @ M @ Q[:, i] for M in mats] for i in range(V.shape[1])]).reshape(V.shape[1], A.shape[1])
    nf = normal_form(W)
    K = A @ acting_kernel(W)
    ext = np.column_stack([Vq, K])[:, nf.order]
    act = A @ nf.acting
    frame = np.column_stack([act, ext]) if nf.acting_first else np.column_stack([ext, act])
    return nf.family, frame


def _milnor_frame(m3: MetricLieAlgebra):
    """Orthonormal frame of a 3-dimensional unimodular metric algebra putting it in catalog ``sl(2)`` form."""
    c = m3.c
    L = np.column_stack([c[1, 2], c[2, 0], c[0, 1]])
    mu, F = np.linalg.eigh(0.5 * (L + L.T))
    if np.linalg.det(F) < 0:
        F[:, 0] = -F[:, 0]
    if np.sum(mu < 0) >= 2:
        F, mu = -F, -mu
    k = int(np.argmin(mu))
    idx = [(k + 1) % 3, (k + 2) % 3, k]
    F, mu = F[:, idx], mu[idx]
    if mu[0] < mu[1]:
        F = np.column_stack([F[:, 1], F[:, 0], -F[:, 2]])
        mu = mu[[1, 0, 2]]
    return F, mu


def _classify_frame(m0: MetricLieAlgebra, tol: float, seed: int = 0):
    """Family and representative frame for an orthonormal cyclic algebra."""
    n = m0.dim
    rep = structure_report(m0)
    if rep.solvable:
        return _solvable_normal_form(m0, tol, seed)
    S = rep.derived_series[-1]
    diag = {"levi_dim": S.shape[1], "killing_signature": rep.killing.signature}
    if S.shape[1] != 3:
        raise ClassificationFailed("stable derived algebra is not three-dimensional", diag)
    R = orthogonal_complement(m0, S)
    mixed = np.einsum("ia,jb,ijk->kab", S, R, m0.c) if R.shape[1] else np.zeros(1)
    diag["mixed_bracket"] = float(np.max(np.abs(mixed), initial=0.0))
    if diag["mixed_bracket"] > tol:
        raise ClassificationFailed("semisimple part is not an orthogonal direct factor", diag)
    ms = restrict(m0, S)
    F, mu = _milnor_frame(ms)
    if not (mu[0] > tol and mu[1] > tol):
        diag["milnor_eigenvalues"] = mu.tolist()
        raise ClassificationFailed("three-dimensional factor is not of cyclic sl(2, R) type", diag)
    l1, l2 = catalog.canonical_sl2(float(mu[0]), float(mu[1]))
    sl = FamilyParams("Sl2Cyclic", {"l1": l1, "l2": l2}, 3)
    sframe = S @ F
    if R.shape[1] == 0:
        return sl, sframe
    mr = restrict(m0, R)
    rfam, rframe = _solvable_normal_form(mr, tol, seed)
    return FamilyParams("DirectProduct", {}, n, (sl, rfam)), np.column_stack([sframe, R @ rframe])


# ---------------------------------------------------------------------------
# decompositions


def _commutant(mats: list, n: int, tol: float) -> np.ndarray:
    """Basis (``k x n x n``) of matrices commuting with every matrix in ``mats``."""
    I = np.eye(n)
    rows = [np.kron(M.T, I) - np.kron(I, M) for M in mats]
    if not rows:
        return np.eye(n * n).reshape(n * n, n, n)
    A = np.vstack(rows)
    N = sla.null_space(A, rcond=tol)
    return N.T.reshape(-1, n, n).transpose(0, 2, 1)


def orthogonal_factors(m: MetricLieAlgebra, tol: float | None = None, seed: int = 0) -> list:
    """Finest splitting into mutually orthogonal ideals, each as an orthonormal column basis.

    Orthogonal ideal splittings correspond to orthogonal projections commuting
    with every ``ad_X``; the eigenspaces of a random symmetric element of that
    commutant are the irreducible pieces.
    """
    n = m.dim
    P = m.frame
    m0 = change_basis(m, P)
    ads = [m0.c[i].T for i in range(n)]
    mats = [A for A in ads if np.any(A)] + [A.T for A in ads if np.any(A)]
    rtol = 1e-9 if tol is None else tol
    basis = _commutant(mats, n, rtol)
    rng = np.random.default_rng(seed)
    X = np.tensordot(rng.standard_normal(basis.shape[0]), basis, axes=1)
    X = 0.5 * (X + X.T)
    w, Q = np.linalg.eigh(X)
    scale = max(1.0, float(np.max(np.abs(w), initial=0.0)))
    groups = [[0]]
    for i in range(1, n):
        if w[i] - w[groups[-1][-1]] <= 1e-6 * scale:
            groups[-1].append(i)
        else:
            groups.append([i])
    return [P @ Q[:, g] for g in groups]


@dataclass(frozen=True)
class Decomposition:
    factors: tuple
    bases: tuple

    @property
    def decomposable(self) -> bool:
        return len(self.bases) > 1


def _group_factors(fams: list, bases: list):
    """Merge abelian lines into one ``Abelian(k)`` factor placed last; order ``sl(2)`` first."""
    ab = [b for f, b in zip(fams, bases) if f.tag == "Abelian"]
    rest = [(f, b) for f, b in zip(fams, bases) if f.tag != "Abelian"]
    rest.sort(key=lambda fb: (fb[0].tag != "Sl2Cyclic", -fb[0].dim, fb[0].tag))
    out_f = [f for f, _ in rest]
    out_b = [b for _, b in rest]
    if ab:
        k = sum(b.shape[1] for b in ab)
        out_f.append(FamilyParams("Abelian", {"n": k}, k))
        out_b.append(np.column_stack(ab))
    return out_f, out_b


def decomposability(m: MetricLieAlgebra, tol: float | None = None, seed: int = 0) -> Decomposition:
    """Orthogonal direct-sum factorization into ideals; each factor named when it is cyclic."""
    bases = orthogonal_factors(m, tol, seed)
    fams = []
    for B in bases:
        sub = restrict(m, B)
        if structure_report(sub).abelian:
            fams.append(FamilyParams("Abelian", {"n": sub.dim}, sub.dim))
            continue
        try:
            fams.append(classify(sub, seed=seed, decompose=False).family)
        except (NotCyclicError, ClassificationFailed, UnsupportedError):
            fams.append(None)
    if any(f is None for f in fams):
        return Decomposition(tuple(fams), tuple(bases))
    f, b = _group_factors(fams, bases)
    return Decomposition(tuple(f), tuple(b))


# ---------------------------------------------------------------------------
# classification


def isomorphism_residual(m: MetricLieAlgebra, witness: np.ndarray, rep: MetricLieAlgebra) -> float:
    """``max|c' - c_rep| + max|G' - G_rep|`` where primes denote the input pushed through ``witness``."""
    mw = change_basis(m, witness)
    return float(np.max(np.abs(mw.c - rep.c), initial=0.0) + np.max(np.abs(mw.gram - rep.gram), initial=0.0))


def classify(m: MetricLieAlgebra, tol: float | None = None, seed: int = 0,
             decompose: bool = True) -> FamilyIdentification:
    """Identify a cyclic metric Lie algebra (dimension at most five) with its catalog normal form.

    The witness ``P`` has the representative basis vectors as columns in
    input coordinates, so ``change_basis(m, P)`` reproduces the
    representative's structure constants and identity Gram matrix.
    """
    n = m.dim
    if n > MAX_DIM:
        raise UnsupportedError(f"classification is implemented up to dimension {MAX_DIM}, got {n}")
    ok, defect = is_cyclic(m, tol)
    if not ok:
        raise NotCyclicError(f"metric is not cyclic (defect {defect:.3g})", defect)
    P = m.frame
    m0 = change_basis(m, P)
    scale = coefficient_scale(m0.c)
    inner_tol = 1e-7 * scale
    fam, frame = _classify_frame(m0, inner_tol, seed)
    entry = catalog.make(fam)
    witness = P @ frame
    residual = isomorphism_residual(m, witness, entry.algebra)
    if residual > RESIDUAL_TOL * scale:
        raise ClassificationFailed(
            f"witness residual {residual:.3g} exceeds tolerance",
            {"family": fam.describe(), "residual": residual},
        )
    factors = (fam,)
    split = False
    if decompose:
        dec = decomposability(m, seed=seed)
        split = dec.decomposable
        if split and all(f is not None for f in dec.factors):
            factors = dec.factors
    uni = bool(np.max(np.abs(trace_form(m0)), initial=0.0) <= inner_tol * n)
    return FamilyIdentification(fam, witness, residual, split, uni, factors, entry.algebra)
