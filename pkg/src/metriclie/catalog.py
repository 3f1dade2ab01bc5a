"""Named cyclic (and a few reference non-cyclic) metric Lie algebras with their
closed-form curvature data.

Families, all emitted in an orthonormal basis:

* ``Gn(alphas)``: basis ``e_1..e_{n-1}, e_n`` with ``[e_n, e_i] = alpha_i e_i``.
* ``HyperbolicHn(n, c)``: ``Gn(c, ..., c)``, constant curvature ``-c^2``.
* ``E11(alpha)``: ``Gn(alpha, -alpha)``.
* ``Hnp1(rhos; lambdas)``: basis ``u0, v0, v_1..v_q`` with ``[u0, v_i] = rho_i v_i`` and
  ``[v0, v_i] = lambda_i v_i``, ``sum lambda_i = 0`` (the last lambda may be omitted).
* ``HnpHat(sigmas; mus)``: same shape with ``[u0, v_i] = sigma_i v_i`` (``sigma_1 = 0``,
  only ``sigma_2..`` are given) and ``[v0, v_i] = mu_i v_i``.
* ``Sl2Cyclic(l1, l2)``: ``[e2,e3] = l1 e1, [e3,e1] = l2 e2, [e1,e2] = -(l1+l2) e3``.
* ``So3Biinv(beta)``, ``Heisenberg``, ``Abelian(n)``, ``DirectProduct(factors)``,
  and semidirect sums via :func:`make_semidirect`.

Solvable families of the form ``R^p`` acting diagonally on an abelian ideal are
described by a weight matrix ``W`` (one row per ideal direction, one column
per acting direction).  :func:`normal_form` turns any weight matrix into the
canonical family tag and parameters; the classifier uses the same routine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cmp_to_key

import numpy as np
from scipy.linalg import block_diag

from .core import (
    DimensionError,
    LieAlgebra,
    MetricLieAlgebra,
    UnsupportedError,
    ValidationError,
    direct_sum,
    from_matrix_basis,
)

TAGS = (
    "Gn", "Hnp1", "HnpHat", "HyperbolicHn", "Sl2Cyclic", "E11", "So3Biinv",
    "Heisenberg", "Semidirect", "DirectProduct", "Abelian",
)

CANON_RTOL = 1e-7


@dataclass(frozen=True)
class FamilyParams:
    tag: str
    params: dict = field(default_factory=dict)
    dim: int = 0
    factors: tuple = ()

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValidationError(f"unknown family tag {self.tag!r}; known: {', '.join(TAGS)}")

    def vector(self) -> np.ndarray:
        """Flat parameter vector for numerical comparison."""
        out = []
        for key in sorted(self.params):
            v = self.params[key]
            out.extend(np.atleast_1d(np.asarray(v, float)).tolist())
        for f in self.factors:
            out.extend(f.vector().tolist())
        return np.array(out)

    def describe(self) -> str:
        if self.tag == "DirectProduct":
            return " x ".join(f.describe() for f in self.factors)
        parts = []
        for key in sorted(self.params):
            v = self.params[key]
            if isinstance(v, (list, tuple, np.ndarray)):
                parts.append(f"{key}=(" + ", ".join(f"{float(x):.6g}" for x in v) + ")")
            else:
                parts.append(f"{key}={float(v):.6g}" if not isinstance(v, int) else f"{key}={v}")
        return f"{self.tag}[{self.dim}](" + "; ".join(parts) + ")"

    def to_dict(self) -> dict:
        d = {"tag": self.tag, "dim": self.dim, "params": {}}
        for k, v in self.params.items():
            if isinstance(v, (list, tuple, np.ndarray)):
                d["params"][k] = [float(x) for x in v]
            elif isinstance(v, (int, np.integer)):
                d["params"][k] = int(v)
            else:
                d["params"][k] = float(v)
        if self.factors:
            d["factors"] = [f.to_dict() for f in self.factors]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "FamilyParams":
        return cls(d["tag"], dict(d.get("params", {})), int(d.get("dim", 0)),
                   tuple(cls.from_dict(f) for f in d.get("factors", ())))


@dataclass(frozen=True)
class ReferenceInvariants:
    """Closed-form values in the catalog basis; ``None`` where no formula is attached."""

    ricci: np.ndarray | None = None
    principal_ricci: np.ndarray | None = None
    scalar: float | None = None
    basic_sectional: dict = field(default_factory=dict)
    curvature: np.ndarray | None = None
    tv_verdict: str | None = None
    unimodular: bool | None = None
    extras: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CatalogEntry:
    algebra: MetricLieAlgebra
    family: FamilyParams
    reference: ReferenceInvariants
    isometries: dict = field(default_factory=dict)


def _arr(x) -> np.ndarray:
    return np.atleast_1d(np.asarray(x, dtype=float))


def _zero(v, scale=1.0) -> bool:
    return abs(v) <= 1e-12 * max(1.0, scale)


# ---------------------------------------------------------------------------
# diagonal actions on an abelian ideal


def diagonal_action_constants(W: np.ndarray, acting_first: bool) -> np.ndarray:
    """Structure constants of ``R^p`` acting on ``R^q`` by ``[a_s, v_i] = W[i, s] v_i``."""
    W = np.asarray(W, float)
    q, p = W.shape
    n = p + q
    c = np.zeros((n, n, n))
    a_idx = list(range(p)) if acting_first else list(range(q, n))
    v_idx = list(range(p, n)) if acting_first else list(range(q))
    for s, a in enumerate(a_idx):
        for i, v in enumerate(v_idx):
            c[a, v, v] = W[i, s]
            c[v, a, v] = -W[i, s]
    return c


def _curvature_from_display(n: int, entries) -> np.ndarray:
    """Full ``R[i, j, k, :]`` from listed ``R(e_i, e_j)e_k`` values, completed by ``R(Y,X) = -R(X,Y)``."""
    R = np.zeros((n, n, n, n))
    for (i, j, k), vec in entries:
        R[i, j, k] = vec
        R[j, i, k] = -np.asarray(vec)
    return R


def _gn_reference(al: np.ndarray) -> ReferenceInvariants:
    q = len(al)
    n = q + 1
    tot = al.sum()
    ric = np.zeros((n, n))
    ric[q, q] = -np.sum(al ** 2)
    for i in range(q):
        ric[i, i] = -al[i] * tot
    s = -2.0 * (np.sum(al ** 2) + sum(al[i] * al[j] for i in range(q) for j in range(i + 1, q)))
    K = {}
    for i in range(q):
        K[(i, q)] = -al[i] ** 2
        for j in range(i + 1, q):
            K[(i, j)] = -al[i] * al[j]
    entries = []
    e = np.eye(n)
    for i in range(q):
        # displayed: R_{e_i e_n} e_i = -alpha_i^2 e_n, R_{e_i e_j} e_i = -alpha_i alpha_j e_j;
        # the companions follow from metric skew-symmetry of R(X, Y)
        entries.append(((i, q, i), -al[i] ** 2 * e[q]))
        entries.append(((i, q, q), al[i] ** 2 * e[i]))
        for j in range(q):
            if j != i:
                entries.append(((i, j, i), -al[i] * al[j] * e[j]))
                entries.append(((i, j, j), al[i] * al[j] * e[i]))
    R = _curvature_from_display(n, entries)
    scale = max(1.0, float(np.max(np.abs(al))))
    if np.all(np.abs(al) <= 1e-300):
        verdict = "zero"
    elif np.max(np.abs(al - al[0])) <= 1e-12 * scale:
        verdict = "T1"
    elif _zero(tot, scale):
        verdict = "T2"
    else:
        verdict = "T1⊕T2"
    return ReferenceInvariants(
        ricci=ric,
        principal_ricci=np.sort(np.diag(ric)),
        scalar=float(s),
        basic_sectional=K,
        curvature=R,
        tv_verdict=verdict,
        unimodular=bool(_zero(tot, scale)),
        extras={"harmonic_immersion": bool(_zero(np.sum(al ** 3), scale ** 3))},
    )


def make_Gn(alphas) -> CatalogEntry:
    al = _arr(alphas)
    if al.size < 1:
        raise DimensionError("Gn needs at least one alpha")
    c = diagonal_action_constants(al[:, None], acting_first=False)
    n = al.size + 1
    labels = [f"e{i + 1}" for i in range(n)]
    m = MetricLieAlgebra.build(c, np.eye(n), labels)
    fp = FamilyParams("Gn", {"alphas": al.tolist()}, n)
    return CatalogEntry(m, fp, _gn_reference(al))


def _complete_lambdas(lambdas, q: int, name: str = "lambdas") -> np.ndarray:
    lam = _arr(lambdas)
    if lam.size == q - 1:
        lam = np.append(lam, -lam.sum())
    if lam.size != q:
        raise DimensionError(f"{name} must have length {q - 1} or {q}, got {lam.size}")
    scale = max(1.0, float(np.max(np.abs(lam))))
    if abs(lam.sum()) > 1e-9 * scale:
        raise ValidationError(f"{name} must sum to zero (sum {lam.sum():.3g})")
    return lam


def _two_weight_reference(rho: np.ndarray, lam: np.ndarray) -> ReferenceInvariants:
    """Curvature displays for ``[u0, v_i] = rho_i v_i``, ``[v0, v_i] = lambda_i v_i`` with ``sum lambda = 0``."""
    q = rho.size
    n = q + 2
    e = np.eye(n)
    u0, v0 = 0, 1
    entries = []
    for i in range(q):
        vi = 2 + i
        r, l = rho[i], lam[i]
        entries += [
            ((u0, vi, u0), -r * r * e[vi]),
            ((v0, vi, v0), -l * l * e[vi]),
            ((u0, vi, v0), -l * r * e[vi]),
            ((v0, vi, u0), -l * r * e[vi]),
            ((u0, vi, vi), r * (r * e[u0] + l * e[v0])),
            ((v0, vi, vi), l * (r * e[u0] + l * e[v0])),
        ]
        for j in range(q):
            if j != i:
                vj = 2 + j
                k = lam[i] * lam[j] + rho[i] * rho[j]
                entries += [((vi, vj, vi), -k * e[vj]), ((vi, vj, vj), k * e[vi])]
    R = _curvature_from_display(n, entries)
    K = {(u0, v0): 0.0}
    for i in range(q):
        K[(u0, 2 + i)] = -rho[i] ** 2
        K[(v0, 2 + i)] = -lam[i] ** 2
        for j in range(i + 1, q):
            K[(2 + i, 2 + j)] = -(rho[i] * rho[j] + lam[i] * lam[j])
    ric = np.zeros((n, n))
    ric[u0, u0] = -np.sum(rho ** 2)
    ric[v0, v0] = -np.sum(lam ** 2)
    ric[u0, v0] = ric[v0, u0] = -np.sum(lam * rho)
    for i in range(q):
        ric[2 + i, 2 + i] = -rho[i] * rho.sum()
    s = -np.sum(lam ** 2) - np.sum(rho ** 2) - rho.sum() ** 2
    scale = max(1.0, float(np.max(np.abs(rho))))
    uni = bool(_zero(rho.sum(), scale))
    return ReferenceInvariants(
        ricci=ric,
        principal_ricci=np.linalg.eigvalsh(ric),
        scalar=float(s),
        basic_sectional=K,
        curvature=R,
        tv_verdict="T2" if uni else "T1⊕T2",
        unimodular=uni,
    )


def make_Hnp1(rhos, lambdas) -> CatalogEntry:
    rho = _arr(rhos)
    q = rho.size
    if q < 2:
        raise DimensionError("Hnp1 needs at least two rho values")
    lam = _complete_lambdas(lambdas, q)
    if np.all(rho == 0):
        raise ValidationError("rhos must not all vanish")
    if np.all(lam == 0):
        raise ValidationError("lambdas must not all vanish")
    W = np.column_stack([rho, lam])
    c = diagonal_action_constants(W, acting_first=True)
    n = q + 2
    labels = ["u0", "v0"] + [f"v{i + 1}" for i in range(q)]
    m = MetricLieAlgebra.build(c, np.eye(n), labels)
    fp = FamilyParams("Hnp1", {"rhos": rho.tolist(), "lambdas": lam[:-1].tolist()}, n)
    return CatalogEntry(m, fp, _two_weight_reference(rho, lam))


def make_HnpHat(sigmas, mus) -> CatalogEntry:
    """``sigmas`` lists ``sigma_2..sigma_q`` (``sigma_1 = 0``); ``mus`` lists all ``q`` values with ``mu_1 != 0``."""
    mu = _arr(mus)
    q = mu.size
    sig = _arr(sigmas)
    if sig.size != q - 1:
        raise DimensionError(f"HnpHat needs {q - 1} sigmas for {q} mus, got {sig.size}")
    if mu[0] == 0:
        raise ValidationError("mu_1 must be nonzero")
    sig = np.concatenate([[0.0], sig])
    W = np.column_stack([sig, mu])
    c = diagonal_action_constants(W, acting_first=True)
    n = q + 2
    labels = ["u0", "v0"] + [f"v{i + 1}" for i in range(q)]
    m = MetricLieAlgebra.build(c, np.eye(n), labels)
    fp = FamilyParams("HnpHat", {"sigmas": sig[1:].tolist(), "mus": mu.tolist()}, n)
    scale = max(1.0, float(np.max(np.abs(mu))))
    ref = _two_weight_reference(sig, mu) if _zero(mu.sum(), scale) else ReferenceInvariants(
        scalar=float(-np.sum(sig ** 2) - np.sum(mu ** 2) - sig.sum() ** 2 - mu.sum() ** 2))
    return CatalogEntry(m, fp, ref)


def make_hyperbolic(n: int, c: float) -> CatalogEntry:
    if n < 2:
        raise DimensionError("hyperbolic space needs dimension at least 2")
    if c == 0:
        raise ValidationError("curvature parameter c must be nonzero")
    e = make_Gn([c] * (n - 1))
    ref = e.reference
    ref = ReferenceInvariants(ref.ricci, ref.principal_ricci, ref.scalar, ref.basic_sectional, ref.curvature,
                              "T1", False, {"constant_sectional": -float(c) ** 2})
    return CatalogEntry(e.algebra, FamilyParams("HyperbolicHn", {"n": int(n), "c": float(c)}, n), ref)


def make_E11(alpha: float) -> CatalogEntry:
    if alpha == 0:
        raise ValidationError("alpha must be nonzero")
    e = make_Gn([alpha, -alpha])
    r2 = 1.0 / np.sqrt(2.0)
    # frame u1' = e3, u2' = (e1 + e2)/sqrt2, u3' = (e1 - e2)/sqrt2 gives
    # [u1', u2'] = alpha u3', [u3', u1'] = -alpha u2'
    P = np.array([[0.0, r2, r2], [0.0, r2, -r2], [1.0, 0.0, 0.0]])
    ref = e.reference
    ref = ReferenceInvariants(ref.ricci, np.array([-2 * alpha ** 2, 0.0, 0.0]), ref.scalar, ref.basic_sectional,
                              ref.curvature, "T2", True, ref.extras)
    return CatalogEntry(e.algebra, FamilyParams("E11", {"alpha": float(alpha)}, 3), ref, {"rotated_frame": P})


SL2_MATRICES = (
    np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], float),
    np.array([[0, 0, 1], [0, 0, 0], [1, 0, 0]], float),
    np.array([[0, 0, 0], [0, 0, -1], [0, 1, 0]], float),
)


def sl2_matrix_algebra() -> LieAlgebra:
    """The ``so(1,2)`` matrix model ``E12+E21, E13+E31, E32-E23`` of ``sl(2,R)``."""
    return from_matrix_basis(SL2_MATRICES, ("A", "B", "C"))


def sl2_constants(l1: float, l2: float) -> np.ndarray:
    c = np.zeros((3, 3, 3))
    for (i, j, k), v in (((1, 2, 0), l1), ((2, 0, 1), l2), ((0, 1, 2), -(l1 + l2))):
        c[i, j, k] = v
        c[j, i, k] = -v
    return c


def make_sl2_cyclic(l1: float, l2: float) -> CatalogEntry:
    """Rescaled ``so(1,2)`` frame declared orthonormal.

    With ``e1 = a A``, ``e2 = b B``, ``e3 = g C`` where ``a = sqrt(l2 (l1+l2))``,
    ``b = sqrt(l1 (l1+l2))``, ``g = sqrt(l1 l2)`` and the matrix brackets
    ``[B, C] = A``, ``[C, A] = B``, ``[A, B] = -C``, the structure constants
    below are exact.
    """
    l1, l2 = float(l1), float(l2)
    if not (l1 > 0 and l2 > 0):
        raise ValidationError("Sl2Cyclic needs l1 > 0 and l2 > 0")
    m = MetricLieAlgebra.build(sl2_constants(l1, l2), np.eye(3))
    ric = np.diag([-2 * l2 * (l1 + l2), -2 * l1 * (l1 + l2), 2 * l1 * l2])
    ref = ReferenceInvariants(
        ricci=ric,
        principal_ricci=np.sort(np.diag(ric)),
        scalar=float(np.trace(ric)),
        tv_verdict="T2",
        unimodular=True,
        extras={"ricci_signs": "(-,-,+)"},
    )
    scale = {"a": np.sqrt(l2 * (l1 + l2)), "b": np.sqrt(l1 * (l1 + l2)), "g": np.sqrt(l1 * l2)}
    return CatalogEntry(m, FamilyParams("Sl2Cyclic", {"l1": l1, "l2": l2}, 3), ref,
                        {"matrix_scales": np.array([scale["a"], scale["b"], scale["g"]])})


def so3_constants() -> np.ndarray:
    """``[e1, e2] = e3`` and cyclic permutations."""
    c = np.zeros((3, 3, 3))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        c[i, j, k] = 1.0
        c[j, i, k] = -1.0
    return c


def make_so3_biinvariant(beta: float = 1.0) -> CatalogEntry:
    """``so(3)`` with ``[e1,e2] = e3`` cyclically and metric ``-beta B = 2 beta I``."""
    if not beta > 0:
        raise ValidationError("beta must be positive")
    c = so3_constants()
    B = -2.0 * np.eye(3)
    m = MetricLieAlgebra.build(c, -beta * B)
    ric = -0.25 * B
    ref = ReferenceInvariants(
        ricci=ric,
        principal_ricci=np.full(3, 1.0 / (4.0 * beta)),
        scalar=3.0 / (4.0 * beta),
        basic_sectional={(i, j): 1.0 / (4.0 * 2.0 * beta) for i in range(3) for j in range(i + 1, 3)},
        tv_verdict="T3",
        unimodular=True,
    )
    return CatalogEntry(m, FamilyParams("So3Biinv", {"beta": float(beta)}, 3), ref)


def make_heisenberg() -> CatalogEntry:
    c = np.zeros((3, 3, 3))
    c[0, 1, 2], c[1, 0, 2] = 1.0, -1.0
    m = MetricLieAlgebra.build(c, np.eye(3))
    ric = np.diag([-0.5, -0.5, 0.5])
    ref = ReferenceInvariants(ricci=ric, principal_ricci=np.sort(np.diag(ric)), scalar=-0.5,
                              unimodular=True)
    return CatalogEntry(m, FamilyParams("Heisenberg", {}, 3), ref)


def make_abelian(n: int) -> CatalogEntry:
    m = MetricLieAlgebra.build(np.zeros((n, n, n)), np.eye(n))
    z = np.zeros((n, n))
    ref = ReferenceInvariants(ricci=z, principal_ricci=np.zeros(n), scalar=0.0, curvature=np.zeros((n,) * 4),
                              tv_verdict="zero", unimodular=True)
    return CatalogEntry(m, FamilyParams("Abelian", {"n": int(n)}, n), ref)


def make_direct_product(*entries: CatalogEntry) -> CatalogEntry:
    m = direct_sum(*(e.algebra for e in entries))
    fp = FamilyParams("DirectProduct", {}, m.dim, tuple(e.family for e in entries))
    refs = [e.reference for e in entries]
    scal = None
    if all(r.scalar is not None for r in refs):
        scal = float(sum(r.scalar for r in refs))
    ric = None
    if all(r.ricci is not None for r in refs):
        ric = block_diag(*[r.ricci for r in refs])
    pr = np.sort(np.concatenate([r.principal_ricci for r in refs])) if all(
        r.principal_ricci is not None for r in refs) else None
    uni = all(r.unimodular for r in refs) if all(r.unimodular is not None for r in refs) else None
    return CatalogEntry(m, fp, ReferenceInvariants(ricci=ric, principal_ricci=pr, scalar=scal, unimodular=uni))


# ---------------------------------------------------------------------------
# semidirect sums


@dataclass(frozen=True, eq=False)
class SemidirectSpec:
    left: MetricLieAlgebra
    right: MetricLieAlgebra
    action: np.ndarray

    def __post_init__(self):
        D = np.asarray(self.action, float)
        n1, n2 = self.left.dim, self.right.dim
        if D.shape != (n1, n2, n2):
            raise DimensionError(f"action must have shape ({n1}, {n2}, {n2}), got {D.shape}")
        object.__setattr__(self, "action", D)

    def derivation_defect(self) -> float:
        """``max |D[x, y] - [Dx, y] - [x, Dy]|`` over basis vectors and acting generators."""
        c2 = self.right.c
        D = self.action
        lhs = np.einsum("ijm,akm->aijk", c2, D)
        r1 = np.einsum("ami,mjk->aijk", D, c2)
        r2 = np.einsum("amj,imk->aijk", D, c2)
        return float(np.max(np.abs(lhs - r1 - r2), initial=0.0))

    def homomorphism_defect(self) -> float:
        D = self.action
        c1 = self.left.c
        lhs = np.einsum("abm,mkl->abkl", c1, D)
        rhs = np.einsum("akp,bpl->abkl", D, D) - np.einsum("bkp,apl->abkl", D, D)
        return float(np.max(np.abs(lhs - rhs), initial=0.0))

    def selfadjoint_defect(self) -> float:
        G2 = self.right.gram
        M = np.einsum("kl,alj->akj", G2, self.action)
        return float(np.max(np.abs(M - M.transpose(0, 2, 1)), initial=0.0))


def make_semidirect(spec: SemidirectSpec, tol: float = 1e-9) -> MetricLieAlgebra:
    """Orthogonal semidirect sum; ``action[a]`` is the matrix of ``D(f_a)`` (columns are images)."""
    scale = max(1.0, float(np.max(np.abs(spec.action), initial=0.0))) ** 2
    dd, hd = spec.derivation_defect(), spec.homomorphism_defect()
    if dd > tol * scale:
        raise ValidationError(f"action is not by derivations (defect {dd:.3g})", {"derivation": dd})
    if hd > tol * scale:
        raise ValidationError(f"action is not a homomorphism (defect {hd:.3g})", {"homomorphism": hd})
    n1, n2 = spec.left.dim, spec.right.dim
    n = n1 + n2
    c = np.zeros((n, n, n))
    c[:n1, :n1, :n1] = spec.left.c
    c[n1:, n1:, n1:] = spec.right.c
    for a in range(n1):
        for j in range(n2):
            c[a, n1 + j, n1:] = spec.action[a][:, j]
            c[n1 + j, a, n1:] = -spec.action[a][:, j]
    G = np.zeros((n, n))
    G[:n1, :n1] = spec.left.gram
    G[n1:, n1:] = spec.right.gram
    return MetricLieAlgebra.build(c, G)


# ---------------------------------------------------------------------------
# canonical forms


def _cmp_desc(tol):
    def cmp(x, y):
        for a, b in zip(x, y):
            if a > b + tol:
                return -1
            if b > a + tol:
                return 1
        return 0

    return cmp


def _lex_greater(x, y, tol) -> bool:
    return _cmp_desc(tol)(x, y) < 0


def _pick_max(candidates, tol):
    """Candidate ``(key_tuple, payload)`` with the lexicographically largest key."""
    best = candidates[0]
    for cand in candidates[1:]:
        if _lex_greater(cand[0], best[0], tol):
            best = cand
    return best


def _snap(x: np.ndarray, tol: float) -> np.ndarray:
    x = np.array(x, float)
    x[np.abs(x) <= tol] = 0.0
    return x + 0.0


def canonical_sl2(l1: float, l2: float) -> tuple:
    return (max(l1, l2), min(l1, l2))


@dataclass(frozen=True)
class NormalForm:
    family: FamilyParams
    acting: np.ndarray
    order: np.ndarray
    acting_first: bool
    weights: np.ndarray


def normal_form(W, tol: float | None = None) -> NormalForm:
    """Canonical family for ``R^p`` acting on ``R^q`` by commuting diagonal weights.

    ``W`` is ``q x p`` in orthonormal frames.  Returns the family and how to
    build the representative frame: ``acting`` (``p x r``, new acting
    directions in the old acting coordinates), and ``order`` indexing the
    extended ideal list ``[ideal directions] + [kernel directions of W]``
    where kernel directions of ``W`` are the columns of ``kernel`` in
    ``NormalForm.weights``' companion (see :func:`acting_kernel`).
    """
    W = np.asarray(W, float)
    q, p = W.shape
    n = p + q
    scale = max(1.0, float(np.max(np.abs(W), initial=0.0)))
    tol = CANON_RTOL * scale if tol is None else tol
    if p:
        U, s, Vt = np.linalg.svd(W, full_matrices=True)
        r = int(np.sum(s > tol))
        row = Vt[:r].T
    else:
        r, row = 0, np.zeros((0, 0))
    kern = p - r
    Wr = W @ row if r else np.zeros((q, 0))
    ext = np.vstack([Wr, np.zeros((kern, r))]) if r else np.zeros((q + kern, 0))
    m = q + kern
    if r == 0:
        fam = FamilyParams("Abelian", {"n": n}, n)
        return NormalForm(fam, np.zeros((p, 0)), np.arange(m), False, ext)
    if r == 1:
        cands = []
        for sgn in (1.0, -1.0):
            al = sgn * ext[:, 0]
            order = sorted(range(m), key=cmp_to_key(lambda i, j: _cmp_desc(tol)((al[i],), (al[j],))))
            cands.append((tuple(al[order]), (sgn, np.array(order))))
        key, (sgn, order) = _pick_max(cands, tol)
        al = _snap(np.array(key), tol)
        if np.max(np.abs(al - al[0])) <= tol:
            fam = FamilyParams("HyperbolicHn", {"n": n, "c": float(al[0])}, n)
        elif n == 3 and abs(al[0] + al[1]) <= tol:
            fam = FamilyParams("E11", {"alpha": float(al[0])}, 3)
        else:
            fam = FamilyParams("Gn", {"alphas": al.tolist()}, n)
        return NormalForm(fam, sgn * row, order, False, al[:, None])
    if r == 2:
        J = np.array([[0.0, -1.0], [1.0, 0.0]])
        t = ext.sum(axis=0)
        cands = []
        if np.linalg.norm(t) > tol:
            u0 = t / np.linalg.norm(t)
            for sgn in (1.0, -1.0):
                F = np.column_stack([u0, sgn * (J @ u0)])
                Z = ext @ F
                order = sorted(range(m), key=cmp_to_key(
                    lambda i, j: _cmp_desc(tol)((Z[i, 1], Z[i, 0]), (Z[j, 1], Z[j, 0]))))
                Zo = Z[order]
                cands.append((tuple(Zo[:, 1]) + tuple(Zo[:, 0]), (F, np.array(order), Zo)))
            _, (F, order, Zo) = _pick_max(cands, tol)
            Zo = _snap(Zo, tol)
            fam = FamilyParams("Hnp1", {"rhos": Zo[:, 0].tolist(), "lambdas": Zo[:-1, 1].tolist()}, n)
        else:
            for jdx in range(m):
                nj = np.linalg.norm(ext[jdx])
                if nj <= tol:
                    continue
                v0 = ext[jdx] / nj
                for sgn in (1.0, -1.0):
                    F = np.column_stack([sgn * (J @ v0), v0])
                    Z = ext @ F
                    rest = [i for i in range(m) if i != jdx]
                    rest = sorted(rest, key=cmp_to_key(
                        lambda i, j: _cmp_desc(tol)((Z[i, 0], Z[i, 1]), (Z[j, 0], Z[j, 1]))))
                    order = [jdx] + rest
                    Zo = Z[order]
                    key = (Zo[0, 1],) + tuple(Zo[1:, 0]) + tuple(Zo[1:, 1])
                    cands.append((key, (F, np.array(order), Zo)))
            _, (F, order, Zo) = _pick_max(cands, tol)
            Zo = _snap(Zo, tol)
            Zo[0, 0] = 0.0
            fam = FamilyParams("HnpHat", {"sigmas": Zo[1:, 0].tolist(), "mus": Zo[:, 1].tolist()}, n)
        return NormalForm(fam, row @ F, order, True, Zo)
    raise UnsupportedError(f"acting rank {r} is outside the supported families (dimension {n})")


def acting_kernel(W, tol: float | None = None) -> np.ndarray:
    """Orthonormal basis (``p x k``) of acting directions with zero weight, in the order used by :func:`normal_form`."""
    W = np.asarray(W, float)
    q, p = W.shape
    if p == 0:
        return np.zeros((0, 0))
    scale = max(1.0, float(np.max(np.abs(W), initial=0.0)))
    tol = CANON_RTOL * scale if tol is None else tol
    _, s, Vt = np.linalg.svd(W, full_matrices=True)
    r = int(np.sum(s > tol))
    return Vt[r:].T


def weights_of(fp: FamilyParams) -> np.ndarray | None:
    """Weight matrix of a solvable diagonal-action family, or ``None``."""
    P = fp.params
    if fp.tag == "Gn":
        return _arr(P["alphas"])[:, None]
    if fp.tag == "HyperbolicHn":
        return np.full((int(P["n"]) - 1, 1), float(P["c"]))
    if fp.tag == "E11":
        a = float(P["alpha"])
        return np.array([[a], [-a]])
    if fp.tag == "Hnp1":
        rho = _arr(P["rhos"])
        return np.column_stack([rho, _complete_lambdas(P["lambdas"], rho.size)])
    if fp.tag == "HnpHat":
        mu = _arr(P["mus"])
        return np.column_stack([np.concatenate([[0.0], _arr(P["sigmas"])]), mu])
    if fp.tag == "Abelian":
        return np.zeros((int(P["n"]), 0))
    if fp.tag == "DirectProduct":
        blocks = [weights_of(f) for f in fp.factors]
        if any(b is None for b in blocks):
            return None
        q = sum(b.shape[0] for b in blocks)
        p = sum(b.shape[1] for b in blocks)
        W = np.zeros((q, p))
        i = j = 0
        for b in blocks:
            W[i:i + b.shape[0], j:j + b.shape[1]] = b
            i += b.shape[0]
            j += b.shape[1]
        return W
    return None


def canonicalize(fp: FamilyParams) -> FamilyParams:
    """Normal form of the metric Lie algebra described by ``fp``."""
    if fp.tag == "Sl2Cyclic":
        l1, l2 = canonical_sl2(float(fp.params["l1"]), float(fp.params["l2"]))
        return FamilyParams("Sl2Cyclic", {"l1": l1, "l2": l2}, 3)
    if fp.tag == "DirectProduct":
        sl = [f for f in fp.factors if f.tag == "Sl2Cyclic"]
        rest = [f for f in fp.factors if f.tag != "Sl2Cyclic"]
        if not sl:
            W = weights_of(fp)
            if W is None:
                return fp
            return normal_form(W).family
        if len(sl) > 1:
            raise UnsupportedError("more than one sl(2,R) factor")
        factors = [canonicalize(sl[0])]
        if rest:
            W = weights_of(FamilyParams("DirectProduct", {}, sum(f.dim for f in rest), tuple(rest)))
            factors.append(normal_form(W).family if W is not None else rest[0])
            return FamilyParams("DirectProduct", {}, fp.dim, tuple(factors))
        return factors[0]
    W = weights_of(fp)
    if W is None:
        return fp
    return normal_form(W).family


# ---------------------------------------------------------------------------
# dispatch


def make(fp: FamilyParams) -> CatalogEntry:
    P = fp.params
    if fp.tag == "Gn":
        return make_Gn(P["alphas"])
    if fp.tag == "Hnp1":
        return make_Hnp1(P["rhos"], P["lambdas"])
    if fp.tag == "HnpHat":
        return make_HnpHat(P["sigmas"], P["mus"])
    if fp.tag == "HyperbolicHn":
        return make_hyperbolic(int(P["n"]), float(P["c"]))
    if fp.tag == "E11":
        return make_E11(float(P["alpha"]))
    if fp.tag == "Sl2Cyclic":
        return make_sl2_cyclic(float(P["l1"]), float(P["l2"]))
    if fp.tag == "So3Biinv":
        return make_so3_biinvariant(float(P.get("beta", 1.0)))
    if fp.tag == "Heisenberg":
        return make_heisenberg()
    if fp.tag == "Abelian":
        return make_abelian(int(P["n"]))
    if fp.tag == "DirectProduct":
        return make_direct_product(*(make(f) for f in fp.factors))
    raise ValidationError(f"family {fp.tag!r} cannot be built from parameters alone")


def make_named(tag: str, params: dict | None = None, factors=()) -> CatalogEntry:
    params = dict(params or {})
    return make(FamilyParams(tag, params, 0, tuple(factors)))
