"""Lie algebras with inner products: construction, validation and structural invariants.

Conventions
-----------
Structure constants are stored 0-based as ``c[i, j, k]`` with
``[e_i, e_j] = sum_k c[i, j, k] e_k``.  Documentation and the file format use
1-based indices.  Vectors are coordinate arrays in the algebra's basis and
subspaces are ``(n, r)`` matrices whose columns are metric-orthonormal.

All computations are real; complexified checks are not attempted.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg as sla

DEFAULT_RTOL = float(os.environ.get("METRICLIE_TOL", "1e-9"))
PD_TOL = 1e-12


class MetricLieError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(MetricLieError, ValueError):
    """Input fails a structural check; ``defects`` carries the measured values."""

    def __init__(self, message: str, defects: dict | None = None):
        super().__init__(message)
        self.defects = dict(defects or {})


class DimensionError(MetricLieError, ValueError):
    pass


class NotCyclicError(MetricLieError, ValueError):
    """The metric fails the cyclic condition where it is required."""

    def __init__(self, message: str, defect: float):
        super().__init__(message)
        self.defect = defect


class UnsupportedError(MetricLieError):
    """Input outside the supported range (for example dimension above five)."""


class ClassificationFailed(MetricLieError):
    """No catalog family matched within tolerance; ``diagnostics`` explains why."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float, copy=True)
    arr.setflags(write=False)
    return arr


def coefficient_scale(c: np.ndarray) -> float:
    return max(1.0, float(np.max(np.abs(c))) if c.size else 1.0)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Diagnostics:
    antisymmetry_defect: float
    jacobi_defect: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.antisymmetry_defect <= self.tol and self.jacobi_defect <= self.tol


def jacobi_tensor(c: np.ndarray) -> np.ndarray:
    """``J[i,j,k,l]``: the ``e_l`` coefficient of the Jacobi sum for ``(e_i, e_j, e_k)``."""
    return (
        np.einsum("ijm,mkl->ijkl", c, c)
        + np.einsum("jkm,mil->ijkl", c, c)
        + np.einsum("kim,mjl->ijkl", c, c)
    )


def validate(algebra, tol: float | None = None, dim: int | None = None) -> Diagnostics:
    """Measure antisymmetry and Jacobi defects.

    ``algebra`` may be a :class:`LieAlgebra` or a raw ``(n, n, n)`` array; raw
    arrays are not antisymmetrized first, so a one-sided perturbation shows up
    as an antisymmetry defect.
    """
    c = algebra.structure_constants if isinstance(algebra, LieAlgebra) else np.asarray(algebra, float)
    if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]):
        raise DimensionError(f"structure constants must have shape (n, n, n), got {c.shape}")
    n = c.shape[0]
    if dim is not None and dim != n:
        raise DimensionError(f"declared dim {dim} does not match structure constants of size {n}")
    if n < 1:
        raise DimensionError("dimension must be at least 1")
    if tol is None:
        tol = DEFAULT_RTOL * coefficient_scale(c) ** 2
    anti = float(np.max(np.abs(c + c.transpose(1, 0, 2)))) if n else 0.0
    jac = 0.0
    if n >= 3:
        J = np.abs(jacobi_tensor(c))
        jac = max(
            float(J[a, b, d].max())
            for a in range(n) for b in range(a + 1, n) for d in range(b + 1, n)
        )
    return Diagnostics(anti, jac, float(tol))


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    structure_constants: np.ndarray
    basis_labels: tuple = None

    def __post_init__(self):
        c = np.asarray(self.structure_constants, dtype=float)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]) or c.shape[0] < 1:
            raise DimensionError(f"structure constants must have shape (n, n, n) with n >= 1, got {c.shape}")
        diag = validate(c)
        if diag.antisymmetry_defect > diag.tol:
            raise ValidationError(
                f"bracket is not antisymmetric (defect {diag.antisymmetry_defect:.3g})",
                {"antisymmetry": diag.antisymmetry_defect},
            )
        c = 0.5 * (c - c.transpose(1, 0, 2))
        if diag.jacobi_defect > diag.tol:
            raise ValidationError(
                f"Jacobi identity fails (defect {diag.jacobi_defect:.3g})",
                {"jacobi": diag.jacobi_defect},
            )
        n = c.shape[0]
        labels = self.basis_labels
        if labels is None:
            labels = tuple(f"e{i + 1}" for i in range(n))
        labels = tuple(str(s) for s in labels)
        if len(labels) != n:
            raise DimensionError(f"{len(labels)} basis labels for dimension {n}")
        object.__setattr__(self, "structure_constants", _frozen(c))
        object.__setattr__(self, "basis_labels", labels)

    @property
    def dim(self) -> int:
        return self.structure_constants.shape[0]

    @classmethod
    def from_brackets(cls, dim: int, brackets: dict, labels=None) -> "LieAlgebra":
        """Build from ``{(i, j): {k: value}}`` with 0-based indices; antisymmetry is implied."""
        c = np.zeros((dim, dim, dim))
        for (i, j), out in brackets.items():
            if i == j:
                raise ValidationError(f"bracket [e{i + 1}, e{i + 1}] must vanish")
            for k, v in out.items():
                c[i, j, k] += v
                c[j, i, k] -= v
        return cls(c, labels)

    @classmethod
    def abelian(cls, dim: int) -> "LieAlgebra":
        return cls(np.zeros((dim, dim, dim)))


@dataclass(frozen=True, eq=False)
class InnerProduct:
    gram: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.gram, dtype=float)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise DimensionError(f"Gram matrix must be square, got shape {g.shape}")
        scale = max(1.0, float(np.max(np.abs(g))))
        asym = float(np.max(np.abs(g - g.T)))
        if asym > DEFAULT_RTOL * scale:
            raise ValidationError(f"Gram matrix is not symmetric (defect {asym:.3g})", {"symmetry": asym})
        g = 0.5 * (g + g.T)
        lam = float(np.linalg.eigvalsh(g)[0])
        if lam <= PD_TOL * scale:
            raise ValidationError(
                f"Gram matrix is not positive definite (smallest eigenvalue {lam:.3g})",
                {"min_eigenvalue": lam},
            )
        object.__setattr__(self, "gram", _frozen(g))

    @property
    def dim(self) -> int:
        return self.gram.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "InnerProduct":
        return cls(np.eye(dim))


@dataclass(frozen=True, eq=False)
class MetricLieAlgebra:
    algebra: LieAlgebra
    metric: InnerProduct
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.algebra.dim != self.metric.dim:
            raise DimensionError(
                f"algebra has dimension {self.algebra.dim} but metric has dimension {self.metric.dim}"
            )

    @classmethod
    def build(cls, structure_constants, gram=None, labels=None) -> "MetricLieAlgebra":
        alg = LieAlgebra(structure_constants, labels)
        g = np.eye(alg.dim) if gram is None else gram
        return cls(alg, InnerProduct(g))

    @property
    def dim(self) -> int:
        return self.algebra.dim

    @property
    def c(self) -> np.ndarray:
        return self.algebra.structure_constants

    @property
    def gram(self) -> np.ndarray:
        return self.metric.gram

    @property
    def gram_inv(self) -> np.ndarray:
        if "gram_inv" not in self._cache:
            gi = np.linalg.inv(self.gram)
            self._cache["gram_inv"] = _frozen(0.5 * (gi + gi.T))
        return self._cache["gram_inv"]

    @property
    def frame(self) -> np.ndarray:
        """Metric-orthonormal frame ``P`` (columns) from the Cholesky factor, ``P.T @ G @ P = I``."""
        if "frame" not in self._cache:
            L = np.linalg.cholesky(self.gram)
            self._cache["frame"] = _frozen(sla.solve_triangular(L, np.eye(self.dim), lower=True).T)
        return self._cache["frame"]

    def tol(self, rtol: float | None = None) -> float:
        """Absolute tolerance for bilinear quantities: ``rtol * max|c| * max|G|``."""
        rtol = DEFAULT_RTOL if rtol is None else rtol
        return rtol * coefficient_scale(self.c) * max(1.0, float(np.max(np.abs(self.gram))))

    def inner(self, x, y) -> float:
        return float(np.asarray(x) @ self.gram @ np.asarray(y))

    def norm(self, x) -> float:
        return float(np.sqrt(max(self.inner(x, x), 0.0)))


def _constants(m) -> np.ndarray:
    if isinstance(m, MetricLieAlgebra):
        return m.c
    if isinstance(m, LieAlgebra):
        return m.structure_constants
    return np.asarray(m, dtype=float)


def _vector(x, n: int, name: str = "x") -> np.ndarray:
    v = np.asarray(x, dtype=float)
    if v.shape != (n,):
        raise DimensionError(f"{name} must have length {n}, got shape {v.shape}")
    return v


# ---------------------------------------------------------------------------
# brackets and the adjoint representation


def bracket(m, x, y) -> np.ndarray:
    c = _constants(m)
    n = c.shape[0]
    return np.einsum("i,j,ijk->k", _vector(x, n, "x"), _vector(y, n, "y"), c)


def ad_matrix(m, x) -> np.ndarray:
    """Matrix of ``ad_x``; column ``j`` holds the coordinates of ``[x, e_j]``."""
    c = _constants(m)
    return np.einsum("i,ijk->kj", _vector(x, c.shape[0]), c)


def ad_matrices(m) -> np.ndarray:
    """Stack ``A[i] = ad_{e_i}``."""
    return np.einsum("ijk->ikj", _constants(m))


def trace_form(m) -> np.ndarray:
    """Covector ``X -> tr ad_X`` evaluated on the basis."""
    return np.einsum("ijj->i", _constants(m))


@dataclass(frozen=True)
class KillingData:
    matrix: np.ndarray
    signature: tuple
    rank: int


def _signature(values, tol: float) -> tuple:
    values = np.asarray(values)
    pos = int(np.sum(values > tol))
    neg = int(np.sum(values < -tol))
    return (pos, neg, len(values) - pos - neg)


def killing_form(m, rtol: float | None = None) -> KillingData:
    c = _constants(m)
    B = np.einsum("ilk,jkl->ij", c, c)
    B = 0.5 * (B + B.T)
    rtol = DEFAULT_RTOL if rtol is None else rtol
    ev = np.linalg.eigvalsh(B)
    tol = rtol * coefficient_scale(c) ** 2 * max(1, c.shape[0])
    sig = _signature(ev, tol)
    return KillingData(_frozen(B), sig, sig[0] + sig[1])


# ---------------------------------------------------------------------------
# subspaces


def _gram_of(m) -> np.ndarray:
    if isinstance(m, MetricLieAlgebra):
        return m.gram
    return np.eye(_constants(m).shape[0])


def span(m, vectors, tol: float | None = None) -> np.ndarray:
    """Metric-orthonormal basis of the span of the columns of ``vectors``.

    Rank is decided by singular values above ``tol`` times the largest one
    (with an absolute floor); the basis comes from QR with column pivoting so
    the output is deterministic.
    """
    G = _gram_of(m)
    n = G.shape[0]
    V = np.asarray(vectors, dtype=float).reshape(n, -1)
    if V.shape[1] == 0:
        return np.zeros((n, 0))
    L = np.linalg.cholesky(G)
    Y = L.T @ V
    s = np.linalg.svd(Y, compute_uv=False)
    rtol = DEFAULT_RTOL if tol is None else tol
    floor = rtol * (m.tol(1.0) if isinstance(m, MetricLieAlgebra) else coefficient_scale(_constants(m)))
    if s.size == 0 or s[0] <= floor:
        return np.zeros((n, 0))
    r = int(np.sum(s > max(rtol * s[0], floor)))
    Q, _, _ = sla.qr(Y, mode="economic", pivoting=True)
    Q = Q[:, :r]
    return sla.solve_triangular(L.T, Q, lower=False)


def orthonormalize(m, vectors, tol: float | None = None) -> np.ndarray:
    """Gram-Schmidt in the given order; raises on a dependent vector, naming its index."""
    G = _gram_of(m)
    V = np.asarray(vectors, dtype=float)
    if V.ndim == 1:
        V = V[:, None]
    rtol = 1e-10 if tol is None else tol
    out = []
    for idx in range(V.shape[1]):
        v = V[:, idx].copy()
        n0 = np.sqrt(v @ G @ v)
        for _ in range(2):
            for q in out:
                v -= (q @ G @ v) * q
        nv = np.sqrt(max(v @ G @ v, 0.0))
        if n0 == 0 or nv <= rtol * n0:
            raise ValidationError(f"vector {idx + 1} (1-based) is linearly dependent on the preceding vectors",
                                  {"index": idx})
        out.append(v / nv)
    return np.column_stack(out) if out else np.zeros((G.shape[0], 0))


def orthogonal_complement(m, basis) -> np.ndarray:
    G = _gram_of(m)
    n = G.shape[0]
    B = np.asarray(basis, dtype=float).reshape(n, -1)
    if B.shape[1] == 0:
        return span(m, np.eye(n))
    N = sla.null_space((B.T @ G), rcond=1e-10)
    if N.shape[1] == 0:
        return np.zeros((n, 0))
    return span(m, N)


def project(m, basis, v) -> np.ndarray:
    """Metric-orthogonal projection of ``v`` (vector or columns) onto an orthonormal ``basis``."""
    G = _gram_of(m)
    return basis @ (basis.T @ G @ v)


def bracket_span(m, U, V, tol: float | None = None) -> np.ndarray:
    """Orthonormal basis of ``[U, V]`` for column-matrices ``U`` and ``V``."""
    c = _constants(m)
    n = c.shape[0]
    if U.shape[1] == 0 or V.shape[1] == 0:
        return np.zeros((n, 0))
    W = np.einsum("ia,jb,ijk->kab", U, V, c).reshape(n, -1)
    return span(m, W, tol)


def is_ideal(m, basis, tol: float | None = None) -> bool:
    c = _constants(m)
    n = c.shape[0]
    B = np.asarray(basis, dtype=float).reshape(n, -1)
    if B.shape[1] == 0 or B.shape[1] == n:
        return True
    Q = span(m, B)
    W = np.einsum("ia,jb,ijk->kab", np.eye(n), Q, c).reshape(n, -1)
    resid = W - project(m, Q, W)
    G = _gram_of(m)
    err = float(np.sqrt(np.max(np.einsum("ka,kl,la->a", resid, G, resid)))) if resid.size else 0.0
    if tol is None:
        tol = m.tol() if isinstance(m, MetricLieAlgebra) else DEFAULT_RTOL * coefficient_scale(c)
    return err <= tol


@dataclass(frozen=True)
class SubspaceInfo:
    basis: np.ndarray
    is_ideal: bool
    complement: np.ndarray


def subspace_ops(m, vectors, tol: float | None = None) -> SubspaceInfo:
    Q = orthonormalize(m, vectors)
    return SubspaceInfo(Q, is_ideal(m, Q, tol), orthogonal_complement(m, Q))


# ---------------------------------------------------------------------------
# structure report


@dataclass(frozen=True)
class StructureReport:
    unimodular: bool
    solvable: bool
    nilpotent: bool
    semisimple: bool
    abelian: bool
    center: np.ndarray
    derived_series_dims: tuple
    lower_central_dims: tuple
    unimodular_kernel: np.ndarray
    killing: KillingData
    derived_series: tuple = field(repr=False, default=())


def center(m) -> np.ndarray:
    c = _constants(m)
    n = c.shape[0]
    M = c.transpose(0, 1, 2).reshape(n, n * n).T  # rows (j,k), columns i
    N = sla.null_space(M, rcond=DEFAULT_RTOL) if np.any(M) else np.eye(n)
    return span(m, N) if N.shape[1] else np.zeros((n, 0))


def derived_series(m) -> list:
    n = _constants(m).shape[0]
    terms = [span(m, np.eye(n))]
    while True:
        nxt = bracket_span(m, terms[-1], terms[-1])
        if nxt.shape[1] == terms[-1].shape[1]:
            break
        terms.append(nxt)
        if nxt.shape[1] == 0:
            break
    return terms


def lower_central_series(m) -> list:
    n = _constants(m).shape[0]
    full = span(m, np.eye(n))
    terms = [full]
    while True:
        nxt = bracket_span(m, full, terms[-1])
        if nxt.shape[1] == terms[-1].shape[1]:
            break
        terms.append(nxt)
        if nxt.shape[1] == 0:
            break
    return terms


def unimodular_kernel(m) -> np.ndarray:
    t = trace_form(m)
    n = t.shape[0]
    scale = coefficient_scale(_constants(m))
    if np.max(np.abs(t)) <= DEFAULT_RTOL * scale * n:
        return span(m, np.eye(n))
    return span(m, sla.null_space(t[None, :]))


def structure_report(m) -> StructureReport:
    n = _constants(m).shape[0]
    ds = derived_series(m)
    lc = lower_central_series(m)
    kill = killing_form(m)
    uk = unimodular_kernel(m)
    abelian = not np.any(np.abs(_constants(m)) > 0)
    return StructureReport(
        unimodular=uk.shape[1] == n,
        solvable=ds[-1].shape[1] == 0,
        nilpotent=lc[-1].shape[1] == 0,
        semisimple=kill.signature[2] == 0,
        abelian=abelian,
        center=center(m),
        derived_series_dims=tuple(t.shape[1] for t in ds),
        lower_central_dims=tuple(t.shape[1] for t in lc),
        unimodular_kernel=uk,
        killing=kill,
        derived_series=tuple(ds),
    )


# ---------------------------------------------------------------------------
# basis changes and sub-objects


def change_basis(m: MetricLieAlgebra, P, labels=None) -> MetricLieAlgebra:
    """Re-express ``m`` in the basis ``f_a = sum_i P[i, a] e_i``."""
    P = np.asarray(P, dtype=float)
    Pinv = np.linalg.inv(P)
    c = np.einsum("ia,jb,ijk,lk->abl", P, P, m.c, Pinv)
    G = P.T @ m.gram @ P
    return MetricLieAlgebra.build(c, 0.5 * (G + G.T), labels)


def restrict(m: MetricLieAlgebra, basis, tol: float | None = None) -> MetricLieAlgebra:
    """The subalgebra spanned by the columns of ``basis`` with the induced metric."""
    V = np.asarray(basis, dtype=float)
    r = V.shape[1]
    W = np.einsum("ia,jb,ijk->kab", V, V, m.c).reshape(m.dim, -1)
    coef, *_ = np.linalg.lstsq(V, W, rcond=None)
    resid = float(np.max(np.abs(V @ coef - W))) if W.size else 0.0
    if resid > (m.tol() * 10 if tol is None else tol):
        raise ValidationError(f"subspace is not closed under the bracket (defect {resid:.3g})", {"closure": resid})
    c = coef.reshape(r, r, r).transpose(1, 2, 0)
    G = V.T @ m.gram @ V
    return MetricLieAlgebra.build(c, 0.5 * (G + G.T))


def direct_sum(*parts: MetricLieAlgebra) -> MetricLieAlgebra:
    n = sum(p.dim for p in parts)
    c = np.zeros((n, n, n))
    G = np.zeros((n, n))
    labels = []
    off = 0
    for p in parts:
        d = p.dim
        c[off:off + d, off:off + d, off:off + d] = p.c
        G[off:off + d, off:off + d] = p.gram
        labels.extend(p.algebra.basis_labels)
        off += d
    if len(set(labels)) != len(labels):
        labels = None
    return MetricLieAlgebra.build(c, G, labels)


def from_matrix_basis(matrices, labels=None) -> LieAlgebra:
    """Structure constants of the matrix Lie algebra spanned by ``matrices`` (real or complex)."""
    mats = [np.asarray(a) for a in matrices]
    n = len(mats)
    flat = np.array([np.concatenate([a.real.ravel(), np.imag(a).ravel()]) for a in mats]).T
    c = np.zeros((n, n, n))
    for i in range(n):
        for j in range(i + 1, n):
            br = mats[i] @ mats[j] - mats[j] @ mats[i]
            rhs = np.concatenate([br.real.ravel(), np.imag(br).ravel()])
            coef, *_ = np.linalg.lstsq(flat, rhs, rcond=None)
            if np.max(np.abs(flat @ coef - rhs), initial=0.0) > 1e-9 * max(1.0, np.max(np.abs(rhs), initial=0.0)):
                raise ValidationError("matrices do not span a Lie algebra (bracket not closed)")
            c[i, j] = coef
            c[j, i] = -coef
    c[np.abs(c) < 1e-14] = 0.0
    return LieAlgebra(c, labels)
