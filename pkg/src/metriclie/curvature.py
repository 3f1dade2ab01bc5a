"""Curvature of left-invariant metrics.

The curvature operator is ``R(X, Y) = S_[X,Y] - [S_X, S_Y]`` with ``S`` the
Levi-Civita derivative of left-invariant fields.  With this sign,
``kappa(X, Y) = <R(X, Y)X, Y>`` is the numerator of the sectional curvature,
so round spheres have positive ``kappa``.  Ricci is
``Ric(X, Y) = sum_i <R(u_i, X)u_i, Y>`` over an orthonormal frame, which gives
``Ric = -B/4`` for biinvariant metrics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla
from scipy import optimize

from .core import (
    DEFAULT_RTOL,
    DimensionError,
    MetricLieAlgebra,
    NotCyclicError,
    bracket,
    center,
    structure_report,
)
from .homogeneous import connection_operators, is_cyclic, koszul_tensor


@dataclass(frozen=True)
class CurvatureData:
    R: np.ndarray
    R_lower: np.ndarray
    kappa: np.ndarray
    ricci: np.ndarray
    ricci_eigenvalues: np.ndarray
    ricci_eigenvectors: np.ndarray
    ricci_signature: tuple
    scalar: float
    flat: bool


def _signature(values, tol) -> tuple:
    values = np.asarray(values)
    return (int(np.sum(values > tol)), int(np.sum(values < -tol)), int(np.sum(np.abs(values) <= tol)))


def curvature_scale(m: MetricLieAlgebra) -> float:
    """Typical size of curvature entries: squared bracket scale in the metric."""
    S = koszul_tensor(m)
    return max(1.0, float(np.max(np.abs(S))) ** 2 * float(np.max(np.abs(m.gram_inv))))


def riemann(m: MetricLieAlgebra, rtol: float | None = None) -> CurvatureData:
    """``R[i, j, k, l]`` is the ``e_l`` coefficient of ``R(e_i, e_j) e_k``."""
    rtol = DEFAULT_RTOL if rtol is None else rtol
    A = connection_operators(m)
    bracket_part = np.einsum("ijm,mlk->ijlk", m.c, A)
    comm = np.einsum("ilp,jpk->ijlk", A, A) - np.einsum("jlp,ipk->ijlk", A, A)
    Rop = bracket_part - comm
    R = np.einsum("ijlk->ijkl", Rop)
    Rlow = np.einsum("ijkm,ml->ijkl", R, m.gram)
    kap = np.einsum("ijij->ij", Rlow)
    ric = np.einsum("pq,paqb->ab", m.gram_inv, Rlow)
    ric = 0.5 * (ric + ric.T)
    ev, vec = sla.eigh(ric, m.gram)
    scale = curvature_scale(m)
    cut = rtol * max(scale, float(np.max(np.abs(ev), initial=0.0)))
    scalar = float(np.einsum("ab,ab->", m.gram_inv, ric))
    flat = bool(np.max(np.abs(Rlow), initial=0.0) <= rtol * scale)
    return CurvatureData(R, Rlow, kap, ric, ev, vec, _signature(ev, cut), scalar, flat)


def kappa(m: MetricLieAlgebra, x, y, data: CurvatureData | None = None) -> float:
    data = riemann(m) if data is None else data
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    return float(np.einsum("ijkl,i,j,k,l->", data.R_lower, x, y, x, y))


def sectional(m: MetricLieAlgebra, x, y, data: CurvatureData | None = None, tol: float = 1e-12) -> float:
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    xx, yy, xy = m.inner(x, x), m.inner(y, y), m.inner(x, y)
    area = xx * yy - xy * xy
    if area <= tol * max(xx * yy, np.finfo(float).tiny):
        raise DimensionError("vectors do not span a 2-plane")
    return kappa(m, x, y, data) / area


def cyclic_kappa(m: MetricLieAlgebra, x, y) -> float:
    """``-|[X,Y]|^2 + <S_X Y, S_Y X> - <S_X X, S_Y Y>``, valid for cyclic metrics only."""
    A = connection_operators(m)
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    Sx = np.einsum("a,akb->kb", x, A)
    Sy = np.einsum("a,akb->kb", y, A)
    b = bracket(m, x, y)
    return -m.inner(b, b) + m.inner(Sx @ y, Sy @ x) - m.inner(Sx @ x, Sy @ y)


@dataclass(frozen=True)
class RicciData:
    ricci: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    signature: tuple
    scalar: float


def ricci_scalar(m: MetricLieAlgebra, data: CurvatureData | None = None) -> RicciData:
    d = riemann(m) if data is None else data
    return RicciData(d.ricci, d.ricci_eigenvalues, d.ricci_eigenvectors, d.ricci_signature, d.scalar)


def signature_signs(values, tol: float | None = None) -> str:
    """Signs of the given values in order, for example ``"(-,-,+)"``."""
    values = np.asarray(values, float)
    if tol is None:
        tol = DEFAULT_RTOL * max(1.0, float(np.max(np.abs(values), initial=0.0)))
    out = ["+" if v > tol else "-" if v < -tol else "0" for v in values]
    return "(" + ",".join(out) + ")"


@dataclass(frozen=True)
class SectionalRange:
    minimum: float
    maximum: float
    min_plane: tuple
    max_plane: tuple
    basic_min: float
    basic_max: float


def _orthonormal_pairs(m, vecs):
    n = vecs.shape[1]
    for i in range(n):
        for j in range(i + 1, n):
            yield vecs[:, i], vecs[:, j]


def extremal_sectional(
    m: MetricLieAlgebra,
    data: CurvatureData | None = None,
    samples: int = 64,
    refine: int = 4,
    seed: int = 0,
) -> SectionalRange:
    """Search for the smallest and largest sectional curvatures.

    Candidates are coordinate planes of the given basis, planes of the
    orthonormal frame and of the Ricci eigenframe, and random planes; the best
    few are then polished with a local optimizer.  The ``basic_*`` fields
    report coordinate planes only.
    """
    n = m.dim
    data = riemann(m) if data is None else data
    if n < 2:
        return SectionalRange(0.0, 0.0, (), (), 0.0, 0.0)
    rng = np.random.default_rng(seed)
    cands = []
    for x, y in _orthonormal_pairs(m, np.eye(n)):
        cands.append((sectional(m, x, y, data), x, y))
    basic = [k for k, _, _ in cands]
    for frame in (m.frame, data.ricci_eigenvectors):
        for x, y in _orthonormal_pairs(m, frame):
            cands.append((sectional(m, x, y, data), x, y))
    for _ in range(samples):
        x, y = rng.standard_normal(n), rng.standard_normal(n)
        try:
            cands.append((sectional(m, x, y, data), x, y))
        except DimensionError:
            continue

    def polish(sign, start):
        def f(z):
            try:
                return sign * sectional(m, z[:n], z[n:], data)
            except DimensionError:
                return np.inf

        res = optimize.minimize(f, np.concatenate(start), method="Nelder-Mead",
                                options={"maxiter": 400 * n, "xatol": 1e-12, "fatol": 1e-14})
        z = res.x
        try:
            return (sectional(m, z[:n], z[n:], data), z[:n], z[n:])
        except DimensionError:
            return None

    cands.sort(key=lambda t: t[0])
    lo = cands[0]
    hi = cands[-1]
    for c in cands[:refine]:
        p = polish(1.0, (c[1], c[2]))
        if p is not None and p[0] < lo[0]:
            lo = p
    for c in cands[len(cands) - refine:]:
        p = polish(-1.0, (c[1], c[2]))
        if p is not None and p[0] > hi[0]:
            hi = p
    return SectionalRange(lo[0], hi[0], (lo[1], lo[2]), (hi[1], hi[2]), min(basic), max(basic))


@dataclass(frozen=True)
class ClauseResult:
    clause: str
    applicable: bool
    passed: bool
    detail: str


def curvature_property_suite(m: MetricLieAlgebra, tol: float | None = None, seed: int = 0) -> list:
    """Check the curvature consequences of cyclicity; raises on a non-cyclic metric.

    Clauses: flat iff abelian; solvable nonabelian has negative scalar
    curvature; unimodular nonabelian has a positive sectional curvature (and a
    negative one if also solvable); nonunimodular has a negative sectional
    curvature; central directions have vanishing kappa.
    """
    ok, defect = is_cyclic(m, tol)
    if not ok:
        raise NotCyclicError(f"metric is not cyclic (defect {defect:.3g})", defect)
    rep = structure_report(m)
    data = riemann(m)
    scale = curvature_scale(m)
    cut = DEFAULT_RTOL * scale
    nonab = not rep.abelian
    ext = extremal_sectional(m, data, seed=seed, refine=0)
    want_pos = rep.unimodular and nonab
    want_neg = nonab and (rep.solvable or not rep.unimodular)
    if (want_pos and ext.maximum <= cut) or (want_neg and ext.minimum >= -cut):
        ext = extremal_sectional(m, data, seed=seed)
    out = [
        ClauseResult("flat iff abelian", True, data.flat == rep.abelian,
                     f"flat={data.flat} abelian={rep.abelian}"),
        ClauseResult("solvable nonabelian: negative scalar curvature", rep.solvable and nonab,
                     (not (rep.solvable and nonab)) or data.scalar < -cut, f"s={data.scalar:.6g}"),
        ClauseResult("unimodular nonabelian: some positive sectional curvature", rep.unimodular and nonab,
                     (not (rep.unimodular and nonab)) or ext.maximum > cut, f"max K={ext.maximum:.6g}"),
        ClauseResult("unimodular solvable nonabelian: some negative sectional curvature",
                     rep.unimodular and rep.solvable and nonab,
                     (not (rep.unimodular and rep.solvable and nonab)) or ext.minimum < -cut,
                     f"min K={ext.minimum:.6g}"),
        ClauseResult("nonunimodular: some negative sectional curvature", not rep.unimodular,
                     rep.unimodular or ext.minimum < -cut, f"min K={ext.minimum:.6g}"),
    ]
    Z = center(m)
    zdef = 0.0
    for a in range(Z.shape[1]):
        for j in range(m.dim):
            zdef = max(zdef, abs(kappa(m, Z[:, a], np.eye(m.dim)[j], data)))
    out.append(ClauseResult("central directions have zero kappa", Z.shape[1] > 0, zdef <= cut,
                            f"max |kappa(Z, e_j)|={zdef:.3g}"))
    return out
