"""Homogeneous structure tensor, torsion of the canonical connection and the
Tricerri-Vanhecke decomposition.

Tensors are stored in basis coordinates with all indices lowered:
``S[x, y, z] = <S_{e_x} e_y, e_z>`` where ``S_X Y`` is the Levi-Civita
derivative of left-invariant fields.  Norms and inner products of such
tensors are taken with three copies of the inverse Gram matrix, which equals
the plain sum of squares in any orthonormal frame.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import DEFAULT_RTOL, MetricLieAlgebra, trace_form

VERDICTS = ("zero", "T1", "T2", "T3", "T1⊕T2", "T1⊕T3", "T2⊕T3", "generic")


def bracket_pairing(m: MetricLieAlgebra) -> np.ndarray:
    """``L[a, b, c] = <[e_a, e_b], e_c>``."""
    return np.einsum("abm,mc->abc", m.c, m.gram)


def koszul_tensor(m: MetricLieAlgebra) -> np.ndarray:
    L = bracket_pairing(m)
    return 0.5 * (L - np.einsum("bca->abc", L) + np.einsum("cab->abc", L))


def connection_operators(m: MetricLieAlgebra, S: np.ndarray | None = None) -> np.ndarray:
    """``Sop[a]`` is the matrix of ``Y -> S_{e_a} Y``; columns are images of basis vectors."""
    S = koszul_tensor(m) if S is None else S
    return np.einsum("kc,abc->akb", m.gram_inv, S)


def tensor_inner(m: MetricLieAlgebra, A: np.ndarray, B: np.ndarray) -> float:
    Gi = m.gram_inv
    return float(np.einsum("abc,def,ad,be,cf->", A, B, Gi, Gi, Gi))


def tensor_norm(m: MetricLieAlgebra, A: np.ndarray) -> float:
    return float(np.sqrt(max(tensor_inner(m, A, A), 0.0)))


def cyclic_sum(T: np.ndarray) -> np.ndarray:
    return T + np.einsum("yzx->xyz", T) + np.einsum("zxy->xyz", T)


def c12(m: MetricLieAlgebra, S: np.ndarray) -> np.ndarray:
    """``c12(S)(e_k) = sum_i S(u_i, u_i, e_k)`` over the Cholesky orthonormal frame ``u_i``."""
    P = m.frame
    return np.einsum("ia,ja,ijk->k", P, P, S)


@dataclass(frozen=True)
class HomogeneousStructure:
    S: np.ndarray
    U: np.ndarray
    torsion: np.ndarray
    c12: np.ndarray
    components: tuple
    norms: tuple
    class_verdict: str
    norm_S: float
    phi: np.ndarray
    xi: np.ndarray


def u_tensor(m: MetricLieAlgebra) -> np.ndarray:
    """``U[a, b, c] = <U(e_a, e_b), e_c>``, symmetric in ``a, b``."""
    L = bracket_pairing(m)
    return 0.5 * (np.einsum("cab->abc", L) + np.einsum("cba->abc", L))


def u_operator(m: MetricLieAlgebra) -> np.ndarray:
    """``U[a, b]`` as a vector: ``U(e_a, e_b) = sum_k out[a, b, k] e_k``."""
    return np.einsum("abc,ck->abk", u_tensor(m), m.gram_inv)


def cartan_schouten_torsion(m: MetricLieAlgebra) -> np.ndarray:
    """Torsion of the flat left-invariant connection, ``T[x, y, z] = -<[e_x, e_y], e_z>``."""
    return -bracket_pairing(m)


def structure_to_torsion(S: np.ndarray) -> np.ndarray:
    return np.einsum("yxz->xyz", S) - S


def torsion_to_structure(T: np.ndarray) -> np.ndarray:
    return 0.5 * (np.einsum("yxz->xyz", T) + np.einsum("yzx->xyz", T) + np.einsum("xzy->xyz", T))


def _verdict(present) -> str:
    names = [n for n, p in zip(("T1", "T2", "T3"), present) if p]
    if not names:
        return "zero"
    if len(names) == 3:
        return "generic"
    return "⊕".join(names)


def tv_decompose(m: MetricLieAlgebra, rtol: float | None = None) -> HomogeneousStructure:
    """Split the structure tensor into its vectorial, cyclic-traceless and totally skew parts."""
    rtol = DEFAULT_RTOL if rtol is None else rtol
    n = m.dim
    G = m.gram
    S = koszul_tensor(m)
    trace = c12(m, S)
    if n > 1:
        S3 = cyclic_sum(S) / 3.0
        phi = trace / (n - 1)
        S1 = np.einsum("xy,z->xyz", G, phi) - np.einsum("xz,y->xyz", G, phi)
        S2 = S - S1 - S3
    else:
        S1 = S2 = S3 = np.zeros_like(S)
        phi = np.zeros(n)
    norms = tuple(tensor_norm(m, X) for X in (S1, S2, S3))
    nS = tensor_norm(m, S)
    cut = rtol * max(1.0, nS)
    verdict = _verdict([v > cut for v in norms]) if n > 1 else "zero"
    return HomogeneousStructure(
        S=S,
        U=u_tensor(m),
        torsion=cartan_schouten_torsion(m),
        c12=trace,
        components=(S1, S2, S3),
        norms=norms,
        class_verdict=verdict,
        norm_S=nS,
        phi=phi,
        xi=m.gram_inv @ phi,
    )


structure_tensor = tv_decompose


def tv_components(m: MetricLieAlgebra) -> tuple:
    return tv_decompose(m).components


def cyclic_defect(m: MetricLieAlgebra) -> float:
    """Largest ``|sum_cyc <[e_i, e_j], e_k>|`` over ``i < j < k``."""
    n = m.dim
    if n < 3:
        return 0.0
    C = np.abs(cyclic_sum(bracket_pairing(m)))
    i, j, k = np.array([(a, b, c) for a in range(n) for b in range(a + 1, n) for c in range(b + 1, n)]).T
    return float(np.max(C[i, j, k]))


def is_cyclic(m: MetricLieAlgebra, tol: float | None = None) -> tuple:
    """``(ok, defect)``.  A cyclic metric has ``S[x, y, z] = <[e_z, e_y], e_x>``."""
    d = cyclic_defect(m)
    return (d <= (m.tol() if tol is None else tol), d)


def cyclic_structure_defect(m: MetricLieAlgebra) -> float:
    """``max |S_xyz - <[e_z, e_y], e_x>|``; vanishes for cyclic metrics."""
    S = koszul_tensor(m)
    L = bracket_pairing(m)
    return float(np.max(np.abs(S - np.einsum("zyx->xyz", L)))) if m.dim else 0.0


@dataclass(frozen=True)
class VectorialData:
    vectorial: bool
    xi: np.ndarray
    phi: np.ndarray
    residual_norm: float
    bracket_defect: float


def is_vectorial(m: MetricLieAlgebra, tol: float | None = None) -> VectorialData:
    """Test whether ``S`` lies in the vectorial class and measure ``[X,Y] - (phi(X)Y - phi(Y)X)``."""
    hs = tv_decompose(m)
    resid = tensor_norm(m, hs.S - hs.components[0])
    n = m.dim
    phi = hs.phi
    model = np.einsum("i,jk->ijk", phi, np.eye(n)) - np.einsum("j,ik->ijk", phi, np.eye(n))
    bdef = float(np.max(np.abs(m.c - model))) if n else 0.0
    cut = (DEFAULT_RTOL * max(1.0, hs.norm_S)) if tol is None else tol
    return VectorialData(resid <= cut, hs.xi, phi, resid, bdef)


def is_traceless(m: MetricLieAlgebra, tol: float | None = None) -> bool:
    """Whether the trace ``c12(S)`` of the structure tensor vanishes.

    The trace is taken over the orthonormal frame; it coincides with the
    covector ``tr ad`` (see :func:`trace_consistency`), so this is a
    unimodularity test computed from the connection side.
    """
    t = c12(m, koszul_tensor(m)) if m.dim else np.zeros(0)
    cut = (DEFAULT_RTOL * max(1.0, float(np.max(np.abs(m.c)))) * max(1, m.dim)) if tol is None else tol
    return bool(np.max(np.abs(t), initial=0.0) <= cut)


def trace_consistency(m: MetricLieAlgebra) -> float:
    """``max |c12(S) - tr ad|``, which vanishes identically."""
    return float(np.max(np.abs(c12(m, koszul_tensor(m)) - trace_form(m)), initial=0.0))


def is_biinvariant(m: MetricLieAlgebra, tol: float | None = None) -> bool:
    nU = tensor_norm(m, u_tensor(m))
    nS = tensor_norm(m, koszul_tensor(m))
    cut = (DEFAULT_RTOL * max(1.0, nS)) if tol is None else tol
    return nU <= cut
