"""Slow, loop-based reference computations used as independent oracles.

Everything here works in an explicitly constructed orthonormal frame with the
textbook conventions ``R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]``,
``K(X,Y) = <R(X,Y)Y, X>`` and ``Ric(Y,Z) = sum_i <R(u_i,Y)Z, u_i>``.
"""

import itertools

import numpy as np


def orthonormal_constants(c, G):
    """Structure constants in the frame ``u = e @ inv(L).T`` where ``G = L L^T``."""
    L = np.linalg.cholesky(np.asarray(G, float))
    P = np.linalg.inv(L).T  # columns are orthonormal vectors
    Pinv = np.linalg.inv(P)
    n = c.shape[0]
    out = np.zeros((n, n, n))
    for a, b, k in itertools.product(range(n), repeat=3):
        s = 0.0
        for i, j, m in itertools.product(range(n), repeat=3):
            s += P[i, a] * P[j, b] * c[i, j, m] * Pinv[k, m]
        out[a, b, k] = s
    return out, P


def levi_civita(co):
    """``Gam[i, j, k]``: the ``u_k`` component of ``nabla_{u_i} u_j`` in an orthonormal frame."""
    n = co.shape[0]
    Gam = np.zeros((n, n, n))
    for i, j, k in itertools.product(range(n), repeat=3):
        Gam[i, j, k] = 0.5 * (co[i, j, k] - co[j, k, i] + co[k, i, j])
    return Gam


def textbook_curvature(co):
    """``Rt[i, j, k, l] = <R(u_i, u_j) u_k, u_l>`` in an orthonormal frame."""
    n = co.shape[0]
    Gam = levi_civita(co)
    Rt = np.zeros((n, n, n, n))
    for i, j, k in itertools.product(range(n), repeat=3):
        v = np.zeros(n)
        for m in range(n):
            v += Gam[j, k, m] * Gam[i, m] - Gam[i, k, m] * Gam[j, m]
            v -= co[i, j, m] * Gam[m, k]
        Rt[i, j, k] = v
    return Rt


def textbook_ricci(co):
    Rt = textbook_curvature(co)
    n = co.shape[0]
    ric = np.zeros((n, n))
    for a, b in itertools.product(range(n), repeat=2):
        ric[a, b] = sum(Rt[i, a, b, i] for i in range(n))
    return ric


def principal_ricci(c, G):
    co, _ = orthonormal_constants(np.asarray(c, float), G)
    return np.sort(np.linalg.eigvalsh(textbook_ricci(co)))


def scalar_curvature(c, G):
    co, _ = orthonormal_constants(np.asarray(c, float), G)
    return float(np.trace(textbook_ricci(co)))


def killing(c):
    n = c.shape[0]
    B = np.zeros((n, n))
    for i, j in itertools.product(range(n), repeat=2):
        ad_i = c[i].T  # (ad e_i)[k, j] = c[i, j, k]
        ad_j = c[j].T
        B[i, j] = np.trace(ad_i @ ad_j)
    return B


def cyclic_defect(c, G):
    n = c.shape[0]
    worst = 0.0
    for i, j, k in itertools.combinations(range(n), 3):
        s = 0.0
        for m in range(n):
            s += c[i, j, m] * G[m, k] + c[j, k, m] * G[m, i] + c[k, i, m] * G[m, j]
        worst = max(worst, abs(s))
    return worst
