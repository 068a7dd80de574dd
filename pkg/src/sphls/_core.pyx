# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled implementations of the hot recurrence kernels.

Twin of ``sphls._core_py``; keep semantics identical.  The degree
recurrences and the per-node Newton solves are plain scalar loops here,
which is where the compiled core pays off.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, fabs, pi, sqrt

cnp.import_array()

BACKEND = "cython"


def gegenbauer_table(int lmax, double lam, const double[::1] t):
    """Ultraspherical values C_l^(lam)(t) for l = 0..lmax at each node."""
    cdef Py_ssize_t K = t.shape[0]
    out_arr = np.empty((lmax + 1, K))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t j
    cdef int l
    cdef double tj, cm2, cm1, c
    for j in range(K):
        tj = t[j]
        cm2 = 1.0
        out[0, j] = cm2
        if lmax >= 1:
            cm1 = 2.0 * lam * tj
            out[1, j] = cm1
            for l in range(2, lmax + 1):
                c = (2.0 * (l + lam - 1.0) * tj * cm1
                     - (l + 2.0 * lam - 2.0) * cm2) / l
                out[l, j] = c
                cm2 = cm1
                cm1 = c
    return out_arr


def chebyshev_limit_table(int lmax, const double[::1] t):
    """Degree-l circle basis: 1 for l = 0 and (2/l)*T_l(t) for l >= 1."""
    cdef Py_ssize_t K = t.shape[0]
    out_arr = np.empty((lmax + 1, K))
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t j
    cdef int l
    cdef double tj, tm1, tl, tnew
    for j in range(K):
        tj = t[j]
        out[0, j] = 1.0
        if lmax >= 1:
            out[1, j] = 2.0 * tj
            tm1 = 1.0
            tl = tj
            for l in range(2, lmax + 1):
                tnew = 2.0 * tj * tl - tm1
                tm1 = tl
                tl = tnew
                out[l, j] = (2.0 / l) * tl
    return out_arr


def jacobi_nodes_weights(const double[::1] alpha, const double[::1] beta, double tol, int maxit):
    """Gauss nodes/weights by per-node Newton on the orthonormal recurrence."""
    cdef Py_ssize_t K = alpha.shape[0]
    sqb_arr = np.sqrt(np.asarray(beta))
    cdef double[::1] sqb = sqb_arr
    nodes_arr = np.empty(K)
    weights_arr = np.empty(K)
    cdef double[::1] x = nodes_arr
    cdef double[::1] w = weights_arr
    cdef Py_ssize_t i
    cdef int it = 0, k = 0, niter = 0, ok = 1
    cdef double xi, step, pkm1, pk, pkp1, dkm1, dk, dkp1, csum
    for i in range(K):
        xi = -cos(pi * (2.0 * i + 1.0) / (2.0 * K))
        for it in range(1, maxit + 1):
            pkm1 = 0.0
            pk = 1.0 / sqb[0]
            dkm1 = 0.0
            dk = 0.0
            for k in range(K):
                pkp1 = ((xi - alpha[k]) * pk - sqb[k] * pkm1) / sqb[k + 1]
                dkp1 = (pk + (xi - alpha[k]) * dk - sqb[k] * dkm1) / sqb[k + 1]
                pkm1 = pk
                pk = pkp1
                dkm1 = dk
                dk = dkp1
            step = pk / dk
            xi -= step
            if xi < -1.0:
                xi = -1.0
            elif xi > 1.0:
                xi = 1.0
            if fabs(step) <= tol:
                break
        if it > niter:
            niter = it
        x[i] = xi
    for i in range(K):
        if i > 0 and x[i] <= x[i - 1]:
            ok = 0
        pkm1 = 0.0
        pk = 1.0 / sqb[0]
        csum = pk * pk
        for k in range(K - 1):
            pkp1 = ((x[i] - alpha[k]) * pk - sqb[k] * pkm1) / sqb[k + 1]
            pkm1 = pk
            pk = pkp1
            csum += pk * pk
        w[i] = 1.0 / csum
    return nodes_arr, weights_arr, niter, bool(ok)
