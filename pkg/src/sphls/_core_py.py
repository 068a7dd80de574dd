"""Numpy implementations of the hot recurrence kernels.

Mirror of the compiled module ``sphls._core``; the public package selects
one of the two at import time (see ``sphls._kernels``).  Semantics must be
kept identical between the twins.
"""

import numpy as np

BACKEND = "numpy"


def gegenbauer_table(lmax, lam, t):
    """Ultraspherical values C_l^(lam)(t) for l = 0..lmax at each node.

    Three-term recurrence l*C_l = 2(l+lam-1)*t*C_{l-1} - (l+2lam-2)*C_{l-2}
    seeded with C_0 = 1, C_1 = 2*lam*t.  Returns shape (lmax+1, len(t)).
    """
    t = np.asarray(t, dtype=np.float64)
    out = np.empty((lmax + 1, t.shape[0]))
    out[0] = 1.0
    if lmax >= 1:
        out[1] = 2.0 * lam * t
    for l in range(2, lmax + 1):
        out[l] = (2.0 * (l + lam - 1.0) * t * out[l - 1]
                  - (l + 2.0 * lam - 2.0) * out[l - 2]) / l
    return out


def chebyshev_limit_table(lmax, t):
    """Degree-l circle basis: 1 for l = 0 and (2/l)*T_l(t) for l >= 1.

    This is the lam -> 0 limit of C_l^(lam)/lam scaled so the recurrence
    tables stay finite; used as the zonal basis in dimension 1.
    """
    t = np.asarray(t, dtype=np.float64)
    out = np.empty((lmax + 1, t.shape[0]))
    out[0] = 1.0
    if lmax >= 1:
        out[1] = 2.0 * t
    # T-recurrence on the scaled rows: l*out[l] has the plain T recurrence.
    tl_prev = np.ones_like(t)   # T_0
    tl = t.copy()               # T_1
    for l in range(2, lmax + 1):
        tl_prev, tl = tl, 2.0 * t * tl - tl_prev
        out[l] = (2.0 / l) * tl
    return out


def jacobi_nodes_weights(alpha, beta, tol, maxit):
    """Gauss nodes and weights from orthonormal recurrence coefficients.

    alpha has length K, beta length K+1 with beta[0] the total weight mu0.
    Nodes are the roots of the orthonormal polynomial p_K, found by Newton
    from Chebyshev initial guesses; weights are inverse Christoffel sums
    1 / sum_{k<K} p_k(x)^2.  Returns (nodes, weights, iterations, ok).
    """
    alpha = np.asarray(alpha, dtype=np.float64)
    beta = np.asarray(beta, dtype=np.float64)
    K = alpha.shape[0]
    sqb = np.sqrt(beta)
    # Chebyshev guesses, ascending.
    i = np.arange(K)
    x = -np.cos(np.pi * (2.0 * i + 1.0) / (2.0 * K))
    niter = 0
    for niter in range(1, maxit + 1):
        p, dp = _eval_orthonormal(alpha, sqb, K, x, derivative=True)
        step = p / dp
        x = np.clip(x - step, -1.0, 1.0)
        if np.max(np.abs(step)) <= tol:
            break
    ok = bool(np.all(np.diff(x) > 0.0))
    csum = _christoffel_sum(alpha, sqb, K, x)
    w = 1.0 / csum
    return x, w, niter, ok


def _eval_orthonormal(alpha, sqb, K, x, derivative=False):
    pkm1 = np.zeros_like(x)
    pk = np.full_like(x, 1.0 / sqb[0])
    dkm1 = np.zeros_like(x)
    dk = np.zeros_like(x)
    for k in range(K):
        pkp1 = ((x - alpha[k]) * pk - sqb[k] * pkm1) / sqb[k + 1]
        if derivative:
            dkp1 = (pk + (x - alpha[k]) * dk - sqb[k] * dkm1) / sqb[k + 1]
            dkm1, dk = dk, dkp1
        pkm1, pk = pk, pkp1
    if derivative:
        return pk, dk
    return pk


def _christoffel_sum(alpha, sqb, K, x):
    pkm1 = np.zeros_like(x)
    pk = np.full_like(x, 1.0 / sqb[0])
    total = pk * pk
    for k in range(K - 1):
        pkp1 = ((x - alpha[k]) * pk - sqb[k] * pkm1) / sqb[k + 1]
        pkm1, pk = pk, pkp1
        total += pk * pk
    return total
