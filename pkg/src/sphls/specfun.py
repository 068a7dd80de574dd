"""Special functions and Gauss quadrature for ultraspherical weights.

Everything downstream builds on four ingredients: log-gamma, the
ultraspherical (Gegenbauer) recurrence, surface areas of unit spheres,
and Gauss rules for the weight (1-t^2)^((N-2)/2) on [-1, 1].  The rules
are computed dependency-free by Newton iteration on the orthonormal
Jacobi recurrence (dense-eigenvalue fallback if a solve misbehaves).
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .errors import DomainError

NEWTON_TOL = 1e-15
NEWTON_MAXIT = 100


def log_gamma(x):
    """ln Gamma(x) for x > 0."""
    if x <= 0.0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def sphere_area(n):
    """Surface measure of the unit n-sphere, 2 pi^((n+1)/2) / Gamma((n+1)/2)."""
    if n < 0 or n != int(n):
        raise DomainError(f"sphere_area requires an integer n >= 0, got {n}")
    n = int(n)
    return 2.0 * math.pi ** ((n + 1) / 2.0) / math.gamma((n + 1) / 2.0)


def gegenbauer(l, lam, t):
    """C_l^(lam)(t) by the three-term recurrence.

    Seeds C_0 = 1, C_1 = 2*lam*t; at lam = 0 the recurrence gives 0 for
    every l >= 1 (see zonal_basis_table for the dimension-1 basis that
    replaces it).  t may be a scalar or an ndarray.
    """
    if l < 0 or l != int(l):
        raise DomainError(f"gegenbauer requires an integer l >= 0, got {l}")
    l = int(l)
    scalar = np.isscalar(t)
    tarr = np.atleast_1d(np.asarray(t, dtype=np.float64))
    table = _kernels.gegenbauer_table(l, float(lam), np.ascontiguousarray(tarr))
    out = table[l]
    return float(out[0]) if scalar else out.reshape(np.shape(t))


def zonal_basis_table(n, lmax, t):
    """Values of the degree-l zonal basis on S^n at nodes t, shape (lmax+1, K).

    For n >= 2 this is C_l^((n-1)/2); for n = 1 the Chebyshev limit basis
    (1, (2/l) T_l) that the circle's kernel eigenvalue formulas assume.
    """
    if n < 1:
        raise DomainError(f"zonal_basis_table requires n >= 1, got {n}")
    t = np.ascontiguousarray(np.asarray(t, dtype=np.float64))
    if n == 1:
        return _kernels.chebyshev_limit_table(lmax, t)
    return _kernels.gegenbauer_table(lmax, (n - 1) / 2.0, t)


def zonal_basis_derivative_table(n, lmax, t):
    """Values of d/dt of the degree-l zonal basis, shape (lmax+1, K)."""
    t = np.ascontiguousarray(np.asarray(t, dtype=np.float64))
    out = np.zeros((lmax + 1, t.shape[0]))
    if lmax == 0:
        return out
    if n == 1:
        # d/dt[(2/l) T_l] = 2 U_{l-1} = 2 C_{l-1}^(1)
        upper = _kernels.gegenbauer_table(lmax - 1, 1.0, t)
        out[1:] = 2.0 * upper
    else:
        # d/dt C_l^(lam) = 2 lam C_{l-1}^(lam+1) with lam = (n-1)/2
        upper = _kernels.gegenbauer_table(lmax - 1, (n + 1) / 2.0, t)
        out[1:] = (n - 1.0) * upper
    return out


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule for the weight (1-t^2)^((dim-2)/2) on [-1, 1]."""

    dim: int
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def num_nodes(self):
        return self.nodes.shape[0]


def _jacobi_coeffs(num, a, b):
    """Orthonormal recurrence coefficients for the weight (1-t)^a (1+t)^b.

    Returns (alpha[num], beta[num+1]) with beta[0] the total weight mu0.
    """
    alpha = np.empty(num)
    beta = np.empty(num + 1)
    beta[0] = math.exp((a + b + 1.0) * math.log(2.0)
                       + math.lgamma(a + 1.0) + math.lgamma(b + 1.0)
                       - math.lgamma(a + b + 2.0))
    alpha[0] = (b - a) / (a + b + 2.0)
    k = np.arange(1, num, dtype=np.float64)
    nab = 2.0 * k + a + b
    alpha[1:] = (b * b - a * a) / (nab * (nab + 2.0))
    if num >= 1:
        beta[1] = 4.0 * (a + 1.0) * (b + 1.0) / ((a + b + 2.0) ** 2 * (a + b + 3.0))
    if num >= 2:
        k = np.arange(2, num + 1, dtype=np.float64)
        nab = 2.0 * k + a + b
        beta[2:] = (4.0 * k * (k + a) * (k + b) * (k + a + b)
                    / (nab * nab * (nab + 1.0) * (nab - 1.0)))
    return alpha, beta


def _eigh_nodes_weights(alpha, beta):
    # Golub-Welsch on the dense symmetric tridiagonal matrix.
    num = alpha.shape[0]
    mat = np.diag(alpha)
    off = np.sqrt(beta[1:num])
    mat += np.diag(off, 1) + np.diag(off, -1)
    vals, vecs = np.linalg.eigh(mat)
    weights = beta[0] * vecs[0, :] ** 2
    return vals, weights


def gauss_jacobi_rule(a, b, num_nodes):
    """Nodes and weights for the weight (1-t)^a (1+t)^b on [-1, 1]."""
    if a <= -1.0 or b <= -1.0:
        raise DomainError(f"gauss_jacobi_rule requires a, b > -1, got a={a}, b={b}")
    if num_nodes < 1:
        raise DomainError(f"gauss_jacobi_rule requires num_nodes >= 1, got {num_nodes}")
    alpha, beta = _jacobi_coeffs(int(num_nodes), float(a), float(b))
    nodes, weights, _, ok = _kernels.jacobi_nodes_weights(
        np.ascontiguousarray(alpha), np.ascontiguousarray(beta),
        NEWTON_TOL, NEWTON_MAXIT)
    if not (ok and np.all(np.diff(nodes) > 0.0) and np.all(weights > 0.0)):
        nodes, weights = _eigh_nodes_weights(alpha, beta)
    return nodes, weights


@lru_cache(maxsize=64)
def gauss_gegenbauer_rule(n, num_nodes=64):
    """Gauss rule for the zonal weight (1-t^2)^((n-2)/2) on S^n profiles."""
    if n < 1 or n != int(n):
        raise DomainError(f"gauss_gegenbauer_rule requires an integer n >= 1, got {n}")
    n = int(n)
    a = (n - 2) / 2.0
    nodes, weights = gauss_jacobi_rule(a, a, num_nodes)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(dim=n, nodes=nodes, weights=weights)
