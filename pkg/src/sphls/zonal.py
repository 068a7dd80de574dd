"""Zonal-profile calculus on the N-sphere.

A zonal function depends on position only through t = omega . axis, so
every integral over the sphere collapses to a weighted line integral:

    int_{S^N} f = |S^{N-1}| int_{-1}^{1} f(t) (1 - t^2)^((N-2)/2) dt.

Profiles are held as samples at the nodes of the cached Gauss rule for
that weight, together with optional coefficients in the zonal polynomial
basis (Gegenbauer for N >= 2, the scaled Chebyshev limit on the circle).
Convolution-type bilinear forms diagonalize in that basis, which is how
the inverse-distance form is evaluated here: no double integral is ever
formed, only an eigenvalue-weighted coefficient sum.
"""

import json
import math
import warnings
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional

import numpy as np

from .constants import eigenvalue_table
from .errors import DomainError, ResolutionWarning, UsageError
from .specfun import (
    QuadratureRule,
    gauss_gegenbauer_rule,
    sphere_area,
    zonal_basis_derivative_table,
    zonal_basis_table,
)

DEFAULT_NODES = 256
TAIL_RTOL = 1e-12
RESYNTH_TOL = 1e-10
# values below this are treated as exact zeros inside fractional powers
FLUSH_FLOOR = 1e-300


def _surface(n):
    # area of the equatorial sphere S^(N-1); the circle case gives |S^0| = 2
    return sphere_area(n - 1)


def _basis_norms(n, lmax):
    l = np.arange(lmax + 1, dtype=float)
    if n == 1:
        out = np.full(lmax + 1, math.pi)
        if lmax >= 1:
            out[1:] = 2.0 * math.pi / l[1:] ** 2
        return out
    lg_top = np.array([math.lgamma(v) for v in l + (n - 1.0)])
    lg_fact = np.array([math.lgamma(v) for v in l + 1.0])
    const = (
        math.log(math.pi)
        + (2.0 - n) * math.log(2.0)
        - 2.0 * math.lgamma((n - 1) / 2.0)
    )
    return np.exp(const + lg_top - lg_fact - np.log(l + (n - 1) / 2.0))


@lru_cache(maxsize=32)
def _basis_pack(n, num_nodes, lmax):
    """Cached (basis table, derivative table, weight norms) for one grid."""
    rule = gauss_gegenbauer_rule(n, num_nodes)
    t = np.asarray(rule.nodes)
    table = zonal_basis_table(n, lmax, t)
    dtable = zonal_basis_derivative_table(n, lmax, t)
    norms = _basis_norms(n, lmax)
    for arr in (table, dtable, norms):
        arr.setflags(write=False)
    return table, dtable, norms


def _frozen(arr):
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class ZonalFn:
    """Samples of a zonal profile at the nodes of a fixed Gauss rule.

    ``values[k]`` is the profile at ``rule.nodes[k]``.  When ``coeffs``
    is present it must resynthesize the samples to RESYNTH_TOL in the
    sup norm (relative to the sample peak); spectral operations demand
    the coefficients, plain integrals do not.
    """

    dim: int
    rule: QuadratureRule
    values: np.ndarray
    coeffs: Optional[np.ndarray] = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.shape[0] != self.rule.num_nodes:
            raise UsageError(
                f"values must be a vector of length {self.rule.num_nodes}, "
                f"got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise DomainError("zonal values must be finite")
        object.__setattr__(self, "values", _frozen(values))
        if self.coeffs is not None:
            coeffs = np.asarray(self.coeffs, dtype=float)
            if coeffs.ndim != 1 or coeffs.shape[0] > self.rule.num_nodes:
                raise UsageError(
                    "coeffs must be a vector no longer than the node count"
                )
            if not np.all(np.isfinite(coeffs)):
                raise DomainError("zonal coefficients must be finite")
            table, _, _ = _basis_pack(self.dim, self.rule.num_nodes, coeffs.size - 1)
            resynth = coeffs @ table
            scale = max(float(np.max(np.abs(values))), 1e-30)
            if float(np.max(np.abs(resynth - values))) > RESYNTH_TOL * scale:
                raise DomainError(
                    "coefficients do not resynthesize the samples; "
                    "drop them or raise the expansion degree"
                )
            object.__setattr__(self, "coeffs", _frozen(coeffs))

    @property
    def num_nodes(self):
        return self.rule.num_nodes

    @property
    def lmax(self):
        return None if self.coeffs is None else self.coeffs.size - 1


def _default_lmax(num_nodes):
    return num_nodes // 2


def zonal_from_values(n, values, lmax=None, attach_coeffs=True):
    """Wrap raw node samples; expansion coefficients attached by default."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or values.shape[0] < 1:
        raise UsageError("values must be a nonempty vector")
    rule = gauss_gegenbauer_rule(n, values.shape[0])
    f = ZonalFn(dim=n, rule=rule, values=values)
    if not attach_coeffs:
        return f
    if lmax is None:
        lmax = _default_lmax(f.num_nodes)
    return replace(f, coeffs=gegenbauer_coeffs(f, lmax))


def zonal_from_callable(n, fn, num_nodes=DEFAULT_NODES, lmax=None):
    rule = gauss_gegenbauer_rule(n, num_nodes)
    t = np.asarray(rule.nodes)
    values = np.broadcast_to(np.asarray(fn(t), dtype=float), t.shape)
    return zonal_from_values(n, values, lmax=lmax)


def zonal_constant(n, value=1.0, num_nodes=DEFAULT_NODES):
    rule = gauss_gegenbauer_rule(n, num_nodes)
    values = np.full(num_nodes, float(value))
    coeffs = np.array([float(value)])
    return ZonalFn(dim=n, rule=rule, values=values, coeffs=coeffs)


def zonal_from_coeffs(n, coeffs, num_nodes=DEFAULT_NODES):
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.size > num_nodes:
        raise UsageError("more coefficients than quadrature nodes")
    rule = gauss_gegenbauer_rule(n, num_nodes)
    table, _, _ = _basis_pack(n, num_nodes, coeffs.size - 1)
    return ZonalFn(dim=n, rule=rule, values=coeffs @ table, coeffs=coeffs)


def gegenbauer_coeffs(f, lmax):
    """Expansion coefficients a_0..a_lmax of the samples.

    a_l = <f, G_l>_w / h_l with h_l the basis weight-norm.  Warns with
    ResolutionWarning when the top coefficient has not decayed below
    TAIL_RTOL of the largest one, since truncation error is then visible.
    """
    if lmax < 0 or lmax >= f.num_nodes:
        raise UsageError(
            f"lmax must lie in [0, {f.num_nodes - 1}], got {lmax}"
        )
    table, _, norms = _basis_pack(f.dim, f.num_nodes, lmax)
    weighted = np.asarray(f.rule.weights) * f.values
    coeffs = (table @ weighted) / norms
    mags = np.abs(coeffs)
    peak = float(mags.max())
    if lmax >= 1 and peak > 0.0 and mags[-1] >= TAIL_RTOL * peak:
        warnings.warn(
            f"top expansion coefficient a_{lmax} is {mags[-1] / peak:.2e} of the "
            "peak; the profile is not resolved at this degree",
            ResolutionWarning,
            stacklevel=2,
        )
    return coeffs


def _ensure_coeffs(f):
    if f.coeffs is not None:
        return f.coeffs
    return gegenbauer_coeffs(f, _default_lmax(f.num_nodes))


def zonal_derivative_values(f):
    """d/dt of the profile at the nodes, by spectral differentiation."""
    coeffs = _ensure_coeffs(f)
    _, dtable, _ = _basis_pack(f.dim, f.num_nodes, coeffs.size - 1)
    return coeffs @ dtable


@lru_cache(maxsize=32)
def _bary_weights(n, num_nodes):
    # barycentric weights for the Gauss nodes, log-accumulated so the
    # node-difference products neither overflow nor underflow
    t = np.asarray(gauss_gegenbauer_rule(n, num_nodes).nodes)
    diff = np.abs(t[:, None] - t[None, :])
    np.fill_diagonal(diff, 1.0)
    logs = np.sum(np.log(diff), axis=1)
    # nodes ascend, so node k sees (K-1-k) negative factors
    sign = np.where((t.size - 1 - np.arange(t.size)) % 2 == 0, 1.0, -1.0)
    lam = sign * np.exp(-(logs - np.min(logs)))
    lam.setflags(write=False)
    return lam


def zonal_eval(f, t):
    """Profile values at arbitrary t in [-1, 1].

    Barycentric interpolation through the stored node samples; on the
    Gauss grid this reproduces the same polynomial as the coefficient
    expansion but without the endpoint roundoff growth of a long
    spectral sum.
    """
    t = np.asarray(t, dtype=float)
    flat = np.atleast_1d(t)
    if flat.size and (flat.min() < -1.0 or flat.max() > 1.0):
        raise DomainError("zonal_eval points must lie in [-1, 1]")
    nodes = np.asarray(f.rule.nodes)
    lam = _bary_weights(f.dim, f.num_nodes)
    diff = flat[:, None] - nodes[None, :]
    # points on a node divide by zero here and are patched below; both
    # sums must use the same reduction order or their roundoff stops
    # cancelling in the ratio
    with np.errstate(divide="ignore", invalid="ignore"):
        w = lam / diff
        out = np.sum(w * f.values, axis=1) / np.sum(w, axis=1)
    hit_rows, hit_cols = np.nonzero(np.abs(diff) < 1e-14)
    out[hit_rows] = f.values[hit_cols]
    return float(out[0]) if t.ndim == 0 else out


def zonal_integral(f):
    return _surface(f.dim) * float(np.sum(np.asarray(f.rule.weights) * f.values))


def zonal_lp_norm(f, p):
    if not p > 0:
        raise DomainError(f"zonal_lp_norm requires p > 0, got {p}")
    v = np.abs(f.values.copy())
    v[v < FLUSH_FLOOR] = 0.0
    total = _surface(f.dim) * float(np.sum(np.asarray(f.rule.weights) * v**p))
    return total ** (1.0 / p)


@dataclass(frozen=True)
class HarmonicComponent:
    """One spherical-harmonic degree of a zonal profile."""

    degree: int
    coefficient: float
    norm_sq: float


def harmonic_components(f):
    coeffs = _ensure_coeffs(f)
    _, _, norms = _basis_pack(f.dim, f.num_nodes, coeffs.size - 1)
    area = _surface(f.dim)
    return [
        HarmonicComponent(
            degree=l,
            coefficient=float(coeffs[l]),
            norm_sq=area * float(coeffs[l] ** 2 * norms[l]),
        )
        for l in range(coeffs.size)
    ]


def _check_pair(f, g):
    if not isinstance(f, ZonalFn) or not isinstance(g, ZonalFn):
        raise UsageError("expected ZonalFn operands")
    if f.dim != g.dim:
        raise UsageError(f"dimension mismatch: {f.dim} vs {g.dim}")
    if f.num_nodes != g.num_nodes or not np.allclose(
        f.rule.nodes, g.rule.nodes, rtol=0.0, atol=1e-14
    ):
        raise UsageError("operands live on different node sets")


def _bilinear_spectral(f, g, alpha):
    # eigenvalue-weighted coefficient sum; alpha may sit anywhere in the
    # kernel domain (-1, n/2), callers own the public range check.
    # Stored coefficient vectors are trusted here: the resynthesis
    # invariant already bounds their truncation error, and the analysis
    # path warns on an undecayed tail before they are ever attached.
    n = f.dim
    a = _ensure_coeffs(f)
    b = _ensure_coeffs(g)
    top = min(a.size, b.size)
    a, b = a[:top], b[:top]
    eig = eigenvalue_table(n, alpha, top - 1)
    _, _, norms = _basis_pack(n, f.num_nodes, top - 1)
    return (
        _surface(n)
        * 2.0 ** (-alpha)
        * float(np.sum(eig * norms[:top] * a * b))
    )


def hls_bilinear(f, g, lam):
    """Double integral of f(w) g(e) / |w - e|^lam over the sphere squared.

    Uses |w - e|^2 = 2 (1 - w . e) to reduce the kernel to the standard
    (1 - t)^(-lam/2) form, whose eigenvalue table is closed-form, so the
    value is a single weighted sum over harmonic degrees.
    """
    _check_pair(f, g)
    if not 0.0 < lam < f.dim:
        raise DomainError(
            f"hls_bilinear requires 0 < lam < {f.dim}, got {lam}"
        )
    return _bilinear_spectral(f, g, 0.5 * lam)


def hls_quotient(f, lam):
    sup = float(np.max(np.abs(f.values)))
    if sup == 0.0:
        raise DomainError("quotient of the zero profile is undefined")
    if float(np.min(f.values)) < -1e-10 * sup:
        raise DomainError("hls_quotient requires a nonnegative profile")
    p = 2.0 * f.dim / (2.0 * f.dim - lam)
    return hls_bilinear(f, f, lam) / zonal_lp_norm(f, p) ** 2


def conformal_energy(u):
    """Quadratic form int |grad u|^2 + (N(N-2)/4) u^2 for zonal u, N >= 3.

    The gradient of a zonal profile satisfies |grad u|^2 = (1 - t^2) u'(t)^2,
    and u' comes from spectral differentiation, so polynomial profiles are
    handled exactly.
    """
    n = u.dim
    if n < 3:
        raise DomainError(f"conformal_energy requires dimension >= 3, got {n}")
    if u.coeffs is None:
        raise UsageError(
            "conformal_energy needs expansion coefficients for the derivative; "
            "construct the profile with coefficients attached"
        )
    t = np.asarray(u.rule.nodes)
    w = np.asarray(u.rule.weights)
    du = zonal_derivative_values(u)
    grad = float(np.sum(w * (1.0 - t * t) * du * du))
    mass = float(np.sum(w * u.values * u.values))
    return _surface(n) * (grad + 0.25 * n * (n - 2) * mass)


def sobolev_quotient(u):
    if float(np.max(np.abs(u.values))) == 0.0:
        raise DomainError("quotient of the zero profile is undefined")
    n = u.dim
    if n < 3:
        raise DomainError(f"sobolev_quotient requires dimension >= 3, got {n}")
    q = 2.0 * n / (n - 2.0)
    return conformal_energy(u) / zonal_lp_norm(u, q) ** 2


def gsr_zonal_check(u):
    """Both sides of the coordinate-multiplication gradient identity.

    For the last coordinate t, int |grad(t u)|^2 equals
    int t^2 (|grad u|^2 + N u^2); the return is (lhs, rhs) so callers can
    compare at whatever tolerance the context demands.
    """
    n = u.dim
    t = np.asarray(u.rule.nodes)
    w = np.asarray(u.rule.weights)
    du = zonal_derivative_values(u)
    uv = u.values
    lhs = _surface(n) * float(np.sum(w * (1.0 - t * t) * (uv + t * du) ** 2))
    rhs = _surface(n) * float(np.sum(w * t * t * ((1.0 - t * t) * du * du + n * uv * uv)))
    return lhs, rhs


def hls_extremal_family(n, lam, r, num_nodes=DEFAULT_NODES):
    """Profile (1 - r t)^(-(2N - lam)/2); r = 0 is the constant.

    Signed r picks the pole: positive concentrates at t = 1, negative
    at t = -1.
    """
    if not 0.0 < lam < n:
        raise DomainError(f"hls_extremal_family requires 0 < lam < {n}, got {lam}")
    if not -1.0 < r < 1.0:
        raise DomainError(f"hls_extremal_family requires -1 < r < 1, got {r}")
    power = -(2.0 * n - lam) / 2.0
    return zonal_from_callable(n, lambda t: (1.0 - r * t) ** power, num_nodes)


def sobolev_extremal_family(n, r, num_nodes=DEFAULT_NODES):
    """Profile (1 - r t)^(-(N - 2)/2) for the gradient-form quotient."""
    if n < 3:
        raise DomainError(f"sobolev_extremal_family requires dimension >= 3, got {n}")
    if not -1.0 < r < 1.0:
        raise DomainError(f"sobolev_extremal_family requires -1 < r < 1, got {r}")
    power = -(n - 2.0) / 2.0
    return zonal_from_callable(n, lambda t: (1.0 - r * t) ** power, num_nodes)


def zonal_to_json(f):
    doc = {
        "dim": f.dim,
        "nodes": [float(x) for x in f.rule.nodes],
        "values": [float(x) for x in f.values],
    }
    if f.coeffs is not None:
        doc["coeffs"] = [float(x) for x in f.coeffs]
    return json.dumps(doc)


def zonal_from_json(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"not a valid zonal profile document: {exc}") from exc
    for key in ("dim", "nodes", "values"):
        if key not in doc:
            raise UsageError(f"zonal profile document lacks the '{key}' field")
    n = int(doc["dim"])
    nodes = np.asarray(doc["nodes"], dtype=float)
    values = np.asarray(doc["values"], dtype=float)
    if nodes.shape != values.shape or nodes.ndim != 1:
        raise UsageError("nodes and values must be vectors of equal length")
    rule = gauss_gegenbauer_rule(n, nodes.shape[0])
    if not np.allclose(nodes, rule.nodes, rtol=0.0, atol=1e-12):
        raise UsageError(
            "stored nodes do not match the canonical Gauss rule for this "
            "dimension and node count"
        )
    coeffs = doc.get("coeffs")
    if coeffs is not None:
        coeffs = np.asarray(coeffs, dtype=float)
    return ZonalFn(dim=n, rule=rule, values=values, coeffs=coeffs)
