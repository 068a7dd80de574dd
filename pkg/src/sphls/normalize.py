"""Center-of-mass normalization of sphere profiles.

A nonnegative profile's p-th power defines a mass measure on the
sphere; the coordinate integrals of that measure form its center of
mass.  Moving the profile through the one-parameter conformal family
toward a pole slides the center along the axis continuously, from one
pole's limit to the other's, so a sign change in the axis component
always brackets a parameter at which the center vanishes.  For zonal
profiles the off-axis components are zero by symmetry and the whole
search is one-dimensional.

The solver works in log of the map parameter so the bracket treats
contraction toward either pole symmetrically, and it never assumes the
axis residual is monotone: bisection only needs the sign change.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoRootError, UsageError
from .geometry import ConformalMap, mobius_t, sphere_point, transport
from .specfun import gauss_jacobi_rule, sphere_area
from .zonal import ZonalFn, zonal_integral

# bracket for the map parameter, and the bisection budget; 80 halvings
# shrink the log-width 36.8 bracket below 1e-22
DELTA_MIN = 1e-8
DELTA_MAX = 1e8
BISECT_ITERS = 80

# an axis residual this small counts as an exact root (the mass measure
# is normalized, so the residual is dimensionless and at most 1)
ROOT_ATOL = 1e-14


def _axis_vector(n):
    e = np.zeros(n + 1)
    e[-1] = 1.0
    return e


def com_vector(f):
    """Coordinate integrals of a zonal profile, as an (N+1)-vector.

    Only the axis component can be nonzero; the others vanish by
    rotational symmetry and are returned as exact zeros.
    """
    if not isinstance(f, ZonalFn):
        raise UsageError("com_vector expects a ZonalFn")
    t = np.asarray(f.rule.nodes)
    w = np.asarray(f.rule.weights)
    out = _axis_vector(f.dim)
    out[-1] = sphere_area(f.dim - 1) * float(np.sum(w * t * f.values))
    return out


def _mass_weights(f, p):
    # quadrature weights of the normalized mass measure |f|^p
    if np.min(f.values) < -1e-12 * max(np.max(np.abs(f.values)), 1.0):
        raise DomainError("center-of-mass normalization needs a nonnegative profile")
    mass = np.asarray(f.rule.weights) * np.abs(f.values) ** p
    total = float(np.sum(mass))
    if not (total > 0.0 and np.isfinite(total)):
        raise DomainError("profile mass must be positive and finite")
    return mass / total


def pushforward_com_axis(f, p, delta):
    """Axis center of mass the transported profile will have.

    Transport with the L^p weight moves the mass measure |f|^p as a
    measure, so the transported center is the integral of the mapped
    axis coordinate against the original mass; no transported samples
    are needed.
    """
    if not isinstance(f, ZonalFn):
        raise UsageError("pushforward_com_axis expects a ZonalFn")
    if not (delta > 0.0 and math.isfinite(delta)):
        raise DomainError(f"map parameter must be positive and finite, got {delta}")
    mw = _mass_weights(f, p)
    return float(np.sum(mw * mobius_t(delta, np.asarray(f.rule.nodes))))


@dataclass(frozen=True)
class ComResult:
    """Outcome of the center-of-mass solve."""

    map: ConformalMap
    fn: ZonalFn
    residual: np.ndarray
    iters: int

    @property
    def delta(self):
        return self.map.delta

    @property
    def xi_sign(self):
        return 1 if float(self.map.xi.coords[-1]) > 0 else -1


def com_result_to_json(res):
    doc = {
        "delta": res.delta,
        "xi_sign": res.xi_sign,
        "residual": [float(x) for x in res.residual],
        "iters": res.iters,
    }
    return json.dumps(doc)


def com_normalize(f, p):
    """Find the conformal map that centers the mass |f|^p, and apply it.

    Returns the map (parameter canonicalized to at most 1, with the pole
    sign choosing the axis end), the transported profile, the recomputed
    coordinate integrals of the transported mass, and the bisection
    count.  The reported residual is an independent check: it integrates
    the transported samples directly rather than reusing the pushforward
    formula the solver bisected on.
    """
    if not isinstance(f, ZonalFn):
        raise UsageError("com_normalize expects a ZonalFn")
    if not p > 0.0:
        raise DomainError(f"com_normalize requires exponent p > 0, got {p}")
    mw = _mass_weights(f, p)
    t = np.asarray(f.rule.nodes)

    def axis_com(s):
        return float(np.sum(mw * mobius_t(math.exp(s), t)))

    lo, hi = math.log(DELTA_MIN), math.log(DELTA_MAX)
    r_lo, r_hi = axis_com(lo), axis_com(hi)
    if r_lo == 0.0:
        root, iters = lo, 0
    elif r_hi == 0.0:
        root, iters = hi, 0
    elif r_lo * r_hi > 0.0:
        raise NoRootError(
            "axis center of mass does not change sign over the map bracket "
            f"[{DELTA_MIN:g}, {DELTA_MAX:g}]: endpoints {r_lo:.3e}, {r_hi:.3e}"
        )
    else:
        root = None
        for iters in range(1, BISECT_ITERS + 1):
            mid = 0.5 * (lo + hi)
            r_mid = axis_com(mid)
            if abs(r_mid) <= ROOT_ATOL:
                root = mid
                break
            if r_lo * r_mid < 0.0:
                hi = mid
            else:
                lo, r_lo = mid, r_mid
        if root is None:
            root = 0.5 * (lo + hi)

    delta = math.exp(root)
    if delta <= 1.0:
        cmap = ConformalMap(delta=delta, xi=sphere_point(_axis_vector(f.dim)))
    else:
        cmap = ConformalMap(delta=1.0 / delta, xi=sphere_point(-_axis_vector(f.dim)))
    moved = transport(f, cmap, p)
    moved_mass = ZonalFn(dim=moved.dim, rule=moved.rule, values=np.abs(moved.values) ** p)
    residual = com_vector(moved_mass)
    return ComResult(map=cmap, fn=moved, residual=residual, iters=iters)


def F_map(r, xi, f):
    """Mass-displacement vector of the conformal family, F(r xi).

    Contracts the sphere toward the unit vector xi with strength r and
    integrates the mapped position against the profile.  As r tends to 0
    the map tends to the identity and the integral to the plain center
    of mass; as r tends to 1 all mass collapses onto xi.  The profile is
    zonal about the axis while xi may point anywhere, so the integral
    lives in the plane spanned by the axis and xi and splits into a
    polar quadrature crossed with an azimuthal average.
    """
    if not isinstance(f, ZonalFn):
        raise UsageError("F_map expects a ZonalFn")
    if not 0.0 < r < 1.0:
        raise DomainError(f"contraction strength must lie in (0, 1), got {r}")
    xi = np.asarray(xi, dtype=float)
    n = f.dim
    if xi.shape != (n + 1,):
        raise UsageError(f"xi must be a vector of length {n + 1}, got shape {xi.shape}")
    norm = float(np.linalg.norm(xi))
    if abs(norm - 1.0) > 1e-12:
        raise DomainError("xi must be a unit vector")
    xi = xi / norm

    delta = 1.0 - r
    t = np.asarray(f.rule.nodes)
    w = np.asarray(f.rule.weights) * f.values
    surface = sphere_area(n - 1)
    axis = _axis_vector(n)
    a = float(xi[-1])
    perp = xi - a * axis
    b = float(np.linalg.norm(perp))

    if b <= 1e-13:
        # pole on the axis: the map reduces to the polar fractional
        # action and every off-axis component vanishes identically
        sign = 1.0 if a >= 0.0 else -1.0
        moved = sign * mobius_t(delta, sign * t)
        return surface * float(np.sum(w * moved)) * axis

    m_hat = perp / b
    if n >= 2:
        s_nodes, s_weights = gauss_jacobi_rule((n - 3) / 2.0, (n - 3) / 2.0, 64)
        s_nodes = np.asarray(s_nodes)
        s_weights = np.asarray(s_weights)
    else:
        # the orthogonal sphere S^0 is two points
        s_nodes = np.array([-1.0, 1.0])
        s_weights = np.array([1.0, 1.0])
    s_weights = s_weights / float(np.sum(s_weights))

    sin_col = np.sqrt(np.clip(1.0 - t * t, 0.0, None))[:, None]
    u = a * t[:, None] + b * sin_col * s_nodes[None, :]
    den = (1.0 + u) + delta * delta * (1.0 - u)
    radial = (1.0 + u) - delta * delta * (1.0 - u)
    comp_axis = (2.0 * delta * (t[:, None] - u * a) + radial * a) / den
    comp_perp = (2.0 * delta * (sin_col * s_nodes[None, :] - u * b) + radial * b) / den
    f_axis = surface * float(np.sum(w * (comp_axis @ s_weights)))
    f_perp = surface * float(np.sum(w * (comp_perp @ s_weights)))
    return f_axis * axis + f_perp * m_hat
