"""Variational machinery around the sphere inequalities.

Three pieces: a fixed-point iteration on the stationarity equation of
the bilinear quotient, whose limit is the candidate extremizer; the
second-variation quadratic forms of both quotients, evaluated on
constraint-projected directions; and the degreewise spectral margin
that makes the coordinate-weighted kernel form dominate a multiple of
the plain one, which is the linear inequality the whole argument rests
on.

The iteration itself is an experimental tool: nothing here assumes it
converges, every step is recorded in a trace, and a run that exhausts
its budget returns the trace with the converged flag down.
"""

from dataclasses import dataclass

import numpy as np

from .constants import Params, eigenvalue_E, eigenvalue_table
from .errors import DegenerateDirectionError, DomainError, UsageError
from .specfun import sphere_area
from .zonal import (
    ZonalFn,
    conformal_energy,
    harmonic_components,
    hls_bilinear,
    zonal_from_coeffs,
    zonal_from_values,
)

# fixed-point stop: sup-norm stationarity residual, relative to the
# kernel image peak
EL_RESIDUAL_TOL = 1e-8

# a projected direction smaller than this fraction of the original is
# treated as annihilated by the constraint
PROJECTION_FLOOR = 1e-12


@dataclass(frozen=True)
class IterationTrace:
    """Per-iterate record of the fixed-point run.

    rows holds (iterate index, quotient, sup change of the normalized
    iterate that produced it, stationarity residual); constant is the
    multiplier induced by the final iterate.
    """

    rows: tuple
    converged: bool
    constant: float


def trace_to_csv(trace):
    lines = ["iter,quotient,sup_change,residual"]
    for k, quotient, change, residual in trace.rows:
        lines.append(f"{k},{quotient:.17g},{change:.17g},{residual:.17g}")
    return "\n".join(lines) + "\n"


def _mass_integral(f, power):
    # integral of f^power over the sphere via the profile's own rule
    w = np.asarray(f.rule.weights)
    return sphere_area(f.dim - 1) * float(np.sum(w * f.values**power))


def _apply_kernel(h, alpha):
    # the distance-power kernel acts degreewise on the expansion
    eig = np.asarray(eigenvalue_table(h.dim, alpha, h.coeffs.size - 1))
    return zonal_from_coeffs(h.dim, 2.0**-alpha * eig * h.coeffs, num_nodes=h.num_nodes)


def euler_lagrange_iterate(params, h0, max_iters=500, relax=1.0):
    """Iterate h <- normalize((Kh)^(1/(p-1))) from a positive start.

    Each pass evaluates the quotient, the induced multiplier and the
    stationarity residual of the current iterate, then applies the
    update with optional under-relaxation on the normalized profiles.
    Returns the final iterate and the full trace; the trace's converged
    flag reports whether the residual tolerance was met within the
    budget.
    """
    if not isinstance(params, Params):
        raise UsageError("euler_lagrange_iterate expects a Params instance")
    if not isinstance(h0, ZonalFn):
        raise UsageError("euler_lagrange_iterate expects a ZonalFn start")
    if h0.dim != params.n:
        raise UsageError(
            f"start lives on S^{h0.dim} but the parameters say S^{params.n}"
        )
    if float(np.min(h0.values)) <= 0.0:
        raise DomainError("the start must be strictly positive at every node")
    if not 0.0 < relax <= 1.0:
        raise DomainError(f"relaxation factor must lie in (0, 1], got {relax}")
    if max_iters < 0 or max_iters != int(max_iters):
        raise DomainError(f"max_iters must be a nonnegative integer, got {max_iters}")

    n, lam, p = params.n, params.lam, params.p
    h = zonal_from_values(n, h0.values / _mass_integral(h0, p) ** (1.0 / p))

    rows = []
    converged = False
    constant = float("nan")
    change = 0.0
    for k in range(max_iters + 1):
        image = _apply_kernel(h, params.alpha)
        pairing = hls_bilinear(h, h, lam)
        mass = _mass_integral(h, p)
        constant = pairing / mass
        quotient = pairing / mass ** (2.0 / p)
        scale = float(np.max(np.abs(image.values)))
        residual = (
            float(np.max(np.abs(image.values - constant * h.values ** (p - 1.0))))
            / scale
        )
        rows.append((k, quotient, change, residual))
        if residual <= EL_RESIDUAL_TOL:
            converged = True
            break
        if k == max_iters:
            break
        if float(np.min(image.values)) <= 0.0:
            raise RuntimeError(
                "kernel image lost positivity; the spectral resynthesis is "
                "not trustworthy for this iterate"
            )
        step = image.values ** (1.0 / (p - 1.0))
        step = step / _mass_integral(
            ZonalFn(dim=n, rule=h.rule, values=step), p
        ) ** (1.0 / p)
        blended = (1.0 - relax) * h.values + relax * step
        blended = blended / _mass_integral(
            ZonalFn(dim=n, rule=h.rule, values=blended), p
        ) ** (1.0 / p)
        change = float(np.max(np.abs(blended - h.values)))
        h = zonal_from_values(n, blended)

    return h, IterationTrace(rows=tuple(rows), converged=converged, constant=constant)


def _project_against(direction, weight_values, rule, dim):
    # remove the weight component so the linearized constraint holds
    w = np.asarray(rule.weights)
    inner = float(np.sum(w * direction.values * weight_values))
    norm_sq = float(np.sum(w * weight_values * weight_values))
    projected = direction.values - (inner / norm_sq) * weight_values
    scale = max(float(np.max(np.abs(direction.values))), 1e-300)
    if float(np.max(np.abs(projected))) <= PROJECTION_FLOOR * scale:
        raise DegenerateDirectionError(
            "direction is annihilated by the constraint projection"
        )
    return zonal_from_values(dim, projected)


def _check_same_grid(a, b, what):
    if not isinstance(a, ZonalFn) or not isinstance(b, ZonalFn):
        raise UsageError(f"{what} expects ZonalFn operands")
    if a.dim != b.dim or a.num_nodes != b.num_nodes:
        raise UsageError(f"{what} operands must share dimension and node count")


def second_variation_hls(h, f, lam):
    """Quadratic form of the bilinear quotient at h in direction f.

    The direction is first projected against h^(p-1) so the linearized
    norm constraint holds; the value is the pairing of the projected
    direction times the p-mass of h, minus (p-1) times the pairing of h
    times the weighted square of the direction.  At a maximizer this is
    nonpositive for every admissible direction.
    """
    _check_same_grid(h, f, "second_variation_hls")
    if not 0.0 < lam < h.dim:
        raise DomainError(f"second_variation_hls requires 0 < lam < {h.dim}")
    if float(np.min(h.values)) <= 0.0:
        raise DomainError("base profile must be strictly positive")
    n = h.dim
    p = 2.0 * n / (2.0 * n - lam)
    weight = h.values ** (p - 1.0)
    fp = _project_against(f, weight, h.rule, n)
    w = np.asarray(h.rule.weights)
    surface = sphere_area(n - 1)
    mass_p = _mass_integral(h, p)
    cross = surface * float(np.sum(w * h.values ** (p - 2.0) * fp.values**2))
    return (
        hls_bilinear(fp, fp, lam) * mass_p
        - (p - 1.0) * hls_bilinear(h, h, lam) * cross
    )


def _coordinate_kernel_pairing(f, alpha):
    # pairing against the kernel carrying the extra cosine factor,
    # split by the identity u (1-u)^(-a) = (1-u)^(-a) - (1-u)^(1-a)
    comps = harmonic_components(f)
    top = len(comps) - 1
    eig = np.asarray(eigenvalue_table(f.dim, alpha, top))
    eig_shift = np.asarray(eigenvalue_table(f.dim, alpha - 1.0, top))
    norms = np.array([c.norm_sq for c in comps])
    return 2.0**-alpha * float(np.sum((eig - eig_shift) * norms))


def second_variation_coordinate_sum(h, lam):
    """Sum of the quadratic form over all coordinate directions.

    The coordinate-weighted directions sum spectrally: their pairings
    combine into the cosine-kernel pairing of h and their weighted
    squares recombine into the p-mass, so no non-zonal function is ever
    formed.  The base profile's p-mass must already be centered, which
    is exactly what makes the coordinate directions admissible without
    projection.
    """
    if not isinstance(h, ZonalFn):
        raise UsageError("second_variation_coordinate_sum expects a ZonalFn")
    if not 0.0 < lam < h.dim:
        raise DomainError(f"second_variation_coordinate_sum requires 0 < lam < {h.dim}")
    if float(np.min(h.values)) <= 0.0:
        raise DomainError("base profile must be strictly positive")
    n = h.dim
    p = 2.0 * n / (2.0 * n - lam)
    mass_p = _mass_integral(h, p)
    return mass_p * (
        _coordinate_kernel_pairing(h, 0.5 * lam)
        - (p - 1.0) * hls_bilinear(h, h, lam)
    )


def second_variation_sobolev(U, v):
    """Quadratic form of the gradient quotient at U in direction v.

    The direction is projected against U^(q-1); the value is the energy
    of the projected direction times the q-mass of U, minus (q-1) times
    the energy of U times the weighted square of the direction.  At the
    constant base this is nonnegative, vanishing exactly on the
    degree-one sector.
    """
    _check_same_grid(U, v, "second_variation_sobolev")
    n = U.dim
    if n < 3:
        raise DomainError(f"second_variation_sobolev requires dimension >= 3, got {n}")
    if float(np.min(U.values)) <= 0.0:
        raise DomainError("base profile must be strictly positive")
    q = 2.0 * n / (n - 2.0)
    weight = U.values ** (q - 1.0)
    vp = _project_against(v, weight, U.rule, n)
    w = np.asarray(U.rule.weights)
    surface = sphere_area(n - 1)
    mass_q = _mass_integral(U, q)
    cross = surface * float(np.sum(w * U.values ** (q - 2.0) * vp.values**2))
    return conformal_energy(vp) * mass_q - (q - 1.0) * conformal_energy(U) * cross


def key_margin(n, alpha, l):
    """Degreewise slack of the spectral inequality.

    The cosine-weighted kernel dominates alpha/(N-alpha) times the
    plain kernel exactly when, degree by degree, the shifted eigenvalue
    stays below (N-2 alpha)/(N-alpha) times the plain one; this returns
    that difference.  It is zero at degree 0 and strictly positive for
    every higher degree.
    """
    if n < 1 or n != int(n):
        raise DomainError(f"dimension must be a positive integer, got {n}")
    if not 0.0 < alpha < n / 2.0:
        raise DomainError(f"key_margin requires 0 < alpha < {n / 2}, got {alpha}")
    if l < 0 or l != int(l):
        raise UsageError(f"degree must be a nonnegative integer, got {l}")
    n, l = int(n), int(l)
    ratio = (n - 2.0 * alpha) / (n - alpha)
    return ratio * eigenvalue_E(n, alpha, l) - eigenvalue_E(n, alpha - 1.0, l)


def key_inequality_bilinear_check(f, n, alpha):
    """Both sides of the spectral inequality for one zonal profile.

    The left side pairs f against the cosine-weighted kernel through
    the degreewise eigenvalue difference; the right side is
    alpha/(N-alpha) times the plain kernel pairing.  The left never
    falls below the right, with equality only for constants.
    """
    if not isinstance(f, ZonalFn):
        raise UsageError("key_inequality_bilinear_check expects a ZonalFn")
    if f.dim != n:
        raise UsageError(f"profile lives on S^{f.dim}, parameters say S^{n}")
    if not 0.0 < alpha < n / 2.0:
        raise DomainError(
            f"key_inequality_bilinear_check requires 0 < alpha < {n / 2}"
        )
    lhs = _coordinate_kernel_pairing(f, alpha)
    rhs = alpha / (n - alpha) * hls_bilinear(f, f, 2.0 * alpha)
    return lhs, rhs
