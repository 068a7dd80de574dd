"""Sharp constants and zonal kernel spectra.

Closed forms for the sharp constants of the Hardy-Littlewood-Sobolev
and fractional Sobolev inequalities, the Green's function coefficient
tying them together, and the eigenvalues of the zonal kernels
(1 - w.e)^(-alpha) on S^n obtained from the classical integral formula
for kernel operators against degree-l spherical harmonics.

Gamma factors are assembled in log space; the degree dependence of the
eigenvalues is a running product of ratios (alpha+j)/(n-alpha+j), which
is exact at integer alpha (no pole crossings) and safe out to large l.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .specfun import gauss_gegenbauer_rule, gauss_jacobi_rule, zonal_basis_table

_LG = math.lgamma


def _check_dim(n, name="n"):
    if n < 1 or n != int(n):
        raise DomainError(f"{name} must be an integer >= 1, got {n}")
    return int(n)


@dataclass(frozen=True)
class Params:
    """Dimension and kernel exponent with the derived exponents.

    lam is the kernel power in |x-y|^(-lam), 0 < lam < n.  Derived:
    p = 2n/(2n-lam) (the sharp Lebesgue exponent), alpha = lam/2 (the
    zonal kernel exponent), s = (n-lam)/2 (the smoothness order of the
    dual Sobolev inequality) and q = 2n/lam (the conjugate of p).
    """

    n: int
    lam: float

    def __post_init__(self):
        object.__setattr__(self, "n", _check_dim(self.n))
        if not (0.0 < self.lam < self.n):
            raise DomainError(f"lam must be in (0, n), got lam={self.lam}, n={self.n}")

    @property
    def p(self):
        return 2.0 * self.n / (2.0 * self.n - self.lam)

    @property
    def alpha(self):
        return self.lam / 2.0

    @property
    def s(self):
        return (self.n - self.lam) / 2.0

    @property
    def q(self):
        return 2.0 * self.n / self.lam


def hls_sharp_constant(n, lam):
    """Best constant of the bilinear |x-y|^(-lam) inequality on R^n."""
    n = _check_dim(n)
    if not (0.0 < lam < n):
        raise DomainError(f"hls_sharp_constant requires 0 < lam < n, got {lam}")
    return math.exp(
        0.5 * lam * math.log(math.pi)
        + _LG((n - lam) / 2.0) - _LG(n - lam / 2.0)
        + (1.0 - lam / n) * (_LG(n) - _LG(n / 2.0)))


def sobolev_sharp_constant(n, s):
    """Best constant of the order-s Sobolev inequality on R^n, 0 < s < n/2."""
    n = _check_dim(n)
    if not (0.0 < s < n / 2.0):
        raise DomainError(f"sobolev_sharp_constant requires 0 < s < n/2, got {s}")
    return math.exp(
        2.0 * s * math.log(2.0) + s * math.log(math.pi)
        + _LG((n + 2.0 * s) / 2.0) - _LG((n - 2.0 * s) / 2.0)
        + (2.0 * s / n) * (_LG(n / 2.0) - _LG(n)))


def sobolev_classical_form(n):
    """The s = 1 constant written as n(n-2)/4 * (2 pi^((n+1)/2)/Gamma((n+1)/2))^(2/n)."""
    n = _check_dim(n)
    if n < 3:
        raise DomainError(f"sobolev_classical_form requires n >= 3, got {n}")
    area = 2.0 * math.pi ** ((n + 1) / 2.0) / math.gamma((n + 1) / 2.0)
    return n * (n - 2.0) / 4.0 * area ** (2.0 / n)


def green_coeff(n, s):
    """Coefficient of |x|^(-(n-2s)) in the kernel inverting (-Lap)^s on R^n."""
    n = _check_dim(n)
    if not (0.0 < s < n / 2.0):
        raise DomainError(f"green_coeff requires 0 < s < n/2, got {s}")
    return math.exp(
        -2.0 * s * math.log(2.0) - 0.5 * n * math.log(math.pi)
        + _LG((n - 2.0 * s) / 2.0) - _LG(s))


def duality_product(n, s):
    """sobolev_sharp_constant * green_coeff * hls_sharp_constant(n, n-2s); equals 1."""
    return (sobolev_sharp_constant(n, s) * green_coeff(n, s)
            * hls_sharp_constant(n, n - 2.0 * s))


def funk_hecke_kappa(n, l):
    """Normalization turning the 1-d kernel moment into the degree-l eigenvalue.

    2 for n = 1, l = 0; l for n = 1, l >= 1;
    (4 pi)^((n-1)/2) l! Gamma((n-1)/2) / (l+n-2)! for n >= 2.
    """
    n = _check_dim(n)
    if l < 0 or l != int(l):
        raise DomainError(f"funk_hecke_kappa requires an integer l >= 0, got {l}")
    l = int(l)
    if n == 1:
        return 2.0 if l == 0 else float(l)
    return math.exp(
        0.5 * (n - 1) * math.log(4.0 * math.pi)
        + _LG(l + 1.0) + _LG((n - 1) / 2.0) - _LG(l + n - 1.0))


def _kappa_n(n):
    # l-independent prefactor of the closed-form eigenvalues.
    if n == 1:
        return 2.0 * math.sqrt(math.pi)
    return math.exp(
        2.0 * (n - 1.0) * math.log(2.0) + 0.5 * (n - 1.0) * math.log(math.pi)
        + _LG((n - 1.0) / 2.0) + _LG(n / 2.0) - _LG(n - 1.0))


def eigenvalue_table(n, alpha, lmax):
    """Eigenvalues E_l of the kernel (1 - w.e)^(-alpha) for l = 0..lmax.

    Pochhammer form E_l = kappa_n 2^(-alpha) (alpha)_l Gamma(n/2-alpha) /
    Gamma(l+n-alpha), evaluated as E_0 times a running product of
    (alpha+j)/(n-alpha+j) so poles never appear and the values stay in
    range out to large l.  Valid for -1 < alpha < n/2.
    """
    n = _check_dim(n)
    if not (-1.0 < alpha < n / 2.0):
        raise DomainError(f"eigenvalue_table requires -1 < alpha < n/2, got {alpha}")
    if lmax < 0 or lmax != int(lmax):
        raise DomainError(f"eigenvalue_table requires an integer lmax >= 0, got {lmax}")
    lmax = int(lmax)
    e0 = _kappa_n(n) * math.exp(-alpha * math.log(2.0)
                                + _LG(n / 2.0 - alpha) - _LG(n - alpha))
    out = np.empty(lmax + 1)
    out[0] = e0
    if lmax >= 1:
        j = np.arange(lmax, dtype=np.float64)
        out[1:] = e0 * np.cumprod((alpha + j) / (n - alpha + j))
    return out


def eigenvalue_E(n, alpha, l):
    """Single eigenvalue E_l of the kernel (1 - w.e)^(-alpha) on S^n."""
    if l < 0 or l != int(l):
        raise DomainError(f"eigenvalue_E requires an integer l >= 0, got {l}")
    return float(eigenvalue_table(n, alpha, int(l))[int(l)])


@dataclass(frozen=True)
class SpectralKernel:
    """Kernel (1 - w.e)^(-alpha) on S^n with its eigenvalues through degree lmax."""

    n: int
    alpha: float
    eigenvalues: np.ndarray = field(repr=False)

    @property
    def lmax(self):
        return self.eigenvalues.shape[0] - 1


def spectral_kernel(n, alpha, lmax):
    ev = eigenvalue_table(n, alpha, lmax)
    ev.setflags(write=False)
    return SpectralKernel(n=_check_dim(n), alpha=float(alpha), eigenvalues=ev)


def funk_hecke_quadrature(n, kernel, l, num_nodes=200, singular_exponent=None):
    """Degree-l eigenvalue of a zonal kernel by 1-d quadrature.

    kappa(n, l) * int_{-1}^{1} K(t) G_l(t) (1-t^2)^((n-2)/2) dt with G_l the
    degree-l zonal basis.  Smooth kernels use the Gauss rule for the zonal
    weight.  A kernel with a (1-t)^(-a) endpoint factor is declared via
    singular_exponent=a; the factor is absorbed into a Gauss-Jacobi weight
    (exponents ((n-2)/2 - a, (n-2)/2)) and only the smooth remainder
    K(t) (1-t)^a is sampled, so polynomial-times-smooth kernels are
    integrated essentially exactly.
    """
    n = _check_dim(n)
    if l < 0 or l != int(l):
        raise DomainError(f"funk_hecke_quadrature requires an integer l >= 0, got {l}")
    l = int(l)
    if singular_exponent is None:
        rule = gauss_gegenbauer_rule(n, num_nodes)
        t, w = rule.nodes, rule.weights
        vals = np.asarray(kernel(t), dtype=np.float64)
    else:
        a = float(singular_exponent)
        if not (a < n / 2.0):
            raise DomainError(
                f"singular exponent must satisfy a < n/2 for integrability, got {a}")
        t, w = gauss_jacobi_rule((n - 2) / 2.0 - a, (n - 2) / 2.0, num_nodes)
        vals = np.asarray(kernel(t), dtype=np.float64) * (1.0 - t) ** a
    basis = zonal_basis_table(n, l, t)[l]
    return funk_hecke_kappa(n, l) * float(np.sum(w * vals * basis))


def gegenbauer_integral(n, beta, l):
    """Closed form of int (1+t)^((n-2)/2) (1-t)^beta G_l(t) dt, beta > -1.

    G_l is the degree-l zonal basis on S^n.  Assembled pole-free: the
    alternating Gamma pair collapses to the Pochhammer (n/2-1-beta)_l and
    everything l-dependent becomes a running product of ratios.  The n = 1
    basis convention replaces the l!/(factorial) bookkeeping by 2/l.
    """
    n = _check_dim(n)
    if not beta > -1.0:
        raise DomainError(f"gegenbauer_integral requires beta > -1, got {beta}")
    if l < 0 or l != int(l):
        raise DomainError(f"gegenbauer_integral requires an integer l >= 0, got {l}")
    l = int(l)
    base = math.exp((0.5 * n + beta) * math.log(2.0)
                    + _LG(1.0 + beta) + _LG(0.5 * n) - _LG(0.5 * n + 1.0 + beta))
    if l == 0:
        return base
    j = np.arange(l, dtype=np.float64)
    if n == 1:
        ratio = (2.0 / l) * float(np.prod((-0.5 - beta + j) / (1.5 + beta + j)))
    else:
        ratio = float(np.prod((n - 1.0 + j) * (0.5 * n - 1.0 - beta + j)
                              / ((1.0 + j) * (0.5 * n + 1.0 + beta + j))))
    return base * ratio
