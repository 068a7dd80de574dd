"""Sharp sphere-inequality toolkit: spectra, conformal maps, extremal search.

The package verifies the sharp Hardy-Littlewood-Sobolev and gradient-form
constants on the round sphere by independent numerical routes: closed-form
constants against quadrature, zonal kernels against their Funk-Hecke
spectra, conformal transport against invariance, and the fixed-point
search against the closed-form extremal family.
"""

from ._kernels import BACKEND
from .constants import (
    Params,
    duality_product,
    eigenvalue_E,
    eigenvalue_table,
    funk_hecke_quadrature,
    green_coeff,
    hls_sharp_constant,
    sobolev_sharp_constant,
)
from .errors import (
    DegenerateDirectionError,
    DomainError,
    IntegrationError,
    NoRootError,
    ResolutionWarning,
    UsageError,
)
from .extremal import (
    euler_lagrange_iterate,
    key_inequality_bilinear_check,
    key_margin,
    second_variation_hls,
    second_variation_sobolev,
)
from .geometry import ConformalMap, SpherePoint, stereo, stereo_inv, transport
from .normalize import ComResult, com_normalize, com_vector
from .zonal import (
    ZonalFn,
    conformal_energy,
    hls_bilinear,
    hls_extremal_family,
    hls_quotient,
    sobolev_extremal_family,
    sobolev_quotient,
    zonal_constant,
    zonal_from_callable,
    zonal_from_coeffs,
    zonal_from_values,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ComResult",
    "ConformalMap",
    "DegenerateDirectionError",
    "DomainError",
    "IntegrationError",
    "NoRootError",
    "Params",
    "ResolutionWarning",
    "SpherePoint",
    "UsageError",
    "ZonalFn",
    "com_normalize",
    "com_vector",
    "conformal_energy",
    "duality_product",
    "eigenvalue_E",
    "eigenvalue_table",
    "euler_lagrange_iterate",
    "funk_hecke_quadrature",
    "green_coeff",
    "hls_bilinear",
    "hls_extremal_family",
    "hls_quotient",
    "hls_sharp_constant",
    "key_inequality_bilinear_check",
    "key_margin",
    "second_variation_hls",
    "second_variation_sobolev",
    "sobolev_extremal_family",
    "sobolev_quotient",
    "sobolev_sharp_constant",
    "stereo",
    "stereo_inv",
    "transport",
    "zonal_constant",
    "zonal_from_callable",
    "zonal_from_coeffs",
    "zonal_from_values",
    "__version__",
]
