"""Special functions used by the discrepancy kernels.

Bessel J0/J1, the bump mollifier with its radial Fourier transform, and the
Gauss–Legendre rules they are integrated with.
"""

from .bessel import bessel_j, bessel_j1_asymptotic, bessel_j1_zero, bessel_j0_zero_estimate
from .bump import (
    BumpProfile,
    BumpSpec,
    DEFAULT_BUMP,
    bump_fourier,
    bump_fourier_many,
    bump_normalization,
    bump_normalization_closed_form,
    bump_profile,
)
from .quadrature import composite_nodes, gauss_legendre, integrate_adaptive, integrate_panels

__all__ = [
    'bessel_j',
    'bessel_j1_asymptotic',
    'bessel_j1_zero',
    'bessel_j0_zero_estimate',
    'BumpProfile',
    'BumpSpec',
    'DEFAULT_BUMP',
    'bump_fourier',
    'bump_fourier_many',
    'bump_normalization',
    'bump_normalization_closed_form',
    'bump_profile',
    'composite_nodes',
    'gauss_legendre',
    'integrate_adaptive',
    'integrate_panels',
]
