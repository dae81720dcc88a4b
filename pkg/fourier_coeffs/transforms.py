"""Fourier transforms of disk and annulus indicators.

The transform of the disk of radius R is (R/|xi|) J1(2 pi R |xi|), which is
also the n-th Fourier coefficient of D(disk, ., R) on the shift torus for
n != 0. The annulus is the difference of two disks.
"""

import math
from typing import Iterable, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from latdisc.logger import get_logger
from special_functions import bessel_j

logger = get_logger(__name__)

Frequency = Union[Tuple[float, float], Sequence[float], np.ndarray]


def _radius(xi: Frequency) -> Union[float, np.ndarray]:
    arr = np.asarray(xi, dtype=float)
    if arr.shape[-1:] != (2,):
        raise ValueError(f"frequency must be a pair or an (n, 2) array, got shape {arr.shape}")
    rho = np.hypot(arr[..., 0], arr[..., 1])
    if np.any(rho == 0.0):
        raise ValueError("frequency xi = 0 is excluded; the zero coefficient is the area")
    if np.any(~np.isfinite(rho)):
        raise ValueError("frequency must be finite")
    return float(rho) if rho.ndim == 0 else rho


def chi_hat_disk_radial(R: float, rho: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """(R/rho) J1(2 pi R rho) for radial frequencies rho > 0."""
    r = np.asarray(rho, dtype=float)
    if np.any(r <= 0.0):
        raise ValueError("radial frequency must be positive")
    value = (R / r) * bessel_j(1, 2.0 * math.pi * R * r)
    return float(value) if np.ndim(value) == 0 else value


def chi_hat_disk(R: float, xi: Frequency) -> Union[float, np.ndarray]:
    """Fourier transform of the disk of radius R at xi != 0.

    Raises:
        ValueError: if xi = 0 or R is not positive.
    """
    if not R > 0:
        raise ValueError(f"disk radius must be positive, got {R}")
    return chi_hat_disk_radial(R, _radius(xi))


def _check_annulus(R: float, t: float) -> None:
    if not (math.isfinite(R) and math.isfinite(t)) or not 0.0 < t < R:
        raise ValueError(f"annulus needs 0 < t < R, got R={R}, t={t}")


def chi_hat_annulus_radial(R: float, t: float, rho: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    _check_annulus(R, t)
    return chi_hat_disk_radial(R + t, rho) - chi_hat_disk_radial(R - t, rho)


def chi_hat_annulus_exact(R: float, t: float, xi: Frequency) -> Union[float, np.ndarray]:
    """Transform of R - t <= |y| <= R + t as a difference of disk transforms."""
    _check_annulus(R, t)
    return chi_hat_annulus_radial(R, t, _radius(xi))


def chi_hat_annulus_asymptotic_radial(R: float, t: float, rho: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    _check_annulus(R, t)
    r = np.asarray(rho, dtype=float)
    value = (
        (2.0 / math.pi) * math.sqrt(R) * r ** -1.5
        * np.sin(-2.0 * math.pi * R * r + 0.75 * math.pi)
        * np.sin(2.0 * math.pi * t * r)
    )
    return float(value) if np.ndim(value) == 0 else value


def chi_hat_annulus_asymptotic(R: float, t: float, xi: Frequency) -> Union[float, np.ndarray]:
    """Leading term (2/pi) R^(1/2) |xi|^(-3/2) sin(-2 pi R|xi| + 3 pi/4) sin(2 pi t|xi|)."""
    _check_annulus(R, t)
    return chi_hat_annulus_asymptotic_radial(R, t, _radius(xi))


class AsymptoticReport(BaseModel):
    """Fit of |exact - asymptotic| <= C t R^(-1/2) |xi|^(-3/2) over a sweep."""

    model_config = ConfigDict(frozen=True)

    constant: float
    sign_agreement: float
    sign_compared: int
    samples: int


def annulus_asymptotic_report(
    radii: Iterable[float],
    thicknesses: Iterable[float],
    frequencies: np.ndarray,
) -> AsymptoticReport:
    """Fitted error constant and sign agreement of the asymptotic annulus transform.

    Signs are compared only where the asymptotic term exceeds twice the
    fitted error envelope.
    """
    rho = np.asarray(frequencies, dtype=float)
    cells = []
    for R in radii:
        for t in thicknesses:
            exact = chi_hat_annulus_radial(R, t, rho)
            approx = chi_hat_annulus_asymptotic_radial(R, t, rho)
            envelope = t * R ** -0.5 * rho ** -1.5
            cells.append((exact, approx, envelope))

    constant = max(float(np.max(np.abs(e - a) / env)) for e, a, env in cells)
    agree = 0
    compared = 0
    for exact, approx, envelope in cells:
        clear = np.abs(approx) > 2.0 * constant * envelope
        compared += int(np.count_nonzero(clear))
        agree += int(np.count_nonzero(np.sign(exact[clear]) == np.sign(approx[clear])))
    fraction = agree / compared if compared else 1.0
    logger.debug(f"annulus asymptotic: C={constant:.4g}, signs {agree}/{compared}")
    return AsymptoticReport(
        constant=constant,
        sign_agreement=fraction,
        sign_compared=compared,
        samples=len(cells) * rho.size,
    )


def lattice_shells(N: int, include_zero: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """Distinct squared norms k = |n|^2 <= N^2 of integer n and their multiplicities r2(k)."""
    if N < 0:
        raise ValueError(f"truncation radius must be nonnegative, got {N}")
    axis = np.arange(-N, N + 1, dtype=np.int64)
    squares = axis[:, None] ** 2 + axis[None, :] ** 2
    squares = squares[squares <= N * N]
    if not include_zero:
        squares = squares[squares > 0]
    return np.unique(squares, return_counts=True)
