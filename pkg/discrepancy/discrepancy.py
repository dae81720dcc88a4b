"""Discrepancy D = lattice count - area for disks, ellipses and annuli."""

import math
from fractions import Fraction
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from latdisc.logger import get_logger
from lattice_counter import (
    DomainSpec,
    ShiftVec,
    count,
    count_many,
    gauss_n_from_square,
)
from lattice_counter.lattice_counter import ShiftsLike

logger = get_logger(__name__)


class DiscrepancySample(BaseModel):
    """One evaluation of D at (domain, R, shift)."""

    model_config = ConfigDict(frozen=True)

    domain: DomainSpec
    R: float
    shift: ShiftVec
    count: int
    measure: float
    value: float


def disc(domain: DomainSpec, R: float, shift: Optional[ShiftVec] = None) -> DiscrepancySample:
    """D(domain, shift, R).

    For annuli R and t enter directly and the area is 4 pi R t.
    """
    shift = shift or ShiftVec()
    result = count(domain, R, shift)
    # count is exact in a double, so this is a single rounding
    value = float(result.count) - result.measure
    return DiscrepancySample(
        domain=domain,
        R=float(R),
        shift=shift,
        count=result.count,
        measure=result.measure,
        value=value,
    )


def disc_many(domain: DomainSpec, R: float, shifts: ShiftsLike) -> np.ndarray:
    """D for every shift in an (n, 2) array, in input order."""
    counts, _ = count_many(domain, R, shifts)
    return counts.astype(float) - domain.measure(float(R))


def disc_annulus_identity_residual(R: float, t: float, shift: Optional[ShiftVec] = None) -> float:
    """D(A, R, t) - [D(disk, R + t) - D(disk, R - t)] for closed sets.

    The area terms cancel identically (4 pi R t = pi (R+t)^2 - pi (R-t)^2), so
    the residual is the integer number of lattice points on the inner circle.

    Raises:
        ValueError: if R - t < 1.
    """
    if R - t < 1.0:
        raise ValueError(f"identity residual needs R - t >= 1, got R={R}, t={t}")
    shift = shift or ShiftVec()
    ring = count(DomainSpec.annulus(t), R, shift).count
    outer = count(DomainSpec.disk(), R + t, shift).count
    inner = count(DomainSpec.disk(), R - t, shift).count
    residual = ring - (outer - inner)
    if residual:
        logger.debug(f"identity residual {residual} at R={R}, t={t}, shift={shift.as_tuple()}")
    return float(residual)


def shift_grid(m: int) -> np.ndarray:
    """The m x m uniform grid {(i/m, j/m)} as an (m^2, 2) array, row-major."""
    if m < 1:
        raise ValueError(f"grid size m must be >= 1, got {m}")
    axis = np.arange(m, dtype=float) / m
    x1, x2 = np.meshgrid(axis, axis, indexing="ij")
    return np.column_stack([x1.ravel(), x2.ravel()])


def grid_mean_exact(R: float, m: int) -> float:
    """Exact mean of D(disk, x, R) over the m x m shift grid.

    Summing the closed-disk count over the grid counts the points of
    (1/m) Z^2 in the disk once each, so the mean is (N(mR) - pi (mR)^2) / m^2.
    """
    if m < 1:
        raise ValueError(f"grid size m must be >= 1, got {m}")
    square = Fraction(R) ** 2 * m * m
    n_mr = gauss_n_from_square(square)
    return float(Fraction(n_mr, m * m)) - math.pi * float(R) ** 2


def grid_mean(domain: DomainSpec, R: float, m: int) -> float:
    """Mean of D over the m x m shift grid, summed with fsum."""
    values = disc_many(domain, R, shift_grid(m))
    return math.fsum(values) / (m * m)
