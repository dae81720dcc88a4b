"""Parseval and Hausdorff–Young cross-checks between coefficients and shift-grid moments."""

import math
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from discrepancy import MollifiedParams, disc_many, disc_mollified_many, shift_grid
from latdisc.config import config
from latdisc.logger import get_logger
from lattice_counter import DomainSpec
from special_functions import DEFAULT_BUMP, BumpSpec
from .coefficients import b_delta_table
from .transforms import chi_hat_annulus_radial, chi_hat_disk_radial, lattice_shells

logger = get_logger(__name__)


class ParsevalMode(str, Enum):
    ANNULUS_M2 = "annulus_m2"
    MOLLIFIED_M4 = "mollified_m4"


class ParsevalReport(BaseModel):
    """Coefficient-side sum against the grid quadrature of the same moment."""

    model_config = ConfigDict(frozen=True)

    mode: ParsevalMode
    R: float
    param: float
    trunc_N: int
    grid_m: int
    coefficient_side: float
    grid_side: float
    relative_gap: float
    tail_estimate: float


class HausdorffYoungReport(BaseModel):
    """||D||_p measured on the grid against (sum |c_n|^q)^(1/q)."""

    model_config = ConfigDict(frozen=True)

    R: float
    t: float
    p: float
    q: float
    trunc_N: int
    grid_m: int
    measured_norm: float
    coefficient_norm: float
    satisfied: bool
    coefficient_sum_converges: bool


def truncated_energy(R: float, trunc_N: int, t: Optional[float] = None) -> float:
    """sum_{0 < |n| <= N} |chi-hat(n)|^2 for the disk of radius R, or the annulus when t is given."""
    k, counts = lattice_shells(trunc_N)
    if k.size == 0:
        return 0.0
    rho = np.sqrt(k.astype(float))
    if t is None:
        values = chi_hat_disk_radial(R, rho)
    else:
        values = chi_hat_annulus_radial(R, t, rho)
    return math.fsum(counts * np.asarray(values) ** 2)


def _check_grid(trunc_N: int, grid_m: int) -> None:
    if trunc_N < 1:
        raise ValueError(f"trunc_N must be positive, got {trunc_N}")
    if grid_m < 2 * trunc_N:
        raise ValueError(f"grid_m must be at least 2 * trunc_N to avoid aliasing, got {grid_m} < {2 * trunc_N}")


def _gap(coef: float, grid: float) -> float:
    return abs(coef - grid) / abs(grid) if grid else float("inf")


def parseval_check(
    mode: ParsevalMode,
    R: float,
    t_or_delta: float,
    trunc_N: int,
    grid_m: int,
    quad_points: Optional[int] = None,
    bump: BumpSpec = DEFAULT_BUMP,
    workers: int = 1,
) -> ParsevalReport:
    """Compare a truncated coefficient energy with the grid moment it equals in the limit.

    ``annulus_m2``: sum_{0<|n|<=N} |chi-hat_A(n)|^2 against the grid mean of
    D(A)^2, tail ~ 2R/(pi N). ``mollified_m4``: sum |b_{delta,n}|^2 against
    the grid mean of D_delta^4 for the disk, tail ~ pi R^4 / (2 N^4).

    Raises:
        ValueError: if grid_m < 2 * trunc_N or the parameters are out of range.
    """
    mode = ParsevalMode(mode)
    R = float(R)
    _check_grid(trunc_N, grid_m)
    grid = shift_grid(grid_m)

    if mode == ParsevalMode.ANNULUS_M2:
        t = float(t_or_delta)
        domain = DomainSpec.annulus(t)
        coef = truncated_energy(R, trunc_N, t)
        values = disc_many(domain, R, grid)
        grid_side = math.fsum(values * values) / grid.shape[0]
        tail = 2.0 * R / (math.pi * trunc_N)
    else:
        delta = float(t_or_delta)
        table = b_delta_table(R, delta, trunc_N, 2 * trunc_N, bump, workers)
        coef = table.energy()
        params = MollifiedParams(
            delta=delta,
            bump=bump,
            quad_points=int(quad_points or config.get("quad_points", 64)),
        )
        values = disc_mollified_many(DomainSpec.disk(), R, grid, params, workers)
        grid_side = math.fsum(values ** 4) / grid.shape[0]
        tail = math.pi * R ** 4 / (2.0 * trunc_N ** 4)

    report = ParsevalReport(
        mode=mode,
        R=R,
        param=float(t_or_delta),
        trunc_N=trunc_N,
        grid_m=grid_m,
        coefficient_side=coef,
        grid_side=grid_side,
        relative_gap=_gap(coef, grid_side),
        tail_estimate=tail,
    )
    logger.info(
        f"parseval {mode.value}: R={R}, coef={coef:.6g}, grid={grid_side:.6g}, gap={report.relative_gap:.3%}"
    )
    return report


def hausdorff_young_check(
    R: float,
    t: float,
    p: float,
    trunc_N: int,
    grid_m: int,
) -> HausdorffYoungReport:
    """||D(A)||_{L^p} <= ||c||_{l^q} with 1/p + 1/q = 1, for p >= 2.

    The coefficient sum over all n converges only for p < 4; truncation
    makes the coefficient side a lower estimate of the true bound.
    """
    if not p >= 2.0:
        raise ValueError(f"Hausdorff-Young check needs p >= 2, got {p}")
    _check_grid(trunc_N, grid_m)
    q = p / (p - 1.0)
    values = disc_many(DomainSpec.annulus(t), R, shift_grid(grid_m))
    measured = (math.fsum(np.abs(values) ** p) / values.size) ** (1.0 / p)

    k, counts = lattice_shells(trunc_N)
    coeffs = np.abs(chi_hat_annulus_radial(R, t, np.sqrt(k.astype(float))))
    coefficient_norm = math.fsum(counts * coeffs ** q) ** (1.0 / q)
    return HausdorffYoungReport(
        R=float(R),
        t=float(t),
        p=float(p),
        q=q,
        trunc_N=trunc_N,
        grid_m=grid_m,
        measured_norm=measured,
        coefficient_norm=coefficient_norm,
        satisfied=measured <= coefficient_norm,
        coefficient_sum_converges=p < 4.0,
    )
