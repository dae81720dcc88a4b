"""Sandwich checks for the disk.

The mollified indicators squeeze the sharp one pointwise,

    chi_{(R-d) B} * phi_d <= chi_{R B} <= chi_{(R+d) B} * phi_d,

and summing over lattice points gives D_{-d} <= D <= D_{+d}. From that,
|D| <= max(|D_{-d}|, |D_{+d}|) and hence |D|^p <= |D_{-d}|^p + |D_{+d}|^p.
"""

import math
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from latdisc.config import config
from latdisc.logger import get_logger
from lattice_counter import DomainSpec, ShiftVec
from lattice_counter.lattice_counter import ShiftsLike, _as_shift_array
from special_functions import DEFAULT_BUMP, BumpSpec
from .discrepancy import disc_many
from .mollified import MollifiedParams, disc_mollified_parts, mollified_indicator

logger = get_logger(__name__)

POINTWISE_TOLERANCE = 1e-8
SUMMED_MARGIN_PER_POINT = 1e-6
POWER_FORMS = (2, 4)


class InequalityReport(BaseModel):
    """Violation counts of the summed sandwich and both p-th power forms."""

    model_config = ConfigDict(frozen=True)

    R: float
    delta: float
    shifts: int
    sandwich_violations: int
    stated_violations: Dict[int, int]
    max_form_violations: int
    max_band_points: int
    worst_excess: float

    @property
    def ok(self) -> bool:
        return (
            self.sandwich_violations == 0
            and self.max_form_violations == 0
            and not any(self.stated_violations.values())
        )


class SandwichReport(BaseModel):
    """Result of :func:`sandwich_check`."""

    model_config = ConfigDict(frozen=True)

    R: float
    delta: float
    shift: ShiftVec
    samples: int
    seed: int
    pointwise_violations: int
    worst_pointwise_excess: float
    d_lower: float
    d: float
    d_upper: float
    summed: InequalityReport

    @property
    def violations(self) -> int:
        return (
            self.pointwise_violations
            + self.summed.sandwich_violations
            + self.summed.max_form_violations
            + sum(self.summed.stated_violations.values())
        )


def sandwich_pointwise(
    R: float,
    delta: float,
    points: np.ndarray,
    quad_points: Optional[int] = None,
    bump: BumpSpec = DEFAULT_BUMP,
) -> np.ndarray:
    """(lower, sharp, upper) of the disk sandwich at each point, as an (n, 3) array."""
    if not 0.0 < delta < 1.0:
        raise ValueError(f"sandwich delta must be in (0, 1), got {delta}")
    if R - delta <= 0.0:
        raise ValueError(f"need R > delta, got R={R}, delta={delta}")
    quad = int(quad_points or config.get("quad_points", 64))
    disk = DomainSpec.disk()
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    lower = mollified_indicator(disk, R - delta, pts, delta, bump, quad)
    upper = mollified_indicator(disk, R + delta, pts, delta, bump, quad)
    sharp = (np.hypot(pts[:, 0], pts[:, 1]) <= R).astype(float)
    return np.column_stack([lower, sharp, upper])


def _ring_samples(R: float, delta: float, samples: int, seed: int) -> np.ndarray:
    """Uniform points in R - 2 delta <= |y| <= R + 2 delta."""
    rng = np.random.default_rng(seed)
    r_lo = max(R - 2.0 * delta, 0.0)
    r_hi = R + 2.0 * delta
    radius = np.sqrt(rng.uniform(r_lo * r_lo, r_hi * r_hi, samples))
    angle = rng.uniform(0.0, 2.0 * math.pi, samples)
    return np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])


def _summed(
    R: float,
    arr: np.ndarray,
    delta: float,
    quad: int,
    bump: BumpSpec,
    workers: int,
    powers: Sequence[int],
) -> Tuple[InequalityReport, np.ndarray, np.ndarray, np.ndarray]:
    disk = DomainSpec.disk()

    d = disc_many(disk, R, arr)
    d_lo, band_lo = disc_mollified_parts(
        disk, R, arr, MollifiedParams(delta=-delta, bump=bump, quad_points=quad), workers
    )
    d_hi, band_hi = disc_mollified_parts(
        disk, R, arr, MollifiedParams(delta=delta, bump=bump, quad_points=quad), workers
    )
    margin = SUMMED_MARGIN_PER_POINT * np.maximum(band_lo + band_hi, 1)

    below = d_lo - d
    above = d - d_hi
    sandwich_bad = (below > margin) | (above > margin)

    bound = np.maximum(np.abs(d_lo), np.abs(d_hi))
    max_excess = np.abs(d) - bound
    stated: Dict[int, int] = {}
    worst = float(max(below.max(initial=-np.inf), above.max(initial=-np.inf), max_excess.max(initial=-np.inf)))
    for p in powers:
        lhs = np.abs(d) ** p
        rhs = np.abs(d_lo) ** p + np.abs(d_hi) ** p
        # margin scaled by the derivative of x^p at the bound
        tol = p * np.maximum(bound, 1.0) ** (p - 1) * margin
        stated[int(p)] = int(np.count_nonzero(lhs - rhs > tol))

    report = InequalityReport(
        R=R,
        delta=delta,
        shifts=int(arr.shape[0]),
        sandwich_violations=int(np.count_nonzero(sandwich_bad)),
        stated_violations=stated,
        max_form_violations=int(np.count_nonzero(max_excess > margin)),
        max_band_points=int(max(band_lo.max(initial=0), band_hi.max(initial=0))),
        worst_excess=worst,
    )
    if not report.ok:
        logger.warning(f"mollification inequality violated at R={R}, delta={delta}: {report}")
    return report, d, d_lo, d_hi


def mollification_inequality_check(
    R: float,
    shifts: ShiftsLike,
    delta: Optional[float] = None,
    quad_points: Optional[int] = None,
    bump: BumpSpec = DEFAULT_BUMP,
    workers: int = 1,
    powers: Sequence[int] = POWER_FORMS,
) -> InequalityReport:
    """Summed sandwich and p-th power inequalities for the disk over many shifts.

    ``delta`` defaults to R^(-1/2). Margins are 1e-6 per band point.
    """
    R = float(R)
    delta = float(delta if delta is not None else R ** -0.5)
    quad = int(quad_points or config.get("quad_points", 64))
    report, _, _, _ = _summed(R, _as_shift_array(shifts), delta, quad, bump, workers, powers)
    return report


def sandwich_check(
    R: float,
    shift: Optional[ShiftVec] = None,
    delta: Optional[float] = None,
    samples: int = 10000,
    seed: Optional[int] = None,
    quad_points: Optional[int] = None,
    bump: BumpSpec = DEFAULT_BUMP,
) -> SandwichReport:
    """Pointwise sandwich at seeded samples near the circle plus the summed forms at ``shift``.

    Raises:
        ValueError: for samples < 1 or a delta outside (0, 1).
    """
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    R = float(R)
    shift = shift or ShiftVec()
    delta = float(delta if delta is not None else R ** -0.5)
    seed = int(seed if seed is not None else config.get("seed", 20240101))

    points = _ring_samples(R, delta, samples, seed)
    values = sandwich_pointwise(R, delta, points, quad_points, bump)
    lower, sharp, upper = values[:, 0], values[:, 1], values[:, 2]
    excess = np.maximum(lower - sharp, sharp - upper)
    bad = int(np.count_nonzero(excess > POINTWISE_TOLERANCE))

    quad = int(quad_points or config.get("quad_points", 64))
    summed, d, d_lo, d_hi = _summed(
        R, np.array([shift.as_tuple()]), delta, quad, bump, 1, POWER_FORMS
    )

    logger.info(
        f"sandwich R={R} delta={delta}: {bad} pointwise violations over {samples} samples, "
        f"D_-={d_lo[0]:.6g} D={d[0]:.6g} D_+={d_hi[0]:.6g}"
    )
    return SandwichReport(
        R=R,
        delta=delta,
        shift=shift,
        samples=samples,
        seed=seed,
        pointwise_violations=bad,
        worst_pointwise_excess=float(excess.max()),
        d_lower=float(d_lo[0]),
        d=float(d[0]),
        d_upper=float(d_hi[0]),
        summed=summed,
    )
