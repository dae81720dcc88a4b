"""Log-log least-squares fits of moment tables."""

import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict

from latdisc.logger import get_logger
from .estimator import MomentEstimate
from .sweep import SweepTable

logger = get_logger(__name__)


class ScalingFit(BaseModel):
    """y = slope * log R + intercept fitted by ordinary least squares."""

    model_config = ConfigDict(frozen=True)

    p: float
    slope: float
    intercept: float
    stderr_slope: float
    r_squared: float
    residual_ss: float
    points: List[Tuple[float, float]]
    log_correction: bool = False
    reference_exponent: Optional[float] = None


def scaling_fit(
    table: Union[SweepTable, Sequence[MomentEstimate]],
    p: float,
    log_correction: bool = False,
    reference_exponent: Optional[float] = None,
) -> ScalingFit:
    """Fit log(moment) against log R for the cells with exponent p.

    ``log_correction`` fits log(moment / log R) instead, and
    ``reference_exponent`` s divides by R^s first, so a fit of
    moment / (R^s log R) with slope near 0 confirms that envelope.

    Raises:
        ValueError: with fewer than 3 distinct radii, non-positive estimates,
            or R <= 1 in log-correction mode.
    """
    estimates = table.estimates(p) if isinstance(table, SweepTable) else [e for e in table if e.p == p]
    radii = sorted({e.R for e in estimates})
    if len(radii) < 3:
        raise ValueError(f"scaling fit needs at least 3 distinct radii, got {len(radii)}")

    xs: List[float] = []
    ys: List[float] = []
    for e in sorted(estimates, key=lambda e: e.R):
        if not e.estimate > 0.0:
            raise ValueError(f"cannot fit a non-positive moment {e.estimate} at R={e.R}")
        x = math.log(e.R)
        y = math.log(e.estimate)
        if log_correction:
            if e.R <= 1.0:
                raise ValueError(f"log correction needs R > 1, got {e.R}")
            y -= math.log(x)
        if reference_exponent is not None:
            y -= reference_exponent * x
        xs.append(x)
        ys.append(y)

    x = np.array(xs)
    y = np.array(ys)
    design = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(design, y, rcond=None)
    residuals = y - (slope * x + intercept)
    residual_ss = math.fsum(residuals ** 2)
    if np.ptp(y) == 0.0:
        r_squared = 1.0
    else:
        ss_tot = math.fsum((y - y.mean()) ** 2)
        r_squared = min(1.0, max(0.0, 1.0 - residual_ss / ss_tot))
    sxx = math.fsum((x - x.mean()) ** 2)
    stderr_slope = math.sqrt(residual_ss / (x.size - 2) / sxx)

    fit = ScalingFit(
        p=float(p),
        slope=float(slope),
        intercept=float(intercept),
        stderr_slope=stderr_slope,
        r_squared=r_squared,
        residual_ss=residual_ss,
        points=list(zip(xs, ys)),
        log_correction=log_correction,
        reference_exponent=reference_exponent,
    )
    logger.info(f"Scaling fit p={p}: slope={fit.slope:.4f} +/- {stderr_slope:.4f}, r2={r_squared:.6f}")
    return fit
