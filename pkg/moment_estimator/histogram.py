"""Distribution of raw annulus counts over random shifts."""

import math
from typing import Dict, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.stats import poisson

from latdisc.config import config
from latdisc.logger import get_logger
from latdisc.workers import run_cells
from lattice_counter import DomainSpec, count_many

logger = get_logger(__name__)

MIN_HISTOGRAM_SHIFTS = 1000
_SHIFTS_PER_CELL = 8192


class CountHistogram(BaseModel):
    """Empirical count distribution and its distance to Poisson(area)."""

    model_config = ConfigDict(frozen=True)

    R: float
    t: float
    shifts: int
    seed: int
    frequencies: Dict[int, int]
    area: float
    mean: float
    variance: float
    stderr: float
    poisson_tv: float

    def probabilities(self) -> Dict[int, float]:
        return {k: v / self.shifts for k, v in self.frequencies.items()}


def count_histogram(
    R: float,
    t: float,
    shifts: int = 10000,
    seed: Optional[int] = None,
    workers: int = 1,
) -> CountHistogram:
    """Histogram of #(Z^2 in A(R, t) - x) for seeded uniform x.

    The total-variation distance to Poisson(4 pi R t) is exploratory output;
    nothing is asserted about it.

    Raises:
        ValueError: if shifts < 1000 or the annulus is invalid.
    """
    if shifts < MIN_HISTOGRAM_SHIFTS:
        raise ValueError(f"count histogram needs at least {MIN_HISTOGRAM_SHIFTS} shifts, got {shifts}")
    seed = int(seed if seed is not None else config.get("seed", 20240101))
    domain = DomainSpec.annulus(t)
    rng = np.random.default_rng(seed)
    points = rng.random((shifts, 2))

    cells = [points[i:i + _SHIFTS_PER_CELL] for i in range(0, shifts, _SHIFTS_PER_CELL)]
    parts = run_cells(lambda s: count_many(domain, R, s)[0], cells, workers=workers)
    counts = np.concatenate(parts)

    binned = np.bincount(counts)
    empirical = binned / shifts
    support = np.arange(binned.size)
    area = domain.measure(float(R))
    pmf = poisson.pmf(support, area)
    tv = 0.5 * (math.fsum(np.abs(empirical - pmf)) + float(poisson.sf(binned.size - 1, area)))

    mean = math.fsum(counts) / shifts
    variance = float(np.var(counts, ddof=1))
    histogram = CountHistogram(
        R=float(R),
        t=float(t),
        shifts=shifts,
        seed=seed,
        frequencies={int(k): int(v) for k, v in zip(support, binned) if v},
        area=area,
        mean=mean,
        variance=variance,
        stderr=math.sqrt(variance / shifts),
        poisson_tv=tv,
    )
    logger.info(f"Count histogram R={R}, t={t}: mean={mean:.4f} (area {area:.4f}), TV={tv:.4f}")
    return histogram
