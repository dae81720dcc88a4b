"""p-th moments of the discrepancy over the shift torus."""

import math
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from discrepancy import disc_many, shift_grid
from latdisc.config import config
from latdisc.logger import get_logger
from latdisc.workers import run_cells
from lattice_counter import DomainKind, DomainSpec

logger = get_logger(__name__)

MIN_MC_SAMPLES = 100


class EstimatorKind(str, Enum):
    GRID = "grid"
    MONTE_CARLO = "mc"


class EstimatorSpec(BaseModel):
    """How shifts are drawn: the m x m uniform grid or seeded uniform samples."""

    model_config = ConfigDict(frozen=True)

    kind: EstimatorKind = EstimatorKind.GRID
    m: Optional[int] = None
    samples: Optional[int] = None
    seed: Optional[int] = None

    @model_validator(mode="after")
    def _check_size(self) -> "EstimatorSpec":
        if self.kind == EstimatorKind.GRID:
            if self.m is None or self.m < 1:
                raise ValueError(f"grid estimator needs m >= 1, got {self.m}")
            if self.samples is not None:
                raise ValueError("grid estimator takes no sample count")
        else:
            if self.samples is None or self.samples < MIN_MC_SAMPLES:
                raise ValueError(f"Monte Carlo estimator needs at least {MIN_MC_SAMPLES} samples, got {self.samples}")
            if self.seed is None:
                raise ValueError("Monte Carlo estimator needs a seed")
        return self

    @classmethod
    def grid(cls, m: Optional[int] = None) -> "EstimatorSpec":
        return cls(kind=EstimatorKind.GRID, m=int(m if m is not None else config.get("grid_m", 64)))

    @classmethod
    def monte_carlo(cls, samples: Optional[int] = None, seed: Optional[int] = None) -> "EstimatorSpec":
        return cls(
            kind=EstimatorKind.MONTE_CARLO,
            samples=int(samples if samples is not None else config.get("mc_samples", 4096)),
            seed=int(seed if seed is not None else config.get("seed", 20240101)),
        )

    @property
    def size(self) -> int:
        """m for the grid, the sample count for Monte Carlo."""
        return self.m if self.kind == EstimatorKind.GRID else self.samples

    @property
    def shift_count(self) -> int:
        return self.m * self.m if self.kind == EstimatorKind.GRID else self.samples

    def shifts(self) -> np.ndarray:
        if self.kind == EstimatorKind.GRID:
            return shift_grid(self.m)
        rng = np.random.default_rng(self.seed)
        return rng.random((self.samples, 2))


class MomentEstimate(BaseModel):
    """Estimate of the p-th moment of D for one (domain, R)."""

    model_config = ConfigDict(frozen=True)

    domain: DomainSpec
    R: float
    p: float = Field(ge=1.0)
    estimator: EstimatorSpec
    estimate: float = Field(ge=0.0)
    stderr: float = Field(default=0.0, ge=0.0)

    @property
    def t(self) -> Optional[float]:
        return self.domain.t if self.domain.kind == DomainKind.ANNULUS else None

    @property
    def lp_norm(self) -> float:
        return self.estimate ** (1.0 / self.p)


def _shift_block(domain: DomainSpec, R: float) -> int:
    rows = 2.0 * R * max(domain.axes) + 2.0 * (domain.t or 0.0) + 3.0
    chunk = int(config.get("shift_chunk_elements", 262144))
    return max(1, int(chunk // rows))


def discrepancy_values(
    domain: DomainSpec,
    R: float,
    estimator: EstimatorSpec,
    workers: int = 1,
) -> np.ndarray:
    """D at every shift of the estimator, in shift order.

    Shifts are split into fixed blocks that do not depend on ``workers``.
    """
    shifts = estimator.shifts()
    block = _shift_block(domain, R)
    cells = [shifts[i:i + block] for i in range(0, shifts.shape[0], block)]
    parts = run_cells(lambda s: disc_many(domain, R, s), cells, workers=workers)
    logger.debug(f"{domain.label} R={R}: {shifts.shape[0]} shifts in {len(cells)} blocks")
    return np.concatenate(parts)


def moment_from_values(values: np.ndarray, p: float, estimator: EstimatorSpec) -> Tuple[float, float]:
    """(mean of |D|^p, standard error); the standard error is 0 for the grid."""
    if not p >= 1.0:
        raise ValueError(f"moment exponent p must be >= 1, got {p}")
    powered = np.abs(values) ** float(p)
    estimate = math.fsum(powered) / powered.size
    if estimator.kind == EstimatorKind.GRID:
        return estimate, 0.0
    stderr = float(np.std(powered, ddof=1)) / math.sqrt(powered.size)
    return estimate, stderr


def moment_estimate(
    domain: DomainSpec,
    R: float,
    p: float,
    estimator: Optional[EstimatorSpec] = None,
    workers: int = 1,
) -> MomentEstimate:
    """p-th moment of D(domain, ., R) by grid quadrature or Monte Carlo.

    Raises:
        ValueError: for p < 1 and anything the counter rejects.
    """
    estimator = estimator or EstimatorSpec.grid()
    if not p >= 1.0:
        raise ValueError(f"moment exponent p must be >= 1, got {p}")
    values = discrepancy_values(domain, R, estimator, workers)
    estimate, stderr = moment_from_values(values, p, estimator)
    return MomentEstimate(
        domain=domain,
        R=float(R),
        p=float(p),
        estimator=estimator,
        estimate=estimate,
        stderr=stderr,
    )
