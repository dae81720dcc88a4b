"""Run configuration and cache record models."""

import math
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from lattice_counter import Boundary, DomainSpec, ShiftVec


class Command(str, Enum):
    COUNT = "count"
    DISC = "disc"
    MOMENT = "moment"
    SWEEP = "sweep"
    FOURIER = "fourier"
    ENVELOPE = "envelope"
    FIGURES = "figures"
    HISTOGRAM = "histogram"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class FourierKind(str, Enum):
    CHI = "chi"
    A = "a"
    B = "b"
    PARSEVAL = "parseval"
    HAUSDORFF_YOUNG = "hausdorff-young"


# Fields that never change emitted values; they stay out of the header echo.
_NOT_ECHOED = {"workers", "out", "cache", "verify_cache", "log_level", "reproducible"}


class RunConfig(BaseModel):
    """Everything one CLI invocation needs."""

    model_config = ConfigDict(frozen=True)

    command: Command
    domain: str = "disk"
    boundary: Boundary = Boundary.CLOSED
    radius: Optional[float] = None
    r_min: Optional[float] = None
    r_max: Optional[float] = None
    r_steps: int = Field(default=8, ge=1)
    shift: Optional[Tuple[float, float]] = None
    grid: Optional[int] = None
    mc: Optional[int] = None
    p: List[float] = Field(default_factory=lambda: [2.0])
    theta: Optional[float] = None
    epsilon: Optional[float] = None
    alpha: Optional[float] = None
    trunc_n: int = Field(default=64, ge=1)
    conv_n: Optional[int] = None
    delta: Optional[float] = None
    kind: FourierKind = FourierKind.CHI
    fig: Optional[int] = None
    samples: Optional[int] = None
    workers: int = Field(default=1, ge=1)
    output_format: OutputFormat = OutputFormat.CSV
    out: Optional[str] = None
    cache: Optional[str] = None
    verify_cache: bool = False
    seed: int = 20240101
    reproducible: bool = False
    log_level: Optional[str] = None

    @field_validator("domain")
    @classmethod
    def _canonical_domain(cls, value: str) -> str:
        return DomainSpec.parse(value).label

    @field_validator("shift")
    @classmethod
    def _reduce_shift(cls, value: Optional[Tuple[float, float]]) -> Optional[Tuple[float, float]]:
        if value is None:
            return None
        return ShiftVec(x1=value[0], x2=value[1]).as_tuple()

    @model_validator(mode="after")
    def _check_estimator(self) -> "RunConfig":
        if self.grid is not None and self.mc is not None:
            raise ValueError("choose either --grid or --mc, not both")
        if self.fig is not None and self.fig not in (2, 3):
            raise ValueError(f"--fig must be 2 or 3, got {self.fig}")
        return self

    def domain_spec(self) -> DomainSpec:
        return DomainSpec.parse(self.domain, self.boundary)

    def shift_vec(self) -> ShiftVec:
        """--shift, or the origin when none was given."""
        if self.shift is None:
            return ShiftVec(x1=0.0, x2=0.0)
        return ShiftVec(x1=self.shift[0], x2=self.shift[1])

    def radii(self) -> List[float]:
        """--radius alone, or a geometric ladder from --r-min to --r-max."""
        if self.radius is not None:
            return [float(self.radius)]
        if self.r_min is None or self.r_max is None:
            raise ValueError(f"{self.command.value} needs --radius or both --r-min and --r-max")
        if not 0.0 < self.r_min <= self.r_max or not math.isfinite(self.r_max):
            raise ValueError(f"need 0 < r_min <= r_max, got {self.r_min}, {self.r_max}")
        if self.r_steps == 1:
            return [float(self.r_min)]
        return [float(r) for r in np.geomspace(self.r_min, self.r_max, self.r_steps)]

    def echo(self) -> Dict[str, Any]:
        """Config fields that determine the emitted values."""
        return self.model_dump(mode="json", exclude=_NOT_ECHOED)


class CacheRecord(BaseModel):
    """One JSON-lines entry of the result cache."""

    model_config = ConfigDict(frozen=True)

    key: str
    value: Any
    created_at: str
    checksum: str
