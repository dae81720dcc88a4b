"""Domain models for lattice-point counting."""

import math
from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

MAX_RADIUS = float(2 ** 25)
MAX_SEMI_AXIS = float(2 ** 10)


class DomainKind(str, Enum):
    """Shapes the counter understands."""
    DISK = "disk"
    ELLIPSE = "ellipse"
    ANNULUS = "annulus"


class Boundary(str, Enum):
    """Whether lattice points exactly on the boundary are counted."""
    CLOSED = "closed"
    OPEN = "open"


class ShiftVec(BaseModel):
    """A point of the torus; both components are reduced modulo 1."""

    model_config = ConfigDict(frozen=True)

    x1: float = 0.0
    x2: float = 0.0

    @field_validator("x1", "x2")
    @classmethod
    def _reduce(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError(f"shift component must be finite, got {value}")
        reduced = value % 1.0
        # tiny negatives reduce to exactly 1.0
        return 0.0 if reduced >= 1.0 else reduced

    def as_tuple(self) -> Tuple[float, float]:
        return (self.x1, self.x2)

    @classmethod
    def parse(cls, text: str) -> "ShiftVec":
        """Parse ``"x1,x2"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 2:
            raise ValueError(f"shift must look like 'x1,x2', got {text!r}")
        return cls(x1=float(parts[0]), x2=float(parts[1]))


class DomainSpec(BaseModel):
    """Which region is counted and how its boundary is treated.

    Ellipse semi-axes are ``a`` (first coordinate) and ``b`` (second).
    Annulus ``t`` is the half-thickness of the ring R - t <= |y| <= R + t.
    """

    model_config = ConfigDict(frozen=True)

    kind: DomainKind = DomainKind.DISK
    a: Optional[float] = None
    b: Optional[float] = None
    t: Optional[float] = None
    boundary: Boundary = Boundary.CLOSED

    @model_validator(mode="after")
    def _check_parameters(self) -> "DomainSpec":
        if self.kind == DomainKind.ELLIPSE:
            for name, value in (("a", self.a), ("b", self.b)):
                if value is None or not math.isfinite(value) or not 0.0 < value <= MAX_SEMI_AXIS:
                    raise ValueError(f"ellipse semi-axis {name} must be in (0, 2^10], got {value}")
            if self.t is not None:
                raise ValueError("ellipse takes no t")
        elif self.kind == DomainKind.ANNULUS:
            if self.t is None or not math.isfinite(self.t) or not 0.0 < self.t < 1.0:
                raise ValueError(f"annulus half-thickness t must be in (0, 1), got {self.t}")
            if self.a is not None or self.b is not None:
                raise ValueError("annulus takes no semi-axes")
        else:
            if self.a is not None or self.b is not None or self.t is not None:
                raise ValueError("disk takes no parameters")
        return self

    @classmethod
    def disk(cls, boundary: Boundary = Boundary.CLOSED) -> "DomainSpec":
        return cls(kind=DomainKind.DISK, boundary=boundary)

    @classmethod
    def ellipse(cls, a: float, b: float, boundary: Boundary = Boundary.CLOSED) -> "DomainSpec":
        return cls(kind=DomainKind.ELLIPSE, a=a, b=b, boundary=boundary)

    @classmethod
    def annulus(cls, t: float, boundary: Boundary = Boundary.CLOSED) -> "DomainSpec":
        return cls(kind=DomainKind.ANNULUS, t=t, boundary=boundary)

    @classmethod
    def parse(cls, text: str, boundary: Boundary = Boundary.CLOSED) -> "DomainSpec":
        """Parse the CLI forms ``disk``, ``ellipse:a,b`` and ``annulus:t``."""
        name, _, params = text.strip().partition(":")
        name = name.lower()
        try:
            if name == DomainKind.DISK.value and not params:
                return cls.disk(boundary)
            if name == DomainKind.ELLIPSE.value:
                a, b = (float(v) for v in params.split(","))
                return cls.ellipse(a, b, boundary)
            if name == DomainKind.ANNULUS.value:
                return cls.annulus(float(params), boundary)
        except (TypeError, ValueError) as e:
            raise ValueError(f"bad domain {text!r}: {e}") from e
        raise ValueError(f"unknown domain {text!r}; expected disk, ellipse:a,b or annulus:t")

    @property
    def label(self) -> str:
        """Canonical text form, the inverse of :meth:`parse`."""
        if self.kind == DomainKind.ELLIPSE:
            return f"ellipse:{self.a!r},{self.b!r}"
        if self.kind == DomainKind.ANNULUS:
            return f"annulus:{self.t!r}"
        return "disk"

    @property
    def axes(self) -> Tuple[float, float]:
        """Semi-axes of the underlying quadratic form (1, 1 for disk and annulus)."""
        if self.kind == DomainKind.ELLIPSE:
            return (float(self.a), float(self.b))
        return (1.0, 1.0)

    def unit_area(self) -> float:
        """|Omega| for disk and ellipse."""
        if self.kind == DomainKind.ANNULUS:
            raise ValueError("annulus area is not an R^2 multiple; use measure()")
        a, b = self.axes
        return math.pi * a * b

    def measure(self, R: float) -> float:
        """Area of the scaled domain: pi R^2, pi a b R^2, or 4 pi R t."""
        if self.kind == DomainKind.ANNULUS:
            return 4.0 * math.pi * R * self.t
        return self.unit_area() * R * R

    def with_boundary(self, boundary: Boundary) -> "DomainSpec":
        return self.model_copy(update={"boundary": boundary})


class CountResult(BaseModel):
    """Lattice-point count of one (domain, R, shift)."""

    count: int = Field(ge=0)
    measure: float
    boundary_hits: int = Field(ge=0)
