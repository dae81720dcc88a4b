"""Measured moments against the theoretical envelopes they should respect.

Ring (annulus) envelopes use the hypothesis |D(disk, x, R)| <~ R^theta and
split into three regimes by comparing R^(1 - 2 theta) with t. Convex-domain
envelopes apply to disks and ellipses.
"""

import math
from collections import defaultdict
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from latdisc.config import config
from latdisc.logger import get_logger
from lattice_counter import DomainKind
from .estimator import MomentEstimate
from .sweep import SweepTable

logger = get_logger(__name__)

CLASSICAL_THETA = 2.0 / 3.0
BOUNDARY_TOLERANCE = 0.01
BOUNDED_SPREAD = 4.0
_T_MATCH = 1e-9


class TRuleKind(str, Enum):
    FIXED = "fixed"
    POWER_LAW = "power_law"


class TRule(BaseModel):
    """Annulus half-thickness as a constant or as t = R^alpha."""

    model_config = ConfigDict(frozen=True)

    kind: TRuleKind
    value: float

    @model_validator(mode="after")
    def _check_value(self) -> "TRule":
        if not math.isfinite(self.value):
            raise ValueError(f"t rule value must be finite, got {self.value}")
        if self.kind == TRuleKind.FIXED and not 0.0 < self.value < 1.0:
            raise ValueError(f"fixed t must be in (0, 1), got {self.value}")
        if self.kind == TRuleKind.POWER_LAW and not self.value < 0.0:
            raise ValueError(f"power-law exponent alpha must be negative, got {self.value}")
        return self

    @classmethod
    def fixed(cls, t: float) -> "TRule":
        return cls(kind=TRuleKind.FIXED, value=t)

    @classmethod
    def power_law(cls, alpha: float) -> "TRule":
        return cls(kind=TRuleKind.POWER_LAW, value=alpha)

    def at(self, R: float) -> float:
        return self.value if self.kind == TRuleKind.FIXED else R ** self.value


class EnvelopeConfig(BaseModel):
    model_config = ConfigDict(frozen=True, validate_default=True)

    theta: float = Field(default_factory=lambda: float(config.get("theta", CLASSICAL_THETA)), gt=0.5, le=1.0)
    epsilon: float = Field(default_factory=lambda: float(config.get("epsilon", 0.01)), gt=0.0)
    t_rule: Optional[TRule] = None
    area_deviation_beta: float = Field(default_factory=lambda: float(config.get("area_deviation_beta", 0.5)), gt=0.0)


class RegimeCase(str, Enum):
    CASE_1 = "case1"
    CASE_2 = "case2"
    CASE_3 = "case3"
    BOUNDARY = "boundary_excluded"


class Bound(str, Enum):
    RING_REGIME = "ring_regime"
    RING_REGIME_CLASSICAL = "ring_regime_theta_2_3"
    RING_THIN = "ring_thin"
    RING_INTERMEDIATE_STATED = "ring_intermediate_stated"
    RING_INTERMEDIATE_DERIVED = "ring_intermediate_derived"
    RING_BELOW_FOURTH = "ring_below_fourth"
    RING_SECOND_MOMENT = "ring_second_moment"
    RING_AREA_DEVIATION = "ring_area_deviation"
    CONVEX_LOWER = "convex_lower"
    CONVEX_SECOND_MOMENT = "convex_second_moment"
    CONVEX_FOURTH_MOMENT = "convex_fourth_moment"
    CONVEX_EIGHTH_NORM = "convex_eighth_norm"


class CellLabel(BaseModel):
    model_config = ConfigDict(frozen=True)

    R: float
    t: float
    p: float
    case: RegimeCase
    error: Optional[str] = None


class EnvelopeRatio(BaseModel):
    """measured / envelope for one bound at one cell."""

    model_config = ConfigDict(frozen=True)

    bound: Bound
    R: float
    t: Optional[float] = None
    p: float
    measured: float
    envelope: float
    ratio: float


class BoundSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    bound: Bound
    p: float
    cells: int
    min_ratio: float
    max_ratio: float
    top_octave_spread: float
    bounded: bool


class EnvelopeReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    config: EnvelopeConfig
    labels: List[CellLabel]
    ratios: List[EnvelopeRatio]
    summaries: List[BoundSummary]

    def ratios_for(self, bound: Bound, p: Optional[float] = None) -> List[EnvelopeRatio]:
        return [r for r in self.ratios if r.bound == bound and (p is None or r.p == p)]

    def summary(self, bound: Bound, p: float) -> Optional[BoundSummary]:
        for s in self.summaries:
            if s.bound == bound and s.p == p:
                return s
        return None


def regime_case(R: float, t: float, p: float, theta: float, t_rule: Optional[TRule] = None) -> RegimeCase:
    """Which of the three ring regimes (R, t, p) falls in.

    Case 1 when R^(1 - 2 theta) >= t; otherwise case 2 for p < 4 and case 3
    for p >= 4. Cells within 1% of equality are excluded. Under a power law
    the comparison is the sign of (1 - 2 theta) - alpha.
    """
    if t_rule is not None and t_rule.kind == TRuleKind.POWER_LAW:
        log_ratio = ((1.0 - 2.0 * theta) - t_rule.value) * math.log(R)
    else:
        log_ratio = (1.0 - 2.0 * theta) * math.log(R) - math.log(t)
    if abs(math.expm1(log_ratio)) <= BOUNDARY_TOLERANCE:
        return RegimeCase.BOUNDARY
    if log_ratio > 0.0:
        return RegimeCase.CASE_1
    return RegimeCase.CASE_2 if p < 4.0 else RegimeCase.CASE_3


def regime_envelope(case: RegimeCase, R: float, t: float, p: float, theta: float, epsilon: float) -> float:
    """L^p envelope of the ring discrepancy in the given regime."""
    if case == RegimeCase.CASE_1:
        return (R * t) ** (1.0 / p) * R ** (theta * (p - 2.0) / p)
    if case == RegimeCase.CASE_2:
        return math.sqrt(R) * t ** ((4.0 - p) / (2.0 * p))
    if case == RegimeCase.CASE_3:
        return R ** ((theta * (p - 4.0) + 2.0 + epsilon) / p)
    raise ValueError("no envelope on the regime boundary")


def _is_thin(R: float, t: float) -> bool:
    return abs(t - R ** -0.5) <= _T_MATCH * t


def _ratio(bound: Bound, e: MomentEstimate, measured: float, envelope: float, t: Optional[float] = None) -> EnvelopeRatio:
    return EnvelopeRatio(
        bound=bound,
        R=e.R,
        t=t,
        p=e.p,
        measured=measured,
        envelope=envelope,
        ratio=measured / envelope,
    )


def _ring_ratios(
    e: MomentEstimate,
    cfg: EnvelopeConfig,
) -> Tuple[CellLabel, List[EnvelopeRatio]]:
    R, t, p = e.R, e.t, e.p
    norm = e.lp_norm
    ratios: List[EnvelopeRatio] = []

    case = regime_case(R, t, p, cfg.theta, cfg.t_rule)
    error = None
    if case == RegimeCase.CASE_3 and cfg.t_rule.kind == TRuleKind.FIXED:
        error = "case 3 envelope is defined only for t = R^alpha; use a power-law t rule"
    elif case != RegimeCase.BOUNDARY:
        envelope = regime_envelope(case, R, t, p, cfg.theta, cfg.epsilon)
        ratios.append(_ratio(Bound.RING_REGIME, e, norm, envelope, t))
    label = CellLabel(R=R, t=t, p=p, case=case, error=error)

    classical = regime_case(R, t, p, CLASSICAL_THETA, cfg.t_rule)
    if classical != RegimeCase.BOUNDARY and not (
        classical == RegimeCase.CASE_3 and cfg.t_rule.kind == TRuleKind.FIXED
    ):
        envelope = regime_envelope(classical, R, t, p, CLASSICAL_THETA, cfg.epsilon)
        ratios.append(_ratio(Bound.RING_REGIME_CLASSICAL, e, norm, envelope, t))

    if 2.0 <= p < 4.0:
        ratios.append(_ratio(Bound.RING_INTERMEDIATE_STATED, e, norm, math.sqrt(R) * t ** (p / (8.0 - 2.0 * p)), t))
        ratios.append(_ratio(Bound.RING_INTERMEDIATE_DERIVED, e, norm, math.sqrt(R) * t ** ((4.0 - p) / (2.0 * p)), t))

    if _is_thin(R, t):
        ratios.append(_ratio(Bound.RING_THIN, e, norm, R ** (cfg.theta * (p - 2.0) / p + 1.0 / (2.0 * p)), t))
        if 2.0 <= p < 4.0:
            ratios.append(_ratio(Bound.RING_BELOW_FOURTH, e, norm, R ** ((3.0 * p - 4.0) / (4.0 * p)), t))

    if p == 2.0:
        ratios.append(_ratio(Bound.RING_SECOND_MOMENT, e, norm, math.sqrt(R * t), t))
        area = e.domain.measure(R)
        ratios.append(_ratio(Bound.RING_AREA_DEVIATION, e, abs(e.estimate - area), area * t ** cfg.area_deviation_beta, t))
    return label, ratios


def _convex_ratios(e: MomentEstimate) -> List[EnvelopeRatio]:
    R, p = e.R, e.p
    ratios = [_ratio(Bound.CONVEX_LOWER, e, e.lp_norm, math.sqrt(R))]
    if p == 2.0:
        ratios.append(_ratio(Bound.CONVEX_SECOND_MOMENT, e, e.estimate, R))
    if p == 4.0 and R > 1.0:
        ratios.append(_ratio(Bound.CONVEX_FOURTH_MOMENT, e, e.estimate, R * R * math.log(R)))
    if p == 8.0:
        ratios.append(_ratio(Bound.CONVEX_EIGHTH_NORM, e, e.lp_norm, R ** 0.625))
    return ratios


def _summaries(ratios: Sequence[EnvelopeRatio]) -> List[BoundSummary]:
    groups: Dict[Tuple[Bound, float], List[EnvelopeRatio]] = defaultdict(list)
    for r in ratios:
        groups[(r.bound, r.p)].append(r)

    summaries = []
    for (bound, p), items in groups.items():
        values = [r.ratio for r in items]
        top_R = max(r.R for r in items)
        octave = [r.ratio for r in items if r.R >= top_R / 2.0]
        low = min(octave)
        spread = max(octave) / low if low > 0.0 else math.inf
        summaries.append(BoundSummary(
            bound=bound,
            p=p,
            cells=len(items),
            min_ratio=min(values),
            max_ratio=max(values),
            top_octave_spread=spread,
            bounded=spread <= BOUNDED_SPREAD,
        ))
    return summaries


def envelope_report(
    table: Union[SweepTable, Sequence[MomentEstimate]],
    envelope_config: Optional[EnvelopeConfig] = None,
) -> EnvelopeReport:
    """Ratios of every applicable bound, regime labels and boundedness per bound.

    Raises:
        ValueError: if an annulus table has no t rule, or a cell's t does not
            follow the configured rule.
    """
    cfg = envelope_config or EnvelopeConfig()
    estimates = table.estimates() if isinstance(table, SweepTable) else list(table)

    labels: List[CellLabel] = []
    ratios: List[EnvelopeRatio] = []
    for e in estimates:
        if e.domain.kind == DomainKind.ANNULUS:
            if cfg.t_rule is None:
                raise ValueError("annulus envelopes need a t rule (fixed t or t = R^alpha)")
            expected = cfg.t_rule.at(e.R)
            if abs(e.t - expected) > _T_MATCH * expected:
                raise ValueError(f"cell R={e.R} has t={e.t}, but the t rule gives {expected}")
            label, cell_ratios = _ring_ratios(e, cfg)
            if label.error:
                logger.warning(f"Cell R={e.R}, t={e.t}, p={e.p}: {label.error}")
            labels.append(label)
            ratios.extend(cell_ratios)
        else:
            ratios.extend(_convex_ratios(e))

    report = EnvelopeReport(config=cfg, labels=labels, ratios=ratios, summaries=_summaries(ratios))
    excluded = sum(1 for label in labels if label.case == RegimeCase.BOUNDARY)
    logger.info(f"Envelope report: {len(ratios)} ratios, {len(report.summaries)} bounds, {excluded} boundary cells")
    return report
