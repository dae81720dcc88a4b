"""Moment Estimator Module.

L^p moments of the discrepancy over the shift torus, radius sweeps,
log-log scaling fits, envelope reports and annulus count histograms.
"""

from .envelopes import (
    Bound,
    BoundSummary,
    CellLabel,
    EnvelopeConfig,
    EnvelopeRatio,
    EnvelopeReport,
    RegimeCase,
    TRule,
    TRuleKind,
    envelope_report,
    regime_case,
    regime_envelope,
)
from .estimator import (
    EstimatorKind,
    EstimatorSpec,
    MomentEstimate,
    discrepancy_values,
    moment_estimate,
    moment_from_values,
)
from .histogram import CountHistogram, count_histogram
from .scaling import ScalingFit, scaling_fit
from .sweep import SweepCell, SweepTable, sweep

__all__ = [
    'Bound',
    'BoundSummary',
    'CellLabel',
    'CountHistogram',
    'EnvelopeConfig',
    'EnvelopeRatio',
    'EnvelopeReport',
    'EstimatorKind',
    'EstimatorSpec',
    'MomentEstimate',
    'RegimeCase',
    'ScalingFit',
    'SweepCell',
    'SweepTable',
    'TRule',
    'TRuleKind',
    'count_histogram',
    'discrepancy_values',
    'envelope_report',
    'moment_estimate',
    'moment_from_values',
    'regime_case',
    'regime_envelope',
    'scaling_fit',
    'sweep',
]
