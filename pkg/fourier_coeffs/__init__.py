"""Fourier Coefficients Module.

Disk and annulus transforms, the a_delta / b_delta coefficient tables of the
mollified discrepancy, and Parseval checks against shift-grid moments.
"""

from .coefficients import (
    CoeffTable,
    SplitRatios,
    a_delta,
    a_delta_grid,
    b_delta_table,
    discrepancy_coefficients,
    cutoff_envelope,
    cutoff_growth_exponent,
    envelope_crossing,
    optimal_cutoff_exponent,
    split_regime_ratios,
)
from .parseval import (
    HausdorffYoungReport,
    ParsevalMode,
    ParsevalReport,
    hausdorff_young_check,
    parseval_check,
    truncated_energy,
)
from .transforms import (
    AsymptoticReport,
    annulus_asymptotic_report,
    chi_hat_annulus_asymptotic,
    chi_hat_annulus_exact,
    chi_hat_disk,
    chi_hat_disk_radial,
    lattice_shells,
)

__all__ = [
    'AsymptoticReport',
    'CoeffTable',
    'HausdorffYoungReport',
    'ParsevalMode',
    'ParsevalReport',
    'SplitRatios',
    'a_delta',
    'a_delta_grid',
    'annulus_asymptotic_report',
    'b_delta_table',
    'chi_hat_annulus_asymptotic',
    'chi_hat_annulus_exact',
    'chi_hat_disk',
    'chi_hat_disk_radial',
    'discrepancy_coefficients',
    'cutoff_envelope',
    'cutoff_growth_exponent',
    'envelope_crossing',
    'hausdorff_young_check',
    'lattice_shells',
    'optimal_cutoff_exponent',
    'parseval_check',
    'split_regime_ratios',
    'truncated_energy',
]
