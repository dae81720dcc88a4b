"""Discrepancy Module.

Lattice discrepancy D, its mollified variant D_delta, and the sandwich checks
tying the two together.
"""

from .discrepancy import (
    DiscrepancySample,
    disc,
    disc_annulus_identity_residual,
    disc_many,
    grid_mean,
    grid_mean_exact,
    shift_grid,
)
from .mollified import (
    MollifiedParams,
    convolve_indicator,
    disc_mollified,
    disc_mollified_many,
    disc_mollified_parts,
    mollified_indicator,
)
from .sandwich import (
    InequalityReport,
    SandwichReport,
    mollification_inequality_check,
    sandwich_check,
    sandwich_pointwise,
)

__all__ = [
    'DiscrepancySample',
    'InequalityReport',
    'MollifiedParams',
    'SandwichReport',
    'convolve_indicator',
    'disc',
    'disc_annulus_identity_residual',
    'disc_many',
    'disc_mollified',
    'disc_mollified_many',
    'disc_mollified_parts',
    'grid_mean',
    'grid_mean_exact',
    'mollification_inequality_check',
    'mollified_indicator',
    'sandwich_check',
    'sandwich_pointwise',
    'shift_grid',
]
