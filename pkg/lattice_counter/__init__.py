"""Lattice Counter Module.

Exact lattice-point counts for shifted disks, ellipses and annuli, a
brute-force oracle, Gauss circle counts and r2.
"""

from .arithmetic import gauss_n, gauss_n_from_square, gauss_square_bounds, r2, r2_enumerate
from .domains import Boundary, CountResult, DomainKind, DomainSpec, ShiftVec
from .lattice_counter import (
    contains,
    count,
    count_bruteforce,
    count_many,
    count_quadratic,
    enumerate_points,
    row_half_widths,
)

__all__ = [
    'Boundary',
    'CountResult',
    'DomainKind',
    'DomainSpec',
    'ShiftVec',
    'contains',
    'count',
    'count_bruteforce',
    'count_many',
    'count_quadratic',
    'enumerate_points',
    'gauss_n',
    'gauss_n_from_square',
    'gauss_square_bounds',
    'r2',
    'r2_enumerate',
    'row_half_widths',
]
