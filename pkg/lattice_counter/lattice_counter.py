"""Exact lattice-point counts for shifted, scaled disks, ellipses and annuli.

Counts are row sums: for each lattice row the double-precision endpoints are
located, then the three integer candidates around each endpoint are re-tested
with the exact predicate, so a misrounded square root can never move a point
across the boundary.
"""

import math
from fractions import Fraction
from typing import Iterable, Optional, Tuple, Union

import numpy as np

from latdisc.config import config
from latdisc.logger import get_logger
from .domains import (
    MAX_RADIUS,
    Boundary,
    CountResult,
    DomainKind,
    DomainSpec,
    ShiftVec,
)
from .predicates import form_signs, two_diff, two_product, two_sum

logger = get_logger(__name__)

BRUTEFORCE_MAX_RADIUS = 500.0
_BRUTE_FILTER = 1e-12
_OFFSETS = np.array([-1.0, 0.0, 1.0])

ShiftsLike = Union[ShiftVec, Tuple[float, float], np.ndarray, Iterable]


def _validate(domain: DomainSpec, R: float, max_radius: float = MAX_RADIUS) -> float:
    R = float(R)
    if not math.isfinite(R) or R < 1.0 or R > max_radius:
        raise ValueError(f"radius R must be in [1, {max_radius:g}], got {R}")
    if domain.kind == DomainKind.ELLIPSE and R * max(domain.axes) > MAX_RADIUS:
        raise ValueError(f"R * max(a, b) must not exceed 2^25, got {R * max(domain.axes)}")
    if domain.kind == DomainKind.ANNULUS:
        if domain.t >= R:
            raise ValueError(f"annulus half-thickness t={domain.t} must be below R={R}")
        if R + domain.t > MAX_RADIUS:
            raise ValueError(f"annulus outer radius R + t exceeds 2^25")
    return R


def _as_shift_array(shifts: ShiftsLike) -> np.ndarray:
    """Normalize shifts to an (n, 2) float array reduced modulo 1."""
    if isinstance(shifts, ShiftVec):
        arr = np.array([shifts.as_tuple()], dtype=float)
    elif isinstance(shifts, np.ndarray):
        arr = shifts.astype(float, copy=True)
    else:
        arr = np.asarray([s.as_tuple() if isinstance(s, ShiftVec) else s for s in shifts], dtype=float)
    arr = arr.reshape(-1, 2)
    if not np.all(np.isfinite(arr)):
        raise ValueError("shifts must be finite")
    arr = np.mod(arr, 1.0)
    arr[arr >= 1.0] = 0.0
    return arr


def row_half_widths(
    x2: np.ndarray,
    k: np.ndarray,
    a: float,
    b: float,
    rho_hi: float,
    rho_lo: float = 0.0,
) -> np.ndarray:
    """Half-width a * sqrt(rho^2 - (k - x2)^2 / b^2) of each lattice row, 0 if empty.

    The gap b rho - |k - x2| is formed as (b rho_hi - |k|) +/- x2 so that it
    keeps full relative accuracy next to the poles.
    """
    reach_hi, reach_lo = two_product(b, rho_hi)
    reach_lo += b * rho_lo
    dy = k - x2
    gap = np.where(dy >= 0, (reach_hi - k) + x2, (reach_hi + k) - x2) + reach_lo
    return (a / b) * np.sqrt(np.clip(gap, 0.0, None) * (reach_hi + np.abs(dy)))


def _quadratic_rows(
    x1: np.ndarray,
    x2: np.ndarray,
    a: float,
    b: float,
    rho_hi: float,
    rho_lo: float,
    closed: bool,
    chunk_elements: int,
) -> Tuple[np.ndarray, np.ndarray]:
    """Counts and boundary hits of {b^2 (j-x1)^2 + a^2 (k-x2)^2 <= a^2 b^2 rho^2}."""
    n = x1.size
    counts = np.zeros(n, dtype=np.int64)
    hits = np.zeros(n, dtype=np.int64)

    reach = b * rho_hi
    rows = np.arange(math.floor(-reach) - 1, math.ceil(reach) + 3, dtype=float)

    shift_block = max(1, chunk_elements // rows.size)
    row_block = max(1, chunk_elements // shift_block)
    logger.debug(
        f"row kernel: {n} shifts x {rows.size} rows, blocks {shift_block} x {row_block}"
    )

    for s0 in range(0, n, shift_block):
        sx1 = x1[s0:s0 + shift_block, None]
        sx2 = x2[s0:s0 + shift_block, None]
        for r0 in range(0, rows.size, row_block):
            k = rows[None, r0:r0 + row_block]
            width = row_half_widths(sx2, k, a, b, rho_hi, rho_lo)

            hi0 = np.floor(sx1 + width)
            lo0 = np.ceil(sx1 - width)
            cand_hi = hi0[..., None] + _OFFSETS
            cand_lo = lo0[..., None] + _OFFSETS
            kk = np.broadcast_to(k[..., None], cand_hi.shape)
            px1 = sx1[..., None]
            px2 = sx2[..., None]

            sign_hi = form_signs(cand_hi, kk, px1, px2, a, b, rho_hi, rho_lo)
            sign_lo = form_signs(cand_lo, kk, px1, px2, a, b, rho_hi, rho_lo)
            in_hi = (sign_hi < 0) | ((sign_hi == 0) & closed)
            in_lo = (sign_lo < 0) | ((sign_lo == 0) & closed)

            k_hi = np.where(
                in_hi[..., 2], hi0 + 1,
                np.where(in_hi[..., 1], hi0, np.where(in_hi[..., 0], hi0 - 1, hi0 - 2)),
            )
            k_lo = np.where(
                in_lo[..., 0], lo0 - 1,
                np.where(in_lo[..., 1], lo0, np.where(in_lo[..., 2], lo0 + 1, lo0 + 2)),
            )
            per_row = np.clip(k_hi - k_lo + 1.0, 0.0, None).astype(np.int64)
            counts[s0:s0 + shift_block] += per_row.sum(axis=1)

            # lo candidates already covered by the hi window are not hits twice
            dup = (cand_lo >= hi0[..., None] - 1) & (cand_lo <= hi0[..., None] + 1)
            on = (sign_hi == 0).sum(axis=(1, 2)) + ((sign_lo == 0) & ~dup).sum(axis=(1, 2))
            hits[s0:s0 + shift_block] += on.astype(np.int64)

    return counts, hits


def _annulus_radii(R: float, t: float) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    return two_sum(R, t), two_diff(R, t)


def count_many(
    domain: DomainSpec,
    R: float,
    shifts: ShiftsLike,
    chunk_elements: Optional[int] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Exact counts and boundary hits for every shift in ``shifts``.

    Args:
        domain: Domain to count.
        R: Scale factor, 1 <= R <= 2^25.
        shifts: A ShiftVec, one (x1, x2) pair, or an (n, 2) array.
        chunk_elements: Upper bound on shifts x rows handled per block.

    Returns:
        Two int64 arrays of length n: counts and boundary hits.
    """
    R = _validate(domain, R)
    arr = _as_shift_array(shifts)
    chunk = int(chunk_elements or config.get("shift_chunk_elements", 262144))
    if chunk < 1:
        raise ValueError(f"shift_chunk_elements must be positive, got {chunk}")
    x1 = np.ascontiguousarray(arr[:, 0])
    x2 = np.ascontiguousarray(arr[:, 1])
    closed = domain.boundary == Boundary.CLOSED

    if domain.kind == DomainKind.ANNULUS:
        (out_hi, out_lo), (in_hi, in_lo) = _annulus_radii(R, domain.t)
        # closed ring = closed outer disk minus open inner disk, and vice versa
        outer, outer_hits = _quadratic_rows(x1, x2, 1.0, 1.0, out_hi, out_lo, closed, chunk)
        inner, inner_hits = _quadratic_rows(x1, x2, 1.0, 1.0, in_hi, in_lo, not closed, chunk)
        return outer - inner, outer_hits + inner_hits

    a, b = domain.axes
    return _quadratic_rows(x1, x2, a, b, R, 0.0, closed, chunk)


def count_quadratic(
    a: float,
    b: float,
    rho: Tuple[float, float],
    shifts: ShiftsLike,
    closed: bool = True,
    chunk_elements: Optional[int] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Counts for the ellipse with semi-axes (a rho, b rho), rho = rho[0] + rho[1].

    Unlike :func:`count_many` any positive radius is accepted, which the
    mollified discrepancy needs for its shrunken interior domain.
    """
    rho_hi, rho_lo = float(rho[0]), float(rho[1])
    if not math.isfinite(rho_hi) or rho_hi <= 0.0:
        raise ValueError(f"radius must be positive, got {rho_hi}")
    if rho_hi * max(a, b) > MAX_RADIUS:
        raise ValueError("radius times semi-axis exceeds 2^25")
    arr = _as_shift_array(shifts)
    chunk = int(chunk_elements or config.get("shift_chunk_elements", 262144))
    return _quadratic_rows(
        np.ascontiguousarray(arr[:, 0]), np.ascontiguousarray(arr[:, 1]),
        float(a), float(b), rho_hi, rho_lo, closed, chunk,
    )


def count(domain: DomainSpec, R: float, shift: Optional[ShiftVec] = None) -> CountResult:
    """Exact number of (j, k) with (j - x1, k - x2) in R * domain.

    Raises:
        ValueError: if R is outside [1, 2^25] or the domain does not fit.
    """
    shift = shift or ShiftVec()
    counts, hits = count_many(domain, R, shift)
    return CountResult(count=int(counts[0]), measure=domain.measure(float(R)), boundary_hits=int(hits[0]))


def contains(domain: DomainSpec, R: float, points: np.ndarray) -> np.ndarray:
    """Exact membership of arbitrary real points y in R * domain."""
    R = float(R)
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    closed = domain.boundary == Boundary.CLOSED
    zero = np.zeros(1)

    def inside(a: float, b: float, rho: Tuple[float, float], closed_mode: bool) -> np.ndarray:
        signs = form_signs(pts[:, 0], pts[:, 1], zero, zero, a, b, rho[0], rho[1])
        return (signs < 0) | ((signs == 0) & closed_mode)

    if domain.kind == DomainKind.ANNULUS:
        outer, inner = _annulus_radii(R, domain.t)
        return inside(1.0, 1.0, outer, closed) & ~inside(1.0, 1.0, inner, not closed)
    a, b = domain.axes
    return inside(a, b, (R, 0.0), closed)


def _exact_cmp(y1: Fraction, y2: Fraction, a: Fraction, b: Fraction, radius: Fraction) -> int:
    q = (y1 / a) ** 2 + (y2 / b) ** 2
    r2 = radius * radius
    return (q > r2) - (q < r2)


def enumerate_points(domain: DomainSpec, R: float, shift: Optional[ShiftVec] = None) -> Tuple[np.ndarray, int]:
    """All lattice points of the shifted domain by direct box enumeration.

    Membership is decided in double precision where that is unambiguous and
    with exact rational arithmetic otherwise.

    Returns:
        (points as an (n, 2) int64 array, number of boundary hits)
    """
    R = _validate(domain, R, BRUTEFORCE_MAX_RADIUS)
    shift = shift or ShiftVec()
    x1, x2 = shift.as_tuple()
    a, b = domain.axes
    closed = domain.boundary == Boundary.CLOSED
    if domain.kind == DomainKind.ANNULUS:
        fR, ft = Fraction(R), Fraction(domain.t)
        radii = [(R + domain.t, fR + ft, 1), (R - domain.t, fR - ft, -1)]
    else:
        radii = [(R, Fraction(R), 1)]
    r_out = radii[0][0]
    fa, fb, fx1, fx2 = Fraction(a), Fraction(b), Fraction(x1), Fraction(x2)

    js = np.arange(math.floor(x1 - a * r_out) - 1, math.ceil(x1 + a * r_out) + 2)
    ks = range(math.floor(x2 - b * r_out) - 1, math.ceil(x2 + b * r_out) + 2)
    y1 = js - x1
    found = []
    hits = 0
    for k in ks:
        y2 = k - x2
        q = (y1 / a) ** 2 + (y2 / b) ** 2
        keep = np.ones(js.size, dtype=bool)
        for radius, exact_radius, side in radii:
            r2 = radius * radius
            diff = q - r2
            cmp = np.sign(diff).astype(int)
            for idx in np.nonzero(np.abs(diff) <= _BRUTE_FILTER * (q + r2))[0]:
                cmp[idx] = _exact_cmp(Fraction(int(js[idx])) - fx1, Fraction(k) - fx2, fa, fb, exact_radius)
            hits += int(np.count_nonzero(cmp == 0))
            # side 1: must lie inside this circle; side -1: must lie outside
            if side == 1:
                keep &= (cmp < 0) | ((cmp == 0) & closed)
            else:
                keep &= (cmp > 0) | ((cmp == 0) & closed)
        for j in js[keep]:
            found.append((int(j), k))
    points = np.array(found, dtype=np.int64).reshape(-1, 2)
    return points, hits


def count_bruteforce(domain: DomainSpec, R: float, shift: Optional[ShiftVec] = None) -> CountResult:
    """Reference O(R^2) count; R is limited to 500.

    Raises:
        ValueError: if R > 500.
    """
    points, hits = enumerate_points(domain, R, shift)
    return CountResult(count=len(points), measure=domain.measure(float(R)), boundary_hits=hits)
