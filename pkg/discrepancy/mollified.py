"""Mollified discrepancy D_delta.

D_delta(x) = sum_k (chi_{(R+delta) Omega - x} * phi_|delta|)(k) - R^2 |Omega|.

Lattice points farther than |delta| from the boundary of (R+delta) Omega
contribute exactly 1 (inside) or 0 (outside); they are counted with the exact
counter on the shrunken domain. Points in the band between get a polar
quadrature around the point: Gauss–Legendre in the radius, split at the first
tangency radius with a cosine clustering map, and the exact angular measure
of each circle inside the domain.
"""

import math
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from latdisc.config import config
from latdisc.logger import get_logger
from latdisc.workers import run_cells
from lattice_counter import (
    DomainKind,
    DomainSpec,
    ShiftVec,
    count_quadratic,
    row_half_widths,
)
from lattice_counter.lattice_counter import ShiftsLike, _as_shift_array
from lattice_counter.predicates import form_signs, two_sum
from special_functions import DEFAULT_BUMP, BumpSpec, bump_profile, gauss_legendre

logger = get_logger(__name__)

MIN_QUAD_POINTS = 16
_DISK_POINT_BLOCK = 16384
_ELLIPSE_POINT_BLOCK = 1024
# keeps the first radial panel nondegenerate so r > 0 at every node
_MIN_KINK = 1e-6


class MollifiedParams(BaseModel):
    """Mollification scale and convolution quadrature settings."""

    model_config = ConfigDict(frozen=True)

    delta: float
    bump: BumpSpec = DEFAULT_BUMP
    quad_points: int = Field(
        default_factory=lambda: int(config.get("quad_points", 64)), ge=MIN_QUAD_POINTS
    )

    @field_validator("delta")
    @classmethod
    def _check_delta(cls, value: float) -> float:
        if not math.isfinite(value) or value == 0.0 or abs(value) >= 1.0:
            raise ValueError(f"delta must be nonzero with |delta| < 1, got {value}")
        return value


def _disk_measure(rho: float, d: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Angle of the circle |y - p| = r inside the disk of radius rho, |p| = d."""
    with np.errstate(divide="ignore", invalid="ignore"):
        cos_half = ((d - rho) * (d + rho) + r * r) / (2.0 * d * r)
    angle = 2.0 * np.arccos(np.clip(cos_half, -1.0, 1.0))
    centred = d == 0.0
    if np.any(centred):
        angle = np.where(centred, np.where(r <= rho, 2.0 * math.pi, 0.0), angle)
    return angle


def _batched_roots(coeffs: np.ndarray) -> np.ndarray:
    """Roots of quartics given as (..., 5) complex coefficient arrays (highest first)."""
    shape = coeffs.shape[:-1]
    flat = coeffs.reshape(-1, 5)
    companion = np.zeros((flat.shape[0], 4, 4), dtype=complex)
    companion[:, 0, :] = -flat[:, 1:] / flat[:, :1]
    companion[:, 1, 0] = 1.0
    companion[:, 2, 1] = 1.0
    companion[:, 3, 2] = 1.0
    return np.linalg.eigvals(companion).reshape(shape + (4,))


def _ellipse_measure(
    ax: float, bx: float, px: np.ndarray, py: np.ndarray, r: np.ndarray
) -> np.ndarray:
    """Angle of the circle |y - p| = r inside the ellipse with semi-axes ax, bx.

    Intersection angles are the unit-circle roots of a quartic in e^{i theta};
    the arcs between consecutive candidate angles are classified by their
    midpoints, so spurious off-circle roots only subdivide arcs.
    """
    A2, B2 = ax * ax, bx * bx
    coeffs = np.empty(r.shape + (5,), dtype=complex)
    coeffs[..., 0] = B2 - A2
    coeffs[..., 1] = 4.0 * (px * B2 - 1j * py * A2) / r
    coeffs[..., 2] = 4.0 * (px * px * B2 + py * py * A2 - A2 * B2) / (r * r) + 2.0 * (A2 + B2)
    coeffs[..., 3] = 4.0 * (px * B2 + 1j * py * A2) / r
    coeffs[..., 4] = B2 - A2
    theta = np.sort(np.mod(np.angle(_batched_roots(coeffs)), 2.0 * math.pi), axis=-1)
    upper = np.concatenate([theta[..., 1:], theta[..., :1] + 2.0 * math.pi], axis=-1)
    arcs = upper - theta
    mid = 0.5 * (theta + upper)
    x = (px[..., None] + r[..., None] * np.cos(mid)) / ax
    y = (py[..., None] + r[..., None] * np.sin(mid)) / bx
    inside = x * x + y * y <= 1.0
    return np.sum(arcs * inside, axis=-1)


def _ellipse_nearest_distance(ax: float, bx: float, px: np.ndarray, py: np.ndarray) -> np.ndarray:
    """Distance from p to the ellipse boundary via the critical-angle quartic."""
    coeffs = np.empty(px.shape + (5,), dtype=complex)
    coeffs[..., 0] = bx * bx - ax * ax
    coeffs[..., 1] = 2.0 * ax * px - 2j * bx * py
    coeffs[..., 2] = 0.0
    coeffs[..., 3] = -2.0 * ax * px - 2j * bx * py
    coeffs[..., 4] = -(bx * bx - ax * ax)
    phi = np.angle(_batched_roots(coeffs))
    dx = ax * np.cos(phi) - px[..., None]
    dy = bx * np.sin(phi) - py[..., None]
    return np.min(np.hypot(dx, dy), axis=-1)


def convolve_indicator(
    domain: DomainSpec,
    rho: float,
    points: np.ndarray,
    support: float,
    bump: BumpSpec = DEFAULT_BUMP,
    quad_points: int = 64,
) -> np.ndarray:
    """(chi_{rho Omega} * phi_support)(p) for each row p of ``points`` by quadrature.

    ``points`` are relative to the centre of the domain.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    out = np.empty(pts.shape[0])
    if pts.shape[0] == 0:
        return out
    a, b = domain.axes
    ellipse = domain.kind == DomainKind.ELLIPSE and a != b
    nodes, weights = gauss_legendre(quad_points)
    # cosine map clusters nodes at both panel ends
    warp = 0.5 * (1.0 - np.cos(math.pi * nodes))
    dwarp = 0.5 * math.pi * np.sin(math.pi * nodes) * weights
    block = _ELLIPSE_POINT_BLOCK if ellipse else _DISK_POINT_BLOCK

    for start in range(0, pts.shape[0], block):
        px = pts[start:start + block, 0]
        py = pts[start:start + block, 1]
        if ellipse:
            kink = _ellipse_nearest_distance(a * rho, b * rho, px, py)
        else:
            radius = rho * a
            d = np.hypot(px, py)
            kink = np.abs(radius - d)
        u_kink = np.clip(kink / support, _MIN_KINK, 1.0)

        lo = np.stack([np.zeros_like(u_kink), u_kink], axis=-1)[..., None]
        width = np.stack([u_kink, 1.0 - u_kink], axis=-1)[..., None]
        u = lo + width * warp
        w = width * dwarp
        r = support * u

        if ellipse:
            angle = _ellipse_measure(
                a * rho, b * rho,
                np.broadcast_to(px[:, None, None], r.shape),
                np.broadcast_to(py[:, None, None], r.shape),
                r,
            )
        else:
            angle = _disk_measure(radius, np.broadcast_to(d[:, None, None], r.shape), r)

        integrand = bump_profile(u.ravel(), bump).reshape(u.shape) * angle * u * w
        out[start:start + block] = integrand.sum(axis=(1, 2))
    return out


def _radius_pair(R: float, offset: float) -> Tuple[float, float]:
    return two_sum(float(R), float(offset))


def _slack(domain: DomainSpec, support: float) -> float:
    # (rho - slack) Omega + support * disk lies inside rho Omega
    return support / min(domain.axes)


def mollified_indicator(
    domain: DomainSpec,
    rho: float,
    points: np.ndarray,
    support: float,
    bump: BumpSpec = DEFAULT_BUMP,
    quad_points: int = 64,
) -> np.ndarray:
    """Like :func:`convolve_indicator`, but exactly 1 or 0 away from the boundary."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    a, b = domain.axes
    slack = _slack(domain, support)
    zero = np.zeros(1)
    values = np.zeros(pts.shape[0])
    inner = rho - slack
    deep = np.zeros(pts.shape[0], dtype=bool)
    if inner > 0:
        deep = form_signs(pts[:, 0], pts[:, 1], zero, zero, a, b, inner) <= 0
    near = form_signs(pts[:, 0], pts[:, 1], zero, zero, a, b, rho + slack) < 0
    band = near & ~deep
    values[deep] = 1.0
    values[band] = convolve_indicator(domain, rho, pts[band], support, bump, quad_points)
    return values


def _check_domain(domain: DomainSpec, R: float, delta: float) -> None:
    if domain.kind == DomainKind.ANNULUS:
        raise ValueError("mollified discrepancy is defined for disks and ellipses only")
    if not math.isfinite(R) or R + delta < 1.0:
        raise ValueError(f"need R + delta >= 1, got R={R}, delta={delta}")


def _band_points(
    domain: DomainSpec,
    shifts: np.ndarray,
    rho_in: Tuple[float, float],
    rho_out: Tuple[float, float],
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Lattice points in open(rho_out Omega) minus closed(rho_in Omega).

    Returns (shift index, j, k) arrays in shift-major order.
    """
    a, b = domain.axes
    reach = b * rho_out[0]
    rows = np.arange(math.floor(-reach) - 1, math.ceil(reach) + 3, dtype=float)
    x1 = shifts[:, 0:1]
    x2 = shifts[:, 1:2]
    k = rows[None, :]
    w_out = row_half_widths(x2, k, a, b, *rho_out)
    if rho_in[0] > 0:
        w_in = row_half_widths(x2, k, a, b, *rho_in)
    else:
        w_in = np.zeros_like(w_out)

    left_start = np.floor(x1 - w_out) - 1
    left_stop = np.ceil(x1 - w_in) + 1
    right_start = np.maximum(np.floor(x1 + w_in) - 1, left_stop + 1)
    right_stop = np.ceil(x1 + w_out) + 1
    starts = np.stack([left_start, right_start], axis=-1).ravel()
    stops = np.stack([left_stop, right_stop], axis=-1).ravel()
    lengths = np.clip(stops - starts + 1, 0, None).astype(np.int64)

    n_s, n_r = w_out.shape
    shift_ids = np.repeat(np.arange(n_s), 2 * n_r)
    row_vals = np.tile(np.repeat(rows, 2), n_s)
    total = int(lengths.sum())
    first = np.repeat(np.cumsum(lengths) - lengths, lengths)
    j = np.repeat(starts, lengths) + (np.arange(total) - first)
    kk = np.repeat(row_vals, lengths)
    sid = np.repeat(shift_ids, lengths)

    sx1 = shifts[sid, 0]
    sx2 = shifts[sid, 1]
    outer = form_signs(j, kk, sx1, sx2, a, b, *rho_out) < 0
    if rho_in[0] > 0:
        inner = form_signs(j, kk, sx1, sx2, a, b, *rho_in) <= 0
        keep = outer & ~inner
    else:
        keep = outer
    return sid[keep], j[keep], kk[keep]


def _mollified_block(
    domain: DomainSpec,
    R: float,
    shifts: np.ndarray,
    params: MollifiedParams,
) -> Tuple[np.ndarray, np.ndarray]:
    delta = params.delta
    support = abs(delta)
    slack = _slack(domain, support)
    rho = R + delta
    rho_in = _radius_pair(R, delta - slack)
    rho_out = _radius_pair(R, delta + slack)
    a, b = domain.axes

    if rho_in[0] > 0:
        interior, _ = count_quadratic(a, b, rho_in, shifts, closed=True)
    else:
        interior = np.zeros(shifts.shape[0], dtype=np.int64)

    sid, j, k = _band_points(domain, shifts, rho_in, rho_out)
    rel = np.column_stack([j - shifts[sid, 0], k - shifts[sid, 1]])
    conv = convolve_indicator(domain, rho, rel, support, params.bump, params.quad_points)

    bounds = np.searchsorted(sid, np.arange(shifts.shape[0] + 1))
    area = domain.unit_area() * R * R
    values = np.empty(shifts.shape[0])
    band_counts = np.diff(bounds)
    for i in range(shifts.shape[0]):
        band_sum = math.fsum(conv[bounds[i]:bounds[i + 1]])
        values[i] = math.fsum([float(interior[i]), band_sum, -area])
    logger.debug(
        f"mollified block: {shifts.shape[0]} shifts, {sid.size} band points, delta={delta}"
    )
    return values, band_counts


def disc_mollified_parts(
    domain: DomainSpec,
    R: float,
    shifts: ShiftsLike,
    params: MollifiedParams,
    workers: int = 1,
) -> Tuple[np.ndarray, np.ndarray]:
    """D_delta for many shifts together with the number of band points per shift."""
    R = float(R)
    _check_domain(domain, R, params.delta)
    arr = _as_shift_array(shifts)
    chunk = int(config.get("shift_chunk_elements", 262144))
    rows = 2 * math.ceil(max(domain.axes) * (R + 2.0)) + 4
    block = max(1, chunk // (4 * rows))
    blocks = [arr[i:i + block] for i in range(0, arr.shape[0], block)]
    parts = run_cells(lambda blk: _mollified_block(domain, R, blk, params), blocks, workers=workers)
    if not parts:
        return np.empty(0), np.empty(0, dtype=np.int64)
    values = np.concatenate([p[0] for p in parts])
    band = np.concatenate([p[1] for p in parts])
    return values, band


def disc_mollified_many(
    domain: DomainSpec,
    R: float,
    shifts: ShiftsLike,
    params: MollifiedParams,
    workers: int = 1,
) -> np.ndarray:
    """D_delta for every shift, in input order."""
    values, _ = disc_mollified_parts(domain, R, shifts, params, workers)
    return values


def disc_mollified(
    domain: DomainSpec,
    R: float,
    shift: Optional[ShiftVec] = None,
    params: Optional[MollifiedParams] = None,
) -> float:
    """D_delta(domain, shift, R) for a disk or ellipse.

    ``params`` defaults to delta = R^(-1/2).

    Raises:
        ValueError: for annuli, for R + delta < 1, or through MollifiedParams
            for |delta| >= 1 and quad_points < 16.
    """
    shift = shift or ShiftVec()
    params = params or MollifiedParams(delta=float(R) ** -0.5)
    return float(disc_mollified_many(domain, R, shift, params)[0])
