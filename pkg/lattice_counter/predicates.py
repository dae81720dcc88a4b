"""Error-free transformations and the exact sign of the counting quadratic form.

The form is

    f(j, k) = b^2 (j - x1)^2 + a^2 (k - x2)^2 - a^2 b^2 rho^2

with rho carried as an unevaluated sum rho_hi + rho_lo, so annulus radii
R +/- t stay exact. Every product below is split into a (hi, lo) pair whose
sum is exact; the sign of the resulting list of terms is read off a correctly
rounded ``math.fsum``.
"""

import math
from typing import List, Tuple

import numpy as np

_SPLITTER = 134217729.0  # 2^27 + 1

# Relative bound on |f_float - f_exact| / (sum of the absolute terms).
FILTER_BOUND = 1e-14


def two_sum(a: float, b: float) -> Tuple[float, float]:
    x = a + b
    bv = x - a
    av = x - bv
    return x, (a - av) + (b - bv)


def two_diff(a: float, b: float) -> Tuple[float, float]:
    x = a - b
    bv = a - x
    av = x + bv
    return x, (a - av) + (bv - b)


def split(a: float) -> Tuple[float, float]:
    c = _SPLITTER * a
    abig = c - a
    hi = c - abig
    return hi, a - hi


def two_product(a: float, b: float) -> Tuple[float, float]:
    x = a * b
    ahi, alo = split(a)
    bhi, blo = split(b)
    err1 = x - ahi * bhi
    err2 = err1 - alo * bhi
    err3 = err2 - ahi * blo
    return x, alo * blo - err3


def _scale(expansion: List[float], factor: float) -> List[float]:
    out: List[float] = []
    for e in expansion:
        out.extend(two_product(e, factor))
    return out


def _square(expansion: List[float]) -> List[float]:
    out: List[float] = []
    for i, e in enumerate(expansion):
        out.extend(two_product(e, e))
        for f in expansion[i + 1:]:
            hi, lo = two_product(e, f)
            out.extend((2.0 * hi, 2.0 * lo))
    return out


def form_sign(
    j: float,
    k: float,
    x1: float,
    x2: float,
    a: float,
    b: float,
    rho_hi: float,
    rho_lo: float = 0.0,
) -> int:
    """Exact sign (-1, 0, 1) of the quadratic form at the point (j, k)."""
    dx = list(two_diff(j, x1))
    dy = list(two_diff(k, x2))
    terms = _square(_scale(dx, b))
    terms += _square(_scale(dy, a))
    radius = _scale(_scale([rho_hi, rho_lo], a), b)
    terms += [-v for v in _square(radius)]
    total = math.fsum(terms)
    if total > 0:
        return 1
    if total < 0:
        return -1
    return 0


def form_float(
    dx: np.ndarray,
    dy: np.ndarray,
    a: float,
    b: float,
    rho: float,
) -> Tuple[np.ndarray, np.ndarray]:
    """Float value of the form and the mask of entries the filter cannot decide."""
    t1 = (b * dx) ** 2
    t2 = (a * dy) ** 2
    t3 = (a * b * rho) ** 2
    value = t1 + t2 - t3
    ambiguous = np.abs(value) <= FILTER_BOUND * (t1 + t2 + t3)
    return value, ambiguous


def form_signs(
    j: np.ndarray,
    k: np.ndarray,
    x1: np.ndarray,
    x2: np.ndarray,
    a: float,
    b: float,
    rho_hi: float,
    rho_lo: float = 0.0,
) -> np.ndarray:
    """Vectorized exact sign over broadcastable arrays of points and shifts.

    The float filter settles almost every entry; the rest go through
    :func:`form_sign` one at a time.
    """
    j, k, x1, x2 = np.broadcast_arrays(
        np.asarray(j, dtype=float), np.asarray(k, dtype=float),
        np.asarray(x1, dtype=float), np.asarray(x2, dtype=float),
    )
    value, ambiguous = form_float(j - x1, k - x2, a, b, rho_hi)
    signs = np.sign(value).astype(np.int8)
    if ambiguous.any():
        for idx in zip(*np.nonzero(ambiguous)):
            signs[idx] = form_sign(
                float(j[idx]), float(k[idx]), float(x1[idx]), float(x2[idx]),
                a, b, rho_hi, rho_lo,
            )
    return signs
