"""Gauss circle counts N(R) and the sum-of-two-squares function r2."""

import math
from fractions import Fraction
from typing import Optional, Tuple, Union

import numpy as np
from sympy import factorint

from latdisc.config import config

from .domains import MAX_RADIUS

R2_MAX = 2 ** 50
R2_ENUMERATE_MAX = 10 ** 6

Rational = Union[int, Fraction]


def _isqrt_many(values: np.ndarray) -> np.ndarray:
    """Floor square roots of nonnegative int64 values below 2^53."""
    roots = np.floor(np.sqrt(values.astype(float))).astype(np.int64)
    # at most one step off after the float square root
    roots -= (roots * roots > values).astype(np.int64)
    roots += ((roots + 1) * (roots + 1) <= values).astype(np.int64)
    return roots


def gauss_n_from_square(q: Rational, block: Optional[int] = None) -> int:
    """N(sqrt(q)) for an exact nonnegative squared radius ``q``.

    Column heights are summed over blocks of at most ``block`` values of j
    (default: the ``shift_chunk_elements`` setting).
    """
    q = Fraction(q)
    if q < 0:
        raise ValueError(f"squared radius must be nonnegative, got {q}")
    floor_q = math.floor(q)
    if floor_q > R2_MAX:
        raise ValueError("squared radius exceeds 2^50")
    top = math.isqrt(floor_q)
    if top == 0:
        return 1
    block = max(1, int(block or config.get("shift_chunk_elements", 262144)))
    total = 0
    for start in range(1, top + 1, block):
        j = np.arange(start, min(start + block, top + 1), dtype=np.int64)
        # floor(sqrt(q - j^2)) == isqrt(floor(q) - j^2)
        total += int(_isqrt_many(floor_q - j * j).sum())
    return int(1 + 4 * top + 4 * total)


def gauss_n(R: float) -> int:
    """Number of lattice points in the closed disk of radius R.

    Raises:
        ValueError: if R is outside [1, 2^25].
    """
    R = float(R)
    if not math.isfinite(R) or R < 1.0 or R > MAX_RADIUS:
        raise ValueError(f"radius R must be in [1, 2^25], got {R}")
    return gauss_n_from_square(Fraction(R) ** 2)


def gauss_square_bounds(R: float) -> Tuple[float, float]:
    """pi (R - sqrt2/2)^2 <= N(R) <= pi (R + sqrt2/2)^2 (unit squares argument)."""
    half_diag = math.sqrt(2.0) / 2.0
    lower = math.pi * max(R - half_diag, 0.0) ** 2
    upper = math.pi * (R + half_diag) ** 2
    return lower, upper


def r2(k: int) -> int:
    """Number of ways to write k as n1^2 + n2^2 with signs and order.

    Raises:
        ValueError: if k is negative, above 2^50 or not an integer.
    """
    if isinstance(k, bool) or int(k) != k:
        raise ValueError(f"r2 needs an integer, got {k!r}")
    k = int(k)
    if k < 0 or k > R2_MAX:
        raise ValueError(f"r2 argument must be in [0, 2^50], got {k}")
    if k == 0:
        return 1
    product = 1
    for p, e in factorint(k).items():
        if p % 4 == 1:
            product *= e + 1
        elif p % 4 == 3 and e % 2:
            return 0
    return 4 * product


def r2_enumerate(k: int) -> int:
    """r2 by direct enumeration, k <= 10^6."""
    if k < 0 or k > R2_ENUMERATE_MAX:
        raise ValueError(f"r2_enumerate argument must be in [0, 10^6], got {k}")
    total = 0
    for n1 in range(-math.isqrt(k), math.isqrt(k) + 1):
        rest = k - n1 * n1
        n2 = math.isqrt(rest)
        if n2 * n2 == rest:
            total += 1 if n2 == 0 else 2
    return total
