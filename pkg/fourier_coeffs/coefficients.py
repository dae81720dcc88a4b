"""Fourier coefficients of the mollified disk discrepancy and of its square.

a_{delta,n} are the coefficients of D_delta on the shift torus and b_{delta,n}
those of D_delta^2, so b is the self-convolution of a.
"""

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, Optional, TextIO, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.optimize import minimize_scalar
from scipy.signal import convolve

from latdisc.logger import get_logger
from latdisc.workers import run_cells
from lattice_counter import DomainKind, DomainSpec
from special_functions import DEFAULT_BUMP, BumpSpec, bump_fourier, bump_fourier_many
from .transforms import chi_hat_annulus_radial, chi_hat_disk, chi_hat_disk_radial

logger = get_logger(__name__)

MAX_TRUNC_N = 4096
_RADII_PER_CELL = 4096


@dataclass
class CoeffTable:
    """Coefficients c_n for all integer n with |n| <= trunc_radius.

    ``values`` is a (2N+1, 2N+1) complex array indexed by (n1 + N, n2 + N);
    entries outside the Euclidean ball are zero and not part of the table.
    """

    values: np.ndarray
    trunc_radius: int
    meta: Dict[str, Any] = field(default_factory=dict)
    tail: float = 0.0

    @property
    def mask(self) -> np.ndarray:
        N = self.trunc_radius
        axis = np.arange(-N, N + 1)
        return axis[:, None] ** 2 + axis[None, :] ** 2 <= N * N

    def entry(self, n1: int, n2: int) -> complex:
        N = self.trunc_radius
        if n1 * n1 + n2 * n2 > N * N:
            raise KeyError(f"frequency ({n1}, {n2}) is outside the truncation radius {N}")
        return complex(self.values[n1 + N, n2 + N])

    def items(self) -> Iterator[Tuple[Tuple[int, int], complex]]:
        """(n, c_n) pairs sorted lexicographically by (n1, n2)."""
        N = self.trunc_radius
        for i, j in zip(*np.nonzero(self.mask)):
            yield (int(i) - N, int(j) - N), complex(self.values[i, j])

    def __len__(self) -> int:
        return int(self.mask.sum())

    def hermitian_defect(self) -> float:
        """max |c_{-n} - conj(c_n)|; zero for coefficients of real functions."""
        flipped = self.values[::-1, ::-1]
        return float(np.max(np.abs(flipped - np.conj(self.values))))

    def energy(self, include_zero: bool = True) -> float:
        """sum |c_n|^2 over the table."""
        weights = np.abs(self.values[self.mask]) ** 2
        total = math.fsum(weights)
        if not include_zero:
            total -= abs(self.entry(0, 0)) ** 2
        return total

    def to_csv(self, out: Optional[TextIO] = None) -> str:
        """Write ``n1,n2,re,im`` rows; returns the text when ``out`` is None."""
        buffer = out or io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["n1", "n2", "re", "im"])
        for (n1, n2), value in self.items():
            writer.writerow([n1, n2, repr(value.real), repr(value.imag)])
        return buffer.getvalue() if out is None else ""


def _check_delta(delta: float) -> float:
    delta = float(delta)
    if not math.isfinite(delta) or delta == 0.0 or abs(delta) >= 1.0:
        raise ValueError(f"delta must be nonzero with |delta| < 1, got {delta}")
    return delta


def a_delta(
    n: Tuple[int, int],
    R: float,
    delta: float,
    bump: Optional[BumpSpec] = None,
) -> complex:
    """Coefficient a_{delta,n} of the mollified disk discrepancy.

    a_0 = pi ((R + delta)^2 - R^2); otherwise the disk transform at radius
    R + delta times phi-hat(|delta| |n|).
    """
    delta = _check_delta(delta)
    n1, n2 = int(n[0]), int(n[1])
    if n1 == 0 and n2 == 0:
        return complex(math.pi * (2.0 * delta * R + delta * delta))
    rho = math.hypot(n1, n2)
    return complex(chi_hat_disk(R + delta, (n1, n2)) * bump_fourier(abs(delta) * rho, bump))


def a_delta_grid(
    R: float,
    delta: float,
    N: int,
    bump: Optional[BumpSpec] = None,
    workers: int = 1,
) -> CoeffTable:
    """All a_{delta,n} with |n| <= N, evaluated once per distinct |n|."""
    delta = _check_delta(delta)
    if N < 0:
        raise ValueError(f"truncation radius must be nonnegative, got {N}")
    bump = bump or DEFAULT_BUMP
    axis = np.arange(-N, N + 1, dtype=np.int64)
    squares = axis[:, None] ** 2 + axis[None, :] ** 2
    mask = squares <= N * N
    unique, inverse = np.unique(squares[mask], return_inverse=True)

    positive = unique[unique > 0]
    blocks = [positive[i:i + _RADII_PER_CELL] for i in range(0, positive.size, _RADII_PER_CELL)]

    def cell(block: np.ndarray) -> np.ndarray:
        rho = np.sqrt(block.astype(float))
        return chi_hat_disk_radial(R + delta, rho) * bump_fourier_many(abs(delta) * rho, bump)

    parts = run_cells(cell, blocks, workers=workers)
    shell_values = np.empty(unique.size)
    shell_values[0] = math.pi * (2.0 * delta * R + delta * delta)
    if parts:
        shell_values[1:] = np.concatenate(parts)

    values = np.zeros(squares.shape, dtype=complex)
    values[mask] = shell_values[inverse]
    logger.debug(f"a_delta grid: N={N}, {unique.size} shells, R={R}, delta={delta}")
    return CoeffTable(values=values, trunc_radius=N, meta={"R": R, "delta": delta, "domain": "disk", "kind": "a"})


def discrepancy_coefficients(domain: DomainSpec, R: float, N: int) -> CoeffTable:
    """Fourier coefficients of D(domain, ., R) on the shift torus for |n| <= N.

    c_0 = 0 and c_n is the transform of the scaled domain at n: the disk
    transform for disks, ab times the disk transform at (a n1, b n2) for
    ellipses, and the difference of two disks for annuli.
    """
    if N < 0:
        raise ValueError(f"truncation radius must be nonnegative, got {N}")
    axis = np.arange(-N, N + 1, dtype=np.int64)
    n1, n2 = np.meshgrid(axis, axis, indexing="ij")
    mask = (n1 * n1 + n2 * n2 <= N * N) & ((n1 != 0) | (n2 != 0))
    a, b = domain.axes
    rho = np.hypot(a * n1[mask], b * n2[mask])
    if domain.kind == DomainKind.ANNULUS:
        shell = chi_hat_annulus_radial(float(R), domain.t, rho)
    else:
        shell = a * b * chi_hat_disk_radial(float(R), rho)
    values = np.zeros(n1.shape, dtype=complex)
    values[mask] = shell
    return CoeffTable(values=values, trunc_radius=N, meta={"R": float(R), "domain": domain.label, "kind": "chi"})


def _a_tail_bound(R: float, delta: float, M: int, bump: BumpSpec) -> float:
    """Bound on sum_{|j| > M} |a_j|^2.

    Explicit shell sum over M < |j| <= 2M plus the disk energy bound
    (R + delta)/(pi 2M) beyond, weighted by sup phi-hat^2 there.
    """
    axis = np.arange(-2 * M, 2 * M + 1, dtype=np.int64)
    squares = axis[:, None] ** 2 + axis[None, :] ** 2
    shell = squares[(squares > M * M) & (squares <= 4 * M * M)]
    k, counts = np.unique(shell, return_counts=True)
    rho = np.sqrt(k.astype(float))
    near = chi_hat_disk_radial(R + delta, rho) * bump_fourier_many(abs(delta) * rho, bump)
    far_freq = abs(delta) * 2.0 * M + np.linspace(0.0, 20.0, 401)
    sup_phi = float(np.max(np.abs(bump_fourier_many(far_freq, bump))))
    far = (R + delta) / (math.pi * 2.0 * M) * sup_phi ** 2
    return math.fsum(counts * near ** 2) + far


def b_delta_table(
    R: float,
    delta: Optional[float] = None,
    trunc_N: int = 64,
    conv_N: Optional[int] = None,
    bump: Optional[BumpSpec] = None,
    workers: int = 1,
) -> CoeffTable:
    """b_{delta,n} = sum_{|j| <= conv_N} a_j a_{n-j} for |n| <= trunc_N.

    ``delta`` defaults to R^(-1/2) and ``conv_N`` to 2 * trunc_N. The table's
    ``tail`` is a bound on the omitted a-energy sum_{|j| > conv_N} |a_j|^2.

    Raises:
        ValueError: if conv_N < 2 * trunc_N or trunc_N > 4096.
    """
    delta = _check_delta(delta if delta is not None else float(R) ** -0.5)
    bump = bump or DEFAULT_BUMP
    if trunc_N < 0 or trunc_N > MAX_TRUNC_N:
        raise ValueError(f"trunc_N must be in [0, {MAX_TRUNC_N}], got {trunc_N}")
    conv_N = int(conv_N if conv_N is not None else 2 * trunc_N)
    if conv_N < 2 * trunc_N:
        raise ValueError(f"conv_N must be at least 2 * trunc_N, got {conv_N} < {2 * trunc_N}")

    a = a_delta_grid(R, delta, conv_N, bump, workers)
    # a is real for the disk; the real convolution keeps b exactly real
    full = convolve(a.values.real, a.values.real, mode="full")
    centre = 2 * conv_N
    b = full[centre - trunc_N:centre + trunc_N + 1, centre - trunc_N:centre + trunc_N + 1]
    table = CoeffTable(
        values=b.astype(complex),
        trunc_radius=trunc_N,
        meta={"R": R, "delta": delta, "domain": "disk", "kind": "b", "conv_N": conv_N},
        tail=_a_tail_bound(R, delta, conv_N, bump),
    )
    table.values[~table.mask] = 0.0
    logger.info(f"b_delta table: R={R}, delta={delta}, trunc_N={trunc_N}, conv_N={conv_N}, tail={table.tail:.3g}")
    return table


class SplitRatios(BaseModel):
    """Normalized coefficient decay on both sides of the cutoff |n| = sqrt(R)."""

    model_config = ConfigDict(frozen=True)

    R: float
    cutoff: float
    low_max: float
    high_max: float
    low_count: int
    high_count: int


def split_regime_ratios(table: CoeffTable, R: Optional[float] = None) -> SplitRatios:
    """max |b_n| |n| / R over 1 <= |n| <= sqrt(R) and max |b_n| |n|^3 / R^2 above.

    The two envelopes R/|n| and R^2/|n|^3 cross exactly at |n| = sqrt(R).
    """
    R = float(R if R is not None else table.meta["R"])
    N = table.trunc_radius
    axis = np.arange(-N, N + 1)
    norm = np.hypot(axis[:, None], axis[None, :])
    magnitude = np.abs(table.values)
    cutoff = math.sqrt(R)
    low = table.mask & (norm >= 1.0) & (norm <= cutoff)
    high = table.mask & (norm > cutoff)
    low_ratio = magnitude[low] * norm[low] / R
    high_ratio = magnitude[high] * norm[high] ** 3 / (R * R)
    return SplitRatios(
        R=R,
        cutoff=cutoff,
        low_max=float(low_ratio.max(initial=0.0)),
        high_max=float(high_ratio.max(initial=0.0)),
        low_count=int(low.sum()),
        high_count=int(high.sum()),
    )


def envelope_crossing(R: float) -> float:
    """|n| where R/|n| = R^2/|n|^3."""
    return math.sqrt(R)


def cutoff_envelope(R: float, eps: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Fourth-moment envelope eps R^2 log R + R^(4 - 4 eps) for a cutoff at |n| = R^eps."""
    if R <= 1.0:
        raise ValueError(f"cutoff envelope needs R > 1, got {R}")
    e = np.asarray(eps, dtype=float)
    value = e * R * R * math.log(R) + R ** (4.0 - 4.0 * e)
    return float(value) if np.ndim(value) == 0 else value


def cutoff_growth_exponent(eps: float) -> float:
    """Power of R in the cutoff envelope, ignoring logarithms: max(2, 4 - 4 eps)."""
    return max(2.0, 4.0 - 4.0 * eps)


def optimal_cutoff_exponent(R: float) -> float:
    """Minimizer of :func:`cutoff_envelope` over eps in [1/2, 1].

    Equals 1/2 + log 4 / (4 log R), which tends to 1/2.
    """
    result = minimize_scalar(
        lambda e: cutoff_envelope(R, e) / (R * R),
        bounds=(0.5, 1.0),
        method="bounded",
        options={"xatol": 1e-10},
    )
    return float(result.x)
