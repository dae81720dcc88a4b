"""Plot-ready data for the normalized circle-problem error curves."""

import math
from typing import Any, Dict, List, Tuple

import numpy as np

from discrepancy import disc_many
from latdisc.logger import get_logger
from latdisc.workers import run_cells
from lattice_counter import DomainSpec, gauss_n

logger = get_logger(__name__)

SAMPLE_SHIFTS = ((0.2, 0.4), (0.5, 0.3), (0.9, 0.7))


def gauss_error_curve(r_min: float, r_max: float, samples: int, workers: int = 1) -> List[Dict[str, Any]]:
    """(R, N(R) - pi R^2, (N(R) - pi R^2)/sqrt(R)) on a linear grid of R.

    Every row also states whether |N(R) - pi R^2| <= 2 sqrt(2) pi R holds.
    """
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    if not 1.0 <= r_min <= r_max:
        raise ValueError(f"need 1 <= r_min <= r_max, got {r_min}, {r_max}")
    radii = np.linspace(r_min, r_max, samples) if samples > 1 else np.array([float(r_min)])

    def cell(R: float) -> Dict[str, Any]:
        error = gauss_n(R) - math.pi * R * R
        return {
            "R": R,
            "error": error,
            "normalized": error / math.sqrt(R),
            "within_gauss_bound": abs(error) <= 2.0 * math.sqrt(2.0) * math.pi * R,
        }

    rows = run_cells(cell, [float(r) for r in radii], workers=workers)
    violations = sum(1 for row in rows if not row["within_gauss_bound"])
    logger.info(f"Gauss error curve: {len(rows)} radii in [{r_min}, {r_max}], {violations} bound violations")
    return rows


def shifted_error_curve(
    shift: Tuple[float, float],
    r_min: float = 1e3,
    r_max: float = 1e4,
    samples: int = 500,
    workers: int = 1,
) -> List[Dict[str, Any]]:
    """(R, D(disk, x, R), D/sqrt(R)) at one shift x on a linear grid of R."""
    if samples < 1:
        raise ValueError(f"samples must be positive, got {samples}")
    if not 1.0 <= r_min <= r_max:
        raise ValueError(f"need 1 <= r_min <= r_max, got {r_min}, {r_max}")
    radii = np.linspace(r_min, r_max, samples) if samples > 1 else np.array([float(r_min)])
    point = np.array([shift], dtype=float)

    def cell(R: float) -> Dict[str, Any]:
        value = float(disc_many(DomainSpec.disk(), R, point)[0])
        return {"R": R, "x1": shift[0], "x2": shift[1], "disc": value, "normalized": value / math.sqrt(R)}

    return run_cells(cell, [float(r) for r in radii], workers=workers)
