#!/usr/bin/env python3
"""Stress Test for the latdisc shift-grid kernel.

This script evaluates D(domain, x, R) over a full shift grid at several
worker counts, reports throughput and checks that every worker count
produces bit-identical values.

Usage:
    python stress_test.py [--domain D] [--radius R] [--grid M] [--workers 1,2,4,8]

Options:
    --domain D          Domain to count (default: disk)
    --radius R          Scale factor (default: 2000)
    --grid M            Shift grid side, M x M shifts (default: 128)
    --workers LIST      Comma-separated worker counts (default: 1,2,4,8)
"""

import argparse
import sys
import time
from pathlib import Path
from typing import Any, Dict, List

import numpy as np

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent))

from latdisc.logger import get_logger
from lattice_counter import DomainSpec
from moment_estimator import EstimatorSpec, discrepancy_values

logger = get_logger(__name__)


class StressTestRunner:
    """Times the shift-grid kernel across worker counts."""

    def __init__(self, domain: DomainSpec, radius: float, grid: int, workers: List[int]):
        self.domain = domain
        self.radius = radius
        self.estimator = EstimatorSpec.grid(grid)
        self.workers = workers
        self.timings: Dict[int, float] = {}
        self.mismatches: List[int] = []

    def run(self) -> Dict[str, Any]:
        """Run the stress test."""
        logger.info("=" * 60)
        logger.info("STRESS TEST STARTED")
        logger.info(f"Domain: {self.domain.label}, R = {self.radius}")
        logger.info(f"Shifts: {self.estimator.shift_count}")
        logger.info(f"Worker counts: {self.workers}")
        logger.info("=" * 60)

        reference = None
        for w in self.workers:
            start_time = time.perf_counter()
            values = discrepancy_values(self.domain, self.radius, self.estimator, workers=w)
            self.timings[w] = time.perf_counter() - start_time
            if reference is None:
                reference = values
            elif not np.array_equal(values, reference):
                self.mismatches.append(w)
                logger.warning(f"workers={w} produced values that differ from workers={self.workers[0]}")
            logger.info(
                f"workers={w}: {self.timings[w]:.2f}s, "
                f"{self.estimator.shift_count / self.timings[w]:.0f} shifts/sec"
            )

        base = self.timings[self.workers[0]]
        results = {
            "domain": self.domain.label,
            "radius": self.radius,
            "shifts": self.estimator.shift_count,
            "seconds": {w: round(t, 3) for w, t in self.timings.items()},
            "speedup": {w: round(base / t, 2) for w, t in self.timings.items() if t > 0},
            "mean_disc": float(np.mean(reference)),
            "mismatched_workers": self.mismatches,
        }

        logger.info("=" * 60)
        logger.info("STRESS TEST COMPLETE")
        logger.info(f"Speedup: {results['speedup']}")
        logger.info(f"Mean D over the grid: {results['mean_disc']:.6f}")
        logger.info("=" * 60)

        return results


def main():
    parser = argparse.ArgumentParser(description="latdisc Stress Test")
    parser.add_argument("--domain", type=str, default="disk", help="disk, ellipse:a,b or annulus:t")
    parser.add_argument("--radius", type=float, default=2000.0, help="Scale factor R")
    parser.add_argument("--grid", type=int, default=128, help="Shift grid side")
    parser.add_argument("--workers", type=str, default="1,2,4,8", help="Comma-separated worker counts")
    args = parser.parse_args()

    runner = StressTestRunner(
        domain=DomainSpec.parse(args.domain),
        radius=args.radius,
        grid=args.grid,
        workers=[int(w) for w in args.workers.split(",")],
    )

    results = runner.run()

    # Worker count must never change the values
    if results["mismatched_workers"]:
        logger.error("STRESS TEST FAILED: results depend on the worker count")
        sys.exit(1)
    else:
        logger.info("STRESS TEST PASSED")
        sys.exit(0)


if __name__ == "__main__":
    main()
