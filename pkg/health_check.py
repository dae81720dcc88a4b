#!/usr/bin/env python3
"""Health check script for latdisc.

This script checks if:
1. The configuration is valid
2. The counting and special-function kernels reproduce known values
3. The result cache (when configured) loads without checksum errors

Usage:
    python health_check.py [--skip-sandwich] [--json] [--verbose]
"""

import argparse
import asyncio
import json
import math
import sys
import traceback
from datetime import datetime
from pathlib import Path

import dotenv

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent))

from discrepancy import grid_mean, grid_mean_exact, sandwich_check
from latdisc.cache import CacheCorruptedError, ResultCache
from latdisc.config import config
from latdisc.logger import get_logger, set_level
from lattice_counter import DomainSpec, ShiftVec, count, gauss_n
from special_functions import bessel_j1_zero, bump_normalization, bump_normalization_closed_form

# Set up logger
logger = get_logger("health_check")

# Load environment variables from .env file if it exists
dotenv.load_dotenv(Path(__file__).parent / ".env")

KNOWN_COUNTS = [
    (DomainSpec.disk(), 1.0, ShiftVec(x1=0.0, x2=0.0), 5),
    (DomainSpec.disk(), 10.0, ShiftVec(x1=0.0, x2=0.0), 317),
    (DomainSpec.annulus(0.5), 5.0, ShiftVec(x1=0.0, x2=0.0), 28),
]

J1_FIRST_ZERO = 3.8317059702075125


async def check_configuration():
    """Check if the configuration is valid."""
    try:
        all_config = config.get_all()
        logger.info(f"Checking configuration: {json.dumps(all_config, indent=2)}")

        if not 0.5 < float(all_config["theta"]) <= 1.0:
            return False, f"theta must be in (0.5, 1], got {all_config['theta']}"
        for key in ("workers", "grid_m", "quad_points", "shift_chunk_elements"):
            if int(all_config[key]) < 1:
                return False, f"{key} must be positive, got {all_config[key]}"
        if not 0.0 <= float(all_config["cache_verify_fraction"]) <= 1.0:
            return False, f"cache_verify_fraction must be in [0, 1], got {all_config['cache_verify_fraction']}"

        return True, "Configuration is valid"
    except Exception as e:
        error_trace = traceback.format_exc()
        logger.error(f"Configuration check error: {error_trace}")
        return False, f"Error checking configuration: {str(e)}"


async def check_counting():
    """Check exact counts and the grid-mean identity."""
    try:
        for domain, R, shift, expected in KNOWN_COUNTS:
            got = count(domain, R, shift).count
            if got != expected:
                return False, f"{domain.label} at R={R} counted {got}, expected {expected}"
        if gauss_n(10.0) != 317:
            return False, "gauss_n(10) is not 317"

        mean = grid_mean(DomainSpec.disk(), 7.5, 8)
        exact = grid_mean_exact(7.5, 8)
        if abs(mean - exact) > 1e-9:
            return False, f"grid mean {mean!r} differs from exact {exact!r}"

        return True, "Counting kernel reproduces known values"
    except Exception as e:
        error_trace = traceback.format_exc()
        logger.error(f"Counting check error: {error_trace}")
        return False, f"Error checking counting kernel: {str(e)}"


async def check_special_functions():
    """Check the J1 zero and the bump normalization."""
    try:
        zero = bessel_j1_zero(1)
        if abs(zero - J1_FIRST_ZERO) > 1e-12:
            return False, f"first J1 zero {zero!r}, expected {J1_FIRST_ZERO!r}"
        c = bump_normalization()
        closed = bump_normalization_closed_form()
        if not math.isclose(c, closed, rel_tol=1e-12):
            return False, f"bump normalization {c!r} disagrees with closed form {closed!r}"
        return True, f"Special functions are consistent (c = {c:.12f})"
    except Exception as e:
        error_trace = traceback.format_exc()
        logger.error(f"Special function check error: {error_trace}")
        return False, f"Error checking special functions: {str(e)}"


async def check_sandwich():
    """Check the mollified sandwich at a small radius."""
    try:
        report = await asyncio.wait_for(
            asyncio.to_thread(sandwich_check, 20.0, ShiftVec(x1=0.3, x2=0.6), None, 2000, 7),
            timeout=120,
        )
        if report.pointwise_violations or report.summed.sandwich_violations:
            return False, (
                f"sandwich violated: {report.pointwise_violations} pointwise, "
                f"{report.summed.sandwich_violations} summed"
            )
        return True, f"Sandwich holds: {report.d_lower:.4f} <= {report.d:.4f} <= {report.d_upper:.4f}"
    except asyncio.TimeoutError:
        return False, "Sandwich check timed out after 120 seconds"
    except Exception as e:
        error_trace = traceback.format_exc()
        logger.error(f"Sandwich check error: {error_trace}")
        return False, f"Error checking sandwich: {str(e)}"


async def check_cache():
    """Check that the configured cache file loads."""
    path = config.get("cache_path")
    if not path:
        return True, "No cache configured"
    try:
        cache = ResultCache(path)
        return True, f"Cache {path} holds {len(cache)} records"
    except CacheCorruptedError as e:
        return False, f"Cache is corrupted: {e}"
    except Exception as e:
        error_trace = traceback.format_exc()
        logger.error(f"Cache check error: {error_trace}")
        return False, f"Error checking cache: {str(e)}"


async def run_health_check(check_sandwich_bounds=True, verbose=False):
    """Run all health checks and return the results."""
    if verbose:
        set_level("DEBUG")

    checks = {
        "configuration": check_configuration,
        "counting": check_counting,
        "special_functions": check_special_functions,
        "cache": check_cache,
    }
    if check_sandwich_bounds:
        checks["sandwich"] = check_sandwich

    results = {}
    for name, check in checks.items():
        ok, message = await check()
        results[name] = {"status": "OK" if ok else "FAIL", "message": message}

    overall_status = "OK" if all(r["status"] == "OK" for r in results.values()) else "FAIL"
    results["overall"] = {
        "status": overall_status,
        "timestamp": datetime.now().isoformat()
    }

    return results


def main():
    """Main entry point for health check script."""
    parser = argparse.ArgumentParser(description="latdisc Health Check")
    parser.add_argument("--skip-sandwich", action="store_true",
                        help="Skip the mollified sandwich check (faster)")
    parser.add_argument("--json", action="store_true",
                        help="Output results as JSON")
    parser.add_argument("--verbose", "-v", action="store_true",
                        help="Enable verbose logging")

    args = parser.parse_args()

    results = asyncio.run(run_health_check(not args.skip_sandwich, args.verbose))

    if args.json:
        print(json.dumps(results, indent=2))
        sys.exit(0 if results["overall"]["status"] == "OK" else 1)

    print("=== latdisc Health Check ===")
    print(f"Time: {results['overall']['timestamp']}")
    print(f"Overall Status: {results['overall']['status']}")
    print()

    for check, result in results.items():
        if check != "overall":
            status_str = "OK  " if result["status"] == "OK" else "FAIL"
            print(f"{check.replace('_', ' ').title()}: {status_str} - {result['message']}")

    sys.exit(0 if results["overall"]["status"] == "OK" else 1)


if __name__ == "__main__":
    main()
