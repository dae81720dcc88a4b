#!/usr/bin/env python3
"""Cleanup Data Entry Point for latdisc.

This script compacts the JSON-lines result cache: every key keeps its
latest record and superseded lines are dropped. Loading the cache verifies
every checksum, so a corrupted file is reported and left untouched.

Usage:
    python cleanup_data.py [--cache PATH] [--dry-run]

Options:
    --cache PATH  Cache file (default: LATDISC_CACHE or cache_path from config)
    --dry-run     Report how many lines would be dropped without rewriting
"""

import argparse
import sys
from pathlib import Path

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent))

from latdisc.cache import CacheCorruptedError, ResultCache
from latdisc.config import config
from latdisc.logger import get_logger

logger = get_logger(__name__)


def main(cache_path: str, dry_run: bool = False) -> int:
    """Main cleanup function.

    Args:
        cache_path: JSON-lines cache file to compact
        dry_run: If True, only log what would be dropped

    Returns:
        Process exit status
    """
    logger.info("=" * 50)
    logger.info("latdisc Cache Cleanup Started")
    logger.info(f"Mode: {'DRY RUN' if dry_run else 'LIVE'}")
    logger.info("=" * 50)

    path = Path(cache_path)
    if not path.exists():
        logger.error(f"Cache file not found: {path}")
        return 1

    try:
        cache = ResultCache(path)
    except CacheCorruptedError as e:
        logger.error(f"Refusing to compact a corrupted cache: {e}")
        return 2

    if dry_run:
        with open(path, "r", encoding="utf-8") as handle:
            lines = sum(1 for line in handle if line.strip())
        dropped = lines - len(cache)
    else:
        dropped = cache.compact()

    logger.info("=" * 50)
    logger.info("Cleanup Complete")
    logger.info(f"Records kept: {len(cache)}")
    logger.info(f"Stale lines {'to drop' if dry_run else 'dropped'}: {dropped}")
    logger.info("=" * 50)
    return 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="latdisc Cache Cleanup")
    parser.add_argument("--cache", type=str, help="Cache file to compact")
    parser.add_argument(
        "--dry-run",
        action="store_true",
        help="Report stale lines without rewriting the file"
    )
    args = parser.parse_args()

    cache_path = args.cache or config.get("cache_path")
    if not cache_path:
        logger.error("No cache path given and none configured")
        sys.exit(1)
    sys.exit(main(cache_path, dry_run=args.dry_run))
