"""CSV and JSON writers with a reproducibility header."""

import csv
import io
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, TextIO

from latdisc import __version__
from latdisc.logger import get_logger
from latdisc.models import OutputFormat, RunConfig

logger = get_logger(__name__)

MOMENT_COLUMNS = [
    "domain", "R", "t", "p", "estimator", "m_or_samples", "seed",
    "moment", "lp_norm", "stderr", "error",
]


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _json_value(value: Any) -> Any:
    # JSON has no inf/nan
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def header(run_config: RunConfig, notes: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Version, config echo and, unless reproducible, a timestamp."""
    head: Dict[str, Any] = {"version": f"latdisc {__version__}", "config": run_config.echo()}
    if notes:
        head["notes"] = notes
    if not run_config.reproducible:
        head["created_at"] = datetime.now(timezone.utc).isoformat()
    return head


def write_csv(
    rows: Sequence[Dict[str, Any]],
    columns: Sequence[str],
    run_config: RunConfig,
    out: TextIO,
    notes: Optional[Dict[str, Any]] = None,
) -> None:
    head = header(run_config, notes)
    out.write(f"# {head['version']}\n")
    out.write(f"# config: {json.dumps(head['config'], sort_keys=True)}\n")
    for key, value in (head.get("notes") or {}).items():
        out.write(f"# {key}: {_cell(value)}\n")
    if "created_at" in head:
        out.write(f"# created_at: {head['created_at']}\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])


def write_json(
    rows: Sequence[Dict[str, Any]],
    columns: Sequence[str],
    run_config: RunConfig,
    out: TextIO,
    notes: Optional[Dict[str, Any]] = None,
) -> None:
    """One ``{config, results}`` object; results keep the CSV column order."""
    document = header(run_config, notes)
    document["results"] = [{c: _json_value(row.get(c)) for c in columns} for row in rows]
    json.dump(document, out, indent=2)
    out.write("\n")


def emit(
    rows: Sequence[Dict[str, Any]],
    columns: Sequence[str],
    run_config: RunConfig,
    notes: Optional[Dict[str, Any]] = None,
) -> str:
    """Write rows in the configured format to --out, or stdout; returns the text."""
    buffer = io.StringIO()
    if run_config.output_format == OutputFormat.JSON:
        write_json(rows, columns, run_config, buffer, notes)
    else:
        write_csv(rows, columns, run_config, buffer, notes)
    text = buffer.getvalue()

    if run_config.out:
        path = Path(run_config.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {len(rows)} rows to {path}")
    else:
        sys.stdout.write(text)
    return text


def moment_row(
    domain: str,
    R: float,
    t: Optional[float],
    p: float,
    estimator: str,
    size: int,
    seed: Optional[int],
    moment: Optional[float] = None,
    stderr: Optional[float] = None,
    error: Optional[str] = None,
) -> Dict[str, Any]:
    return {
        "domain": domain,
        "R": R,
        "t": t,
        "p": p,
        "estimator": estimator,
        "m_or_samples": size,
        "seed": seed,
        "moment": moment,
        "lp_norm": moment ** (1.0 / p) if moment is not None else None,
        "stderr": stderr,
        "error": error,
    }
