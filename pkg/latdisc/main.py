#!/usr/bin/env python3
"""Main entry point for the latdisc CLI.

Commands:
1. count / disc: exact counts and discrepancies at one shift
2. moment / sweep: L^p moments over the shift torus
3. fourier: coefficient tables and Parseval / Hausdorff-Young checks
4. envelope: moments against the theoretical envelopes
5. figures: plot-ready error curves
6. histogram: annulus count distribution over random shifts
"""

import argparse
import json
import os
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from dotenv import load_dotenv
from scipy.stats import poisson

from discrepancy import MollifiedParams, disc, disc_mollified
from fourier_coeffs import (
    ParsevalMode,
    a_delta_grid,
    b_delta_table,
    discrepancy_coefficients,
    hausdorff_young_check,
    parseval_check,
)
from lattice_counter import DomainKind, DomainSpec, ShiftVec, count
from moment_estimator import (
    EnvelopeConfig,
    EstimatorKind,
    EstimatorSpec,
    MomentEstimate,
    TRule,
    count_histogram,
    envelope_report,
    sweep,
)

from latdisc.cache import CacheCorruptedError, ResultCache, cache_key, canonical
from latdisc.config import config
from latdisc.figures import SAMPLE_SHIFTS, gauss_error_curve, shifted_error_curve
from latdisc.logger import get_logger, set_level
from latdisc.models import Command, FourierKind, RunConfig
from latdisc.output import MOMENT_COLUMNS, emit, moment_row
from latdisc.workers import run_cells

logger = get_logger(__name__)

Rows = List[Dict[str, Any]]
Result = Tuple[Rows, List[str], Optional[Dict[str, Any]]]

EXIT_OK = 0
EXIT_CELL_FAILURES = 1
EXIT_INVALID = 2


def _floats(text: str) -> List[float]:
    values = [float(v) for v in text.split(",") if v.strip()]
    if not values:
        raise argparse.ArgumentTypeError("--p needs at least one exponent")
    return values


def _pair(text: str) -> Tuple[float, float]:
    return ShiftVec.parse(text).as_tuple()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--domain", type=str, default="disk", help="disk, ellipse:a,b or annulus:t")
    common.add_argument("--boundary", type=str, choices=["closed", "open"], default="closed")
    common.add_argument("--radius", type=float, help="Single scale factor R")
    common.add_argument("--r-min", type=float, help="Smallest R of a ladder")
    common.add_argument("--r-max", type=float, help="Largest R of a ladder")
    common.add_argument("--r-steps", type=int, default=8, help="Number of geometric ladder steps")
    common.add_argument("--shift", type=_pair, default=None, help="Torus shift x1,x2 (default 0,0)")
    common.add_argument("--grid", type=int, help="Grid estimator with m x m shifts")
    common.add_argument("--mc", type=int, help="Monte Carlo estimator with this many shifts")
    common.add_argument("--p", type=_floats, default=[2.0], help="Comma-separated moment exponents")
    common.add_argument("--theta", type=float, help="Pointwise exponent hypothesis")
    common.add_argument("--epsilon", type=float, help="Fixed epsilon of the high-moment regime")
    common.add_argument("--alpha", type=float, help="Annulus thickness t = R^alpha")
    common.add_argument("--trunc-n", type=int, default=64, help="Coefficient truncation radius")
    common.add_argument("--conv-n", type=int, help="Convolution radius for b tables")
    common.add_argument("--delta", type=float, help="Mollifier scale")
    common.add_argument("--kind", type=str, choices=[k.value for k in FourierKind], default="chi")
    common.add_argument("--fig", type=int, choices=[2, 3], help="Figure to reproduce")
    common.add_argument("--samples", type=int, help="Number of R values or random shifts")
    common.add_argument("--workers", type=int, default=None, help="Worker pool size")
    common.add_argument("--format", dest="output_format", choices=["csv", "json"], default=None)
    common.add_argument("--out", type=str, help="Output file (default stdout)")
    common.add_argument("--cache", type=str, help="JSON-lines result cache")
    common.add_argument("--verify-cache", action="store_true", help="Recompute a share of cache hits")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--reproducible", action="store_true", help="Omit the timestamp header")
    common.add_argument(
        "--log-level",
        type=str,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Logging level",
    )

    parser = argparse.ArgumentParser(prog="latdisc", description="Lattice-point discrepancy toolkit")
    parser.add_argument("--version", action="store_true", help="Show version information")
    sub = parser.add_subparsers(dest="command")
    for command in Command:
        sub.add_parser(command.value, parents=[common])
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        domain=args.domain,
        boundary=args.boundary,
        radius=args.radius,
        r_min=args.r_min,
        r_max=args.r_max,
        r_steps=args.r_steps,
        shift=args.shift,
        grid=args.grid,
        mc=args.mc,
        p=args.p,
        theta=args.theta,
        epsilon=args.epsilon,
        alpha=args.alpha,
        trunc_n=args.trunc_n,
        conv_n=args.conv_n,
        delta=args.delta,
        kind=args.kind,
        fig=args.fig,
        samples=args.samples,
        workers=args.workers or int(config.get("workers", 1)),
        output_format=args.output_format or config.get("output_format", "csv"),
        out=args.out,
        cache=args.cache,
        verify_cache=args.verify_cache,
        seed=args.seed if args.seed is not None else int(config.get("seed", 20240101)),
        reproducible=args.reproducible,
        log_level=args.log_level,
    )


def open_cache(cfg: RunConfig) -> Optional[ResultCache]:
    """LATDISC_CACHE wins over --cache, which wins over config.json."""
    path = os.environ.get("LATDISC_CACHE") or cfg.cache or config.get("cache_path")
    if not path:
        return None
    fraction = float(config.get("cache_verify_fraction", 0.01)) if cfg.verify_cache else 0.0
    return ResultCache(path, verify_fraction=fraction)


def resolve_cells(
    cache: Optional[ResultCache],
    items: Sequence[Tuple[str, Any]],
    compute: Callable[[Any], Any],
    workers: int,
) -> List[Any]:
    """Values for (key, cell) pairs: hits from the cache, misses through the pool.

    Fresh values are normalized through JSON so a cold run and a warm run
    emit identical rows; cache writes happen here, in cell order.
    """
    results: List[Any] = [None] * len(items)
    missing: List[int] = []
    for i, (key, cell) in enumerate(items):
        if cache is not None and key in cache:
            results[i] = cache.get_or_compute(key, lambda c=cell: compute(c))
        else:
            missing.append(i)

    fresh = run_cells(compute, [items[i][1] for i in missing], workers=workers)
    for i, value in zip(missing, fresh):
        value = json.loads(canonical(value))
        if cache is not None:
            cache.put(items[i][0], value)
        results[i] = value
    if cache is not None:
        logger.info(f"Cache {cache.path}: {len(items) - len(missing)} hits, {len(missing)} computed, {cache.verified} verified")
    return results


def _estimator(cfg: RunConfig) -> EstimatorSpec:
    if cfg.mc is not None:
        return EstimatorSpec.monte_carlo(cfg.mc, cfg.seed)
    return EstimatorSpec.grid(cfg.grid)


def run_count(cfg: RunConfig, cache: Optional[ResultCache]) -> Result:
    domain = cfg.domain_spec()
    shift = cfg.shift_vec()
    radii = cfg.radii()

    def compute(R: float) -> Dict[str, Any]:
        result = count(domain, R, shift)
        return {"count": result.count, "measure": result.measure, "boundary_hits": result.boundary_hits}

    items = [
        (cache_key(command="count", domain=domain.label, boundary=domain.boundary.value, R=R, shift=list(shift.as_tuple())), R)
        for R in radii
    ]
    values = resolve_cells(cache, items, compute, cfg.workers)
    rows = [
        {"domain": domain.label, "boundary": domain.boundary.value, "R": R, "x1": shift.x1, "x2": shift.x2, **value}
        for R, value in zip(radii, values)
    ]
    return rows, ["domain", "boundary", "R", "x1", "x2", "count", "measure", "boundary_hits"], None


def run_disc(cfg: RunConfig, cache: Optional[ResultCache]) -> Result:
    domain = cfg.domain_spec()
    shift = cfg.shift_vec()
    radii = cfg.radii()
    quad_points = int(config.get("quad_points", 64))

    def compute(R: float) -> Dict[str, Any]:
        sample = disc(domain, R, shift)
        value: Dict[str, Any] = {"count": sample.count, "measure": sample.measure, "disc": sample.value}
        if cfg.delta is not None:
            params = MollifiedParams(delta=cfg.delta, quad_points=quad_points)
            value["mollified"] = disc_mollified(domain, R, shift, params)
        return value

    items = [
        (cache_key(command="disc", domain=domain.label, boundary=domain.boundary.value, R=R,
                   shift=list(shift.as_tuple()), delta=cfg.delta, quad_points=quad_points), R)
        for R in radii
    ]
    values = resolve_cells(cache, items, compute, cfg.workers)
    columns = ["domain", "boundary", "R", "x1", "x2", "count", "measure", "disc"]
    if cfg.delta is not None:
        columns.append("mollified")
    rows = [
        {"domain": domain.label, "boundary": domain.boundary.value, "R": R, "x1": shift.x1, "x2": shift.x2, **value}
        for R, value in zip(radii, values)
    ]
    return rows, columns, None


def _moment_values(cfg: RunConfig, cache: Optional[ResultCache]) -> Tuple[DomainSpec, EstimatorSpec, List[float], List[Any]]:
    domain = cfg.domain_spec()
    estimator = _estimator(cfg)
    radii = cfg.radii()
    if cfg.alpha is not None and domain.kind != DomainKind.ANNULUS:
        raise ValueError("--alpha applies to annulus domains only")

    def compute(R: float) -> List[Dict[str, Any]]:
        table = sweep(domain, [R], cfg.p, estimator, workers=1, annulus_alpha=cfg.alpha)
        return [
            {
                "t": cell.t,
                "p": cell.p,
                "moment": cell.estimate.estimate if cell.ok else None,
                "stderr": cell.estimate.stderr if cell.ok else None,
                "error": cell.error,
            }
            for cell in table
        ]

    items = [
        (cache_key(command="moment", domain=domain.label, boundary=domain.boundary.value, R=R,
                   alpha=cfg.alpha, estimator=estimator.model_dump(mode="json"), p=list(cfg.p)), R)
        for R in radii
    ]
    return domain, estimator, radii, resolve_cells(cache, items, compute, cfg.workers)


def run_moment(cfg: RunConfig, cache: Optional[ResultCache]) -> Result:
    domain, estimator, radii, values = _moment_values(cfg, cache)
    seed = estimator.seed if estimator.kind == EstimatorKind.MONTE_CARLO else None
    rows = []
    for R, cells in zip(radii, values):
        for cell in cells:
            rows.append(moment_row(
                domain.label, R, cell["t"], cell["p"], estimator.kind.value, estimator.size, seed,
                moment=cell["moment"], stderr=cell["stderr"], error=cell["error"],
            ))
    return rows, MOMENT_COLUMNS, None


def run_envelope(cfg: RunConfig, cache: Optional[ResultCache]) -> Result:
    domain, estimator, radii, values = _moment_values(cfg, cache)
    t_rule = None
    if domain.kind == DomainKind.ANNULUS:
        t_rule = TRule.power_law(cfg.alpha) if cfg.alpha is not None else TRule.fixed(domain.t)
    settings: Dict[str, Any] = {"t_rule": t_rule}
    if cfg.theta is not None:
        settings["theta"] = cfg.theta
    if cfg.epsilon is not None:
        settings["epsilon"] = cfg.epsilon
    envelope_config = EnvelopeConfig(**settings)

    estimates = []
    for R, cells in zip(radii, values):
        for cell in cells:
            if cell["moment"] is None:
                continue
            cell_domain = DomainSpec.annulus(cell["t"], domain.boundary) if cell["t"] is not None else domain
            estimates.append(MomentEstimate(
                domain=cell_domain, R=R, p=cell["p"], estimator=estimator,
                estimate=cell["moment"], stderr=cell["stderr"],
            ))
    report = envelope_report(estimates, envelope_config)

    rows: Rows = [
        {"bound": "regime", "R": label.R, "t": label.t, "p": label.p, "case": label.case.value, "error": label.error}
        for label in report.labels
    ]
    rows.extend(
        {"bound": r.bound.value, "R": r.R, "t": r.t, "p": r.p, "measured": r.measured, "envelope": r.envelope, "ratio": r.ratio}
        for r in report.ratios
    )
    for s in report.summaries:
        logger.info(
            f"{s.bound.value} p={s.p}: ratio in [{s.min_ratio:.4g}, {s.max_ratio:.4g}], "
            f"top-octave spread {s.top_octave_spread:.3g}, bounded={s.bounded}"
        )
    notes = {"bounded": json.dumps({f"{s.bound.value}@p={s.p}": s.bounded for s in report.summaries}, sort_keys=True)}
    return rows, ["bound", "R", "t", "p", "case", "measured", "envelope", "ratio", "error"], notes


def run_fourier(cfg: RunConfig, cache: Optional[ResultCache]) -> Result:
    domain = cfg.domain_spec()
    R = cfg.radii()[0]
    kind = cfg.kind

    if kind in (FourierKind.PARSEVAL, FourierKind.HAUSDORFF_YOUNG):
        grid_m = cfg.grid or max(int(config.get("grid_m", 64)), 2 * cfg.trunc_n)
        if kind == FourierKind.PARSEVAL:
            if domain.kind == DomainKind.ANNULUS:
                report = parseval_check(ParsevalMode.ANNULUS_M2, R, domain.t, cfg.trunc_n, grid_m, workers=cfg.workers)
            elif domain.kind == DomainKind.DISK:
                delta = cfg.delta if cfg.delta is not None else R ** -0.5
                report = parseval_check(ParsevalMode.MOLLIFIED_M4, R, delta, cfg.trunc_n, grid_m, workers=cfg.workers)
            else:
                raise ValueError("parseval checks cover the annulus and the mollified disk")
            row = report.model_dump(mode="json")
            return [row], list(row.keys()), None
        if domain.kind != DomainKind.ANNULUS:
            raise ValueError("the Hausdorff-Young check is defined for annulus domains")
        rows = [hausdorff_young_check(R, domain.t, p, cfg.trunc_n, grid_m).model_dump(mode="json") for p in cfg.p]
        return rows, list(rows[0].keys()), None

    if kind == FourierKind.CHI:
        table = discrepancy_coefficients(domain, R, cfg.trunc_n)
    else:
        if domain.kind != DomainKind.DISK:
            raise ValueError("a and b tables are defined for the disk")
        delta = cfg.delta if cfg.delta is not None else R ** -0.5
        if kind == FourierKind.A:
            table = a_delta_grid(R, delta, cfg.trunc_n, workers=cfg.workers)
        else:
            table = b_delta_table(R, delta, cfg.trunc_n, cfg.conv_n, workers=cfg.workers)
    rows = [{"n1": n1, "n2": n2, "re": c.real, "im": c.imag} for (n1, n2), c in table.items()]
    notes = {"kind": kind.value, "R": R, "tail": table.tail} if kind == FourierKind.B else {"kind": kind.value, "R": R}
    return rows, ["n1", "n2", "re", "im"], notes


def run_figures(cfg: RunConfig, cache: Optional[ResultCache]) -> Result:
    if cfg.fig is None:
        raise ValueError("figures needs --fig 2 or --fig 3")
    if cfg.fig == 2:
        rows = gauss_error_curve(cfg.r_min or 1e4, cfg.r_max or 1e5, cfg.samples or 2000, cfg.workers)
        return rows, ["R", "error", "normalized", "within_gauss_bound"], None
    rows = []
    for shift in [cfg.shift] if cfg.shift is not None else SAMPLE_SHIFTS:
        rows.extend(shifted_error_curve(shift, cfg.r_min or 1e3, cfg.r_max or 1e4, cfg.samples or 500, cfg.workers))
    return rows, ["R", "x1", "x2", "disc", "normalized"], None


def run_histogram(cfg: RunConfig, cache: Optional[ResultCache]) -> Result:
    domain = cfg.domain_spec()
    if domain.kind != DomainKind.ANNULUS:
        raise ValueError("histogram needs an annulus domain, e.g. --domain annulus:0.01")
    histogram = count_histogram(cfg.radii()[0], domain.t, cfg.samples or 10000, cfg.seed, cfg.workers)
    pmf = histogram.probabilities()
    rows = [
        {
            "count": k,
            "frequency": v,
            "probability": pmf[k],
            "poisson_pmf": float(poisson.pmf(k, histogram.area)),
        }
        for k, v in sorted(histogram.frequencies.items())
    ]
    notes = {
        "area": histogram.area,
        "mean": histogram.mean,
        "variance": histogram.variance,
        "stderr": histogram.stderr,
        "poisson_tv": histogram.poisson_tv,
    }
    return rows, ["count", "frequency", "probability", "poisson_pmf"], notes


HANDLERS: Dict[Command, Callable[[RunConfig, Optional[ResultCache]], Result]] = {
    Command.COUNT: run_count,
    Command.DISC: run_disc,
    Command.MOMENT: run_moment,
    Command.SWEEP: run_moment,
    Command.FOURIER: run_fourier,
    Command.ENVELOPE: run_envelope,
    Command.FIGURES: run_figures,
    Command.HISTOGRAM: run_histogram,
}


def run(cfg: RunConfig) -> int:
    """Execute one command and emit its output; returns the exit status."""
    cache = open_cache(cfg)
    rows, columns, notes = HANDLERS[cfg.command](cfg, cache)
    emit(rows, columns, cfg, notes)
    failures = sum(1 for row in rows if row.get("error"))
    if failures and cfg.command in (Command.MOMENT, Command.SWEEP):
        logger.warning(f"{failures} of {len(rows)} cells failed")
        return EXIT_CELL_FAILURES
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for the latdisc command."""
    load_dotenv()

    parser = build_parser()
    args = parser.parse_args(argv)

    if args.version:
        from latdisc import __version__

        print(f"latdisc version {__version__}")
        return EXIT_OK
    if not args.command:
        parser.print_help()
        return EXIT_INVALID

    if args.log_level:
        set_level(args.log_level)

    try:
        cfg = config_from_args(args)
        logger.info(f"Running {cfg.command.value} with {cfg.workers} workers")
        return run(cfg)
    except CacheCorruptedError as e:
        logger.error(f"Cache error: {e}")
        return EXIT_INVALID
    except ValueError as e:
        logger.error(f"Invalid run: {e}")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
