"""Cross-product sweeps over radii and moment exponents."""

from typing import Iterator, List, Optional, Sequence

from pydantic import BaseModel, ConfigDict

from latdisc.logger import get_logger
from lattice_counter import DomainKind, DomainSpec
from .estimator import EstimatorSpec, MomentEstimate, discrepancy_values, moment_from_values

logger = get_logger(__name__)


class SweepCell(BaseModel):
    """One (R, p) cell; exactly one of ``estimate`` and ``error`` is set."""

    model_config = ConfigDict(frozen=True)

    R: float
    p: float
    t: Optional[float] = None
    estimate: Optional[MomentEstimate] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.estimate is not None


class SweepTable(BaseModel):
    """Cells in evaluation order: R outer, p inner."""

    model_config = ConfigDict(frozen=True)

    domain: DomainSpec
    estimator: EstimatorSpec
    annulus_alpha: Optional[float] = None
    cells: List[SweepCell]

    def __iter__(self) -> Iterator[SweepCell]:
        return iter(self.cells)

    def __len__(self) -> int:
        return len(self.cells)

    @property
    def failures(self) -> int:
        return sum(1 for cell in self.cells if not cell.ok)

    def estimates(self, p: Optional[float] = None) -> List[MomentEstimate]:
        """Successful estimates, optionally restricted to one exponent."""
        return [
            cell.estimate for cell in self.cells
            if cell.ok and (p is None or cell.p == p)
        ]

    def radii(self) -> List[float]:
        seen: List[float] = []
        for cell in self.cells:
            if cell.R not in seen:
                seen.append(cell.R)
        return seen


def _domain_at(domain: DomainSpec, R: float, annulus_alpha: Optional[float]) -> DomainSpec:
    if annulus_alpha is None:
        return domain
    return DomainSpec.annulus(R ** annulus_alpha, domain.boundary)


def sweep(
    domain: DomainSpec,
    R_list: Sequence[float],
    p_list: Sequence[float],
    estimator: Optional[EstimatorSpec] = None,
    workers: int = 1,
    annulus_alpha: Optional[float] = None,
) -> SweepTable:
    """Moments for every (R, p), sharing one set of D values per radius.

    With ``annulus_alpha`` the domain must be an annulus and its thickness is
    replaced by t = R^alpha in each row. A failing row or cell is recorded
    with its error text and the sweep continues.

    Raises:
        ValueError: if either list is empty or alpha is given for a non-annulus.
    """
    if not R_list or not p_list:
        raise ValueError("sweep needs nonempty R and p lists")
    if annulus_alpha is not None and domain.kind != DomainKind.ANNULUS:
        raise ValueError("annulus_alpha applies to annulus sweeps only")
    estimator = estimator or EstimatorSpec.grid()

    cells: List[SweepCell] = []
    for R in R_list:
        R = float(R)
        try:
            row_domain = _domain_at(domain, R, annulus_alpha)
            values = discrepancy_values(row_domain, R, estimator, workers)
        except Exception as e:
            logger.error(f"Sweep row R={R} failed: {e}")
            for p in p_list:
                cells.append(SweepCell(R=R, p=float(p), error=str(e)))
            continue

        t = row_domain.t
        for p in p_list:
            try:
                estimate, stderr = moment_from_values(values, p, estimator)
                result = MomentEstimate(
                    domain=row_domain,
                    R=R,
                    p=float(p),
                    estimator=estimator,
                    estimate=estimate,
                    stderr=stderr,
                )
                cells.append(SweepCell(R=R, p=float(p), t=t, estimate=result))
            except Exception as e:
                logger.error(f"Sweep cell R={R}, p={p} failed: {e}")
                cells.append(SweepCell(R=R, p=float(p), t=t, error=str(e)))

    table = SweepTable(domain=domain, estimator=estimator, annulus_alpha=annulus_alpha, cells=cells)
    logger.info(f"Sweep {domain.label}: {len(cells)} cells, {table.failures} failed")
    return table
