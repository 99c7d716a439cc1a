import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from scatpoles.config.models import RunConfig
from scatpoles.constants import ORACLE_MATCH_TOL
from scatpoles.geometry.curve import Curve, CurveKind
from scatpoles.oracle.disk import HankelZero, hankel_zeros_in_region, inset, match_to_poles, region_zero_count
from scatpoles.solver.pool import WorkerPool
from scatpoles.solver.refine import PoleEstimate, match_flavors, refine_poles
from scatpoles.solver.refine import residual as smallest_singular_value
from scatpoles.solver.scan import IndicatorField, SearchRegion, find_candidate_cells, scan_region
from scatpoles.utils import raise_numerical_error, raise_value_error


@dataclass
class PoleSearch:
    """Candidates, indicator fields and refined poles per flavor of one run."""

    candidates: List[complex]
    fields: Dict[str, IndicatorField] = field(default_factory=dict)
    poles: Dict[str, List[PoleEstimate]] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    # unit disk only: per flavor, Hankel zeros without a pole and poles without a zero
    unmatched: Dict[str, Tuple[List[HankelZero], List[complex]]] = field(default_factory=dict)


@dataclass(frozen=True)
class ConvergenceRow:
    target: complex
    n: int
    errors: Dict[str, float]


@dataclass
class OracleReport:
    zeros: List[HankelZero]
    newton_counts: Dict[int, int]
    contour_counts: Dict[int, int]


class ScatteringPoles:
    """Scattering poles of one sound-soft obstacle.

    Binds a boundary curve and a `RunConfig` to the scan, refinement,
    convergence and disk-oracle operations.

    Args:
        config (RunConfig): Validated run configuration.
        logger (logging.Logger, optional): Logger. Defaults to None.

    Examples:
        >>> from scatpoles import ScatteringPoles
        >>> from scatpoles.config.models import RunConfig
        >>> poles = ScatteringPoles(config=RunConfig())
        >>> poles.curve.kind.value
        'disk'
    """

    classname: str = "ScatteringPoles"

    def __init__(self, config: RunConfig, logger: Optional[logging.Logger] = None):
        if config is None:
            return raise_value_error(f"{self.classname}: Invalid config")
        self.config = config
        self.logger: logging.Logger = logger or logging.getLogger(__name__)
        self.curve: Curve = config.curve.build()
        self.region = config.search_region()
        self.pool = WorkerPool(threads=config.threads, logger=self.logger)

    def close(self):
        self.pool.close()

    def _settings(self):
        return self.config.refine.settings(default_radius=self.region.cell_diagonal / 2)

    def residual(self, kappa: complex, flavor: str = "single", n: Optional[int] = None) -> float:
        return smallest_singular_value(self.curve, n or self.config.n, flavor, kappa)

    def scan(self, flavor: str, n: Optional[int] = None) -> IndicatorField:
        return scan_region(
            self.curve,
            n or self.config.n,
            flavor,
            self.region,
            contour=self.config.indicator.contour(),
            seed=self.config.seed,
            pool=self.pool,
            logger=self.logger,
        )

    def refine(
        self,
        flavor: str,
        candidates: List[complex],
        n: Optional[int] = None,
        region: Optional[SearchRegion] = None,
        failures: Optional[List[str]] = None,
    ) -> List[PoleEstimate]:
        return refine_poles(
            self.curve,
            n or self.config.n,
            flavor,
            candidates,
            self._settings(),
            seed=self.config.seed,
            pool=self.pool,
            logger=self.logger,
            region=region,
            failures=failures,
        )

    def find_poles(self) -> PoleSearch:
        """Scan (unless candidates are configured), refine each flavor and cross-check flavors.

        Candidates from the scan that fail to refine are skipped with a note;
        configured candidates raise. For the unit disk with scanned candidates
        the poles are matched both ways against the Hankel zeros of the region.
        Raises NumericalError when two flavors disagree by more than ``agreement_tol``.
        """
        flavors = self.config.flavors()
        search = PoleSearch(candidates=[complex(re, im) for re, im in self.config.candidates])
        scanned = not search.candidates
        if scanned:
            merged: List[complex] = []
            for flavor in flavors:
                search.fields[flavor] = self.scan(flavor)
                for kappa in find_candidate_cells(search.fields[flavor], self.config.indicator.threshold):
                    if kappa not in merged:
                        merged.append(kappa)
            search.candidates = merged
            self.logger.info(f"{self.classname}: {len(merged)} candidate cells")
        if not search.candidates:
            search.notes.append("zero candidates")
        for flavor in flavors:
            failures: Optional[List[str]] = [] if scanned else None
            search.poles[flavor] = self.refine(flavor, search.candidates, region=self.region, failures=failures)
            search.notes.extend(failures or [])
            self.logger.info(f"{self.classname}: {len(search.poles[flavor])} poles from {flavor}")
        if len(flavors) == 2:
            self._check_agreement(search.poles[flavors[0]], search.poles[flavors[1]], search.notes)
        if scanned and self._is_unit_disk():
            self._match_oracle(search)
        return search

    def _is_unit_disk(self) -> bool:
        return self.curve.kind is CurveKind.DISK and self.curve.radius == 1.0

    def _match_oracle(self, search: PoleSearch) -> None:
        oracle = self.config.oracle
        zeros = hankel_zeros_in_region(oracle.nu_max, self.region, oracle.seeds, self.pool, self.logger)
        inner = inset(self.region, oracle.margin)
        expected = [z for z in zeros if inner.contains(z.kappa)]
        for flavor, estimates in search.poles.items():
            kappas = [p.kappa for p in estimates]
            lonely_zeros, _ = match_to_poles(expected, kappas, ORACLE_MATCH_TOL)
            _, lonely_poles = match_to_poles(zeros, kappas, ORACLE_MATCH_TOL)
            search.unmatched[flavor] = (lonely_zeros, lonely_poles)
            search.notes.append(
                f"disk oracle {flavor}: {len(lonely_zeros)} of {len(expected)} zeros and "
                f"{len(lonely_poles)} of {len(kappas)} poles unmatched within {ORACLE_MATCH_TOL:g}"
            )
            if lonely_zeros or lonely_poles:
                self.logger.warning(f"{self.classname}: {search.notes[-1]}")

    def _check_agreement(self, first: List[PoleEstimate], second: List[PoleEstimate], notes: List[str]):
        tol = self.config.agreement_tol
        worst = 0.0
        for a, b in (first, second), (second, first):
            for pole, _, distance in match_flavors(a, b):
                worst = max(worst, distance)
                if distance > tol:
                    raise_numerical_error(
                        f"{self.classname}: pole {pole.kappa:.15g} from {pole.flavor.short_name} "
                        f"has no partner within {tol:g} (nearest {distance:.3g})"
                    )
        if first or second:
            notes.append(f"flavor agreement {worst:.3g}")

    def _references(self) -> List[Tuple[complex, Dict[str, complex]]]:
        """Target poles and their reference values per flavor."""
        flavors = self.config.flavors()
        targets = [complex(re, im) for re, im in self.config.targets]
        if self._is_unit_disk():
            zeros = hankel_zeros_in_region(self.config.oracle.nu_max, self.region, self.config.oracle.seeds, self.pool)
            if not targets:
                targets = [z.kappa for z in zeros]
            references = []
            for target in targets:
                if not zeros:
                    raise_numerical_error(f"{self.classname}: no Hankel zero near target {target:.6g}")
                exact = min(zeros, key=lambda z: abs(z.kappa - target)).kappa
                references.append((target, {flavor: exact for flavor in flavors}))
            return references
        if not targets:
            return raise_value_error(f"{self.classname}: convergence needs targets for a {self.curve.kind.value} curve")
        references = []
        for target in targets:
            per_flavor = {}
            for flavor in flavors:
                per_flavor[flavor] = self._track(flavor, target, self.config.reference_n)
            references.append((target, per_flavor))
        return references

    def _track(self, flavor: str, center: complex, n: int) -> complex:
        poles = self.refine(flavor, [center], n=n)
        if not poles:
            return raise_numerical_error(f"{self.classname}: n={n} {flavor} gives no pole near {center:.6g}")
        return min(poles, key=lambda p: abs(p.kappa - center)).kappa

    def convergence(self) -> List[ConvergenceRow]:
        """Absolute error of the pole nearest each target for every n in ``n_list``."""
        rows = []
        for target, reference in self._references():
            for n in self.config.n_list:
                errors = {}
                for flavor, exact in reference.items():
                    errors[flavor] = abs(self._track(flavor, exact, n) - exact)
                rows.append(ConvergenceRow(target=target, n=n, errors=errors))
                self.logger.info(f"{self.classname}: target {target:.6g} n={n} errors {errors}")
        return rows

    def disk_oracle(self) -> OracleReport:
        """Hankel zeros in the region, certified per order by a contour count.

        Raises NumericalError when the Newton sweep and the count disagree.
        """
        oracle = self.config.oracle
        zeros = hankel_zeros_in_region(oracle.nu_max, self.region, oracle.seeds, self.pool, self.logger)
        inner = inset(self.region, oracle.margin)
        orders = list(range(2, oracle.nu_max + 1))
        contour_counts = dict(
            zip(
                orders,
                self.pool.map(
                    lambda nu: region_zero_count(nu, self.region, oracle.margin, (oracle.tiles_re, oracle.tiles_im)),
                    orders,
                ),
            )
        )
        newton_counts = {nu: sum(1 for z in zeros if z.order == nu and inner.contains(z.kappa)) for nu in orders}
        for nu in orders:
            if newton_counts[nu] != contour_counts[nu]:
                raise_numerical_error(
                    f"{self.classname}: H_{nu} has {contour_counts[nu]} zeros by contour count "
                    f"but Newton found {newton_counts[nu]}"
                )
        return OracleReport(zeros=zeros, newton_counts=newton_counts, contour_counts=contour_counts)
