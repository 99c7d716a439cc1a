import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Union

import marshmallow_dataclass
from marshmallow import RAISE, ValidationError, validate

from scatpoles.constants import (
    DEFAULT_IM_MAX,
    DEFAULT_IM_MIN,
    DEFAULT_RE_MAX,
    DEFAULT_RE_MIN,
    INDICATOR_NODES,
    INDICATOR_RADIUS,
    ORACLE_MARGIN,
    ORACLE_NU_MAX,
    ORACLE_SEEDS,
    REFINE_ACCEPTANCE,
    REFINE_BLOCK,
    REFINE_CLUSTER_TOL,
    REFINE_NODES,
    REFINE_RANK_TOL,
)
from scatpoles.geometry.curve import Curve, curve_from_spec
from scatpoles.solver.indicator import Contour
from scatpoles.solver.refine import RefineSettings
from scatpoles.solver.scan import SearchRegion

POSITIVE = validate.Range(min=0, min_inclusive=False)


@dataclass
class CurveConfig:
    kind: str = field(default="disk", metadata={"validate": validate.OneOf(["disk", "peanut", "acorn", "radial_trig"])})
    radius: float = field(default=1.0, metadata={"validate": POSITIVE})
    cos_coeffs: List[float] = field(default_factory=list)
    sin_coeffs: List[float] = field(default_factory=list)

    def build(self) -> Curve:
        return curve_from_spec(self.kind, self.radius, self.cos_coeffs, self.sin_coeffs)


@dataclass
class RegionConfig:
    re_min: float = DEFAULT_RE_MIN
    re_max: float = DEFAULT_RE_MAX
    im_min: float = DEFAULT_IM_MIN
    im_max: float = DEFAULT_IM_MAX


@dataclass
class GridConfig:
    n_re: int = field(default=40, metadata={"validate": validate.Range(min=2, max=2000)})
    n_im: int = field(default=40, metadata={"validate": validate.Range(min=2, max=2000)})


@dataclass
class IndicatorConfig:
    radius: float = field(default=INDICATOR_RADIUS, metadata={"validate": POSITIVE})
    m: int = field(default=INDICATOR_NODES, metadata={"validate": validate.Range(min=4, max=1024)})
    center_re: float = 0.0
    center_im: float = 0.0
    # log10 RIM floor for candidate cells
    threshold: float = -8.0

    def contour(self) -> Contour:
        return Contour(center=complex(self.center_re, self.center_im), radius=self.radius, m=self.m)


@dataclass
class RefineConfig:
    radius: Optional[float] = field(default=None, metadata={"validate": POSITIVE})
    m: int = field(default=REFINE_NODES, metadata={"validate": validate.Range(min=4, max=4096)})
    block: int = field(default=REFINE_BLOCK, metadata={"validate": validate.Range(min=1, max=64)})
    rank_tol: float = field(
        default=REFINE_RANK_TOL,
        metadata={"validate": validate.Range(min=0, max=1, min_inclusive=False, max_inclusive=False)},
    )
    cluster_tol: float = field(default=REFINE_CLUSTER_TOL, metadata={"validate": POSITIVE})
    acceptance: float = field(default=REFINE_ACCEPTANCE, metadata={"validate": POSITIVE})
    polish: bool = True

    def settings(self, default_radius: float) -> RefineSettings:
        return RefineSettings(
            radius=self.radius if self.radius is not None else default_radius,
            m=self.m,
            block=self.block,
            rank_tol=self.rank_tol,
            cluster_tol=self.cluster_tol,
            acceptance=self.acceptance,
            polish=self.polish,
        )


@dataclass
class OracleConfig:
    nu_max: int = field(default=ORACLE_NU_MAX, metadata={"validate": validate.Range(min=2, max=40)})
    seeds: int = field(default=ORACLE_SEEDS, metadata={"validate": validate.Range(min=2, max=200)})
    margin: float = field(default=ORACLE_MARGIN, metadata={"validate": POSITIVE})
    tiles_re: int = field(default=2, metadata={"validate": validate.Range(min=1, max=64)})
    tiles_im: int = field(default=2, metadata={"validate": validate.Range(min=1, max=64)})


@dataclass
class RunConfig:
    """Effective configuration of one CLI run.

    Examples:
        >>> from scatpoles.config.models import RunConfigSchema
        >>> config = RunConfigSchema().load({"curve": {"kind": "peanut"}, "n": 64})
        >>> config.curve.kind, config.n, config.flavor
        ('peanut', 64, 'both')
    """

    curve: CurveConfig = field(default_factory=CurveConfig)
    flavor: str = field(default="both", metadata={"validate": validate.OneOf(["single", "double", "both"])})
    n: int = field(default=32, metadata={"validate": validate.Range(min=2, max=128)})
    n_list: List[int] = field(
        default_factory=lambda: [5, 6, 7, 8, 9, 10],
        metadata={"validate": validate.Length(min=1)},
    )
    reference_n: int = field(default=64, metadata={"validate": validate.Range(min=2, max=128)})
    region: RegionConfig = field(default_factory=RegionConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    indicator: IndicatorConfig = field(default_factory=IndicatorConfig)
    refine: RefineConfig = field(default_factory=RefineConfig)
    oracle: OracleConfig = field(default_factory=OracleConfig)
    # [re, im] pairs; when set, poles skips the scan
    candidates: List[List[float]] = field(default_factory=list)
    # [re, im] pairs tracked by convergence
    targets: List[List[float]] = field(default_factory=list)
    agreement_tol: float = field(default=1e-9, metadata={"validate": POSITIVE})
    seed: int = field(default=0, metadata={"validate": validate.Range(min=0)})
    threads: int = field(default=1, metadata={"validate": validate.Range(min=1, max=256)})
    output: str = "output"

    def search_region(self) -> SearchRegion:
        return SearchRegion(
            re_min=self.region.re_min,
            re_max=self.region.re_max,
            im_min=self.region.im_min,
            im_max=self.region.im_max,
            n_re=self.grid.n_re,
            n_im=self.grid.n_im,
        )

    def flavors(self) -> List[str]:
        return ["single", "double"] if self.flavor == "both" else [self.flavor]


@dataclass
class PoleRecord:
    kappa_re: float
    kappa_im: float
    residual: float
    count: int
    flavor: str
    n: int
    seed: int


@dataclass
class HankelZeroRecord:
    order: int
    kappa_re: float
    kappa_im: float
    newton_residual: float


RunConfigSchema = marshmallow_dataclass.class_schema(RunConfig)
PoleRecordSchema = marshmallow_dataclass.class_schema(PoleRecord)
HankelZeroRecordSchema = marshmallow_dataclass.class_schema(HankelZeroRecord)


def read_config_file(path: Optional[Union[str, Path]] = None) -> dict:
    data = {} if path is None else json.loads(Path(path).read_text())
    if not isinstance(data, dict):
        raise ValidationError("config: top level must be a JSON object")
    return data


def load_run_config(path: Optional[Union[str, Path]] = None) -> RunConfig:
    """Read and validate a JSON config; no path gives the defaults. Unknown keys raise."""
    return run_config_from_dict(read_config_file(path))


def run_config_from_dict(data: dict) -> RunConfig:
    config: RunConfig = RunConfigSchema().load(data, unknown=RAISE)
    # surface curve and region errors before any work starts
    config.curve.build()
    config.search_region()
    return config


def dump_run_config(config: RunConfig) -> dict:
    return RunConfigSchema().dump(config)
