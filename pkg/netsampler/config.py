"""
Run configuration.

A RunConfig describes a full experiment: datasets, techniques, sample
fraction, realizations, seeds, properties and outputs. It is a pydantic model
so the CLI config file and the API request body share one validator.

Config files are plain key/value text read with python-dotenv:

    # comments start with '#'
    master_seed = 42
    runs = 100
    techniques = RNS, RND, RLS, RLI, RWS, RWI, FFS, FFI
    properties = degree_dist, clustering_dist, avg_degree, density
    dataset.ca-hep = data/CA-HepPh.txt, 12008, 237010
    dataset.toy = fixtures/toy.txt

List values are comma separated. Each `dataset.<name>` key is a path with
optional expected node and edge counts; relative paths are resolved against
the config file's directory. `${VAR}` references expand from the environment.
"""

import io
from enum import Enum
from pathlib import Path
from typing import Optional, Union

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .defaults import get_default, get_float, get_int
from .errors import ConfigError
from .samplers import ALL_TECHNIQUES, SamplerSpec, Technique

DATASET_PREFIX = "dataset."
DEFAULT_SWEEP = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]


class PropertyName(str, Enum):
    DEGREE_DIST = "degree_dist"
    CLUSTERING_DIST = "clustering_dist"
    AVG_DEGREE = "avg_degree"
    DENSITY = "density"

    @property
    def is_distribution(self) -> bool:
        return self in (PropertyName.DEGREE_DIST, PropertyName.CLUSTERING_DIST)


class Aggregation(str, Enum):
    MEAN = "mean"
    POOLED = "pooled"


class ReportFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class DatasetEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str = Field(min_length=1)
    path: Path
    expected_n: Optional[int] = Field(default=None, ge=1)
    expected_m: Optional[int] = Field(default=None, ge=0)


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    datasets: list[DatasetEntry] = Field(min_length=1)
    techniques: list[Technique] = Field(default_factory=lambda: list(ALL_TECHNIQUES), min_length=1)
    fraction: float = Field(default_factory=lambda: get_float("fraction"), gt=0.0, lt=1.0)
    runs: int = Field(default_factory=lambda: get_int("runs"), ge=1)
    master_seed: int = Field(default=0, ge=0, lt=2**64)
    properties: list[PropertyName] = Field(default_factory=lambda: list(PropertyName), min_length=1)
    aggregation: Aggregation = Aggregation.MEAN
    output_dir: Path = Field(default_factory=lambda: Path(get_default("output_dir")))
    formats: list[ReportFormat] = Field(
        default_factory=lambda: [ReportFormat.CSV, ReportFormat.JSON], min_length=1
    )
    workers: int = Field(default_factory=lambda: get_int("workers"), ge=1)
    paired: bool = False
    induction_sweep: bool = False
    sweep_fractions: list[float] = Field(default_factory=lambda: list(DEFAULT_SWEEP), min_length=1)
    forward_burning_p: float = Field(default_factory=lambda: get_float("forward_burning_p"), gt=0.0, lt=1.0)
    flyback_c: float = Field(default_factory=lambda: get_float("flyback_c"), ge=0.0, lt=1.0)
    induction_fraction: float = Field(default_factory=lambda: get_float("induction_fraction"), gt=0.0, le=1.0)
    stall_factor: int = Field(default_factory=lambda: get_int("stall_factor"), ge=1)
    significance: float = Field(default_factory=lambda: get_float("significance"), gt=0.0, lt=1.0)
    ledger_path: Optional[str] = None

    @field_validator("techniques", mode="before")
    @classmethod
    def _upper_techniques(cls, value):
        if isinstance(value, (list, tuple)):
            return [v.strip().upper() if isinstance(v, str) else v for v in value]
        return value

    @field_validator("techniques", "properties", "formats")
    @classmethod
    def _dedupe(cls, value: list) -> list:
        return list(dict.fromkeys(value))

    @field_validator("sweep_fractions")
    @classmethod
    def _check_sweep(cls, value: list[float]) -> list[float]:
        for alpha in value:
            if not 0.0 < alpha <= 1.0:
                raise ValueError(f"sweep fraction {alpha} outside (0, 1]")
        return sorted(set(value))

    @model_validator(mode="after")
    def _unique_dataset_names(self) -> "RunConfig":
        names = [d.name for d in self.datasets]
        duplicates = sorted({n for n in names if names.count(n) > 1})
        if duplicates:
            raise ValueError(f"duplicate dataset names: {duplicates}")
        return self

    def sampler_spec(
        self, technique: Technique, seed: int, induction_fraction: Optional[float] = None
    ) -> SamplerSpec:
        return SamplerSpec(
            technique=technique,
            target_fraction=self.fraction,
            seed=seed,
            forward_burning_p=self.forward_burning_p,
            flyback_c=self.flyback_c,
            induction_fraction=induction_fraction or self.induction_fraction,
            stall_factor=self.stall_factor,
        )


# ---------------------------------------------------------------------------
# Config files
# ---------------------------------------------------------------------------

_LIST_KEYS = {"techniques", "properties", "formats", "sweep_fractions"}
_SCALAR_KEYS = {
    "master_seed", "fraction", "runs", "aggregation", "output_dir", "workers",
    "paired", "induction_sweep", "forward_burning_p", "flyback_c",
    "induction_fraction", "stall_factor", "significance", "ledger_path",
}


def load_config(path: Union[str, Path], **overrides) -> RunConfig:
    """Read a key/value config file; keyword overrides win over file values."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    return _build(dotenv_values(path), path.parent, overrides)


def parse_config(text: str, base_dir: Union[str, Path] = ".", **overrides) -> RunConfig:
    """Same as load_config, from a string."""
    return _build(dotenv_values(stream=io.StringIO(text)), Path(base_dir), overrides)


def _build(values: dict, base_dir: Path, overrides: dict) -> RunConfig:
    raw: dict = {}
    datasets: list[dict] = []

    for key, value in values.items():
        if value is None:
            raise ConfigError("missing value", key=key)
        if key.startswith(DATASET_PREFIX):
            datasets.append(_dataset_entry(key[len(DATASET_PREFIX):], value, base_dir))
        elif key in _LIST_KEYS:
            raw[key] = [item.strip() for item in value.split(",") if item.strip()]
        elif key in _SCALAR_KEYS:
            raw[key] = value.strip()
        else:
            raise ConfigError("unknown configuration key", key=key)

    raw["datasets"] = datasets
    raw.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig.model_validate(raw)
    except ValidationError as exc:
        raise ConfigError(_describe(exc)) from exc


def _dataset_entry(name: str, value: str, base_dir: Path) -> dict:
    key = f"{DATASET_PREFIX}{name}"
    parts = [p.strip() for p in value.split(",")]
    if not name or not parts[0] or len(parts) > 3:
        raise ConfigError("expected '<path>[, <expected_n>, <expected_m>]'", key=key)
    path = Path(parts[0]).expanduser()
    if not path.is_absolute():
        path = base_dir / path
    entry: dict = {"name": name, "path": path}
    for field_name, token in zip(("expected_n", "expected_m"), parts[1:]):
        if token:
            try:
                entry[field_name] = int(token)
            except ValueError:
                raise ConfigError(f"{field_name} must be an integer, got {token!r}", key=key) from None
    return entry


def _describe(exc: ValidationError) -> str:
    problems = []
    for err in exc.errors():
        where = ".".join(str(p) for p in err.get("loc", ())) or "config"
        problems.append(f"{where}: {err.get('msg', 'invalid value')}")
    return "; ".join(problems)
