"""
Run Configuration

All settings of a pipeline run as a tree of dataclasses. Files use flat
dotted keys ("model.learning_rate": 0.001); command-line flags override
file values.
"""

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any, Dict, List, Optional

from .domain.models import IndexKind
from .errors import UsageError
from .model.config import ACTIVATION_NAMES, ModelConfig
from .tuning.space import SearchSpace

DEFAULT_WEATHER = ["temperature", "precipitation", "solar_radiation", "soil_water"]
DEFAULT_SPECIES = ["ACRU", "FAGR", "QURU"]


@dataclass
class PathsConfig:
    """Input files and the output directory."""
    pheno: str = "data/pheno.csv"
    sites: str = "data/sites.csv"
    era5: str = "data/era5.csv"
    raster_dir: str = "data/rasters"
    truth: str = "data/truth_periods.csv"
    output_dir: str = "output"
    checkpoint: Optional[str] = None


@dataclass
class FeatureConfig:
    """Year range, split and the feature columns to assemble."""
    first_year: int = 2015
    last_year: int = 2022
    val_year: int = 2022
    holdout_tree: Optional[str] = None
    index_kinds: List[str] = field(default_factory=lambda: [k.value for k in IndexKind])
    weather_columns: List[str] = field(default_factory=lambda: list(DEFAULT_WEATHER))
    weather_rename: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.first_year > self.last_year:
            raise ValueError(f"first_year {self.first_year} is after last_year {self.last_year}")
        if not self.first_year <= self.val_year <= self.last_year:
            raise ValueError(f"val_year {self.val_year} outside [{self.first_year}, {self.last_year}]")
        for kind in self.index_kinds:
            if kind not in IndexKind.__members__:
                raise ValueError(f"unknown index kind {kind!r}, expected one of {list(IndexKind.__members__)}")

    @property
    def train_years(self) -> List[int]:
        return [y for y in range(self.first_year, self.last_year + 1) if y != self.val_year]

    @property
    def kinds(self) -> List[IndexKind]:
        return [IndexKind(k) for k in self.index_kinds]


@dataclass
class TunerConfig:
    """Hyperband budget, concurrency and the search space."""
    R: int = 30
    eta: int = 3
    seed: int = 7
    jobs: int = 1
    min_layers: int = 1
    max_layers: int = 3
    units: List[int] = field(default_factory=lambda: list(range(32, 513, 32)))
    activations: List[str] = field(default_factory=lambda: list(ACTIVATION_NAMES))
    learning_rates: List[float] = field(default_factory=lambda: [0.01, 0.001, 0.0001])
    dropout_rates: List[float] = field(default_factory=lambda: [0.0, 0.1, 0.2, 0.3, 0.4, 0.5])

    def __post_init__(self):
        if self.R < 1:
            raise ValueError(f"tuner R must be at least 1, got {self.R}")
        if self.eta < 2:
            raise ValueError(f"tuner eta must be at least 2, got {self.eta}")
        if self.jobs < 1:
            raise ValueError(f"jobs must be at least 1, got {self.jobs}")
        self.space()

    def space(self) -> SearchSpace:
        return SearchSpace(
            min_layers=self.min_layers,
            max_layers=self.max_layers,
            units=tuple(self.units),
            activations=tuple(self.activations),
            learning_rates=tuple(self.learning_rates),
            dropout_rates=tuple(self.dropout_rates)
        )


@dataclass
class SynthConfig:
    """Synthetic site: trees, years, leaf-fall onset rule and noise."""
    seed: int = 7
    first_year: int = 2015
    last_year: int = 2022
    tree_count: int = 4
    species: List[str] = field(default_factory=lambda: list(DEFAULT_SPECIES))
    onset_temperature: float = 287.5
    smoothing_days: int = 7
    duration_mean: float = 40.0
    duration_sd: float = 6.0
    temperature_noise: float = 1.5
    index_noise: float = 0.02
    cloud_fraction: float = 0.2
    scene_interval: int = 5
    emit_bands: bool = False

    def __post_init__(self):
        if self.last_year - self.first_year + 1 < 2:
            raise ValueError("synthetic data needs at least two years")
        if self.duration_mean <= 0:
            raise ValueError(f"duration_mean must be positive, got {self.duration_mean}")
        if self.tree_count < 1:
            raise ValueError(f"tree_count must be positive, got {self.tree_count}")
        if not self.species:
            raise ValueError("species pool is empty")
        if not 0.0 <= self.cloud_fraction < 1.0:
            raise ValueError(f"cloud_fraction must be in [0, 1), got {self.cloud_fraction}")
        if self.smoothing_days < 1 or self.scene_interval < 1:
            raise ValueError("smoothing_days and scene_interval must be positive")


PERIOD_RULES = ("envelope", "main_run")


@dataclass
class EvaluationConfig:
    """How predicted labels are turned into leaf-fall periods."""
    period_rule: str = "main_run"
    max_gap_days: int = 7

    def __post_init__(self):
        if self.period_rule not in PERIOD_RULES:
            raise ValueError(f"unknown period_rule {self.period_rule!r}, expected one of {list(PERIOD_RULES)}")
        if self.max_gap_days < 0:
            raise ValueError(f"max_gap_days must be non-negative, got {self.max_gap_days}")

    @property
    def gap_days(self) -> Optional[int]:
        """Argument for extract_periods: None selects the outer envelope."""
        return self.max_gap_days if self.period_rule == "main_run" else None


SECTIONS = ("paths", "features", "model", "tuner", "synth", "evaluation")


@dataclass
class RunConfig:
    """Complete configuration of one pipeline run."""
    paths: PathsConfig = field(default_factory=PathsConfig)
    features: FeatureConfig = field(default_factory=FeatureConfig)
    model: ModelConfig = field(default_factory=ModelConfig)
    tuner: TunerConfig = field(default_factory=TunerConfig)
    synth: SynthConfig = field(default_factory=SynthConfig)
    evaluation: EvaluationConfig = field(default_factory=EvaluationConfig)

    def to_flat_dict(self) -> Dict[str, Any]:
        """Dotted-key view, e.g. {"model.learning_rate": 0.001, ...}."""
        flat = {}
        for section in SECTIONS:
            for key, value in asdict(getattr(self, section)).items():
                flat[f"{section}.{key}"] = value
        return flat

    @classmethod
    def from_flat_dict(cls, values: Dict[str, Any]) -> "RunConfig":
        """
        Defaults updated with dotted keys.

        Raises:
            UsageError: unknown key or invalid value
        """
        changes: Dict[str, Dict[str, Any]] = {section: {} for section in SECTIONS}
        defaults = cls()
        for key, value in values.items():
            section, _, name = key.partition(".")
            if section not in changes or not name:
                raise UsageError(f"unknown config key '{key}'")
            allowed = {f.name for f in fields(getattr(defaults, section))}
            if name not in allowed:
                raise UsageError(f"unknown config key '{key}'")
            changes[section][name] = value

        try:
            return cls(
                paths=replace(defaults.paths, **changes["paths"]),
                features=replace(defaults.features, **changes["features"]),
                model=defaults.model.replace(**changes["model"]),
                tuner=replace(defaults.tuner, **changes["tuner"]),
                synth=replace(defaults.synth, **changes["synth"]),
                evaluation=replace(defaults.evaluation, **changes["evaluation"])
            )
        except (TypeError, ValueError) as exc:
            raise UsageError(f"invalid configuration: {exc}")

    def with_overrides(
        self,
        seed: Optional[int] = None,
        jobs: Optional[int] = None,
        out: Optional[str] = None,
        epochs: Optional[int] = None
    ) -> "RunConfig":
        """Apply command-line flags; --seed sets every seed of the run."""
        flat = self.to_flat_dict()
        if seed is not None:
            flat["model.seed"] = seed
            flat["tuner.seed"] = seed
            flat["synth.seed"] = seed
        if jobs is not None:
            flat["tuner.jobs"] = jobs
        if out is not None:
            flat["paths.output_dir"] = out
        if epochs is not None:
            flat["model.epochs"] = epochs
        return RunConfig.from_flat_dict(flat)

    def config_hash(self) -> str:
        """sha256 of the canonical dotted-key JSON."""
        canonical = json.dumps(self.to_flat_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def dataset_key(self, input_fingerprint: str = "") -> str:
        """
        sha256 of the settings that determine the feature table.

        Args:
            input_fingerprint: Digest of the input file contents, so a
                changed file under an unchanged path gives a new key
        """
        inputs = ("paths.pheno", "paths.sites", "paths.era5", "paths.raster_dir")
        relevant = {
            key: value for key, value in self.to_flat_dict().items()
            if key.startswith("features.") or key in inputs
        }
        relevant["inputs"] = input_fingerprint
        canonical = json.dumps(relevant, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
