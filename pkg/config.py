"""
Configuration Management System for Mikado
Handles file-based and environment-based configuration of the analysis pipeline.
"""
import os
import json
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv

from models import AlignStrategy, DistanceMode, InterceptMode, Linkage, TraceAggregation
from exceptions import ConfigurationError

# Load .env file
load_dotenv()

DEFAULT_OUTPUT_DIR = "mikado_out"


@dataclass
class SimilarityConfig:
    """Similarity measure settings."""
    sequence_self_pairs: bool = False


@dataclass
class ClusteringConfig:
    """Dendrogram construction settings."""
    distance_mode: DistanceMode = DistanceMode.ROW_EUCLIDEAN
    linkage: Linkage = Linkage.AVERAGE


@dataclass
class ComplexityConfig:
    """Redesign complexity settings."""
    trace_aggregation: TraceAggregation = TraceAggregation.MEAN
    strict_summation: bool = False


@dataclass
class MojoConfig:
    """Decomposition comparison settings."""
    strategy: AlignStrategy = AlignStrategy.BIGGEST_CLUSTER
    reference_is_b: bool = True
    enumeration_limit: int = 12


@dataclass
class AnalysisConfig:
    """Sweep and regression settings."""
    step: int = 10
    n_min: int = 3
    n_max: int = 10
    intercept: InterceptMode = InterceptMode.NONE
    workers: int = field(default_factory=lambda: os.cpu_count() or 1)


@dataclass
class OutputConfig:
    """Artifact output settings."""
    directory: str = DEFAULT_OUTPUT_DIR
    decimals: int = 6


@dataclass
class SystemConfig:
    """System-wide settings."""
    log_level: str = "INFO"
    version: str = "1.0.0"


@dataclass
class MikadoConfig:
    """Complete configuration for a Mikado pipeline run."""
    system: SystemConfig = field(default_factory=SystemConfig)
    similarity: SimilarityConfig = field(default_factory=SimilarityConfig)
    clustering: ClusteringConfig = field(default_factory=ClusteringConfig)
    complexity: ComplexityConfig = field(default_factory=ComplexityConfig)
    mojo: MojoConfig = field(default_factory=MojoConfig)
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    @property
    def n_range(self) -> range:
        return range(self.analysis.n_min, self.analysis.n_max + 1)

    def validate(self) -> None:
        """
        Validate configuration settings.

        Raises:
            ConfigurationError: If configuration is invalid
        """
        step = self.analysis.step
        if step <= 0 or 100 % step != 0:
            raise ConfigurationError(
                f"Weight step must be a positive divisor of 100, got {step}",
                component="ConfigManager"
            )

        if self.analysis.n_min < 1 or self.analysis.n_max < self.analysis.n_min:
            raise ConfigurationError(
                f"Cluster range {self.analysis.n_min}..{self.analysis.n_max} is empty or invalid",
                component="ConfigManager"
            )

        if self.analysis.workers < 1:
            raise ConfigurationError(
                f"Workers must be at least 1, got {self.analysis.workers}",
                component="ConfigManager"
            )

        if self.mojo.enumeration_limit < 1:
            raise ConfigurationError(
                f"Enumeration limit must be positive, got {self.mojo.enumeration_limit}",
                component="ConfigManager"
            )

        if not 0 <= self.output.decimals <= 15:
            raise ConfigurationError(
                f"Decimal places must be between 0 and 15, got {self.output.decimals}",
                component="ConfigManager"
            )

    def to_dict(self) -> Dict[str, Any]:
        """Convert config to a JSON-friendly dictionary (enums by value)."""
        def plain(value: Any) -> Any:
            if isinstance(value, dict):
                return {k: plain(v) for k, v in value.items()}
            return getattr(value, "value", value)

        data = plain(asdict(self))
        # Worker count never changes results, keep it out of run manifests.
        data["analysis"].pop("workers", None)
        return data


_ENUM_FIELDS = {
    ("clustering", "distance_mode"): DistanceMode,
    ("clustering", "linkage"): Linkage,
    ("complexity", "trace_aggregation"): TraceAggregation,
    ("mojo", "strategy"): AlignStrategy,
    ("analysis", "intercept"): InterceptMode,
}

_ENV_OVERRIDES = {
    "MIKADO_OUTPUT_DIR": ("output", "directory", str),
    "MIKADO_LOG_LEVEL": ("system", "log_level", lambda v: v.upper()),
    "MIKADO_WORKERS": ("analysis", "workers", int),
    "MIKADO_STEP": ("analysis", "step", int),
    "MIKADO_LINKAGE": ("clustering", "linkage", lambda v: Linkage(v.upper())),
    "MIKADO_DISTANCE_MODE": ("clustering", "distance_mode", lambda v: DistanceMode(v.upper())),
}


class ConfigManager:
    """
    Manages configuration loading from files and environment variables.
    Implements fail-fast principle for invalid configurations.
    """

    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize configuration manager.

        Args:
            config_path: Optional path to JSON config file
        """
        self.config_path = config_path
        self._config: Optional[MikadoConfig] = None

    def load(self, overrides: Optional[Dict[str, Dict[str, Any]]] = None) -> MikadoConfig:
        """
        Load configuration from file, environment and explicit overrides.
        Priority: Overrides (CLI flags) > Environment Variables > Config File > Defaults

        Args:
            overrides: Section -> {field: value} mapping, None values are ignored

        Returns:
            MikadoConfig: Validated configuration

        Raises:
            ConfigurationError: If configuration is invalid
        """
        config = MikadoConfig()

        if self.config_path:
            config = self._load_from_file(self.config_path)

        config = self._load_from_environment(config)

        if overrides:
            self._apply_sections(config, overrides, source="flags")

        config.validate()

        self._config = config
        return config

    def _load_from_file(self, file_path: str) -> MikadoConfig:
        """
        Load configuration from JSON file.

        Raises:
            ConfigurationError: If file cannot be loaded
        """
        path = Path(file_path)
        if not path.exists():
            raise ConfigurationError(
                f"Configuration file not found: {file_path}",
                component="ConfigManager"
            )

        try:
            with open(path, "r", encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigurationError(
                f"Invalid JSON in configuration file: {e}",
                component="ConfigManager"
            )

        if not isinstance(data, dict):
            raise ConfigurationError(
                "Configuration file must contain a JSON object",
                component="ConfigManager"
            )

        config = MikadoConfig()
        self._apply_sections(config, data, source=file_path)
        return config

    def _apply_sections(self, config: MikadoConfig, data: Dict[str, Any], source: str) -> None:
        for section_name, values in data.items():
            section = getattr(config, section_name, None)
            if section is None or not isinstance(values, dict):
                raise ConfigurationError(
                    f"Unknown configuration section {section_name!r} in {source}",
                    component="ConfigManager"
                )
            for key, value in values.items():
                if value is None:
                    continue
                if not hasattr(section, key):
                    raise ConfigurationError(
                        f"Unknown configuration key {section_name}.{key} in {source}",
                        component="ConfigManager"
                    )
                enum_type = _ENUM_FIELDS.get((section_name, key))
                if enum_type is not None:
                    try:
                        value = enum_type(str(getattr(value, "value", value)).upper())
                    except ValueError:
                        raise ConfigurationError(
                            f"Invalid value {value!r} for {section_name}.{key}",
                            component="ConfigManager",
                            context={"allowed": [m.value for m in enum_type]}
                        )
                setattr(section, key, value)

    def _load_from_environment(self, config: MikadoConfig) -> MikadoConfig:
        """Override configuration with MIKADO_* environment variables."""
        for env_name, (section_name, key, convert) in _ENV_OVERRIDES.items():
            raw = os.getenv(env_name)
            if not raw:
                continue
            try:
                setattr(getattr(config, section_name), key, convert(raw))
            except ValueError:
                raise ConfigurationError(
                    f"Invalid {env_name}: {raw}",
                    component="ConfigManager"
                )
        return config

    @property
    def config(self) -> MikadoConfig:
        """
        Get current configuration.

        Raises:
            ConfigurationError: If configuration not loaded
        """
        if self._config is None:
            raise ConfigurationError(
                "Configuration not loaded. Call load() first.",
                component="ConfigManager"
            )
        return self._config


def load_config(
    config_path: Optional[str] = None,
    overrides: Optional[Dict[str, Dict[str, Any]]] = None
) -> MikadoConfig:
    """
    Load and validate configuration.

    Args:
        config_path: Optional path to configuration file
        overrides: Optional CLI flag values, applied last

    Returns:
        MikadoConfig: Validated configuration
    """
    return ConfigManager(config_path).load(overrides)
