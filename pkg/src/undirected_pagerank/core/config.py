"""Configuration management for undirected-pagerank."""

import logging
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

import toml
import yaml
from typing_extensions import Self

logger = logging.getLogger(__name__)


@dataclass
class SolverSettings:
    """Defaults for the PageRank solvers."""
    damping: float = 0.85
    tol: float = 1e-12
    max_iter: int = 100_000
    rank_method: str = "power"  # power, linear, oracle
    check_method: str = "linear"


@dataclass
class CheckSettings:
    """Tolerances for bound and identity checks."""
    slack: float = 1e-9


@dataclass
class GeneratorSettings:
    """Random graph generation settings."""
    max_retries: int = 100
    require_assumption: bool = True


@dataclass
class SweepSettings:
    """Sweep harness settings."""
    workers: int = 1


@dataclass
class OutputSettings:
    """Output formatting."""
    format: str = "text"  # text, json, csv
    json_indent: int = 2
    float_format: str = "%.17g"


@dataclass
class LoggingSettings:
    """Diagnostic stream settings."""
    level: str = "WARNING"


@dataclass
class Config:
    """Main configuration class."""
    solver: SolverSettings = field(default_factory=SolverSettings)
    check: CheckSettings = field(default_factory=CheckSettings)
    generator: GeneratorSettings = field(default_factory=GeneratorSettings)
    sweep: SweepSettings = field(default_factory=SweepSettings)
    output: OutputSettings = field(default_factory=OutputSettings)
    logging: LoggingSettings = field(default_factory=LoggingSettings)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> Self:
        """Create config from dictionary."""
        return cls(
            solver=SolverSettings(**data.get("solver", {})),
            check=CheckSettings(**data.get("check", {})),
            generator=GeneratorSettings(**data.get("generator", {})),
            sweep=SweepSettings(**data.get("sweep", {})),
            output=OutputSettings(**data.get("output", {})),
            logging=LoggingSettings(**data.get("logging", {})),
        )

    def to_dict(self) -> Dict[str, Any]:
        """Convert config to dictionary."""
        return {
            "solver": asdict(self.solver),
            "check": asdict(self.check),
            "generator": asdict(self.generator),
            "sweep": asdict(self.sweep),
            "output": asdict(self.output),
            "logging": asdict(self.logging),
        }


class ConfigManager:
    """Manages loading and saving configuration."""

    DEFAULT_CONFIG_DIR = Path.home() / ".config" / "undirected-pagerank"
    DEFAULT_CONFIG_FILE = "config.yaml"
    ENV_PREFIX = "UNDIRECTED_PAGERANK_"

    def __init__(self, config_dir: Optional[Path] = None):
        """Initialize config manager.

        Args:
            config_dir: Custom config directory (defaults to ~/.config/undirected-pagerank)
        """
        self.config_dir = config_dir or self.DEFAULT_CONFIG_DIR
        self.config = Config()

    @property
    def config_file(self) -> Path:
        return self.config_dir / self.DEFAULT_CONFIG_FILE

    def ensure_config_dir(self) -> None:
        """Create config directory if it doesn't exist."""
        self.config_dir.mkdir(parents=True, exist_ok=True)

    def load(self) -> Config:
        """Load configuration from file, falling back to defaults.

        Unlike saving, loading never touches the filesystem beyond reading.
        """
        if self.config_file.exists():
            try:
                with open(self.config_file, "r") as f:
                    data = yaml.safe_load(f) or {}
                self.config = Config.from_dict(data)
            except (yaml.YAMLError, TypeError, AttributeError, OSError) as e:
                logger.warning("Error loading config %s: %s", self.config_file, e)
                self.config = Config()
        else:
            toml_file = self.config_dir / "config.toml"
            if toml_file.exists():
                try:
                    with open(toml_file, "r") as f:
                        self.config = Config.from_dict(toml.load(f))
                except (toml.TomlDecodeError, TypeError, AttributeError, OSError) as e:
                    logger.warning("Error loading TOML config %s: %s", toml_file, e)
                    self.config = Config()
            else:
                self.config = Config()

        self._apply_env_overrides()

        return self.config

    def save(self) -> None:
        """Save current configuration to file."""
        self.ensure_config_dir()

        try:
            with open(self.config_file, "w") as f:
                yaml.dump(self.config.to_dict(), f, default_flow_style=False)
        except OSError as e:
            logger.warning("Error saving config: %s", e)

    def _env(self, name: str) -> Optional[str]:
        return os.environ.get(self.ENV_PREFIX + name)

    def _apply_env_overrides(self) -> None:
        """Apply environment variable overrides to config."""
        float_overrides = (
            ("DAMPING", self.config.solver, "damping"),
            ("TOL", self.config.solver, "tol"),
            ("SLACK", self.config.check, "slack"),
        )
        for name, section, attr in float_overrides:
            if raw := self._env(name):
                try:
                    setattr(section, attr, float(raw))
                except ValueError:
                    logger.warning("Ignoring %s%s=%r: not a number", self.ENV_PREFIX, name, raw)

        int_overrides = (
            ("MAX_ITER", self.config.solver, "max_iter"),
            ("WORKERS", self.config.sweep, "workers"),
        )
        for name, section, attr in int_overrides:
            if raw := self._env(name):
                try:
                    setattr(section, attr, int(raw))
                except ValueError:
                    logger.warning("Ignoring %s%s=%r: not an integer", self.ENV_PREFIX, name, raw)

        if level := self._env("LOG_LEVEL"):
            self.config.logging.level = level.upper()

    def reset_to_defaults(self) -> None:
        """Reset configuration to defaults."""
        self.config = Config()
        self.save()


# Global config instance
_config_manager: Optional[ConfigManager] = None


def get_config_manager() -> ConfigManager:
    """Get the global config manager instance."""
    global _config_manager
    if _config_manager is None:
        _config_manager = ConfigManager()
        _config_manager.load()
    return _config_manager


def set_config_manager(manager: Optional[ConfigManager]) -> None:
    """Replace the global config manager (``None`` forces a reload on next use)."""
    global _config_manager
    _config_manager = manager


def get_config() -> Config:
    """Get the current configuration."""
    return get_config_manager().config
