"""
Configuration Management
Handles toolkit configuration, tolerances and computation budgets
"""

import os
import copy
import yaml
from typing import Dict, Any, Optional
from pathlib import Path
from dataclasses import dataclass, replace
from dotenv import load_dotenv


@dataclass(frozen=True)
class Tolerances:
    """Numeric tolerances shared by all computations"""
    exactness: float = 1e-10
    report: float = 1e-8
    verdict: float = 1e-6


@dataclass(frozen=True)
class Budget:
    """Search budget for randomized estimators"""
    restarts: int = 32
    iterations: int = 200
    level_cap: int = 3
    depth: int = 40
    factorization_cap: int = 0  # 0 means 2n at level n
    max_workers: int = 1
    seed: int = 0

    def with_seed(self, seed: int) -> "Budget":
        """Copy of this budget with another seed"""
        return replace(self, seed=seed)

    def scaled(self, restarts: Optional[int] = None, iterations: Optional[int] = None) -> "Budget":
        """Copy with smaller or larger search effort"""
        return replace(
            self,
            restarts=restarts if restarts is not None else self.restarts,
            iterations=iterations if iterations is not None else self.iterations
        )


DEFAULT_TOLERANCES = Tolerances()
DEFAULT_BUDGET = Budget()


class Config:
    """Main configuration class"""

    DEFAULT_CONFIG = {
        "toolkit": {
            "name": "opspace-toolkit",
            "version": "1.0.0",
            "debug": False
        },
        "paths": {
            "logs": "logs",
            "reports": "reports"
        },
        "logging": {
            "level": "WARNING",
            "max_file_size": "10 MB",
            "backup_count": 5,
            "console_output": True,
            "file_output": False
        },
        "run": {
            "seed": 20240601,
            "output": None
        },
        "tolerances": {
            "exactness": 1e-10,
            "report": 1e-8,
            "verdict": 1e-6
        },
        "budgets": {
            "restarts": 32,
            "iterations": 200,
            "level_cap": 3,
            "depth": 40,
            "factorization_cap": 0
        },
        "execution": {
            "max_workers": 4
        },
        "performance": {
            "monitoring_enabled": True,
            "duration_warning_seconds": 60
        }
    }

    def __init__(self, config_path: Optional[str] = None):
        """
        Initialize configuration

        Args:
            config_path: Optional path to configuration file
        """
        load_dotenv()

        self.base_path = Path(os.getcwd())
        self.config = copy.deepcopy(self.DEFAULT_CONFIG)

        if config_path:
            self.load_from_file(config_path)
        else:
            default_paths = [
                self.base_path / "configs" / "config.yaml",
                self.base_path / "config.yaml",
                Path.home() / ".opspace_toolkit" / "config.yaml"
            ]

            for path in default_paths:
                if path.exists():
                    self.load_from_file(str(path))
                    break

        self.load_from_env()

    def load_from_file(self, file_path: str) -> None:
        """
        Load configuration from YAML file

        Args:
            file_path: Path to configuration file
        """
        from .error_codes import ConfigurationError, ErrorCode

        try:
            with open(file_path, 'r', encoding='utf-8') as f:
                file_config = yaml.safe_load(f)
        except (OSError, yaml.YAMLError) as e:
            raise ConfigurationError(
                f"Could not load config from {file_path}: {e}",
                context={"path": str(file_path), "code": ErrorCode.CONFIGURATION_LOAD_FAILED.value}
            )

        if file_config:
            if not isinstance(file_config, dict):
                raise ConfigurationError(
                    f"Config file {file_path} must contain a mapping",
                    context={"path": str(file_path)}
                )
            self._deep_update(self.config, file_config)

    def load_from_env(self) -> None:
        """Load configuration from environment variables"""
        env_mappings = {
            "OPSPACE_DEBUG": ("toolkit", "debug", bool),
            "OPSPACE_LOG": ("logging", "level", str),
            "OPSPACE_SEED": ("run", "seed", int),
            "OPSPACE_OUT": ("run", "output", str),
            "OPSPACE_WORKERS": ("execution", "max_workers", int),
        }

        for env_var, (section, key, type_func) in env_mappings.items():
            value = os.getenv(env_var)
            if value is not None:
                if type_func == bool:
                    value = value.lower() in ('true', '1', 'yes')
                elif type_func == str and key == "level":
                    value = value.upper()
                else:
                    value = type_func(value)
                self.config.setdefault(section, {})[key] = value

    def _deep_update(self, target: Dict, source: Dict) -> None:
        """
        Deep update dictionary

        Args:
            target: Target dictionary
            source: Source dictionary
        """
        for key, value in source.items():
            if key in target and isinstance(target[key], dict) and isinstance(value, dict):
                self._deep_update(target[key], value)
            else:
                target[key] = value

    def get(self, key: str, default: Any = None) -> Any:
        """
        Get configuration value

        Args:
            key: Dot-separated configuration key (e.g., 'tolerances.report')
            default: Default value if key not found

        Returns:
            Configuration value
        """
        keys = key.split('.')
        value = self.config

        for k in keys:
            if isinstance(value, dict) and k in value:
                value = value[k]
            else:
                return default

        return value

    def set(self, key: str, value: Any) -> None:
        """
        Set configuration value

        Args:
            key: Dot-separated configuration key
            value: Value to set
        """
        keys = key.split('.')
        config = self.config

        for k in keys[:-1]:
            if k not in config:
                config[k] = {}
            config = config[k]

        config[keys[-1]] = value

    def get_path(self, path_type: str) -> Path:
        """
        Get full path for a path type

        Args:
            path_type: Path type (logs, reports)

        Returns:
            Full path
        """
        relative_path = self.config["paths"].get(path_type, path_type)
        return self.base_path / relative_path

    def run_config(self, **overrides: Any):
        """
        Build the validated run configuration

        Args:
            **overrides: seed, output, level_cap, depth (None values are ignored)

        Returns:
            RunConfig model
        """
        from .validation import validate_run_config

        data = {
            "seed": self.get("run.seed"),
            "output": self.get("run.output"),
            "tolerances": dict(self.get("tolerances", {})),
            "budgets": dict(self.get("budgets", {})),
            "max_workers": self.get("execution.max_workers", 1),
        }
        for key in ("seed", "output", "max_workers"):
            if overrides.get(key) is not None:
                data[key] = overrides[key]
        for key in ("level_cap", "depth", "restarts", "iterations"):
            if overrides.get(key) is not None:
                data["budgets"][key] = overrides[key]

        return validate_run_config(data)

    def save(self, file_path: Optional[str] = None) -> None:
        """
        Save configuration to file

        Args:
            file_path: Optional path to save configuration
        """
        if not file_path:
            file_path = self.base_path / "configs" / "config.yaml"

        file_path = Path(file_path)
        file_path.parent.mkdir(parents=True, exist_ok=True)

        with open(file_path, 'w', encoding='utf-8') as f:
            yaml.dump(self.config, f, default_flow_style=False)

    def to_dict(self) -> Dict[str, Any]:
        """Return configuration as dictionary"""
        return copy.deepcopy(self.config)
