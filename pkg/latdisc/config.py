"""Configuration manager for latdisc.

This module loads configuration from environment variables and config files,
and provides a centralized way to access configuration values.
"""

import os
import json
from pathlib import Path
from typing import Dict, Any
from dotenv import load_dotenv

# Load .env file if it exists
load_dotenv()

# Default configuration
DEFAULT_CONFIG = {
    "log_level": "INFO",
    "log_dir": "",
    "workers": 1,
    "output_format": "csv",
    "cache_path": "",
    "cache_verify_fraction": 0.01,
    "seed": 20240101,
    "quad_points": 64,
    "grid_m": 64,
    "mc_samples": 4096,
    "shift_chunk_elements": 262144,
    "theta": 2.0 / 3.0,
    "epsilon": 0.01,
    "area_deviation_beta": 0.5,
}

_INT_KEYS = {
    "workers",
    "seed",
    "quad_points",
    "grid_m",
    "mc_samples",
    "shift_chunk_elements",
}

_FLOAT_KEYS = {
    "cache_verify_fraction",
    "theta",
    "epsilon",
    "area_deviation_beta",
}


class ConfigManager:
    """Configuration manager for the application."""

    def __init__(self) -> None:
        """Initialize the configuration manager."""
        self.config = DEFAULT_CONFIG.copy()
        self._load_config()

    def _load_config(self) -> None:
        """Load configuration from file if available."""
        project_root = Path(__file__).parent.parent.absolute()
        config_path = project_root / "config.json"

        if config_path.exists():
            try:
                with open(config_path, "r") as f:
                    file_config = json.load(f)
                    self.config.update(file_config)
            except (json.JSONDecodeError, IOError) as e:
                print(f"Error loading config file: {e}")

        self._override_from_env()

    def _override_from_env(self) -> None:
        """Override configuration with environment variables."""
        env_map = {
            "LATDISC_LOG_LEVEL": "log_level",
            "LATDISC_LOG_DIR": "log_dir",
            "LATDISC_WORKERS": "workers",
            "LATDISC_OUTPUT_FORMAT": "output_format",
            "LATDISC_CACHE": "cache_path",
            "LATDISC_CACHE_VERIFY_FRACTION": "cache_verify_fraction",
            "LATDISC_SEED": "seed",
            "LATDISC_QUAD_POINTS": "quad_points",
            "LATDISC_GRID_M": "grid_m",
            "LATDISC_MC_SAMPLES": "mc_samples",
            "LATDISC_SHIFT_CHUNK_ELEMENTS": "shift_chunk_elements",
            "LATDISC_THETA": "theta",
            "LATDISC_EPSILON": "epsilon",
            "LATDISC_AREA_DEVIATION_BETA": "area_deviation_beta",
        }

        for env_var, config_key in env_map.items():
            if env_var not in os.environ:
                continue
            raw = os.environ[env_var]
            if config_key in _INT_KEYS:
                try:
                    self.config[config_key] = int(raw)
                except ValueError:
                    # Keep default if conversion fails
                    pass
            elif config_key in _FLOAT_KEYS:
                try:
                    self.config[config_key] = float(raw)
                except ValueError:
                    pass
            else:
                self.config[config_key] = raw

    def get(self, key: str, default: Any = None) -> Any:
        """Get a configuration value.

        Args:
            key: The configuration key to get
            default: Default value if key doesn't exist

        Returns:
            The configuration value or default
        """
        return self.config.get(key, default)

    def get_all(self) -> Dict[str, Any]:
        """Get all configuration values.

        Returns:
            Dictionary of all configuration values
        """
        return self.config.copy()

    def reload(self) -> None:
        """Re-read defaults, config.json and the environment."""
        self.config = DEFAULT_CONFIG.copy()
        self._load_config()


# Singleton instance
config = ConfigManager()
