"""
Harness configuration.

Defaults ship in ``data/defaults.json``; a ``key=value`` text file and then
explicit command-line flags override them, in that order.
"""

import json
import logging
from dataclasses import asdict, dataclass, fields, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from ..exceptions import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_DATA_DIR = Path(__file__).resolve().parents[2] / "data"


@dataclass(frozen=True)
class HarnessConfig:
    """Resolved settings for one harness invocation."""

    expander_degree: int = 4
    min_h0: float = 0.1
    exhaustive_cap: int = 22
    spectral_tolerance: float = 1e-6
    dense_cutoff: int = 1500
    expander_attempts: int = 64
    d: int = 3
    densest_expander_d: int = 6
    t: float = 0.5
    delta: float = 1.0
    beta: float = 2.5
    densest_beta: float = 3.0
    host_slack: int = 1
    max_regrowths: int = 8
    mode: str = "uniform"
    adapter: str = "recompute"
    seed: Optional[int] = 0
    trials: int = 1
    workers: int = 1
    precision: int = 6

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def override(self, values: Mapping[str, Any]) -> "HarnessConfig":
        """Copy with ``values`` applied; ``None`` values are skipped."""
        known = {f.name for f in fields(self)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigError(f"Unknown configuration key(s): {', '.join(unknown)}")
        changes = {key: value for key, value in values.items() if value is not None}
        for key, value in changes.items():
            default = getattr(self, key)
            if isinstance(default, bool) or default is None:
                continue
            if isinstance(default, (int, float)) and not isinstance(value, (int, float, Fraction)):
                raise ConfigError(f"Configuration key {key} expects a number, got {value!r}")
            if isinstance(default, int) and not isinstance(default, bool):
                if isinstance(value, float) or isinstance(value, Fraction):
                    if value != int(value):
                        raise ConfigError(f"Configuration key {key} expects an integer, got {value}")
                    changes[key] = int(value)
            elif isinstance(default, float):
                changes[key] = float(value)
        return replace(self, **changes)

    def gadget_options(self, family: str, seed: Optional[int]) -> Dict[str, Any]:
        """Keyword options handed to the driver factories."""
        densest = family == "densest"
        return {
            "seed": seed,
            "t": self.t,
            "delta": self.delta,
            "beta": self.densest_beta if densest else self.beta,
            "d": self.d,
            "expander_d": self.densest_expander_d,
            "expander_degree": self.expander_degree,
            "min_h0": self.min_h0,
            "max_regrowths": self.max_regrowths,
        }


def _load_json(file_path: Path) -> Dict:
    try:
        with open(file_path, 'r') as f:
            return json.load(f)
    except FileNotFoundError:
        raise FileNotFoundError(f"Configuration file not found: {file_path}")
    except json.JSONDecodeError as e:
        raise ValueError(f"Invalid JSON in {file_path}: {e}")


def parse_value(text: str) -> Union[int, float, bool, Fraction, str, None]:
    """int, float, bool, ``p/q`` fraction, ``none`` or plain string."""
    value = text.strip()
    lowered = value.lower()
    if lowered in ("true", "yes", "on"):
        return True
    if lowered in ("false", "no", "off"):
        return False
    if lowered in ("none", "null"):
        return None
    try:
        return int(value)
    except ValueError:
        pass
    try:
        return float(value)
    except ValueError:
        pass
    if "/" in value:
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            pass
    return value


def parse_config_text(text: str, source: str = "<config>") -> Dict[str, Any]:
    """Read ``key=value`` lines; blank lines and ``#`` comments are ignored."""
    values = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{number}: expected key=value, got {raw.strip()!r}")
        key, value = line.split("=", 1)
        key = key.strip().replace("-", "_")
        if not key:
            raise ConfigError(f"{source}:{number}: empty key")
        values[key] = parse_value(value)
    return values


def load_config(config_file: Optional[str] = None, data_dir: Optional[str] = None,
                overrides: Optional[Mapping[str, Any]] = None) -> HarnessConfig:
    """
    Resolve the configuration: defaults.json < config file < overrides.

    Args:
        config_file: optional ``key=value`` text file.
        data_dir: directory holding ``defaults.json``.
        overrides: explicit values, typically the CLI flags that were given.

    Raises:
        FileNotFoundError: defaults or config file missing.
        ValueError: malformed defaults.json.
        ConfigError: unknown key or badly typed value.
    """
    base = Path(data_dir) if data_dir else DEFAULT_DATA_DIR
    config = HarnessConfig().override(_load_json(base / "defaults.json"))
    if config_file:
        path = Path(config_file)
        if not path.exists():
            raise FileNotFoundError(f"Configuration file not found: {path}")
        config = config.override(parse_config_text(path.read_text(), str(path)))
    if overrides:
        config = config.override(overrides)
    logger.debug("Resolved configuration: %s", config)
    return config
