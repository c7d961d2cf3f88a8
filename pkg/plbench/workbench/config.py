"""
Configuration loader for the workbench CLI.

The loader merges values in the following precedence order:
1. Command-line overrides (handled by Typer options)
2. Environment variables / .env
3. plbench.toml (if present)
4. Built-in defaults
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Callable
import os

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from dotenv import load_dotenv

from plbench.workbench.utils.parsing import parse_bool

DEFAULT_SEED = 20240917
MAX_VARIABLES = 8


@dataclass(slots=True)
class LimitsConfig:
    max_pairs: int = 50_000
    max_degree: int = 64
    max_variables: int = MAX_VARIABLES


@dataclass(slots=True)
class NumericsConfig:
    seed: int = DEFAULT_SEED
    horizon: float = 1e6
    puiseux_order: int = 4
    rmax: float = 1e6
    radii: int = 13
    angles: int = 16


@dataclass(slots=True)
class OutputConfig:
    directory: Path | None = None
    csv: bool = False


@dataclass(slots=True)
class WorkbenchConfig:
    limits: LimitsConfig
    numerics: NumericsConfig
    output: OutputConfig

    def as_rows(self) -> list[tuple[str, str]]:
        rows: list[tuple[str, str]] = []
        for section_name in ("limits", "numerics", "output"):
            section = asdict(getattr(self, section_name))
            for key, value in section.items():
                rows.append((f"{section_name}.{key}", "" if value is None else str(value)))
        return rows


def load_config(config_path: Path | None = None) -> WorkbenchConfig:
    """Load configuration from files and environment variables."""
    _load_env_file()
    toml_data = _load_toml(config_path)
    return WorkbenchConfig(
        limits=_build_limits_config(toml_data),
        numerics=_build_numerics_config(toml_data),
        output=_build_output_config(toml_data),
    )


def _load_env_file() -> None:
    load_dotenv(Path.cwd() / ".env", override=False)


def _load_toml(config_path: Path | None) -> dict[str, Any]:
    """Read plbench.toml or an explicitly supplied file if present."""
    path = config_path
    if path is None:
        default = Path("plbench.toml")
        if default.exists():
            path = default
    if path is None:
        return {}
    if not path.exists():
        raise ValueError(f"Config file {path} does not exist.")
    with path.open("rb") as fh:
        return tomllib.load(fh)


def _build_limits_config(data: dict[str, Any]) -> LimitsConfig:
    section = data.get("limits", {})
    defaults = LimitsConfig()
    max_pairs = _number("PLBENCH_MAX_PAIRS", section.get("max_pairs"), defaults.max_pairs, int)
    max_degree = _number("PLBENCH_MAX_DEGREE", section.get("max_degree"), defaults.max_degree, int)
    max_variables = _number("PLBENCH_MAX_VARIABLES", section.get("max_variables"), defaults.max_variables, int)
    if max_pairs < 1:
        raise ValueError("limits.max_pairs must be positive")
    if not 1 <= max_degree <= 64:
        raise ValueError("limits.max_degree must lie in [1, 64]")
    if not 1 <= max_variables <= MAX_VARIABLES:
        raise ValueError(f"limits.max_variables must lie in [1, {MAX_VARIABLES}]")
    return LimitsConfig(max_pairs=max_pairs, max_degree=max_degree, max_variables=max_variables)


def _build_numerics_config(data: dict[str, Any]) -> NumericsConfig:
    section = data.get("numerics", {})
    defaults = NumericsConfig()
    numerics = NumericsConfig(
        seed=_number("PLBENCH_SEED", section.get("seed"), defaults.seed, int),
        horizon=_number("PLBENCH_HORIZON", section.get("horizon"), defaults.horizon, float),
        puiseux_order=_number("PLBENCH_PUISEUX_ORDER", section.get("puiseux_order"), defaults.puiseux_order, int),
        rmax=_number("PLBENCH_RMAX", section.get("rmax"), defaults.rmax, float),
        radii=_number("PLBENCH_RADII", section.get("radii"), defaults.radii, int),
        angles=_number("PLBENCH_ANGLES", section.get("angles"), defaults.angles, int),
    )
    if numerics.horizon < 10:
        raise ValueError("numerics.horizon must be at least 10")
    if numerics.rmax <= 1:
        raise ValueError("numerics.rmax must exceed 1")
    if numerics.puiseux_order < 1:
        raise ValueError("numerics.puiseux_order must be positive")
    if numerics.radii < 2 or numerics.angles < 1:
        raise ValueError("numerics.radii must be >= 2 and numerics.angles >= 1")
    return numerics


def _build_output_config(data: dict[str, Any]) -> OutputConfig:
    section = data.get("output", {})
    directory = os.environ.get("PLBENCH_OUTPUT_DIR") or section.get("directory")
    csv_raw = os.environ.get("PLBENCH_CSV") or section.get("csv", False)
    return OutputConfig(
        directory=Path(directory).expanduser() if directory else None,
        csv=parse_bool(csv_raw if isinstance(csv_raw, (str, bool)) else bool(csv_raw)),
    )


def _number(env_key: str, file_value: Any, default: Any, cast: Callable[[Any], Any]) -> Any:
    raw = os.environ.get(env_key)
    if raw is None or raw == "":
        raw = file_value
    if raw is None:
        return default
    try:
        return cast(raw)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{env_key} must be a number, got {raw!r}") from exc
