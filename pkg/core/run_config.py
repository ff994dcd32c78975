# core/run_config.py
"""
Run Configuration - flat `key = value` parameter files

Units are fixed by the format: GHz for frequencies, gaps and rates, mPhi0
for flux, K for temperature. Levels are given either by intercepts or by
the two crossing locations (mirror-symmetric well construction).
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Optional, Tuple, Union

from core.errors import ConfigError, LZSError
from core.qubit_model import QubitSpec
from core.sweep import GridSpec

UNITS_LINE = "GHz (frequencies, gaps, rates), mPhi0 (flux), K (temperature)"

DEFAULT_MODEL = "first_diamond"
DEFAULT_GAMMA20 = 5e-5
DEFAULT_TEMPERATURE = 0.02

SLOPE_KEYS = tuple(f"slopes.m{k}" for k in range(4))
INTERCEPT_KEYS = tuple(f"intercepts.e{k}" for k in range(4))
LOCATION_KEYS = ("locations.l02", "locations.l12")
GAP_KEYS = {"gaps.d02": (0, 2), "gaps.d12": (1, 2), "gaps.d03": (0, 3), "gaps.d13": (1, 3)}
RATE_KEYS = ("rates.gamma10", "rates.gamma20", "rates.gamma32", "rates.gamma2")
GRID_FLOAT_KEYS = ("grid.dphi_min", "grid.dphi_max", "grid.phi_rf_min", "grid.phi_rf_max")
GRID_INT_KEYS = ("grid.dphi_steps", "grid.phi_rf_steps")
OUTPUT_KEYS = ("output.csv", "output.pgm")

KNOWN_KEYS = frozenset(
    ("model", "drive.omega", "temperature")
    + SLOPE_KEYS + INTERCEPT_KEYS + LOCATION_KEYS + tuple(GAP_KEYS)
    + RATE_KEYS + GRID_FLOAT_KEYS + GRID_INT_KEYS + OUTPUT_KEYS
)

# Per-model default sweep extents (dphi_max, phi_rf_max), both starting at 0
DEFAULT_EXTENTS = {
    "first_diamond": (10.0, 12.0),
    "second_diamond": (10.0, 12.0),
    "combined": (10.0, 25.0),
}

# Lazy logger initialization
_logger = None


def get_logger():
    global _logger
    if _logger is None:
        from utils.logger import setup_logger
        _logger = setup_logger(__name__)
    return _logger


@dataclass(frozen=True)
class RunConfig:
    """Everything a simulation command needs"""

    qubit: QubitSpec
    omega: float
    gamma2: float
    grid: GridSpec
    model: str = DEFAULT_MODEL
    output_csv: Optional[str] = None
    output_pgm: Optional[str] = None


Entries = Dict[str, Tuple[str, Optional[int]]]


def default_grid(model: str, steps: Optional[int] = None) -> GridSpec:
    """Default sweep grid for a model"""
    if steps is None:
        from utils.helpers import load_settings
        steps = int(load_settings()['sweep'].get('default_steps', 401))
    dphi_max, phi_rf_max = DEFAULT_EXTENTS.get(model, DEFAULT_EXTENTS[DEFAULT_MODEL])
    return GridSpec(0.0, dphi_max, steps, 0.0, phi_rf_max, steps)


def parse_config_text(text: str) -> Entries:
    """
    Split config text into {key: (raw value, line number)}

    Raises:
        ConfigError: malformed line, unknown or duplicate key
    """
    entries: Entries = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError("Expected 'key = value'", line=number)

        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError("Unknown key", key=key, line=number)
        if key in entries:
            raise ConfigError(f"Duplicate key (first set on line {entries[key][1]})", key=key, line=number)
        if not value:
            raise ConfigError("Missing value", key=key, line=number)
        entries[key] = (value, number)
    return entries


class _Reader:
    """Typed access to parsed entries with key/line aware errors"""

    def __init__(self, entries: Entries):
        self.entries = entries

    def has(self, key: str) -> bool:
        return key in self.entries

    def line(self, key: str) -> Optional[int]:
        return self.entries.get(key, (None, None))[1]

    def raw(self, key: str) -> str:
        if key not in self.entries:
            raise ConfigError("Missing required key", key=key)
        return self.entries[key][0]

    def number(self, key: str, default: Optional[float] = None,
               check: Optional[Callable[[float], bool]] = None,
               requirement: str = "") -> float:
        if key not in self.entries:
            if default is None:
                raise ConfigError("Missing required key", key=key)
            return default
        try:
            value = float(self.raw(key))
        except ValueError:
            raise ConfigError(f"Not a number: {self.raw(key)!r}", key=key, line=self.line(key)) from None
        if check is not None and not check(value):
            raise ConfigError(f"Value {value!r} must be {requirement}", key=key, line=self.line(key))
        return value

    def integer(self, key: str, default: int) -> int:
        if key not in self.entries:
            return default
        try:
            return int(self.raw(key))
        except ValueError:
            raise ConfigError(f"Not an integer: {self.raw(key)!r}", key=key, line=self.line(key)) from None


def _positive(v: float) -> bool:
    return v > 0


def _non_negative(v: float) -> bool:
    return v >= 0


def build_config(entries: Entries) -> RunConfig:
    """
    Validate parsed entries and assemble a RunConfig

    Raises:
        ConfigError: naming the offending key and line
    """
    from models.model_loader import model_names

    r = _Reader(entries)

    model = r.raw("model") if r.has("model") else DEFAULT_MODEL
    if model not in model_names():
        raise ConfigError(f"Unknown model {model!r}", key="model", line=r.line("model"))

    slopes = [r.number(key) for key in SLOPE_KEYS]
    for k, (key, slope) in enumerate(zip(SLOPE_KEYS, slopes)):
        right = k in (0, 1)
        if slope == 0 or (slope < 0) != right:
            side = "negative (right well)" if right else "positive (left well)"
            raise ConfigError(f"Slope {slope!r} must be {side}", key=key, line=r.line(key))

    gaps = {
        pair: r.number(key, check=_non_negative, requirement=">= 0")
        for key, pair in GAP_KEYS.items()
    }
    gamma10 = r.number("rates.gamma10", check=_non_negative, requirement=">= 0")
    gamma20 = r.number("rates.gamma20", DEFAULT_GAMMA20, _non_negative, ">= 0")
    gamma32 = r.number("rates.gamma32", gamma10, _non_negative, ">= 0")
    gamma2 = r.number("rates.gamma2", check=_positive, requirement="> 0")
    omega = r.number("drive.omega", check=_positive, requirement="> 0")
    temperature = r.number("temperature", DEFAULT_TEMPERATURE, _positive, "> 0")

    has_intercepts = any(r.has(key) for key in INTERCEPT_KEYS)
    has_locations = any(r.has(key) for key in LOCATION_KEYS)
    if has_intercepts and has_locations:
        key = next(k for k in LOCATION_KEYS if r.has(k))
        raise ConfigError("Give either intercepts or locations, not both", key=key, line=r.line(key))

    try:
        if has_locations or not has_intercepts:
            qubit = QubitSpec.from_locations(
                slopes, r.number("locations.l02"), r.number("locations.l12"), gaps,
                gamma10, gamma20, gamma32, temperature,
            )
        else:
            qubit = QubitSpec.from_intercepts(
                slopes, [r.number(key) for key in INTERCEPT_KEYS], gaps,
                gamma10, gamma20, gamma32, temperature,
            )
    except ConfigError:
        raise
    except LZSError as e:
        raise ConfigError(f"Invalid qubit: {e}") from e

    fallback = default_grid(model)
    try:
        grid = GridSpec(
            dphi_min=r.number("grid.dphi_min", fallback.dphi_min),
            dphi_max=r.number("grid.dphi_max", fallback.dphi_max),
            dphi_steps=r.integer("grid.dphi_steps", fallback.dphi_steps),
            phi_rf_min=r.number("grid.phi_rf_min", fallback.phi_rf_min),
            phi_rf_max=r.number("grid.phi_rf_max", fallback.phi_rf_max),
            phi_rf_steps=r.integer("grid.phi_rf_steps", fallback.phi_rf_steps),
        )
    except ConfigError:
        raise
    except LZSError as e:
        grid_keys = [k for k in GRID_FLOAT_KEYS + GRID_INT_KEYS if r.has(k)]
        key = grid_keys[0] if grid_keys else None
        raise ConfigError(f"Invalid grid: {e}", key=key, line=r.line(key) if key else None) from e

    return RunConfig(
        qubit=qubit,
        omega=omega,
        gamma2=gamma2,
        grid=grid,
        model=model,
        output_csv=r.raw("output.csv") if r.has("output.csv") else None,
        output_pgm=r.raw("output.pgm") if r.has("output.pgm") else None,
    )


def load_config(path: Union[str, Path]) -> RunConfig:
    """
    Load and validate a run configuration file

    Raises:
        ConfigError: unreadable file, unknown/duplicate/missing key,
            bad number or invariant violation
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigError(f"Cannot read config {path}: {e}") from e

    config = build_config(parse_config_text(text))
    get_logger().debug(f"Loaded config {path} (model {config.model})")
    return config


def _fmt(value: float) -> str:
    return repr(float(value))


def echo_parameters(qubit: QubitSpec, omega: float, gamma2: float,
                    grid: GridSpec, model: str) -> Dict[str, str]:
    """Ordered key/value text of every simulation input (intercept form)"""
    echo: Dict[str, str] = {"model": model}
    for key, level in zip(SLOPE_KEYS, qubit.levels):
        echo[key] = _fmt(level.slope)
    for key, level in zip(INTERCEPT_KEYS, qubit.levels):
        echo[key] = _fmt(level.intercept)
    for key, (i, j) in GAP_KEYS.items():
        echo[key] = _fmt(qubit.crossing(i, j).gap)
    echo["rates.gamma10"] = _fmt(qubit.gamma10)
    echo["rates.gamma20"] = _fmt(qubit.gamma20)
    echo["rates.gamma32"] = _fmt(qubit.gamma32)
    echo["rates.gamma2"] = _fmt(gamma2)
    echo["drive.omega"] = _fmt(omega)
    echo["temperature"] = _fmt(qubit.temperature)
    echo["grid.dphi_min"] = _fmt(grid.dphi_min)
    echo["grid.dphi_max"] = _fmt(grid.dphi_max)
    echo["grid.dphi_steps"] = str(grid.dphi_steps)
    echo["grid.phi_rf_min"] = _fmt(grid.phi_rf_min)
    echo["grid.phi_rf_max"] = _fmt(grid.phi_rf_max)
    echo["grid.phi_rf_steps"] = str(grid.phi_rf_steps)
    return echo


def run_config_from_metadata(metadata: Dict[str, str]) -> RunConfig:
    """Rebuild the RunConfig behind a grid from its metadata echo"""
    entries = {key: (value, None) for key, value in metadata.items() if key in KNOWN_KEYS}
    return build_config(entries)


def format_config(config: RunConfig) -> str:
    """Canonical config text; load_config of it gives back the same RunConfig"""
    lines = [
        "# lzs-sim run configuration",
        f"# units: {UNITS_LINE}",
    ]
    echo = echo_parameters(config.qubit, config.omega, config.gamma2, config.grid, config.model)
    lines.extend(f"{key} = {value}" for key, value in echo.items())
    if config.output_csv:
        lines.append(f"output.csv = {config.output_csv}")
    if config.output_pgm:
        lines.append(f"output.pgm = {config.output_pgm}")
    return "\n".join(lines) + "\n"


def write_config(config: RunConfig, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(format_config(config))
    return path


def bundled_config_path(name: str) -> Path:
    """Path of a bundled run configuration ('fig4' or 'fig4.cfg')"""
    from utils.helpers import run_configs_dir

    file_name = name if name.endswith(".cfg") else f"{name}.cfg"
    return run_configs_dir() / file_name
