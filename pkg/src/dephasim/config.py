"""Flat key-value run configuration for the command-line front end.

The format is one dotted `key = value` assignment per line, `#` comments,
blank lines ignored.  Complex coefficients are written as `re, im` pairs
(a bare real is accepted).  See the README for the full schema.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .channels import Local, NoiseScenario, PairCollective, TripleCollective
from .montecarlo import TrajectoryConfig
from .presets import SCENARIO_LAYOUTS, STATE_CLASSES
from .states import (
    Fragile,
    Fragile2,
    GenericPure,
    GHZState,
    Robust,
    Robust2,
    StateSpec,
    WState,
)
from .timescales import TimeGrid, default_grid


class ConfigParseError(Exception):
    """The config file could not be read or is syntactically malformed."""


class ConfigValidationError(Exception):
    """A config value is missing or invalid; `field` names the offender."""

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


_KEY_PATTERNS = [
    r"state\.(class|a|b|c|d|a0|a1|a2|a4|a7)",
    r"scenario\.register",
    r"scenario\.allow_overlap",
    r"scenario\.channels\[\d+\]\.(kind|qubits|rate)",
    r"grid\.(t_max|samples)",
    r"outputs",
    r"format",
    r"plots",
    r"plots\.log_y",
    r"convention",
    r"out",
    r"mc\.(trajectories|dt|seed|t)",
    r"sweep\.(draws|seed|classes|scenarios|rate)",
]
_KEY_RE = re.compile("^(" + "|".join(_KEY_PATTERNS) + ")$")

OUTPUT_GROUPS = ("elements", "concurrence", "eof", "reduced", "timescales", "audit")
DEFAULT_OUTPUTS = ("elements", "concurrence", "eof", "timescales", "audit")

_STATE_FIELDS: dict[str, tuple[str, ...]] = {
    "fragile": ("a", "b", "d"),
    "fragile2": ("a", "c", "d"),
    "robust": ("a", "b", "c"),
    "robust2": ("b", "c", "d"),
    "generic": ("a", "b", "c", "d"),
    "w": ("a1", "a2", "a4"),
    "ghz": ("a0", "a7"),
}

_STATE_BUILDERS = {
    "fragile": Fragile,
    "fragile2": Fragile2,
    "robust": Robust,
    "robust2": Robust2,
    "generic": GenericPure,
    "w": WState,
    "ghz": GHZState,
}


def parse_config_text(text: str) -> dict[str, str]:
    """Raw key -> value mapping; syntax errors only."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigParseError(f"line {lineno}: empty key")
        if key in values:
            raise ConfigParseError(f"line {lineno}: duplicate key {key!r}")
        values[key] = value
    return values


def load_config(path: str | Path) -> dict[str, str]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigParseError(f"cannot read config {path}: {exc}") from exc
    raw = parse_config_text(text)
    for key in raw:
        if not _KEY_RE.match(key):
            raise ConfigValidationError(key, "unknown configuration key")
    return raw


def _require(raw: dict[str, str], key: str) -> str:
    if key not in raw:
        raise ConfigValidationError(key, "required key is missing")
    return raw[key]


def _as_float(raw: dict[str, str], key: str, default: Optional[float] = None) -> float:
    if key not in raw:
        if default is None:
            raise ConfigValidationError(key, "required key is missing")
        return default
    try:
        return float(raw[key])
    except ValueError:
        raise ConfigValidationError(key, f"not a number: {raw[key]!r}") from None


def _as_int(raw: dict[str, str], key: str, default: Optional[int] = None) -> int:
    if key not in raw:
        if default is None:
            raise ConfigValidationError(key, "required key is missing")
        return default
    try:
        return int(raw[key])
    except ValueError:
        raise ConfigValidationError(key, f"not an integer: {raw[key]!r}") from None


def _as_bool(raw: dict[str, str], key: str, default: bool = False) -> bool:
    if key not in raw:
        return default
    value = raw[key].lower()
    if value in ("true", "yes", "1", "on"):
        return True
    if value in ("false", "no", "0", "off"):
        return False
    raise ConfigValidationError(key, f"not a boolean: {raw[key]!r}")


def _as_complex(raw: dict[str, str], key: str) -> complex:
    value = _require(raw, key)
    parts = [p.strip() for p in value.split(",")]
    if len(parts) not in (1, 2):
        raise ConfigValidationError(key, f"expected 're' or 're, im', got {value!r}")
    try:
        re_part = float(parts[0])
        im_part = float(parts[1]) if len(parts) == 2 else 0.0
    except ValueError:
        raise ConfigValidationError(key, f"not a complex pair: {value!r}") from None
    return complex(re_part, im_part)


def _as_list(raw: dict[str, str], key: str, default: tuple[str, ...]) -> tuple[str, ...]:
    if key not in raw:
        return default
    items = tuple(item.strip() for item in raw[key].split(",") if item.strip())
    if not items:
        raise ConfigValidationError(key, "empty list")
    return items


def state_from(raw: dict[str, str]) -> StateSpec:
    cls = _require(raw, "state.class").lower()
    if cls not in _STATE_FIELDS:
        known = ", ".join(_STATE_FIELDS)
        raise ConfigValidationError("state.class", f"unknown class {cls!r}; known: {known}")
    fields = _STATE_FIELDS[cls]
    for letter in ("a", "b", "c", "d", "a0", "a1", "a2", "a4", "a7"):
        if f"state.{letter}" in raw and letter not in fields:
            raise ConfigValidationError(
                f"state.{letter}", f"not a coefficient of class {cls!r} (expects {fields})"
            )
    coeffs = [_as_complex(raw, f"state.{letter}") for letter in fields]
    return _STATE_BUILDERS[cls](*coeffs)


def scenario_from(raw: dict[str, str]) -> NoiseScenario:
    register = _as_int(raw, "scenario.register")
    if register not in (2, 3):
        raise ConfigValidationError("scenario.register", f"must be 2 or 3, got {register}")
    channels = []
    index = 0
    while f"scenario.channels[{index}].kind" in raw:
        prefix = f"scenario.channels[{index}]"
        kind_name = raw[f"{prefix}.kind"].lower()
        qubits = tuple(
            q.strip().upper() for q in raw.get(f"{prefix}.qubits", "").split(",") if q.strip()
        )
        rate = _as_float(raw, f"{prefix}.rate")
        if rate <= 0:
            raise ConfigValidationError(f"{prefix}.rate", f"must be positive, got {rate}")
        try:
            if kind_name == "local":
                if len(qubits) != 1:
                    raise ValueError(f"local channel needs one qubit, got {qubits}")
                kind = Local(qubits[0])
            elif kind_name == "pair_collective":
                if len(qubits) != 2:
                    raise ValueError(f"pair channel needs two qubits, got {qubits}")
                kind = PairCollective(qubits[0], qubits[1])
            elif kind_name == "triple_collective":
                if qubits:
                    raise ValueError("triple-collective channel takes no qubit list")
                kind = TripleCollective()
            else:
                raise ValueError(
                    f"unknown kind {kind_name!r} (local, pair_collective, triple_collective)"
                )
        except ValueError as exc:
            raise ConfigValidationError(f"{prefix}.kind", str(exc)) from None
        channels.append((kind, rate))
        index += 1
    for key in raw:
        if key.startswith("scenario.channels["):
            idx = int(key.split("[", 1)[1].split("]", 1)[0])
            if idx >= index:
                raise ConfigValidationError(key, f"channel indices must be contiguous from 0")
    if not channels:
        raise ConfigValidationError("scenario.channels[0].kind", "at least one channel required")
    try:
        return NoiseScenario(
            register, tuple(channels), allow_overlap=_as_bool(raw, "scenario.allow_overlap")
        )
    except ValueError as exc:
        raise ConfigValidationError("scenario.channels", str(exc)) from None


def grid_from(raw: dict[str, str], scenario: NoiseScenario) -> TimeGrid:
    samples = _as_int(raw, "grid.samples", 64)
    if "grid.t_max" in raw:
        t_max = _as_float(raw, "grid.t_max")
    else:
        t_max = default_grid(scenario).t_max
    try:
        return TimeGrid(t_max, samples)
    except ValueError as exc:
        raise ConfigValidationError("grid.t_max", str(exc)) from None


def mc_from(raw: dict[str, str], seed_override: Optional[int] = None) -> Optional[TrajectoryConfig]:
    if "mc.trajectories" not in raw and seed_override is None and "mc.seed" not in raw:
        return None
    n = _as_int(raw, "mc.trajectories", 10_000)
    seed = seed_override if seed_override is not None else _as_int(raw, "mc.seed")
    dt = _as_float(raw, "mc.dt", 0.02)
    t_final = _as_float(raw, "mc.t", 1.0)
    try:
        return TrajectoryConfig(n_trajectories=n, dt=dt, seed=seed, t_final=t_final)
    except ValueError as exc:
        raise ConfigValidationError("mc.dt", str(exc)) from None


@dataclass(frozen=True)
class SweepConfig:
    draws: int
    seed: int
    classes: tuple[str, ...]
    scenarios: tuple[str, ...]
    rate: float


def sweep_from(raw: dict[str, str], seed_override: Optional[int] = None) -> SweepConfig:
    draws = _as_int(raw, "sweep.draws", 100)
    if draws < 1:
        raise ConfigValidationError("sweep.draws", "must be at least 1")
    seed = seed_override if seed_override is not None else _as_int(raw, "sweep.seed", 0)
    classes = _as_list(raw, "sweep.classes", ("fragile", "robust", "w", "ghz"))
    for cls in classes:
        if cls not in STATE_CLASSES:
            raise ConfigValidationError("sweep.classes", f"unknown class {cls!r}")
    scenarios = _as_list(raw, "sweep.scenarios", tuple(sorted(SCENARIO_LAYOUTS)))
    for name in scenarios:
        if name not in SCENARIO_LAYOUTS:
            raise ConfigValidationError("sweep.scenarios", f"unknown scenario {name!r}")
    rate = _as_float(raw, "sweep.rate", 1.0)
    if rate <= 0:
        raise ConfigValidationError("sweep.rate", f"must be positive, got {rate}")
    return SweepConfig(draws, seed, classes, scenarios, rate)


@dataclass(frozen=True)
class OutputOptions:
    outputs: tuple[str, ...]
    fmt: str
    plots: bool
    log_y: bool
    convention: str
    out_dir: Path


def output_options_from(
    raw: dict[str, str],
    out_override: Optional[str] = None,
    fmt_override: Optional[str] = None,
    plots_override: bool = False,
    convention_override: Optional[str] = None,
) -> OutputOptions:
    outputs = _as_list(raw, "outputs", DEFAULT_OUTPUTS)
    for group in outputs:
        if group not in OUTPUT_GROUPS:
            raise ConfigValidationError("outputs", f"unknown output group {group!r}")
    fmt = fmt_override or raw.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigValidationError("format", f"must be csv or json, got {fmt!r}")
    convention = convention_override or raw.get("convention", "both")
    if convention not in ("c", "c2", "both"):
        raise ConfigValidationError("convention", f"must be c, c2 or both, got {convention!r}")
    plots = plots_override or _as_bool(raw, "plots")
    log_y = _as_bool(raw, "plots.log_y")
    out_dir = Path(out_override or raw.get("out", "out"))
    return OutputOptions(outputs, fmt, plots, log_y, convention, out_dir)
