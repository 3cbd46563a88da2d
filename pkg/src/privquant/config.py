"""Scenario configuration files (TOML).

Example::

    output_dir = "out"
    seed = 0

    [solver]
    kkt_tolerance = 1e-6

    [[sensors]]
    name = "sensor1"
    mean = 9.8696
    epsilon = 60.0          # optional; omit for no distortion constraint

    [sensors.noise]
    law = "gaussian"        # or "uniform" with half_width = ...
    variance = 3.1416

    [sensors.quantizer]
    first_level = 4.5522
    step = 1.0635
    num_levels = 11

Numbers must be plain TOML numbers; expressions such as ``"pi**2"`` are rejected.
"""

import numbers
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import List, Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .distributions import SensorModel
from .exceptions import DomainError
from .quantizer import QuantizerSpec
from .solver import SolverOptions


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending entry."""

    def __init__(self, field_name, message):
        self.field = field_name
        super().__init__(f"{field_name}: {message}")


@dataclass(frozen=True)
class SensorConfig:
    name: str
    model: SensorModel
    spec: QuantizerSpec
    epsilon: Optional[float] = None


@dataclass(frozen=True)
class ScenarioConfig:
    sensors: List[SensorConfig]
    output_dir: str = "out"
    seed: int = 0
    stream_steps: int = 0
    solver: SolverOptions = field(default_factory=SolverOptions)


def _number(table, key, where, required=True, integer=False):
    if key not in table:
        if required:
            raise ConfigError(f"{where}.{key}", "missing")
        return None
    value = table[key]
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ConfigError(f"{where}.{key}", f"expected a number, got {value!r}")
    if integer and int(value) != value:
        raise ConfigError(f"{where}.{key}", f"expected an integer, got {value!r}")
    return int(value) if integer else float(value)


def _table(parent, key, where):
    value = parent.get(key)
    if not isinstance(value, dict):
        raise ConfigError(f"{where}.{key}", "missing or not a table")
    return value


def _sensor(raw, index):
    where = f"sensors[{index}]"
    if not isinstance(raw, dict):
        raise ConfigError(where, "expected a table")
    name = raw.get("name", f"sensor{index + 1}")
    if not isinstance(name, str) or not name or not name.replace("_", "").replace("-", "").isalnum():
        raise ConfigError(f"{where}.name", f"must be a non-empty alphanumeric name, got {name!r}")
    mean = _number(raw, "mean", where)
    epsilon = _number(raw, "epsilon", where, required=False)

    noise = _table(raw, "noise", where)
    law = noise.get("law")
    try:
        if law == "gaussian":
            model = SensorModel.gaussian(mean, _number(noise, "variance", f"{where}.noise"))
        elif law == "uniform":
            model = SensorModel.uniform(mean, _number(noise, "half_width", f"{where}.noise"))
        else:
            raise ConfigError(f"{where}.noise.law", f"expected 'gaussian' or 'uniform', got {law!r}")
    except DomainError as exc:
        raise ConfigError(f"{where}.noise", str(exc)) from exc

    q = _table(raw, "quantizer", where)
    qwhere = f"{where}.quantizer"
    try:
        spec = QuantizerSpec(
            _number(q, "first_level", qwhere),
            _number(q, "step", qwhere),
            _number(q, "num_levels", qwhere, integer=True),
        )
    except DomainError as exc:
        raise ConfigError(qwhere, str(exc)) from exc
    if epsilon is not None and epsilon < 0:
        raise ConfigError(f"{where}.epsilon", "must be >= 0")
    return SensorConfig(name, model, spec, epsilon)


def parse_config(raw: dict) -> ScenarioConfig:
    sensors_raw = raw.get("sensors")
    if not isinstance(sensors_raw, list) or not sensors_raw:
        raise ConfigError("sensors", "at least one [[sensors]] table is required")
    sensors = [_sensor(s, i) for i, s in enumerate(sensors_raw)]
    names = [s.name for s in sensors]
    if len(set(names)) != len(names):
        raise ConfigError("sensors.name", "sensor names must be unique")

    output_dir = raw.get("output_dir", "out")
    if not isinstance(output_dir, str):
        raise ConfigError("output_dir", "expected a string")
    seed = _number(raw, "seed", "config", required=False, integer=True)
    stream_steps = _number(raw, "stream_steps", "config", required=False, integer=True)
    if stream_steps is not None and stream_steps < 0:
        raise ConfigError("stream_steps", "must be >= 0")

    solver_raw = raw.get("solver", {})
    if not isinstance(solver_raw, dict):
        raise ConfigError("solver", "expected a table")
    known = {f.name: f.type for f in fields(SolverOptions)}
    kwargs = {}
    for key in solver_raw:
        if key not in known:
            raise ConfigError(f"solver.{key}", "unknown solver option")
        integer = key in ("max_outer_iterations", "max_inner_iterations", "patience")
        kwargs[key] = _number(solver_raw, key, "solver", integer=integer)
    try:
        solver = SolverOptions(**kwargs)
    except DomainError as exc:
        raise ConfigError("solver", str(exc)) from exc
    return ScenarioConfig(sensors, output_dir, seed or 0, stream_steps or 0, solver)


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        with path.open("rb") as fh:
            raw = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(str(path), f"cannot read config: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(str(path), f"invalid TOML: {exc}") from exc
    return parse_config(raw)
