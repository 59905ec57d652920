"""
Simulation configuration
Service catalog, per-peer parameters and every experiment knob, validated in one place
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum, IntEnum
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Tuple, Union

import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

logger = logging.getLogger(__name__)


class SimulationError(Exception):
    """Base class for simulator errors"""
    pass


class ConfigError(SimulationError):
    """Raised for invalid parameters, empty ranges and unknown services"""
    pass


@dataclass(frozen=True)
class Violation:
    """One breached configuration invariant"""
    field: str
    message: str

    def __str__(self) -> str:
        return f"{self.field}: {self.message}"


class ConfigValidationError(ConfigError):
    """Raised by validate_config; carries every violation found"""

    def __init__(self, violations: List[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class InternalError(SimulationError):
    """Signals a bug, e.g. an event kind the metrics layer does not know"""
    pass


class ServiceId(IntEnum):
    """Service 0 marks "serving another peer"; 1-4 are requestable"""
    SERV0 = 0
    SERV1 = 1
    SERV2 = 2
    SERV3 = 3
    SERV4 = 4


REQUESTABLE_SERVICES: Tuple[ServiceId, ...] = (
    ServiceId.SERV1,
    ServiceId.SERV2,
    ServiceId.SERV3,
    ServiceId.SERV4,
)


class NetworkType(str, Enum):
    MESH = "mesh"
    REGULAR = "regular"
    SMALL_WORLD = "small_world"


class Strategy(str, Enum):
    COMPETITIVE = "competitive"
    COOPERATIVE = "cooperative"
    COOPERATIVE_RESTRICTED = "cooperative_restricted"

    @property
    def is_cooperative(self) -> bool:
        return self is not Strategy.COMPETITIVE


class MobilityMode(str, Enum):
    STATIONARY = "stationary"
    RANDOM_WALK = "random_walk"
    PROFILE_BASED = "profile_based"


DEFAULT_SCU: Dict[int, int] = {0: 0, 1: 25, 2: 50, 3: 75, 4: 100}


class StrictModel(BaseModel):
    """Base model that rejects unknown keys and is immutable"""

    model_config = ConfigDict(extra="forbid", frozen=True)


class ServiceCatalog(StrictModel):
    """Service completion units (iterations) per service"""

    scu: Dict[int, int] = Field(default_factory=lambda: dict(DEFAULT_SCU))


def scu_of(catalog: ServiceCatalog, service: Union[ServiceId, int]) -> int:
    """Look up the SCU of a service"""
    try:
        service_id = ServiceId(int(service))
    except ValueError:
        raise ConfigError(f"unknown service {service!r}")

    if int(service_id) not in catalog.scu:
        raise ConfigError(f"service {int(service_id)} missing from catalog")
    return catalog.scu[int(service_id)]


class PeerParams(StrictModel):
    """Per-peer schedule and behaviour parameters"""

    up_time: int = Field(ge=0)
    down_time: int = Field(ge=0)
    idle_time: int = Field(gt=0)
    consistency: float = Field(ge=0.0, le=1.0)
    serv0perc: float = Field(ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _distinct_schedule(self) -> "PeerParams":
        if self.up_time == self.down_time:
            raise ValueError("up_time and down_time must differ")
        return self


def _normalise_percent(value: Any) -> Any:
    """Accept "20%" or 20 for a fraction of 0.2"""
    if isinstance(value, str):
        text = value.strip()
        if text.endswith("%"):
            return float(text[:-1]) / 100.0
        return float(text)
    if isinstance(value, (int, float)) and value > 1:
        return float(value) / 100.0
    return value


class ParamRange(StrictModel):
    """Closed sampling interval [lo, hi]"""

    lo: float
    hi: float

    @model_validator(mode="before")
    @classmethod
    def _from_pair(cls, data: Any) -> Any:
        if isinstance(data, (list, tuple)):
            if len(data) != 2:
                raise ValueError("range must have exactly two bounds")
            return {"lo": data[0], "hi": data[1]}
        return data

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi


class PeerParamRanges(StrictModel):
    """Sampling bounds for each PeerParams field"""

    up_time: ParamRange = ParamRange(lo=0, hi=479)
    down_time: ParamRange = ParamRange(lo=960, hi=1439)
    idle_time: ParamRange = ParamRange(lo=30, hi=120)
    consistency: ParamRange = ParamRange(lo=0.5, hi=1.0)
    serv0perc: ParamRange = ParamRange(lo=0.1, hi=0.3)

    @field_validator("serv0perc", mode="before")
    @classmethod
    def _serv0perc_percent(cls, value: Any) -> Any:
        if isinstance(value, (list, tuple)) and len(value) == 2:
            return [_normalise_percent(v) for v in value]
        if isinstance(value, Mapping):
            return {key: _normalise_percent(v) for key, v in value.items()}
        return value


class SimulationConfig(StrictModel):
    """All knobs of one experiment. Types are checked on construction;
    bounds and cross-field rules are checked by validate_config."""

    # World
    population: int = 250
    grid_width: float = 100.0
    grid_height: float = 100.0
    p_init_completed: float = 0.25
    catalog: ServiceCatalog = Field(default_factory=ServiceCatalog)

    # Topology
    network: NetworkType = NetworkType.SMALL_WORLD
    beta: float = 0.2
    radius: float = 5.0

    # Peers
    strategy: Strategy = Strategy.COMPETITIVE
    peer_param_ranges: PeerParamRanges = Field(default_factory=PeerParamRanges)

    # Mobility
    mobility: MobilityMode = MobilityMode.STATIONARY
    step_length: float = 1.0
    waypoint_count: int = 5
    profile_radius: float = 20.0
    dwell_iterations: int = 60

    # Social
    k: float = 0.5
    m: float = 0.5
    consolidate_frequency: int = 1440

    # Run
    horizon_days: int = 30
    minutes_per_day: int = 1440
    seed: int = 0

    @property
    def horizon_iterations(self) -> int:
        return self.horizon_days * self.minutes_per_day

    def with_seed(self, seed: int) -> "SimulationConfig":
        """Copy of this config with another replicate seed"""
        return self.model_copy(update={"seed": seed})


def _unit_interval(violations: List[Violation], name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        violations.append(Violation(name, f"{name} outside [0,1]"))


def check_invariants(cfg: SimulationConfig) -> List[Violation]:
    """Collect every breached bound or cross-field rule"""
    violations: List[Violation] = []

    if cfg.population < 1:
        violations.append(Violation("population", "population must be positive"))
    if cfg.grid_width <= 0:
        violations.append(Violation("grid_width", "grid_width must be positive"))
    if cfg.grid_height <= 0:
        violations.append(Violation("grid_height", "grid_height must be positive"))
    if cfg.radius <= 0:
        violations.append(Violation("radius", "radius must be positive"))
    elif cfg.radius >= min(cfg.grid_width, cfg.grid_height) / 2:
        violations.append(Violation("radius", "radius must be below half the smaller grid side"))

    _unit_interval(violations, "beta", cfg.beta)
    _unit_interval(violations, "k", cfg.k)
    _unit_interval(violations, "m", cfg.m)
    _unit_interval(violations, "p_init_completed", cfg.p_init_completed)

    if cfg.strategy is Strategy.COOPERATIVE_RESTRICTED:
        if cfg.k <= 0:
            violations.append(Violation("k", "cooperative_restricted requires k > 0"))
        if cfg.m <= 0:
            violations.append(Violation("m", "cooperative_restricted requires m > 0"))

    if cfg.network is NetworkType.SMALL_WORLD and cfg.beta > 0 and cfg.population < 2:
        violations.append(Violation("population", "small_world with beta > 0 needs at least 2 peers"))

    if cfg.horizon_days < 1:
        violations.append(Violation("horizon_days", "horizon_days must be positive"))
    if cfg.minutes_per_day < 1:
        violations.append(Violation("minutes_per_day", "minutes_per_day must be positive"))
    if cfg.consolidate_frequency < 1:
        violations.append(Violation("consolidate_frequency", "consolidate_frequency must be positive"))
    if not 0 <= cfg.seed < 2 ** 64:
        violations.append(Violation("seed", "seed must be a 64-bit unsigned integer"))

    if cfg.step_length <= 0:
        violations.append(Violation("step_length", "step_length must be positive"))
    if cfg.waypoint_count < 2:
        violations.append(Violation("waypoint_count", "waypoint_count must be at least 2"))
    if cfg.profile_radius <= 0:
        violations.append(Violation("profile_radius", "profile_radius must be positive"))
    elif cfg.profile_radius >= min(cfg.grid_width, cfg.grid_height) / 2:
        violations.append(Violation("profile_radius", "profile_radius must be below half the smaller grid side"))
    if cfg.dwell_iterations < 0:
        violations.append(Violation("dwell_iterations", "dwell_iterations must not be negative"))

    violations.extend(_check_catalog(cfg.catalog))
    violations.extend(_check_ranges(cfg.peer_param_ranges, cfg.minutes_per_day))
    return violations


def _check_catalog(catalog: ServiceCatalog) -> List[Violation]:
    violations = []
    expected = {int(s) for s in ServiceId}
    if set(catalog.scu) != expected:
        violations.append(Violation("catalog.scu", "catalog must define exactly services 0-4"))
        return violations
    if catalog.scu[0] != 0:
        violations.append(Violation("catalog.scu", "service 0 must require 0 SCU"))
    for service in REQUESTABLE_SERVICES:
        if catalog.scu[int(service)] <= 0:
            violations.append(Violation("catalog.scu", f"service {int(service)} must require a positive SCU"))
    return violations


_INTEGER_PARAMS = ("up_time", "down_time", "idle_time")


def _check_ranges(ranges: PeerParamRanges, minutes_per_day: int) -> List[Violation]:
    violations = []
    for name in PeerParamRanges.model_fields:
        bounds: ParamRange = getattr(ranges, name)
        field_name = f"peer_param_ranges.{name}"
        if bounds.is_empty:
            violations.append(Violation(field_name, f"empty range [{bounds.lo}, {bounds.hi}]"))
            continue
        if name in _INTEGER_PARAMS and math.ceil(bounds.lo) > math.floor(bounds.hi):
            violations.append(Violation(field_name, f"range [{bounds.lo}, {bounds.hi}] contains no whole number"))
            continue
        if name in ("up_time", "down_time"):
            if bounds.lo < 0 or bounds.hi >= minutes_per_day:
                violations.append(Violation(field_name, f"{name} must lie in [0, {minutes_per_day})"))
        elif name == "idle_time":
            if bounds.lo < 1:
                violations.append(Violation(field_name, "idle_time must be at least 1 iteration"))
        elif bounds.lo < 0 or bounds.hi > 1:
            violations.append(Violation(field_name, f"{name} outside [0,1]"))

    up, down = ranges.up_time, ranges.down_time
    if not up.is_empty and not down.is_empty and up.lo <= down.hi and down.lo <= up.hi:
        violations.append(Violation("peer_param_ranges", "up_time and down_time ranges overlap"))
    return violations


def validate_config(cfg: Union[SimulationConfig, Mapping[str, Any]]) -> SimulationConfig:
    """
    Validate a config object or a plain mapping of config keys

    Returns:
        The validated SimulationConfig (unchanged when given one)

    Raises:
        ConfigValidationError: listing every violated invariant by field
    """
    if not isinstance(cfg, SimulationConfig):
        try:
            cfg = SimulationConfig.model_validate(dict(cfg))
        except ValidationError as e:
            violations = [
                Violation(".".join(str(part) for part in err["loc"]) or "config", err["msg"])
                for err in e.errors()
            ]
            raise ConfigValidationError(violations) from e

    violations = check_invariants(cfg)
    if violations:
        raise ConfigValidationError(violations)
    return cfg


def _draw_int(rng: np.random.Generator, bounds: ParamRange) -> int:
    lo, hi = math.ceil(bounds.lo), math.floor(bounds.hi)
    if lo > hi:
        raise ConfigError(f"range [{bounds.lo}, {bounds.hi}] contains no whole number")
    return int(rng.integers(lo, hi, endpoint=True))


def sample_peer_params(ranges: PeerParamRanges, rng: np.random.Generator) -> PeerParams:
    """Draw each PeerParams field independently and uniformly from its range"""
    for name in PeerParamRanges.model_fields:
        bounds: ParamRange = getattr(ranges, name)
        if bounds.is_empty:
            raise ConfigError(f"empty range for {name}: [{bounds.lo}, {bounds.hi}]")

    up_time = _draw_int(rng, ranges.up_time)
    down_time = _draw_int(rng, ranges.down_time)
    idle_time = _draw_int(rng, ranges.idle_time)
    consistency = float(rng.uniform(ranges.consistency.lo, ranges.consistency.hi))
    serv0perc = float(rng.uniform(ranges.serv0perc.lo, ranges.serv0perc.hi))

    if up_time == down_time:
        raise ConfigError(f"sampled up_time equals down_time ({up_time})")

    return PeerParams(
        up_time=up_time,
        down_time=down_time,
        idle_time=idle_time,
        consistency=consistency,
        serv0perc=serv0perc,
    )


CONFIG_SECTIONS = ("world", "topology", "mobility", "peers", "social", "run")


def flatten_sections(raw: Mapping[str, Any]) -> Dict[str, Any]:
    """Merge per-module sections into one flat mapping of config keys"""
    flat: Dict[str, Any] = {}
    for key, value in raw.items():
        items = value.items() if key in CONFIG_SECTIONS and isinstance(value, Mapping) else [(key, value)]
        for inner_key, inner_value in items:
            if inner_key in flat:
                raise ConfigError(f"key {inner_key!r} given more than once in config file")
            flat[inner_key] = inner_value
    return flat


def load_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a YAML config file into flat config keys (not yet validated)"""
    config_path = Path(path)
    try:
        with open(config_path, "r", encoding="utf-8") as f:
            raw = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse {config_path}: {e}") from e

    if not isinstance(raw, Mapping):
        raise ConfigError(f"{config_path} must contain a mapping at top level")

    logger.info(f"Loaded config file {config_path}")
    return flatten_sections(raw)


def build_config(
    file_values: Optional[Mapping[str, Any]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> SimulationConfig:
    """Apply precedence override > file > default, then validate"""
    merged: Dict[str, Any] = dict(file_values or {})
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value
    return validate_config(merged)
