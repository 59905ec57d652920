"""Configuration module for the SIoT sharing simulator"""

from .settings import settings
from .simulation_config import (
    ConfigError,
    ConfigValidationError,
    InternalError,
    MobilityMode,
    NetworkType,
    ParamRange,
    PeerParamRanges,
    PeerParams,
    REQUESTABLE_SERVICES,
    ServiceCatalog,
    ServiceId,
    SimulationConfig,
    SimulationError,
    Strategy,
    Violation,
    build_config,
    load_config_file,
    sample_peer_params,
    scu_of,
    validate_config,
)

__all__ = [
    "settings",
    "ConfigError",
    "ConfigValidationError",
    "InternalError",
    "MobilityMode",
    "NetworkType",
    "ParamRange",
    "PeerParamRanges",
    "PeerParams",
    "REQUESTABLE_SERVICES",
    "ServiceCatalog",
    "ServiceId",
    "SimulationConfig",
    "SimulationError",
    "Strategy",
    "Violation",
    "build_config",
    "load_config_file",
    "sample_peer_params",
    "scu_of",
    "validate_config",
]
