from .api import ControllerFacade, EmulatorService, ap_payload, client_payload
from .config import config_from_json, load_config
from .profile import WorkloadProfile, circular_hour_distance, workload_rate
from .world import (
    DEFAULT_START_MS,
    ActuationCommand,
    CommandResult,
    EmulatedWorld,
    EmulatorConfig,
    InjectedSurge,
)

__all__ = [
    "ActuationCommand",
    "CommandResult",
    "ControllerFacade",
    "DEFAULT_START_MS",
    "EmulatedWorld",
    "EmulatorConfig",
    "EmulatorService",
    "InjectedSurge",
    "WorkloadProfile",
    "ap_payload",
    "client_payload",
    "circular_hour_distance",
    "config_from_json",
    "load_config",
    "workload_rate",
]
