from .analytic import analytic_latency
from .engine import run_simulation
from .fidelity import compare_with_trace
from .io import load_report, load_trace, save_report
from .kernel import KERNEL_KIND
from .scenario import build_scenario, load_scenario, scenario_from_json
from .types import (
    ArrivalProcess,
    EngineKind,
    EngineParams,
    FidelityReport,
    IntervalStats,
    LatencyModelParams,
    MediumReport,
    MediumSpec,
    Override,
    Scenario,
    SimulationReport,
    SizeProcess,
    add_clients_override,
    remove_clients_override,
    set_airtime_override,
    steer_override,
)

__all__ = [
    "ArrivalProcess",
    "EngineKind",
    "EngineParams",
    "FidelityReport",
    "IntervalStats",
    "KERNEL_KIND",
    "LatencyModelParams",
    "MediumReport",
    "MediumSpec",
    "Override",
    "Scenario",
    "SimulationReport",
    "SizeProcess",
    "add_clients_override",
    "analytic_latency",
    "build_scenario",
    "compare_with_trace",
    "load_report",
    "load_scenario",
    "load_trace",
    "remove_clients_override",
    "run_simulation",
    "save_report",
    "scenario_from_json",
    "set_airtime_override",
    "steer_override",
]
