"""Hierarchical ground/HAPS/LEO/cloud task-offloading simulator and solvers.

The package models a three-tier computing hierarchy: battery-class ground
devices under a high-altitude platform hosting an edge server, bridged by
a LEO relay to a cloud gateway. Each tier prices its services selfishly;
bandwidth on the shared access channel and on the feeder chain is then
allocated by closed-form and bisection solvers. Everything is
deterministic given a scenario seed.
"""
from .scenario import (
    CostParams,
    ComputeParams,
    GroundDevice,
    PayloadClassSpec,
    Position3D,
    RadioParams,
    Scenario,
    Task,
    default_scenario,
    validate_scenario,
)
from .taskgen import default_class_specs, generate_tasks
from .orchestrator import (
    METHODS,
    METHOD_FIXED_MAX,
    METHOD_NO_BW_OPT,
    METHOD_PROPOSED,
    SnapshotReport,
    SweepResult,
    run_snapshot,
    run_sweep,
    tasks_for_snapshot,
)
from .cli import load_scenario, write_reports

__all__ = [
    "CostParams", "ComputeParams", "GroundDevice", "PayloadClassSpec",
    "Position3D", "RadioParams", "Scenario", "Task",
    "default_scenario", "validate_scenario",
    "default_class_specs", "generate_tasks",
    "METHODS", "METHOD_FIXED_MAX", "METHOD_NO_BW_OPT", "METHOD_PROPOSED",
    "SnapshotReport", "SweepResult",
    "run_snapshot", "run_sweep", "tasks_for_snapshot",
    "load_scenario", "write_reports",
]

__version__ = "0.1.0"
