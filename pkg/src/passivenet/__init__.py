"""Centralized optimal passivity control for hub-and-spoke networked systems.

A discrete-time simulator and control library: a centralized passivity
observer tracks the interconnection's cumulative energy flow, and a
weighted minimum-norm allocator injects just-enough damping at the remote
ports to keep the closed loop passive under asymmetric time-varying delays
and nonpassive node dynamics.
"""

from .allocator import AllocationResult, WeightMatrix, allocate, apply_dissipation
from .config import (
    RunConfig,
    bundled_config_names,
    bundled_config_path,
    parse_config,
    parse_config_file,
    resolve_config_path,
    serialize_config,
)
from .delay import DelayLine, DelayProfile
from .errors import ConfigurationError, SimulationFault
from .lti import (
    ContinuousTF,
    FirstOrderLowpass,
    ImpedanceTriple,
    default_osp_grid,
    estimate_osp_index,
    make_hub_admittance,
    make_node_impedance,
)
from .observer import EnergyLedger
from .output import read_summary, trace_header, write_summary, write_trace
from .selfcheck import run_self_checks
from .sim import (
    Scenario,
    Simulation,
    StepRecord,
    SummaryMetrics,
    Topology,
    Trace,
    build,
    summarize,
)

__version__ = "0.1.0"

__all__ = [
    "AllocationResult",
    "ConfigurationError",
    "ContinuousTF",
    "DelayLine",
    "DelayProfile",
    "EnergyLedger",
    "FirstOrderLowpass",
    "ImpedanceTriple",
    "RunConfig",
    "Scenario",
    "Simulation",
    "SimulationFault",
    "StepRecord",
    "SummaryMetrics",
    "Topology",
    "Trace",
    "WeightMatrix",
    "allocate",
    "apply_dissipation",
    "build",
    "bundled_config_names",
    "bundled_config_path",
    "default_osp_grid",
    "estimate_osp_index",
    "make_hub_admittance",
    "make_node_impedance",
    "parse_config",
    "parse_config_file",
    "read_summary",
    "resolve_config_path",
    "run_self_checks",
    "serialize_config",
    "summarize",
    "trace_header",
    "write_summary",
    "write_trace",
]
