"""Deterministic circuit-switched Benes optical NoC simulator.

Compares an adaptive distributed routing algorithm (DRA) against the
bit-controlled baseline (BCRA) on delay/throughput load sweeps.
"""

from .experiment import RunRow, SimConfig, SweepSpec, run_point, run_sweep
from .protocol import CircuitSwitchedSim, ProtocolParams
from .topology import BenesNetwork, LinkId, Port, build_network
from .workload import RunStats, TrafficParams

__all__ = [
    "BenesNetwork",
    "CircuitSwitchedSim",
    "LinkId",
    "Port",
    "ProtocolParams",
    "RunRow",
    "RunStats",
    "SimConfig",
    "SweepSpec",
    "TrafficParams",
    "build_network",
    "run_point",
    "run_sweep",
]
