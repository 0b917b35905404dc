"""
Simulate Module.

Synthetic data-generating processes, the replication harness and the
benchmark, runtime and bandwidth studies.
"""

from src.simulate.dgps import DGP_CONFIGS, DGPConfig, DGPType, SimData, generate, get_dgp_config
from src.simulate.harness import ReplicationResult, run_replication
from src.simulate.benchmark import (
    BenchmarkConfig,
    BenchmarkTable,
    RuntimeResult,
    aggregate,
    bandwidth_sensitivity,
    run_benchmark,
    runtime_scaling,
)

__all__ = [
    "DGP_CONFIGS",
    "DGPConfig",
    "DGPType",
    "SimData",
    "generate",
    "get_dgp_config",
    "ReplicationResult",
    "run_replication",
    "BenchmarkConfig",
    "BenchmarkTable",
    "RuntimeResult",
    "aggregate",
    "bandwidth_sensitivity",
    "run_benchmark",
    "runtime_scaling",
]
