"""Python bindings for the anthemius block builder and execution simulators."""

from ._anthemius import (
    CSV_HEADER,
    ChainUpdate,
    ExecutionReport,
    GuardFailure,
    HotReadRule,
    SchedulerParams,
    Transaction,
    brute_force_min_makespan,
    conflicts,
    critical_path,
    generate_batch,
    guided_makespan,
    optimistic_execute,
    preset_config,
    preset_names,
    run_latency,
    run_throughput,
    schedule_batch,
)

CSV_COLUMNS = CSV_HEADER.split(",")

__all__ = [
    "CSV_COLUMNS",
    "CSV_HEADER",
    "ChainUpdate",
    "ExecutionReport",
    "GuardFailure",
    "HotReadRule",
    "SchedulerParams",
    "Transaction",
    "brute_force_min_makespan",
    "conflicts",
    "critical_path",
    "generate_batch",
    "guided_makespan",
    "optimistic_execute",
    "preset_config",
    "preset_names",
    "run_latency",
    "run_throughput",
    "schedule_batch",
]
