# metrics/run_metrics.py
"""
Performance figures replayed from schedule traces.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict

import pandas as pd

from scheduler.schedule_trace import Action, Trace
from scheduler.sim_scheduler import SchedulerConfig, run_concurrent, run_sequential
from workload.workload_model import Workload

logger = logging.getLogger(__name__)

TRACE_COLUMNS = ["tick", "task", "action", "dispatch"]


class IncompleteTraceError(ValueError):
    """Raised when a trace does not bring every task to a terminal state."""


@dataclass(frozen=True)
class RunMetrics:
    makespan: int
    compute_ticks: int
    idle_ticks: int
    context_switches: int
    dispatches: int
    per_task_turnaround: Dict[str, int] = field(default_factory=dict)
    utilization: float = 0.0
    throughput: float = 0.0


def trace_to_dataframe(t: Trace) -> pd.DataFrame:
    """One row per event, in trace order."""
    rows = [
        {
            "tick": event.tick,
            "task": event.task,
            "action": event.action.value,
            "dispatch": event.dispatch,
        }
        for event in t.events
    ]
    return pd.DataFrame(rows, columns=TRACE_COLUMNS)


def compute_metrics(t: Trace) -> RunMetrics:
    """Derive every figure purely from the trace events."""
    df = trace_to_dataframe(t)

    terminal_actions = [Action.FINISH.value, Action.FAIL.value]
    terminal = df[df["action"].isin(terminal_actions)]
    ended = set(terminal["task"])
    missing = [task for task in t.tasks if task not in ended]
    if df.empty or missing:
        raise IncompleteTraceError(
            f"Trace is incomplete, tasks without a terminal event: {missing or list(t.tasks)}"
        )

    makespan = int(terminal["tick"].max())
    compute_ticks = int(
        df["action"].isin([Action.COMPUTE.value, Action.EMIT.value]).sum()
    )

    dispatched = df.loc[df["dispatch"].astype(bool), "task"].reset_index(drop=True)
    # Adjacent dispatches naming different tasks
    context_switches = int((dispatched != dispatched.shift()).iloc[1:].sum())

    turnaround = {
        str(task): int(tick)
        for task, tick in terminal.groupby("task", sort=False)["tick"].max().items()
    }
    finished = int((terminal["action"] == Action.FINISH.value).sum())

    if makespan > 0:
        utilization = compute_ticks / makespan
        throughput = 1000 * finished / makespan
    else:
        utilization = 0.0
        throughput = 0.0

    return RunMetrics(
        makespan=makespan,
        compute_ticks=compute_ticks,
        idle_ticks=makespan - compute_ticks,
        context_switches=context_switches,
        dispatches=len(dispatched),
        per_task_turnaround={task: turnaround[task] for task in t.tasks},
        utilization=utilization,
        throughput=throughput,
    )


def speedup(seq: RunMetrics, conc: RunMetrics) -> Fraction:
    """Exact ratio of sequential to concurrent makespan."""
    if conc.makespan == 0:
        raise ValueError("Concurrent makespan is zero, speedup is undefined")
    return Fraction(seq.makespan, conc.makespan)


def format_ratio(ratio: Fraction) -> str:
    """Render an exact ratio to 2 decimals."""
    return f"{float(ratio):.2f}"


def compare_modes(w: Workload, c: SchedulerConfig) -> pd.DataFrame:
    """
    Sequential and concurrent metrics of one workload, side by side.
    The exact speedup is kept in table.attrs["speedup"] as a Fraction.
    """
    seq = compute_metrics(run_sequential(w).trace)
    conc = compute_metrics(run_concurrent(w, c).trace)
    logger.info(f"Compared modes: makespan {seq.makespan} vs {conc.makespan}")

    rows = []
    for mode, m in (("sequential", seq), ("concurrent", conc)):
        rows.append(
            {
                "mode": mode,
                "makespan": m.makespan,
                "compute_ticks": m.compute_ticks,
                "idle_ticks": m.idle_ticks,
                "context_switches": m.context_switches,
                "utilization": round(m.utilization, 4),
                "throughput": round(m.throughput, 4),
            }
        )
    table = pd.DataFrame(rows).set_index("mode")
    # Both makespans are zero only when no task consumed a tick
    ratio = speedup(seq, conc) if conc.makespan else Fraction(1)
    table["speedup"] = [1.0, round(float(ratio), 2)]
    table.attrs["speedup"] = ratio
    return table
