# parallel/parallel_executor.py
"""
Real-parallel cross-check: one thread per task, sleeps realized as real
pauses. Values must agree with the simulator; only ordering may differ.
"""

import logging
import threading
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from interpreter.task_interpreter import EmitRecord, run_to_completion
from scheduler.schedule_trace import (
    RunMode,
    RunResult,
    TaskOutcome,
    TaskStatus,
    Trace,
)
from workload.workload_model import (
    InvalidWorkloadError,
    TaskSpec,
    Workload,
    bind_env,
    validate_workload,
    workload_digest,
)

logger = logging.getLogger(__name__)

DEFAULT_TICK_MS = 1.0


class EmitCollector:
    """Append-only emit sink safe for simultaneous writers."""

    def __init__(self):
        self._lock = threading.Lock()
        self._records: List[EmitRecord] = []

    def append(self, record: EmitRecord):
        with self._lock:
            self._records.append(record)

    def snapshot(self) -> List[EmitRecord]:
        with self._lock:
            return list(self._records)


def _worker(
    w: Workload,
    spec: TaskSpec,
    collector: EmitCollector,
    outcomes: Dict[str, TaskOutcome],
    outcomes_lock: threading.Lock,
    tick_seconds: float,
):
    """Run one task start-to-finish on its own thread."""
    try:
        program = w.find_program(spec.program)
        completion = run_to_completion(
            program,
            bind_env(spec, w.shared),
            spec.name,
            on_emit=collector.append,
            on_sleep=lambda ticks: time.sleep(ticks * tick_seconds),
        )
        if completion.failed:
            failure = completion.failure
            outcome = TaskOutcome(
                TaskStatus.FAILED, failure.tick, failure.reason, failure.pc
            )
        else:
            outcome = TaskOutcome(
                TaskStatus.FINISHED, completion.end_tick, None, len(program.body)
            )
    except Exception as e:
        logger.error(f"Worker for task {spec.name} crashed: {e}")
        outcome = TaskOutcome(TaskStatus.FAILED, None, f"worker error: {str(e)}")

    with outcomes_lock:
        outcomes[spec.name] = outcome


def run_parallel(w: Workload, tick_ms: float = DEFAULT_TICK_MS) -> RunResult:
    """Execute every task on an independent thread and join them all."""
    errors = validate_workload(w)
    if errors:
        raise InvalidWorkloadError(errors)
    if tick_ms < 0:
        raise ValueError(f"tick duration must be non-negative, got {tick_ms}")

    tasks = w.tasks_by_rank()
    collector = EmitCollector()
    outcomes: Dict[str, TaskOutcome] = {}
    outcomes_lock = threading.Lock()
    tick_seconds = tick_ms / 1000.0

    logger.info(f"Starting parallel run: {len(tasks)} workers, {tick_ms} ms/tick")
    started = time.perf_counter()
    workers = []
    for spec in tasks:
        worker = threading.Thread(
            target=_worker,
            args=(w, spec, collector, outcomes, outcomes_lock, tick_seconds),
            name=spec.name,
            daemon=True,
        )
        try:
            worker.start()
        except RuntimeError as e:
            for launched in workers:
                launched.join()
            raise RuntimeError(f"Failed to launch worker for {spec.name}: {str(e)}")
        workers.append(worker)

    for worker in workers:
        worker.join()
    wall_seconds = time.perf_counter() - started
    logger.info(f"Parallel run joined {len(workers)} workers in {wall_seconds:.3f}s")

    trace = Trace(
        events=(),
        tasks=tuple(spec.name for spec in tasks),
        quantum=None,
        workload_digest=workload_digest(w),
    )
    return RunResult(
        emits=collector.snapshot(),
        statuses={spec.name: outcomes[spec.name] for spec in tasks},
        trace=trace,
        mode=RunMode.PARALLEL,
        wall_seconds=wall_seconds,
    )


@dataclass(frozen=True)
class EquivalenceReport:
    equal: bool
    missing: Counter = field(default_factory=Counter)
    extra: Counter = field(default_factory=Counter)
    status_mismatches: Dict[str, Tuple[Optional[str], Optional[str]]] = field(
        default_factory=dict
    )


def _status_key(outcome: Optional[TaskOutcome]) -> Optional[str]:
    if outcome is None:
        return None
    if outcome.failed:
        return f"{outcome.status.value}: {outcome.reason}"
    return outcome.status.value


def reconcile(a: RunResult, b: RunResult) -> EquivalenceReport:
    """Compare emit multisets and terminal statuses, ignoring order and ticks."""
    emits_a = Counter(record.triple() for record in a.emits)
    emits_b = Counter(record.triple() for record in b.emits)
    missing = emits_a - emits_b
    extra = emits_b - emits_a

    mismatches = {}
    for name in list(a.statuses) + [n for n in b.statuses if n not in a.statuses]:
        status_a = _status_key(a.statuses.get(name))
        status_b = _status_key(b.statuses.get(name))
        if status_a != status_b:
            mismatches[name] = (status_a, status_b)

    return EquivalenceReport(
        equal=not missing and not extra and not mismatches,
        missing=missing,
        extra=extra,
        status_mismatches=mismatches,
    )
