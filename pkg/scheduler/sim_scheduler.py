# scheduler/sim_scheduler.py
"""
Deterministic single-processor scheduler.

run_concurrent interleaves tasks round-robin by context switching within the
same time interval; run_sequential runs them one after another, letting every
sleep block the processor.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Deque, Dict, List, Optional

from interpreter.task_interpreter import (
    Advanced,
    Emitted,
    EmitRecord,
    Env,
    Failed,
    Finished,
    Slept,
    exec_at,
    run_to_completion,
)
from scheduler.schedule_trace import (
    Action,
    RunMode,
    RunResult,
    ScheduleEvent,
    TaskOutcome,
    TaskStatus,
    Trace,
)
from workload.workload_model import (
    InvalidWorkloadError,
    ProgramDef,
    TaskSpec,
    Workload,
    bind_env,
    validate_workload,
    workload_digest,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SchedulerConfig:
    quantum: int = 1
    policy: str = "round-robin"

    def __post_init__(self):
        if not isinstance(self.quantum, int) or self.quantum < 1:
            raise ValueError(f"quantum must be a positive integer, got {self.quantum!r}")
        if self.policy != "round-robin":
            raise ValueError(f"Unsupported scheduling policy: {self.policy}")


@dataclass
class TaskState:
    spec: TaskSpec
    program: ProgramDef
    env: Env
    pc: int = 0
    status: TaskStatus = TaskStatus.READY
    wake_tick: Optional[int] = None
    end_tick: Optional[int] = None
    reason: Optional[str] = None

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def terminal(self) -> bool:
        return self.status in (TaskStatus.FINISHED, TaskStatus.FAILED)

    @property
    def at_end(self) -> bool:
        return self.pc >= len(self.program.body)

    def outcome(self) -> TaskOutcome:
        return TaskOutcome(self.status, self.end_tick, self.reason, self.pc)


class SchedState:
    """Mutable state of one concurrent run. Not shared between runs."""

    def __init__(self, workload: Workload, config: SchedulerConfig):
        self.workload = workload
        self.config = config
        self.clock = 0
        self.tasks: List[TaskState] = []
        for spec in workload.tasks_by_rank():
            self.tasks.append(
                TaskState(
                    spec=spec,
                    program=workload.find_program(spec.program),
                    env=bind_env(spec, workload.shared),
                )
            )
        self.ready: Deque[TaskState] = deque(self.tasks)
        self.events: List[ScheduleEvent] = []
        self.emits: List[EmitRecord] = []
        self.compute_ticks = 0
        self.dispatches = 0
        self.context_switches = 0
        self.last_dispatched: Optional[str] = None

    @property
    def done(self) -> bool:
        return all(task.terminal for task in self.tasks)

    def record(self, event: ScheduleEvent):
        self.events.append(event)

    def finish(self, task: TaskState, tick: int):
        task.status = TaskStatus.FINISHED
        task.end_tick = tick
        task.wake_tick = None
        self.record(ScheduleEvent(tick, task.name, Action.FINISH))

    def wake_due(self):
        """Wake or finish every sleeper whose wake tick has been reached, in rank order."""
        due = [
            task
            for task in self.tasks
            if task.status is TaskStatus.SLEEPING and task.wake_tick <= self.clock
        ]
        for task in sorted(due, key=lambda t: (t.wake_tick, t.spec.rank)):
            if task.at_end:
                self.finish(task, task.wake_tick)
                continue
            task.status = TaskStatus.READY
            self.record(ScheduleEvent(task.wake_tick, task.name, Action.WAKE))
            task.wake_tick = None
            self.ready.append(task)

    def note_dispatch(self, task: TaskState):
        self.dispatches += 1
        if self.last_dispatched is not None and self.last_dispatched != task.name:
            self.context_switches += 1
        self.last_dispatched = task.name

    def trace(self) -> Trace:
        return Trace(
            events=tuple(self.events),
            tasks=tuple(task.name for task in self.tasks),
            quantum=self.config.quantum,
            workload_digest=workload_digest(self.workload),
        )

    def online_counters(self) -> Dict[str, int]:
        return {
            "makespan": max(task.end_tick for task in self.tasks),
            "compute_ticks": self.compute_ticks,
            "dispatches": self.dispatches,
            "context_switches": self.context_switches,
        }


def init_run(w: Workload, c: SchedulerConfig) -> SchedState:
    """All tasks ready at tick 0, queued by rank."""
    errors = validate_workload(w)
    if errors:
        raise InvalidWorkloadError(errors)
    return SchedState(w, c)


def _run_turn(s: SchedState, task: TaskState) -> None:
    """Run one dispatch of task for at most quantum compute ticks."""
    task.status = TaskStatus.RUNNING
    s.note_dispatch(task)
    used = 0
    first = True

    while True:
        if used == s.config.quantum and not task.at_end:
            # Quantum spent: rotate to the tail
            task.status = TaskStatus.READY
            s.ready.append(task)
            return

        outcome = exec_at(task.program, task.pc, task.env, task.name, s.clock)

        if isinstance(outcome, Finished):
            s.finish(task, s.clock)
            return

        if isinstance(outcome, Failed):
            task.status = TaskStatus.FAILED
            task.end_tick = s.clock
            task.reason = outcome.reason
            s.record(
                ScheduleEvent(
                    s.clock, task.name, Action.FAIL, first, reason=outcome.reason
                )
            )
            logger.info(f"Task {task.name} failed at tick {s.clock}: {outcome.reason}")
            return

        if isinstance(outcome, Slept):
            task.pc += 1
            wake_tick = s.clock + outcome.ticks
            s.record(
                ScheduleEvent(s.clock, task.name, Action.SLEEP, first, until=wake_tick)
            )
            if outcome.ticks > 0:
                task.status = TaskStatus.SLEEPING
                task.wake_tick = wake_tick
            elif task.at_end:
                s.finish(task, s.clock)
            else:
                task.status = TaskStatus.READY
                s.ready.append(task)
            return

        if isinstance(outcome, Emitted):
            s.emits.append(outcome.record)
            s.record(
                ScheduleEvent(
                    s.clock, task.name, Action.EMIT, first, record=outcome.record
                )
            )
        elif isinstance(outcome, Advanced):
            s.record(ScheduleEvent(s.clock, task.name, Action.COMPUTE, first))

        task.pc += 1
        s.clock += outcome.cost
        s.compute_ticks += outcome.cost
        used += outcome.cost
        first = False
        s.wake_due()


def step(s: SchedState) -> List[ScheduleEvent]:
    """
    Advance the run by one dispatch, or by one idle gap when nothing is ready.
    Returns the events recorded during the step.
    """
    if s.done:
        raise RuntimeError("Run already complete: every task is terminal")

    start = len(s.events)
    if not s.ready:
        next_wake = min(
            task.wake_tick for task in s.tasks if task.status is TaskStatus.SLEEPING
        )
        s.record(ScheduleEvent(s.clock, None, Action.IDLE, until=next_wake))
        s.clock = next_wake
        s.wake_due()
    else:
        _run_turn(s, s.ready.popleft())
    return s.events[start:]


def run_concurrent(w: Workload, c: SchedulerConfig) -> RunResult:
    """Drive step until every task is terminal."""
    s = init_run(w, c)
    logger.info(
        f"Starting concurrent run: {len(s.tasks)} tasks, quantum={c.quantum}"
    )
    while not s.done:
        step(s)

    result = RunResult(
        emits=list(s.emits),
        statuses={task.name: task.outcome() for task in s.tasks},
        trace=s.trace(),
        mode=RunMode.CONCURRENT,
        online_counters=s.online_counters(),
    )
    logger.info(f"Concurrent run finished at tick {s.clock}")
    return result


def run_sequential(w: Workload) -> RunResult:
    """Run tasks to completion in rank order; sleeps hold the only processor."""
    errors = validate_workload(w)
    if errors:
        raise InvalidWorkloadError(errors)

    logger.info(f"Starting sequential run: {len(w.tasks)} tasks")
    clock = 0
    events: List[ScheduleEvent] = []
    emits: List[EmitRecord] = []
    statuses: Dict[str, TaskOutcome] = {}
    tasks = w.tasks_by_rank()
    compute_ticks = 0

    for spec in tasks:
        program = w.find_program(spec.program)
        completion = run_to_completion(
            program, bind_env(spec, w.shared), spec.name, start_tick=clock
        )
        emits.extend(completion.emits)
        compute_ticks += completion.compute_ticks

        for index, executed in enumerate(completion.steps):
            first = index == 0
            outcome = executed.outcome
            if isinstance(outcome, Advanced):
                events.append(
                    ScheduleEvent(executed.tick, spec.name, Action.COMPUTE, first)
                )
            elif isinstance(outcome, Emitted):
                events.append(
                    ScheduleEvent(
                        executed.tick,
                        spec.name,
                        Action.EMIT,
                        first,
                        record=outcome.record,
                    )
                )
            elif isinstance(outcome, Slept):
                wake_tick = executed.tick + outcome.ticks
                events.append(
                    ScheduleEvent(
                        executed.tick, spec.name, Action.SLEEP, first, until=wake_tick
                    )
                )
                if outcome.ticks > 0:
                    events.append(
                        ScheduleEvent(executed.tick, None, Action.IDLE, until=wake_tick)
                    )
                if outcome.ticks > 0 and executed.pc < len(program.body) - 1:
                    events.append(ScheduleEvent(wake_tick, spec.name, Action.WAKE))
            elif isinstance(outcome, Failed):
                events.append(
                    ScheduleEvent(
                        executed.tick,
                        spec.name,
                        Action.FAIL,
                        first,
                        reason=outcome.reason,
                    )
                )

        clock = completion.end_tick
        if completion.failed:
            failure = completion.failure
            statuses[spec.name] = TaskOutcome(
                TaskStatus.FAILED, failure.tick, failure.reason, failure.pc
            )
        else:
            events.append(ScheduleEvent(clock, spec.name, Action.FINISH))
            statuses[spec.name] = TaskOutcome(
                TaskStatus.FINISHED, clock, None, len(program.body)
            )

    trace = Trace(
        events=tuple(events),
        tasks=tuple(spec.name for spec in tasks),
        quantum=None,
        workload_digest=workload_digest(w),
    )
    result = RunResult(
        emits=emits,
        statuses=statuses,
        trace=trace,
        mode=RunMode.SEQUENTIAL,
        online_counters={
            "makespan": max(outcome.tick for outcome in statuses.values()),
            "compute_ticks": compute_ticks,
            "dispatches": len(tasks),
            "context_switches": len(tasks) - 1,
        },
    )
    logger.info(f"Sequential run finished at tick {clock}")
    return result
