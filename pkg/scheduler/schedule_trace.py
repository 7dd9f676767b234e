# scheduler/schedule_trace.py
"""
Trace and result types shared by the sequential, concurrent and parallel runners.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

from interpreter.task_interpreter import EmitRecord


class Action(Enum):
    COMPUTE = "compute"
    EMIT = "emit"
    SLEEP = "sleep"
    WAKE = "wake"
    FINISH = "finish"
    FAIL = "fail"
    IDLE = "idle"


TERMINAL_ACTIONS = (Action.FINISH, Action.FAIL)


@dataclass(frozen=True)
class ScheduleEvent:
    """
    One tick-stamped trace entry. dispatch marks the first event of a turn;
    idle events carry no task.
    """

    tick: int
    task: Optional[str]
    action: Action
    dispatch: bool = False
    record: Optional[EmitRecord] = None
    until: Optional[int] = None
    reason: Optional[str] = None


class RunMode(Enum):
    SEQUENTIAL = "sequential"
    CONCURRENT = "concurrent"
    PARALLEL = "parallel"


@dataclass(frozen=True)
class Trace:
    events: Tuple[ScheduleEvent, ...]
    tasks: Tuple[str, ...]
    quantum: Optional[int]
    workload_digest: str


class TaskStatus(Enum):
    READY = "ready"
    RUNNING = "running"
    SLEEPING = "sleeping"
    FINISHED = "finished"
    FAILED = "failed"


@dataclass(frozen=True)
class TaskOutcome:
    """Terminal status of one task."""

    status: TaskStatus
    tick: Optional[int] = None
    reason: Optional[str] = None
    pc: Optional[int] = None

    @property
    def failed(self) -> bool:
        return self.status is TaskStatus.FAILED


@dataclass
class RunResult:
    emits: List[EmitRecord]
    statuses: Dict[str, TaskOutcome]
    trace: Trace
    mode: RunMode
    # Counters accumulated while running; replaying the trace must reproduce them
    online_counters: Dict[str, int] = field(default_factory=dict)
    wall_seconds: Optional[float] = None

    @property
    def failed_tasks(self) -> List[str]:
        return [name for name, outcome in self.statuses.items() if outcome.failed]
