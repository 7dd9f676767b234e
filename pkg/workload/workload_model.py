# workload/workload_model.py
"""
Workload model: programs, data bindings and tasks, plus the validation and
program/data classification rules every runner relies on.
"""

import hashlib
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Dict, List, Mapping, Optional, Set, Tuple, Union

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

IDENTIFIER_PATTERN = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


def is_identifier(name) -> bool:
    """True when name matches the workload identifier grammar."""
    return isinstance(name, str) and IDENTIFIER_PATTERN.match(name) is not None


def fits_int64(value: int) -> bool:
    return INT64_MIN <= value <= INT64_MAX


class Opcode(Enum):
    """Binary integer operations."""

    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"


# A var-name or a signed 64-bit literal
Operand = Union[str, int]


@dataclass(frozen=True)
class Compute:
    dest: str
    op: Opcode
    lhs: Operand
    rhs: Operand

    def reads(self) -> List[str]:
        return [arg for arg in (self.lhs, self.rhs) if isinstance(arg, str)]


@dataclass(frozen=True)
class Emit:
    src: str

    def reads(self) -> List[str]:
        return [self.src]


@dataclass(frozen=True)
class Sleep:
    ticks: int

    def reads(self) -> List[str]:
        return []


Instruction = Union[Compute, Emit, Sleep]


@dataclass(frozen=True)
class ProgramDef:
    name: str
    body: Tuple[Instruction, ...]

    def __post_init__(self):
        object.__setattr__(self, "body", tuple(self.body))


@dataclass(frozen=True)
class DataBinding:
    """Named integer inputs. Two bindings are the same dataset iff their maps are equal."""

    values: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "values", MappingProxyType(dict(self.values)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, DataBinding):
            return NotImplemented
        return dict(self.values) == dict(other.values)

    def __hash__(self) -> int:
        return hash(self.dataset_key())

    def dataset_key(self) -> frozenset:
        return frozenset(self.values.items())

    def as_env(self) -> Dict[str, int]:
        return dict(self.values)


@dataclass(frozen=True)
class TaskSpec:
    name: str
    rank: int
    program: str
    own_data: Optional[DataBinding] = None


@dataclass(frozen=True)
class Workload:
    programs: Tuple[ProgramDef, ...]
    tasks: Tuple[TaskSpec, ...]
    shared: Optional[DataBinding] = None

    def __post_init__(self):
        object.__setattr__(self, "programs", tuple(self.programs))
        object.__setattr__(self, "tasks", tuple(self.tasks))

    def find_program(self, name: str) -> Optional[ProgramDef]:
        """Return the program with this name, or None."""
        for program in self.programs:
            if program.name == name:
                return program
        return None

    def tasks_by_rank(self) -> List[TaskSpec]:
        return sorted(self.tasks, key=lambda task: task.rank)


class ExecutionModel(Enum):
    """Program/data quadrants."""

    SPSD = "SPSD"
    MPSD = "MPSD"
    SPMD = "SPMD"
    MPMD = "MPMD"

    def describe(self) -> str:
        return _MODEL_DESCRIPTIONS[self]


_MODEL_DESCRIPTIONS = {
    ExecutionModel.SPSD: "single program, single data: one program over one dataset",
    ExecutionModel.MPSD: "multiple programs, single data: every program reads the same dataset",
    ExecutionModel.SPMD: "single program, multiple data: one program run by tasks over different datasets",
    ExecutionModel.MPMD: "multiple programs, multiple data: tasks run different programs over different datasets",
}


class InvalidWorkloadError(ValueError):
    """Raised when an operation needs a valid workload and validation found problems."""

    def __init__(self, errors: List[str]):
        self.errors = list(errors)
        super().__init__("Invalid workload: " + "; ".join(self.errors))


class MissingDataError(ValueError):
    """Raised when a task has neither its own data nor a shared binding to read."""


def bind_env(task: TaskSpec, shared: Optional[DataBinding]) -> Dict[str, int]:
    """Initial environment for a task: own data if present, else shared. Never merged."""
    if task.own_data is not None:
        return task.own_data.as_env()
    if shared is not None:
        return shared.as_env()
    raise MissingDataError(
        f"Task {task.name} has no own data and the workload has no shared binding"
    )


def _validate_binding(binding: DataBinding, owner: str) -> List[str]:
    errors = []
    for key, value in binding.values.items():
        if not is_identifier(key):
            errors.append(f"invalid variable name {key!r} in {owner}")
        if not isinstance(value, int) or isinstance(value, bool):
            errors.append(f"value of {key} in {owner} is not an integer")
        elif not fits_int64(value):
            errors.append(f"value of {key} in {owner} is outside the signed 64-bit range")
    return errors


def _validate_program_shape(program: ProgramDef) -> List[str]:
    errors = []
    if not is_identifier(program.name):
        errors.append(f"invalid program name {program.name!r}")
    if not program.body:
        errors.append(f"program {program.name} has an empty body")
    for instruction in program.body:
        if isinstance(instruction, Compute):
            if not is_identifier(instruction.dest):
                errors.append(
                    f"invalid destination {instruction.dest!r} in program {program.name}"
                )
            for arg in (instruction.lhs, instruction.rhs):
                if isinstance(arg, int) and not fits_int64(arg):
                    errors.append(
                        f"literal {arg} in program {program.name} is outside the signed 64-bit range"
                    )
        elif isinstance(instruction, Sleep):
            if instruction.ticks < 0:
                errors.append(f"negative sleep in program {program.name}")
    return errors


def _unbound_reads(program: ProgramDef, inputs: Set[str]) -> List[str]:
    """Variables read before any binding or earlier instruction defines them."""
    defined = set(inputs)
    unbound = []
    for instruction in program.body:
        for name in instruction.reads():
            if name not in defined and name not in unbound:
                unbound.append(name)
        if isinstance(instruction, Compute):
            defined.add(instruction.dest)
    return unbound


def validate_workload(w: Workload) -> List[str]:
    """Return every violation found in the workload; an empty list means valid."""
    errors: List[str] = []

    if not w.tasks:
        errors.append("no tasks")

    program_counts = Counter(program.name for program in w.programs)
    for name, count in program_counts.items():
        if count > 1:
            errors.append(f"duplicate program name {name}")
    for program in w.programs:
        errors.extend(_validate_program_shape(program))

    if w.shared is not None:
        errors.extend(_validate_binding(w.shared, "shared data"))

    name_counts = Counter(task.name for task in w.tasks)
    for name, count in name_counts.items():
        if count > 1:
            errors.append(f"duplicate task name {name}")
    rank_counts = Counter(task.rank for task in w.tasks)
    for rank, count in rank_counts.items():
        if count > 1:
            errors.append(f"duplicate task rank {rank}")

    reported_unbound = set()
    for task in w.tasks:
        if not is_identifier(task.name):
            errors.append(f"invalid task name {task.name!r}")
        if task.own_data is not None:
            errors.extend(_validate_binding(task.own_data, f"task {task.name}"))

        program = w.find_program(task.program)
        if program is None:
            errors.append(f"task {task.name} references unknown program {task.program}")
            continue

        if task.own_data is None and w.shared is None:
            errors.append(f"task {task.name} has no data source")
            continue

        inputs = set(bind_env(task, w.shared))
        for name in _unbound_reads(program, inputs):
            if (program.name, name) not in reported_unbound:
                reported_unbound.add((program.name, name))
                errors.append(f"unbound variable {name} in program {program.name}")

    return errors


def count_dimensions(w: Workload) -> Tuple[int, int]:
    """(P, D): distinct programs referenced by tasks and distinct datasets they read."""
    programs = {task.program for task in w.tasks}
    datasets = set()
    for task in w.tasks:
        if task.own_data is not None:
            datasets.add(task.own_data.dataset_key())
        elif w.shared is not None:
            datasets.add(w.shared.dataset_key())
    return len(programs), len(datasets)


def classify(w: Workload) -> ExecutionModel:
    """Place a valid workload on the program/data quadrant."""
    errors = validate_workload(w)
    if errors:
        raise InvalidWorkloadError(errors)

    program_count, dataset_count = count_dimensions(w)
    if program_count == 1:
        return ExecutionModel.SPSD if dataset_count == 1 else ExecutionModel.SPMD
    return ExecutionModel.MPSD if dataset_count == 1 else ExecutionModel.MPMD


def workload_digest(w: Workload) -> str:
    """Stable sha256 of the workload's canonical form."""
    canonical = []
    for program in w.programs:
        canonical.append(f"program {program.name} {program.body!r}")
    if w.shared is not None:
        canonical.append(f"shared {sorted(w.shared.values.items())!r}")
    for task in w.tasks:
        own = sorted(task.own_data.values.items()) if task.own_data else None
        canonical.append(f"task {task.rank} {task.name} {task.program} {own!r}")
    return hashlib.sha256("\n".join(canonical).encode("utf-8")).hexdigest()
