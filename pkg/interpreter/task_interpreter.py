# interpreter/task_interpreter.py
"""
Straight-line interpreter for one task's program.

Cost model: compute and emit cost one tick each, sleep costs no compute and
blocks for its operand, a faulting instruction costs nothing.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Union

from workload.workload_model import (
    Compute,
    Emit,
    Instruction,
    Opcode,
    Operand,
    ProgramDef,
    Sleep,
    fits_int64,
)

logger = logging.getLogger(__name__)

Env = Dict[str, int]


@dataclass(frozen=True)
class EmitRecord:
    task_name: str
    var: str
    value: int
    tick: int

    def triple(self):
        """(task, var, value) with the tick dropped, for order-free comparisons."""
        return (self.task_name, self.var, self.value)


@dataclass(frozen=True)
class Advanced:
    dest: str
    value: int
    cost: int = 1


@dataclass(frozen=True)
class Emitted:
    record: EmitRecord
    cost: int = 1


@dataclass(frozen=True)
class Slept:
    ticks: int
    cost: int = 0


@dataclass(frozen=True)
class Finished:
    cost: int = 0


@dataclass(frozen=True)
class Failed:
    reason: str
    cost: int = 0


StepOutcome = Union[Advanced, Emitted, Slept, Finished, Failed]


class ArithmeticFault(Exception):
    """Task-level arithmetic error; never escapes the interpreter."""


def _resolve(arg: Operand, env: Env) -> int:
    if isinstance(arg, int):
        return arg
    if arg not in env:
        raise ArithmeticFault("unbound variable")
    return env[arg]


def _divide(lhs: int, rhs: int) -> int:
    if rhs == 0:
        raise ArithmeticFault("divide by zero")
    # Truncate toward zero
    quotient = abs(lhs) // abs(rhs)
    return -quotient if (lhs < 0) != (rhs < 0) else quotient


def apply_opcode(op: Opcode, lhs: int, rhs: int) -> int:
    """Checked signed 64-bit arithmetic."""
    if op is Opcode.ADD:
        result = lhs + rhs
    elif op is Opcode.SUB:
        result = lhs - rhs
    elif op is Opcode.MUL:
        result = lhs * rhs
    elif op is Opcode.DIV:
        result = _divide(lhs, rhs)
    else:
        raise ValueError(f"Unknown opcode: {op}")

    if not fits_int64(result):
        raise ArithmeticFault("overflow")
    return result


def exec_instruction(
    instruction: Instruction, env: Env, task_name: str = "", tick: int = 0
) -> StepOutcome:
    """Execute a single instruction; a compute updates env in place on success."""
    try:
        if isinstance(instruction, Compute):
            lhs = _resolve(instruction.lhs, env)
            rhs = _resolve(instruction.rhs, env)
            value = apply_opcode(instruction.op, lhs, rhs)
            env[instruction.dest] = value
            return Advanced(dest=instruction.dest, value=value)

        if isinstance(instruction, Emit):
            value = _resolve(instruction.src, env)
            return Emitted(EmitRecord(task_name, instruction.src, value, tick))

        if isinstance(instruction, Sleep):
            return Slept(instruction.ticks)
    except ArithmeticFault as fault:
        return Failed(str(fault))

    raise TypeError(f"Not an instruction: {instruction!r}")


def exec_at(
    program: ProgramDef, pc: int, env: Env, task_name: str = "", tick: int = 0
) -> StepOutcome:
    """Execute the instruction at pc, or report Finished past the end of the body."""
    if pc >= len(program.body):
        return Finished()
    return exec_instruction(program.body[pc], env, task_name, tick)


@dataclass(frozen=True)
class ExecutedStep:
    pc: int
    tick: int
    outcome: StepOutcome


@dataclass(frozen=True)
class TaskFailure:
    pc: int
    tick: int
    reason: str


@dataclass
class Completion:
    """Result of running one program start-to-finish without interleaving."""

    task_name: str
    start_tick: int
    end_tick: int = 0
    emits: List[EmitRecord] = field(default_factory=list)
    compute_ticks: int = 0
    sleep_ticks: int = 0
    steps: List[ExecutedStep] = field(default_factory=list)
    failure: Optional[TaskFailure] = None

    @property
    def failed(self) -> bool:
        return self.failure is not None


def run_to_completion(
    program: ProgramDef,
    env: Env,
    task: str,
    start_tick: int = 0,
    on_emit: Optional[Callable[[EmitRecord], None]] = None,
    on_sleep: Optional[Callable[[int], None]] = None,
) -> Completion:
    """
    Execute the whole body in order. Sleeps advance the task's clock by their
    operand; on_sleep lets a caller realize them as real pauses.
    """
    env = dict(env)
    completion = Completion(task_name=task, start_tick=start_tick)
    tick = start_tick

    for pc, instruction in enumerate(program.body):
        outcome = exec_instruction(instruction, env, task, tick)
        completion.steps.append(ExecutedStep(pc, tick, outcome))

        if isinstance(outcome, Failed):
            completion.failure = TaskFailure(pc, tick, outcome.reason)
            logger.info(f"Task {task} failed at pc={pc}: {outcome.reason}")
            break

        if isinstance(outcome, Emitted):
            completion.emits.append(outcome.record)
            if on_emit is not None:
                on_emit(outcome.record)

        if isinstance(outcome, Slept):
            completion.sleep_ticks += outcome.ticks
            if on_sleep is not None:
                on_sleep(outcome.ticks)
            tick += outcome.ticks
        else:
            completion.compute_ticks += outcome.cost
            tick += outcome.cost

    completion.end_tick = tick
    return completion
