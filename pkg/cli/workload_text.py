# cli/workload_text.py
"""
Line-oriented workload format.

    # comment
    program main
      sum = add a b
      emit sum
      sleep 200
    end
    shared a=6 b=3
    task task1 main a=1 b=1
"""

import re
from dataclasses import dataclass
from typing import Dict, List, Optional

from workload.workload_model import (
    Compute,
    DataBinding,
    Emit,
    Instruction,
    Opcode,
    Operand,
    ProgramDef,
    Sleep,
    TaskSpec,
    Workload,
    fits_int64,
    is_identifier,
)

INTEGER_PATTERN = re.compile(r"^[+-]?[0-9]+$")
COMPUTE_PATTERN = re.compile(r"^(\S+)\s*=\s*(\S+)\s+(\S+)\s+(\S+)$")
OPCODES = {opcode.value: opcode for opcode in Opcode}


@dataclass(frozen=True)
class ParseError:
    line: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.message}"


class WorkloadParseError(ValueError):
    """Raised with every problem found in a workload text."""

    def __init__(self, errors: List[ParseError]):
        self.errors = list(errors)
        super().__init__("; ".join(str(error) for error in self.errors))


class WorkloadTextParser:
    """Single-pass parser collecting all errors instead of stopping at the first."""

    def __init__(self):
        self.errors: List[ParseError] = []
        self.programs: List[ProgramDef] = []
        self.tasks: List[TaskSpec] = []
        self.shared: Optional[DataBinding] = None
        self._shared_line: Optional[int] = None
        self._open_program: Optional[str] = None
        self._open_line = 0
        self._open_body: List[Instruction] = []

    def error(self, line: int, message: str):
        self.errors.append(ParseError(line, message))

    def parse_integer(self, token: str, line: int) -> Optional[int]:
        if not INTEGER_PATTERN.match(token):
            self.error(line, f"invalid integer {token!r}")
            return None
        value = int(token)
        if not fits_int64(value):
            self.error(line, f"integer {token} is outside the signed 64-bit range")
            return None
        return value

    def parse_operand(self, token: str, line: int) -> Optional[Operand]:
        if is_identifier(token):
            return token
        return self.parse_integer(token, line)

    def parse_bindings(self, tokens: List[str], line: int) -> Optional[DataBinding]:
        values: Dict[str, int] = {}
        ok = True
        for token in tokens:
            key, sep, raw = token.partition("=")
            if not sep or not is_identifier(key) or not INTEGER_PATTERN.match(raw):
                self.error(line, f"malformed binding {token!r}")
                ok = False
                continue
            if key in values:
                self.error(line, f"duplicate binding key {key}")
                ok = False
                continue
            value = self.parse_integer(raw, line)
            if value is None:
                ok = False
                continue
            values[key] = value
        return DataBinding(values) if ok else None

    def parse_instruction(self, text: str, line: int) -> Optional[Instruction]:
        # Compute lines first: `emit`, `sleep` and `end` are valid variable names
        match = COMPUTE_PATTERN.match(text)
        if match is not None:
            return self.parse_compute(match, line)

        tokens = text.split()
        if tokens[0] == "emit":
            if len(tokens) != 2 or not is_identifier(tokens[1]):
                self.error(line, "expected `emit <var>`")
                return None
            return Emit(tokens[1])

        if tokens[0] == "sleep":
            if len(tokens) != 2:
                self.error(line, "expected `sleep <n>`")
                return None
            ticks = self.parse_integer(tokens[1], line)
            if ticks is None:
                return None
            if ticks < 0:
                self.error(line, "sleep ticks must be non-negative")
                return None
            return Sleep(ticks)

        self.error(line, f"unrecognised instruction {text!r}")
        return None

    def parse_compute(self, match: re.Match, line: int) -> Optional[Compute]:
        dest, op_name, lhs_token, rhs_token = match.groups()
        if not is_identifier(dest):
            self.error(line, f"invalid variable name {dest!r}")
            return None
        if op_name not in OPCODES:
            self.error(line, f"unknown opcode `{op_name}`")
            return None
        lhs = self.parse_operand(lhs_token, line)
        rhs = self.parse_operand(rhs_token, line)
        if lhs is None or rhs is None:
            return None
        return Compute(dest, OPCODES[op_name], lhs, rhs)

    def open_program(self, tokens: List[str], line: int):
        if len(tokens) != 2 or not is_identifier(tokens[1]):
            self.error(line, "expected `program <name>`")
            # Still open a block so its `end` does not cascade into more errors
            name = ""
        else:
            name = tokens[1]
            if any(program.name == name for program in self.programs):
                self.error(line, f"duplicate program name {name}")
        self._open_program = name
        self._open_line = line
        self._open_body = []

    def close_program(self, line: int):
        if not self._open_body:
            self.error(line, f"program {self._open_program} has an empty body")
        if self._open_program:
            self.programs.append(ProgramDef(self._open_program, self._open_body))
        self._open_program = None

    def parse_task(self, tokens: List[str], line: int):
        if len(tokens) < 3:
            self.error(line, "expected `task <name> <program> [<k>=<int> ...]`")
            return
        name, program = tokens[1], tokens[2]
        if not is_identifier(name):
            self.error(line, f"invalid task name {name!r}")
            return
        if not is_identifier(program):
            self.error(line, f"invalid program name {program!r}")
            return
        if any(task.name == name for task in self.tasks):
            self.error(line, f"duplicate task name {name}")
            return
        own_data = None
        if len(tokens) > 3:
            own_data = self.parse_bindings(tokens[3:], line)
            if own_data is None:
                return
        self.tasks.append(TaskSpec(name, len(self.tasks), program, own_data))

    def parse_shared(self, tokens: List[str], line: int):
        if self._shared_line is not None:
            self.error(
                line, f"second `shared` line (first on line {self._shared_line})"
            )
            return
        self._shared_line = line
        self.shared = self.parse_bindings(tokens[1:], line)

    def parse(self, text: str) -> Workload:
        lines = text.splitlines()
        for number, raw in enumerate(lines, start=1):
            content = raw.split("#", 1)[0].strip()
            if not content:
                continue
            tokens = content.split()
            keyword = tokens[0]

            if self._open_program is not None:
                if keyword == "end" and len(tokens) == 1:
                    self.close_program(number)
                elif keyword in ("program", "task", "shared", "end") and not (
                    COMPUTE_PATTERN.match(content)
                ):
                    self.error(
                        number,
                        f"`{keyword}` inside program block opened on line {self._open_line}",
                    )
                else:
                    instruction = self.parse_instruction(content, number)
                    if instruction is not None:
                        self._open_body.append(instruction)
                continue

            if keyword == "program":
                self.open_program(tokens, number)
            elif keyword == "task":
                self.parse_task(tokens, number)
            elif keyword == "shared":
                self.parse_shared(tokens, number)
            elif keyword == "end":
                self.error(number, "`end` without an open program")
            else:
                self.error(number, f"unknown statement `{keyword}`")

        if self._open_program is not None:
            self.error(
                self._open_line,
                f"missing `end` for program {self._open_program or '<unnamed>'}",
            )
        if not self.tasks:
            self.error(max(1, len(lines)), "no tasks")

        if self.errors:
            raise WorkloadParseError(sorted(self.errors, key=lambda e: e.line))
        return Workload(tuple(self.programs), tuple(self.tasks), self.shared)


def parse_workload(text: str) -> Workload:
    """Parse workload text; raises WorkloadParseError listing every problem with its line."""
    return WorkloadTextParser().parse(text)


def load_workload_file(path: str) -> Workload:
    """Read and parse a workload file."""
    try:
        with open(path, "rb") as handle:
            raw = handle.read()
    except OSError as e:
        raise FileNotFoundError(f"Cannot read workload file {path}: {str(e)}")
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as e:
        line = raw.count(b"\n", 0, e.start) + 1
        raise WorkloadParseError([ParseError(line, "not valid UTF-8")])
    return parse_workload(text)


def _format_operand(arg: Operand) -> str:
    return str(arg)


def _format_binding(binding: DataBinding) -> str:
    return " ".join(f"{key}={value}" for key, value in binding.values.items())


def serialize_workload(w: Workload) -> str:
    """Canonical text form; parsing it back yields an equal workload."""
    lines = []
    for program in w.programs:
        lines.append(f"program {program.name}")
        for instruction in program.body:
            if isinstance(instruction, Compute):
                lines.append(
                    f"  {instruction.dest} = {instruction.op.value} "
                    f"{_format_operand(instruction.lhs)} {_format_operand(instruction.rhs)}"
                )
            elif isinstance(instruction, Emit):
                lines.append(f"  emit {instruction.src}")
            else:
                lines.append(f"  sleep {instruction.ticks}")
        lines.append("end")
    if w.shared is not None:
        lines.append(f"shared {_format_binding(w.shared)}".rstrip())
    for task in w.tasks_by_rank():
        line = f"task {task.name} {task.program}"
        if task.own_data is not None:
            line = f"{line} {_format_binding(task.own_data)}"
        lines.append(line)
    return "\n".join(lines) + "\n"
