import os
import random
from typing import List

import pytest

from workload.workload_model import (
    Compute,
    DataBinding,
    Emit,
    Opcode,
    ProgramDef,
    Sleep,
    TaskSpec,
    Workload,
)

ROOT_DIR = os.path.dirname(os.path.abspath(__file__))
WORKLOADS_DIR = os.path.join(ROOT_DIR, "workloads")

# Large enough to behave as an unbounded quantum
UNBOUNDED_QUANTUM = 10**9


def program1_workload() -> Workload:
    """task1..task4 running sum=a+b; emit sum; sleep 200 over their own pairs."""
    main = ProgramDef(
        "main",
        [Compute("sum", Opcode.ADD, "a", "b"), Emit("sum"), Sleep(200)],
    )
    pairs = [("task1", 1, 1), ("task2", 5, 5), ("task3", 10, 10), ("task4", 1, 5)]
    tasks = [
        TaskSpec(name, rank, "main", DataBinding({"a": a, "b": b}))
        for rank, (name, a, b) in enumerate(pairs)
    ]
    return Workload([main], tasks)


def make_random_workload(rng: random.Random, allow_sleep: bool = True) -> Workload:
    """Valid workload: <=8 tasks, <=4 programs, <=6 instructions, values in [-100, 100]."""
    programs = []
    for index in range(rng.randint(1, 4)):
        defined = ["a", "b"]
        body = []
        for position in range(rng.randint(1, 6)):
            choice = rng.random()
            if position == 0 or choice < 0.45:
                lhs = rng.choice(defined + [rng.randint(-100, 100)])
                rhs = rng.choice(defined + [rng.randint(-100, 100)])
                dest = f"v{position}"
                body.append(Compute(dest, rng.choice(list(Opcode)), lhs, rhs))
                if dest not in defined:
                    defined.append(dest)
            elif choice < 0.8 or not allow_sleep:
                body.append(Emit(rng.choice(defined)))
            else:
                body.append(Sleep(rng.randint(0, 50)))
        programs.append(ProgramDef(f"p{index}", body))

    shared = None
    if rng.random() < 0.5:
        shared = DataBinding(
            {"a": rng.randint(-100, 100), "b": rng.randint(-100, 100)}
        )

    tasks = []
    for rank in range(rng.randint(1, 8)):
        own_data = None
        if shared is None or rng.random() < 0.5:
            own_data = DataBinding(
                {"a": rng.randint(-100, 100), "b": rng.randint(-100, 100)}
            )
        tasks.append(
            TaskSpec(f"t{rank}", rank, rng.choice(programs).name, own_data)
        )
    return Workload(programs, tasks, shared)


@pytest.fixture
def program1() -> Workload:
    return program1_workload()


@pytest.fixture
def workload_path():
    def _path(name: str) -> str:
        return os.path.join(WORKLOADS_DIR, name)

    return _path


@pytest.fixture(scope="session")
def random_workloads() -> List[Workload]:
    rng = random.Random(20100201)
    return [make_random_workload(rng) for _ in range(120)]


@pytest.fixture(scope="session")
def random_no_sleep_workloads() -> List[Workload]:
    rng = random.Random(7)
    return [make_random_workload(rng, allow_sleep=False) for _ in range(120)]
