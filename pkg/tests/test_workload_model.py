import pytest

from workload.workload_model import (
    Compute,
    DataBinding,
    Emit,
    ExecutionModel,
    InvalidWorkloadError,
    MissingDataError,
    Opcode,
    ProgramDef,
    Sleep,
    TaskSpec,
    Workload,
    bind_env,
    classify,
    count_dimensions,
    validate_workload,
    workload_digest,
)


def _adder(name="main"):
    return ProgramDef(name, [Compute("sum", Opcode.ADD, "a", "b"), Emit("sum")])


class TestValidateWorkload:
    def test_program1_is_valid(self, program1):
        assert validate_workload(program1) == []

    def test_zero_tasks(self):
        errors = validate_workload(Workload([_adder()], []))
        assert "no tasks" in errors

    def test_unbound_variable(self):
        program = ProgramDef(
            "main", [Compute("sum", Opcode.ADD, "a", "c"), Emit("sum")]
        )
        task = TaskSpec("task1", 0, "main", DataBinding({"a": 1, "b": 1}))
        errors = validate_workload(Workload([program], [task]))
        assert errors == ["unbound variable c in program main"]

    def test_variable_defined_by_earlier_instruction(self):
        program = ProgramDef(
            "main",
            [
                Compute("x", Opcode.MUL, "a", 2),
                Compute("y", Opcode.SUB, "x", "b"),
                Emit("y"),
            ],
        )
        task = TaskSpec("task1", 0, "main", DataBinding({"a": 1, "b": 1}))
        assert validate_workload(Workload([program], [task])) == []

    def test_duplicate_task_name_and_unknown_program(self):
        binding = DataBinding({"a": 1, "b": 2})
        tasks = [
            TaskSpec("task1", 0, "main", binding),
            TaskSpec("task1", 1, "main", binding),
            TaskSpec("task2", 2, "missing", binding),
        ]
        errors = validate_workload(Workload([_adder()], tasks))
        assert "duplicate task name task1" in errors
        assert "task task2 references unknown program missing" in errors

    def test_missing_data_source(self):
        errors = validate_workload(Workload([_adder()], [TaskSpec("t", 0, "main")]))
        assert errors == ["task t has no data source"]

    def test_empty_body_and_negative_sleep(self):
        programs = [ProgramDef("empty", []), ProgramDef("napper", [Sleep(-1)])]
        tasks = [
            TaskSpec("t1", 0, "empty", DataBinding({"a": 1})),
            TaskSpec("t2", 1, "napper", DataBinding({"a": 1})),
        ]
        errors = validate_workload(Workload(programs, tasks))
        assert "program empty has an empty body" in errors
        assert "negative sleep in program napper" in errors

    def test_unbound_reported_once_per_program(self):
        program = ProgramDef("main", [Emit("z")])
        tasks = [
            TaskSpec(f"t{rank}", rank, "main", DataBinding({"a": rank}))
            for rank in range(3)
        ]
        errors = validate_workload(Workload([program], tasks))
        assert errors == ["unbound variable z in program main"]


class TestClassify:
    def test_program1_is_spmd(self, program1):
        assert classify(program1) is ExecutionModel.SPMD

    def test_single_task_is_spsd(self):
        task = TaskSpec("task1", 0, "main", DataBinding({"a": 1, "b": 1}))
        assert classify(Workload([_adder()], [task])) is ExecutionModel.SPSD

    def test_shared_data_many_programs_is_mpsd(self):
        programs = [
            ProgramDef(name, [Compute("r", op, "a", "b"), Emit("r")])
            for name, op in (("add", Opcode.ADD), ("sub", Opcode.SUB), ("div", Opcode.DIV))
        ]
        tasks = [TaskSpec(f"t{i}", i, p.name) for i, p in enumerate(programs)]
        w = Workload(programs, tasks, DataBinding({"a": 6, "b": 3}))
        assert classify(w) is ExecutionModel.MPSD

    def test_two_programs_two_bindings_is_mpmd(self):
        tasks = [
            TaskSpec("t1", 0, "one", DataBinding({"a": 1, "b": 1})),
            TaskSpec("t2", 1, "two", DataBinding({"a": 2, "b": 2})),
        ]
        w = Workload([_adder("one"), _adder("two")], tasks)
        assert classify(w) is ExecutionModel.MPMD

    def test_equal_bindings_count_once(self):
        tasks = [
            TaskSpec("t1", 0, "main", DataBinding({"a": 1, "b": 1})),
            TaskSpec("t2", 1, "main", DataBinding({"b": 1, "a": 1})),
        ]
        w = Workload([_adder()], tasks)
        assert count_dimensions(w) == (1, 1)
        assert classify(w) is ExecutionModel.SPSD

    def test_shared_counts_once(self):
        tasks = [TaskSpec(f"t{i}", i, "main") for i in range(4)]
        w = Workload([_adder()], tasks, DataBinding({"a": 6, "b": 3}))
        assert count_dimensions(w) == (1, 1)

    def test_task_order_does_not_matter(self, program1):
        reordered = Workload(program1.programs, tuple(reversed(program1.tasks)))
        assert classify(reordered) is classify(program1)

    def test_invalid_workload_refused(self):
        with pytest.raises(InvalidWorkloadError) as excinfo:
            classify(Workload([_adder()], []))
        assert "no tasks" in excinfo.value.errors

    def test_describe(self):
        assert "single program, multiple data" in ExecutionModel.SPMD.describe()


class TestBindEnv:
    def test_own_data(self):
        task = TaskSpec("task1", 0, "main", DataBinding({"a": 1, "b": 1}))
        assert bind_env(task, None) == {"a": 1, "b": 1}

    def test_shared_pass_through(self):
        task = TaskSpec("t", 0, "main")
        assert bind_env(task, DataBinding({"a": 6, "b": 3})) == {"a": 6, "b": 3}

    def test_own_shadows_shared_entirely(self):
        task = TaskSpec("t", 0, "main", DataBinding({"a": 2, "b": 2}))
        shared = DataBinding({"a": 9, "b": 9, "c": 9})
        assert bind_env(task, shared) == {"a": 2, "b": 2}

    def test_missing_data(self):
        with pytest.raises(MissingDataError):
            bind_env(TaskSpec("t", 0, "main"), None)

    def test_repeated_calls_do_not_share_state(self):
        binding = DataBinding({"a": 1})
        task = TaskSpec("t", 0, "main", binding)
        env = bind_env(task, None)
        env["a"] = 99
        assert bind_env(task, None) == {"a": 1}
        assert binding.values["a"] == 1


def test_digest_is_stable(program1):
    assert workload_digest(program1) == workload_digest(program1)
    other = Workload(program1.programs, program1.tasks[:2])
    assert workload_digest(other) != workload_digest(program1)
