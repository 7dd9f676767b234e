from fractions import Fraction

import pytest

from metrics.run_metrics import (
    IncompleteTraceError,
    RunMetrics,
    compare_modes,
    compute_metrics,
    format_ratio,
    speedup,
    trace_to_dataframe,
)
from scheduler.schedule_trace import Trace
from scheduler.sim_scheduler import SchedulerConfig, run_concurrent, run_sequential
from workload.workload_model import DataBinding, Emit, ProgramDef, TaskSpec, Workload


def _no_sleep_single():
    program = ProgramDef("p", [Emit("a"), Emit("a")])
    return Workload([program], [TaskSpec("t", 0, "p", DataBinding({"a": 1}))])


class TestComputeMetrics:
    def test_program1_concurrent(self, program1):
        m = compute_metrics(run_concurrent(program1, SchedulerConfig(quantum=1)).trace)
        assert m.makespan == 208
        assert m.compute_ticks == 8
        assert m.idle_ticks == 200
        assert m.context_switches == 11
        assert m.dispatches == 12
        assert m.utilization == pytest.approx(0.0385, abs=1e-4)
        assert m.per_task_turnaround == {
            "task1": 208,
            "task2": 208,
            "task3": 208,
            "task4": 208,
        }

    def test_program1_sequential(self, program1):
        m = compute_metrics(run_sequential(program1).trace)
        assert m.makespan == 808
        assert m.compute_ticks == 8
        assert m.idle_ticks == 800
        assert m.context_switches == 3

    def test_fully_busy(self):
        m = compute_metrics(run_concurrent(_no_sleep_single(), SchedulerConfig()).trace)
        assert m.idle_ticks == 0
        assert m.utilization == 1

    def test_incomplete_trace_refused(self, program1):
        trace = run_concurrent(program1, SchedulerConfig()).trace
        truncated = Trace(trace.events[:5], trace.tasks, trace.quantum, trace.workload_digest)
        with pytest.raises(IncompleteTraceError):
            compute_metrics(truncated)

    def test_empty_trace_refused(self):
        with pytest.raises(IncompleteTraceError):
            compute_metrics(Trace((), ("t",), None, ""))

    def test_trace_replay_matches_online_counters(self, random_workloads):
        for w in random_workloads:
            results = [run_sequential(w)] + [
                run_concurrent(w, SchedulerConfig(quantum)) for quantum in (1, 3, 10**9)
            ]
            for result in results:
                m = compute_metrics(result.trace)
                online = result.online_counters
                assert m.makespan == online["makespan"]
                assert m.compute_ticks == online["compute_ticks"]
                assert m.dispatches == online["dispatches"]
                assert m.context_switches == online["context_switches"]

    def test_dataframe_has_one_row_per_event(self, program1):
        trace = run_concurrent(program1, SchedulerConfig()).trace
        df = trace_to_dataframe(trace)
        assert len(df) == len(trace.events)
        assert list(df.columns) == ["tick", "task", "action", "dispatch"]


class TestSpeedup:
    def test_program1(self, program1):
        seq = compute_metrics(run_sequential(program1).trace)
        conc = compute_metrics(run_concurrent(program1, SchedulerConfig()).trace)
        ratio = speedup(seq, conc)
        assert ratio == Fraction(808, 208)
        assert format_ratio(ratio) == "3.88"

    def test_identity(self, program1):
        m = compute_metrics(run_concurrent(program1, SchedulerConfig()).trace)
        assert format_ratio(speedup(m, m)) == "1.00"

    def test_zero_concurrent_makespan_refused(self):
        zero = RunMetrics(0, 0, 0, 0, 0)
        with pytest.raises(ValueError):
            speedup(zero, zero)

    def test_no_sleep_workloads_have_unit_speedup(self, random_no_sleep_workloads):
        for w in random_no_sleep_workloads:
            seq = compute_metrics(run_sequential(w).trace)
            for quantum in (1, 3, 10**9):
                conc = compute_metrics(run_concurrent(w, SchedulerConfig(quantum)).trace)
                assert conc.makespan == seq.makespan
                if conc.makespan:
                    assert speedup(seq, conc) == 1

    def test_speedup_and_utilization_laws(self, random_workloads):
        for w in random_workloads:
            seq = compute_metrics(run_sequential(w).trace)
            for quantum in (1, 3, 10**9):
                conc = compute_metrics(run_concurrent(w, SchedulerConfig(quantum)).trace)
                assert conc.utilization >= seq.utilization
                if conc.makespan:
                    assert speedup(seq, conc) >= 1
                else:
                    assert seq.makespan == 0


def test_compare_modes_table(program1):
    table = compare_modes(program1, SchedulerConfig(quantum=1))
    assert list(table.index) == ["sequential", "concurrent"]
    assert table.loc["sequential", "makespan"] == 808
    assert table.loc["concurrent", "makespan"] == 208
    assert table.loc["concurrent", "context_switches"] == 11
    assert table.loc["concurrent", "speedup"] == pytest.approx(3.88)
    assert table.attrs["speedup"] == Fraction(808, 208)
    assert format_ratio(table.attrs["speedup"]) == "3.88"
