# cli/render_output.py
"""Text renderings of emits, traces and metrics. All output is byte-deterministic."""

import pandas as pd

from interpreter.task_interpreter import EmitRecord
from metrics.run_metrics import RunMetrics
from scheduler.schedule_trace import Action, ScheduleEvent, Trace


def format_emit_line(e: EmitRecord) -> str:
    return f"the {e.var} is {e.value} produced by {e.task_name} thread\n"


def format_event(event: ScheduleEvent) -> str:
    line = f"tick={event.tick} task={event.task or '-'} action={event.action.value}"
    if event.action is Action.EMIT:
        line += f" var={event.record.var} value={event.record.value}"
    elif event.action in (Action.SLEEP, Action.IDLE):
        line += f" until={event.until}"
    elif event.action is Action.FAIL:
        line += f' reason="{event.reason}"'
    return line


def render_trace(t: Trace) -> str:
    return "".join(format_event(event) + "\n" for event in t.events)


def render_metrics(m: RunMetrics) -> str:
    lines = [
        f"makespan={m.makespan}",
        f"compute_ticks={m.compute_ticks}",
        f"idle_ticks={m.idle_ticks}",
        f"context_switches={m.context_switches}",
        f"utilization={m.utilization:.4f}",
        f"dispatches={m.dispatches}",
    ]
    for task, ticks in m.per_task_turnaround.items():
        lines.append(f"turnaround.{task}={ticks}")
    return "\n".join(lines) + "\n"


def render_comparison(table: pd.DataFrame) -> str:
    """Fixed-width table of the sequential/concurrent comparison."""
    return table.to_string(float_format=lambda value: f"{value:.4f}") + "\n"
