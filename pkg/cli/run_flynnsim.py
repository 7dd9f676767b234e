# cli/run_flynnsim.py
"""
Command-line driver.

    python cli/run_flynnsim.py run workloads/program1.fw --mode sim --quantum 1
    python cli/run_flynnsim.py classify workloads/program1.fw
    python cli/run_flynnsim.py check workloads/mpsd.fw
    python cli/run_flynnsim.py compare workloads/program1.fw

Exit codes: 0 all tasks finished, 1 workload parse/validation error,
2 usage error, 3 run completed but at least one task failed.
"""

import argparse
import logging
import os
import sys
from typing import List, Optional, TextIO

# Add project root to path when run as a script
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from cli.render_output import (
    format_emit_line,
    render_comparison,
    render_metrics,
    render_trace,
)
from cli.workload_text import WorkloadParseError, load_workload_file
from configuration.runtime_settings import MODES, RuntimeSettings, load_settings
from metrics.run_metrics import compare_modes, compute_metrics, format_ratio
from parallel.parallel_executor import run_parallel
from scheduler.sim_scheduler import SchedulerConfig, run_concurrent, run_sequential
from workload.workload_model import (
    InvalidWorkloadError,
    Workload,
    classify,
    count_dimensions,
    validate_workload,
)

logger = logging.getLogger("flynnsim")

EXIT_OK = 0
EXIT_WORKLOAD_ERROR = 1
EXIT_USAGE = 2
EXIT_TASK_FAILED = 3


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def _non_negative_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
    return value


def build_parser(settings: RuntimeSettings) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flynnsim",
        description="Run program/data taxonomy workloads on a simulated single processor.",
    )
    parser.add_argument(
        "--verbose", action="store_true", help="log progress to standard error"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="execute a workload and print its emit lines")
    run.add_argument("file")
    run.add_argument("--mode", choices=MODES, default=settings.default_mode)
    run.add_argument("--quantum", type=_positive_int, default=settings.default_quantum)
    run.add_argument("--trace", action="store_true", help="print the schedule trace")
    run.add_argument("--metrics", action="store_true", help="print run metrics")
    run.add_argument(
        "--tick-ms",
        type=_non_negative_float,
        default=settings.default_tick_ms,
        help="real milliseconds per tick in threads mode",
    )

    classify_cmd = commands.add_parser("classify", help="print the workload's quadrant")
    classify_cmd.add_argument("file")
    classify_cmd.add_argument(
        "--explain", action="store_true", help="also print the program/data counts"
    )

    check = commands.add_parser("check", help="validate a workload file")
    check.add_argument("file")

    compare = commands.add_parser(
        "compare", help="sequential vs concurrent metrics and speedup"
    )
    compare.add_argument("file")
    compare.add_argument(
        "--quantum", type=_positive_int, default=settings.default_quantum
    )
    return parser


def _load_valid_workload(path: str) -> Optional[Workload]:
    """Parse and validate; log diagnostics and return None on any problem."""
    try:
        workload = load_workload_file(path)
    except FileNotFoundError as e:
        logger.error(str(e))
        return None
    except WorkloadParseError as e:
        for error in e.errors:
            logger.error(f"{path}: {error}")
        return None

    errors = validate_workload(workload)
    for error in errors:
        logger.error(f"{path}: {error}")
    return None if errors else workload


def cmd_run(args, out: TextIO) -> int:
    workload = _load_valid_workload(args.file)
    if workload is None:
        return EXIT_WORKLOAD_ERROR

    if args.mode == "sim":
        result = run_concurrent(workload, SchedulerConfig(quantum=args.quantum))
    elif args.mode == "seq":
        result = run_sequential(workload)
    else:
        result = run_parallel(workload, tick_ms=args.tick_ms)

    for record in result.emits:
        out.write(format_emit_line(record))

    if args.trace:
        out.write(render_trace(result.trace))
    if args.metrics:
        if result.trace.events:
            out.write(render_metrics(compute_metrics(result.trace)))
        else:
            logger.warning(
                f"No tick metrics in {args.mode} mode "
                f"(wall time {result.wall_seconds:.3f}s)"
            )

    for name in result.failed_tasks:
        outcome = result.statuses[name]
        logger.error(f"task {name} failed at pc={outcome.pc}: {outcome.reason}")
    return EXIT_TASK_FAILED if result.failed_tasks else EXIT_OK


def cmd_classify(args, out: TextIO) -> int:
    workload = _load_valid_workload(args.file)
    if workload is None:
        return EXIT_WORKLOAD_ERROR
    model = classify(workload)
    out.write(f"{model.value}\n")
    if args.explain:
        programs, datasets = count_dimensions(workload)
        out.write(f"programs={programs} datasets={datasets}\n")
        out.write(f"{model.describe()}\n")
    return EXIT_OK


def cmd_check(args, out: TextIO) -> int:
    workload = _load_valid_workload(args.file)
    if workload is None:
        return EXIT_WORKLOAD_ERROR
    out.write(
        f"ok: {len(workload.tasks)} tasks, {len(workload.programs)} programs\n"
    )
    return EXIT_OK


def cmd_compare(args, out: TextIO) -> int:
    workload = _load_valid_workload(args.file)
    if workload is None:
        return EXIT_WORKLOAD_ERROR
    table = compare_modes(workload, SchedulerConfig(quantum=args.quantum))
    out.write(render_comparison(table))
    out.write(f"speedup={format_ratio(table.attrs['speedup'])}\n")
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "classify": cmd_classify,
    "check": cmd_check,
    "compare": cmd_compare,
}


def main(argv: Optional[List[str]] = None, out: Optional[TextIO] = None) -> int:
    """Parse arguments, dispatch the command and return its exit code."""
    out = out or sys.stdout
    try:
        settings = load_settings()
    except ValueError as e:
        print(f"Error: invalid configuration/settings.py: {e}", file=sys.stderr)
        return EXIT_USAGE

    parser = build_parser(settings)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else str(settings.log_level).upper(),
        format="%(levelname)s: %(message)s",
        force=True,
    )
    logger.info(f"Environment: {settings.environment}")

    try:
        return COMMANDS[args.command](args, out)
    except InvalidWorkloadError as e:
        logger.error(str(e))
        return EXIT_WORKLOAD_ERROR


if __name__ == "__main__":
    sys.exit(main())
