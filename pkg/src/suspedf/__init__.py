"""Suspension-aware EDF analysis, exact-time simulation, and counterexample search."""

from .analysis import (
    TestName,
    TestReport,
    TestRow,
    devi_blocking_B,
    devi_blocking_Bprime,
    devi_test,
    suspension_oblivious_test,
)
from .demo import DemoResult, run_demo
from .model import (
    Segment,
    SegmentKind,
    SuspensionPattern,
    Task,
    TaskSet,
    enumerate_split_patterns,
    hyperperiod,
    normalize_taskset,
    split_pattern,
    utilization,
)
from .rational import RationalParseError, TimeValue, parse_rational, render_rational
from .render import render_ascii, render_svg
from .search import (
    Counterexample,
    GridSpec,
    SearchStats,
    enumerate_tasksets,
    find_counterexamples,
    verify_counterexample,
)
from .simulator import (
    EventKind,
    Interval,
    OnMiss,
    ScheduleTrace,
    SimOptions,
    SuspensionWindow,
    TraceEvent,
    detect_misses,
    simulate_edf,
)
from .validation import Verdict, validate_trace

__version__ = "0.1.0"

__all__ = [
    "Counterexample",
    "DemoResult",
    "EventKind",
    "GridSpec",
    "Interval",
    "OnMiss",
    "RationalParseError",
    "ScheduleTrace",
    "SearchStats",
    "Segment",
    "SegmentKind",
    "SimOptions",
    "SuspensionPattern",
    "SuspensionWindow",
    "Task",
    "TaskSet",
    "TestName",
    "TestReport",
    "TestRow",
    "TimeValue",
    "TraceEvent",
    "Verdict",
    "detect_misses",
    "devi_blocking_B",
    "devi_blocking_Bprime",
    "devi_test",
    "enumerate_split_patterns",
    "enumerate_tasksets",
    "find_counterexamples",
    "hyperperiod",
    "normalize_taskset",
    "parse_rational",
    "render_ascii",
    "render_rational",
    "render_svg",
    "run_demo",
    "simulate_edf",
    "split_pattern",
    "suspension_oblivious_test",
    "utilization",
    "validate_trace",
    "verify_counterexample",
]
