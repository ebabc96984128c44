"""End-to-end demonstration workload.

A two-task set built around a small execution budget epsilon for the short
task: the long task is (T=6, C=5, S=1) with the pattern
[execute 1, suspend 1, execute 4], the short task is (T=8, C=epsilon, S=0).
For 0 < epsilon <= 1/3 the suspension-aware test accepts the set at every
k, yet the simulated EDF schedule misses a deadline at t=18 — so the run
demonstrates a counterexample to the test's sufficiency claim. Larger
epsilon simply flips the test verdict; the run then demonstrates nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .analysis import TestReport, devi_test, suspension_oblivious_test
from .model import SuspensionPattern, Task, TaskSet, normalize_taskset, split_pattern
from .rational import TimeValue
from .render import render_svg
from .simulator import ScheduleTrace, SimOptions, detect_misses, simulate_edf

DEFAULT_EPSILON = Fraction(3, 20)
EPSILON_BOUND = Fraction(1, 3)
DEMO_HORIZON = Fraction(24)


@dataclass(frozen=True)
class DemoResult:
    epsilon: TimeValue
    taskset: TaskSet
    patterns: tuple[SuspensionPattern, ...]
    devi: TestReport
    oblivious: TestReport
    trace: ScheduleTrace
    first_miss: Optional[tuple[TimeValue, int, int]]
    svg: str

    @property
    def counterexample(self) -> bool:
        """True when the accepted set was caught missing a deadline."""
        return self.devi.overall and self.first_miss is not None


def demo_taskset(epsilon: TimeValue) -> TaskSet:
    if epsilon <= 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    return normalize_taskset(
        [
            Task(1, Fraction(6), Fraction(5), Fraction(1)),
            Task(2, Fraction(8), Fraction(epsilon), Fraction(0)),
        ]
    )


def run_demo(epsilon: TimeValue = DEFAULT_EPSILON) -> DemoResult:
    ts = demo_taskset(epsilon)
    patterns = (
        split_pattern(ts.task_by_id(1), Fraction(1)),
        split_pattern(ts.task_by_id(2), Fraction(0)),
    )
    trace = simulate_edf(ts, patterns, SimOptions(horizon=DEMO_HORIZON))
    misses = detect_misses(trace)
    return DemoResult(
        epsilon=Fraction(epsilon),
        taskset=ts,
        patterns=patterns,
        devi=devi_test(ts),
        oblivious=suspension_oblivious_test(ts),
        trace=trace,
        first_miss=misses[0] if misses else None,
        svg=render_svg(trace),
    )
