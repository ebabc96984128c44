"""Grid search for schedulability-test counterexamples.

Enumerates small task sets over a declared parameter grid, keeps the ones
the suspension-aware test accepts, and tries every combination of split
suspension patterns against the simulator. A candidate that passes the
test yet provably misses a deadline is packaged as a verified
counterexample: simulation is a falsifier here, so absence of a miss up to
the horizon is reported as "nothing found", never as "schedulable".
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .analysis import TestReport, devi_test
from .model import (
    SuspensionPattern,
    Task,
    TaskSet,
    enumerate_split_patterns,
    hyperperiod,
    index_patterns,
)
from .rational import TimeValue, ZERO
from .simulator import (
    OnMiss,
    ScheduleTrace,
    SimOptions,
    detect_misses,
    simulate_edf,
)
from .validation import validate_trace


@dataclass(frozen=True)
class GridSpec:
    """Declared search grid.

    Per task position: a period from ``period_choices``, a wcet from
    {wcet_step, 2*wcet_step, ...} up to the period, and a suspension either
    from ``suspension_choices`` or from multiples of ``suspension_step``
    bounded by the period. Patterns come from the split-pattern family with
    prefixes on the ``pattern_prefix_step`` grid.
    """

    period_choices: tuple[TimeValue, ...]
    wcet_step: TimeValue
    pattern_prefix_step: TimeValue
    n_tasks: int = 2
    suspension_choices: Optional[tuple[TimeValue, ...]] = None
    suspension_step: Optional[TimeValue] = None
    horizon: Optional[TimeValue] = None  # None -> 2 * hyperperiod per candidate
    on_miss: OnMiss = OnMiss.STOP

    def __post_init__(self):
        if not self.period_choices:
            raise ValueError("period_choices must be nonempty")
        if any(p <= 0 for p in self.period_choices):
            raise ValueError("periods must be > 0")
        if self.wcet_step <= 0:
            raise ValueError("wcet_step must be > 0")
        if self.pattern_prefix_step <= 0:
            raise ValueError("pattern_prefix_step must be > 0")
        if self.n_tasks < 1:
            raise ValueError("n_tasks must be >= 1")
        if (self.suspension_choices is None) == (self.suspension_step is None):
            raise ValueError(
                "give exactly one of suspension_choices or suspension_step"
            )
        if self.suspension_choices is not None and any(
            s < 0 for s in self.suspension_choices
        ):
            raise ValueError("suspensions must be >= 0")
        if self.suspension_step is not None and self.suspension_step <= 0:
            raise ValueError("suspension_step must be > 0")
        if self.horizon is not None and self.horizon <= 0:
            raise ValueError("horizon must be > 0")

    def suspension_values(self, period: TimeValue) -> list[TimeValue]:
        if self.suspension_choices is not None:
            return list(self.suspension_choices)
        out = []
        s = ZERO
        while s <= period:
            out.append(s)
            s += self.suspension_step
        return out


@dataclass(frozen=True)
class Counterexample:
    """A task set that passes the suspension-aware test yet misses."""

    taskset: TaskSet
    patterns: tuple[SuspensionPattern, ...]
    devi_report: TestReport
    trace: ScheduleTrace
    first_miss: tuple[TimeValue, int, int]


@dataclass
class SearchStats:
    checked: int = 0
    passed_devi: int = 0
    found: int = 0

    def line(self) -> str:
        return (
            f"checked={self.checked} passed_devi={self.passed_devi} "
            f"found={self.found}"
        )


def _position_choices(spec: GridSpec) -> list[tuple[TimeValue, TimeValue, TimeValue]]:
    triples = []
    for period in spec.period_choices:
        wcets = []
        w = spec.wcet_step
        while w <= period:
            wcets.append(w)
            w += spec.wcet_step
        for wcet in wcets:
            for susp in spec.suspension_values(period):
                triples.append((period, wcet, susp))
    return triples


def enumerate_tasksets(spec: GridSpec) -> Iterator[TaskSet]:
    """Deterministic lexicographic stream of normalized candidate sets.

    Candidates that coincide after normalization (same multiset of
    parameter triples) are emitted once; ids are assigned 1..n in sorted
    order.
    """
    choices = _position_choices(spec)
    seen: set[tuple] = set()
    for combo in itertools.product(choices, repeat=spec.n_tasks):
        key = tuple(sorted(combo))
        if key in seen:
            continue
        seen.add(key)
        tasks = [
            Task(i + 1, period, wcet, susp)
            for i, (period, wcet, susp) in enumerate(sorted(combo))
        ]
        yield TaskSet(tuple(tasks))


ProgressFn = Callable[[SearchStats], None]


def find_counterexamples(
    spec: GridSpec,
    max_found: Optional[int] = None,
    time_budget: Optional[float] = None,
    progress: Optional[ProgressFn] = None,
) -> tuple[list[Counterexample], SearchStats]:
    """Sweep the grid; collect one verified counterexample per refuted set.

    Pattern combinations are explored lexicographically (task order, prefix
    ascending); the first miss wins for that task set. Stops early when
    ``max_found`` counterexamples were found or ``time_budget`` seconds have
    elapsed; budget exhaustion returns whatever was found.
    """
    stats = SearchStats()
    found: list[Counterexample] = []
    deadline = time.monotonic() + time_budget if time_budget is not None else None
    for ts in enumerate_tasksets(spec):
        if deadline is not None and time.monotonic() > deadline:
            break
        stats.checked += 1
        report = devi_test(ts)
        if report.overall:
            stats.passed_devi += 1
            cx = _attack_taskset(spec, ts, report)
            if cx is not None:
                found.append(cx)
                stats.found += 1
        if progress is not None:
            progress(stats)
        if max_found is not None and stats.found >= max_found:
            break
    return found, stats


def _attack_taskset(
    spec: GridSpec, ts: TaskSet, report: TestReport
) -> Optional[Counterexample]:
    horizon = spec.horizon if spec.horizon is not None else 2 * hyperperiod(ts)
    opts = SimOptions(horizon=horizon, on_miss=spec.on_miss)
    families = [enumerate_split_patterns(t, spec.pattern_prefix_step) for t in ts]
    for combo in itertools.product(*families):
        trace = simulate_edf(ts, combo, opts)
        misses = detect_misses(trace)
        if misses:
            cx = Counterexample(ts, tuple(combo), report, trace, misses[0])
            if not verify_counterexample(cx):
                raise RuntimeError(
                    f"internal inconsistency: unverifiable counterexample for {ts}"
                )
            return cx
    return None


def verify_counterexample(cx: Counterexample) -> bool:
    """Re-check a counterexample from scratch; nothing is trusted.

    The report must say PASS and must match a fresh test run, the patterns
    must fit their tasks, the trace must validate, and the claimed first
    miss must be among the trace's recorded misses.
    """
    try:
        index_patterns(cx.taskset, cx.patterns)
    except ValueError:
        return False
    if not cx.devi_report.overall or not devi_test(cx.taskset).overall:
        return False
    misses = detect_misses(cx.trace)
    if not misses or cx.first_miss not in misses:
        return False
    return validate_trace(cx.taskset, cx.patterns, cx.trace).valid
