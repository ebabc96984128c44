"""Task model: periodic implicit-deadline tasks with self-suspension budgets.

A task is a triple (T, C, S): period T (which is also the relative
deadline), worst-case execution time C, and a total self-suspension budget
S. A job may suspend arbitrarily often as long as its total suspension time
stays within S; a :class:`SuspensionPattern` fixes one concrete alternating
execute/suspend shape, applied identically by every job of its task.

All quantities are exact rationals (see :mod:`suspedf.rational`).
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Iterator

from .rational import ZERO, TimeValue


@dataclass(frozen=True)
class Task:
    """One periodic task. ``deadline`` is implicit and equals ``period``."""

    id: int
    period: TimeValue
    wcet: TimeValue
    suspension: TimeValue = ZERO

    def __post_init__(self):
        if self.period <= 0:
            raise ValueError(f"task {self.id}: period must be > 0, got {self.period}")
        if self.wcet <= 0:
            raise ValueError(f"task {self.id}: wcet must be > 0, got {self.wcet}")
        if self.wcet > self.period:
            raise ValueError(
                f"task {self.id}: wcet {self.wcet} exceeds period {self.period} "
                "(trivially infeasible)"
            )
        if self.suspension < 0:
            raise ValueError(
                f"task {self.id}: suspension must be >= 0, got {self.suspension}"
            )

    @property
    def deadline(self) -> TimeValue:
        return self.period

    @property
    def utilization(self) -> TimeValue:
        return self.wcet / self.period


@dataclass(frozen=True)
class TaskSet:
    """Nonempty tuple of tasks sorted by (period, id), ids pairwise distinct.

    Construct via :func:`normalize_taskset`; direct construction enforces
    the same invariants.
    """

    tasks: tuple[Task, ...]

    def __post_init__(self):
        if not self.tasks:
            raise ValueError("task set must be nonempty")
        ids = [t.id for t in self.tasks]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"duplicate task ids: {dupes}")
        keys = [(t.period, t.id) for t in self.tasks]
        if keys != sorted(keys):
            raise ValueError("tasks must be sorted by (period, id)")

    def __iter__(self) -> Iterator[Task]:
        return iter(self.tasks)

    def __len__(self) -> int:
        return len(self.tasks)

    def __getitem__(self, i: int) -> Task:
        return self.tasks[i]

    def task_by_id(self, task_id: int) -> Task:
        for t in self.tasks:
            if t.id == task_id:
                return t
        raise KeyError(f"no task with id {task_id}")


def normalize_taskset(tasks: Iterable[Task]) -> TaskSet:
    """Sort tasks by non-decreasing period (ties by ascending id)."""
    return TaskSet(tuple(sorted(tasks, key=lambda t: (t.period, t.id))))


def utilization(ts: TaskSet) -> TimeValue:
    """Exact total utilization sum(C_i / T_i)."""
    return sum((t.wcet / t.period for t in ts), start=ZERO)


def hyperperiod(ts: TaskSet) -> TimeValue:
    """Least t > 0 with t / T_i a positive integer for every task.

    For reduced fractions p_i/q_i this is lcm(p_i) / gcd(q_i).
    """
    num = 1
    den = 1
    for t in ts:
        num = lcm(num, t.period.numerator)
        den = gcd(den, t.period.denominator)
    return Fraction(num, den)


class SegmentKind(Enum):
    EXECUTE = "exec"
    SUSPEND = "susp"


@dataclass(frozen=True)
class Segment:
    kind: SegmentKind
    duration: TimeValue

    def __post_init__(self):
        if self.duration <= 0:
            raise ValueError(f"segment duration must be > 0, got {self.duration}")


def _canonical(segments: Iterable[Segment]) -> tuple[Segment, ...]:
    # merge adjacent same-kind segments so pattern equality is well-defined
    out: list[Segment] = []
    for seg in segments:
        if out and out[-1].kind is seg.kind:
            out[-1] = Segment(seg.kind, out[-1].duration + seg.duration)
        else:
            out.append(seg)
    return tuple(out)


@dataclass(frozen=True)
class SuspensionPattern:
    """Alternating execute/suspend segments for every job of one task.

    Canonical form: no zero-length segments and no two adjacent segments of
    the same kind. Per-task consistency (execute total = C, suspend total
    <= S) is checked by :meth:`check_against`, since the pattern alone does
    not know its task's parameters.
    """

    task_id: int
    segments: tuple[Segment, ...]

    def __post_init__(self):
        object.__setattr__(self, "segments", _canonical(self.segments))
        if not self.segments:
            raise ValueError(f"pattern for task {self.task_id} has no segments")

    @property
    def execute_total(self) -> TimeValue:
        return sum(
            (s.duration for s in self.segments if s.kind is SegmentKind.EXECUTE),
            start=ZERO,
        )

    @property
    def suspend_total(self) -> TimeValue:
        return sum(
            (s.duration for s in self.segments if s.kind is SegmentKind.SUSPEND),
            start=ZERO,
        )

    def check_against(self, task: Task) -> None:
        """Raise ValueError unless this pattern is valid for ``task``."""
        if self.task_id != task.id:
            raise ValueError(
                f"pattern is for task {self.task_id}, not task {task.id}"
            )
        if self.execute_total != task.wcet:
            raise ValueError(
                f"task {task.id}: pattern execute total {self.execute_total} "
                f"!= wcet {task.wcet}"
            )
        if self.suspend_total > task.suspension:
            raise ValueError(
                f"task {task.id}: pattern suspend total {self.suspend_total} "
                f"exceeds budget {task.suspension}"
            )


def exec_seg(duration: TimeValue) -> Segment:
    return Segment(SegmentKind.EXECUTE, duration)


def susp_seg(duration: TimeValue) -> Segment:
    return Segment(SegmentKind.SUSPEND, duration)


def index_patterns(ts: TaskSet, patterns) -> dict[int, SuspensionPattern]:
    """Map task id -> pattern, requiring exactly one valid pattern per task.

    Accepts an iterable of patterns or a mapping keyed by task id.
    """
    items = list(patterns.values()) if isinstance(patterns, Mapping) else list(patterns)
    by_task: dict[int, SuspensionPattern] = {}
    for pat in items:
        if pat.task_id in by_task:
            raise ValueError(f"duplicate pattern for task {pat.task_id}")
        by_task[pat.task_id] = pat
    extra = set(by_task) - {t.id for t in ts}
    if extra:
        raise ValueError(f"patterns reference unknown task ids: {sorted(extra)}")
    for task in ts:
        if task.id not in by_task:
            raise ValueError(f"missing pattern for task {task.id}")
        by_task[task.id].check_against(task)
    return by_task


def split_pattern(task: Task, prefix: TimeValue) -> SuspensionPattern:
    """Execute ``prefix``, suspend the whole budget S, execute the rest.

    Zero-length parts are dropped, so prefix 0 yields [suspend, execute C]
    and prefix C yields [execute C, suspend]. A task with S = 0 always
    yields the single segment [execute C].
    """
    if prefix < 0 or prefix > task.wcet:
        raise ValueError(
            f"task {task.id}: split prefix {prefix} outside [0, {task.wcet}]"
        )
    if task.suspension == 0:
        return SuspensionPattern(task.id, (exec_seg(task.wcet),))
    segs = []
    if prefix > 0:
        segs.append(exec_seg(prefix))
    segs.append(susp_seg(task.suspension))
    if task.wcet - prefix > 0:
        segs.append(exec_seg(task.wcet - prefix))
    return SuspensionPattern(task.id, tuple(segs))


def enumerate_split_patterns(
    task: Task, grid_step: TimeValue
) -> list[SuspensionPattern]:
    """All split patterns with prefixes 0, step, 2*step, ... and C itself,
    deduplicated."""
    if grid_step <= 0:
        raise ValueError(f"grid step must be > 0, got {grid_step}")
    prefixes: list[TimeValue] = []
    x = ZERO
    while x < task.wcet:
        prefixes.append(x)
        x += grid_step
    prefixes.append(task.wcet)
    out: list[SuspensionPattern] = []
    seen = set()
    for p in prefixes:
        pat = split_pattern(task, p)
        if pat.segments not in seen:
            seen.add(pat.segments)
            out.append(pat)
    return out
