"""Independent legality checker for EDF schedule traces.

Re-derives, from the trace contents alone (never by re-running the
scheduler), that a trace is a legal preemptive-EDF schedule of the given
task set under the given per-task patterns:

* intervals partition [0, end] with no overlaps or gaps;
* every job's execution slices and suspension windows realize its task's
  pattern, in order, with each suspension occupying exactly its wall-clock
  window from the instant the prior segment ended;
* the EDF rule and the deterministic tie-break hold at the start of every
  execute interval and at every readiness change inside it;
* the processor never idles while some job is ready;
* recorded deadline misses are exactly the deadlines (within the trace)
  where the job's executed total falls short of its wcet.

Malformed traces are reported as violations, not exceptions. Checking stops
at the first violation found.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .model import SegmentKind, TaskSet, index_patterns
from .rational import TimeValue, ZERO
from .simulator import EventKind, PatternsArg, ScheduleTrace


@dataclass(frozen=True)
class Verdict:
    valid: bool
    reason: str = ""
    time: Optional[TimeValue] = None

    @staticmethod
    def ok() -> "Verdict":
        return Verdict(True)

    @staticmethod
    def violation(reason: str, time: Optional[TimeValue] = None) -> "Verdict":
        return Verdict(False, reason, time)


class _Bad(Exception):
    def __init__(self, reason: str, time: Optional[TimeValue] = None):
        super().__init__(reason)
        self.verdict = Verdict.violation(reason, time)


class _JobView:
    """Per-job data reconstructed from the trace."""

    def __init__(self, task, index: int):
        self.task = task
        self.index = index
        self.release = index * task.period
        self.deadline = self.release + task.period
        self.slices: list[tuple[TimeValue, TimeValue]] = []
        self.windows: list[tuple[TimeValue, TimeValue]] = []
        self.completion: Optional[TimeValue] = None  # set by the pattern walk
        self.ready_from: list[TimeValue] = []  # instants where the job becomes ready

    @property
    def key(self) -> tuple[int, int]:
        return (self.task.id, self.index)

    def executed_by(self, t: TimeValue) -> TimeValue:
        total = ZERO
        for s, e in self.slices:
            if e <= t:
                total += e - s
            elif s < t:
                total += t - s
        return total

    def suspended_at(self, t: TimeValue) -> bool:
        return any(s <= t < e for s, e in self.windows)

    def ready_at(self, t: TimeValue) -> bool:
        return (
            self.release <= t
            and self.executed_by(t) < self.task.wcet
            and not self.suspended_at(t)
        )


def validate_trace(ts: TaskSet, patterns: PatternsArg, trace: ScheduleTrace) -> Verdict:
    """Check a trace for legality; returns the first violation found."""
    try:
        pats = index_patterns(ts, patterns)
    except ValueError as exc:
        return Verdict.violation(f"bad patterns: {exc}")
    try:
        _check(ts, pats, trace)
    except _Bad as exc:
        return exc.verdict
    return Verdict.ok()


def _check(ts: TaskSet, pats, trace: ScheduleTrace) -> None:
    if trace.horizon <= 0:
        raise _Bad(f"nonpositive horizon {trace.horizon}")
    if not trace.intervals:
        raise _Bad("trace has no intervals")

    ids = {t.id for t in ts}
    cursor = ZERO
    for iv in trace.intervals:
        if iv.start != cursor:
            raise _Bad(
                f"intervals not contiguous: expected start {cursor}, got {iv.start}",
                iv.start,
            )
        if iv.start >= iv.end:
            raise _Bad(f"empty or inverted interval at {iv.start}", iv.start)
        if (iv.task_id is None) != (iv.job_index is None):
            raise _Bad(f"malformed interval activity at {iv.start}", iv.start)
        if iv.task_id is not None and iv.task_id not in ids:
            raise _Bad(f"interval references unknown task {iv.task_id}", iv.start)
        cursor = iv.end
    end = cursor
    if end > trace.horizon:
        raise _Bad(f"trace runs past its horizon ({end} > {trace.horizon})", end)

    misses = [e for e in trace.events if e.kind is EventKind.MISS]
    if end < trace.horizon:
        # only a stop-at-first-miss truncation may end a trace early
        if not misses:
            raise _Bad(f"trace ends at {end} before horizon with no miss", end)
        if any(e.time != end for e in misses):
            raise _Bad("truncated trace has a miss away from its end")

    # job universe: synchronous releases visible in the trace
    jobs: dict[tuple[int, int], _JobView] = {}
    for task in ts:
        j = 0
        while True:
            rel = j * task.period
            if rel >= trace.horizon or rel > end:
                break
            jobs[(task.id, j)] = _JobView(task, j)
            j += 1

    def lookup(task_id, job_index, what: str, when: TimeValue) -> _JobView:
        view = jobs.get((task_id, job_index))
        if view is None:
            raise _Bad(
                f"{what} references unreleased job (task {task_id}, job {job_index})",
                when,
            )
        return view

    for iv in trace.intervals:
        if iv.task_id is not None:
            lookup(iv.task_id, iv.job_index, "interval", iv.start).slices.append(
                (iv.start, iv.end)
            )
    for w in trace.suspensions:
        if not w.start < w.end <= end:
            raise _Bad(f"malformed suspension window at {w.start}", w.start)
        lookup(w.task_id, w.job_index, "suspension", w.start).windows.append(
            (w.start, w.end)
        )
    for view in jobs.values():
        if view.windows != sorted(view.windows):
            raise _Bad(f"suspension windows out of order for job {view.key}")

    # release events must match the universe exactly
    recorded_releases = sorted(
        (e.time, e.task_id, e.job_index)
        for e in trace.events
        if e.kind is EventKind.RELEASE
    )
    expected_releases = sorted((v.release, *v.key) for v in jobs.values())
    if recorded_releases != expected_releases:
        raise _Bad("release events do not match the synchronous release pattern")

    for view in jobs.values():
        _walk_pattern(view, pats[view.task.id], end)

    # completion events must match the walk exactly
    recorded_completes = sorted(
        (e.time, e.task_id, e.job_index)
        for e in trace.events
        if e.kind is EventKind.COMPLETE
    )
    expected_completes = sorted(
        (v.completion, *v.key) for v in jobs.values() if v.completion is not None
    )
    if recorded_completes != expected_completes:
        raise _Bad("completion events do not match executed totals")

    # misses: exactly the in-trace deadlines with an execution shortfall
    recorded_misses = sorted((e.time, e.task_id, e.job_index) for e in misses)
    expected_misses = sorted(
        (v.deadline, *v.key)
        for v in jobs.values()
        if v.deadline <= end and v.executed_by(v.deadline) < v.task.wcet
    )
    if recorded_misses != expected_misses:
        raise _Bad(
            "recorded deadline misses do not match execution shortfalls "
            f"(expected {expected_misses}, recorded {recorded_misses})"
        )

    all_views = list(jobs.values())
    _check_priorities(trace, all_views)


def _walk_pattern(view: _JobView, pattern, end: TimeValue) -> None:
    """Match the job's slices and windows against its task's pattern."""
    si = 0
    wi = 0
    cursor = view.release
    executed = ZERO
    wcet = view.task.wcet
    if pattern.segments[0].kind is SegmentKind.EXECUTE:
        # registered up front: it must hold even if the job never ran
        view.ready_from.append(view.release)
    for seg in pattern.segments:
        if executed == wcet:
            break  # finished; trailing segments are unreachable
        if seg.kind is SegmentKind.EXECUTE:
            need = seg.duration
            while need > 0:
                if si >= len(view.slices):
                    _reject_leftovers(view, si, wi)
                    return  # truncated or starved: job simply unfinished
                s, e = view.slices[si]
                if s < cursor:
                    raise _Bad(
                        f"job {view.key} executes at {s} before its segment "
                        f"is available at {cursor}",
                        s,
                    )
                dur = e - s
                if dur > need:
                    raise _Bad(
                        f"job {view.key} executes through a suspension "
                        f"boundary at {s + need}",
                        s,
                    )
                need -= dur
                executed += dur
                si += 1
                if need == 0:
                    cursor = e
        else:
            if cursor >= end:
                break  # suspension entirely beyond the trace
            expected = (cursor, min(cursor + seg.duration, end))
            if wi >= len(view.windows) or view.windows[wi] != expected:
                got = view.windows[wi] if wi < len(view.windows) else None
                raise _Bad(
                    f"job {view.key} suspension window mismatch: expected "
                    f"{expected}, got {got}",
                    cursor,
                )
            wi += 1
            resume = cursor + seg.duration
            cursor = resume
            if resume <= end and executed < wcet:
                view.ready_from.append(resume)
            if resume > end:
                break
    _reject_leftovers(view, si, wi)
    if executed == wcet:
        view.completion = view.slices[si - 1][1]


def _reject_leftovers(view: _JobView, si: int, wi: int) -> None:
    if si < len(view.slices):
        raise _Bad(
            f"job {view.key} has execution beyond its pattern",
            view.slices[si][0],
        )
    if wi < len(view.windows):
        raise _Bad(
            f"job {view.key} has a suspension window beyond its pattern",
            view.windows[wi][0],
        )


def _check_priorities(trace: ScheduleTrace, views: list[_JobView]) -> None:
    """EDF rule, tie-break, and work conservation over every interval."""
    by_key = {v.key: v for v in views}
    prev_exec_key = None  # activity of the interval immediately before
    for iv in trace.intervals:
        # instants inside the interval where some job may become ready
        probes = [iv.start]
        for v in views:
            for u in v.ready_from:
                if iv.start < u < iv.end:
                    probes.append(u)
        probes = sorted(set(probes))

        if iv.task_id is None:
            for u in probes:
                busy = [v for v in views if v.ready_at(u)]
                if busy:
                    culprit = busy[0]
                    raise _Bad(
                        f"processor idle at {u} while job {culprit.key} is ready",
                        u,
                    )
            prev_exec_key = None
            continue

        run = by_key[(iv.task_id, iv.job_index)]
        for u in probes:
            rivals = [v for v in views if v is not run and v.ready_at(u)]
            best = min((v.deadline for v in rivals), default=None)
            if best is not None and best < run.deadline:
                rival = next(v for v in rivals if v.deadline == best)
                raise _Bad(
                    f"EDF violated at {u}: job {rival.key} (deadline {best}) "
                    f"ready while job {run.key} (deadline {run.deadline}) runs",
                    u,
                )
            if best == run.deadline and u == iv.start:
                # deadline tie at a scheduling point: running job continues,
                # otherwise lowest task id then job index wins
                tied = [v for v in rivals if v.deadline == best]
                if prev_exec_key is not None and prev_exec_key != run.key:
                    prev = by_key.get(prev_exec_key)
                    if (
                        prev is not None
                        and prev.ready_at(u)
                        and prev.deadline == run.deadline
                    ):
                        raise _Bad(
                            f"tie-break violated at {u}: running job "
                            f"{prev_exec_key} should continue over {run.key}",
                            u,
                        )
                if prev_exec_key != run.key and any(v.key < run.key for v in tied):
                    raise _Bad(
                        f"tie-break violated at {u}: a tied job with lower id "
                        f"should run instead of {run.key}",
                        u,
                    )
        prev_exec_key = run.key
