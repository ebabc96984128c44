"""Exact-time discrete-event simulation of preemptive EDF on one processor.

Semantics:

* Jobs of task i are released synchronously at 0, T_i, 2T_i, ... (strictly
  below the horizon); job j has absolute deadline (j+1) * T_i.
* At every instant the processor runs the ready job with the earliest
  absolute deadline. Deadline ties: the currently running job continues,
  otherwise lowest task id, then lowest job index. The processor idles only
  when no ready job exists.
* Each job consumes its task's pattern segments in order. Execute segments
  consume processor time and may be preempted; a suspend segment occupies a
  wall-clock window of exactly its duration starting the instant the
  preceding segment completes (or at release, for a leading suspend),
  independent of what the processor does.
* A job is finished the instant its executed total reaches C; a deadline
  miss is recorded at the deadline of any job still unfinished there.
  Completing exactly at the deadline is a meet, not a miss. A missed job
  (under on_miss=continue) keeps its original deadline for priority.

Time advances event to event (release, segment boundary, suspension expiry,
deadline, horizon); there is no quantum. Internally all times are scaled by
the lcm of the input denominators and handled as integers, which is exact;
trace times are scaled back to rationals on output.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Optional, Union

from .model import SegmentKind, SuspensionPattern, TaskSet, hyperperiod, index_patterns
from .rational import TimeValue, ZERO


class OnMiss(Enum):
    STOP = "stop"
    CONTINUE = "continue"


class EventKind(Enum):
    RELEASE = "release"
    COMPLETE = "complete"
    MISS = "miss"


@dataclass(frozen=True)
class SimOptions:
    horizon: Optional[TimeValue] = None  # None -> 2 * hyperperiod
    on_miss: OnMiss = OnMiss.STOP


@dataclass(frozen=True)
class Interval:
    """Maximal span of one activity; task_id None means the processor idled."""

    start: TimeValue
    end: TimeValue
    task_id: Optional[int] = None
    job_index: Optional[int] = None

    @property
    def is_idle(self) -> bool:
        return self.task_id is None


@dataclass(frozen=True)
class SuspensionWindow:
    start: TimeValue
    end: TimeValue
    task_id: int
    job_index: int


@dataclass(frozen=True)
class TraceEvent:
    time: TimeValue
    kind: EventKind
    task_id: int
    job_index: int


@dataclass(frozen=True)
class ScheduleTrace:
    horizon: TimeValue
    intervals: tuple[Interval, ...]
    suspensions: tuple[SuspensionWindow, ...]
    events: tuple[TraceEvent, ...]

    @property
    def end(self) -> TimeValue:
        """Last recorded instant; equals horizon unless truncated at a miss."""
        return self.intervals[-1].end if self.intervals else ZERO


def detect_misses(trace: ScheduleTrace) -> list[tuple[TimeValue, int, int]]:
    """All deadline-miss events as (time, task_id, job_index), in time order."""
    return [
        (e.time, e.task_id, e.job_index)
        for e in trace.events
        if e.kind is EventKind.MISS
    ]


PatternsArg = Union[Mapping[int, SuspensionPattern], Iterable[SuspensionPattern]]


class _Job:
    """Mutable per-job state in the scaled integer time domain."""

    __slots__ = (
        "task_id", "index", "release", "deadline", "wcet",
        "segments", "seg_idx", "seg_done", "executed",
        "suspend_until", "finished",
    )

    def __init__(self, task_id: int, index: int, release: int, deadline: int,
                 wcet: int, segments: tuple[tuple[SegmentKind, int], ...]):
        self.task_id = task_id
        self.index = index
        self.release = release
        self.deadline = deadline
        self.wcet = wcet
        self.segments = segments
        self.seg_idx = 0
        self.seg_done = 0
        self.executed = 0
        self.suspend_until: Optional[int] = None
        self.finished = False


def simulate_edf(
    ts: TaskSet, patterns: PatternsArg, opts: SimOptions = SimOptions()
) -> ScheduleTrace:
    """Simulate preemptive EDF and return the full trace.

    Requires exactly one valid pattern per task. Horizon defaults to twice
    the hyperperiod. Under on_miss=stop the trace ends at the first miss
    instant (all misses at that instant are recorded).
    """
    pats = index_patterns(ts, patterns)
    horizon = opts.horizon if opts.horizon is not None else 2 * hyperperiod(ts)
    horizon = Fraction(horizon)
    if horizon <= 0:
        raise ValueError(f"horizon must be > 0, got {horizon}")

    # common integer grid for all event times
    denoms = [horizon.denominator]
    for task in ts:
        denoms.append(task.period.denominator)
        for seg in pats[task.id].segments:
            denoms.append(seg.duration.denominator)
    scale = lcm(*denoms)

    def s(x: Fraction) -> int:
        return x.numerator * (scale // x.denominator)

    horizon_i = s(horizon)
    period_i = {t.id: s(t.period) for t in ts}
    wcet_i = {t.id: s(t.wcet) for t in ts}
    segs_i = {
        t.id: tuple((seg.kind, s(seg.duration)) for seg in pats[t.id].segments)
        for t in ts
    }

    jobs: list[_Job] = []
    events: list[tuple[int, EventKind, int, int]] = []
    intervals: list[list] = []  # [start, end, task_id|None, job_index|None]
    windows: list[tuple[int, int, int, int]] = []
    next_index = {t.id: 0 for t in ts}
    t_now = 0
    prev_running: Optional[_Job] = None
    stopped = False

    def append_interval(start: int, end: int, job: Optional[_Job]) -> None:
        tid = job.task_id if job else None
        jidx = job.index if job else None
        if intervals and intervals[-1][2] == tid and intervals[-1][3] == jidx:
            intervals[-1][1] = end
        else:
            intervals.append([start, end, tid, jidx])

    def start_suspension(job: _Job, at: int) -> None:
        kind, dur = job.segments[job.seg_idx]
        job.suspend_until = at + dur
        windows.append((at, at + dur, job.task_id, job.index))

    while True:
        # suspension expiries at t_now
        for job in jobs:
            if not job.finished and job.suspend_until == t_now:
                job.suspend_until = None
                job.seg_idx += 1
                job.seg_done = 0
        # releases at t_now (synchronous pattern: j * T)
        for task in ts:
            rel = next_index[task.id] * period_i[task.id]
            if rel == t_now and rel < horizon_i:
                job = _Job(
                    task.id, next_index[task.id], rel, rel + period_i[task.id],
                    wcet_i[task.id], segs_i[task.id],
                )
                next_index[task.id] += 1
                jobs.append(job)
                events.append((t_now, EventKind.RELEASE, job.task_id, job.index))
                if job.segments[0][0] is SegmentKind.SUSPEND:
                    start_suspension(job, t_now)
        # deadline checks at t_now (completions at t_now were recorded already)
        for job in jobs:
            if not job.finished and job.deadline == t_now:
                events.append((t_now, EventKind.MISS, job.task_id, job.index))
                if opts.on_miss is OnMiss.STOP:
                    stopped = True
        if stopped or t_now >= horizon_i:
            break

        ready = [
            j for j in jobs if not j.finished and j.suspend_until is None
        ]
        running = (
            min(
                ready,
                key=lambda j: (
                    j.deadline, 0 if j is prev_running else 1, j.task_id, j.index,
                ),
            )
            if ready
            else None
        )

        # next event boundary
        t_next = horizon_i
        if running is not None:
            seg_dur = running.segments[running.seg_idx][1]
            t_next = min(t_next, t_now + seg_dur - running.seg_done)
        for job in jobs:
            if job.suspend_until is not None and job.suspend_until > t_now:
                t_next = min(t_next, job.suspend_until)
            if not job.finished and job.deadline > t_now:
                t_next = min(t_next, job.deadline)
        for task in ts:
            rel = next_index[task.id] * period_i[task.id]
            if t_now < rel < horizon_i:
                t_next = min(t_next, rel)

        append_interval(t_now, t_next, running)
        if running is not None:
            d = t_next - t_now
            running.seg_done += d
            running.executed += d
            if running.seg_done == running.segments[running.seg_idx][1]:
                running.seg_idx += 1
                running.seg_done = 0
                if running.executed == running.wcet:
                    # trailing suspend segments are unreachable once C is done
                    running.finished = True
                    events.append(
                        (t_next, EventKind.COMPLETE, running.task_id, running.index)
                    )
                else:
                    start_suspension(running, t_next)
        prev_running = running
        t_now = t_next

    end_i = intervals[-1][1] if intervals else 0
    frac = lambda v: Fraction(v, scale)
    out_windows = tuple(
        SuspensionWindow(frac(ws), frac(min(we, end_i)), tid, jidx)
        for ws, we, tid, jidx in windows
        if ws < end_i
    )
    return ScheduleTrace(
        horizon=horizon,
        intervals=tuple(
            Interval(frac(a), frac(b), tid, jidx) for a, b, tid, jidx in intervals
        ),
        suspensions=out_windows,
        events=tuple(
            TraceEvent(frac(tm), kind, tid, jidx) for tm, kind, tid, jidx in events
        ),
    )
