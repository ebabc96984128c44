"""Shared generators and reference implementations for the test suite."""

from fractions import Fraction as F
from math import gcd

from suspedf.model import Task, normalize_taskset, split_pattern
from suspedf.simulator import EventKind

# small pool keeps hyperperiods desk-sized (lcm <= 120)
PERIOD_POOL = [2, 3, 4, 5, 6, 8, 10, 12]


def random_integer_taskset(rng, n_max=4, max_util=F(1)):
    """Integer-parameter set with utilization <= max_util, zero suspension."""
    while True:
        n = rng.randint(1, n_max)
        tasks = []
        budget = max_util
        for i in range(n):
            period = F(rng.choice(PERIOD_POOL))
            top = min(int(budget * period), period.numerator)
            if top < 1:
                break
            wcet = F(rng.randint(1, top))
            budget -= wcet / period
            tasks.append(Task(i + 1, period, wcet))
        if len(tasks) == n:
            return normalize_taskset(tasks)


def random_suspending_taskset(rng, n_max=3):
    """Small rational-parameter set where some tasks may suspend."""
    n = rng.randint(2, n_max)
    tasks = []
    for i in range(n):
        period = F(rng.choice(PERIOD_POOL))
        wcet = F(rng.randint(1, int(period) * 2), 2)
        susp = F(rng.choice([0, 0, 1, 1, 2]), rng.choice([1, 2]))
        tasks.append(Task(i + 1, period, wcet, susp))
    return normalize_taskset(tasks)


def random_patterns(rng, ts):
    """One random split pattern per task (grid of quarters)."""
    pats = []
    for task in ts:
        steps = int(task.wcet * 4)
        prefix = F(rng.randint(0, steps), 4)
        pats.append(split_pattern(task, prefix))
    return pats


def quantum_edf_reference(ts, horizon):
    """Time-stepped EDF for zero-suspension integer sets.

    Steps by the gcd of all parameters, applying the same tie-break as the
    event-driven engine (running job continues, then lowest task id, then
    lowest job index). Returns (intervals, misses) with intervals merged,
    as [(start, end, task_id|None, job_index|None)].
    """
    assert all(t.suspension == 0 for t in ts)
    values = [int(horizon)]
    for t in ts:
        assert t.period.denominator == 1 and t.wcet.denominator == 1
        values += [t.period.numerator, t.wcet.numerator]
    step = gcd(*values)
    end = int(horizon)
    jobs = []  # [deadline, task_id, index, remaining]
    misses = []
    raw = []
    prev = None
    for now in range(0, end + step, step):
        for j in jobs:
            if j[0] == now and j[3] > 0:
                misses.append((F(now), j[1], j[2]))
        if now >= end:
            break
        for task in ts:
            if now % int(task.period) == 0:
                idx = now // int(task.period)
                jobs.append([now + int(task.period), task.id, idx, int(task.wcet)])
        ready = [j for j in jobs if j[3] > 0]
        if ready:
            pick = min(
                ready,
                key=lambda j: (j[0], 0 if j is prev else 1, j[1], j[2]),
            )
            pick[3] -= step
            raw.append((now, now + step, pick[1], pick[2]))
            prev = pick
        else:
            raw.append((now, now + step, None, None))
            prev = None
    merged = []
    for s, e, tid, idx in raw:
        if merged and merged[-1][2] == tid and merged[-1][3] == idx:
            merged[-1][1] = e
        else:
            merged.append([s, e, tid, idx])
    return (
        [(F(s), F(e), tid, idx) for s, e, tid, idx in merged],
        sorted(misses),
    )


def miss_triples(trace):
    return [
        (e.time, e.task_id, e.job_index)
        for e in trace.events
        if e.kind is EventKind.MISS
    ]


def ready_jobs_at(trace, ts, t):
    """(task_id, job_index, deadline) of jobs ready at t, from trace data."""
    out = []
    for task in ts:
        j = 0
        while j * task.period <= t:
            key = (task.id, j)
            executed = sum(
                (
                    min(iv.end, t) - iv.start
                    for iv in trace.intervals
                    if (iv.task_id, iv.job_index) == key and iv.start < t
                ),
                F(0),
            )
            suspended = any(
                w.start <= t < w.end
                for w in trace.suspensions
                if (w.task_id, w.job_index) == key
            )
            if executed < task.wcet and not suspended:
                out.append((task.id, j, (j + 1) * task.period))
            j += 1
    return out


def mutate_reassign(trace, ts):
    """Hand one execution interval to a ready lower-priority job, or None."""
    from dataclasses import replace

    for n, iv in enumerate(trace.intervals):
        if iv.task_id is None:
            continue
        period = next(t.period for t in ts if t.id == iv.task_id)
        running_deadline = (iv.job_index + 1) * period
        for tid, jidx, dl in ready_jobs_at(trace, ts, iv.start):
            if (tid, jidx) != (iv.task_id, iv.job_index) and dl > running_deadline:
                new = list(trace.intervals)
                new[n] = replace(iv, task_id=tid, job_index=jidx)
                return replace(trace, intervals=tuple(new))
    return None


def mutate_shorten(trace):
    """Halve the final slice of a completed job, padding with idle, or None."""
    from dataclasses import replace

    from suspedf.simulator import Interval

    for e in trace.events:
        if e.kind is EventKind.COMPLETE:
            key = (e.task_id, e.job_index)
            for n, iv in enumerate(trace.intervals):
                if (iv.task_id, iv.job_index) == key and iv.end == e.time:
                    mid = (iv.start + iv.end) / 2
                    new = list(trace.intervals)
                    new[n : n + 1] = [
                        replace(iv, end=mid),
                        Interval(mid, iv.end, None, None),
                    ]
                    return replace(trace, intervals=tuple(new))
    return None


def mutate_drop_miss(trace):
    """Delete the first recorded deadline-miss event, or None."""
    from dataclasses import replace

    kept = list(trace.events)
    for n, e in enumerate(kept):
        if e.kind is EventKind.MISS:
            del kept[n]
            return replace(trace, events=tuple(kept))
    return None
