"""Gantt renderers for schedule traces: SVG and fixed-width ASCII.

Both work from the trace alone (releases, executions, suspensions, and
misses are all recorded in it) and are byte-deterministic for a given
trace: fixed scale of 40 horizontal units per time unit in SVG, one column
per exact time grid step in ASCII. Execution is drawn solid, suspension
hatched, releases as arrows on the lane baseline, and every deadline miss
as a red marker labeled "deadline miss".
"""

from __future__ import annotations

from fractions import Fraction
from math import floor, lcm

from .simulator import EventKind, ScheduleTrace

SCALE = 40  # SVG units per time unit
LANE_H = 64
BOX_H = 26
MARGIN_L = 70
MARGIN_T = 30


def _task_ids(trace: ScheduleTrace) -> list[int]:
    ids = {iv.task_id for iv in trace.intervals if iv.task_id is not None}
    ids |= {w.task_id for w in trace.suspensions}
    ids |= {e.task_id for e in trace.events}
    return sorted(ids)


def _fmt(x) -> str:
    text = f"{float(x):.4f}".rstrip("0").rstrip(".")
    return text if text else "0"


def render_svg(trace: ScheduleTrace) -> str:
    """One lane per task: boxes, arrows, hatching, red miss markers."""
    if not trace.intervals:
        raise ValueError("cannot render an empty trace")
    ids = _task_ids(trace)
    end = trace.end
    x0 = Fraction(MARGIN_L)
    x = lambda t: _fmt(x0 + t * SCALE)

    width = MARGIN_L + float(end) * SCALE + 60
    axis_y = MARGIN_T + len(ids) * LANE_H + 10
    height = axis_y + 46
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{height}" font-family="monospace" font-size="12">',
        "<defs>",
        '<pattern id="hatch" patternUnits="userSpaceOnUse" width="6" height="6"'
        ' patternTransform="rotate(45)">'
        '<line x1="0" y1="0" x2="0" y2="6" stroke="#666" stroke-width="1.6"/>'
        "</pattern>",
        "</defs>",
        f'<rect width="100%" height="100%" fill="white"/>',
    ]

    releases: dict[int, list] = {i: [] for i in ids}
    misses: dict[int, list] = {i: [] for i in ids}
    for e in trace.events:
        if e.kind is EventKind.RELEASE:
            releases[e.task_id].append(e.time)
        elif e.kind is EventKind.MISS:
            misses[e.task_id].append(e.time)

    for lane, tid in enumerate(ids):
        base = MARGIN_T + lane * LANE_H + 46
        top = base - BOX_H
        parts.append(
            f'<text x="10" y="{base - 8}" fill="black">task {tid}</text>'
        )
        parts.append(
            f'<line x1="{x(Fraction(0))}" y1="{base}" x2="{x(end)}" y2="{base}"'
            ' stroke="#999" stroke-width="1"/>'
        )
        for iv in trace.intervals:
            if iv.task_id != tid:
                continue
            parts.append(
                f'<rect x="{x(iv.start)}" y="{top}" '
                f'width="{_fmt((iv.end - iv.start) * SCALE)}" height="{BOX_H}" '
                'fill="#5b8dd9" stroke="black" stroke-width="1"/>'
            )
        for w in trace.suspensions:
            if w.task_id != tid:
                continue
            parts.append(
                f'<rect x="{x(w.start)}" y="{top}" '
                f'width="{_fmt((w.end - w.start) * SCALE)}" height="{BOX_H}" '
                'fill="url(#hatch)" stroke="black" stroke-width="1"/>'
            )
        arrow_top = top - 14
        for n, t in enumerate(releases[tid]):
            xp = x(t)
            parts.append(
                f'<line x1="{xp}" y1="{base}" x2="{xp}" y2="{arrow_top}"'
                ' stroke="black" stroke-width="1.5"/>'
            )
            parts.append(
                f'<path d="M {xp} {arrow_top} l -4 7 m 4 -7 l 4 7"'
                ' stroke="black" stroke-width="1.5" fill="none"/>'
            )
            if n > 0:  # period boundary: previous job's deadline, double head
                parts.append(
                    f'<path d="M {xp} {base} l -4 -7 m 4 7 l 4 -7"'
                    ' stroke="black" stroke-width="1.5" fill="none"/>'
                )
        for t in misses[tid]:
            xp = x(t)
            parts.append(
                f'<line x1="{xp}" y1="{base}" x2="{xp}" y2="{arrow_top - 8}"'
                ' stroke="red" stroke-width="2"/>'
            )
            parts.append(
                f'<path d="M {xp} {base} l -5 -8 m 5 8 l 5 -8"'
                ' stroke="red" stroke-width="2" fill="none"/>'
            )
            parts.append(
                f'<text x="{xp}" y="{arrow_top - 12}" fill="red"'
                ' text-anchor="middle">deadline miss</text>'
            )

    parts.append(
        f'<line x1="{x(Fraction(0))}" y1="{axis_y}" x2="{x(end)}" y2="{axis_y}"'
        ' stroke="black" stroke-width="1"/>'
    )
    for tick in range(int(floor(end)) + 1):
        xp = x(Fraction(tick))
        parts.append(
            f'<line x1="{xp}" y1="{axis_y}" x2="{xp}" y2="{axis_y + 5}"'
            ' stroke="black" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{xp}" y="{axis_y + 20}" text-anchor="middle">{tick}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _grid_step(trace: ScheduleTrace) -> Fraction:
    """Coarsest step that puts every recorded instant on an integer column."""
    denom = 1
    for iv in trace.intervals:
        denom = lcm(denom, iv.start.denominator, iv.end.denominator)
    for w in trace.suspensions:
        denom = lcm(denom, w.start.denominator, w.end.denominator)
    for e in trace.events:
        denom = lcm(denom, e.time.denominator)
    return Fraction(1, denom)


def render_ascii(trace: ScheduleTrace) -> str:
    """Fixed-width lanes, one column per exact grid step, plus a legend."""
    if not trace.intervals:
        raise ValueError("cannot render an empty trace")
    ids = _task_ids(trace)
    step = _grid_step(trace)
    cols = int(trace.end / step)
    per_unit = int(Fraction(1) / step)

    def col(t) -> int:
        return int(t / step)

    axis = [" "] * (cols + 8)  # slack so the last label fits
    for unit in range(int(floor(trace.end)) + 1):
        label = str(unit)
        pos = unit * per_unit
        if pos + len(label) <= len(axis) and all(
            c == " " for c in axis[pos : pos + len(label)]
        ):
            axis[pos : pos + len(label)] = label

    lines = [
        f"time step: {step} per column, horizon {trace.horizon}",
        "legend: # execute   / suspend   . idle   ^ release   ! deadline miss",
        "",
        "      " + "".join(axis).rstrip(),
    ]
    for tid in ids:
        lane = ["."] * cols
        for iv in trace.intervals:
            if iv.task_id == tid:
                for c in range(col(iv.start), col(iv.end)):
                    lane[c] = "#"
        for w in trace.suspensions:
            if w.task_id == tid:
                for c in range(col(w.start), col(w.end)):
                    lane[c] = "/"
        marks = [" "] * (cols + 1)
        for e in trace.events:
            if e.task_id != tid:
                continue
            if e.kind is EventKind.RELEASE:
                marks[col(e.time)] = "^"
        for e in trace.events:
            if e.task_id == tid and e.kind is EventKind.MISS:
                marks[col(e.time)] = "!"
        lines.append(f"t{tid:<4} " + "".join(lane))
        lines.append("      " + "".join(marks).rstrip())
    return "\n".join(lines) + "\n"
