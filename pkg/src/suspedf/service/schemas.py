"""Wire-format models (pydantic) and their domain converters.

Every rational quantity travels as a string in lowest terms ("p" or
"p/q"). JSON integers are accepted on input; floats are rejected outright.
These models pin down structure and field names; semantic invariants
(sortedness, budgets, schedule legality) are enforced by the domain
constructors they convert into.
"""

from __future__ import annotations

from typing import Annotated, Literal, Optional

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field

from .. import analysis, demo, search, simulator
from ..model import (
    Segment,
    SegmentKind,
    SuspensionPattern,
    Task,
    TaskSet,
    normalize_taskset,
)
from ..rational import parse_rational, render_rational


def _rational_literal(value) -> str:
    # canonicalizes on the way in; floats raise here
    return render_rational(parse_rational(value))


RationalStr = Annotated[str, BeforeValidator(_rational_literal)]

_SEG_KIND = {"exec": SegmentKind.EXECUTE, "susp": SegmentKind.SUSPEND}
_EVENT_KIND = {k.value: k for k in simulator.EventKind}
_ON_MISS = {m.value: m for m in simulator.OnMiss}


class TaskModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: int
    period: RationalStr
    wcet: RationalStr
    suspension: RationalStr = "0"

    def to_domain(self) -> Task:
        return Task(
            self.id,
            parse_rational(self.period),
            parse_rational(self.wcet),
            parse_rational(self.suspension),
        )

    @classmethod
    def from_domain(cls, task: Task) -> "TaskModel":
        return cls(
            id=task.id,
            period=render_rational(task.period),
            wcet=render_rational(task.wcet),
            suspension=render_rational(task.suspension),
        )


class TaskSetModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    tasks: list[TaskModel] = Field(min_length=1)

    def to_domain(self) -> TaskSet:
        return normalize_taskset([t.to_domain() for t in self.tasks])

    @classmethod
    def from_domain(cls, ts: TaskSet) -> "TaskSetModel":
        return cls(tasks=[TaskModel.from_domain(t) for t in ts])


class SegmentModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["exec", "susp"]
    dur: RationalStr

    def to_domain(self) -> Segment:
        return Segment(_SEG_KIND[self.kind], parse_rational(self.dur))

    @classmethod
    def from_domain(cls, seg: Segment) -> "SegmentModel":
        return cls(kind=seg.kind.value, dur=render_rational(seg.duration))


class PatternModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    task_id: int
    segments: list[SegmentModel] = Field(min_length=1)

    def to_domain(self) -> SuspensionPattern:
        return SuspensionPattern(
            self.task_id, tuple(s.to_domain() for s in self.segments)
        )

    @classmethod
    def from_domain(cls, pat: SuspensionPattern) -> "PatternModel":
        return cls(
            task_id=pat.task_id,
            segments=[SegmentModel.from_domain(s) for s in pat.segments],
        )


class TestRowModel(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    k: int
    B: RationalStr
    Bprime: RationalStr
    lhs: RationalStr
    pass_: bool = Field(alias="pass")

    @classmethod
    def from_domain(cls, row: analysis.TestRow) -> "TestRowModel":
        return cls(
            k=row.k,
            B=render_rational(row.blocking),
            Bprime=render_rational(row.blocking_prime),
            lhs=render_rational(row.lhs),
            pass_=row.passed,
        )


class TestReportModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    test: Literal["devi", "oblivious"]
    rows: list[TestRowModel]
    overall: bool

    def to_domain(self) -> analysis.TestReport:
        rows = tuple(
            analysis.TestRow(
                r.k,
                parse_rational(r.B),
                parse_rational(r.Bprime),
                parse_rational(r.lhs),
                r.pass_,
            )
            for r in self.rows
        )
        return analysis.TestReport(analysis.TestName(self.test), rows, self.overall)

    @classmethod
    def from_domain(cls, report: analysis.TestReport) -> "TestReportModel":
        return cls(
            test=report.test_name.value,
            rows=[TestRowModel.from_domain(r) for r in report.rows],
            overall=report.overall,
        )


class IntervalModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    s: RationalStr
    e: RationalStr
    kind: Literal["exec", "idle"]
    task: Optional[int] = None
    job: Optional[int] = None

    def to_domain(self) -> simulator.Interval:
        if self.kind == "exec":
            return simulator.Interval(
                parse_rational(self.s), parse_rational(self.e), self.task, self.job
            )
        return simulator.Interval(parse_rational(self.s), parse_rational(self.e))

    @classmethod
    def from_domain(cls, iv: simulator.Interval) -> "IntervalModel":
        return cls(
            s=render_rational(iv.start),
            e=render_rational(iv.end),
            kind="idle" if iv.is_idle else "exec",
            task=iv.task_id,
            job=iv.job_index,
        )


class SuspensionModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    s: RationalStr
    e: RationalStr
    task: int
    job: int

    def to_domain(self) -> simulator.SuspensionWindow:
        return simulator.SuspensionWindow(
            parse_rational(self.s), parse_rational(self.e), self.task, self.job
        )

    @classmethod
    def from_domain(cls, w: simulator.SuspensionWindow) -> "SuspensionModel":
        return cls(
            s=render_rational(w.start),
            e=render_rational(w.end),
            task=w.task_id,
            job=w.job_index,
        )


class EventModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    t: RationalStr
    kind: Literal["release", "complete", "miss"]
    task: int
    job: int

    def to_domain(self) -> simulator.TraceEvent:
        return simulator.TraceEvent(
            parse_rational(self.t), _EVENT_KIND[self.kind], self.task, self.job
        )

    @classmethod
    def from_domain(cls, e: simulator.TraceEvent) -> "EventModel":
        return cls(
            t=render_rational(e.time), kind=e.kind.value, task=e.task_id, job=e.job_index
        )


class TraceModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    horizon: RationalStr
    intervals: list[IntervalModel]
    suspensions: list[SuspensionModel]
    events: list[EventModel]

    def to_domain(self) -> simulator.ScheduleTrace:
        return simulator.ScheduleTrace(
            horizon=parse_rational(self.horizon),
            intervals=tuple(iv.to_domain() for iv in self.intervals),
            suspensions=tuple(w.to_domain() for w in self.suspensions),
            events=tuple(e.to_domain() for e in self.events),
        )

    @classmethod
    def from_domain(cls, trace: simulator.ScheduleTrace) -> "TraceModel":
        return cls(
            horizon=render_rational(trace.horizon),
            intervals=[IntervalModel.from_domain(iv) for iv in trace.intervals],
            suspensions=[SuspensionModel.from_domain(w) for w in trace.suspensions],
            events=[EventModel.from_domain(e) for e in trace.events],
        )


class MissModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    t: RationalStr
    task: int
    job: int

    def to_domain(self) -> tuple:
        return (parse_rational(self.t), self.task, self.job)

    @classmethod
    def from_domain(cls, miss: tuple) -> "MissModel":
        time, task_id, job_index = miss
        return cls(t=render_rational(time), task=task_id, job=job_index)


class GridModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    period_choices: list[RationalStr] = Field(min_length=1)
    wcet_step: RationalStr
    pattern_prefix_step: RationalStr
    n_tasks: int = 2
    suspension_choices: Optional[list[RationalStr]] = None
    suspension_step: Optional[RationalStr] = None
    horizon: Optional[RationalStr] = None
    on_miss: Literal["stop", "continue"] = "stop"

    def to_domain(self) -> search.GridSpec:
        return search.GridSpec(
            period_choices=tuple(parse_rational(p) for p in self.period_choices),
            wcet_step=parse_rational(self.wcet_step),
            pattern_prefix_step=parse_rational(self.pattern_prefix_step),
            n_tasks=self.n_tasks,
            suspension_choices=(
                tuple(parse_rational(s) for s in self.suspension_choices)
                if self.suspension_choices is not None
                else None
            ),
            suspension_step=(
                parse_rational(self.suspension_step)
                if self.suspension_step is not None
                else None
            ),
            horizon=parse_rational(self.horizon) if self.horizon is not None else None,
            on_miss=_ON_MISS[self.on_miss],
        )


class CounterexampleModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    taskset: TaskSetModel
    patterns: list[PatternModel]
    devi_report: TestReportModel
    trace: TraceModel
    first_miss: MissModel

    def to_domain(self) -> search.Counterexample:
        return search.Counterexample(
            taskset=self.taskset.to_domain(),
            patterns=tuple(p.to_domain() for p in self.patterns),
            devi_report=self.devi_report.to_domain(),
            trace=self.trace.to_domain(),
            first_miss=self.first_miss.to_domain(),
        )

    @classmethod
    def from_domain(cls, cx: search.Counterexample) -> "CounterexampleModel":
        return cls(
            taskset=TaskSetModel.from_domain(cx.taskset),
            patterns=[PatternModel.from_domain(p) for p in cx.patterns],
            devi_report=TestReportModel.from_domain(cx.devi_report),
            trace=TraceModel.from_domain(cx.trace),
            first_miss=MissModel.from_domain(cx.first_miss),
        )


# ---------------------------------------------------------------------------
# request / response envelopes
# ---------------------------------------------------------------------------

class AnalyzeRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    taskset: TaskSetModel
    test: Literal["devi", "oblivious"]


class SimulateRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    taskset: TaskSetModel
    patterns: list[PatternModel] = Field(min_length=1)
    horizon: Optional[RationalStr] = None
    on_miss: Literal["stop", "continue"] = "stop"

    def options(self) -> simulator.SimOptions:
        return simulator.SimOptions(
            horizon=parse_rational(self.horizon) if self.horizon is not None else None,
            on_miss=_ON_MISS[self.on_miss],
        )


class RenderRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    trace: TraceModel
    format: Literal["svg", "ascii"]


class RenderResponse(BaseModel):
    format: Literal["svg", "ascii"]
    content: str


class DemoRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    epsilon: RationalStr = "3/20"


class DemoResponse(BaseModel):
    epsilon: RationalStr
    counterexample: bool
    taskset: TaskSetModel
    devi: TestReportModel
    oblivious: TestReportModel
    patterns: list[PatternModel]
    first_miss: Optional[MissModel]
    trace: TraceModel
    svg: str

    @classmethod
    def from_domain(cls, result: demo.DemoResult) -> "DemoResponse":
        return cls(
            epsilon=render_rational(result.epsilon),
            counterexample=result.counterexample,
            taskset=TaskSetModel.from_domain(result.taskset),
            devi=TestReportModel.from_domain(result.devi),
            oblivious=TestReportModel.from_domain(result.oblivious),
            patterns=[PatternModel.from_domain(p) for p in result.patterns],
            first_miss=(
                MissModel.from_domain(result.first_miss)
                if result.first_miss is not None
                else None
            ),
            trace=TraceModel.from_domain(result.trace),
            svg=result.svg,
        )


class SearchRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    grid: GridModel
    max_found: Optional[int] = Field(default=None, ge=1)
    time_budget: Optional[float] = Field(default=None, gt=0)


class SearchStatsModel(BaseModel):
    checked: int
    passed_devi: int
    found: int

    @classmethod
    def from_domain(cls, stats: search.SearchStats) -> "SearchStatsModel":
        return cls(
            checked=stats.checked, passed_devi=stats.passed_devi, found=stats.found
        )


class SearchResponse(BaseModel):
    counterexamples: list[CounterexampleModel]
    stats: SearchStatsModel


class HealthResponse(BaseModel):
    status: Literal["ok"]
