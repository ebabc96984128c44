"""HTTP service exposing analysis, simulation, rendering, demo, and search.

The route handlers are thin wrappers around plain functions operating on
the pydantic wire models; the CLI calls the same functions in process, so
both surfaces share one code path. Domain ValueErrors (bad parameters,
mismatched patterns, malformed inputs) surface as HTTP 422 with the
diagnostic in ``detail``.
"""

from __future__ import annotations

from typing import Callable, Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..analysis import devi_test, suspension_oblivious_test
from ..demo import run_demo
from ..rational import parse_rational
from ..render import render_ascii, render_svg
from ..simulator import simulate_edf
from .. import search as search_mod
from . import schemas


def analyze(req: schemas.AnalyzeRequest) -> schemas.TestReportModel:
    ts = req.taskset.to_domain()
    runner = devi_test if req.test == "devi" else suspension_oblivious_test
    return schemas.TestReportModel.from_domain(runner(ts))


def simulate(req: schemas.SimulateRequest) -> schemas.TraceModel:
    ts = req.taskset.to_domain()
    patterns = [p.to_domain() for p in req.patterns]
    trace = simulate_edf(ts, patterns, req.options())
    return schemas.TraceModel.from_domain(trace)


def render(req: schemas.RenderRequest) -> schemas.RenderResponse:
    trace = req.trace.to_domain()
    renderer = render_svg if req.format == "svg" else render_ascii
    return schemas.RenderResponse(format=req.format, content=renderer(trace))


def demo(req: schemas.DemoRequest) -> schemas.DemoResponse:
    return schemas.DemoResponse.from_domain(run_demo(parse_rational(req.epsilon)))


def search(
    req: schemas.SearchRequest,
    progress: Optional[Callable[[search_mod.SearchStats], None]] = None,
) -> schemas.SearchResponse:
    spec = req.grid.to_domain()
    found, stats = search_mod.find_counterexamples(
        spec,
        max_found=req.max_found,
        time_budget=req.time_budget,
        progress=progress,
    )
    return schemas.SearchResponse(
        counterexamples=[schemas.CounterexampleModel.from_domain(cx) for cx in found],
        stats=schemas.SearchStatsModel.from_domain(stats),
    )


def create_app() -> FastAPI:
    app = FastAPI(
        title="suspedf",
        version="0.1.0",
        description=(
            "Suspension-aware EDF schedulability tests, exact-time EDF "
            "simulation, and counterexample search for self-suspending "
            "periodic task sets."
        ),
    )

    @app.exception_handler(ValueError)
    async def value_error_handler(request: Request, exc: ValueError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @app.get("/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return schemas.HealthResponse(status="ok")

    @app.post("/analyze", response_model=schemas.TestReportModel)
    def analyze_route(req: schemas.AnalyzeRequest) -> schemas.TestReportModel:
        return analyze(req)

    @app.post("/simulate", response_model=schemas.TraceModel)
    def simulate_route(req: schemas.SimulateRequest) -> schemas.TraceModel:
        return simulate(req)

    @app.post("/render", response_model=schemas.RenderResponse)
    def render_route(req: schemas.RenderRequest) -> schemas.RenderResponse:
        return render(req)

    @app.post("/demo", response_model=schemas.DemoResponse)
    def demo_route(req: schemas.DemoRequest) -> schemas.DemoResponse:
        return demo(req)

    @app.post("/search", response_model=schemas.SearchResponse)
    def search_route(req: schemas.SearchRequest) -> schemas.SearchResponse:
        return search(req)

    return app


app = create_app()
