"""Command-line front end.

A thin client over the service layer: every command assembles a wire-model
request, dispatches it (in process by default, or to a running server via
``--server URL``), and maps the response onto stdout plus an exit code.

Exit codes: 0 = pass / no miss / nothing found is "clean"; 1 = the
interesting outcome (test failed, deadline missed, counterexample found or
demonstrated); 2 = any input or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from pydantic import ValidationError

from .rational import parse_rational
from .service import app as service
from .service import schemas


class CliError(Exception):
    pass


def _read_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise CliError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: not valid JSON ({exc})")


def _dump(model) -> dict:
    return model.model_dump(mode="json", by_alias=True, exclude_none=True)


def _emit(model) -> None:
    print(json.dumps(_dump(model), indent=2))


def _call(args, path: str, request, response_cls, local_fn, **local_kwargs):
    """Dispatch one request: remote when --server is set, else in process."""
    if getattr(args, "server", None):
        import httpx

        url = args.server.rstrip("/") + path
        try:
            resp = httpx.post(url, json=_dump(request), timeout=None)
        except httpx.HTTPError as exc:
            raise CliError(f"cannot reach {url}: {exc}")
        if resp.status_code != 200:
            try:
                detail = resp.json().get("detail", resp.text)
            except ValueError:
                detail = resp.text
            raise CliError(f"server rejected request ({resp.status_code}): {detail}")
        return response_cls.model_validate(resp.json())
    return local_fn(request, **local_kwargs)


def cmd_analyze(args) -> int:
    req = schemas.AnalyzeRequest(
        taskset=schemas.TaskSetModel.model_validate(_read_json(args.taskset)),
        test=args.test,
    )
    report = _call(args, "/analyze", req, schemas.TestReportModel, service.analyze)
    _emit(report)
    return 0 if report.overall else 1


def _patterns_payload(raw) -> list:
    if isinstance(raw, dict) and "patterns" in raw:
        raw = raw["patterns"]
    if not isinstance(raw, list):
        raise CliError('patterns file must be a JSON array (or {"patterns": [...]})')
    return raw


def cmd_simulate(args) -> int:
    req = schemas.SimulateRequest(
        taskset=schemas.TaskSetModel.model_validate(_read_json(args.taskset)),
        patterns=[
            schemas.PatternModel.model_validate(p)
            for p in _patterns_payload(_read_json(args.patterns))
        ],
        horizon=args.horizon,
        on_miss=args.on_miss,
    )
    trace = _call(args, "/simulate", req, schemas.TraceModel, service.simulate)
    _emit(trace)
    missed = any(e.kind == "miss" for e in trace.events)
    return 1 if missed else 0


def cmd_render(args) -> int:
    req = schemas.RenderRequest(
        trace=schemas.TraceModel.model_validate(_read_json(args.trace)),
        format=args.format,
    )
    result = _call(args, "/render", req, schemas.RenderResponse, service.render)
    Path(args.out).write_text(result.content, encoding="utf-8")
    print(f"wrote {args.out}", file=sys.stderr)
    return 0


def cmd_demo(args) -> int:
    epsilon = parse_rational(args.epsilon)
    if not 0 < epsilon <= Fraction(1, 3):
        print(
            f"warning: epsilon {args.epsilon} is outside (0, 1/3]; "
            "the test verdict will change",
            file=sys.stderr,
        )
    req = schemas.DemoRequest(epsilon=args.epsilon)
    bundle = _call(args, "/demo", req, schemas.DemoResponse, service.demo)
    _emit(bundle)
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        artifacts = {
            "taskset.json": _dump(bundle.taskset),
            "patterns.json": [_dump(p) for p in bundle.patterns],
            "devi.json": _dump(bundle.devi),
            "oblivious.json": _dump(bundle.oblivious),
            "trace.json": _dump(bundle.trace),
        }
        for name, payload in artifacts.items():
            (out / name).write_text(
                json.dumps(payload, indent=2) + "\n", encoding="utf-8"
            )
        (out / "schedule.svg").write_text(bundle.svg, encoding="utf-8")
        print(f"wrote artifacts to {out}", file=sys.stderr)
    return 1 if bundle.counterexample else 0


def cmd_search(args) -> int:
    req = schemas.SearchRequest(
        grid=schemas.GridModel.model_validate(_read_json(args.grid)),
        max_found=args.max_found,
        time_budget=args.time_budget,
    )

    def progress(stats):
        if stats.checked % 1000 == 0:
            print(stats.line(), file=sys.stderr)

    result = _call(
        args, "/search", req, schemas.SearchResponse, service.search,
        progress=progress,
    )
    for cx in result.counterexamples:
        print(json.dumps(_dump(cx), separators=(",", ":")))
    stats = result.stats
    print(
        f"checked={stats.checked} passed_devi={stats.passed_devi} "
        f"found={stats.found}",
        file=sys.stderr,
    )
    return 0 if result.counterexamples else 1


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run(service.app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="suspedf",
        description=(
            "Suspension-aware EDF schedulability tests, exact-time EDF "
            "simulation, Gantt rendering, and counterexample search."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_server_flag(p):
        p.add_argument(
            "--server",
            metavar="URL",
            help="send the request to a running suspedf server instead of "
            "computing in process",
        )

    p = sub.add_parser("analyze", help="run a schedulability test on a task set")
    p.add_argument("--taskset", required=True, metavar="FILE")
    p.add_argument("--test", required=True, choices=["devi", "oblivious"])
    add_server_flag(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="simulate preemptive EDF on a task set")
    p.add_argument("--taskset", required=True, metavar="FILE")
    p.add_argument("--patterns", required=True, metavar="FILE")
    p.add_argument("--horizon", metavar="R", help='rational, e.g. "24" or "3/2"')
    p.add_argument("--on-miss", choices=["stop", "continue"], default="stop")
    add_server_flag(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("render", help="draw a trace as a Gantt chart")
    p.add_argument("--trace", required=True, metavar="FILE")
    p.add_argument("--format", required=True, choices=["svg", "ascii"])
    p.add_argument("--out", required=True, metavar="FILE")
    add_server_flag(p)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser(
        "demo",
        help="run the built-in two-task workload that defeats the "
        "suspension-aware test",
    )
    p.add_argument("--epsilon", metavar="R", default="3/20")
    p.add_argument("--out-dir", metavar="DIR")
    add_server_flag(p)
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("search", help="sweep a parameter grid for counterexamples")
    p.add_argument("--grid", required=True, metavar="FILE")
    p.add_argument("--max-found", type=int, metavar="N")
    p.add_argument("--time-budget", type=float, metavar="SECONDS")
    add_server_flag(p)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())
