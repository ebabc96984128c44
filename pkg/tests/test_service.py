import pytest
from fastapi.testclient import TestClient

from suspedf.service.app import app
from suspedf.service import schemas

DEMO_TASKS = {
    "tasks": [
        {"id": 1, "period": "6", "wcet": "5", "suspension": "1"},
        {"id": 2, "period": "8", "wcet": "1/4", "suspension": "0"},
    ]
}
DEMO_PATTERNS = [
    {
        "task_id": 1,
        "segments": [
            {"kind": "exec", "dur": "1"},
            {"kind": "susp", "dur": "1"},
            {"kind": "exec", "dur": "4"},
        ],
    },
    {"task_id": 2, "segments": [{"kind": "exec", "dur": "1/4"}]},
]


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


class TestHealth:
    def test_health(self, client):
        resp = client.get("/health")
        assert resp.status_code == 200
        assert resp.json() == {"status": "ok"}


class TestAnalyzeEndpoint:
    def test_devi_report(self, client):
        resp = client.post(
            "/analyze", json={"taskset": DEMO_TASKS, "test": "devi"}
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body == {
            "test": "devi",
            "rows": [
                {"k": 1, "B": "1", "Bprime": "0", "lhs": "1", "pass": True},
                {"k": 2, "B": "1", "Bprime": "0", "lhs": "95/96", "pass": True},
            ],
            "overall": True,
        }

    def test_oblivious_report(self, client):
        resp = client.post(
            "/analyze", json={"taskset": DEMO_TASKS, "test": "oblivious"}
        )
        body = resp.json()
        assert body["overall"] is False
        assert body["rows"][0]["lhs"] == "33/32"

    def test_float_rejected(self, client):
        bad = {"tasks": [{"id": 1, "period": 0.25, "wcet": "1"}]}
        resp = client.post("/analyze", json={"taskset": bad, "test": "devi"})
        assert resp.status_code == 422
        assert "float" in str(resp.json())

    def test_infeasible_wcet_named_in_diagnostic(self, client):
        bad = {"tasks": [{"id": 3, "period": "4", "wcet": "5"}]}
        resp = client.post("/analyze", json={"taskset": bad, "test": "devi"})
        assert resp.status_code == 422
        assert "wcet" in resp.json()["detail"]
        assert "task 3" in resp.json()["detail"]

    def test_duplicate_ids_rejected(self, client):
        bad = {
            "tasks": [
                {"id": 1, "period": "4", "wcet": "1"},
                {"id": 1, "period": "6", "wcet": "1"},
            ]
        }
        resp = client.post("/analyze", json={"taskset": bad, "test": "devi"})
        assert resp.status_code == 422
        assert "duplicate" in resp.json()["detail"]


class TestSimulateEndpoint:
    def test_demo_trace(self, client):
        resp = client.post(
            "/simulate",
            json={
                "taskset": DEMO_TASKS,
                "patterns": DEMO_PATTERNS,
                "horizon": "24",
            },
        )
        assert resp.status_code == 200
        body = resp.json()
        assert body["horizon"] == "24"
        assert {"t": "18", "kind": "miss", "task": 1, "job": 2} in body["events"]
        first = body["intervals"][0]
        assert first == {"s": "0", "e": "1", "kind": "exec", "task": 1, "job": 0}

    def test_missing_pattern_rejected(self, client):
        resp = client.post(
            "/simulate",
            json={"taskset": DEMO_TASKS, "patterns": DEMO_PATTERNS[:1]},
        )
        assert resp.status_code == 422
        assert "missing pattern" in resp.json()["detail"]

    def test_trace_round_trips_through_parser(self, client):
        resp = client.post(
            "/simulate",
            json={
                "taskset": DEMO_TASKS,
                "patterns": DEMO_PATTERNS,
                "horizon": "24",
                "on_miss": "continue",
            },
        )
        body = resp.json()
        model = schemas.TraceModel.model_validate(body)
        again = schemas.TraceModel.from_domain(model.to_domain())
        assert again.model_dump(by_alias=True) == model.model_dump(by_alias=True)


@pytest.fixture(scope="module")
def demo_trace_json(client):
    resp = client.post(
        "/simulate",
        json={
            "taskset": DEMO_TASKS,
            "patterns": DEMO_PATTERNS,
            "horizon": "24",
        },
    )
    return resp.json()


class TestRenderEndpoint:
    def test_svg_has_one_miss_marker(self, client, demo_trace_json):
        resp = client.post(
            "/render", json={"trace": demo_trace_json, "format": "svg"}
        )
        assert resp.status_code == 200
        svg = resp.json()["content"]
        assert svg.count("deadline miss") == 1
        assert 'fill="url(#hatch)"' in svg

    def test_ascii_has_legend(self, client, demo_trace_json):
        resp = client.post(
            "/render", json={"trace": demo_trace_json, "format": "ascii"}
        )
        content = resp.json()["content"]
        assert "legend:" in content
        assert "!" in content

    def test_zero_suspension_trace_has_no_hatching(self, client):
        resp = client.post(
            "/simulate",
            json={
                "taskset": {"tasks": [{"id": 1, "period": "2", "wcet": "1"}]},
                "patterns": [
                    {"task_id": 1, "segments": [{"kind": "exec", "dur": "1"}]}
                ],
                "horizon": "4",
            },
        )
        render = client.post(
            "/render", json={"trace": resp.json(), "format": "svg"}
        )
        assert 'url(#hatch)"' not in render.json()["content"].replace(
            'id="hatch"', ""
        )

    def test_empty_trace_rejected(self, client, demo_trace_json):
        empty = dict(demo_trace_json, intervals=[], suspensions=[], events=[])
        resp = client.post("/render", json={"trace": empty, "format": "svg"})
        assert resp.status_code == 422

    def test_unknown_format_rejected(self, client, demo_trace_json):
        resp = client.post(
            "/render", json={"trace": demo_trace_json, "format": "png"}
        )
        assert resp.status_code == 422


class TestDemoEndpoint:
    def test_default_epsilon(self, client):
        resp = client.post("/demo", json={})
        body = resp.json()
        assert body["epsilon"] == "3/20"
        assert body["counterexample"] is True
        assert body["first_miss"] == {"t": "18", "task": 1, "job": 2}
        assert body["devi"]["overall"] is True
        assert body["oblivious"]["overall"] is False
        assert "deadline miss" in body["svg"]

    def test_boundary_epsilon_third(self, client):
        body = client.post("/demo", json={"epsilon": "1/3"}).json()
        assert body["devi"]["rows"][1]["lhs"] == "1"
        assert body["counterexample"] is True

    def test_large_epsilon_not_a_counterexample(self, client):
        body = client.post("/demo", json={"epsilon": "1/2"}).json()
        assert body["devi"]["overall"] is False
        assert body["devi"]["rows"][1]["lhs"] == "49/48"
        assert body["counterexample"] is False

    def test_nonpositive_epsilon_rejected(self, client):
        resp = client.post("/demo", json={"epsilon": "0"})
        assert resp.status_code == 422
        assert "epsilon" in resp.json()["detail"]


class TestJsonRoundTrips:
    def test_taskset_round_trip(self):
        model = schemas.TaskSetModel.model_validate(DEMO_TASKS)
        again = schemas.TaskSetModel.from_domain(model.to_domain())
        assert again == model

    def test_pattern_round_trip(self):
        for raw in DEMO_PATTERNS:
            model = schemas.PatternModel.model_validate(raw)
            assert schemas.PatternModel.from_domain(model.to_domain()) == model

    def test_report_round_trip(self, client):
        raw = client.post(
            "/analyze", json={"taskset": DEMO_TASKS, "test": "devi"}
        ).json()
        model = schemas.TestReportModel.model_validate(raw)
        again = schemas.TestReportModel.from_domain(model.to_domain())
        assert again == model

    def test_rationals_canonicalized_on_input(self):
        raw = {"tasks": [{"id": 1, "period": "12/2", "wcet": 5, "suspension": "2/2"}]}
        model = schemas.TaskSetModel.model_validate(raw)
        assert model.tasks[0].period == "6"
        assert model.tasks[0].wcet == "5"
        assert model.tasks[0].suspension == "1"


class TestSearchEndpoint:
    def test_zero_suspension_grid_empty(self, client):
        grid = {
            "period_choices": ["2", "3"],
            "wcet_step": "1",
            "pattern_prefix_step": "1",
            "n_tasks": 2,
            "suspension_choices": ["0"],
        }
        resp = client.post("/search", json={"grid": grid})
        body = resp.json()
        assert body["counterexamples"] == []
        assert body["stats"]["checked"] > 0

    def test_finds_and_reports_counterexample(self, client):
        grid = {
            "period_choices": ["6", "8"],
            "wcet_step": "1/4",
            "pattern_prefix_step": "1",
            "n_tasks": 2,
            "suspension_choices": ["0", "1"],
        }
        resp = client.post("/search", json={"grid": grid, "max_found": 1})
        body = resp.json()
        assert body["stats"]["found"] == 1
        cx = schemas.CounterexampleModel.model_validate(
            body["counterexamples"][0]
        ).to_domain()
        from suspedf.search import verify_counterexample

        assert verify_counterexample(cx)

    def test_malformed_grid_rejected(self, client):
        resp = client.post("/search", json={"grid": {"wcet_step": "1"}})
        assert resp.status_code == 422
