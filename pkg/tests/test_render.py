from fractions import Fraction as F

import pytest

from suspedf.model import Task, normalize_taskset, split_pattern
from suspedf.render import render_ascii, render_svg
from suspedf.simulator import ScheduleTrace, SimOptions, simulate_edf


def demo_trace():
    t1 = Task(1, F(6), F(5), F(1))
    t2 = Task(2, F(8), F(3, 20), F(0))
    ts = normalize_taskset([t1, t2])
    pats = [split_pattern(t1, F(1)), split_pattern(t2, F(0))]
    return simulate_edf(ts, pats, SimOptions(horizon=F(24)))


def plain_trace():
    ts = normalize_taskset([Task(1, F(2), F(1)), Task(2, F(4), F(1))])
    pats = [split_pattern(t, F(0)) for t in ts]
    return simulate_edf(ts, pats, SimOptions(horizon=F(4)))


class TestSvg:
    def test_deterministic(self):
        assert render_svg(demo_trace()) == render_svg(demo_trace())

    def test_single_miss_marker_at_fixed_scale(self):
        svg = render_svg(demo_trace())
        assert svg.count("deadline miss") == 1
        # 40 units per time unit after a 70-unit label margin: t=18 -> x=790
        assert 'x="790"' in svg.split("deadline miss")[0].rsplit("<text", 1)[1]

    def test_one_lane_per_task(self):
        svg = render_svg(demo_trace())
        assert ">task 1</text>" in svg and ">task 2</text>" in svg

    def test_suspensions_hatched_only_when_present(self):
        assert 'fill="url(#hatch)"' in render_svg(demo_trace())
        assert 'fill="url(#hatch)"' not in render_svg(plain_trace())

    def test_empty_trace_rejected(self):
        empty = ScheduleTrace(F(4), (), (), ())
        with pytest.raises(ValueError, match="empty"):
            render_svg(empty)


class TestAscii:
    def test_grid_step_is_denominator_unit(self):
        art = render_ascii(demo_trace())
        assert art.startswith("time step: 1/20 per column")
        art2 = render_ascii(plain_trace())
        assert art2.startswith("time step: 1 per column")

    def test_lane_markers(self):
        art = render_ascii(demo_trace())
        assert "!" in art  # miss marker
        assert "/" in art  # suspension hatching
        assert "legend:" in art

    def test_plain_trace_has_no_suspension_marks(self):
        lanes = [
            line for line in render_ascii(plain_trace()).splitlines()
            if line.startswith("t")
        ]
        assert lanes and all("/" not in lane for lane in lanes)

    def test_deterministic(self):
        assert render_ascii(demo_trace()) == render_ascii(demo_trace())

    def test_empty_trace_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            render_ascii(ScheduleTrace(F(4), (), (), ()))
