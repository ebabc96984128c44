"""Schedulability tests for self-suspending tasks under preemptive EDF.

Two tests over a task set sorted by non-decreasing period:

* the suspension-aware test: for every prefix k,
  (B_k + B_k') / T_k + sum_{i<=k} C_i / T_i <= 1, with blocking terms
  B_k = sum_{i<=k} min(S_i, C_i) and B_k' = max_{i<=k} max(0, S_i - C_i);
* the suspension-oblivious baseline, which folds suspension into execution
  and applies the plain EDF utilization bound to sum_i (C_i + S_i) / T_i.

A PASS verdict from either test is a sufficiency *claim*, not a proof
obligation discharged here; the simulator exists to falsify such claims.
All comparisons are exact, and equality with 1 passes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable

from .model import TaskSet
from .rational import ONE, ZERO, TimeValue


class TestName(Enum):
    DEVI = "devi"
    SUSPENSION_OBLIVIOUS = "oblivious"


@dataclass(frozen=True)
class TestRow:
    k: int
    blocking: TimeValue       # B_k
    blocking_prime: TimeValue  # B_k'
    lhs: TimeValue
    passed: bool


@dataclass(frozen=True)
class TestReport:
    test_name: TestName
    rows: tuple[TestRow, ...]
    overall: bool

    @staticmethod
    def build(test_name: TestName, rows: Iterable[TestRow]) -> "TestReport":
        rows = tuple(rows)
        return TestReport(test_name, rows, all(r.passed for r in rows))


def devi_blocking_B(ts: TaskSet, k: int) -> TimeValue:
    """B_k = sum_{i<=k} min(S_i, C_i), 1-based k."""
    _check_k(ts, k)
    return sum((min(t.suspension, t.wcet) for t in ts.tasks[:k]), start=ZERO)


def devi_blocking_Bprime(ts: TaskSet, k: int) -> TimeValue:
    """B_k' = max_{i<=k} max(0, S_i - C_i), 1-based k."""
    _check_k(ts, k)
    return max(max(ZERO, t.suspension - t.wcet) for t in ts.tasks[:k])


def _check_k(ts: TaskSet, k: int) -> None:
    if not 1 <= k <= len(ts):
        raise ValueError(f"k must be in 1..{len(ts)}, got {k}")


def devi_test(ts: TaskSet) -> TestReport:
    """Evaluate the suspension-aware condition at every k = 1..n.

    All rows are always evaluated (no early exit) so the report is usable
    for diagnostics; the overall verdict is the conjunction of the rows.
    """
    rows = []
    usum = ZERO
    for k, task in enumerate(ts, start=1):
        usum += task.wcet / task.period
        b = devi_blocking_B(ts, k)
        bp = devi_blocking_Bprime(ts, k)
        lhs = (b + bp) / task.period + usum
        rows.append(TestRow(k, b, bp, lhs, lhs <= ONE))
    return TestReport.build(TestName.DEVI, rows)


def suspension_oblivious_test(ts: TaskSet) -> TestReport:
    """Treat suspension as execution: pass iff sum (C_i + S_i) / T_i <= 1.

    The inflated set has all S_i = 0, so every prefix condition is
    dominated by the full utilization sum; the report carries the single
    k = n row with zero blocking terms.
    """
    lhs = sum(((t.wcet + t.suspension) / t.period for t in ts), start=ZERO)
    row = TestRow(len(ts), ZERO, ZERO, lhs, lhs <= ONE)
    return TestReport.build(TestName.SUSPENSION_OBLIVIOUS, (row,))
