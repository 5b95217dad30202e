"""Reproducible verification experiments over the built-in instance
families, reported as fixed-header CSV.

Each experiment compares a computed per-case observation against an
independently derived expectation:

* ``lemma11``: optimal-plan counts of the choice-counter family against
  the doubling law 2^(2^k - 1), one row per bit count k = 1..n.
* ``lemma17``: for every clause subset at width n, the streamed verifier
  plan must validate and its first action must match the brute-force
  satisfiability verdict.
* ``lemma27``: one simulation of the all-instances sweep, probing the
  verdict action at stride*i + offset for every subset i against the
  brute-force verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import oracles, representations, sat3
from .constructions import (
    block_constants,
    indexed_plans_instance,
    sat_verifier_instance,
)
from .model import validate_plan

EXPERIMENTS = ("lemma11", "lemma17", "lemma27")


@dataclass(frozen=True)
class ReportRow:
    case: int
    expected: str
    observed: str
    ok: bool


@dataclass
class ExperimentReport:
    name: str
    n: int
    rows: list[ReportRow] = field(default_factory=list)
    notes: dict[str, int] = field(default_factory=dict)

    @property
    def passed(self) -> int:
        return sum(1 for row in self.rows if row.ok)

    @property
    def failed(self) -> int:
        return len(self.rows) - self.passed

    @property
    def all_passed(self) -> bool:
        return self.failed == 0

    def to_csv(self) -> str:
        lines = ["case,expected,observed,pass"]
        for row in self.rows:
            lines.append(f"{row.case},{row.expected},{row.observed},{int(row.ok)}")
        lines.append(f"# summary: {self.passed}/{len(self.rows)} pass")
        return "\n".join(lines) + "\n"


def run_experiment(name: str, n: int) -> ExperimentReport:
    if name == "lemma11":
        return _plan_count_experiment(n)
    if name == "lemma17":
        return _first_action_experiment(n)
    if name == "lemma27":
        return _verdict_position_experiment(n)
    raise ValueError(f"unknown experiment: {name} (expected one of {EXPERIMENTS})")


def _plan_count_experiment(n: int) -> ExperimentReport:
    report = ExperimentReport("lemma11", n)
    for k in range(1, n + 1):
        expected = 1 << ((1 << k) - 1)
        observed = oracles.count_optimal_plans(indexed_plans_instance(k))
        report.rows.append(ReportRow(k, str(expected), str(observed), observed == expected))
    return report


def _first_action_experiment(n: int) -> ExperimentReport:
    report = ExperimentReport("lemma17", n)
    m = sat3.clause_count(n)
    for i in range(1 << m):
        instance = sat_verifier_instance(n, i)
        advice = representations.compute_advice(n, i)
        plan = list(representations.c16_csar(n, i, advice))
        trace = validate_plan(instance, plan)
        expected = "acs" if advice.sat else "acu"
        if not trace.valid:
            observed = f"invalid@{trace.failure_step}"
        else:
            observed = plan[0]
        report.rows.append(ReportRow(i, expected, observed, trace.valid and observed == expected))
    return report


def _verdict_position_experiment(n: int) -> ExperimentReport:
    report = ExperimentReport("lemma27", n)
    constants = block_constants(n)  # cross-checks formula vs simulation for small n
    m = sat3.clause_count(n)
    subsets = 1 << m
    probes = {constants.stride * i + constants.offset: i for i in range(subsets)}
    observed: dict[int, str] = {}
    for position, action in enumerate(representations.c26_csar(n), start=1):
        if position in probes:
            observed[position] = action
    for i in range(subsets):
        sat, _ = sat3.is_satisfiable(sat3.instance_from_index(n, i))
        expected = "ais" if sat else "aiu"
        got = observed.get(constants.stride * i + constants.offset, "missing")
        report.rows.append(ReportRow(i, expected, got, got == expected))
    report.notes["offset"] = constants.offset
    report.notes["stride"] = constants.stride
    return report
