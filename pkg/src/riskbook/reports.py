"""Deterministic ranking, risk-table, explanation, and self-check reports.

Every report is a frozen dataclass plus a pair of renderers: a fixed-width
human table and a JSON form.  Rows follow declaration order and numbers use
shortest round-trip decimal formatting, so two runs over the same instance
produce byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .preorder import Verdict, build_preorder
from .risk import CUSTOM, spot_check_monotonicity
from .riskaware import (
    Instance,
    TradeoffWitness,
    comparison_matrix,
    risk_of,
    tradeoff_witnesses,
)
from .rulebook import at_most_as_bad
from .tolerance import TOL, le, lt

_CHECK_OK = "ok"
_CHECK_FAIL = "fail"
_CHECK_UNVERIFIED = "unverified"


def _fmt(x: float) -> str:
    return repr(float(x))


@dataclass(frozen=True)
class TrajectoryAssessment:
    """Per-trajectory risk figures: assessed risk and excess for every rule."""

    trajectory: str
    risks: dict[str, float]
    excesses: dict[str, float]
    safe: bool


@dataclass(frozen=True)
class TradeoffExplanation:
    """Witnesses backing one optimal trajectory against one challenger's improvement."""

    optimal_trajectory: str
    challenger: str
    improving_rule: str
    witnesses: tuple[TradeoffWitness, ...]


@dataclass(frozen=True)
class RankingReport:
    rule_ids: tuple[str, ...]
    assessments: tuple[TrajectoryAssessment, ...]
    matrix: dict[tuple[str, str], Verdict]
    safe: tuple[str, ...]
    optimal: tuple[str, ...]
    explanations: tuple[TradeoffExplanation, ...]


def _assessments(instance: Instance) -> tuple[TrajectoryAssessment, ...]:
    out = []
    for trajectory in instance.trajectories:
        risks: dict[str, float] = {}
        excesses: dict[str, float] = {}
        for rule_id in instance.rulebook.rule_ids:
            risk = risk_of(instance, rule_id, trajectory)
            risks[rule_id] = risk
            excesses[rule_id] = max(risk - instance.risk_configs[rule_id].threshold, 0.0)
        safe = all(le(v, 0.0) for v in excesses.values())
        out.append(TrajectoryAssessment(trajectory, risks, excesses, safe))
    return tuple(out)


def run_rank(instance: Instance) -> RankingReport:
    """Full evaluation: per-rule risks, pairwise verdicts, safety, optimality,
    and a tradeoff justification for every optimal trajectory."""
    assessments = _assessments(instance)
    profiles = {a.trajectory: a.excesses for a in assessments}
    matrix = comparison_matrix(instance, profiles)
    safe = tuple(a.trajectory for a in assessments if a.safe)
    optimal = tuple(
        t
        for t in instance.trajectories
        if not any(matrix[(o, t)] is Verdict.LOWER for o in instance.trajectories)
    )

    explanations = []
    for winner in optimal:
        for challenger in instance.trajectories:
            if challenger == winner:
                continue
            for rule_id in instance.rulebook.rule_ids:
                if lt(profiles[challenger][rule_id], profiles[winner][rule_id]):
                    witnesses = tuple(tradeoff_witnesses(instance, winner, challenger, rule_id))
                    if witnesses:
                        explanations.append(
                            TradeoffExplanation(winner, challenger, rule_id, witnesses)
                        )
    return RankingReport(
        rule_ids=instance.rulebook.rule_ids,
        assessments=assessments,
        matrix=matrix,
        safe=safe,
        optimal=optimal,
        explanations=tuple(explanations),
    )


@dataclass(frozen=True)
class RiskTableRow:
    trajectory: str
    risk: float
    excess: float
    safe: bool


@dataclass(frozen=True)
class RiskTable:
    rule_id: str
    measure: str
    threshold: float
    rows: tuple[RiskTableRow, ...]


def run_risk_table(instance: Instance, rule_id: str) -> RiskTable:
    """Risk of every trajectory with respect to one rule."""
    config = instance.config(rule_id)
    rows = []
    for trajectory in instance.trajectories:
        risk = risk_of(instance, rule_id, trajectory)
        excess = max(risk - config.threshold, 0.0)
        rows.append(RiskTableRow(trajectory, risk, excess, le(excess, 0.0)))
    return RiskTable(rule_id, config.measure.describe(), config.threshold, tuple(rows))


@dataclass(frozen=True)
class RuleDisadvantage:
    """One rule on which a side loses, with the rules that outweigh the loss."""

    rule_id: str
    value: float
    other_value: float
    compensators: tuple[str, ...]


@dataclass(frozen=True)
class Explanation:
    first: str
    second: str
    verdict: Verdict
    excesses: dict[str, dict[str, float]]
    first_worse: tuple[RuleDisadvantage, ...]
    second_worse: tuple[RuleDisadvantage, ...]
    tradeoffs: tuple[TradeoffExplanation, ...]


def _disadvantages(instance: Instance, mine: dict[str, float], theirs: dict[str, float]):
    priority = instance.rulebook.priority
    out = []
    for rule_id in instance.rulebook.rule_ids:
        if lt(theirs[rule_id], mine[rule_id]):
            compensators = tuple(
                other
                for other in instance.rulebook.rule_ids
                if priority.compare(other, rule_id) is Verdict.HIGHER
                and lt(mine[other], theirs[other])
            )
            out.append(RuleDisadvantage(rule_id, mine[rule_id], theirs[rule_id], compensators))
    return tuple(out)


def run_explain(instance: Instance, first: str, second: str) -> Explanation:
    """Head-to-head comparison of two trajectories.

    Lists every rule on which each side is worse together with the
    higher-priority rules compensating it, and, when either side is optimal,
    the positive-probability witnesses behind each improvement the other
    side shows against it.
    """
    instance.require_trajectory(first)
    instance.require_trajectory(second)
    assessments = {a.trajectory: a for a in _assessments(instance)}
    profiles = {t: assessments[t].excesses for t in instance.trajectories}
    matrix = comparison_matrix(instance, profiles)
    optimal = [
        t
        for t in instance.trajectories
        if not any(matrix[(o, t)] is Verdict.LOWER for o in instance.trajectories)
    ]

    tradeoffs = []
    for winner, challenger in ((first, second), (second, first)):
        if winner not in optimal:
            continue
        for rule_id in instance.rulebook.rule_ids:
            if lt(profiles[challenger][rule_id], profiles[winner][rule_id]):
                witnesses = tuple(tradeoff_witnesses(instance, winner, challenger, rule_id))
                if witnesses:
                    tradeoffs.append(TradeoffExplanation(winner, challenger, rule_id, witnesses))

    return Explanation(
        first=first,
        second=second,
        verdict=matrix[(first, second)],
        excesses={t: profiles[t] for t in (first, second)},
        first_worse=_disadvantages(instance, profiles[first], profiles[second]),
        second_worse=_disadvantages(instance, profiles[second], profiles[first]),
        tradeoffs=tuple(tradeoffs),
    )


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    detail: str


@dataclass(frozen=True)
class CheckReport:
    results: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(r.status != _CHECK_FAIL for r in self.results)


def run_check(instance: Instance) -> CheckReport:
    """Re-verify instance invariants and the structural laws of the orderings."""
    results = []

    total = sum(instance.space.probs[w] for w in instance.space.scenarios)
    results.append(
        CheckResult(
            "probabilities",
            _CHECK_OK if abs(total - 1.0) <= TOL else _CHECK_FAIL,
            f"sum = {_fmt(total)}",
        )
    )

    missing = [
        (t, w)
        for t in instance.trajectories
        for w in instance.space.scenarios
        if (t, w) not in instance.interaction.responses
    ]
    results.append(
        CheckResult(
            "interaction-totality",
            _CHECK_OK if not missing else _CHECK_FAIL,
            f"{len(instance.trajectories)} trajectories x {len(instance.space.scenarios)} scenarios",
        )
    )

    bad_cells = sum(
        1
        for rule in instance.rulebook.rules
        for t in instance.trajectories
        for e in instance.env_trajectories
        if not rule.violations.get((t, e), -1.0) >= 0
    )
    results.append(
        CheckResult(
            "violation-tables",
            _CHECK_OK if bad_cells == 0 else _CHECK_FAIL,
            f"{len(instance.rulebook.rules)} rules, total and nonnegative"
            if bad_cells == 0
            else f"{bad_cells} missing or negative cells",
        )
    )

    priority = instance.rulebook.priority
    reclosed = build_preorder(
        priority.elements, [(a, b) for a, b in priority.relation if a != b]
    )
    results.append(
        CheckResult(
            "priority-closure",
            _CHECK_OK if reclosed.relation == priority.relation else _CHECK_FAIL,
            f"{len(priority.elements)} rules, {len(priority.relation)} ordered pairs",
        )
    )

    matrix = comparison_matrix(instance)
    reflexive = all(matrix[(t, t)] is Verdict.EQUAL for t in instance.trajectories)
    leq = {
        (a, b): matrix[(a, b)] in (Verdict.LOWER, Verdict.EQUAL)
        for a in instance.trajectories
        for b in instance.trajectories
    }
    transitive = all(
        not (leq[(a, b)] and leq[(b, c)]) or leq[(a, c)]
        for a in instance.trajectories
        for b in instance.trajectories
        for c in instance.trajectories
    )
    results.append(
        CheckResult(
            "trajectory-preorder",
            _CHECK_OK if reflexive and transitive else _CHECK_FAIL,
            "reflexive and transitive over all candidate pairs",
        )
    )

    for rule_id in instance.rulebook.rule_ids:
        measure = instance.risk_configs[rule_id].measure
        if measure.kind != CUSTOM:
            continue
        passed = spot_check_monotonicity(measure, instance.space)
        results.append(
            CheckResult(
                f"measure-monotonicity[{rule_id}]",
                _CHECK_UNVERIFIED if passed else _CHECK_FAIL,
                "spot checks passed; custom measures cannot be proven monotone"
                if passed
                else "spot check found a monotonicity violation",
            )
        )

    return CheckReport(tuple(results))


# ---------------------------------------------------------------------------
# rendering


def _table(header: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) if rows else len(header[i]) for i in range(len(header))]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(c.ljust(widths[i]) for i, c in enumerate(row)).rstrip())
    return "\n".join(lines)


def _witness_phrase(w: TradeoffWitness) -> str:
    return (
        f"rule {w.compensating_rule} penalizes the challenger more on "
        f"{{{', '.join(w.witness_scenarios)}}} (probability {_fmt(w.witness_probability)})"
    )


def render_rank(report: RankingReport, as_json: bool = False) -> str:
    if as_json:
        return json.dumps(rank_to_json(report), indent=2)
    rows = []
    for a in report.assessments:
        rows.append(
            [a.trajectory]
            + [f"{_fmt(a.risks[r])}/{_fmt(a.excesses[r])}" for r in report.rule_ids]
            + ["yes" if a.safe else "no", "yes" if a.trajectory in report.optimal else "no"]
        )
    lines = [
        _table(
            ["trajectory"] + [f"{r} risk/excess" for r in report.rule_ids] + ["safe", "optimal"],
            rows,
        )
    ]
    trajectories = [a.trajectory for a in report.assessments]
    matrix_rows = [
        [a] + [report.matrix[(a, b)].value for b in trajectories] for a in trajectories
    ]
    lines.append("")
    lines.append("pairwise verdicts (row compared to column):")
    lines.append(_table(["vs"] + trajectories, matrix_rows))
    lines.append("")
    lines.append(f"safe: {', '.join(report.safe) if report.safe else '(none)'}")
    lines.append(f"optimal: {', '.join(report.optimal)}")
    if report.explanations:
        lines.append("")
        lines.append("tradeoffs behind each optimal trajectory:")
        for e in report.explanations:
            lines.append(
                f"  {e.challenger} improves on {e.optimal_trajectory} under {e.improving_rule}, but "
                + "; ".join(_witness_phrase(w) for w in e.witnesses)
            )
    return "\n".join(lines) + "\n"


def _witness_to_json(w: TradeoffWitness) -> dict:
    return {
        "improving_rule": w.improving_rule,
        "compensating_rule": w.compensating_rule,
        "witness_scenarios": list(w.witness_scenarios),
        "witness_probability": w.witness_probability,
    }


def _explanations_to_json(explanations: tuple[TradeoffExplanation, ...]) -> list:
    return [
        {
            "optimal_trajectory": e.optimal_trajectory,
            "challenger": e.challenger,
            "improving_rule": e.improving_rule,
            "witnesses": [_witness_to_json(w) for w in e.witnesses],
        }
        for e in explanations
    ]


def rank_to_json(report: RankingReport) -> dict:
    trajectories = [a.trajectory for a in report.assessments]
    return {
        "rules": list(report.rule_ids),
        "trajectories": [
            {
                "id": a.trajectory,
                "risks": {r: a.risks[r] for r in report.rule_ids},
                "excesses": {r: a.excesses[r] for r in report.rule_ids},
                "safe": a.safe,
            }
            for a in report.assessments
        ],
        "matrix": {a: {b: report.matrix[(a, b)].value for b in trajectories} for a in trajectories},
        "safe": list(report.safe),
        "optimal": list(report.optimal),
        "explanations": _explanations_to_json(report.explanations),
    }


def render_risk_table(table: RiskTable, as_json: bool = False) -> str:
    if as_json:
        return json.dumps(
            {
                "rule": table.rule_id,
                "measure": table.measure,
                "threshold": table.threshold,
                "rows": [
                    {
                        "trajectory": r.trajectory,
                        "risk": r.risk,
                        "excess": r.excess,
                        "safe": r.safe,
                    }
                    for r in table.rows
                ],
            },
            indent=2,
        )
    head = f"rule {table.rule_id}, measure {table.measure}, threshold {_fmt(table.threshold)}"
    body = _table(
        ["trajectory", "risk", "excess", "safe"],
        [[r.trajectory, _fmt(r.risk), _fmt(r.excess), "yes" if r.safe else "no"] for r in table.rows],
    )
    return head + "\n" + body + "\n"


def render_explanation(explanation: Explanation, as_json: bool = False) -> str:
    first, second = explanation.first, explanation.second
    if as_json:
        return json.dumps(
            {
                "first": first,
                "second": second,
                "verdict": explanation.verdict.value,
                "excesses": explanation.excesses,
                "first_worse": [
                    {
                        "rule": d.rule_id,
                        "excess": d.value,
                        "other_excess": d.other_value,
                        "compensated_by": list(d.compensators),
                    }
                    for d in explanation.first_worse
                ],
                "second_worse": [
                    {
                        "rule": d.rule_id,
                        "excess": d.value,
                        "other_excess": d.other_value,
                        "compensated_by": list(d.compensators),
                    }
                    for d in explanation.second_worse
                ],
                "tradeoffs": _explanations_to_json(explanation.tradeoffs),
            },
            indent=2,
        )

    verdict_phrases = {
        Verdict.LOWER: f"{first} is strictly less risky than {second}",
        Verdict.HIGHER: f"{first} is strictly riskier than {second}",
        Verdict.EQUAL: f"{first} and {second} are equally risky",
        Verdict.INCOMPARABLE: f"{first} and {second} are incomparable",
    }
    lines = [f"verdict: {verdict_phrases[explanation.verdict]}"]
    for side, disadvantages in ((first, explanation.first_worse), (second, explanation.second_worse)):
        if not disadvantages:
            lines.append(f"{side} is worse on: (no rule)")
            continue
        lines.append(f"{side} is worse on:")
        for d in disadvantages:
            comp = (
                f"compensated by higher-priority {', '.join(d.compensators)}"
                if d.compensators
                else "uncompensated"
            )
            lines.append(f"  {d.rule_id} (excess {_fmt(d.value)} vs {_fmt(d.other_value)}): {comp}")
    if explanation.tradeoffs:
        lines.append("witnessed tradeoffs:")
        for e in explanation.tradeoffs:
            lines.append(
                f"  {e.challenger} improves on optimal {e.optimal_trajectory} under {e.improving_rule}: "
                + "; ".join(_witness_phrase(w) for w in e.witnesses)
            )
    return "\n".join(lines) + "\n"


def render_check(report: CheckReport, as_json: bool = False) -> str:
    if as_json:
        return json.dumps(
            {
                "ok": report.ok,
                "results": [
                    {"name": r.name, "status": r.status, "detail": r.detail} for r in report.results
                ],
            },
            indent=2,
        )
    lines = [f"{r.status:>10}  {r.name}: {r.detail}" for r in report.results]
    lines.append("check " + ("passed" if report.ok else "FAILED"))
    return "\n".join(lines) + "\n"
