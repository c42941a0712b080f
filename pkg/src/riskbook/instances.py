"""Loading, validating, and saving evaluation problems as JSON documents.

The document format is a single UTF-8 JSON object with six top-level keys:

- ``scenarios``: list of ``{"id": str, "prob": number}``
- ``system_trajectories``: list of identifiers
- ``environment_trajectories``: list of identifiers
- ``interaction``: trajectory id -> scenario id -> environment trajectory id
- ``rules``: list of ``{"id": str, "violations": trajectory id ->
  environment trajectory id -> number, "risk": {"measure": str,
  "alpha"?: number, "threshold": number}}``
- ``priority``: list of ``[higher, lower]`` rule id pairs

Measure kinds are ``expected``, ``worst_case``, ``var``, and ``cvar``;
``alpha`` is required for the last two and rejected otherwise.  Malformed
documents raise :class:`ParseError`; well-formed documents that break an
invariant raise :class:`ValidationError` naming the offending field.
"""

from __future__ import annotations

import json
from dataclasses import replace
from importlib import resources
from pathlib import Path
from typing import Any

from .errors import InvalidAlpha, ParseError, UnknownElement, ValidationError
from .preorder import build_preorder
from .probspace import FiniteProbSpace
from .risk import CUSTOM, CVAR, EXPECTED, VAR, WORST_CASE, RiskMeasure
from .riskaware import Instance, InteractionModel, RiskConfig
from .rulebook import Rule, Rulebook

MEASURE_KINDS = (EXPECTED, WORST_CASE, VAR, CVAR)

_TOP_LEVEL_KEYS = (
    "scenarios",
    "system_trajectories",
    "environment_trajectories",
    "interaction",
    "rules",
    "priority",
)


def _expect_object(value: Any, path: str) -> dict:
    if not isinstance(value, dict):
        raise ValidationError(f"{path}: expected an object, got {type(value).__name__}")
    return value


def _expect_list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise ValidationError(f"{path}: expected a list, got {type(value).__name__}")
    return value


def _expect_str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        raise ValidationError(f"{path}: expected a string, got {type(value).__name__}")
    return value


def _expect_number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{path}: expected a number, got {type(value).__name__}")
    return float(value)


def _unique_ids(ids: list[str], path: str) -> None:
    seen: set[str] = set()
    for x in ids:
        if x in seen:
            raise ValidationError(f"{path}: identifier {x!r} declared more than once")
        seen.add(x)


def _parse_measure(doc: dict, path: str) -> RiskMeasure:
    kind = _expect_str(doc.get("measure"), f"{path}.measure")
    if kind not in MEASURE_KINDS:
        raise ValidationError(
            f"{path}.measure: unknown kind {kind!r}, expected one of {', '.join(MEASURE_KINDS)}"
        )
    alpha = None
    if "alpha" in doc:
        alpha = _expect_number(doc["alpha"], f"{path}.alpha")
    try:
        return RiskMeasure(kind, alpha=alpha)
    except InvalidAlpha as exc:
        raise ValidationError(f"{path}: {exc}") from None


def instance_from_dict(doc: Any) -> Instance:
    """Build and validate an :class:`Instance` from a parsed JSON document."""
    doc = _expect_object(doc, "document")
    for key in _TOP_LEVEL_KEYS:
        if key not in doc:
            raise ValidationError(f"document: missing top-level key {key!r}")
    for key in doc:
        if key not in _TOP_LEVEL_KEYS:
            raise ValidationError(f"document: unexpected top-level key {key!r}")

    scenario_docs = _expect_list(doc["scenarios"], "scenarios")
    scenario_ids: list[str] = []
    probs: dict[str, float] = {}
    for i, entry in enumerate(scenario_docs):
        entry = _expect_object(entry, f"scenarios[{i}]")
        sid = _expect_str(entry.get("id"), f"scenarios[{i}].id")
        prob = _expect_number(entry.get("prob"), f"scenarios[{i}].prob")
        scenario_ids.append(sid)
        probs[sid] = prob
    _unique_ids(scenario_ids, "scenarios")
    space = FiniteProbSpace(tuple(scenario_ids), probs)

    trajectories = [
        _expect_str(t, f"system_trajectories[{i}]")
        for i, t in enumerate(_expect_list(doc["system_trajectories"], "system_trajectories"))
    ]
    _unique_ids(trajectories, "system_trajectories")
    env_trajectories = [
        _expect_str(e, f"environment_trajectories[{i}]")
        for i, e in enumerate(_expect_list(doc["environment_trajectories"], "environment_trajectories"))
    ]
    _unique_ids(env_trajectories, "environment_trajectories")

    interaction_doc = _expect_object(doc["interaction"], "interaction")
    responses: dict[tuple[str, str], str] = {}
    for traj, row in interaction_doc.items():
        if traj not in trajectories:
            raise ValidationError(f"interaction: unknown system trajectory {traj!r}")
        row = _expect_object(row, f"interaction.{traj}")
        for scenario, env in row.items():
            if scenario not in scenario_ids:
                raise ValidationError(f"interaction.{traj}: unknown scenario {scenario!r}")
            responses[(traj, scenario)] = _expect_str(env, f"interaction.{traj}.{scenario}")

    rule_docs = _expect_list(doc["rules"], "rules")
    rules: list[Rule] = []
    risk_configs: dict[str, RiskConfig] = {}
    for i, entry in enumerate(rule_docs):
        entry = _expect_object(entry, f"rules[{i}]")
        rid = _expect_str(entry.get("id"), f"rules[{i}].id")
        table_doc = _expect_object(entry.get("violations"), f"rules[{i}].violations")
        table: dict[tuple[str, str], float] = {}
        for traj, row in table_doc.items():
            if traj not in trajectories:
                raise ValidationError(f"rules[{i}].violations: unknown system trajectory {traj!r}")
            row = _expect_object(row, f"rules[{i}].violations.{traj}")
            for env, value in row.items():
                if env not in env_trajectories:
                    raise ValidationError(
                        f"rules[{i}].violations.{traj}: unknown environment trajectory {env!r}"
                    )
                number = _expect_number(value, f"rules[{i}].violations.{traj}.{env}")
                if number < 0:
                    raise ValidationError(
                        f"rules[{i}].violations.{traj}.{env}: violation must be nonnegative"
                    )
                table[(traj, env)] = number
        risk_doc = _expect_object(entry.get("risk"), f"rules[{i}].risk")
        for key in risk_doc:
            if key not in ("measure", "alpha", "threshold"):
                raise ValidationError(f"rules[{i}].risk: unexpected key {key!r}")
        measure = _parse_measure(risk_doc, f"rules[{i}].risk")
        threshold = _expect_number(risk_doc.get("threshold"), f"rules[{i}].risk.threshold")
        if threshold < 0:
            raise ValidationError(f"rules[{i}].risk.threshold: must be nonnegative")
        rules.append(Rule(rid, table))
        risk_configs[rid] = RiskConfig(measure, threshold)
    _unique_ids([r.id for r in rules], "rules")

    edges: list[tuple[str, str]] = []
    for i, pair in enumerate(_expect_list(doc["priority"], "priority")):
        pair = _expect_list(pair, f"priority[{i}]")
        if len(pair) != 2:
            raise ValidationError(f"priority[{i}]: expected a [higher, lower] pair")
        edges.append(
            (_expect_str(pair[0], f"priority[{i}][0]"), _expect_str(pair[1], f"priority[{i}][1]"))
        )
    try:
        priority = build_preorder([r.id for r in rules], edges)
    except UnknownElement as exc:
        raise ValidationError(f"priority: {exc}") from None

    return Instance(
        space=space,
        trajectories=tuple(trajectories),
        env_trajectories=tuple(env_trajectories),
        interaction=InteractionModel(responses),
        rulebook=Rulebook(tuple(rules), priority),
        risk_configs=risk_configs,
    )


def parse_instance(text: str) -> Instance:
    """Parse a JSON instance document and validate every invariant."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return instance_from_dict(doc)


def instance_to_dict(instance: Instance) -> dict:
    """Instance as a JSON-ready dict; the priority list carries the full closure."""
    rules = []
    for rule in instance.rulebook.rules:
        config = instance.risk_configs[rule.id]
        if config.measure.kind == CUSTOM:
            raise ValidationError(f"rule {rule.id!r} uses a custom measure, which cannot be serialized")
        risk: dict[str, Any] = {"measure": config.measure.kind}
        if config.measure.alpha is not None:
            risk["alpha"] = config.measure.alpha
        risk["threshold"] = config.threshold
        rules.append(
            {
                "id": rule.id,
                "violations": {
                    traj: {env: rule.violations[(traj, env)] for env in instance.env_trajectories}
                    for traj in instance.trajectories
                },
                "risk": risk,
            }
        )
    order = {rid: i for i, rid in enumerate(instance.rulebook.rule_ids)}
    priority = sorted(
        ([hi, lo] for hi, lo in instance.rulebook.priority.relation if hi != lo),
        key=lambda pair: (order[pair[0]], order[pair[1]]),
    )
    return {
        "scenarios": [
            {"id": omega, "prob": instance.space.probs[omega]} for omega in instance.space.scenarios
        ],
        "system_trajectories": list(instance.trajectories),
        "environment_trajectories": list(instance.env_trajectories),
        "interaction": {
            traj: {
                omega: instance.interaction.responses[(traj, omega)]
                for omega in instance.space.scenarios
            }
            for traj in instance.trajectories
        },
        "rules": rules,
        "priority": priority,
    }


def serialize_instance(instance: Instance) -> str:
    """Deterministic JSON text for ``instance``; parses back to an equal instance."""
    return json.dumps(instance_to_dict(instance), indent=2) + "\n"


def load_instance(path: str | Path) -> Instance:
    """Read and parse an instance document from a file."""
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def bundled_instance_text(name: str = "av_pedestrian") -> str:
    """Raw JSON text of a bundled demo instance."""
    return resources.files("riskbook").joinpath(f"data/{name}.json").read_text(encoding="utf-8")


def bundled_instance(name: str = "av_pedestrian") -> Instance:
    """A bundled demo instance; the default is the vehicle-versus-pedestrian one."""
    return parse_instance(bundled_instance_text(name))


def with_risk_config(
    instance: Instance,
    rule_id: str,
    *,
    measure: str | None = None,
    alpha: float | None = None,
    threshold: float | None = None,
) -> Instance:
    """Copy of ``instance`` with parts of one rule's risk configuration replaced.

    ``measure`` is a kind name.  Switching to ``var``/``cvar`` keeps the
    current ``alpha`` unless a new one is given; switching away drops it.
    Arguments left as None keep their current value.
    """
    current = instance.config(rule_id)
    kind = measure if measure is not None else current.measure.kind
    if kind == CUSTOM:
        if measure is not None or alpha is not None:
            raise ValidationError("custom measures cannot be configured by name")
        new_measure = current.measure
    elif kind in (VAR, CVAR):
        new_alpha = alpha if alpha is not None else current.measure.alpha
        if new_alpha is None:
            raise ValidationError(f"measure {kind!r} requires alpha")
        try:
            new_measure = RiskMeasure(kind, alpha=new_alpha)
        except InvalidAlpha as exc:
            raise ValidationError(str(exc)) from None
    else:
        if kind not in MEASURE_KINDS:
            raise ValidationError(f"unknown measure kind {kind!r}")
        if alpha is not None:
            raise ValidationError(f"measure {kind!r} does not take alpha")
        new_measure = RiskMeasure(kind)
    new_threshold = threshold if threshold is not None else current.threshold
    configs = dict(instance.risk_configs)
    configs[rule_id] = RiskConfig(new_measure, new_threshold)
    return replace(instance, risk_configs=configs)
