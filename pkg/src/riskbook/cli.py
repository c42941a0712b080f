"""Command-line interface.

Subcommands: ``rank``, ``risk``, ``explain``, ``check``.  Every subcommand
reads a JSON instance file, applies any risk-configuration overrides, and
prints a deterministic report (``--json`` for the machine-readable form).
Overrides are scoped: ``--rule ID`` opens a scope and the following
``--measure``/``--alpha``/``--threshold`` flags apply to it, so several
rules can be reconfigured in one invocation.

Exit codes: 0 on success, 1 on validation or evaluation errors, 2 when the
document (or the command line) cannot be parsed.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ParseError, RiskbookError
from .instances import MEASURE_KINDS, load_instance, with_risk_config
from .reports import (
    render_check,
    render_explanation,
    render_rank,
    render_risk_table,
    run_check,
    run_explain,
    run_rank,
    run_risk_table,
)


class _ScopedOverride(argparse.Action):
    """Records override flags in command-line order so --rule can scope them."""

    def __call__(self, parser, namespace, values, option_string=None):
        events = getattr(namespace, "override_events", None)
        if events is None:
            events = []
            namespace.override_events = events
        events.append((self.dest, values))


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("file", help="path to a JSON instance document")
    parser.add_argument("--json", action="store_true", help="emit machine-readable output")
    parser.add_argument(
        "--rule",
        action=_ScopedOverride,
        metavar="ID",
        help="rule whose risk configuration the following override flags modify",
    )
    parser.add_argument(
        "--measure",
        action=_ScopedOverride,
        choices=MEASURE_KINDS,
        help="override the scoped rule's risk measure",
    )
    parser.add_argument(
        "--alpha",
        action=_ScopedOverride,
        type=float,
        metavar="A",
        help="override the scoped rule's quantile level",
    )
    parser.add_argument(
        "--threshold",
        action=_ScopedOverride,
        type=float,
        metavar="T",
        help="override the scoped rule's risk threshold",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riskbook",
        description="Rank candidate system trajectories under rule priorities and scenario risk.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    rank = sub.add_parser("rank", help="risks, verdicts, safety, optimal set, tradeoffs")
    _add_common(rank)

    risk = sub.add_parser("risk", help="risk table for one rule (first --rule selects it)")
    _add_common(risk)

    explain = sub.add_parser("explain", help="head-to-head comparison of two trajectories")
    _add_common(explain)
    explain.add_argument("first", help="first trajectory id")
    explain.add_argument("second", help="second trajectory id")

    check = sub.add_parser("check", help="re-verify instance invariants and ordering laws")
    _add_common(check)

    return parser


def _collect_scopes(events: list[tuple[str, object]]) -> tuple[list[str], dict[str, dict]]:
    """Group override events into per-rule scopes, keeping --rule order."""
    order: list[str] = []
    scopes: dict[str, dict] = {}
    current: str | None = None
    for key, value in events:
        if key == "rule":
            current = str(value)
            if current not in scopes:
                order.append(current)
                scopes[current] = {}
        else:
            if current is None:
                raise _UsageError(f"--{key} must follow a --rule flag naming its scope")
            scopes[current][key] = value
    return order, scopes


class _UsageError(Exception):
    pass


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    events = getattr(args, "override_events", []) or []

    try:
        rule_order, scopes = _collect_scopes(events)
        if args.command == "risk" and not rule_order:
            raise _UsageError("the risk subcommand requires --rule to select a rule")
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2

    try:
        instance = load_instance(args.file)
        for rule_id in rule_order:
            overrides = scopes[rule_id]
            if overrides:
                instance = with_risk_config(
                    instance,
                    rule_id,
                    measure=overrides.get("measure"),
                    alpha=overrides.get("alpha"),
                    threshold=overrides.get("threshold"),
                )

        if args.command == "rank":
            print(render_rank(run_rank(instance), as_json=args.json), end="")
        elif args.command == "risk":
            table = run_risk_table(instance, rule_order[0])
            print(render_risk_table(table, as_json=args.json), end="")
        elif args.command == "explain":
            explanation = run_explain(instance, args.first, args.second)
            print(render_explanation(explanation, as_json=args.json), end="")
        else:
            report = run_check(instance)
            print(render_check(report, as_json=args.json), end="")
            if not report.ok:
                return 1
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cannot read {args.file}: {exc}", file=sys.stderr)
        return 2
    except RiskbookError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
