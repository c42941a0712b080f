"""Risk-aware evaluation of system trajectories under scenario uncertainty.

The environment's response to a system trajectory depends on a latent
scenario drawn from a finite probability space.  Fixing a rule and a system
trajectory therefore induces a random cost over scenarios; each rule assesses
that cost with its own risk measure and forgives anything up to its
threshold.  The resulting per-trajectory excess-risk profiles are compared
with the same compensation principle used for realizations, which yields a
preorder over trajectories, a notion of safety (zero excess everywhere), and
optimality (no strictly less risky alternative).

Any advantage a challenger shows over an optimal trajectory is backed by an
explicit tradeoff: some rule that is not lower in priority penalizes the
challenger more on a scenario set of positive probability.  The witness
operations in this module extract those justifications.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping

from .errors import (
    AssumptionUnmet,
    NoWitness,
    PreconditionViolated,
    UnknownRule,
    UnknownScenario,
    UnknownTrajectory,
    ValidationError,
)
from .preorder import Verdict
from .probspace import FiniteProbSpace, RandomCost, exceedance_prob
from .risk import RiskMeasure, assess, is_strictly_monotone_class
from .rulebook import Realization, Rulebook, at_most_as_bad, compare_realizations
from .tolerance import gt, le, lt


@dataclass(frozen=True)
class InteractionModel:
    """Environment response for every (system trajectory, scenario) pair."""

    responses: Mapping[tuple[str, str], str]

    def response(self, trajectory: str, scenario: str) -> str:
        try:
            return self.responses[(trajectory, scenario)]
        except KeyError:
            raise UnknownScenario(
                f"no interaction entry for trajectory {trajectory!r} under scenario {scenario!r}"
            ) from None


@dataclass(frozen=True)
class RiskConfig:
    """A rule's risk measure together with its tolerated risk threshold."""

    measure: RiskMeasure
    threshold: float

    def __post_init__(self) -> None:
        if not self.threshold >= 0:
            raise ValidationError(f"threshold must be nonnegative, got {self.threshold!r}")


@dataclass(frozen=True)
class Instance:
    """A complete evaluation problem.

    Bundles the scenario space, the candidate system trajectories, the
    possible environment trajectories, the interaction model, the rulebook,
    and one :class:`RiskConfig` per rule.  Construction validates totality
    of all tables; instances are immutable afterwards.
    """

    space: FiniteProbSpace
    trajectories: tuple[str, ...]
    env_trajectories: tuple[str, ...]
    interaction: InteractionModel
    rulebook: Rulebook
    risk_configs: Mapping[str, RiskConfig]

    def __post_init__(self) -> None:
        if len(set(self.trajectories)) != len(self.trajectories):
            raise ValidationError("system trajectory identifiers are not unique")
        if len(set(self.env_trajectories)) != len(self.env_trajectories):
            raise ValidationError("environment trajectory identifiers are not unique")

        env_ids = set(self.env_trajectories)
        expected_keys = {(t, w) for t in self.trajectories for w in self.space.scenarios}
        actual_keys = set(self.interaction.responses)
        missing = sorted(expected_keys - actual_keys)
        if missing:
            raise ValidationError(f"interaction is missing an entry for {missing[0]!r}")
        undeclared = sorted(actual_keys - expected_keys)
        if undeclared:
            raise ValidationError(f"interaction has an entry for undeclared pair {undeclared[0]!r}")
        for key in sorted(expected_keys):
            if self.interaction.responses[key] not in env_ids:
                raise ValidationError(
                    f"interaction maps {key!r} to undeclared environment trajectory "
                    f"{self.interaction.responses[key]!r}"
                )

        grid = {(t, e) for t in self.trajectories for e in self.env_trajectories}
        for rule in self.rulebook.rules:
            table_keys = set(rule.violations)
            missing = sorted(grid - table_keys)
            if missing:
                raise ValidationError(
                    f"rule {rule.id!r} is missing a violation entry for {missing[0]!r}"
                )
            undeclared = sorted(table_keys - grid)
            if undeclared:
                raise ValidationError(f"rule {rule.id!r} scores undeclared pair {undeclared[0]!r}")

        config_ids = set(self.risk_configs)
        rule_ids = set(self.rulebook.rule_ids)
        unconfigured = sorted(rule_ids - config_ids)
        if unconfigured:
            raise ValidationError(f"rule {unconfigured[0]!r} has no risk configuration")
        extra = sorted(config_ids - rule_ids)
        if extra:
            raise ValidationError(f"risk configuration given for unknown rule {extra[0]!r}")

    def require_trajectory(self, trajectory: str) -> None:
        if trajectory not in self.trajectories:
            raise UnknownTrajectory(f"unknown system trajectory {trajectory!r}")

    def require_rule(self, rule_id: str) -> None:
        if rule_id not in self.rulebook.rule_ids:
            raise UnknownRule(f"unknown rule {rule_id!r}")

    def require_scenario(self, scenario: str) -> None:
        if scenario not in self.space.scenarios:
            raise UnknownScenario(f"unknown scenario {scenario!r}")

    def config(self, rule_id: str) -> RiskConfig:
        self.require_rule(rule_id)
        return self.risk_configs[rule_id]


def induced_random_cost(instance: Instance, rule_id: str, trajectory: str) -> RandomCost:
    """Scenario-indexed violation of ``rule_id`` when ``trajectory`` is driven."""
    instance.require_rule(rule_id)
    instance.require_trajectory(trajectory)
    rule = instance.rulebook.rule(rule_id)
    return RandomCost(
        {
            omega: rule.violation(Realization(trajectory, instance.interaction.response(trajectory, omega)))
            for omega in instance.space.scenarios
        }
    )


def risk_of(instance: Instance, rule_id: str, trajectory: str) -> float:
    """Assessed risk of the induced cost under the rule's configured measure."""
    config = instance.config(rule_id)
    return assess(config.measure, instance.space, induced_random_cost(instance, rule_id, trajectory))


def risk_aware_violation(instance: Instance, rule_id: str, trajectory: str) -> float:
    """Excess of the rule's risk over its threshold, floored at zero."""
    config = instance.config(rule_id)
    return max(risk_of(instance, rule_id, trajectory) - config.threshold, 0.0)


def is_safe_wrt_rule(instance: Instance, rule_id: str, trajectory: str) -> bool:
    """Whether the trajectory's risk stays within the rule's threshold."""
    return le(risk_aware_violation(instance, rule_id, trajectory), 0.0)


def is_safe(instance: Instance, trajectory: str) -> bool:
    """Whether the trajectory is within threshold for every rule."""
    instance.require_trajectory(trajectory)
    return all(is_safe_wrt_rule(instance, rule_id, trajectory) for rule_id in instance.rulebook.rule_ids)


def safe_set(instance: Instance) -> list[str]:
    """All safe trajectories, in declaration order."""
    return [t for t in instance.trajectories if is_safe(instance, t)]


def risk_aware_profile(instance: Instance, trajectory: str) -> dict[str, float]:
    """Excess-risk value for every rule, keyed by rule id."""
    instance.require_trajectory(trajectory)
    return {
        rule_id: risk_aware_violation(instance, rule_id, trajectory)
        for rule_id in instance.rulebook.rule_ids
    }


def _profiles(instance: Instance) -> dict[str, dict[str, float]]:
    # One pass over (rule, trajectory); every pairwise comparison reuses it.
    return {t: risk_aware_profile(instance, t) for t in instance.trajectories}


def no_riskier_than(instance: Instance, trajectory: str, other: str) -> bool:
    """One direction of the trajectory preorder: ``trajectory`` is at most as
    risky as ``other``."""
    instance.require_trajectory(trajectory)
    instance.require_trajectory(other)
    return at_most_as_bad(
        instance.rulebook.priority,
        risk_aware_profile(instance, trajectory),
        risk_aware_profile(instance, other),
    )


def compare_trajectories(instance: Instance, trajectory: str, other: str) -> Verdict:
    """Four-way comparison of two trajectories by their excess-risk profiles.

    ``LOWER`` means the first trajectory is strictly less risky.
    """
    instance.require_trajectory(trajectory)
    instance.require_trajectory(other)
    pa = risk_aware_profile(instance, trajectory)
    pb = risk_aware_profile(instance, other)
    priority = instance.rulebook.priority
    a_at_most_b = at_most_as_bad(priority, pa, pb)
    b_at_most_a = at_most_as_bad(priority, pb, pa)
    return Verdict.from_directions(forward=b_at_most_a, backward=a_at_most_b)


def compare_given_scenario(instance: Instance, trajectory: str, other: str, scenario: str) -> Verdict:
    """Comparison of two trajectories when the scenario is already known.

    Delegates to the realization-level comparison on the environment
    responses the scenario induces.
    """
    instance.require_trajectory(trajectory)
    instance.require_trajectory(other)
    instance.require_scenario(scenario)
    x = Realization(trajectory, instance.interaction.response(trajectory, scenario))
    y = Realization(other, instance.interaction.response(other, scenario))
    return compare_realizations(instance.rulebook, x, y)


def comparison_matrix(
    instance: Instance,
    profiles: Mapping[str, Mapping[str, float]] | None = None,
) -> dict[tuple[str, str], Verdict]:
    """Pairwise trajectory verdicts, computed from one shared profile pass.

    ``profiles`` may carry already-computed excess-risk profiles to avoid
    reassessing them; the result is identical either way.
    """
    if profiles is None:
        profiles = _profiles(instance)
    priority = instance.rulebook.priority
    leq = {
        (a, b): at_most_as_bad(priority, profiles[a], profiles[b])
        for a in instance.trajectories
        for b in instance.trajectories
    }
    return {
        (a, b): Verdict.from_directions(forward=leq[(b, a)], backward=leq[(a, b)])
        for a in instance.trajectories
        for b in instance.trajectories
    }


def optimal_set(instance: Instance) -> list[str]:
    """Trajectories with no strictly less risky competitor, in declaration order."""
    matrix = comparison_matrix(instance)
    return [
        t
        for t in instance.trajectories
        if not any(matrix[(o, t)] is Verdict.LOWER for o in instance.trajectories)
    ]


@dataclass(frozen=True)
class TradeoffWitness:
    """Evidence that an apparent improvement is compensated elsewhere.

    ``compensating_rule`` is not strictly lower in priority than
    ``improving_rule``, and on ``witness_scenarios`` (total probability
    ``witness_probability`` > 0) the challenger's induced cost under the
    compensating rule strictly exceeds the optimal trajectory's.
    """

    improving_rule: str
    compensating_rule: str
    witness_scenarios: tuple[str, ...]
    witness_probability: float


def _witness_scan(
    instance: Instance,
    optimal_trajectory: str,
    challenger: str,
    improving_rule: str,
) -> list[TradeoffWitness]:
    priority = instance.rulebook.priority
    found = []
    for rule_id in instance.rulebook.rule_ids:
        if priority.compare(rule_id, improving_rule) is Verdict.LOWER:
            continue
        cost_challenger = induced_random_cost(instance, rule_id, challenger)
        cost_optimal = induced_random_cost(instance, rule_id, optimal_trajectory)
        scenarios = tuple(
            omega
            for omega in instance.space.scenarios
            if instance.space.probs[omega] > 0
            and gt(cost_challenger.values[omega], cost_optimal.values[omega])
        )
        if scenarios:
            probability = sum(instance.space.probs[omega] for omega in scenarios)
            found.append(TradeoffWitness(improving_rule, rule_id, scenarios, probability))
    return found


def _check_improvement(instance: Instance, optimal_trajectory: str, challenger: str, improving_rule: str) -> None:
    instance.require_rule(improving_rule)
    instance.require_trajectory(optimal_trajectory)
    instance.require_trajectory(challenger)
    v_challenger = risk_aware_violation(instance, improving_rule, challenger)
    v_optimal = risk_aware_violation(instance, improving_rule, optimal_trajectory)
    if not lt(v_challenger, v_optimal):
        raise PreconditionViolated(
            f"trajectory {challenger!r} does not strictly improve on {optimal_trajectory!r} "
            f"under rule {improving_rule!r} ({v_challenger!r} vs {v_optimal!r})"
        )


def tradeoff_witness(
    instance: Instance,
    optimal_trajectory: str,
    challenger: str,
    improving_rule: str,
) -> TradeoffWitness:
    """First compensating rule, in declaration order, for a strict improvement.

    Requires the challenger's excess risk under ``improving_rule`` to be
    strictly below the optimal trajectory's.  When ``optimal_trajectory``
    really is optimal and every configured measure is monotone, a witness
    always exists; :class:`NoWitness` therefore signals that one of those
    hypotheses fails.
    """
    _check_improvement(instance, optimal_trajectory, challenger, improving_rule)
    found = _witness_scan(instance, optimal_trajectory, challenger, improving_rule)
    if not found:
        raise NoWitness(
            f"no compensating rule found for {challenger!r} improving on {optimal_trajectory!r} "
            f"under {improving_rule!r}; the trajectory is not optimal or a configured measure "
            f"is not monotone"
        )
    return found[0]


def tradeoff_witnesses(
    instance: Instance,
    optimal_trajectory: str,
    challenger: str,
    improving_rule: str,
) -> list[TradeoffWitness]:
    """Every compensating rule with its scenario set, in declaration order."""
    _check_improvement(instance, optimal_trajectory, challenger, improving_rule)
    return _witness_scan(instance, optimal_trajectory, challenger, improving_rule)


class PointwiseCase(Enum):
    """Why a single-scenario advantage over an optimal trajectory is not a win."""

    NULL_ADVANTAGE = "null_advantage"
    SAFE_AT_OPTIMUM = "safe_at_optimum"
    COMPENSATED_ELSEWHERE = "compensated_elsewhere"


@dataclass(frozen=True)
class PointwiseAnalysis:
    """Classification of a pointwise advantage, with its supporting data.

    ``advantage_probability`` is the probability of the scenario set where
    the challenger's cost under the rule is strictly smaller.  For
    ``SAFE_AT_OPTIMUM`` the risk/threshold pair is filled in; for
    ``COMPENSATED_ELSEWHERE`` the witness is.
    """

    case: PointwiseCase
    improving_rule: str
    advantage_probability: float
    risk_at_optimum: float | None = None
    threshold: float | None = None
    witness: TradeoffWitness | None = None


def pointwise_case(
    instance: Instance,
    optimal_trajectory: str,
    challenger: str,
    rule_id: str,
    scenario: str,
) -> PointwiseAnalysis:
    """Explain a challenger's single-scenario advantage over an optimal trajectory.

    Requires every configured measure to be in the strictly monotone class
    (:class:`AssumptionUnmet` otherwise), the challenger's induced cost under
    ``rule_id`` to be strictly smaller at ``scenario``, and
    ``optimal_trajectory`` to be optimal.  Returns the first applicable case:
    the advantage set has probability zero; the optimal trajectory is already
    within the rule's threshold; or a not-lower-priority rule penalizes the
    challenger more with positive probability.
    """
    instance.require_rule(rule_id)
    instance.require_trajectory(optimal_trajectory)
    instance.require_trajectory(challenger)
    instance.require_scenario(scenario)

    for other_rule in instance.rulebook.rule_ids:
        measure = instance.risk_configs[other_rule].measure
        if not is_strictly_monotone_class(measure):
            raise AssumptionUnmet(
                f"rule {other_rule!r} uses measure {measure.describe()!r}, which is not in the "
                f"strictly monotone class; the pointwise analysis is unsound without it"
            )

    cost_challenger = induced_random_cost(instance, rule_id, challenger)
    cost_optimal = induced_random_cost(instance, rule_id, optimal_trajectory)
    if not lt(cost_challenger.values[scenario], cost_optimal.values[scenario]):
        raise PreconditionViolated(
            f"trajectory {challenger!r} is not strictly better than {optimal_trajectory!r} "
            f"under rule {rule_id!r} at scenario {scenario!r}"
        )
    if optimal_trajectory not in optimal_set(instance):
        raise PreconditionViolated(f"trajectory {optimal_trajectory!r} is not optimal")

    advantage_probability = exceedance_prob(instance.space, cost_challenger, cost_optimal, "<")
    if advantage_probability == 0.0:
        return PointwiseAnalysis(PointwiseCase.NULL_ADVANTAGE, rule_id, advantage_probability)

    config = instance.risk_configs[rule_id]
    risk_optimal = risk_of(instance, rule_id, optimal_trajectory)
    if le(risk_optimal, config.threshold):
        return PointwiseAnalysis(
            PointwiseCase.SAFE_AT_OPTIMUM,
            rule_id,
            advantage_probability,
            risk_at_optimum=risk_optimal,
            threshold=config.threshold,
        )

    found = _witness_scan(instance, optimal_trajectory, challenger, rule_id)
    if not found:
        raise NoWitness(
            f"no compensating rule found for the advantage of {challenger!r} over "
            f"{optimal_trajectory!r} under {rule_id!r}"
        )
    return PointwiseAnalysis(
        PointwiseCase.COMPENSATED_ELSEWHERE,
        rule_id,
        advantage_probability,
        witness=found[0],
    )
