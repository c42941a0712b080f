import dataclasses
import itertools
import random

import pytest

import riskbook as rb
from riskbook import (
    PointwiseCase,
    RiskMeasure,
    Verdict,
    compare_given_scenario,
    compare_trajectories,
    induced_random_cost,
    is_safe,
    is_safe_wrt_rule,
    optimal_set,
    pointwise_case,
    risk_aware_violation,
    risk_of,
    tradeoff_witness,
    tradeoff_witnesses,
)

from instgen import random_instance


def build_instance(probs, envs, interaction, tables, edges, thresholds=None, measure="expected"):
    """Small-instance builder: per-rule tables keyed (trajectory, env)."""
    scenarios = tuple(probs)
    trajectories = tuple(sorted({t for t, _ in interaction}))
    rule_ids = list(tables)
    thresholds = thresholds or {}
    return rb.Instance(
        space=rb.FiniteProbSpace(scenarios, dict(probs)),
        trajectories=trajectories,
        env_trajectories=tuple(envs),
        interaction=rb.InteractionModel(dict(interaction)),
        rulebook=rb.Rulebook(
            tuple(rb.Rule(rid, dict(table)) for rid, table in tables.items()),
            rb.build_preorder(rule_ids, edges),
        ),
        risk_configs={
            rid: rb.RiskConfig(RiskMeasure(measure), thresholds.get(rid, 0.0)) for rid in rule_ids
        },
    )


@pytest.fixture()
def incomparable_rules():
    # Two equally plausible objectives with no declared priority; each
    # trajectory wins one of them outright.
    return build_instance(
        probs={"s1": 0.5, "s2": 0.5},
        envs=("e1", "e2"),
        interaction={
            ("t1", "s1"): "e1",
            ("t1", "s2"): "e1",
            ("t2", "s1"): "e2",
            ("t2", "s2"): "e2",
        },
        tables={
            "rA": {("t1", "e1"): 1.0, ("t1", "e2"): 1.0, ("t2", "e1"): 0.0, ("t2", "e2"): 0.0},
            "rB": {("t1", "e1"): 0.0, ("t1", "e2"): 0.0, ("t2", "e1"): 1.0, ("t2", "e2"): 1.0},
        },
        edges=[],
    )


class TestInducedCost:
    def test_keep_speed_collides_only_in_the_erratic_scenario(self, av):
        cost = induced_random_cost(av, "r1", "tau1")
        assert cost.values == {"w1": 0.0, "w2": 225.0, "w3": 0.0, "w4": 0.0}

    def test_hard_braking_never_collides(self, av):
        cost = induced_random_cost(av, "r1", "tau3")
        assert set(cost.values.values()) == {0.0}

    def test_gentle_braking_always_slows_traffic(self, av):
        cost = induced_random_cost(av, "r3", "tau2")
        assert set(cost.values.values()) == {1.77}

    def test_unknown_ids(self, av):
        with pytest.raises(rb.UnknownRule):
            induced_random_cost(av, "r9", "tau1")
        with pytest.raises(rb.UnknownTrajectory):
            induced_random_cost(av, "r1", "tau9")


class TestRiskOf:
    def test_expected_collision_risk(self, av):
        inst = rb.with_risk_config(av, "r1", measure="expected")
        assert risk_of(inst, "r1", "tau1") == pytest.approx(0.225, abs=1e-9)

    def test_swerving_has_zero_collision_risk_under_any_measure(self, av):
        for measure, alpha in [("expected", None), ("worst_case", None), ("var", 0.9), ("cvar", 0.99)]:
            inst = rb.with_risk_config(av, "r1", measure=measure, alpha=alpha)
            assert risk_of(inst, "r1", "tau4") == 0.0

    def test_worst_case_collision_risk(self, av):
        inst = rb.with_risk_config(av, "r1", measure="worst_case")
        assert risk_of(inst, "r1", "tau2") == 175.0


class TestRiskAwareViolation:
    def test_threshold_boundary_is_forgiven(self, av_worst_case):
        assert risk_aware_violation(av_worst_case, "r1", "tau2") == 0.0

    def test_excess_over_threshold(self, av_worst_case):
        assert risk_aware_violation(av_worst_case, "r1", "tau1") == pytest.approx(50.0, abs=1e-9)

    def test_quantile_below_atom_gives_zero_excess(self, av):
        assert risk_aware_violation(av, "r1", "tau1") == 0.0

    def test_never_negative_and_zero_iff_within_threshold(self):
        rng = random.Random(5)
        for _ in range(50):
            inst = random_instance(rng, max_trajectories=3, max_rules=3)
            for rule_id in inst.rulebook.rule_ids:
                threshold = inst.risk_configs[rule_id].threshold
                for t in inst.trajectories:
                    excess = risk_aware_violation(inst, rule_id, t)
                    assert excess >= 0.0
                    within = risk_of(inst, rule_id, t) <= threshold + 1e-9
                    assert (excess <= 1e-9) == within


class TestSafety:
    def test_braking_is_always_safe_for_collision(self, av):
        for measure, alpha in [("expected", None), ("worst_case", None), ("var", 0.9995), ("cvar", 0.5)]:
            inst = rb.with_risk_config(av, "r1", measure=measure, alpha=alpha)
            assert is_safe_wrt_rule(inst, "r1", "tau3")

    def test_lane_rule_threshold_flips_swerving(self, av):
        assert not is_safe_wrt_rule(av, "r2", "tau4")
        assert is_safe_wrt_rule(rb.with_risk_config(av, "r2", threshold=1.0), "r2", "tau4")

    def test_keep_speed_is_safe_under_loose_quantile(self, av):
        assert is_safe(av, "tau1")
        assert not is_safe(av, "tau2")

    def test_swerving_safe_once_lane_threshold_raised(self, av):
        inst = rb.with_risk_config(av, "r2", threshold=1.0)
        assert is_safe(inst, "tau4")
        assert rb.safe_set(inst) == ["tau1", "tau4"]


class TestCompareTrajectories:
    def test_worst_case_regime_prefers_gentle_braking(self, av_worst_case):
        assert compare_trajectories(av_worst_case, "tau2", "tau1") is Verdict.LOWER

    def test_reflexive(self, av):
        for t in av.trajectories:
            assert compare_trajectories(av, t, t) is Verdict.EQUAL

    def test_tight_quantile_prefers_braking_over_swerving(self, av):
        inst = rb.with_risk_config(av, "r1", measure="var", alpha=0.9995)
        assert compare_trajectories(inst, "tau3", "tau4") is Verdict.LOWER

    def test_equal_rank_rules_do_not_compensate(self):
        inst = build_instance(
            probs={"s1": 1.0},
            envs=("e1", "e2"),
            interaction={("t1", "s1"): "e1", ("t2", "s1"): "e2"},
            tables={
                "rA": {("t1", "e1"): 1.0, ("t1", "e2"): 1.0, ("t2", "e1"): 0.0, ("t2", "e2"): 0.0},
                "rB": {("t1", "e1"): 0.0, ("t1", "e2"): 0.0, ("t2", "e1"): 1.0, ("t2", "e2"): 1.0},
            },
            edges=[("rA", "rB"), ("rB", "rA")],
        )
        assert inst.rulebook.priority.compare("rA", "rB") is Verdict.EQUAL
        assert compare_trajectories(inst, "t1", "t2") is Verdict.INCOMPARABLE


class TestCompareGivenScenario:
    def test_erratic_scenario_favors_gentle_braking(self, av):
        assert compare_given_scenario(av, "tau2", "tau1", "w2") is Verdict.LOWER

    def test_reflexive(self, av):
        assert compare_given_scenario(av, "tau3", "tau3", "w1") is Verdict.EQUAL

    def test_nominal_scenario_favors_keeping_speed(self, av):
        assert compare_given_scenario(av, "tau1", "tau2", "w1") is Verdict.LOWER

    def test_unknown_scenario(self, av):
        with pytest.raises(rb.UnknownScenario):
            compare_given_scenario(av, "tau1", "tau2", "w9")


class TestOptimalSet:
    def test_loose_quantile_regime(self, av):
        assert optimal_set(av) == ["tau1"]

    def test_tight_quantile_regime(self, av):
        inst = rb.with_risk_config(av, "r1", measure="var", alpha=0.9995)
        assert optimal_set(inst) == ["tau3"]
        raised = rb.with_risk_config(inst, "r2", threshold=1.0)
        assert optimal_set(raised) == ["tau4"]

    def test_worst_case_regime(self, av_worst_case):
        assert optimal_set(av_worst_case) == ["tau2"]
        var_variant = rb.with_risk_config(
            av_worst_case, "r1", measure="var", alpha=0.9995, threshold=175.0
        )
        assert optimal_set(var_variant) == ["tau2"]

    def test_incomparable_optima_are_all_reported(self, incomparable_rules):
        assert optimal_set(incomparable_rules) == ["t1", "t2"]


class TestTradeoffWitness:
    def test_flow_disadvantage_compensated_by_collision_rule(self, av_worst_case):
        witness = tradeoff_witness(av_worst_case, "tau2", "tau1", "r3")
        assert witness.compensating_rule == "r1"
        assert witness.witness_scenarios == ("w2",)
        assert witness.witness_probability == pytest.approx(0.001, abs=1e-9)
        priority = av_worst_case.rulebook.priority
        assert priority.compare(witness.compensating_rule, "r3") is not Verdict.LOWER

    def test_exhaustive_variant_starts_with_the_first_witness(self, av_worst_case):
        first = tradeoff_witness(av_worst_case, "tau2", "tau1", "r3")
        everything = tradeoff_witnesses(av_worst_case, "tau2", "tau1", "r3")
        assert everything[0] == first

    def test_same_trajectory_violates_precondition(self, av_worst_case):
        with pytest.raises(rb.PreconditionViolated):
            tradeoff_witness(av_worst_case, "tau2", "tau2", "r3")

    def test_no_improvement_violates_precondition(self, av_worst_case):
        with pytest.raises(rb.PreconditionViolated):
            tradeoff_witness(av_worst_case, "tau2", "tau3", "r1")

    def test_incomparable_rule_can_compensate(self, incomparable_rules):
        witness = tradeoff_witness(incomparable_rules, "t1", "t2", "rA")
        assert witness.compensating_rule == "rB"
        assert witness.witness_probability == pytest.approx(1.0, abs=1e-9)

    def test_no_witness_when_argument_is_not_optimal(self):
        # One rule, one trajectory dominating the other pointwise: the
        # dominated one is not optimal, and no compensation exists.
        inst = build_instance(
            probs={"s1": 0.5, "s2": 0.5},
            envs=("e1",),
            interaction={(t, s): "e1" for t in ("t1", "t2") for s in ("s1", "s2")},
            tables={"rA": {("t1", "e1"): 0.0, ("t2", "e1"): 4.0}},
            edges=[],
        )
        with pytest.raises(rb.NoWitness):
            tradeoff_witness(inst, "t2", "t1", "rA")


class TestPointwiseCase:
    def test_within_threshold_at_the_optimum(self, av_all_expected):
        inst = rb.with_risk_config(av_all_expected, "r1", threshold=0.5)
        assert rb.optimal_set(inst) == ["tau1"]
        analysis = pointwise_case(inst, "tau1", "tau3", "r1", "w2")
        assert analysis.case is PointwiseCase.SAFE_AT_OPTIMUM
        assert analysis.risk_at_optimum == pytest.approx(0.225, abs=1e-9)
        assert analysis.threshold == 0.5
        assert analysis.advantage_probability == pytest.approx(0.001, abs=1e-9)

    def test_zero_probability_advantage(self):
        inst = build_instance(
            probs={"s1": 1.0, "s2": 0.0},
            envs=("e1", "e2"),
            interaction={
                ("star", "s1"): "e1",
                ("star", "s2"): "e2",
                ("chal", "s1"): "e1",
                ("chal", "s2"): "e2",
            },
            tables={
                "rA": {
                    ("star", "e1"): 0.0,
                    ("star", "e2"): 5.0,
                    ("chal", "e1"): 0.0,
                    ("chal", "e2"): 3.0,
                }
            },
            edges=[],
        )
        analysis = pointwise_case(inst, "star", "chal", "rA", "s2")
        assert analysis.case is PointwiseCase.NULL_ADVANTAGE
        assert analysis.advantage_probability == 0.0

    def test_compensated_elsewhere(self, av_all_expected):
        # Braking hard is optimal under expected cost with zero thresholds;
        # keeping speed wins on traffic flow but loses on collisions at w2.
        assert rb.optimal_set(av_all_expected) == ["tau3"]
        analysis = pointwise_case(av_all_expected, "tau3", "tau1", "r3", "w1")
        assert analysis.case is PointwiseCase.COMPENSATED_ELSEWHERE
        assert analysis.witness is not None
        assert analysis.witness.compensating_rule == "r1"
        assert analysis.witness.witness_scenarios == ("w2",)
        assert analysis.witness.witness_probability == pytest.approx(0.001, abs=1e-9)

    def test_compensation_by_incomparable_rule(self, incomparable_rules):
        analysis = pointwise_case(incomparable_rules, "t1", "t2", "rA", "s1")
        assert analysis.case is PointwiseCase.COMPENSATED_ELSEWHERE
        assert analysis.witness.compensating_rule == "rB"

    def test_requires_strictly_monotone_measures(self, av):
        with pytest.raises(rb.AssumptionUnmet):
            pointwise_case(av, "tau1", "tau3", "r1", "w2")

    def test_requires_a_pointwise_advantage(self, av_all_expected):
        inst = rb.with_risk_config(av_all_expected, "r1", threshold=0.5)
        with pytest.raises(rb.PreconditionViolated):
            pointwise_case(inst, "tau1", "tau3", "r1", "w1")

    def test_requires_an_optimal_trajectory(self, av_all_expected):
        with pytest.raises(rb.PreconditionViolated):
            pointwise_case(av_all_expected, "tau2", "tau4", "r3", "w1")


class TestStructuralProperties:
    def test_scale_invariance_of_verdicts(self, av_worst_case):
        for c in (0.5, 3.0, 10.0):
            rule = next(r for r in av_worst_case.rulebook.rules if r.id == "r3")
            new_rule = rb.Rule("r3", {k: c * v for k, v in rule.violations.items()})
            rules = tuple(new_rule if r.id == "r3" else r for r in av_worst_case.rulebook.rules)
            configs = dict(av_worst_case.risk_configs)
            configs["r3"] = rb.RiskConfig(configs["r3"].measure, c * configs["r3"].threshold)
            scaled = dataclasses.replace(
                av_worst_case,
                rulebook=rb.Rulebook(rules, av_worst_case.rulebook.priority),
                risk_configs=configs,
            )
            assert rb.comparison_matrix(scaled) == rb.comparison_matrix(av_worst_case)
            assert optimal_set(scaled) == optimal_set(av_worst_case)
            assert rb.safe_set(scaled) == rb.safe_set(av_worst_case)

    def test_pointwise_dominance_lifts_to_the_preorder(self):
        rng = random.Random(6)
        for _ in range(100):
            inst = random_instance(rng, max_trajectories=4, max_rules=4)
            for a, b in itertools.permutations(inst.trajectories, 2):
                dominates = all(
                    induced_random_cost(inst, rule_id, a).values[w]
                    <= induced_random_cost(inst, rule_id, b).values[w]
                    for rule_id in inst.rulebook.rule_ids
                    for w in inst.space.scenarios
                )
                if dominates:
                    assert compare_trajectories(inst, a, b) in (Verdict.LOWER, Verdict.EQUAL)
