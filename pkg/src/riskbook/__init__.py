"""Rank candidate system trajectories under rule priorities and scenario risk.

The package evaluates rule violations over finite scenario spaces, assesses
each rule's induced cost with a configurable risk measure and threshold,
orders trajectories by the resulting excess-risk profiles, and explains
every verdict with explicit, positive-probability tradeoff witnesses.
"""

from .errors import (
    AssumptionUnmet,
    DomainMismatch,
    DuplicateElement,
    EmptySupport,
    InvalidAlpha,
    NoWitness,
    ParseError,
    PreconditionViolated,
    RiskbookError,
    UnknownElement,
    UnknownRealization,
    UnknownRule,
    UnknownScenario,
    UnknownTrajectory,
    ValidationError,
)
from .instances import (
    bundled_instance,
    bundled_instance_text,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    parse_instance,
    serialize_instance,
    with_risk_config,
)
from .preorder import Preorder, Verdict, build_preorder
from .probspace import FiniteProbSpace, RandomCost, distribution, exceedance_prob, expectation
from .reports import (
    CheckReport,
    Explanation,
    RankingReport,
    RiskTable,
    run_check,
    run_explain,
    run_rank,
    run_risk_table,
)
from .risk import RiskMeasure, assess, is_strictly_monotone_class, spot_check_monotonicity
from .riskaware import (
    Instance,
    InteractionModel,
    PointwiseAnalysis,
    PointwiseCase,
    RiskConfig,
    TradeoffWitness,
    compare_given_scenario,
    compare_trajectories,
    comparison_matrix,
    induced_random_cost,
    is_safe,
    is_safe_wrt_rule,
    no_riskier_than,
    optimal_set,
    pointwise_case,
    risk_aware_profile,
    risk_aware_violation,
    risk_of,
    safe_set,
    tradeoff_witness,
    tradeoff_witnesses,
)
from .rulebook import Realization, Rule, Rulebook, at_most_as_bad, compare_realizations, violation
from .tolerance import TOL

__version__ = "0.1.0"
