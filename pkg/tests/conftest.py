import pytest

import riskbook as rb


@pytest.fixture()
def av():
    """The bundled vehicle-versus-pedestrian instance (VaR 0.9 on r1, all thresholds 0)."""
    return rb.bundled_instance()


@pytest.fixture()
def av_worst_case(av):
    """Same instance with worst-case on r1 and threshold 175."""
    return rb.with_risk_config(av, "r1", measure="worst_case", threshold=175.0)


@pytest.fixture()
def av_all_expected(av):
    """Same instance with expected cost on every rule, all thresholds 0."""
    instance = av
    for rule_id in instance.rulebook.rule_ids:
        instance = rb.with_risk_config(instance, rule_id, measure="expected", threshold=0.0)
    return instance
