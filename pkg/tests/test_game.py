import pytest
from pydantic import ValidationError

from delayedgame import DeterministicLaw, ErlangLaw, GameParams
from delayedgame.exceptions import (
    InvalidLawShape,
    NonIntegerThreshold,
    NonPositiveRate,
    ThresholdTooSmall,
)
from delayedgame.game import NoCrossing, PathOutcome, exit_indices, validate_params
from delayedgame.models import _LawBase

RAW = {"lambda": 1.0, "mu": 2.0, "delta_law": {"type": "exponential", "rate": 5.0}, "M": 3, "N": 4}


def test_validate_reference_params():
    params = validate_params(RAW)
    assert params.attack_rate_a == 1.0
    assert params.threshold_b == 4
    assert params.closed_form_capable
    assert params.observation_rate == 5.0


def test_validate_deterministic_law_is_not_closed_form_capable():
    params = validate_params(RAW | {"delta_law": {"type": "deterministic", "d": 0.2}})
    assert isinstance(params.delta_law, DeterministicLaw)
    assert not params.closed_form_capable


def test_validate_erlang_law():
    params = validate_params(RAW | {"delta_law": {"type": "erlang", "shape": 3, "rate": 2.0}})
    assert isinstance(params.delta_law, ErlangLaw)
    assert not params.closed_form_capable


@pytest.mark.parametrize(
    "update, error",
    [
        ({"lambda": -1.0}, NonPositiveRate),
        ({"mu": 0.0}, NonPositiveRate),
        ({"delta_law": {"type": "exponential", "rate": 0.0}}, NonPositiveRate),
        ({"delta_law": {"type": "deterministic", "d": -0.5}}, NonPositiveRate),
        ({"M": 2.5}, NonIntegerThreshold),
        ({"N": 0}, ThresholdTooSmall),
        ({"delta_law": {"type": "erlang", "shape": 1.5, "rate": 1.0}}, InvalidLawShape),
        ({"delta_law": {"type": "erlang", "shape": 0, "rate": 1.0}}, InvalidLawShape),
        ({"lambda": "-1"}, NonPositiveRate),
        ({"mu": "0"}, NonPositiveRate),
        ({"delta_law": {"type": "exponential", "rate": "0"}}, NonPositiveRate),
        ({"delta_law": {"type": "deterministic", "d": "-0.5"}}, NonPositiveRate),
        ({"delta_law": {"type": "erlang", "shape": 2, "rate": "-3"}}, NonPositiveRate),
        ({"M": "0"}, ThresholdTooSmall),
        ({"N": "-2"}, ThresholdTooSmall),
        ({"M": True}, NonIntegerThreshold),
        ({"delta_law": {"type": "erlang", "shape": "0", "rate": 1.0}}, InvalidLawShape),
    ],
)
def test_validate_rejects_rule_violations(update, error):
    with pytest.raises(error):
        validate_params(RAW | update)


def test_validate_rejects_all_string_violations_at_once():
    raw = {
        "lambda": "-1",
        "mu": "2",
        "delta_law": {"type": "exponential", "rate": "0"},
        "M": "0",
        "N": "4",
    }
    with pytest.raises((NonPositiveRate, ThresholdTooSmall)):
        validate_params(raw)


def test_validate_coerces_numeric_strings():
    params = validate_params(RAW | {"lambda": "1.5", "M": "3"})
    assert params.attack_rate_a == 1.5
    assert params.threshold_a == 3


def test_law_base_is_abstract():
    with pytest.raises(TypeError):
        _LawBase()


def test_validate_rejects_unknown_keys():
    with pytest.raises(ValidationError):
        validate_params(RAW | {"gamma": 5.0})


def test_validate_rejects_missing_keys():
    raw = dict(RAW)
    del raw["M"]
    with pytest.raises(ValidationError):
        validate_params(raw)


def test_params_are_hashable_and_round_trip():
    params = validate_params(RAW)
    assert hash(params) == hash(GameParams.from_json(params.to_json()))
    assert GameParams.from_json(params.to_json()) == params


@pytest.mark.parametrize(
    "x, y, m, n, expected",
    [
        ((0, 1, 2), (0, 0, 5), 2, 4, (2, 2, 2)),
        ((0, 0, 3, 0), (0, 2, 0, 0), 3, 2, (2, 1, 1)),
    ],
)
def test_exit_indices(x, y, m, n, expected):
    assert exit_indices(x, y, m, n) == expected


def test_exit_indices_without_crossing():
    with pytest.raises(NoCrossing):
        exit_indices((5,), (0,), 3, 1)


@pytest.mark.parametrize("extra", [(0,), (4, 9), (0, 0, 7)])
def test_exit_indices_ignore_later_increments(extra):
    x, y = [0, 1, 2, 0], [0, 0, 5, 1]
    expected = exit_indices(x, y, 2, 4)
    assert exit_indices(x + list(extra), y + list(extra), 2, 4) == expected


def test_path_outcome_rejects_inconsistent_rho():
    with pytest.raises(ValidationError):
        PathOutcome(
            nu1=2, nu2=3, rho=3, tau_rho=1.0, a_rho=3, b_rho=1, a_pre=1, b_pre=0, tau_pre=0.5
        )


def test_path_outcome_with_uncrossed_threshold():
    outcome = PathOutcome(
        nu1=None, nu2=1, rho=1, tau_rho=0.2, a_rho=0, b_rho=1, a_pre=0, b_pre=0, tau_pre=0.0
    )
    assert outcome.b_defeated and not outcome.a_defeated
    with pytest.raises(ValidationError):
        PathOutcome(**(outcome.model_dump() | {"nu2": None}))


def test_path_outcome_threshold_check(reference_params):
    outcome = PathOutcome(
        nu1=2, nu2=5, rho=2, tau_rho=1.0, a_rho=3, b_rho=1, a_pre=1, b_pre=0, tau_pre=0.5
    )
    outcome.check_thresholds(reference_params)
    assert outcome.a_defeated
    assert not outcome.b_defeated

    early = outcome.model_copy(update={"a_pre": 3})
    with pytest.raises(AssertionError):
        early.check_thresholds(reference_params)
