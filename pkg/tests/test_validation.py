import numpy as np
import pytest

from delayedgame.enums import DistributionKind, Provenance
from delayedgame.exceptions import NotClosedFormCapable, QueryDomainError
from delayedgame.inversion import DistributionTable
from delayedgame.validation import (
    CHECKS,
    CheckResult,
    ks_critical_value,
    ks_statistic,
    pooled_counts,
    random_params,
    results_frame,
    run_acceptance_suite,
    total_variation,
    tv_tolerance,
)

ANALYTIC_CHECKS = [
    "normalization",
    "phi_dual_path",
    "series_closed_forms",
    "marginal_identities",
    "inversion_exact_vs_numeric",
    "tau_pdf_normalization",
    "tau_pdf_numeric",
]
STATISTICAL_CHECKS = [
    "mc_concordance",
    "simulation_determinism",
    "tau_ks",
    "casualty_pmfs",
    "defeat_probabilities",
    "mode_equivalence",
]


# distances


def test_total_variation_arrays():
    assert total_variation([0.5, 0.5], [1.0]) == pytest.approx(0.5)
    assert total_variation([0.2, 0.3, 0.5], [0.2, 0.3, 0.5]) == 0


def test_total_variation_tables():
    table = DistributionTable(
        kind=DistributionKind.PMF,
        provenance=Provenance.EMPIRICAL,
        support=[1, 2],
        values=[0.5, 0.5],
    )
    assert total_variation(table, [0.0, 1.0]) == pytest.approx(0.5)


def test_ks_statistic(rng):
    samples = rng.uniform(size=10_000)
    assert ks_statistic(samples, lambda t: np.clip(t, 0, 1)) < ks_critical_value(10_000)
    assert ks_statistic(samples, lambda t: np.clip(t, 0, 1) ** 2) > 0.2


def test_tolerances_scale_with_sample_size():
    assert ks_critical_value(10_000) == pytest.approx(0.0163)
    assert tv_tolerance(1_000_000) == pytest.approx(0.005)
    assert tv_tolerance(10_000) == pytest.approx(0.025)


def test_pooled_counts(rng):
    first = rng.poisson(3.0, size=2_000)
    second = rng.poisson(3.0, size=1_000)
    table = pooled_counts(first, second)
    assert table.shape[0] == 2
    assert table[0].sum() == 2_000 and table[1].sum() == 1_000
    expected = table.sum(axis=0) * (1_000 / 3_000)
    assert expected.min() >= 5


def test_random_params_are_closed_form_capable(rng):
    for _ in range(20):
        params = random_params(rng, max_threshold=8)
        assert params.closed_form_capable
        assert 1 <= params.threshold_a <= 8


# suite


def test_checks_are_registered_in_order():
    assert list(CHECKS)[:2] == ["normalization", "phi_dual_path"]
    assert set(ANALYTIC_CHECKS + STATISTICAL_CHECKS) == set(CHECKS)


def test_results_frame():
    results = [
        CheckResult(name="a", passed=np.bool_(True), value=1e-13, threshold=1e-12),
        CheckResult(name="b", passed=False, detail="boom"),
    ]
    frame = results_frame(results)
    assert frame["name"].to_list() == ["a", "b"]
    assert frame["passed"].to_list() == [True, False]
    assert frame["value"].to_list() == [1e-13, None]


def test_suite_requires_exponential_observations(deterministic_params):
    with pytest.raises(NotClosedFormCapable):
        run_acceptance_suite(deterministic_params, n_paths=100)


def test_analytic_checks_pass(reference_params):
    results = run_acceptance_suite(reference_params, n_paths=1_000, seed=7, only=ANALYTIC_CHECKS)
    assert [r.name for r in results] == [n for n in CHECKS if n in ANALYTIC_CHECKS]
    failed = [r for r in results if not r.passed]
    assert not failed, failed


def test_statistical_checks_pass(reference_params):
    results = run_acceptance_suite(
        reference_params, n_paths=100_000, seed=7, only=STATISTICAL_CHECKS
    )
    failed = [r for r in results if not r.passed]
    assert not failed, failed


def test_failing_check_is_reported_not_raised(reference_params, monkeypatch):
    def broken(ctx):
        raise QueryDomainError("outside the domain")

    monkeypatch.setitem(CHECKS, "broken", broken)
    (result,) = run_acceptance_suite(reference_params, n_paths=100, only=["broken"])
    assert not result.passed
    assert "QueryDomainError" in result.detail


def test_corrupted_psi_is_detected(reference_params, monkeypatch):
    from delayedgame.transforms import main as transforms_main

    original = transforms_main._psi

    def corrupted(a, b, c_big, m, n):
        return transforms_main.d_op_geometric(m - 1, b) + c_big**n * transforms_main.d_op_product(
            m - 1, a, b, n
        )

    assert corrupted(0.1, 0.2, 0.3, 3, 4) != original(0.1, 0.2, 0.3, 3, 4)
    monkeypatch.setattr(transforms_main, "_psi", corrupted)
    (result,) = run_acceptance_suite(reference_params, n_paths=100, only=["phi_dual_path"])
    assert result.name == "phi_dual_path"
    assert not result.passed


@pytest.mark.slow
def test_full_suite_passes(reference_params):
    results = run_acceptance_suite(reference_params, n_paths=1_000_000, seed=7, workers=4)
    failed = [r for r in results if not r.passed]
    assert not failed, failed
