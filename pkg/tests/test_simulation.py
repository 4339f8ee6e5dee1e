import numpy as np
import pytest
from pydantic import ValidationError
from scipy import stats
from scipy.stats import ks_2samp

from delayedgame import Side, SimulationMode, TransformQuery
from delayedgame.game import PathOutcome, exit_indices
from delayedgame.inversion import casualty_pmf
from delayedgame.simulation import (
    NOT_CROSSED,
    MaxObservationsExceeded,
    PathBatch,
    SimConfig,
    batch_sizes,
    child_generator,
    empirical_distributions,
    estimate_functional,
    simulate_batch,
    simulate_outcomes,
    simulate_path,
    simulate_paths,
    win_counts,
)
from delayedgame.transforms import phi_closed, phi_operator
from delayedgame.validation import total_variation, tv_tolerance

from .conftest import make_params

GRID = [
    TransformQuery(u=u, v=v, theta=theta)
    for u in (0.5, 0.8, 1.0)
    for v in (0.5, 0.8, 1.0)
    for theta in (0.0, 0.5, 1.0)
]
FAST_PATHS = 200_000


@pytest.fixture(scope="module")
def reference_run() -> PathBatch:
    return simulate_outcomes(make_params(), SimConfig(n_paths=FAST_PATHS, seed=11))


# streams


def test_child_generators_are_reproducible():
    first = child_generator(3, 0).random(5)
    np.testing.assert_array_equal(first, child_generator(3, 0).random(5))
    assert not np.array_equal(first, child_generator(3, 1).random(5))
    assert not np.array_equal(first, child_generator(4, 0).random(5))


@pytest.mark.parametrize(
    "n_paths, size, expected",
    [(10, 4, [4, 4, 2]), (8, 4, [4, 4]), (3, 65_536, [3])],
)
def test_batch_sizes(n_paths, size, expected):
    assert batch_sizes(n_paths, size) == expected


def test_child_generator_poisson_counts_fit():
    draws = child_generator(8, 2).poisson(3.0, size=100_000)
    observed = np.bincount(np.minimum(draws, 10), minlength=11)
    expected = np.append(stats.poisson.pmf(np.arange(10), 3.0), stats.poisson.sf(9, 3.0))
    assert stats.chisquare(observed, expected * draws.size).pvalue >= 0.001


# single paths


def test_simulate_path_single_casualty(rng):
    params = make_params(m=1, n=1)
    for _ in range(200):
        outcome = simulate_path(params, rng)
        assert outcome.rho >= 1
        assert outcome.a_rho >= 1 or outcome.b_rho >= 1
        assert outcome.a_pre == 0 and outcome.b_pre == 0


@pytest.mark.parametrize("mode", list(SimulationMode))
def test_simulate_path_records_consistent_increments(rng, mode):
    params = make_params()
    for _ in range(100):
        outcome = simulate_path(params, rng, mode=mode, record_increments=True)
        assert outcome.x_increments[0] == 0 and outcome.y_increments[0] == 0
        indices = exit_indices(outcome.x_increments, outcome.y_increments, 3, 4)
        assert indices == (outcome.nu1, outcome.nu2, outcome.rho)
        assert sum(outcome.x_increments[: outcome.rho + 1]) == outcome.a_rho
        assert sum(outcome.y_increments[: outcome.rho]) == outcome.b_pre


def test_simulate_path_large_rate_defeats_b(rng):
    params = make_params(mu=1000.0, m=3, n=1)
    outcomes = [simulate_path(params, rng) for _ in range(2_000)]
    defeated = np.mean([o.b_rho >= 1 for o in outcomes])
    stderr = np.sqrt(defeated * (1 - defeated) / len(outcomes)) + 1e-12
    assert defeated >= 1 - 3 * stderr


def test_simulate_path_observation_limit(rng):
    with pytest.raises(MaxObservationsExceeded):
        simulate_path(make_params(m=500, n=500), rng, max_observations=3)


@pytest.mark.parametrize("mode", list(SimulationMode))
def test_simulate_path_cap_counts_exit_only(rng, mode):
    # B falls at once, A would need thousands of observations
    params = make_params(lam=0.01, mu=100.0, m=50, n=1)
    outcome = simulate_path(params, rng, mode=mode, max_observations=1_000)
    assert outcome.nu1 is None
    assert outcome.nu2 == outcome.rho
    assert outcome.b_defeated and not outcome.a_defeated


# vectorised engine


@pytest.mark.parametrize("mode", list(SimulationMode))
def test_simulate_paths_invariants(rng, mode):
    params = make_params()
    batch = simulate_paths(params, rng, 5_000, mode=mode)
    assert len(batch) == 5_000
    batch.check_invariants(params)
    assert np.all(batch.nu1 >= batch.rho) and np.all(batch.nu2 >= batch.rho)
    outcome = batch.outcome(17)
    assert isinstance(outcome, PathOutcome)
    outcome.check_thresholds(params)


def test_simulate_paths_observation_limit(rng):
    with pytest.raises(MaxObservationsExceeded):
        simulate_paths(make_params(m=500, n=500), rng, 10, max_observations=3)


@pytest.mark.parametrize("mode", list(SimulationMode))
def test_simulate_paths_cap_counts_exit_only(rng, mode):
    params = make_params(lam=0.01, mu=100.0, m=50, n=1)
    batch = simulate_paths(params, rng, 500, mode=mode, max_observations=1_000)
    batch.check_invariants(params)
    assert np.all(batch.nu1 == NOT_CROSSED)
    np.testing.assert_array_equal(batch.nu2, batch.rho)
    assert batch.outcome(0).nu1 is None


def test_simulate_outcomes_cap_counts_exit_only():
    params = make_params(lam=0.01, mu=100.0, m=50, n=1)
    outcomes = simulate_outcomes(params, SimConfig(n_paths=2_000, seed=6, max_observations=1_000))
    counts = win_counts(outcomes)
    assert counts.b_only == 2_000
    restacked = PathBatch.from_outcomes([outcomes.outcome(i) for i in range(10)])
    np.testing.assert_array_equal(restacked.nu1, outcomes.nu1[:10])


def test_vectorised_engine_matches_scalar_engine():
    params = make_params()
    scalar_rng = np.random.default_rng(1)
    scalar = np.array([simulate_path(params, scalar_rng).tau_rho for _ in range(20_000)])
    vectorised = simulate_paths(params, np.random.default_rng(2), 20_000).tau_rho
    assert ks_2samp(scalar, vectorised).pvalue >= 0.01


def test_modes_agree():
    params = make_params()
    interval = simulate_outcomes(params, SimConfig(n_paths=100_000, seed=5))
    event = simulate_outcomes(
        params, SimConfig(n_paths=100_000, seed=5, mode=SimulationMode.EVENT)
    )
    assert ks_2samp(interval.tau_rho, event.tau_rho).pvalue >= 0.01
    stderr = np.sqrt((interval.a_rho.var() + event.a_rho.var()) / 100_000)
    assert abs(interval.a_rho.mean() - event.a_rho.mean()) <= 4 * stderr


# runs


def test_run_is_deterministic():
    params = make_params()
    config = SimConfig(n_paths=5_000, seed=42, batch_size=1_000, query_points=GRID[:3])
    assert simulate_batch(params, config) == simulate_batch(params, config)


def test_run_does_not_depend_on_workers():
    params = make_params()
    config = SimConfig(n_paths=6_000, seed=9, batch_size=1_000)
    serial = simulate_outcomes(params, config)
    parallel = simulate_outcomes(params, config.model_copy(update={"workers": 3}))
    for name in PathBatch.__dataclass_fields__:
        np.testing.assert_array_equal(getattr(serial, name), getattr(parallel, name))


def test_first_batch_is_shared_across_run_sizes():
    params = make_params()
    whole = simulate_outcomes(params, SimConfig(n_paths=2_000, seed=1, batch_size=1_000))
    first = simulate_outcomes(params, SimConfig(n_paths=1_000, seed=1, batch_size=1_000))
    np.testing.assert_array_equal(whole.tau_rho[:1_000], first.tau_rho)


def test_sim_config_aliases_and_extra_keys():
    config = SimConfig.model_validate({"paths": 10, "seed": 1})
    assert config.n_paths == 10
    assert '"paths":10' in config.to_json()
    with pytest.raises(ValidationError):
        SimConfig.model_validate({"paths": 10, "seed": 1, "threads": 2})
    with pytest.raises(ValidationError):
        SimConfig.model_validate({"paths": 0, "seed": 1})


# estimators


def test_functional_at_origin_is_exact(reference_run):
    estimate = estimate_functional(reference_run, TransformQuery())
    assert estimate.mean == 1
    assert estimate.stderr == 0


def test_monte_carlo_concordance(reference_run):
    params = make_params()
    inside = 0
    for query in GRID:
        estimate = estimate_functional(reference_run, query)
        if abs(estimate.mean - phi_closed(params, query)) <= 3.5 * estimate.stderr + 1e-12:
            inside += 1
    assert inside >= 25


def test_complex_query(reference_run):
    params = make_params()
    query = TransformQuery(u=0.6j, v=-0.5, theta=0.2 + 1j)
    estimate = estimate_functional(reference_run, query)
    assert abs(estimate.mean - phi_closed(params, query)) <= 4 * estimate.stderr


def test_tau_marginal_concordance():
    params = make_params(m=2, n=2)
    outcomes = simulate_outcomes(params, SimConfig(n_paths=FAST_PATHS, seed=3))
    query = TransformQuery(theta=0.5)
    estimate = estimate_functional(outcomes, query)
    assert abs(estimate.mean - phi_closed(params, query)) <= 3.5 * estimate.stderr


@pytest.mark.parametrize("params_fixture", ["erlang_params", "deterministic_params"])
def test_operator_path_against_simulation(request, params_fixture):
    params = request.getfixturevalue(params_fixture)
    outcomes = simulate_outcomes(params, SimConfig(n_paths=FAST_PATHS, seed=21))
    for query in (TransformQuery(u=0.8, v=0.5, theta=0.5), TransformQuery(u=0.5, v=1.0, theta=0.0)):
        estimate = estimate_functional(outcomes, query)
        assert abs(estimate.mean - phi_operator(params, query)) <= 4 * estimate.stderr


def test_empirical_pmf_matches_analytic():
    params = make_params(m=2, n=2)
    outcomes = simulate_outcomes(params, SimConfig(n_paths=FAST_PATHS, seed=4))
    pmf_a, pmf_b, _ = empirical_distributions(outcomes)
    assert total_variation(casualty_pmf(params, Side.A), pmf_a) <= tv_tolerance(FAST_PATHS)
    assert total_variation(casualty_pmf(params, Side.B), pmf_b) <= tv_tolerance(FAST_PATHS)


def test_empirical_distributions_single_outcome():
    outcome = PathOutcome(
        nu1=1, nu2=2, rho=1, tau_rho=0.4, a_rho=3, b_rho=0, a_pre=0, b_pre=0, tau_pre=0.0
    )
    pmf_a, pmf_b, histogram = empirical_distributions([outcome])
    assert pmf_a.support == [3] and pmf_a.values == [1.0]
    assert pmf_b.mass(0) == 1.0
    assert histogram.metadata["bin_rule"] == "freedman-diaconis"


def test_empirical_distributions_identical_outcomes():
    outcome = PathOutcome(
        nu1=2, nu2=2, rho=2, tau_rho=1.5, a_rho=4, b_rho=5, a_pre=1, b_pre=2, tau_pre=1.0
    )
    pmf_a, pmf_b, _ = empirical_distributions([outcome] * 10)
    assert pmf_a.stderr == [0.0] and pmf_b.stderr == [0.0]
    assert pmf_a.total_mass == 1.0


def test_empirical_distributions_need_outcomes():
    with pytest.raises(ValueError):
        empirical_distributions([])


def test_histogram_integrates_to_one(reference_run):
    _, _, histogram = empirical_distributions(reference_run)
    widths = histogram.metadata["bin_width"]
    assert sum(histogram.values) * widths == pytest.approx(1.0, rel=1e-9)


def test_win_counts(reference_run):
    counts = win_counts(reference_run)
    assert counts.total == len(reference_run)
    assert counts.both > 0


def test_summary_fields():
    params = make_params()
    config = SimConfig(n_paths=2_000, seed=8, query_points=[TransformQuery(u=0.5)])
    summary = simulate_batch(params, config)
    assert len(summary.functional_estimates) == 1
    assert summary.pmf_a.total_mass == pytest.approx(1.0)
    assert summary.win_counts.total == 2_000
    assert summary.mean_tau > 0


@pytest.mark.slow
def test_monte_carlo_concordance_full_size():
    params = make_params()
    outcomes = simulate_outcomes(params, SimConfig(n_paths=1_000_000, seed=7, workers=4))
    inside = sum(
        abs(estimate.mean - phi_closed(params, estimate.query)) <= 3.5 * estimate.stderr + 1e-12
        for estimate in (estimate_functional(outcomes, q) for q in GRID)
    )
    assert inside >= 25
