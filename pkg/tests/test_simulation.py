import math

import numpy as np
import pytest

from contest_eq import (NEVER_SUBMIT, Normal, RejectionExclusion,
                        SignalExclusion, SimConfig, TypeMix,
                        empirical_best_response, normal_model, run_simulation,
                        solve_multi_period, solve_signal_cutoff,
                        solve_two_type, trend_statistic)

# medium-size runs keep this module fast; the full-scale cross-validation
# lives in the acceptance suite
N_AGENTS = 20_000
N_PERIODS = 400
BURN_IN = 100


@pytest.fixture(scope="module")
def v50_sim(model_v50, v50_exclusion):
    out = v50_exclusion
    cfg = SimConfig(seed=42, policy=RejectionExclusion(1),
                    cutoffs=(out.cutoff,), n_agents=N_AGENTS,
                    n_periods=N_PERIODS, burn_in=BURN_IN,
                    initial_eligibility=out.eligibility)
    return cfg, run_simulation(cfg, model_v50)


def test_simulation_is_deterministic(model_v50, v50_sim):
    cfg, res = v50_sim
    again = run_simulation(cfg, model_v50)
    assert np.array_equal(res.eligibility_trajectory,
                          again.eligibility_trajectory)
    assert np.array_equal(res.winner_hist_density, again.winner_hist_density)
    assert res.mean_welfare_per_period == again.mean_welfare_per_period


def test_nobody_submits_with_infinite_cutoff(model_v50):
    cfg = SimConfig(seed=3, policy=RejectionExclusion(1),
                    cutoffs=(NEVER_SUBMIT,), n_agents=2000, n_periods=50,
                    burn_in=10)
    res = run_simulation(cfg, model_v50)
    assert np.all(res.eligibility_trajectory == 1.0)
    assert res.mean_volume == 0.0
    assert res.mean_welfare_per_period == 0.0


def test_budget_feasibility_every_period(model_v50, v50_sim):
    cfg, res = v50_sim
    slots = math.floor(model_v50.budget * cfg.n_agents)
    funded_counts = np.round(res.funded_trajectory * cfg.n_agents).astype(int)
    sub_counts = np.round(res.volume_trajectory * cfg.n_agents).astype(int)
    assert np.all(funded_counts <= slots)
    over = sub_counts > slots
    assert np.all(funded_counts[over] == slots)


def test_eligibility_tracks_analytic_steady_state(model_v50, v50_exclusion,
                                                  v50_sim):
    _, res = v50_sim
    assert abs(res.mean_eligibility[0] - v50_exclusion.eligibility[0]) < 0.01
    assert abs(res.mean_volume - v50_exclusion.submission_volume) < 0.01
    assert abs(res.mean_welfare_per_period - v50_exclusion.welfare) < 0.05


def test_stationarity_when_seeded_at_steady_state(v50_sim):
    cfg, res = v50_sim
    z = trend_statistic(res.eligibility_trajectory[cfg.burn_in:])
    assert abs(z) < 2.576  # 1% two-sided critical value


def test_winner_histogram_integrates_to_funded_volume(v50_sim):
    _, res = v50_sim
    width = res.winner_hist_edges[1] - res.winner_hist_edges[0]
    assert abs(res.winner_hist_density.sum() * width
               - res.mean_funded_volume) < 1e-12


def test_multi_period_eligibility(model_v20):
    out = solve_multi_period(model_v20, 50)
    cfg = SimConfig(seed=11, policy=RejectionExclusion(50),
                    cutoffs=(out.cutoff,), n_agents=N_AGENTS,
                    n_periods=N_PERIODS, burn_in=200,
                    initial_eligibility=out.eligibility)
    res = run_simulation(cfg, model_v20)
    assert abs(res.mean_eligibility[0] - out.eligibility[0]) < 0.02


def test_signal_policy_eligibility(model_v50):
    out = solve_signal_cutoff(model_v50, 2.0)
    cfg = SimConfig(seed=5, policy=SignalExclusion(2.0),
                    cutoffs=(out.cutoff,), n_agents=N_AGENTS,
                    n_periods=N_PERIODS, burn_in=BURN_IN,
                    initial_eligibility=out.eligibility)
    res = run_simulation(cfg, model_v50)
    assert abs(res.mean_eligibility[0] - out.eligibility[0]) < 0.01


def test_two_type_eligibility_tracking():
    types = (TypeMix(0.5, Normal(0.5, 2.0)), TypeMix(0.5, Normal(0.0, 2.0)))
    p = normal_model(var_signal=5.0, reject_cost=1.0, win_value=50.0,
                     budget=0.1, discount=0.97, types=types)
    out = solve_two_type(p)
    cfg = SimConfig(seed=9, policy=RejectionExclusion(1), cutoffs=out.cutoffs,
                    n_agents=N_AGENTS, n_periods=N_PERIODS, burn_in=BURN_IN,
                    initial_eligibility=out.eligibility)
    res = run_simulation(cfg, p)
    assert abs(res.mean_eligibility[0] - out.eligibility[0]) < 0.01
    assert abs(res.mean_eligibility[1] - out.eligibility[1]) < 0.01


def test_empirical_best_response_argmax_near_analytic(model_v50,
                                                      v50_exclusion,
                                                      v50_sim):
    cfg, res = v50_sim
    q1 = v50_exclusion.cutoff
    grid = q1 + np.arange(-5, 6) * 0.1
    best, _ = empirical_best_response(cfg, model_v50, grid, result=res,
                                      replications=4000)
    assert abs(best - q1) <= 0.1 + 1e-12


def test_empirical_best_response_free_entry(model_v50):
    from contest_eq import NoExclusion, solve_benchmark
    q0 = solve_benchmark(model_v50).cutoff
    cfg = SimConfig(seed=7, policy=NoExclusion(), cutoffs=(q0,),
                    n_agents=50_000, n_periods=500, burn_in=100)
    res = run_simulation(cfg, model_v50)
    grid = q0 + np.arange(-20, 21) * 0.05
    best, _ = empirical_best_response(cfg, model_v50, grid, result=res,
                                      replications=8000)
    assert abs(best - q0) <= 0.05 + 1e-12


def test_empirical_best_response_undersubscribed_prefers_entry(model_v50):
    # with everyone priced out the budget is never binding, so the deviator
    # should submit as much as possible
    p = model_v50
    cfg = SimConfig(seed=8, policy=RejectionExclusion(1),
                    cutoffs=(p.first_best_cutoff + 1.0,), n_agents=5000,
                    n_periods=200, burn_in=50)
    res = run_simulation(cfg, p)
    grid = np.linspace(-1.0, 1.0, 11)
    best, payoffs = empirical_best_response(cfg, p, grid, result=res,
                                            replications=2000)
    assert best == grid[0]
    assert np.all(np.diff(payoffs) <= 1e-9)


def test_config_validation():
    with pytest.raises(ValueError):
        SimConfig(seed=1, n_agents=10)
    with pytest.raises(ValueError):
        SimConfig(seed=1, n_periods=100, burn_in=100)
