import numpy as np
import pytest

from edgeprice import (ScenarioConfig, SweepSpec, TrialResult, local_only_latency,
                       read_csv, run_sweep, run_trial, sample_scenario,
                       solve_differentiated, solve_uniform, write_csv)
from edgeprice.bench import (CSV_HEADER, SCHEMES, format_csv, load_sweep_spec,
                             trial_seed)
from edgeprice.verify import random_scenario_config

from conftest import (balanced_single_user_scenario, balanced_two_user_scenario,
                      fsum_mean)


def test_local_only_trial_hand_value():
    # 8e5 bits at 1000 cycles/bit on a 1 GHz CPU
    scenario = balanced_single_user_scenario()
    result = run_trial(scenario, "local_only")
    assert result.avg_latency_s == pytest.approx(0.8, rel=1e-12)
    assert result.revenue_s == 0.0


def test_uniform_trial_hand_value():
    result = run_trial(balanced_two_user_scenario(), "uniform")
    assert result.revenue_s == pytest.approx(0.7, rel=1e-9)


def test_unknown_scheme_rejected():
    with pytest.raises(ValueError, match="scheme"):
        run_trial(balanced_single_user_scenario(), "free_lunch")


def test_trial_matches_solvers():
    rng = np.random.default_rng(61)
    for _ in range(20):
        s = sample_scenario(random_scenario_config(rng))
        uni = run_trial(s, "uniform")
        diff = run_trial(s, "differentiated")
        assert uni.revenue_s == solve_uniform(s).revenue_s
        assert diff.revenue_s == solve_differentiated(s).revenue_s
        assert diff.revenue_s >= uni.revenue_s - 1e-12 * (1.0 + uni.revenue_s)
        assert uni.avg_latency_s == pytest.approx(
            fsum_mean(d.latency_s for d in solve_uniform(s).decisions), rel=0)
        local = run_trial(s, "local_only")
        assert local.avg_latency_s == local_only_latency(s)
        assert uni.avg_latency_s <= local.avg_latency_s
        assert diff.avg_latency_s <= local.avg_latency_s


def _spec(**overrides):
    base = dict(sweep_param="capacity_cycles", sweep_values=(2e9, 4e9, 6e9),
                trials=1, base=ScenarioConfig(num_users=4, seed=9))
    base.update(overrides)
    return SweepSpec(**base)


def test_sweep_result_count():
    results = run_sweep(_spec())
    assert len(results) == 9  # 3 points x 1 trial x 3 schemes
    assert [r.scheme for r in results[:3]] == list(SCHEMES)


def test_sweep_validation():
    with pytest.raises(ValueError, match="trials"):
        run_sweep(_spec(trials=0))
    with pytest.raises(ValueError, match="nonempty"):
        run_sweep(_spec(sweep_values=()))
    with pytest.raises(ValueError, match="sweep_param"):
        run_sweep(_spec(sweep_param="alpha"))
    with pytest.raises(ValueError, match="integral"):
        run_sweep(_spec(sweep_param="num_users", sweep_values=(2.5,)))


def test_sweep_deterministic():
    assert run_sweep(_spec(trials=3)) == run_sweep(_spec(trials=3))


def test_capacity_sweep_seeds_are_paired():
    spec = _spec(trials=2)
    assert trial_seed(spec, 0, 1) == trial_seed(spec, 2, 1)
    user_spec = _spec(sweep_param="num_users", sweep_values=(2.0, 4.0), trials=2)
    assert trial_seed(user_spec, 1, 3) == user_spec.base.seed + 10**6 + 3
    assert trial_seed(user_spec, 0, 3) != trial_seed(user_spec, 1, 3)


def test_local_only_identical_across_capacity_points():
    results = run_sweep(_spec(trials=2))
    by_point = {}
    for r in results:
        if r.scheme == "local_only":
            by_point.setdefault(r.sweep_value, []).append(r.avg_latency_s)
    latencies = list(by_point.values())
    assert all(lat == latencies[0] for lat in latencies)


def test_csv_round_trip(tmp_path):
    results = run_sweep(_spec(trials=2))
    path = tmp_path / "sweep.csv"
    write_csv(results, str(path))
    text = path.read_text()
    assert text.splitlines()[0] == CSV_HEADER
    assert len(text.splitlines()) == len(results) + 1
    assert read_csv(str(path)) == results


def test_csv_empty_results(tmp_path):
    path = tmp_path / "empty.csv"
    write_csv([], str(path))
    assert path.read_text() == CSV_HEADER + "\n"
    assert read_csv(str(path)) == []


def test_csv_rejects_foreign_file(tmp_path):
    path = tmp_path / "foreign.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError, match="header"):
        read_csv(str(path))


def test_format_csv_stable_bytes():
    results = [TrialResult(scheme="uniform", sweep_param="capacity_cycles",
                           sweep_value=2e9, seed=7, avg_latency_s=0.7,
                           revenue_s=1.0 / 3.0)]
    assert format_csv(results) == (
        CSV_HEADER + "\n"
        "uniform,capacity_cycles,2000000000,7,"
        "0.69999999999999996,0.33333333333333331\n")


def test_load_sweep_spec(tmp_path):
    path = tmp_path / "sweep.cfg"
    path.write_text(
        "sweep_param = capacity_cycles\n"
        "sweep_values = 2e9, 4e9, 6e9\n"
        "trials = 5\n"
        "num_users = 10\n"
        "seed = 3\n")
    spec = load_sweep_spec(str(path))
    assert spec == SweepSpec(sweep_param="capacity_cycles",
                             sweep_values=(2e9, 4e9, 6e9), trials=5,
                             base=ScenarioConfig(num_users=10, seed=3))


def test_load_sweep_spec_missing_keys(tmp_path):
    path = tmp_path / "incomplete.cfg"
    path.write_text("sweep_param = capacity_cycles\n")
    with pytest.raises(ValueError, match="missing sweep keys"):
        load_sweep_spec(str(path))


def test_load_sweep_spec_unknown_key(tmp_path):
    path = tmp_path / "typo.cfg"
    path.write_text(
        "sweep_param = capacity_cycles\n"
        "sweep_values = 2e9\n"
        "trials = 1\n"
        "bandwith_hz = 1e6\n")
    with pytest.raises(ValueError, match="unknown keys"):
        load_sweep_spec(str(path))
