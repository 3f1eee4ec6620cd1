import math

import pytest

import lerrw


def test_profiles_and_classification():
    p = lerrw.WeightProfile.log_poly(1.0, 1.0, 1.0)
    assert lerrw.classify(p) == "recurrent"
    assert lerrw.classify(lerrw.WeightProfile.log_poly(1.0, 2.0, 1.0)) == "transient"
    assert p.initial_weight(2) == pytest.approx(2 * math.log(2))
    with pytest.raises(lerrw.ConfigError):
        lerrw.WeightProfile.log_poly(0.0, 1.0, -1.0)
    with pytest.raises(ValueError):
        lerrw.WeightProfile.log_poly(0.0, 1.0, -1.0)


def test_special_functions():
    assert lerrw.digamma(1.0) == pytest.approx(-0.5772156649015329, abs=1e-14)
    assert lerrw.trigamma(1.0) == pytest.approx(math.pi**2 / 6, abs=1e-12)
    lo, val, hi = lerrw.digamma_difference_bounds(3.0, 0.5)
    assert lo <= val <= hi
    with pytest.raises(lerrw.DomainError):
        lerrw.digamma(0.0)


def test_path_laws():
    p = lerrw.WeightProfile.log_poly(0.0, 1.0, 1.0)
    assert lerrw.path_probability(p, [0, 1, 0]) == pytest.approx(2 / 3)
    assert lerrw.annealed_path_probability(p, [0, 1, 2]) == pytest.approx(1 / 3)
    law = lerrw.distribution_of_position(p, 2)
    assert law[0] == pytest.approx(2 / 3) and law[2] == pytest.approx(1 / 3)
    with pytest.raises(lerrw.InvalidPathError):
        lerrw.path_probability(p, [0, 2])
    with pytest.raises(lerrw.SizeError):
        lerrw.distribution_of_position(p, 23)


def test_hitting_times():
    t = lerrw.hitting_times([1.0] * 10)
    assert t[:6] == pytest.approx([0, 1, 4, 9, 16, 25])
    assert lerrw.expected_hitting_time([1.0, 2.0], 2) == pytest.approx(3.0)


def test_environment_and_moments():
    p = lerrw.WeightProfile.log_poly(0.5, 1.0, 1.0)
    env = lerrw.sample_environment(p, 50, 7)
    assert len(env["p"]) == 51 and env["S"][0] == 0.0
    st = lerrw.s_statistics(p, 20, 2000, 3, threads=2)
    assert st["mean_S"] == pytest.approx(lerrw.mean_S(p, 20))
    assert abs(st["sample_mean"] - st["mean_S"]) < 5 * st["mean_se"]
    x_n, m_n = lerrw.simulate_max(p, 1000, 1)
    assert x_n <= m_n


def test_run_experiment():
    config = {
        "profile": {"family": "logpoly", "alpha": 0.0, "beta": -1.0, "delta": 1.0},
        "mode": "reinforced-scaling",
        "n_steps": 10000,
        "n_replicas": 4,
        "master_seed": 11,
    }
    csv1, summary = lerrw.run_experiment(config, threads=1)
    csv2, _ = lerrw.run_experiment(config, threads=3)
    assert csv1 == csv2
    assert csv1.startswith("n,quantile,max_position,predictor,ratio")
    assert summary["schema_version"] == 1
    assert summary["final"]["n"] == 10000

    with pytest.raises(lerrw.ConfigError):
        lerrw.run_experiment(dict(config, epsilon=0.0))
