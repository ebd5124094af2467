import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import mpdp


def two_state_cycle(T=3):
    # Action 0 stays, action 1 switches; reward 1 for sitting in state 1.
    kernels = np.zeros((T + 1, 2, 2, 2))
    kernels[:, 0, 0, 0] = kernels[:, 1, 0, 1] = 1.0
    kernels[:, 0, 1, 1] = kernels[:, 1, 1, 0] = 1.0
    rewards = np.zeros((T + 1, 2, 2))
    rewards[:, 1, :] = 1.0
    return mpdp.Mdp(kernels, rewards)


def test_construction_round_trip():
    mdp = two_state_cycle()
    assert (mdp.num_states, mdp.num_actions, mdp.horizon) == (2, 2, 3)
    assert mpdp.Mdp(mdp.kernels, mdp.rewards) == mdp
    assert mpdp.Mdp.from_json(mdp.to_json()) == mdp
    assert json.loads(mdp.to_json())["horizon"] == 3


def test_invalid_inputs_raise():
    mdp = two_state_cycle()
    bad = mdp.kernels.copy()
    bad[0, 0, 0, 0] = 0.5
    with pytest.raises(mpdp.InputError):
        mpdp.Mdp(bad, mdp.rewards)
    with pytest.raises(mpdp.DimensionError):
        mpdp.Mdp(mdp.kernels[:, :, :, :1], mdp.rewards)
    with pytest.raises(mpdp.InputError):
        mpdp.Mdp.from_json("{")


def test_oracle_and_full_lookahead():
    mdp = two_state_cycle()
    sol = mpdp.solve_optimal(mdp)
    # From state 0: switch once, then collect at t = 1, 2, 3.
    assert sol["v_star"][0].tolist() == [3.0, 4.0]
    assert sol["v_star"].shape == (5, 2)
    pi = mpdp.mpdp_schedule(mdp, k=mdp.horizon)
    assert np.array_equal(pi, sol["pi_star"])
    assert np.allclose(mpdp.evaluate_policy(mdp, pi)[0], sol["v_star"][0])


def test_myopic_planning_loses_on_a_random_instance():
    mdp = mpdp.random_ergodic_mdp(4, 2, 12, 0.3, 5)
    best = mpdp.solve_optimal(mdp)["v_star"][0]
    for k in range(0, 13):
        v = mpdp.evaluate_policy(mdp, mpdp.mpdp_schedule(mdp, k))[0]
        assert np.all(v <= best + 1e-9)


def test_certificates_and_bound():
    mdp = mpdp.random_ergodic_mdp(3, 2, 8, 0.4, 1)
    cert = mpdp.contraction_coefficient(mdp, J=1)
    assert 0.0 <= cert["gamma"] <= 0.6 + 1e-12
    assert cert["method"] == "exhaustive"
    d = mpdp.diameter(mdp)
    assert d["D"] >= 1.0
    with pytest.raises(mpdp.BudgetError):
        mpdp.contraction_coefficient(mpdp.random_ergodic_mdp(6, 3, 4, 0.3, 1), J=2)
    b = mpdp.regret_bound(100, 6, 2, 0.5, 3, [0.01], [0.001])
    assert math.isclose(b["total"], 58.3, rel_tol=1e-12)
    assert math.isclose(b["noise_free"], 37.5, rel_tol=1e-12)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=50), st.floats(-1e3, 1e3))
def test_span_properties(v, c):
    s = mpdp.span(v)
    assert s >= 0
    assert math.isclose(mpdp.span([x + c for x in v]), s, abs_tol=1e-6)
    assert math.isclose(mpdp.span([-x for x in v]), s, abs_tol=0)


def test_run_config_and_cli():
    cfg = {
        "seed": 1,
        "trials": 3,
        "env": {"type": "random", "num_states": 3, "num_actions": 2, "horizon": 6, "mixing_floor": 0.3},
        "planner": {"type": "mpdp", "k": 6},
    }
    report = mpdp.run_config(json.dumps(cfg))
    assert len(report["rows"]) == 3
    assert all(abs(r["regret"]) < 1e-9 for r in report["rows"])
    with pytest.raises(mpdp.ConfigError):
        mpdp.run_config(json.dumps({**cfg, "trials": 0}))
    code, out, _ = mpdp.cli(["bound", "--T", "10", "--k", "1", "--gamma", "0.5", "--D", "2"])
    assert code == 0 and "total" in out
    assert mpdp.cli(["nonsense"])[0] == 2


def test_queueing_env():
    mdp = mpdp.queueing_mdp([100, 10, 1], 20, 10)
    assert (mdp.num_states, mdp.num_actions) == (168, 4)
    assert np.allclose(mdp.kernels.sum(axis=-1), 1.0)
