import numpy as np
import pytest

import aggnash


def test_projection_onto_simplex_like_set():
    s = aggnash.FeasibleSet.coupled([0, 0], [1, 1], [1, 1], "eq", 1.0)
    assert np.allclose(s.project([1.0, 1.0]), [0.5, 0.5])


def test_box_projection_clips():
    s = aggnash.FeasibleSet.box([0.0, 0.0], [1.0, 2.0])
    assert np.allclose(s.project([-1.0, 5.0]), [0.0, 2.0])


def test_custom_game_solves_scalar_problem():
    game = aggnash.Game([([0.0], [10.0], lambda x, u: x - 3.0, None)], 1)
    x, iters, _ = aggnash.solve_centralized(game, tol=1e-12)
    assert iters > 0
    assert x[0][0] == pytest.approx(3.0, abs=1e-9)


def test_cournot_equilibrium_and_error_metric():
    params, game = aggnash.sample_cournot(5, 3, seed=7)
    assert np.asarray(params["a"]).shape == (5, 3)
    x, _, _ = aggnash.solve_centralized(game)
    assert aggnash.vi_residual(game, x) < 1e-8
    assert aggnash.error_metric(x, x) == 0.0


def test_weights_are_doubly_stochastic():
    w = aggnash.weights("cycle", 6)
    assert np.allclose(w.sum(axis=0), 1.0)
    assert np.allclose(w.sum(axis=1), 1.0)


def test_mixing_ordering():
    lam = {k: aggnash.mixing(k, 20)["lambda_"] for k in ("complete", "cycle")}
    assert lam["complete"] < lam["cycle"] < 1.0


def test_run_experiment_roundtrip():
    cfg = {
        "game": {"seed": 3, "players": 6, "locations": 3},
        "algorithm": "gossip",
        "topology": "complete",
        "iters": 2000,
        "sample_paths": 2,
    }
    report = aggnash.run_experiment(cfg)
    assert len(report["final"]["per_path"]) == 2
    assert report["final"]["mean_error"] >= 0.0
    assert "mixing" in report


def test_bad_config_raises():
    with pytest.raises(aggnash.AggnashError):
        aggnash.run_experiment({"game": {"seed": 1}, "topology": "torus"})


def test_bounds():
    theta, beta = aggnash.transition_bound_params(3, 1, 0.25)
    assert theta > 1.0 and 0.0 < beta < 1.0
    q, bound = aggnash.prop4_bound(1.0, 1.0, 1.0, 1, 4, 0.9, 0.2, 0.3, 0.01, 0.0101, 1.0)
    assert 0.0 < q < 1.0 and bound > 0.0


def test_engines_accept_python_games():
    game = aggnash.Game([([0.0], [10.0], lambda x, u: x - 3.0, None)] * 4, aggregate_dim=1)
    x0 = game.sample(seed=2)
    x, v = aggnash.run_sync(game, x0, topology="cycle", iters=2000, seed=2)
    assert max(abs(xi[0] - 3.0) for xi in x) < 1e-2
    assert v.shape == (4, 1)
    x, _ = aggnash.run_gossip(game, x0, topology="cycle", constant_steps=[0.1] * 4, iters=4000, seed=2)
    assert max(abs(xi[0] - 3.0) for xi in x) < 1e-8
