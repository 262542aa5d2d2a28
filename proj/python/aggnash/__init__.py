"""Distributed Nash equilibrium seeking for aggregative games."""

import json

from ._aggnash import (
    AggnashError,
    FeasibleSet,
    Game,
    concurrence_json,
    cournot_game,
    cournot_params,
    error_metric,
    lemma4_bounds,
    mixing,
    prop4_bound,
    run_experiment_json,
    run_gossip,
    run_sync,
    solve_centralized,
    topology_edges,
    transition_bound_params,
    vi_residual,
    weights,
)


def run_experiment(config):
    """Run a configured experiment; `config` is a dict in the CLI's JSON schema."""
    return json.loads(run_experiment_json(json.dumps(config)))


def concurrence(config, threshold=1e-3):
    """Mean ticks (rounded up) until every estimate matches the aggregate."""
    iterations, per_path, censored = concurrence_json(json.dumps(config), threshold)
    return {"iterations": iterations, "per_path": per_path, "censored": censored}


def sample_cournot(players, locations, seed):
    """Sampled market parameters (dict) and the matching game."""
    text = cournot_params(players, locations, seed)
    return json.loads(text), cournot_game(text)


__all__ = [
    "AggnashError",
    "FeasibleSet",
    "Game",
    "concurrence",
    "cournot_game",
    "error_metric",
    "lemma4_bounds",
    "mixing",
    "prop4_bound",
    "run_experiment",
    "run_gossip",
    "run_sync",
    "sample_cournot",
    "solve_centralized",
    "topology_edges",
    "transition_bound_params",
    "vi_residual",
    "weights",
]
