"""Python bindings for the lsgame arrival-game library."""

import json as _json

from ._lsgame import (
    GameParams,
    InvalidInput,
    SolverError,
    best_response,
    br1,
    br2,
    br_run,
    catalan,
    cne,
    enumerate_permutations,
    exhaustive_optimum,
    heuristic_optimum,
    permutation_of,
    quantile_targets,
    solve_departures,
    spne,
    user_costs,
    verify_dynamics,
)
from ._lsgame import run_experiment_json as _run_experiment_json


def run_experiment(config):
    """Run an experiment from a config dict and return the summary dict."""
    return _json.loads(_run_experiment_json(_json.dumps(config)))


__all__ = [
    "GameParams",
    "InvalidInput",
    "SolverError",
    "best_response",
    "br1",
    "br2",
    "br_run",
    "catalan",
    "cne",
    "enumerate_permutations",
    "exhaustive_optimum",
    "heuristic_optimum",
    "permutation_of",
    "quantile_targets",
    "run_experiment",
    "solve_departures",
    "spne",
    "user_costs",
    "verify_dynamics",
]
