"""Minimax solution concepts and stability of gradient algorithms for quadratic games.

Games are dicts with keys A, B, C and optional a, b, c. Matrices are nested lists or
numpy arrays; 1x1 blocks may be plain numbers.
"""

import json

import numpy as np

from . import _core
from ._core import MinimaxlabError, region_predicate, replicate_ids, schur_stable

__all__ = [
    "MinimaxlabError",
    "classify",
    "region_predicate",
    "replicate",
    "replicate_ids",
    "schur_stable",
    "simulate",
    "stability",
]


def _encode(game):
    def plain(value):
        if isinstance(value, np.ndarray):
            return value.tolist()
        return value

    return json.dumps({key: plain(value) for key, value in game.items()})


def _vec(values):
    return np.atleast_1d(np.asarray(values, dtype=float))


def classify(game, tol=1e-8):
    return json.loads(_core.classify_json(_encode(game), tol))


def stability(game, x, y, family, alpha1, alpha2, beta=0.0, k=2.0, alternating=False):
    text = _core.stability_json(_encode(game), _vec(x), _vec(y), family, alpha1, alpha2, beta, k, alternating)
    return json.loads(text)


def simulate(game, z0, family, alpha1, alpha2, beta=0.0, k=2.0, alternating=False, max_iters=10000,
             stop_tol=1e-8):
    text = _core.simulate_json(_encode(game), _vec(z0), family, alpha1, alpha2, beta, k, alternating,
                               max_iters, stop_tol)
    return json.loads(text)


def replicate(case_id):
    return json.loads(_core.replicate_json(case_id))
