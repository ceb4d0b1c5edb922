"""Exact Chow rings, tangent K-classes and divisor positivity for matroids.

Matroids are passed either as a `Matroid` instance or as a plain dict in the
same shape the CLI accepts:

    {"type": "uniform", "r": 3, "n": 6}
    {"type": "boolean", "n": 4}
    {"type": "bases", "n": 4, "bases": [[1, 2, 4], [1, 3, 4], [2, 3, 4]]}

Every job returns the full report dict (inputs, results, timings_ms, version,
determinism_hash); the convenience wrappers below return just the results.
"""

import json as _json

try:
    from ._chowforge import ChowforgeError, Matroid, run_csv, run_json, __version__
except ImportError:  # build-tree layout: extension module next to the package
    from _chowforge import ChowforgeError, Matroid, run_csv, run_json, __version__

__all__ = [
    "ChowforgeError",
    "Matroid",
    "run",
    "describe",
    "chow",
    "chow_polynomial",
    "tangent",
    "todd",
    "chi",
    "nef_check",
    "kv_scan",
    "identities",
    "dragon_hall_rado",
    "__version__",
]


def _matroid_json(matroid):
    if isinstance(matroid, Matroid):
        if matroid.is_uniform:
            return {"type": "uniform", "r": matroid.rank, "n": matroid.n}
        return {"type": "bases", "n": matroid.n, "bases": matroid.bases()}
    return matroid


def run(matroid, command, *, csv=False, **params):
    """Run one command; returns the report dict (or a CSV string)."""
    spec = _json.dumps(
        {"matroid": _matroid_json(matroid), "command": command, "params": params}
    )
    if csv:
        return run_csv(spec)
    return _json.loads(run_json(spec))


def describe(matroid):
    return run(matroid, "describe")["results"]


def chow(matroid):
    return run(matroid, "chow")["results"]


def chow_polynomial(matroid):
    return run(matroid, "chow-poly")["results"]["coefficients"]


def tangent(matroid):
    return run(matroid, "tangent")["results"]


def todd(matroid):
    return run(matroid, "todd")["results"]


def chi(matroid, divisor):
    return run(matroid, "chi", divisor=divisor)["results"]


def nef_check(matroid, divisor):
    return run(matroid, "nef-check", divisor=divisor)["results"]


def kv_scan(matroid, *, count=12, seed=1, divisor=None, csv=False):
    params = {"count": count, "seed": seed}
    if divisor is not None:
        params["divisor"] = divisor
    out = run(matroid, "kv-scan", csv=csv, **params)
    return out if csv else out["results"]


def identities(matroid, *, trials=20, seed=20260815):
    return run(matroid, "identities", trials=trials, seed=seed)["results"]


def dragon_hall_rado(matroid, sets):
    return run(matroid, "dhr", sets=sets)["results"]["satisfied"]
