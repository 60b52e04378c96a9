"""SINR link scheduling: capacity, flexible rates and latency.

Instances, solutions and reports are plain dicts in the JSON schema used by
the ``sinrsched`` command line.
"""

import json

from . import _core
from ._core import Error, InvalidInput, Unbounded, experiment_names

__all__ = [
    "Error",
    "InvalidInput",
    "Unbounded",
    "experiment_names",
    "generate",
    "solve",
    "verify",
    "schedule",
    "check_admissible",
    "spectral",
    "brute_force",
    "sinr",
    "experiment",
]


def _dump(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def generate(config=None, **fields):
    """Random instance from a generator config; keyword fields override it."""
    cfg = dict(config or {})
    cfg.update(fields)
    return json.loads(_core.generate(json.dumps(cfg)))


def solve(instance, algorithm="unlimited", mode="unlimited", trace=True):
    """Run ``unlimited``, ``fixed``, ``limited`` or ``flexible`` (with a power mode)."""
    return json.loads(_core.solve(_dump(instance), algorithm, mode, trace))


def verify(instance, document):
    """Re-check a solution, flexible run or schedule: {"ok", "violations", "first_violated"}."""
    return _core.verify(_dump(instance), _dump(document))


def schedule(instance, mode="unlimited"):
    return json.loads(_core.schedule(_dump(instance), mode))


def check_admissible(instance, subset=None, cap=None):
    return json.loads(_core.check_admissible(_dump(instance), subset, cap))


def spectral(instance, subset=None):
    return json.loads(_core.spectral(_dump(instance), subset))


def brute_force(instance, regime="variable", subset=None):
    """Exact optimum over subsets; regime is variable, capped, fixed or flexible."""
    return json.loads(_core.brute_force(_dump(instance), regime, subset))


def sinr(instance, active, powers, link):
    return _core.sinr(_dump(instance), list(active), {int(k): v for k, v in powers.items()}, link)


def experiment(name, seed=0, trials=None, n=None, k=None, alpha=None, p_max=None):
    """Run a seeded experiment; the report carries its CSV under "csv"."""
    return json.loads(_core.experiment(name, seed, trials, n, k, alpha, p_max))
