"""Size limits shared by all constructions.

The carrier cap can be overridden with the ``FINRING_MAX_CARRIER`` environment
variable or at runtime through :func:`set_limits` / :func:`limits_override`.
"""
import os
from contextlib import contextmanager
from dataclasses import dataclass, replace

ENV_CARRIER_CAP = "FINRING_MAX_CARRIER"


@dataclass(frozen=True)
class Limits:
    carrier: int = 4096
    lattice_nodes: int = 100_000
    ideal_enumeration: int = 1024
    polyquot_degree: int = 16


def _from_env():
    lim = Limits()
    raw = os.environ.get(ENV_CARRIER_CAP)
    if raw:
        lim = replace(lim, carrier=int(raw))
    return lim


_current = _from_env()


def limits():
    return _current


def set_limits(**changes):
    global _current
    _current = replace(_current, **changes)
    return _current


@contextmanager
def limits_override(**changes):
    global _current
    saved = _current
    _current = replace(_current, **changes)
    try:
        yield _current
    finally:
        _current = saved
