"""Completions of metric mappings: exact finite oracles and the command line."""

from ._core import (
    complete,
    completion_is_complete,
    dstar,
    is_complete,
    lemma2,
    random_instance,
    run,
    theorem3,
    validate,
)

__all__ = [
    "complete",
    "completion_is_complete",
    "dstar",
    "is_complete",
    "lemma2",
    "random_instance",
    "run",
    "theorem3",
    "validate",
]
