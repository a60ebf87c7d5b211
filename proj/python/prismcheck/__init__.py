"""Exact checks for delta-rings, Witt vectors, q-divided powers and q-de Rham complexes."""

import json

from ._core import (
    cli,
    frobenius_factorial,
    q_binomial,
    q_factorial,
    q_int,
    tate_twist,
    witt_add,
    witt_mul,
    nygaard,
)


def run(*args):
    """Run a CLI command; returns (exit code, parsed report or None, stderr)."""
    code, out, err = cli([str(a) for a in args])
    return code, (json.loads(out) if out.strip() else None), err


__all__ = [
    "cli",
    "run",
    "frobenius_factorial",
    "q_binomial",
    "q_factorial",
    "q_int",
    "tate_twist",
    "witt_add",
    "witt_mul",
    "nygaard",
]
