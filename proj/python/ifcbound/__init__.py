"""Outer bounds and sum-capacity certificates for K-user Gaussian interference channels."""

import json

import numpy as np

from ._core import (
    IfcError,
    build_z_channel,
    count_terms,
    kra_term_value,
    many_to_one,
    rank_one_channel,
    succ_dec_rates,
    tin_sum_rate,
)
from . import _core

__all__ = [
    "IfcError",
    "build_z_channel",
    "certify",
    "count_terms",
    "kra_term_value",
    "many_to_one",
    "rank_one_channel",
    "region",
    "succ_dec_rates",
    "tin_sum_rate",
]


def _matrix(h):
    return np.asarray(h, dtype=np.complex128)


def region(H, *, seed=0, restarts=8, max_evals=2000, tolerance=1e-7, families=("KRA", "ETW"), sum_rate_only=False):
    """Outer-bound report as a dict (same schema as `ifcbound evaluate`)."""
    return json.loads(
        _core.region_json(_matrix(H), seed, restarts, max_evals, tolerance, list(families), sum_rate_only)
    )


def certify(H, *, seed=0, restarts=8, max_evals=2000, tolerance=1e-7):
    """Sum-capacity certificate as a dict (same schema as `ifcbound certify`)."""
    return json.loads(_core.certify_json(_matrix(H), seed, restarts, max_evals, tolerance))
