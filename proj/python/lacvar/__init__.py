"""Variation norms of lacunary averages: Python front end to the C++ core."""

import json as _json

from ._lacvar import (
    GridFunction,
    LacunarySeq,
    LacvarError,
    average,
    average_oracle,
    lacunary_gamma,
    multiplier_sums,
    phi_hat,
    refine,
    scenario_kinds,
    sequence,
    sequence_from_scales,
    sup_scan,
    tail_bound,
    validate_lacunary,
    variation_at,
    variation_profile,
)


def verify(kind, config=None, timing=False):
    """Run a verification scenario and return the report as a dict."""
    from ._lacvar import run_scenario_json

    return _json.loads(run_scenario_json(kind, _json.dumps(config or {}), timing))


__all__ = [
    "GridFunction",
    "LacunarySeq",
    "LacvarError",
    "average",
    "average_oracle",
    "lacunary_gamma",
    "multiplier_sums",
    "phi_hat",
    "refine",
    "scenario_kinds",
    "sequence",
    "sequence_from_scales",
    "sup_scan",
    "tail_bound",
    "validate_lacunary",
    "variation_at",
    "variation_profile",
    "verify",
]
