"""Python access to the rcbound core."""

import json as _json

from ._rcbound import (
    DomainError,
    NonConvergenceError,
    RcboundError,
    UsageError,
    VerificationFailure,
    clt_norm,
    conjugate,
    fisher_p,
    kb_constant,
    lower_bound_lp,
    normalize_scenario,
    phi_bar,
    rosenthal_constant,
)
from ._rcbound import verify as _verify

__all__ = [
    "DomainError",
    "NonConvergenceError",
    "RcboundError",
    "UsageError",
    "VerificationFailure",
    "clt_norm",
    "conjugate",
    "fisher_p",
    "kb_constant",
    "lower_bound_lp",
    "normalize_scenario",
    "phi_bar",
    "rosenthal_constant",
    "verify",
]


def verify(scenario, workers=0):
    """Run a scenario given as a dict or JSON text; returns the report dict."""
    if not isinstance(scenario, str):
        scenario = _json.dumps(scenario)
    return _verify(scenario, workers)
