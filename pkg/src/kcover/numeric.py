"""Shared floating-point comparison policy.

All geometric comparisons (touching intervals, "length equals" checks,
threshold acceptance) go through a single tolerance.  The default is 1e-9
and can be overridden with the KCOVER_EPS environment variable.
"""

import os

DEFAULT_EPS = 1e-9

EPS = float(os.environ.get("KCOVER_EPS", DEFAULT_EPS))


def eps() -> float:
    """Current comparison tolerance (module attribute EPS, env-overridable)."""
    return EPS
