"""Desk-scale size limits.

All enumerations are capped so that a malformed scenario fails fast
instead of grinding. The cap can be raised through the environment
variable FORCELAB_MAX_CARRIER.
"""

import os

DEFAULT_MAX_CARRIER = 65536


def max_carrier() -> int:
    raw = os.environ.get("FORCELAB_MAX_CARRIER")
    if raw is None:
        return DEFAULT_MAX_CARRIER
    try:
        value = int(raw)
    except ValueError:
        return DEFAULT_MAX_CARRIER
    return max(value, 1)
