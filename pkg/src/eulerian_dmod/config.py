"""Global configuration: the variable-count cap.

Exponent tuples, sign regions and validation boxes are all sized by the
number of variables n, so n is capped (default 6).  The cap can be raised
for experiments through the EULERIAN_DMOD_MAXN environment variable.
"""

import os

DEFAULT_MAX_VARIABLES = 6


def max_variables() -> int:
    raw = os.environ.get("EULERIAN_DMOD_MAXN")
    if raw is None:
        return DEFAULT_MAX_VARIABLES
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"EULERIAN_DMOD_MAXN must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ValueError("EULERIAN_DMOD_MAXN must be positive")
    return value


def check_variable_count(n: int, allow_zero: bool = False) -> int:
    cap = max_variables()
    floor = 0 if allow_zero else 1
    if not isinstance(n, int) or n < floor:
        raise ValueError(f"variable count must be an integer >= {floor}, got {n!r}")
    if n > cap:
        raise ValueError(
            f"variable count {n} exceeds the configured cap {cap} "
            "(set EULERIAN_DMOD_MAXN to raise it)"
        )
    return n
