"""Size caps for exponential-cost operations.

``GSTAB_MAX_N`` overrides the table cap (characteristic / Weyl tables and
everything built on them, including estimation and the tester).
"""

import os


class CapExceededError(ValueError):
    """Raised when an exact computation would exceed its configured size cap."""


TABLE_MAX_N = 12
DENSE_MAX_N = 10
CLIFFORD_MAX_N = 8
FIDELITY_MAX_N = 4
LAGRANGIAN_MAX_N = 4
SPAN_MAX_DIM = 24
BELL_BASIS_MAX_N = 4
TWO_COPY_MAX_N = 3
GOWERS_DIRECT_MAX = 26


def table_max_n() -> int:
    env = os.environ.get("GSTAB_MAX_N")
    if env:
        return int(env)
    return TABLE_MAX_N


def check(value: int, cap: int, what: str) -> None:
    if value > cap:
        raise CapExceededError(f"{what}: {value} exceeds cap {cap}")
