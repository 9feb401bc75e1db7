# Copyright 2024 Canonical Ltd.
# See LICENSE file for licensing details.

"""Counter-based random draws for reproducible Monte Carlo runs.

Trial ``t`` of a run seeded with ``seed`` is driven by the 64-bit value

    x_t = mix64((seed + (t + 1) * 0x9E3779B97F4A7C15) mod 2^64)

where ``mix64`` is the splitmix64 output finaliser. This is exactly the t-th output of a
splitmix64 generator started at ``seed``, but it can be computed for any ``t`` directly,
so the configuration a trial sees does not depend on how trials are split across workers.
The configuration rank is ``(x_t * q^n) >> 64``; its bias is at most q^n / 2^64.
"""

from hatlab.config.literals import GOLDEN_GAMMA, MASK64, MIX_MUL_1, MIX_MUL_2
from hatlab.exceptions import DomainError


def mix64(z: int) -> int:
    """splitmix64 finaliser."""
    z = ((z ^ (z >> 30)) * MIX_MUL_1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_MUL_2) & MASK64
    return z ^ (z >> 31)


def check_seed(seed: int) -> int:
    """Seeds are unsigned 64-bit integers."""
    if not 0 <= seed <= MASK64:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def trial_value(seed: int, trial: int) -> int:
    """The 64-bit value driving ``trial``."""
    return mix64((seed + (trial + 1) * GOLDEN_GAMMA) & MASK64)


def trial_rank(seed: int, trial: int, size: int) -> int:
    """Uniform draw in [0, size) for ``trial``."""
    return (trial_value(seed, trial) * size) >> 64
