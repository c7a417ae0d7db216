"""Shared builders for seeded random test instances."""

import numpy as np

from probemax import Instance
from probemax.instance_io import gen_instance


def random_discrete_instance(seed: int, n_lo: int = 2, n_hi: int = 6) -> Instance:
    """Discrete instance with seeded size n in [n_lo, n_hi] and k in [1, n]."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_lo, n_hi + 1))
    k = int(rng.integers(1, n + 1))
    return gen_instance(n, k, "discrete", seed)


def random_continuous_instance(seed: int, n_lo: int = 3, n_hi: int = 8) -> Instance:
    """Mixed uniform/exponential instance with seeded n and k."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(n_lo, n_hi + 1))
    k = int(rng.integers(1, n + 1))
    return gen_instance(n, k, "mixed", seed)
