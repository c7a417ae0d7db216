"""The min-max upper bound on the adaptive probing optimum.

For a threshold r and a variable subset S, H(r, S) = r + sum_{i in S} G_i(r)
with G_i(r) = E[(X_i - r)^+].  The upper envelope H_max(r) maximizes H(r, .)
over all subsets of size k (equivalently: the k largest G_i(r)), and the
bound of interest is U* = min_r H_max(r).  H_max is convex and attains its
minimum inside [0, n * mu_max], so golden-section search brackets a minimizer
to any requested width.

Also provided: the unique root rho(S) of sum_{i in S} G_i(r) = r, which is
the threshold whose stopping policy earns at least rho(S) in expectation, and
the derivative d/dr H(r, S) = 1 - sum_{i in S} P(X_i >= r), valid whenever
every member of S is continuous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .distributions import Distribution
from .errors import (
    DegenerateSet,
    IndexOutOfRange,
    InvalidTolerance,
    NotContinuous,
    ValidationError,
)

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/phi, golden-section shrink factor

RHO_TOL_SCALE = 1e-12


@dataclass(frozen=True)
class Instance:
    """n independent non-negative random variables plus the probe budget k."""

    dists: tuple[Distribution, ...]
    k: int

    def __init__(self, dists: Sequence[Distribution], k: int) -> None:
        dists = tuple(dists)
        if not dists:
            raise ValidationError("instance needs at least one distribution")
        if not isinstance(k, int) or isinstance(k, bool):
            raise ValidationError(f"budget k={k!r} must be an integer")
        if not 1 <= k <= len(dists):
            raise ValidationError(f"budget k={k} must satisfy 1 <= k <= n={len(dists)}")
        mu_max = max(d.mean() for d in dists)
        if mu_max <= 0.0:
            raise ValidationError("all-zero instance rejected: max mean must be positive")
        object.__setattr__(self, "dists", dists)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "_mu_max", mu_max)

    @property
    def n(self) -> int:
        return len(self.dists)

    @property
    def mu_max(self) -> float:
        return self._mu_max

    def subset(self, indices: Iterable[int]) -> tuple[int, ...]:
        """Validate a variable subset and return it as a sorted tuple."""
        idx = []
        for i in indices:
            if not isinstance(i, (int, np.integer)) or isinstance(i, bool):
                raise IndexOutOfRange(f"index {i!r} is not an integer")
            if not 0 <= i < self.n:
                raise IndexOutOfRange(f"index {i!r} outside [0, {self.n})")
            idx.append(int(i))
        if len(set(idx)) != len(idx):
            raise IndexOutOfRange(f"duplicate indices in subset {tuple(idx)!r}")
        return tuple(sorted(idx))


@dataclass(frozen=True)
class BoundResult:
    """Outcome of bracketing a minimizer of the upper envelope.

    [r_minus, r_plus] contains at least one true minimizer, r_hat is the
    midpoint, u_star = H_max(r_hat) (an upper bound on the exact min-max
    value), and xi is the width tolerance the search was run with.
    """

    r_minus: float
    r_plus: float
    r_hat: float
    u_star: float
    xi: float
    iterations: int


def g_values(inst: Instance, r: float) -> list[float]:
    """G_i(r) for every variable of the instance."""
    return [d.g_value(r) for d in inst.dists]


def h_value(inst: Instance, r: float, subset: Iterable[int]) -> float:
    """H(r, S) = r + sum_{i in S} E[(X_i - r)^+]."""
    idx = inst.subset(subset)
    return r + math.fsum(inst.dists[i].g_value(r) for i in idx)


def h_max(inst: Instance, r: float) -> tuple[float, tuple[int, ...]]:
    """Upper envelope H_max(r) and a witnessing size-k subset.

    The maximizer picks the k largest G_i(r); ties break toward the lowest
    index so results are reproducible.
    """
    gs = g_values(inst, r)
    order = sorted(range(inst.n), key=lambda i: (-gs[i], i))
    top = order[: inst.k]
    value = r + math.fsum(gs[i] for i in top)
    return value, tuple(sorted(top))


def minimize_hmax(inst: Instance, xi_target: float) -> BoundResult:
    """Golden-section search for a minimizer of H_max over [0, n * mu_max].

    Shrinks the bracket until its width is at most xi_target; the returned
    interval contains a minimizer because H_max is convex.  Runs
    O(log(n * mu_max / xi_target)) envelope evaluations.
    """
    if not (isinstance(xi_target, (int, float)) and math.isfinite(xi_target)) or xi_target <= 0.0:
        raise InvalidTolerance(f"xi_target={xi_target!r} must be a positive real")
    lo, hi = 0.0, inst.n * inst.mu_max
    iterations = 0
    if hi - lo > xi_target:
        c = hi - INV_PHI * (hi - lo)
        d = lo + INV_PHI * (hi - lo)
        fc, _ = h_max(inst, c)
        fd, _ = h_max(inst, d)
        while hi - lo > xi_target:
            if fc < fd:
                hi, d, fd = d, c, fc
                c = hi - INV_PHI * (hi - lo)
                fc, _ = h_max(inst, c)
            else:
                lo, c, fc = c, d, fd
                d = lo + INV_PHI * (hi - lo)
                fd, _ = h_max(inst, d)
            iterations += 1
    r_hat = 0.5 * (lo + hi)
    u_star, _ = h_max(inst, r_hat)
    return BoundResult(
        r_minus=lo, r_plus=hi, r_hat=r_hat, u_star=u_star, xi=float(xi_target),
        iterations=iterations,
    )


def rho(inst: Instance, subset: Iterable[int]) -> float:
    """The unique non-negative root of sum_{i in S} G_i(r) = r.

    G(., S) is continuous and weakly decreasing from sum of the means down to
    0, so [0, sum of means] brackets the root; bisection refines it to
    absolute tolerance 1e-12 * (1 + sum of means).
    """
    idx = inst.subset(subset)
    if not idx:
        raise DegenerateSet("empty subset has no root threshold")
    members = [inst.dists[i] for i in idx]
    mu_sum = math.fsum(d.mean() for d in members)
    if mu_sum <= 0.0:
        raise DegenerateSet("subset with zero total mean has root 0 and no guarantee")
    tol = RHO_TOL_SCALE * (1.0 + mu_sum)
    lo, hi = 0.0, mu_sum
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if math.fsum(d.g_value(mid) for d in members) > mid:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def h_derivative_continuous(inst: Instance, r: float, subset: Iterable[int]) -> float:
    """d/dr H(r, S) = 1 - sum_{i in S} P(X_i >= r) for continuous members."""
    idx = inst.subset(subset)
    for i in idx:
        if not inst.dists[i].is_continuous:
            raise NotContinuous(f"variable {i} has a discontinuous CDF; derivative undefined")
    return 1.0 - math.fsum(inst.dists[i].survival(r) for i in idx)
