"""Non-negative random variables with closed-form evaluation oracles.

Every family exposes the two oracles all downstream constructions rely on,
the inclusive survival probability P(X >= r) and the conditional tail
expectation E[X | X >= r], plus the tail moment E[(X - r)^+] and inverse-CDF
sampling.  All oracle values are closed-form; no quadrature is involved, so
numerical error budgets downstream are dominated by search tolerances.

Supported families: finite discrete, uniform, exponential, and a two-way
mixture that nests at most one level deep (used for the fractional pair in
the continuous construction).
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod

import numpy as np

from .errors import ValidationError, ZeroTail

PROB_SUM_TOL = 1e-12


class Distribution(ABC):
    """A non-negative random variable with closed-form oracles."""

    #: True when the CDF is continuous everywhere.
    is_continuous: bool = False

    @abstractmethod
    def mean(self) -> float:
        """E[X]."""

    @abstractmethod
    def survival(self, r: float) -> float:
        """P(X >= r), inclusive at atoms; weakly decreasing in r."""

    @abstractmethod
    def tail_moment_one(self, r: float) -> float:
        """E[X * 1{X >= r}]."""

    @abstractmethod
    def ppf(self, u):
        """Inverse CDF, vectorized over u in [0, 1)."""

    def cond_exp_ge(self, r: float) -> float:
        """E[X | X >= r].

        Raises ZeroTail when the conditioning event has probability zero.
        """
        s = self.survival(r)
        if s <= 0.0:
            raise ZeroTail(f"P(X >= {r!r}) = 0, conditional expectation undefined")
        return self.tail_moment_one(r) / s

    def g_value(self, r: float) -> float:
        """E[(X - r)^+] = P(X >= r) * (E[X | X >= r] - r).

        Returns 0 on an empty tail, absorbing the ZeroTail case.  Weakly
        decreasing and convex in r; equals mean() at r <= 0.
        """
        s = self.survival(r)
        if s <= 0.0:
            return 0.0
        return max(self.tail_moment_one(r) - r * s, 0.0)

    def draw(self, coin, u):
        """Map a (coin, value) pair of uniforms to a sample; vectorized.

        Simple families ignore the coin.  The fixed two-uniform layout keeps
        the Monte-Carlo stream position identical for plain and mixture
        entries.
        """
        return self.ppf(u)

    def sample(self, rng: np.random.Generator) -> float:
        """A single draw using the supplied random stream."""
        return float(self.ppf(rng.random()))

    def sample_array(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """A vector of independent draws using the supplied random stream."""
        return np.asarray(self.ppf(rng.random(size)), dtype=float)


class DiscreteFinite(Distribution):
    """Finite-support distribution given as (value, probability) atoms.

    Atoms are sorted and duplicate values merged.  Values must be
    non-negative, probabilities in (0, 1] summing to 1 within 1e-12.
    """

    is_continuous = False

    def __init__(self, atoms) -> None:
        items = [(float(v), float(p)) for v, p in atoms]
        if not items:
            raise ValidationError("discrete distribution needs at least one atom")
        for v, p in items:
            if not math.isfinite(v) or v < 0.0:
                raise ValidationError(f"support value {v!r} must be finite and non-negative")
            if not 0.0 < p <= 1.0:
                raise ValidationError(f"atom probability {p!r} must lie in (0, 1]")
        total = math.fsum(p for _, p in items)
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise ValidationError(f"atom probabilities sum to {total!r}, not 1")
        merged: dict[float, float] = {}
        for v, p in items:
            merged[v] = merged.get(v, 0.0) + p
        values = np.array(sorted(merged), dtype=float)
        probs = np.array([merged[v] for v in values], dtype=float)
        self.values = values
        self.probs = probs
        self._cum = np.cumsum(probs)
        # Suffix sums make survival and the tail moment O(log n) lookups.
        self._tail_p = np.concatenate([np.cumsum(probs[::-1])[::-1], [0.0]])
        self._tail_pv = np.concatenate([np.cumsum((probs * values)[::-1])[::-1], [0.0]])

    def __repr__(self) -> str:
        pairs = ", ".join(f"({v!r}, {p!r})" for v, p in zip(self.values, self.probs))
        return f"DiscreteFinite([{pairs}])"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DiscreteFinite)
            and np.array_equal(self.values, other.values)
            and np.array_equal(self.probs, other.probs)
        )

    def mean(self) -> float:
        return float(np.dot(self.values, self.probs))

    def _tail_index(self, r: float) -> int:
        return int(np.searchsorted(self.values, r, side="left"))

    def survival(self, r: float) -> float:
        idx = self._tail_index(r)
        if idx == 0:
            return 1.0  # full mass; suffix float sums may fall 1 ulp short
        return float(self._tail_p[idx])

    def tail_moment_one(self, r: float) -> float:
        return float(self._tail_pv[self._tail_index(r)])

    def ppf(self, u):
        idx = np.searchsorted(self._cum, u, side="right")
        idx = np.minimum(idx, len(self.values) - 1)
        return self.values[idx]


class Uniform(Distribution):
    """Uniform distribution on [a, b] with 0 <= a < b."""

    is_continuous = True

    def __init__(self, a: float, b: float) -> None:
        a, b = float(a), float(b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValidationError("uniform endpoints must be finite")
        if a < 0.0:
            raise ValidationError(f"uniform lower endpoint {a!r} must be non-negative")
        if b <= a:
            raise ValidationError(f"uniform needs b > a, got a={a!r}, b={b!r}")
        self.a = a
        self.b = b

    def __repr__(self) -> str:
        return f"Uniform({self.a!r}, {self.b!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Uniform) and (self.a, self.b) == (other.a, other.b)

    def mean(self) -> float:
        return 0.5 * (self.a + self.b)

    def survival(self, r: float) -> float:
        if r <= self.a:
            return 1.0
        if r >= self.b:
            return 0.0
        return (self.b - r) / (self.b - self.a)

    def tail_moment_one(self, r: float) -> float:
        if r <= self.a:
            return self.mean()
        if r >= self.b:
            return 0.0
        # integral of x/(b-a) over [r, b]
        return (self.b * self.b - r * r) / (2.0 * (self.b - self.a))

    def g_value(self, r: float) -> float:
        if r <= self.a:
            return self.mean() - r
        if r >= self.b:
            return 0.0
        d = self.b - r
        return d * d / (2.0 * (self.b - self.a))

    def ppf(self, u):
        return self.a + u * (self.b - self.a)


class Exponential(Distribution):
    """Exponential distribution with the given positive rate."""

    is_continuous = True

    def __init__(self, rate: float) -> None:
        rate = float(rate)
        if not math.isfinite(rate) or rate <= 0.0:
            raise ValidationError(f"exponential rate {rate!r} must be positive")
        self.rate = rate

    def __repr__(self) -> str:
        return f"Exponential({self.rate!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Exponential) and self.rate == other.rate

    def mean(self) -> float:
        return 1.0 / self.rate

    def survival(self, r: float) -> float:
        if r <= 0.0:
            return 1.0
        return math.exp(-self.rate * r)

    def tail_moment_one(self, r: float) -> float:
        if r <= 0.0:
            return self.mean()
        # memorylessness: E[X | X >= r] = r + 1/rate
        return math.exp(-self.rate * r) * (r + 1.0 / self.rate)

    def g_value(self, r: float) -> float:
        if r <= 0.0:
            return self.mean() - r
        return math.exp(-self.rate * r) / self.rate

    def ppf(self, u):
        return -np.log1p(-u) / self.rate


class Mixture(Distribution):
    """Two-way mixture: X = L with probability weight, else R.

    Children may not themselves be mixtures; one nesting level suffices for
    the fractional-pair variable of the continuous construction.
    """

    def __init__(self, weight: float, left: Distribution, right: Distribution) -> None:
        weight = float(weight)
        if not 0.0 <= weight <= 1.0:
            raise ValidationError(f"mixture weight {weight!r} must lie in [0, 1]")
        if isinstance(left, Mixture) or isinstance(right, Mixture):
            raise ValidationError("mixtures nest at most one level deep")
        self.weight = weight
        self.left = left
        self.right = right
        self.is_continuous = left.is_continuous and right.is_continuous

    def __repr__(self) -> str:
        return f"Mixture({self.weight!r}, {self.left!r}, {self.right!r})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Mixture)
            and self.weight == other.weight
            and self.left == other.left
            and self.right == other.right
        )

    def mean(self) -> float:
        return self.weight * self.left.mean() + (1.0 - self.weight) * self.right.mean()

    def survival(self, r: float) -> float:
        return (
            self.weight * self.left.survival(r)
            + (1.0 - self.weight) * self.right.survival(r)
        )

    def tail_moment_one(self, r: float) -> float:
        return (
            self.weight * self.left.tail_moment_one(r)
            + (1.0 - self.weight) * self.right.tail_moment_one(r)
        )

    def g_value(self, r: float) -> float:
        return (
            self.weight * self.left.g_value(r)
            + (1.0 - self.weight) * self.right.g_value(r)
        )

    def ppf(self, u):
        raise NotImplementedError("mixture sampling needs a branch coin; use draw()")

    def draw(self, coin, u):
        return np.where(coin < self.weight, self.left.ppf(u), self.right.ppf(u))

    def sample(self, rng: np.random.Generator) -> float:
        branch = self.left if rng.random() < self.weight else self.right
        return branch.sample(rng)

    def sample_array(self, rng: np.random.Generator, size: int) -> np.ndarray:
        coins = rng.random(size)
        values = rng.random(size)
        return np.asarray(self.draw(coins, values), dtype=float)


def point_mass(value: float) -> DiscreteFinite:
    """Degenerate distribution putting all mass on one value."""
    return DiscreteFinite([(value, 1.0)])
