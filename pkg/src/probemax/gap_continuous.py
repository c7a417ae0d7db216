"""The 1 - 1/e pipeline for instances with continuous CDFs.

Relaxing the inner maximization of the min-max bound to fractional subsets
(coordinates in [0, 1] summing to k) changes nothing about its value, but at
a minimizer r* the relaxation admits an almost-integer optimal solution psi*
whose survival probabilities are calibrated to exactly one expected hit:

    sum_i P(X_i >= r*) * psi_i = 1,  with at most two fractional coordinates.

psi* is built from two envelope-achieving sets: among the maximizers at r*,
S- maximizes d/dr H(r*, .) (so its derivative is >= 0) and S+ minimizes it
(derivative <= 0); after a swap loop raises their overlap to k-1, a mixing
weight alpha places the blended survival sum exactly at 1.

The resulting policy inspects the psi-support in weakly-decreasing
conditional tail expectation, treating the fractional pair as a two-way
mixture variable, and accepts the first sample at or above r*.  Its expected
reward is at least (1 - 1/e) * U*, and replacing the mixture by whichever
branch has the larger conditional reward derandomizes the policy without
losing that guarantee.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence, Union

from .distributions import Distribution, Mixture
from .errors import AlphaOutOfRange, NotContinuous, SwapStall
from .gap2 import TIE_TOL, tie_class_at
from .minmax import BoundResult, Instance, h_derivative_continuous, minimize_hmax
from .policy_eval import PolicyStats, ThresholdPolicy, evaluate

#: Tolerance on fractional-solution identities (survival sums, alpha clamping).
TOL_PSI = 1e-4

#: Minimizer-bracket width for the pipeline, relative to mu_max.
XI_SCALE = 1e-8

#: Coordinates this close to 0 or 1 are snapped; the survival-sum identity
#: moves by at most the same amount, far below TOL_PSI.
_SNAP = 1e-12


def _require_continuous(inst: Instance) -> None:
    for i, d in enumerate(inst.dists):
        if not d.is_continuous:
            raise NotContinuous(f"variable {i} has a discontinuous CDF")


@dataclass(frozen=True)
class PlainVar:
    """A policy entry referencing one original variable."""

    index: int

    def distribution(self, inst: Instance) -> Distribution:
        return inst.dists[self.index]

    @property
    def indices(self) -> tuple[int, ...]:
        return (self.index,)

    @property
    def tie_index(self) -> int:
        return self.index


@dataclass(frozen=True)
class MixtureVar:
    """A policy entry mixing the two fractional variables.

    With probability weight the entry behaves as variable ell, otherwise as
    variable m; weight equals psi[ell].
    """

    ell: int
    m: int
    weight: float

    def distribution(self, inst: Instance) -> Distribution:
        return Mixture(self.weight, inst.dists[self.ell], inst.dists[self.m])

    @property
    def indices(self) -> tuple[int, ...]:
        return (self.ell, self.m)

    @property
    def tie_index(self) -> int:
        return min(self.ell, self.m)


VariableRef = Union[PlainVar, MixtureVar]


@dataclass(frozen=True)
class PsiSolution:
    """Almost-integer maximizer of the relaxed inner problem at r_star."""

    r_star: float
    s_minus: tuple[int, ...]
    s_plus: tuple[int, ...]
    alpha: float
    frac_pair: tuple[int, int] | None
    psi: tuple[float, ...]


@dataclass(frozen=True)
class FreeOrderPolicy:
    """Inspect entries by weakly-decreasing E[Y | Y >= threshold]."""

    entries: tuple[VariableRef, ...]
    threshold: float

    def as_threshold_policy(self, inst: Instance) -> ThresholdPolicy:
        """Materialize entries as distributions; mixtures need no special casing."""
        return ThresholdPolicy(
            entries=[e.distribution(inst) for e in self.entries],
            threshold=self.threshold,
        )


class DerandomizeResult(NamedTuple):
    subset: tuple[int, ...]
    order: tuple[int, ...]
    expected_reward: float


def construct_s_minus_plus(
    inst: Instance, r_star: float, tie_tol: float = TIE_TOL
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Extreme-derivative envelope maximizers at r_star.

    Both sets take the forced prefix of the tie class; the remaining slots
    are filled by weakly-increasing survival for the first set (maximizing
    the derivative of H) and weakly-decreasing survival for the second
    (minimizing it).  Ties break toward the lowest index.
    """
    _require_continuous(inst)
    tc = tie_class_at(inst, r_star, tol=tie_tol)
    surv = {i: inst.dists[i].survival(r_star) for i in tc.tied}
    lo_first = sorted(tc.tied, key=lambda i: (surv[i], i))[: tc.slots]
    hi_first = sorted(tc.tied, key=lambda i: (-surv[i], i))[: tc.slots]
    s_minus = tuple(sorted(tc.prefix + tuple(lo_first)))
    s_plus = tuple(sorted(tc.prefix + tuple(hi_first)))
    return s_minus, s_plus


def maximize_overlap(
    inst: Instance,
    r_star: float,
    s_minus: Iterable[int],
    s_plus: Iterable[int],
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Swap elements between the two sets until they overlap in >= k-1.

    Each swap moves one exclusive element of the first set into the second;
    the derivative sign of the swapped set decides which of the two roles it
    takes over, so the sign conditions survive every iteration.
    """
    s_minus = set(inst.subset(s_minus))
    s_plus = set(inst.subset(s_plus))
    k = inst.k
    while len(s_minus & s_plus) <= k - 2:
        before = len(s_minus & s_plus)
        i_minus = min(s_minus - s_plus)
        i_plus = min(s_plus - s_minus)
        swapped = (s_plus - {i_plus}) | {i_minus}
        if h_derivative_continuous(inst, r_star, swapped) >= 0.0:
            s_minus = swapped  # overlaps s_plus in exactly k-1 elements
        else:
            s_plus = swapped
        if len(s_minus & s_plus) <= before:
            raise SwapStall("overlap failed to grow; swap loop is buggy")
    return tuple(sorted(s_minus)), tuple(sorted(s_plus))


def compute_psi_star(
    inst: Instance,
    r_star: float,
    tie_tol: float = TIE_TOL,
    tol_psi: float = TOL_PSI,
) -> PsiSolution:
    """Build the calibrated almost-integer solution at r_star.

    alpha solves alpha * sum_{S+} P + (1 - alpha) * sum_{S-} P = 1.  When the
    two sums fail to straddle 1 by at most tol_psi (threshold imprecision),
    alpha clamps to the nearer endpoint and the solution degrades to an
    integer one; a larger failure raises AlphaOutOfRange.
    """
    _require_continuous(inst)
    s_minus, s_plus = construct_s_minus_plus(inst, r_star, tie_tol=tie_tol)
    s_minus, s_plus = maximize_overlap(inst, r_star, s_minus, s_plus)
    p_minus = math.fsum(inst.dists[i].survival(r_star) for i in s_minus)
    p_plus = math.fsum(inst.dists[i].survival(r_star) for i in s_plus)
    if p_plus == p_minus:
        alpha = 1.0
    else:
        alpha = (1.0 - p_minus) / (p_plus - p_minus)
        alpha = min(max(alpha, 0.0), 1.0)
    if alpha <= _SNAP:
        alpha = 0.0
    elif alpha >= 1.0 - _SNAP:
        alpha = 1.0
    achieved = alpha * p_plus + (1.0 - alpha) * p_minus
    if abs(achieved - 1.0) > tol_psi:
        raise AlphaOutOfRange(
            f"survival sums {p_minus!r} and {p_plus!r} do not straddle 1 "
            f"within {tol_psi}; r_star={r_star!r} is too far from a minimizer"
        )
    psi = [0.0] * inst.n
    for i in s_plus:
        psi[i] = alpha
    for i in s_minus:
        psi[i] = 1.0 if i in s_plus else 1.0 - alpha
    frac_pair = None
    if 0.0 < alpha < 1.0 and s_plus != s_minus:
        (ell,) = set(s_plus) - set(s_minus)
        (m,) = set(s_minus) - set(s_plus)
        frac_pair = (ell, m)
    return PsiSolution(
        r_star=float(r_star),
        s_minus=s_minus,
        s_plus=s_plus,
        alpha=alpha,
        frac_pair=frac_pair,
        psi=tuple(psi),
    )


def build_policy(inst: Instance, sol: PsiSolution) -> FreeOrderPolicy:
    """Free-order policy over the psi-support with threshold r_star.

    Entries are the integral variables plus one mixture entry for the
    fractional pair, sorted by weakly-decreasing conditional tail
    expectation (zero-tail entries last, ties by lowest original index).
    """
    entries: list[VariableRef] = [
        PlainVar(i) for i, w in enumerate(sol.psi) if w == 1.0
    ]
    if sol.frac_pair is not None:
        ell, m = sol.frac_pair
        entries.append(MixtureVar(ell=ell, m=m, weight=sol.psi[ell]))

    def sort_key(entry: VariableRef):
        d = entry.distribution(inst)
        cond = d.cond_exp_ge(sol.r_star) if d.survival(sol.r_star) > 0.0 else 0.0
        return (-cond, entry.tie_index)

    return FreeOrderPolicy(
        entries=tuple(sorted(entries, key=sort_key)), threshold=sol.r_star
    )


def derandomize(
    inst: Instance, sol: PsiSolution, policy: FreeOrderPolicy
) -> DerandomizeResult:
    """Replace the mixture entry by its better branch, keeping the order.

    The reward of each branch is the policy's conditional expected reward
    given the branch coin, so the better branch earns at least the
    unconditional expectation; a tie keeps the first branch.
    """
    slot = next(
        (j for j, e in enumerate(policy.entries) if isinstance(e, MixtureVar)), None
    )
    if slot is None:
        stats = evaluate(policy.as_threshold_policy(inst))
        order = tuple(e.index for e in policy.entries)
        return DerandomizeResult(
            subset=tuple(sorted(order)),
            order=order,
            expected_reward=stats.expected_reward,
        )
    mix = policy.entries[slot]
    rewards = []
    for branch in (mix.ell, mix.m):
        entries = list(policy.entries)
        entries[slot] = PlainVar(branch)
        variant = FreeOrderPolicy(entries=tuple(entries), threshold=policy.threshold)
        stats = evaluate(variant.as_threshold_policy(inst))
        rewards.append((stats.expected_reward, branch, variant))
    (reward, _, variant) = max(rewards, key=lambda t: t[0])
    order = tuple(e.index for e in variant.entries)
    return DerandomizeResult(
        subset=tuple(sorted(order)), order=order, expected_reward=reward
    )


@dataclass(frozen=True)
class ContinuousResult:
    """Everything the pipeline produces for one instance."""

    bound: BoundResult
    solution: PsiSolution
    policy: FreeOrderPolicy
    stats: PolicyStats
    derandomized: DerandomizeResult


def solve_continuous(inst: Instance, tol_psi: float = TOL_PSI) -> ContinuousResult:
    """End-to-end pipeline: bound, psi*, policy, statistics, derandomized set.

    The minimizer bracket runs at width 1e-8 * mu_max.  The tie tolerance is
    widened to 4x that width: a genuine tie at the true minimizer separates
    by at most twice the bracket width at the approximate one, so this keeps
    every true tie inside the class while any spurious member changes the
    envelope value by a comparably negligible amount.
    """
    _require_continuous(inst)
    xi = XI_SCALE * inst.mu_max
    bound = minimize_hmax(inst, xi)
    tie_tol = TIE_TOL + 4.0 * xi
    sol = compute_psi_star(inst, bound.r_hat, tie_tol=tie_tol, tol_psi=tol_psi)
    policy = build_policy(inst, sol)
    stats = evaluate(policy.as_threshold_policy(inst))
    der = derandomize(inst, sol, policy)
    return ContinuousResult(
        bound=bound, solution=sol, policy=policy, stats=stats, derandomized=der
    )
