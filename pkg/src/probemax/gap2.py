"""Deterministic probing sets with a factor-2 guarantee for general variables.

Pipeline: bracket a minimizer of the upper envelope to width
xi = epsilon * mu_max / (20 k); at each bracket endpoint, build the envelope-
achieving size-k set that additionally maximizes the tail moments at a probe
point xi beyond the endpoint (outward on each side); keep whichever of the
two sets has the larger root threshold rho.  The chosen set S satisfies

    U* <= (2 + epsilon) * rho(S),

and the stopping policy with threshold rho(S) earns at least rho(S) in
expectation under any inspection order, so E[max of S] is within a factor
2 + epsilon of the upper bound (hence of the adaptive optimum).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import GuaranteeViolation, InvalidEpsilon
from .minmax import BoundResult, Instance, g_values, minimize_hmax, rho
from .policy_eval import ThresholdPolicy

#: Absolute tolerance for declaring two tail moments tied at an anchor point.
#: Exact closed-form oracles make genuine ties representable; this only
#: guards float rounding.
TIE_TOL = 1e-12

#: Relative slack for the internal factor-(2 + epsilon) assertion.
GUARANTEE_RTOL = 1e-9

XI_DENOMINATOR = 20.0


@dataclass(frozen=True)
class TieClass:
    """Structure of the envelope maximizers at an anchor point.

    order sorts all indices by weakly-decreasing G_i(anchor); positions
    k_minus..k_plus (0-based, inclusive) share the G value at position k-1.
    Every envelope-achieving size-k set is prefix plus `slots` members of the
    tied block.
    """

    order: tuple[int, ...]
    k_minus: int
    k_plus: int
    prefix: tuple[int, ...]
    slots: int

    @property
    def tied(self) -> tuple[int, ...]:
        return self.order[self.k_minus : self.k_plus + 1]


def tie_class_at(inst: Instance, r_anchor: float, tol: float = TIE_TOL) -> TieClass:
    """Tie class of the size-k envelope maximizers at r_anchor."""
    gs = g_values(inst, r_anchor)
    order = sorted(range(inst.n), key=lambda i: (-gs[i], i))
    pivot = gs[order[inst.k - 1]]
    k_minus = inst.k - 1
    while k_minus > 0 and abs(gs[order[k_minus - 1]] - pivot) <= tol:
        k_minus -= 1
    k_plus = inst.k - 1
    while k_plus + 1 < inst.n and abs(gs[order[k_plus + 1]] - pivot) <= tol:
        k_plus += 1
    return TieClass(
        order=tuple(order),
        k_minus=k_minus,
        k_plus=k_plus,
        prefix=tuple(order[:k_minus]),
        slots=inst.k - k_minus,
    )


@dataclass(frozen=True)
class Gap2Result:
    """The two candidate sets, their root thresholds, and the winner."""

    s_tilde_plus: tuple[int, ...]
    s_tilde_minus: tuple[int, ...]
    rho_plus: float
    rho_minus: float
    chosen: tuple[int, ...]
    threshold: float
    bound: BoundResult
    epsilon: float
    instance: Instance


def narrow_interval(inst: Instance, epsilon: float) -> BoundResult:
    """Bracket a minimizer of the envelope to width epsilon * mu_max / (20 k)."""
    if not (isinstance(epsilon, (int, float)) and 0.0 < epsilon < 1.0):
        raise InvalidEpsilon(f"epsilon={epsilon!r} must lie strictly inside (0, 1)")
    xi = epsilon * inst.mu_max / (XI_DENOMINATOR * inst.k)
    return minimize_hmax(inst, xi)


def build_tilde_set(inst: Instance, r_anchor: float, r_probe: float) -> tuple[int, ...]:
    """The envelope maximizer at r_anchor that maximizes tail moments at r_probe.

    Sorting by G_i(r_anchor) fixes a forced prefix; the slots left inside the
    tie class are filled in weakly-decreasing order of G_i(r_probe), ties by
    lowest index.
    """
    tc = tie_class_at(inst, r_anchor)
    gs_probe = g_values(inst, r_probe)
    fill = sorted(tc.tied, key=lambda i: (-gs_probe[i], i))[: tc.slots]
    return tuple(sorted(tc.prefix + tuple(fill)))


def select_gap2_set(inst: Instance, epsilon: float = 0.05) -> Gap2Result:
    """Run the full construction and verify its factor-(2 + epsilon) guarantee.

    The final inequality is a theorem, so its failure beyond float slack
    means an implementation bug and raises GuaranteeViolation.
    """
    bound = narrow_interval(inst, epsilon)
    xi = bound.xi
    s_plus = build_tilde_set(inst, bound.r_plus, bound.r_plus + xi)
    s_minus = build_tilde_set(inst, bound.r_minus, bound.r_minus - xi)
    rho_plus = rho(inst, s_plus)
    rho_minus = rho(inst, s_minus)
    if rho_plus >= rho_minus:
        chosen, threshold = s_plus, rho_plus
    else:
        chosen, threshold = s_minus, rho_minus
    if bound.u_star > (2.0 + epsilon) * threshold + GUARANTEE_RTOL * bound.u_star:
        raise GuaranteeViolation(
            f"u_star={bound.u_star!r} exceeds (2 + {epsilon}) * rho={threshold!r}"
        )
    return Gap2Result(
        s_tilde_plus=s_plus,
        s_tilde_minus=s_minus,
        rho_plus=rho_plus,
        rho_minus=rho_minus,
        chosen=chosen,
        threshold=threshold,
        bound=bound,
        epsilon=float(epsilon),
        instance=inst,
    )


def gap2_policy(result: Gap2Result) -> ThresholdPolicy:
    """Stopping policy over the chosen set: accept the first sample >= rho.

    Inspection order is ascending index; the guarantee holds for any order.
    """
    entries = [result.instance.dists[i] for i in result.chosen]
    return ThresholdPolicy(entries=entries, threshold=result.threshold)
