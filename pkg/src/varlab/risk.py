"""Risk functionals on exact discrete distributions.

VaR is the left-continuous quantile of the loss law; the stop-loss transform
and the convex order built on it are the comparison tools used to rank
aggregate risks with fixed marginals.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .distributions import DiscreteDistribution

_ZERO = Fraction(0)


def var(d: DiscreteDistribution, alpha) -> Fraction:
    """Value at Risk of the loss ``d`` at confidence level ``alpha`` in (0, 1)."""
    return d.quantile(alpha)


def stop_loss(d: DiscreteDistribution, c) -> Fraction:
    """E[(X - c)^+], exactly.

    As a function of c this is convex, non-increasing, and piecewise linear
    with kinks only at support values.
    """
    c = Fraction(c)
    total = _ZERO
    for v, p in d.atoms:
        if v > c:
            total += (v - c) * p
    return total


def _suffix_tables(d: DiscreteDistribution):
    # suffix_p[k] / suffix_vp[k]: total mass and weighted value sum of atoms
    # k..end; lets stop-loss evaluation at many kinks run in O(log m) each.
    m = len(d.atoms)
    suffix_p = [_ZERO] * (m + 1)
    suffix_vp = [_ZERO] * (m + 1)
    for k in range(m - 1, -1, -1):
        v, p = d.atoms[k]
        suffix_p[k] = suffix_p[k + 1] + p
        suffix_vp[k] = suffix_vp[k + 1] + v * p
    return suffix_p, suffix_vp


def _stop_loss_at(d: DiscreteDistribution, suffix_p, suffix_vp, c: Fraction) -> Fraction:
    k = bisect_right(d.values, c)
    return suffix_vp[k] - c * suffix_p[k]


@dataclass(frozen=True)
class ConvexOrderVerdict:
    """Outcome of a convex-order comparison.

    ``holds`` requires exactly equal means plus stop-loss dominance at every
    kink. When the means agree but dominance fails, ``witness_c`` names the
    first kink where it does.
    """

    holds: bool
    mean_equal: bool
    witness_c: Fraction | None = None


def convex_order_leq(a: DiscreteDistribution, b: DiscreteDistribution) -> ConvexOrderVerdict:
    """Decide whether ``a`` precedes ``b`` in the convex order.

    Both stop-loss transforms are piecewise linear with kinks only at support
    values, and they share asymptotes when the means agree, so dominance at
    the union of the two supports decides dominance at every real threshold.
    Arithmetic is exact; there is no tolerance.
    """
    if a.mean() != b.mean():
        return ConvexOrderVerdict(holds=False, mean_equal=False)
    tables_a = _suffix_tables(a)
    tables_b = _suffix_tables(b)
    for c in sorted(set(a.values) | set(b.values)):
        if _stop_loss_at(a, *tables_a, c) > _stop_loss_at(b, *tables_b, c):
            return ConvexOrderVerdict(holds=False, mean_equal=True, witness_c=c)
    return ConvexOrderVerdict(holds=True, mean_equal=True)
