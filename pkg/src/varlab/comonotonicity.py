"""Comonotonicity of finite supports and joint laws.

A point set is comonotonic when it is totally ordered by the componentwise
order; a random vector is comonotonic when its support is. This module
detects that property, constructs the comonotonic coupling of given marginals
by the quantile transform, and provides two independently computed
characterizations (the min copula identity and convex-order maximality of the
coordinate sum) used to cross-check the detector.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .distributions import DiscreteDistribution, JointDiscreteDistribution

Point = tuple[Fraction, ...]

_ZERO = Fraction(0)


@dataclass(frozen=True)
class ComonotoneVerdict:
    """Detection result; ``witness`` is a genuinely violating pair on failure
    (one coordinate strictly rises while another strictly falls)."""

    comonotonic: bool
    witness: tuple[Point, Point] | None = None


def is_comonotonic_support(points: Iterable[Sequence]) -> ComonotoneVerdict:
    """Check whether a point set is totally ordered componentwise.

    The coordinate sum is strictly monotone along any componentwise chain, so
    sorting distinct points by their sum and comparing consecutive pairs is a
    complete check: if every consecutive pair is ordered the set is a chain,
    and any consecutive pair that is not ordered is incomparable and serves
    as the witness.
    """
    pts = [tuple(Fraction(c) for c in p) for p in points]
    if not pts:
        raise ValueError("point set must be non-empty")
    n = len(pts[0])
    if n == 0:
        raise ValueError("points must have at least one coordinate")
    if any(len(p) != n for p in pts):
        raise ValueError("points must all share the same dimension")
    chain = sorted(set(pts), key=lambda p: (sum(p), p))
    for a, b in zip(chain, chain[1:]):
        if not all(x <= y for x, y in zip(a, b)):
            return ComonotoneVerdict(comonotonic=False, witness=(a, b))
    return ComonotoneVerdict(comonotonic=True)


def is_comonotonic(j: JointDiscreteDistribution) -> ComonotoneVerdict:
    """Detect comonotonicity of a joint law via its support.

    Every stored point carries positive probability, so the point set is
    exactly the support.
    """
    return is_comonotonic_support(j.support())


def comonotonic_coupling(
    marginals: Iterable[DiscreteDistribution],
) -> JointDiscreteDistribution:
    """Couple the given marginals through a single uniform level.

    The unit interval is cut at every cumulative-probability breakpoint of
    every marginal. On each piece all marginal quantile functions are
    constant, so the piece contributes one support point whose coordinates
    are those quantile values (evaluated at the piece's right endpoint, by
    left continuity) and whose probability is the piece's length. The output
    reproduces the input marginals exactly.
    """
    ms = tuple(marginals)
    if not ms:
        raise ValueError("at least one marginal is required")
    levels = sorted(set().union(*(m.cumulative for m in ms)))
    points = []
    prev = _ZERO
    for b in levels:
        coords = tuple(m._quantile_step(b) for m in ms)
        points.append((coords, b - prev))
        prev = b
    return JointDiscreteDistribution(tuple(points))


def min_copula_check(j: JointDiscreteDistribution) -> bool:
    """Test whether the joint CDF equals the minimum of the marginal CDFs.

    Both sides are step functions determined by their values on the grid of
    per-coordinate support values, so checking every grid corner decides the
    identity everywhere. Cost grows with the product of the marginal support
    sizes.
    """
    ms = j.marginals()
    n = j.dimension
    values = [m.values for m in ms]
    cums = [m.cumulative for m in ms]
    sizes = [len(v) for v in values]
    index = [{v: k for k, v in enumerate(vs)} for vs in values]

    strides = [0] * n
    total = 1
    for i in range(n - 1, -1, -1):
        strides[i] = total
        total *= sizes[i]

    grid = [_ZERO] * total
    for coords, p in j.points:
        flat = sum(index[i][coords[i]] * strides[i] for i in range(n))
        grid[flat] += p

    # Running prefix sums along each axis turn the pmf grid into the joint
    # CDF at every corner.
    for i in range(n):
        stride = strides[i]
        size = sizes[i]
        for flat in range(total):
            if (flat // stride) % size:
                grid[flat] += grid[flat - stride]

    for flat in range(total):
        bound = min(cums[i][(flat // strides[i]) % sizes[i]] for i in range(n))
        if grid[flat] != bound:
            return False
    return True


def convex_order_max_check(j: JointDiscreteDistribution) -> bool:
    """Does the coordinate sum of ``j`` attain the convex-order maximum?

    The comonotonic rearrangement of the marginals maximizes the sum in the
    convex order over every joint law with those marginals, and the convex
    order separates distributions, so a single distribution comparison
    against the rearranged sum decides the question exactly.
    """
    rearranged = comonotonic_coupling(j.marginals())
    return j.sum_distribution() == rearranged.sum_distribution()
