"""Exact finite discrete probability distributions over the rationals.

Values and probabilities are `fractions.Fraction` throughout, so every CDF
value, quantile, and convolution computed here is exact. That exactness is
what turns the finite breakpoint sweeps elsewhere in the package into genuine
decisions of "for all confidence levels" statements instead of approximations.
"""

from __future__ import annotations

import itertools
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)

# Practical ceiling on joint support size; exact enumeration past this point
# is no longer desk-scale.
MAX_JOINT_POINTS = 100_000


def _merged_atoms(pairs: Iterable[tuple]) -> tuple[tuple[Fraction, Fraction], ...]:
    acc: dict[Fraction, Fraction] = {}
    for v, p in pairs:
        v = Fraction(v)
        acc[v] = acc.get(v, _ZERO) + Fraction(p)
    return tuple(sorted((v, p) for v, p in acc.items() if p != 0))


@dataclass(frozen=True)
class DiscreteDistribution:
    """A finite loss distribution with exact rational atoms.

    ``atoms`` is kept in canonical form: values strictly increasing, every
    probability positive, probabilities summing to exactly 1. Duplicate
    values are merged and zero-probability entries dropped on construction,
    so equality of two instances is equality of the laws they represent.
    """

    atoms: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        atoms = _merged_atoms(self.atoms)
        if not atoms:
            raise ValueError("a distribution needs at least one atom")
        if any(p < 0 for _, p in atoms):
            raise ValueError("atom probabilities must be positive")
        total = sum(p for _, p in atoms)
        if total != 1:
            raise ValueError(f"atom probabilities must sum to exactly 1, got {total}")
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def from_weighted_values(cls, pairs: Iterable[tuple]) -> "DiscreteDistribution":
        """Build a distribution from (value, weight) pairs.

        Weights may repeat values and need not sum to one; they are merged
        and normalized. Weights must be nonnegative with a positive total.
        """
        items = [(Fraction(v), Fraction(w)) for v, w in pairs]
        if not items:
            raise ValueError("at least one (value, weight) pair is required")
        if any(w < 0 for _, w in items):
            raise ValueError("weights must be nonnegative")
        total = sum(w for _, w in items)
        if total == 0:
            raise ValueError("total weight must be positive")
        return cls(tuple((v, w / total) for v, w in items))

    @classmethod
    def point_mass(cls, value) -> "DiscreteDistribution":
        """The degenerate distribution concentrated at ``value``."""
        return cls(((Fraction(value), _ONE),))

    @classmethod
    def bernoulli(cls, p) -> "DiscreteDistribution":
        """Loss equal to 1 with probability ``p`` and to 0 otherwise."""
        p = Fraction(p)
        if not _ZERO < p < _ONE:
            raise ValueError("bernoulli parameter must lie strictly inside (0, 1)")
        return cls(((_ZERO, 1 - p), (_ONE, p)))

    @cached_property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(v for v, _ in self.atoms)

    @cached_property
    def probs(self) -> tuple[Fraction, ...]:
        return tuple(p for _, p in self.atoms)

    @cached_property
    def cumulative(self) -> tuple[Fraction, ...]:
        """Cumulative probability at each atom; strictly increasing, ends at 1."""
        out = []
        acc = _ZERO
        for p in self.probs:
            acc += p
            out.append(acc)
        return tuple(out)

    def breakpoints(self) -> tuple[Fraction, ...]:
        """Probability levels in (0, 1] where the quantile function jumps."""
        return self.cumulative

    def cdf(self, x) -> Fraction:
        """P(X <= x); a right-continuous step function of x."""
        i = bisect_right(self.values, Fraction(x))
        return _ZERO if i == 0 else self.cumulative[i - 1]

    def quantile(self, alpha) -> Fraction:
        """Left-continuous generalized inverse, inf{x : F(x) >= alpha}.

        At a cumulative-probability breakpoint this returns the value attained
        on the interval ending there. ``alpha`` must lie strictly inside
        (0, 1).
        """
        a = Fraction(alpha)
        if not _ZERO < a < _ONE:
            raise ValueError(f"alpha must lie strictly inside (0, 1), got {a}")
        return self._quantile_step(a)

    def _quantile_step(self, alpha: Fraction) -> Fraction:
        # Valid on (0, 1]. The breakpoint machinery evaluates the quantile
        # step function at the right endpoint of each interval, which for the
        # last interval is the level 1 itself.
        return self.values[bisect_left(self.cumulative, alpha)]

    def mean(self) -> Fraction:
        """Exact expectation."""
        return sum((v * p for v, p in self.atoms), _ZERO)

    def shift(self, c) -> "DiscreteDistribution":
        """The law of X + c."""
        c = Fraction(c)
        return DiscreteDistribution(tuple((v + c, p) for v, p in self.atoms))

    def scale(self, factor) -> "DiscreteDistribution":
        """The law of factor * X."""
        factor = Fraction(factor)
        return DiscreteDistribution(tuple((v * factor, p) for v, p in self.atoms))

    def __len__(self) -> int:
        return len(self.atoms)


@dataclass(frozen=True)
class JointDiscreteDistribution:
    """A finite joint law on rational points in n dimensions.

    This is the carrier for couplings: ``points`` maps distinct coordinate
    tuples to positive probabilities summing to exactly 1. Points are merged
    and sorted on construction.
    """

    points: tuple[tuple[tuple[Fraction, ...], Fraction], ...]

    def __post_init__(self) -> None:
        raw = [
            (tuple(Fraction(c) for c in coords), Fraction(p))
            for coords, p in self.points
        ]
        if not raw:
            raise ValueError("a joint distribution needs at least one point")
        n = len(raw[0][0])
        if n == 0:
            raise ValueError("points must have at least one coordinate")
        if any(len(coords) != n for coords, _ in raw):
            raise ValueError("all points must share the same dimension")
        acc: dict[tuple[Fraction, ...], Fraction] = {}
        for coords, p in raw:
            acc[coords] = acc.get(coords, _ZERO) + p
        pts = tuple(sorted((c, p) for c, p in acc.items() if p != 0))
        if len(pts) > MAX_JOINT_POINTS:
            raise ValueError(f"joint support exceeds the {MAX_JOINT_POINTS}-point guard")
        if any(p < 0 for _, p in pts):
            raise ValueError("point probabilities must be positive")
        if sum(p for _, p in pts) != 1:
            raise ValueError("point probabilities must sum to exactly 1")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_weighted_points(cls, pairs: Iterable[tuple]) -> "JointDiscreteDistribution":
        """Build a joint law from (coords, weight) pairs, merging and normalizing."""
        items = [(tuple(Fraction(c) for c in coords), Fraction(w)) for coords, w in pairs]
        if not items:
            raise ValueError("at least one (coords, weight) pair is required")
        if any(w < 0 for _, w in items):
            raise ValueError("weights must be nonnegative")
        total = sum(w for _, w in items)
        if total == 0:
            raise ValueError("total weight must be positive")
        return cls(tuple((c, w / total) for c, w in items))

    @property
    def dimension(self) -> int:
        return len(self.points[0][0])

    def support(self) -> tuple[tuple[Fraction, ...], ...]:
        """The distinct coordinate tuples carrying positive probability."""
        return tuple(coords for coords, _ in self.points)

    def marginal(self, i: int) -> DiscreteDistribution:
        """Project onto coordinate ``i`` (0-based), merging collisions."""
        if not 0 <= i < self.dimension:
            raise IndexError(
                f"coordinate index {i} out of range for dimension {self.dimension}"
            )
        return DiscreteDistribution(tuple((coords[i], p) for coords, p in self.points))

    def marginals(self) -> tuple[DiscreteDistribution, ...]:
        return tuple(self.marginal(i) for i in range(self.dimension))

    def sum_distribution(self) -> DiscreteDistribution:
        """The exact law of the coordinate sum."""
        return DiscreteDistribution(
            tuple((sum(coords), p) for coords, p in self.points)
        )

    def __len__(self) -> int:
        return len(self.points)


def independent_product(*marginals: DiscreteDistribution) -> JointDiscreteDistribution:
    """Joint law with the given marginals and independent coordinates."""
    if not marginals:
        raise ValueError("at least one marginal is required")
    points = []
    for combo in itertools.product(*(m.atoms for m in marginals)):
        coords = tuple(v for v, _ in combo)
        prob = math.prod((p for _, p in combo), start=_ONE)
        points.append((coords, prob))
    return JointDiscreteDistribution(tuple(points))
