"""Deciding VaR subadditivity across every confidence level, exactly.

Every quantile function involved in the aggregate inequality is a
left-continuous step function, constant between consecutive
cumulative-probability breakpoints. The union of all breakpoints therefore
cuts (0, 1) into finitely many intervals on which both sides of the
inequality are constant, and evaluating at each interval's right endpoint
settles the universally quantified statement with no tolerance at all.

Also here: seeded generators for comonotonic couplings and for random
transport plans with prescribed marginals, and the classic independent
Bernoulli pair on which VaR fails subadditivity.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .comonotonicity import comonotonic_coupling, is_comonotonic
from .distributions import (
    MAX_JOINT_POINTS,
    DiscreteDistribution,
    JointDiscreteDistribution,
    independent_product,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class IntervalVerdict:
    """Comparison of the two sides of the inequality on one breakpoint interval.

    ``alpha_star`` is the right endpoint of the interval; by left continuity
    the quantile step functions attain their interval value there, so the
    recorded numbers represent every level inside the interval.
    """

    alpha_star: Fraction
    var_sum: Fraction
    sum_of_vars: Fraction
    relation: str  # "<", "=" or ">"


@dataclass(frozen=True)
class SubadditivityReport:
    """Exact decision of the all-levels subadditivity and additivity statements."""

    breakpoints: tuple[Fraction, ...]
    verdicts: tuple[IntervalVerdict, ...]
    subadditive_everywhere: bool
    additive_everywhere: bool
    first_violation: Fraction | None


def _critical_levels(
    marginals: tuple[DiscreteDistribution, ...], total: DiscreteDistribution
) -> tuple[Fraction, ...]:
    levels = set(total.cumulative)
    for m in marginals:
        levels.update(m.cumulative)
    return tuple(sorted(levels))


def critical_alphas(j: JointDiscreteDistribution) -> tuple[Fraction, ...]:
    """Breakpoints of all marginal quantiles and of the sum's quantile.

    Sorted, each in (0, 1], always ending at 1. Between consecutive entries
    every quantile function in the subadditivity inequality is constant.
    """
    return _critical_levels(j.marginals(), j.sum_distribution())


def subadditivity_report(j: JointDiscreteDistribution) -> SubadditivityReport:
    """Evaluate the aggregate-vs-sum-of-VaRs comparison on every interval."""
    ms = j.marginals()
    s = j.sum_distribution()
    verdicts = []
    first_violation = None
    additive = True
    for b in _critical_levels(ms, s):
        var_sum = s._quantile_step(b)
        sum_of_vars = sum(m._quantile_step(b) for m in ms)
        if var_sum < sum_of_vars:
            relation = "<"
            additive = False
        elif var_sum == sum_of_vars:
            relation = "="
        else:
            relation = ">"
            additive = False
            if first_violation is None:
                first_violation = b
        verdicts.append(IntervalVerdict(b, var_sum, sum_of_vars, relation))
    return SubadditivityReport(
        breakpoints=tuple(v.alpha_star for v in verdicts),
        verdicts=tuple(verdicts),
        subadditive_everywhere=first_violation is None,
        additive_everywhere=additive,
        first_violation=first_violation,
    )


@dataclass(frozen=True)
class TrialVerdict:
    """Outcome of one instance of the comonotonicity / subadditivity equivalence.

    ``consistent`` is false only if the three flags disagree, which would be
    a counterexample to the equivalence and must never occur.
    """

    comonotonic: bool
    subadditive_everywhere: bool
    additive_everywhere: bool
    consistent: bool


def equivalence_trial(j: JointDiscreteDistribution) -> TrialVerdict:
    """Run both detectors on one instance and check that they agree."""
    como = is_comonotonic(j).comonotonic
    report = subadditivity_report(j)
    return TrialVerdict(
        comonotonic=como,
        subadditive_everywhere=report.subadditive_everywhere,
        additive_everywhere=report.additive_everywhere,
        consistent=como == report.subadditive_everywhere == report.additive_everywhere,
    )


@dataclass(frozen=True)
class BernoulliCaseVerdict:
    """One independent-Bernoulli superadditivity case, evaluated exactly."""

    p: Fraction
    q: Fraction
    alpha: Fraction
    precondition: bool
    superadditive: bool
    var_sum: Fraction
    var_x: Fraction
    var_y: Fraction


def bernoulli_counterexample(p, q, alpha) -> BernoulliCaseVerdict:
    """Independent Bernoulli losses where VaR fails to be subadditive.

    With X ~ Bernoulli(p) and Y ~ Bernoulli(q) independent, any level with
    (1-p)(1-q) < alpha < 1 - max(p, q) leaves both marginal VaRs at zero
    while the sum's VaR is 1. The lower comparison must be strict: at
    alpha = (1-p)(1-q) the sum's CDF already reaches alpha at zero, so the
    left-continuous quantile of the sum is still zero and the case is
    additive rather than superadditive. Whenever ``precondition`` is true,
    ``superadditive`` is guaranteed.
    """
    p = Fraction(p)
    q = Fraction(q)
    a = Fraction(alpha)
    for name, val in (("p", p), ("q", q), ("alpha", a)):
        if not _ZERO < val < _ONE:
            raise ValueError(f"{name} must lie strictly inside (0, 1), got {val}")
    x = DiscreteDistribution.bernoulli(p)
    y = DiscreteDistribution.bernoulli(q)
    joint = independent_product(x, y)
    var_x = x.quantile(a)
    var_y = y.quantile(a)
    var_sum = joint.sum_distribution().quantile(a)
    precondition = (1 - p) * (1 - q) < a < 1 - max(p, q)
    return BernoulliCaseVerdict(
        p=p,
        q=q,
        alpha=a,
        precondition=precondition,
        superadditive=var_sum > var_x + var_y,
        var_sum=var_sum,
        var_x=var_x,
        var_y=var_y,
    )


@dataclass(frozen=True)
class GeneratorSpec:
    """Scale knobs for the seeded instance generators.

    Atom values are rationals in ``value_range`` with denominator at most
    ``denom_bound``; atom probabilities are multiples of 1/D for a
    per-marginal denominator D <= denom_bound. Small bounds keep the exact
    convolutions fast.
    """

    n: int = 2
    max_atoms: int = 8
    value_range: tuple[int, int] = (-10, 10)
    denom_bound: int = 16

    def __post_init__(self) -> None:
        lo, hi = self.value_range
        if self.n < 1 or self.max_atoms < 1 or self.denom_bound < 1 or lo > hi:
            raise ValueError(f"degenerate generator spec: {self}")


def _random_marginal(rng: random.Random, spec: GeneratorSpec) -> DiscreteDistribution:
    lo, hi = spec.value_range
    target = rng.randint(1, min(spec.max_atoms, spec.denom_bound))
    values: set[Fraction] = set()
    for _ in range(64 * target):
        if len(values) == target:
            break
        den = rng.randint(1, spec.denom_bound)
        values.add(Fraction(rng.randint(lo * den, hi * den), den))
    ordered = sorted(values)
    k = len(ordered)
    denom = rng.randint(k, spec.denom_bound)
    cuts = sorted(rng.sample(range(1, denom), k - 1))
    edges = [0, *cuts, denom]
    return DiscreteDistribution(
        tuple((v, Fraction(edges[t + 1] - edges[t], denom)) for t, v in enumerate(ordered))
    )


def random_comonotonic(
    seed: int, spec: GeneratorSpec = GeneratorSpec()
) -> JointDiscreteDistribution:
    """Comonotonic coupling of ``spec.n`` random marginals; deterministic per seed."""
    rng = random.Random(seed)
    return comonotonic_coupling([_random_marginal(rng, spec) for _ in range(spec.n)])


def random_coupling(
    seed: int, spec: GeneratorSpec = GeneratorSpec()
) -> JointDiscreteDistribution:
    """Random transport plan between random marginals; deterministic per seed.

    Each marginal is sliced into unit cells of mass 1/D on the common
    denominator D of all atom probabilities, each coordinate's cell list is
    shuffled independently, and matched cells are merged back into support
    points. The construction preserves every marginal exactly; with identity
    permutations it reproduces the comonotonic coupling.
    """
    rng = random.Random(seed)
    ms = [_random_marginal(rng, spec) for _ in range(spec.n)]
    denom = lcm(*(p.denominator for m in ms for p in m.probs))
    if denom > MAX_JOINT_POINTS:
        raise ValueError(
            f"common denominator {denom} exceeds the {MAX_JOINT_POINTS}-cell guard"
        )
    perms = []
    for _ in ms:
        perm = list(range(denom))
        rng.shuffle(perm)
        perms.append(perm)
    return _coupling_from_permutations(ms, perms)


def _coupling_from_permutations(ms, perms) -> JointDiscreteDistribution:
    denom = len(perms[0])
    cells = []
    for m in ms:
        atom_of_cell: list[int] = []
        for t, p in enumerate(m.probs):
            count = p * denom
            assert count.denominator == 1, "probabilities must divide the cell grid"
            atom_of_cell.extend([t] * int(count))
        cells.append(atom_of_cell)
    counts: dict[tuple[int, ...], int] = {}
    for c in range(denom):
        key = tuple(cell[perm[c]] for cell, perm in zip(cells, perms))
        counts[key] = counts.get(key, 0) + 1
    return JointDiscreteDistribution(
        tuple(
            (tuple(m.values[t] for m, t in zip(ms, key)), Fraction(cnt, denom))
            for key, cnt in counts.items()
        )
    )
