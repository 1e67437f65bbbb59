"""Exact adversarial lower-bound enumeration for learning functions.

Builds, for a target sample size m, the family of 2^(2m) uniform
distributions concentrated on the graphs of all labelings of a shattered
set of 2m instances, and evaluates a deterministic learner against every
one of them by full enumeration of the (2m)^m instance tuples.  All
quantities are exact rationals; the pairing identity that drives the 1/4
lower bound is asserted inside every enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .combinatorics import shatters
from .learners import LearningFunction
from .model import (
    BudgetError,
    DiscreteDistribution,
    ExplicitSpace,
    HypothesisSpace,
    Instance,
    MultiSample,
    Sample,
    approximation_error,
    check_instance_tuple,
)

DEFAULT_MAX_M = 3

ERROR_THRESHOLD = Fraction(1, 8)
EXPECTED_ERROR_FLOOR = Fraction(1, 4)
TAIL_FLOOR = Fraction(1, 7)


class PairingIdentityError(Exception):
    """The flip-pair counting identity failed, which indicates a
    non-deterministic learner."""


@dataclass(frozen=True)
class NflInstance:
    """The adversarial construction for one sample size m: a set S of 2m
    instances, all T = 2^(2m) labelings of S in lexicographic bit order, and
    for each labeling the uniform distribution on its graph."""

    m: int
    instances: tuple[Instance, ...]
    labelings: tuple[tuple[int, ...], ...]
    distributions: tuple[DiscreteDistribution, ...]
    ambient: HypothesisSpace | None

    @property
    def t(self) -> int:
        return len(self.labelings)


@dataclass(frozen=True)
class NflReport:
    """Exact per-labeling expected errors and the tail bound for the worst
    labeling, with the lower-bound assertions evaluated."""

    m: int
    learner: str
    expected_errors: tuple[Fraction, ...]
    max_expected_error: Fraction
    argmax_index: int
    average_expected_error: Fraction
    tail_probability: Fraction
    markov_lower_bound: Fraction
    opt_of_chosen: Fraction
    max_at_least_quarter: bool
    average_at_least_quarter: bool
    tail_at_least_seventh: bool

    @property
    def passed(self) -> bool:
        return (self.max_at_least_quarter and self.average_at_least_quarter
                and self.tail_at_least_seventh)

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "learner": self.learner,
            "expected_errors": [str(e) for e in self.expected_errors],
            "max_expected_error": str(self.max_expected_error),
            "argmax_index": self.argmax_index,
            "average_expected_error": str(self.average_expected_error),
            "tail_probability": str(self.tail_probability),
            "markov_lower_bound": str(self.markov_lower_bound),
            "opt_of_chosen": str(self.opt_of_chosen),
            "max_at_least_quarter": self.max_at_least_quarter,
            "average_at_least_quarter": self.average_at_least_quarter,
            "tail_at_least_seventh": self.tail_at_least_seventh,
            "passed": self.passed,
        }


def build_nfl_instance(instances: Sequence, m: int,
                       ambient: HypothesisSpace | None = None) -> NflInstance:
    """Assemble the construction over the given 2m distinct instances.

    When an ambient space is supplied it must shatter the instance set
    (verified); otherwise the full class over the instances is implied.
    """
    points = check_instance_tuple([_as_inst(x) for x in instances])
    if m < 1:
        raise ValueError("m must be >= 1")
    if len(points) != 2 * m:
        raise ValueError(f"need exactly 2m = {2 * m} distinct instances, "
                         f"got {len(points)}")
    if ambient is not None:
        result = shatters(ambient, points)
        if not result.shattered:
            raise ValueError(
                f"the ambient space does not shatter the instance set "
                f"({result.status})")
    n = len(points)
    labelings = tuple(
        tuple((i >> (n - 1 - j)) & 1 for j in range(n))
        for i in range(2 ** n))
    weight = Fraction(1, n)
    distributions = tuple(
        DiscreteDistribution([(Sample(x, b), weight)
                              for x, b in zip(points, bits)])
        for bits in labelings)
    return NflInstance(m=m, instances=points, labelings=labelings,
                       distributions=distributions, ambient=ambient)


def _as_inst(x):
    from .model import as_instance
    return as_instance(x)


def required_learner_calls(m: int) -> int:
    return (2 * m) ** m * 2 ** (2 * m)


def _check_budget(m: int, allow_large: bool) -> None:
    if m <= DEFAULT_MAX_M or allow_large:
        return
    raise BudgetError(
        f"m = {m} needs {required_learner_calls(m)} learner applications; "
        f"pass allow_large=True to enumerate beyond m = {DEFAULT_MAX_M}",
        required=required_learner_calls(m))


def _enumerate(learner: LearningFunction, inst: NflInstance,
               allow_large: bool):
    """Core enumeration.

    Returns (mismatch_counts, totals): for each labeling index i and each
    instance tuple index j, ``mismatch_counts[i][j]`` is the number of
    points of S on which the learner's output (trained on the tuple labeled
    by f_i) disagrees with f_i; ``totals[i]`` is its sum over j.

    Inside the loop over tuples the flip-pair identity is checked: for every
    instance tuple and every point outside it, exactly half of the labelings
    produce a disagreement at that point.
    """
    _check_budget(inst.m, allow_large)
    points = inst.instances
    n = len(points)
    t = inst.t
    f_masks = [sum(b << (n - 1 - j) for j, b in enumerate(bits))
               for bits in inst.labelings]
    memo: dict[MultiSample, int] = {}

    def learned_mask(zbar: MultiSample) -> int:
        mask = memo.get(zbar)
        if mask is None:
            h = learner(zbar)
            mask = sum((1 if h(points[j]) else 0) << (n - 1 - j)
                       for j in range(n))
            memo[zbar] = mask
        return mask

    mismatch_counts = [[0] * (2 * inst.m) ** inst.m for _ in range(t)]
    totals = [0] * t
    for j, idx_tuple in enumerate(product(range(n), repeat=inst.m)):
        masks_j = []
        for i in range(t):
            bits = inst.labelings[i]
            zbar = MultiSample(tuple(Sample(points[a], bits[a])
                                     for a in idx_tuple))
            mask = learned_mask(zbar)
            masks_j.append(mask)
            count = bin(mask ^ f_masks[i]).count("1")
            mismatch_counts[i][j] = count
            totals[i] += count
        used = set(idx_tuple)
        for r in range(n):
            if r in used:
                continue
            bit = 1 << (n - 1 - r)
            disagree = sum(1 for i in range(t)
                           if (masks_j[i] ^ f_masks[i]) & bit)
            if disagree * 2 != t:
                raise PairingIdentityError(
                    f"flip-pair identity violated at tuple {j}, point {r}: "
                    f"{disagree} disagreements over {t} labelings; the "
                    f"learner is not a deterministic function of the sample")
    return mismatch_counts, totals


def nfl_expected_errors(learner: LearningFunction, inst: NflInstance,
                        allow_large: bool = False) -> list[Fraction]:
    """For each labeling f_i: the exact expected true error of the learner
    over training tuples drawn from the graph distribution of f_i."""
    _, totals = _enumerate(learner, inst, allow_large)
    k = (2 * inst.m) ** inst.m
    return [Fraction(total, k * 2 * inst.m) for total in totals]


def nfl_report(learner: LearningFunction, inst: NflInstance,
               allow_large: bool = False) -> NflReport:
    """Full evaluation: expected errors, the worst labeling's exact tail
    probability P(error > 1/8), the Markov cross-check, and the lower-bound
    assertions (max and average >= 1/4, tail >= 1/7)."""
    mismatch_counts, totals = _enumerate(learner, inst, allow_large)
    m = inst.m
    k = (2 * m) ** m
    errors = [Fraction(total, k * 2 * m) for total in totals]
    best = max(errors)
    i_star = errors.index(best)
    # error > 1/8 over 2m points  <=>  mismatches/2m > 1/8.
    tail_hits = sum(1 for c in mismatch_counts[i_star]
                    if Fraction(c, 2 * m) > ERROR_THRESHOLD)
    tail = Fraction(tail_hits, k)
    markov = (best - ERROR_THRESHOLD) / (1 - ERROR_THRESHOLD)
    if tail < markov:
        raise AssertionError(
            f"tail probability {tail} fell below its Markov lower bound "
            f"{markov}")
    space = inst.ambient or ExplicitSpace.full(inst.instances)
    opt = approximation_error(space, inst.distributions[i_star])
    avg = sum(errors, Fraction(0)) / len(errors)
    return NflReport(
        m=m,
        learner=learner.name,
        expected_errors=tuple(errors),
        max_expected_error=best,
        argmax_index=i_star,
        average_expected_error=avg,
        tail_probability=tail,
        markov_lower_bound=markov,
        opt_of_chosen=opt,
        max_at_least_quarter=best >= EXPECTED_ERROR_FLOOR,
        average_at_least_quarter=avg >= EXPECTED_ERROR_FLOOR,
        tail_at_least_seventh=tail >= TAIL_FLOOR,
    )
