"""Learning functions: deterministic maps from multi-samples to hypotheses.

The central construction is the sample-error minimizer, which enumerates the
realized labelings on the sample's instances, picks a labeling of minimal
sample error (lexicographically least among minimizers), and resolves it to
the canonically least witness hypothesis.  Tie-breaking is fully
deterministic so enumeration-based verification is reproducible.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from .model import (
    ExplicitSpace,
    Hypothesis,
    HypothesisSpace,
    InexactOracleError,
    MultiSample,
    _labeling_sample_error_counts,
    empirical_opt,
    sample_error,
)

SlackSchedule = Callable[[int], Fraction]
SampleBoundFn = Callable[[float], int]


def _zero_slack(m: int) -> Fraction:
    return Fraction(0)


def _always_one(eps: float) -> int:
    return 1


@dataclass(frozen=True, eq=False)
class LearningFunction:
    """A deterministic multi-sample -> hypothesis map with a declared
    sample-error slack schedule (0 for exact minimizers) and the sample size
    from which the schedule is honored."""

    name: str
    fn: Callable[[MultiSample], Hypothesis] = field(repr=False)
    space: HypothesisSpace | None = None
    slack: SlackSchedule = _zero_slack
    m0_nmse: SampleBoundFn = _always_one

    def __call__(self, zbar: MultiSample) -> Hypothesis:
        return self.fn(zbar)


def apply(learner: LearningFunction, zbar: MultiSample,
          trace: list | None = None) -> Hypothesis:
    """Evaluate the learner; optionally append (m, sample error of output,
    minimal sample error) to ``trace`` for harness consumption."""
    h = learner(zbar)
    if trace is not None:
        record = {"m": zbar.m, "sample_error": sample_error(h, zbar)}
        if learner.space is not None:
            record["empirical_opt"] = empirical_opt(
                learner.space, zbar, require_exact=False)
        trace.append(record)
    return h


def sem_learner(space: HypothesisSpace,
                declared_slack: tuple[SlackSchedule, SampleBoundFn] | None = None
                ) -> LearningFunction:
    """The sample-error minimizing learner for the space.

    With an exact restriction oracle the output's sample error equals the
    minimal sample error exactly.  With an inexact oracle the minimum over
    the *found* labelings may exceed the true minimum by an unknown amount,
    so construction is refused unless the caller declares a slack schedule
    explicitly.
    """
    if not space.oracle_exact and declared_slack is None:
        raise InexactOracleError(
            "sample-error minimization over an inexact oracle has unknown "
            "slack; pass declared_slack=(eps_of_m, m0_of_eps) to accept it")

    def fn(zbar: MultiSample) -> Hypothesis:
        instances = zbar.instances_sorted()
        table = space.dichotomies(instances)
        positions = {x: i for i, x in enumerate(instances)}
        counts = zbar.label_counts()
        best_labeling = None
        best_error = None
        for labeling in sorted(table.witnesses):
            err = _labeling_sample_error_counts(labeling, positions, counts,
                                                zbar.m)
            if best_error is None or err < best_error:
                best_labeling, best_error = labeling, err
        return table.witnesses[best_labeling]

    slack, m0 = declared_slack if declared_slack else (_zero_slack, _always_one)
    return LearningFunction(name="sem", fn=fn, space=space,
                            slack=slack, m0_nmse=m0)


def constant_learner(h: Hypothesis, name: str = "const",
                     space: HypothesisSpace | None = None) -> LearningFunction:
    """A learner that ignores the sample and always outputs ``h``."""
    return LearningFunction(name=name, fn=lambda zbar: h, space=space)


def memorizing_learner(space: ExplicitSpace) -> LearningFunction:
    """Outputs the hypothesis matching the sample's labels on the instances
    it saw (first occurrence wins) and 0 elsewhere.

    Only defined for finite-explicit spaces that contain every such
    bit-vector, e.g. the full class over a finite domain.
    """
    if not isinstance(space, ExplicitSpace):
        raise TypeError("memorizing learner needs a finite-explicit space")

    def fn(zbar: MultiSample) -> Hypothesis:
        seen: dict = {}
        for z in zbar:
            seen.setdefault(z.instance, z.label)
        bits = tuple(seen.get(x, 0) for x in space.domain)
        return space.hypothesis_from_bits(bits)

    return LearningFunction(name="memorize", fn=fn, space=space)


def table_learner(space: HypothesisSpace,
                  table: Mapping[MultiSample, Hypothesis],
                  default: Hypothesis,
                  name: str = "table") -> LearningFunction:
    """A lookup-table learner: an explicit multi-sample -> hypothesis map
    with a fixed fallback for unmapped inputs."""
    frozen = dict(table)

    def fn(zbar: MultiSample) -> Hypothesis:
        return frozen.get(zbar, default)

    return LearningFunction(name=name, fn=fn, space=space)


def random_table_learner(space: ExplicitSpace, seed: int,
                         name: str | None = None) -> LearningFunction:
    """A randomized-then-fixed lookup learner over a finite-explicit space.

    The output hypothesis for each multi-sample is chosen by hashing the
    sample against the seed, so the map is an arbitrary-looking but fully
    deterministic function.
    """
    if not isinstance(space, ExplicitSpace):
        raise TypeError("random table learner needs a finite-explicit space")
    n = len(space)
    vectors = space._vectors

    def fn(zbar: MultiSample) -> Hypothesis:
        digest = hashlib.sha256(
            f"table:{seed}:".encode() + zbar.canonical_bytes()).digest()
        idx = int.from_bytes(digest[:8], "big") % n
        return space.hypothesis_from_bits(vectors[idx])

    return LearningFunction(name=name or f"random-table-{seed}", fn=fn,
                            space=space)


def builtin_learners(space: HypothesisSpace) -> dict[str, LearningFunction]:
    """The built-in learners applicable to the given space, keyed by name."""
    out = {"sem": sem_learner(space)}
    if isinstance(space, ExplicitSpace):
        n = len(space.domain)
        for name, bits in (("const0", (0,) * n), ("const1", (1,) * n)):
            try:
                h = space.hypothesis_from_bits(bits)
            except KeyError:
                continue
            out[name] = constant_learner(h, name=name, space=space)
        out["memorize"] = memorizing_learner(space)
    return out
