"""Uniform-convergence and PAC verification harness.

Computes the supremum deviation statistics exactly via dichotomy
enumeration, and estimates event probabilities over product distributions
either by exact enumeration (small state spaces) or by seeded Monte Carlo
with Wilson confidence intervals.

Reproducibility: sampling is inverse-CDF over the support in canonical
sample order, and each trial runs on its own PRNG seeded by
sha256(master_seed, trial_index), so results are independent of execution
order or thread scheduling.

Scope: an estimate certifies the one distribution it was run against.
Guarantees that hold uniformly over every distribution come from the
closed-form sample bounds, not from simulation; that gap is inherent to
estimation and is deliberately not papered over here.
"""

from __future__ import annotations

import hashlib
import math
import random
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .learners import LearningFunction
from .model import (
    BudgetError,
    DiscreteDistribution,
    Hypothesis,
    HypothesisSpace,
    Instance,
    MultiSample,
    Sample,
    _labeling_true_error,
    _table_for,
    approximation_error,
    loss,
    to_fraction,
    true_error,
)

EXACT_STATE_LIMIT = 10 ** 6
SEED_RULE = "sha256(master_seed:trial_index)"
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class TrialReport:
    """Outcome of a probability estimation run.

    Monte Carlo mode fills trials/successes and the Wilson 95% interval;
    exact mode fills ``probability`` with the exact rational event mass.
    Reports are reproducible from the master seed and the seed rule.
    """

    kind: str
    mode: str
    m: int
    eps: float
    trials: int
    successes: int
    estimate: float
    ci_low: float | None
    ci_high: float | None
    probability: Fraction | None
    seed: int
    seed_rule: str = SEED_RULE

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "mode": self.mode,
            "m": self.m,
            "eps": self.eps,
            "trials": self.trials,
            "successes": self.successes,
            "estimate": self.estimate,
            "ci95": [self.ci_low, self.ci_high],
            "probability": None if self.probability is None else str(self.probability),
            "seed": self.seed,
            "seed_rule": self.seed_rule,
        }


def wilson_interval(successes: int, trials: int,
                    z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= successes <= trials:
        raise ValueError("need 0 <= successes <= trials")
    phat = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / trials
                                   + z2 / (4 * trials * trials))
    # clamp against rounding so the interval always contains the estimate
    return min(phat, max(0.0, center - half)), max(phat, min(1.0, center + half))


def trial_seed(master_seed: int, trial_index: int) -> int:
    digest = hashlib.sha256(f"{master_seed}:{trial_index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def draw_multisample(dist: DiscreteDistribution, m: int,
                     rng: random.Random) -> MultiSample:
    """m i.i.d. samples by inverse CDF over the canonical support order."""
    cum: list[float] = []
    total = 0.0
    for _, w in dist.items():
        total += float(w)
        cum.append(total)
    idx = rng.choices(range(len(dist.support)), cum_weights=cum, k=m)
    return MultiSample(tuple(dist.support[i] for i in idx))


# ---------------------------------------------------------------------------
# Deviation statistics


def _union_instances(*groups: Sequence[Instance]) -> tuple[Instance, ...]:
    seen = set()
    for group in groups:
        seen.update(group)
    return tuple(sorted(seen, key=Instance.sort_key))


def _labeling_sample_error(labeling, positions, zbar: MultiSample) -> Fraction:
    wrong = sum(1 for z in zbar
                if labeling[positions[z.instance]] != z.label)
    return Fraction(wrong, zbar.m)


def u_statistic(space: HypothesisSpace, dist: DiscreteDistribution,
                zbar: MultiSample, require_exact: bool = True) -> Fraction:
    """sup over the space of |true error - sample error|.

    Both quantities depend on a hypothesis only through its restriction to
    the support and sample instances, so the supremum is a maximum over the
    realized labelings of that finite set.  With an inexact oracle (and
    ``require_exact=False``) the result is a verified lower bound.
    """
    instances = _union_instances(dist.instances(), zbar.instances_sorted())
    table = _table_for(space, instances, require_exact)
    positions = {x: i for i, x in enumerate(instances)}
    return max(abs(_labeling_true_error(lab, positions, dist)
                   - _labeling_sample_error(lab, positions, zbar))
               for lab in table.witnesses)


def v_statistic(space: HypothesisSpace, zbar: MultiSample, zbar2: MultiSample,
                require_exact: bool = True) -> Fraction:
    """sup over the space of |sample error on zbar2 - sample error on zbar|
    for two multi-samples of equal length."""
    if zbar.m != zbar2.m:
        raise ValueError("the two multi-samples must have equal length")
    instances = _union_instances(zbar.instances_sorted(),
                                 zbar2.instances_sorted())
    table = _table_for(space, instances, require_exact)
    positions = {x: i for i, x in enumerate(instances)}
    return max(abs(_labeling_sample_error(lab, positions, zbar2)
                   - _labeling_sample_error(lab, positions, zbar))
               for lab in table.witnesses)


def _check_signs(sigma: Sequence[int], m: int) -> tuple[int, ...]:
    signs = tuple(sigma)
    if len(signs) != m:
        raise ValueError("sign vector length must equal the sample length")
    if any(s not in (-1, 1) for s in signs):
        raise ValueError("sign entries must be -1 or +1")
    return signs


def signed_deviation(h: Hypothesis, zbar: MultiSample, zbar2: MultiSample,
                     sigma: Sequence[int]) -> Fraction:
    """Per-hypothesis sign-flipped deviation
    (1/m) * sum_i sigma_i * (loss(h, z'_i) - loss(h, z_i))."""
    if zbar.m != zbar2.m:
        raise ValueError("the two multi-samples must have equal length")
    signs = _check_signs(sigma, zbar.m)
    total = sum(s * (loss(h, z2) - loss(h, z1))
                for s, z1, z2 in zip(signs, zbar.samples, zbar2.samples))
    return Fraction(total, zbar.m)


def symmetrized_deviation(space: HypothesisSpace, zbar: MultiSample,
                          zbar2: MultiSample, sigma: Sequence[int],
                          require_exact: bool = True) -> Fraction:
    """max over realized labelings of |signed deviation| for a fixed sign
    vector."""
    if zbar.m != zbar2.m:
        raise ValueError("the two multi-samples must have equal length")
    signs = _check_signs(sigma, zbar.m)
    instances = _union_instances(zbar.instances_sorted(),
                                 zbar2.instances_sorted())
    table = _table_for(space, instances, require_exact)
    positions = {x: i for i, x in enumerate(instances)}
    best = Fraction(0)
    for lab in table.witnesses:
        total = 0
        for s, z1, z2 in zip(signs, zbar.samples, zbar2.samples):
            l1 = 1 if lab[positions[z1.instance]] != z1.label else 0
            l2 = 1 if lab[positions[z2.instance]] != z2.label else 0
            total += s * (l2 - l1)
        best = max(best, abs(Fraction(total, zbar.m)))
    return best


# ---------------------------------------------------------------------------
# Probability estimation


def _counts_sample_error(labeling, positions,
                         counts: Mapping[int, int],
                         support: Sequence[Sample], m: int) -> Fraction:
    wrong = 0
    for idx, c in counts.items():
        z = support[idx]
        if labeling[positions[z.instance]] != z.label:
            wrong += c
    return Fraction(wrong, m)


def _u_from_counts(table_witnesses, positions, dist: DiscreteDistribution,
                   true_errors, counts: Mapping[int, int], m: int) -> Fraction:
    return max(abs(true_errors[lab]
                   - _counts_sample_error(lab, positions, counts,
                                          dist.support, m))
               for lab in table_witnesses)


def _exact_budget_check(dist: DiscreteDistribution, m: int) -> int:
    states = len(dist.support) ** m
    if states > EXACT_STATE_LIMIT:
        raise BudgetError(
            f"exact mode would enumerate {states} states "
            f"(limit {EXACT_STATE_LIMIT}); use Monte Carlo", required=states)
    return states


def estimate_ucp_probability(space: HypothesisSpace,
                             dist: DiscreteDistribution,
                             m: int, eps, trials: int = 1000, seed: int = 0,
                             exact: bool = False,
                             threads: int = 1) -> TrialReport:
    """Probability that the supremum deviation statistic is <= eps for an
    m-sample drawn from the distribution.

    Exact mode enumerates all |support|^m multi-samples and sums their exact
    product weights; Monte Carlo mode counts successes over seeded trials.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    eps_exact = to_fraction(eps)
    instances = dist.instances()
    table = _table_for(space, instances, require_exact=True)
    positions = {x: i for i, x in enumerate(instances)}
    true_errors = {lab: _labeling_true_error(lab, positions, dist)
                   for lab in table.witnesses}

    def success_from_counts(counts: Mapping[int, int]) -> bool:
        u = _u_from_counts(table.witnesses, positions, dist, true_errors,
                           counts, m)
        return u <= eps_exact

    if exact:
        prob = _exact_event_probability(dist, m, success_from_counts)
        return TrialReport(kind="ucp", mode="exact", m=m, eps=float(eps_exact),
                           trials=0, successes=0, estimate=float(prob),
                           ci_low=None, ci_high=None, probability=prob,
                           seed=seed)

    cum: list[float] = []
    total = 0.0
    for _, w in dist.items():
        total += float(w)
        cum.append(total)
    indices = range(len(dist.support))

    def run_trial(t: int) -> bool:
        rng = random.Random(trial_seed(seed, t))
        counts = Counter(rng.choices(indices, cum_weights=cum, k=m))
        return success_from_counts(counts)

    successes = _run_trials(run_trial, trials, threads)
    lo, hi = wilson_interval(successes, trials)
    return TrialReport(kind="ucp", mode="monte-carlo", m=m,
                       eps=float(eps_exact), trials=trials,
                       successes=successes, estimate=successes / trials,
                       ci_low=lo, ci_high=hi, probability=None, seed=seed)


def estimate_pac_probability(learner: LearningFunction,
                             space: HypothesisSpace,
                             dist: DiscreteDistribution,
                             m: int, eps, trials: int = 1000, seed: int = 0,
                             exact: bool = False,
                             threads: int = 1) -> TrialReport:
    """Probability that the learner's output has true error within eps of
    the space's best achievable error, over m-samples from the
    distribution."""
    if m < 1:
        raise ValueError("m must be >= 1")
    eps_exact = to_fraction(eps)
    opt = approximation_error(space, dist)

    def success(zbar: MultiSample) -> bool:
        h = learner(zbar)
        return true_error(h, dist) - opt <= eps_exact

    if exact:
        def success_from_tuple(samples: tuple[Sample, ...]) -> bool:
            return success(MultiSample(samples))

        prob = _exact_event_probability_tuples(dist, m, success_from_tuple)
        return TrialReport(kind="pac", mode="exact", m=m, eps=float(eps_exact),
                           trials=0, successes=0, estimate=float(prob),
                           ci_low=None, ci_high=None, probability=prob,
                           seed=seed)

    def run_trial(t: int) -> bool:
        rng = random.Random(trial_seed(seed, t))
        return success(draw_multisample(dist, m, rng))

    successes = _run_trials(run_trial, trials, threads)
    lo, hi = wilson_interval(successes, trials)
    return TrialReport(kind="pac", mode="monte-carlo", m=m,
                       eps=float(eps_exact), trials=trials,
                       successes=successes, estimate=successes / trials,
                       ci_low=lo, ci_high=hi, probability=None, seed=seed)


def _run_trials(run_trial, trials: int, threads: int) -> int:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return sum(pool.map(run_trial, range(trials)))
    return sum(run_trial(t) for t in range(trials))


def _exact_event_probability(dist: DiscreteDistribution, m: int,
                             success_from_counts) -> Fraction:
    """Exact event mass over all |support|^m equally structured draws,
    grouping by multiplicity counts.  The success and failure masses are
    accumulated separately and must sum to exactly 1."""
    _exact_budget_check(dist, m)
    weights = [w for _, w in dist.items()]
    p_succ = Fraction(0)
    p_fail = Fraction(0)
    for tup in product(range(len(weights)), repeat=m):
        w = Fraction(1)
        for i in tup:
            w *= weights[i]
        if success_from_counts(Counter(tup)):
            p_succ += w
        else:
            p_fail += w
    if p_succ + p_fail != 1:
        raise AssertionError("exact enumeration lost probability mass")
    return p_succ


def _exact_event_probability_tuples(dist: DiscreteDistribution, m: int,
                                    success_from_tuple) -> Fraction:
    _exact_budget_check(dist, m)
    items = list(dist.items())
    p_succ = Fraction(0)
    p_fail = Fraction(0)
    for combo in product(items, repeat=m):
        w = Fraction(1)
        for _, wi in combo:
            w *= wi
        if success_from_tuple(tuple(z for z, _ in combo)):
            p_succ += w
        else:
            p_fail += w
    if p_succ + p_fail != 1:
        raise AssertionError("exact enumeration lost probability mass")
    return p_succ
