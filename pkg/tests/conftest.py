import random
from fractions import Fraction

from vclab import (
    DiscreteDistribution,
    ExplicitSpace,
    Instance,
    MultiSample,
    Sample,
)


def atoms(n: int) -> list[Instance]:
    return [Instance.atom(f"s{i}") for i in range(n)]


def points(*values) -> list[Instance]:
    return [Instance.point(v) for v in values]


def random_explicit_space(rng: random.Random, max_instances: int = 6,
                          max_hypotheses: int = 16) -> ExplicitSpace:
    nx = rng.randint(1, max_instances)
    nh = rng.randint(1, max_hypotheses)
    domain = atoms(nx)
    rows = [[rng.randint(0, 1) for _ in range(nx)] for _ in range(nh)]
    return ExplicitSpace(domain, rows)


def random_distribution(rng: random.Random, instances,
                        max_support: int = 4) -> DiscreteDistribution:
    pairs = [(x, y) for x in instances for y in (0, 1)]
    rng.shuffle(pairs)
    k = rng.randint(1, min(max_support, len(pairs)))
    chosen = pairs[:k]
    raw = [rng.randint(1, 20) for _ in range(k)]
    total = sum(raw)
    return DiscreteDistribution(
        [(Sample(x, y), Fraction(w, total)) for (x, y), w in zip(chosen, raw)])


def random_multisample(rng: random.Random, instances, m: int) -> MultiSample:
    return MultiSample(tuple(
        Sample(rng.choice(instances), rng.randint(0, 1)) for _ in range(m)))
