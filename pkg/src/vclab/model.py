"""Core domain types for binary classification over discrete sample spaces.

Instances, labeled samples, multi-samples, hypotheses and hypothesis spaces
with finite restriction oracles, and finitely supported distributions,
together with the elementary error quantities (pointwise loss, sample error,
true error, optimal errors) that the rest of the package builds on.

All probabilities and error values are exact ``fractions.Fraction``s.  Floats
appearing in inputs are converted to their exact binary rational value, so
equality assertions downstream are meaningful.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

Labeling = tuple[int, ...]

_WEIGHT_SUM_TOL = Fraction(1, 10**9)


class InexactOracleError(Exception):
    """A computation required an exact restriction oracle but got an
    under-approximating one."""


class BudgetError(Exception):
    """An exact enumeration would exceed its configured state budget."""

    def __init__(self, message: str, required: int | None = None):
        super().__init__(message)
        self.required = required


def to_fraction(value) -> Fraction:
    """Convert int/float/str/Fraction to an exact Fraction.

    Floats convert to their exact binary value; strings accept "p/q" and
    decimal forms.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a numeric value")
    if isinstance(value, (int, float, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational number")


# ---------------------------------------------------------------------------
# Instances and samples


@dataclass(frozen=True)
class Instance:
    """A point of the instance space: a symbolic atom or a rational vector."""

    value: str | tuple[Fraction, ...]

    @staticmethod
    def atom(name: str) -> "Instance":
        if not isinstance(name, str) or not name:
            raise ValueError("atom name must be a non-empty string")
        return Instance(name)

    @staticmethod
    def point(*coords) -> "Instance":
        if not coords:
            raise ValueError("vector instances need dimension >= 1")
        return Instance(tuple(to_fraction(c) for c in coords))

    @property
    def is_atom(self) -> bool:
        return isinstance(self.value, str)

    @property
    def coords(self) -> tuple[Fraction, ...]:
        if self.is_atom:
            raise TypeError(f"instance {self.value!r} is symbolic, not numeric")
        return self.value  # type: ignore[return-value]

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def scalar(self) -> Fraction:
        coords = self.coords
        if len(coords) != 1:
            raise TypeError(f"instance {self} is not one-dimensional")
        return coords[0]

    def sort_key(self):
        # Kind tag first so atoms and vectors never compare element-wise.
        if self.is_atom:
            return (0, self.value)
        return (1, len(self.value), self.value)

    def __repr__(self) -> str:
        if self.is_atom:
            return f"Instance({self.value!r})"
        if len(self.value) == 1:
            return f"Instance.point({self.value[0]})"
        return f"Instance.point{tuple(map(str, self.value))}"


def as_instance(value) -> Instance:
    """Coerce a bare atom name, number, or coordinate tuple to an Instance."""
    if isinstance(value, Instance):
        return value
    if isinstance(value, str):
        return Instance.atom(value)
    if isinstance(value, (list, tuple)):
        return Instance.point(*value)
    return Instance.point(value)


@dataclass(frozen=True)
class Sample:
    """A labeled example (x, y) with y in {0, 1}."""

    instance: Instance
    label: int

    def __post_init__(self):
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label!r}")

    def sort_key(self):
        return (self.instance.sort_key(), self.label)


def as_sample(value) -> Sample:
    if isinstance(value, Sample):
        return value
    instance, label = value
    return Sample(as_instance(instance), int(label))


@dataclass(frozen=True)
class MultiSample:
    """An ordered sequence of samples of length m >= 1 (repeats allowed)."""

    samples: tuple[Sample, ...]

    def __post_init__(self):
        if not self.samples:
            raise ValueError("a multi-sample must contain at least one sample")
        if not all(isinstance(z, Sample) for z in self.samples):
            raise TypeError("multi-sample entries must be Samples")

    @staticmethod
    def of(*entries) -> "MultiSample":
        return MultiSample(tuple(as_sample(z) for z in entries))

    @property
    def m(self) -> int:
        return len(self.samples)

    def __len__(self) -> int:
        return len(self.samples)

    def __iter__(self) -> Iterator[Sample]:
        return iter(self.samples)

    def instances_sorted(self) -> tuple[Instance, ...]:
        """Distinct instances, in canonical order."""
        return tuple(sorted({z.instance for z in self.samples},
                            key=Instance.sort_key))

    def label_counts(self) -> dict[Instance, tuple[int, int]]:
        """Per-instance counts (#labeled 0, #labeled 1)."""
        zeros: Counter = Counter()
        ones: Counter = Counter()
        for z in self.samples:
            (ones if z.label else zeros)[z.instance] += 1
        return {x: (zeros[x], ones[x])
                for x in {z.instance for z in self.samples}}

    def canonical_bytes(self) -> bytes:
        """Stable byte encoding, used for hashing-based lookup learners."""
        parts = []
        for z in self.samples:
            v = z.instance.value
            if isinstance(v, str):
                parts.append(f"a:{v}:{z.label}")
            else:
                parts.append("v:" + ",".join(str(c) for c in v) + f":{z.label}")
        return "|".join(parts).encode()


# ---------------------------------------------------------------------------
# Hypotheses and hypothesis spaces


@dataclass(frozen=True)
class Hypothesis:
    """A total binary classifier with a canonical identity key.

    Equality, ordering and hashing go through the key; two hypotheses with
    equal keys must evaluate identically everywhere.
    """

    key: tuple
    fn: Callable[[Instance], int] = field(compare=False, repr=False)

    def __call__(self, x: Instance) -> int:
        return self.fn(x)

    def sort_key(self):
        return self.key


@dataclass(frozen=True)
class DichotomyTable:
    """Restrictions of a hypothesis space to a fixed ordered instance tuple.

    ``witnesses`` maps each realized labeling (aligned with ``instances``)
    to the canonically least witness hypothesis.  ``exact`` means the set of
    labelings is exactly the restriction of the space; otherwise it is a
    verified subset.
    """

    instances: tuple[Instance, ...]
    witnesses: Mapping[Labeling, Hypothesis]
    exact: bool

    @property
    def labelings(self) -> frozenset[Labeling]:
        return frozenset(self.witnesses)

    def __len__(self) -> int:
        return len(self.witnesses)

    def __contains__(self, labeling: Labeling) -> bool:
        return tuple(labeling) in self.witnesses


def check_instance_tuple(instances: Sequence[Instance]) -> tuple[Instance, ...]:
    out = tuple(instances)
    if not out:
        raise ValueError("instance set must be non-empty")
    if not all(isinstance(x, Instance) for x in out):
        raise TypeError("expected Instance elements")
    if len(set(out)) != len(out):
        raise ValueError("instance set must not contain duplicates")
    return out


class HypothesisSpace:
    """Base class: an enumerable family of classifiers with a finite
    restriction oracle.

    Subclasses provide :meth:`dichotomies`; everything else derives from it.
    """

    kind: str = "abstract"

    @property
    def oracle_exact(self) -> bool:
        """True when dichotomies() returns exactly the restriction of the
        family on every finite instance set."""
        return True

    def dichotomies(self, instances: Sequence[Instance]) -> DichotomyTable:
        raise NotImplementedError

    def dichotomy_count(self, instances: Sequence[Instance]) -> int:
        return len(self.dichotomies(instances))

    def known_vc(self) -> int | None:
        """The provable VC dimension of the family, when it has a closed form."""
        return None

    def hypotheses(self) -> Iterator[Hypothesis]:
        raise NotImplementedError(f"{self.kind} space is not finitely enumerable")

    def hypothesis_from_key(self, key) -> Hypothesis:
        raise NotImplementedError(f"{self.kind} space has no key-based lookup")


class ExplicitSpace(HypothesisSpace):
    """A finite hypothesis space given by bit-vectors over a finite domain.

    Hypothesis i labels domain instance j with bit j of its vector, and
    labels everything outside the domain 0.  Duplicate bit-vectors collapse;
    hypotheses enumerate in lexicographic bit-vector order (the canonical
    order used for tie-breaking).
    """

    kind = "finite-explicit"

    def __init__(self, instances: Sequence, bitvectors: Iterable[Sequence[int]]):
        domain = check_instance_tuple([as_instance(x) for x in instances])
        vectors = set()
        for bits in bitvectors:
            row = tuple(int(b) for b in bits)
            if len(row) != len(domain):
                raise ValueError("bit-vector length must equal domain size")
            if any(b not in (0, 1) for b in row):
                raise ValueError("bit-vectors must be 0/1")
            vectors.add(row)
        if not vectors:
            raise ValueError("hypothesis space must be non-empty")
        self.domain = domain
        self._index = {x: i for i, x in enumerate(domain)}
        self._vectors = sorted(vectors)
        self._masks = [sum(b << i for i, b in enumerate(row))
                       for row in self._vectors]

    @classmethod
    def full(cls, instances: Sequence) -> "ExplicitSpace":
        domain = [as_instance(x) for x in instances]
        n = len(domain)
        rows = [[(i >> j) & 1 for j in range(n)] for i in range(2 ** n)]
        return cls(domain, rows)

    def __len__(self) -> int:
        return len(self._vectors)

    def _make_hypothesis(self, bits: Labeling) -> Hypothesis:
        index = self._index

        def fn(x: Instance, _bits=bits, _index=index) -> int:
            i = _index.get(x)
            return 0 if i is None else _bits[i]

        return Hypothesis(key=("explicit", bits), fn=fn)

    def hypotheses(self) -> Iterator[Hypothesis]:
        for bits in self._vectors:
            yield self._make_hypothesis(bits)

    def hypothesis_from_bits(self, bits: Sequence[int]) -> Hypothesis:
        row = tuple(int(b) for b in bits)
        if row not in set(self._vectors):
            raise KeyError(f"bit-vector {row} is not in the space")
        return self._make_hypothesis(row)

    def hypothesis_from_key(self, key) -> Hypothesis:
        return self.hypothesis_from_bits(key)

    def dichotomies(self, instances: Sequence[Instance]) -> DichotomyTable:
        instances = check_instance_tuple(instances)
        positions = [self._index.get(x) for x in instances]
        witnesses: dict[Labeling, Hypothesis] = {}
        for bits in self._vectors:
            labeling = tuple(0 if p is None else bits[p] for p in positions)
            if labeling not in witnesses:
                witnesses[labeling] = self._make_hypothesis(bits)
        return DichotomyTable(instances, witnesses, exact=True)

    def dichotomy_count(self, instances: Sequence[Instance]) -> int:
        instances = check_instance_tuple(instances)
        positions = [self._index.get(x) for x in instances]
        if all(p is not None for p in positions):
            # Distinct restrictions <-> distinct masked bit patterns.
            mask = sum(1 << p for p in positions)
            return len({m & mask for m in self._masks})
        return len(self.dichotomies(instances))


# ---------------------------------------------------------------------------
# Distributions


class DiscreteDistribution:
    """A finitely supported probability measure on the sample space.

    Weights are exact rationals summing to exactly 1.  Float weights are
    accepted when they sum to 1 within 1e-9 and are then renormalized to an
    exact unit total, so all downstream arithmetic stays exact.
    """

    def __init__(self, weighted_samples: Mapping | Iterable):
        items = (weighted_samples.items()
                 if isinstance(weighted_samples, Mapping) else weighted_samples)
        acc: dict[Sample, Fraction] = {}
        had_float = False
        for z, w in items:
            z = as_sample(z)
            if isinstance(w, float):
                had_float = True
            w = to_fraction(w)
            if w <= 0:
                raise ValueError("support weights must be positive")
            acc[z] = acc.get(z, Fraction(0)) + w
        if not acc:
            raise ValueError("distribution support must be non-empty")
        total = sum(acc.values())
        if total != 1:
            if not had_float or abs(total - 1) > _WEIGHT_SUM_TOL:
                raise ValueError(f"weights sum to {total}, expected exactly 1")
            acc = {z: w / total for z, w in acc.items()}
        self._weights = acc
        self.support: tuple[Sample, ...] = tuple(
            sorted(acc, key=Sample.sort_key))

    @classmethod
    def uniform(cls, samples: Iterable) -> "DiscreteDistribution":
        zs = [as_sample(z) for z in samples]
        if not zs:
            raise ValueError("uniform distribution needs at least one sample")
        w = Fraction(1, len(zs))
        return cls([(z, w) for z in zs])

    @classmethod
    def point_mass(cls, sample) -> "DiscreteDistribution":
        return cls([(as_sample(sample), Fraction(1))])

    def weight(self, z: Sample) -> Fraction:
        return self._weights.get(z, Fraction(0))

    def items(self) -> Iterator[tuple[Sample, Fraction]]:
        for z in self.support:
            yield z, self._weights[z]

    def instances(self) -> tuple[Instance, ...]:
        return tuple(sorted({z.instance for z in self.support},
                            key=Instance.sort_key))

    def __len__(self) -> int:
        return len(self.support)

    def __eq__(self, other) -> bool:
        return (isinstance(other, DiscreteDistribution)
                and self._weights == other._weights)

    def __repr__(self) -> str:
        inner = ", ".join(f"{z}: {w}" for z, w in self.items())
        return f"DiscreteDistribution({{{inner}}})"


# ---------------------------------------------------------------------------
# Elementary error quantities


def loss(h: Hypothesis, z: Sample) -> int:
    """0/1 misclassification loss: 1 iff h(x) != y."""
    return 1 if h(z.instance) != z.label else 0


def sample_error(h: Hypothesis, zbar: MultiSample) -> Fraction:
    """Average loss of h on the multi-sample, as an exact k/m."""
    return Fraction(sum(loss(h, z) for z in zbar), zbar.m)


def true_error(h: Hypothesis, dist: DiscreteDistribution) -> Fraction:
    """Probability of misclassification under the distribution."""
    return sum((w for z, w in dist.items() if loss(h, z)), Fraction(0))


def empirical_distribution(zbar: MultiSample) -> DiscreteDistribution:
    """The uniform distribution over the multi-sample's entries, with
    repeated samples' weights accumulated."""
    counts = Counter(zbar.samples)
    return DiscreteDistribution(
        {z: Fraction(c, zbar.m) for z, c in counts.items()})


def _table_for(space: HypothesisSpace, instances: Sequence[Instance],
               require_exact: bool) -> DichotomyTable:
    table = space.dichotomies(instances)
    if require_exact and not table.exact:
        raise InexactOracleError(
            f"{space.kind} space has no exact restriction oracle here; "
            "pass require_exact=False to accept a verified-subset bound")
    return table


def _labeling_true_error(labeling: Labeling, positions: Mapping[Instance, int],
                         dist: DiscreteDistribution) -> Fraction:
    return sum((w for z, w in dist.items()
                if labeling[positions[z.instance]] != z.label), Fraction(0))


def _labeling_sample_error_counts(
        labeling: Labeling, positions: Mapping[Instance, int],
        counts: Mapping[Instance, tuple[int, int]], m: int) -> Fraction:
    wrong = 0
    for x, (n0, n1) in counts.items():
        wrong += n0 if labeling[positions[x]] == 1 else n1
    return Fraction(wrong, m)


def approximation_error(space: HypothesisSpace, dist: DiscreteDistribution,
                        require_exact: bool = True) -> Fraction:
    """Best achievable true error of the space under the distribution.

    Equals the minimum over realized restrictions to the support instances,
    since the true error depends on a hypothesis only through that
    restriction.  With an inexact oracle (and ``require_exact=False``) the
    result is an upper bound only.
    """
    instances = dist.instances()
    table = _table_for(space, instances, require_exact)
    positions = {x: i for i, x in enumerate(instances)}
    return min(_labeling_true_error(lab, positions, dist)
               for lab in table.witnesses)


def empirical_opt(space: HypothesisSpace, zbar: MultiSample,
                  require_exact: bool = True) -> Fraction:
    """Minimal sample error over the space (attained, since restrictions to
    the sample instances are finite)."""
    instances = zbar.instances_sorted()
    table = _table_for(space, instances, require_exact)
    positions = {x: i for i, x in enumerate(instances)}
    counts = zbar.label_counts()
    return min(_labeling_sample_error_counts(lab, positions, counts, zbar.m)
               for lab in table.witnesses)


def realized_dichotomies(space: HypothesisSpace,
                         instances: Sequence[Instance]
                         ) -> tuple[frozenset[Labeling], bool]:
    """The labelings of ``instances`` realized by the space, plus an
    exactness flag (False means: verified subset)."""
    table = space.dichotomies(check_instance_tuple(instances))
    return table.labelings, table.exact
