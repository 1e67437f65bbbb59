import random
from fractions import Fraction as F

import pytest

from vclab import (
    ExplicitSpace,
    InexactOracleError,
    LearningFunction,
    MultiSample,
    SampledParams,
    ThresholdSpace,
    apply,
    builtin_learners,
    definable_space,
    empirical_opt,
    memorizing_learner,
    parse_formula,
    random_table_learner,
    sample_error,
    sem_learner,
    table_learner,
)
from conftest import atoms, random_explicit_space, random_multisample


class TestSemLearner:
    def test_two_constants_all_ones(self):
        space = ExplicitSpace(atoms(1), [[0], [1]])
        learner = sem_learner(space)
        zbar = MultiSample.of(("s0", 1), ("s0", 1))
        h = learner(zbar)
        assert h.key == ("explicit", (1,))
        assert sample_error(h, zbar) == 0

    def test_thresholds_tie_break(self):
        learner = sem_learner(ThresholdSpace())
        zbar = MultiSample.of(((1,), 1), ((2,), 0))
        h = learner(zbar)
        assert sample_error(h, zbar) == F(1, 2)
        # minimizers are labelings 00 and 11; lexicographically least is 00,
        # whose canonical threshold witness sits just past the largest point
        assert h.key == ("threshold", F(3))

    def test_shattered_sample_fits_exactly(self):
        space = ExplicitSpace.full(atoms(3))
        learner = sem_learner(space)
        zbar = MultiSample.of(("s0", 1), ("s1", 0), ("s2", 1))
        assert sample_error(learner(zbar), zbar) == 0

    def test_exactness_on_random_spaces(self):
        rng = random.Random(42)
        for _ in range(80):
            space = random_explicit_space(rng)
            learner = sem_learner(space)
            zbar = random_multisample(rng, space.domain, rng.randint(1, 7))
            assert sample_error(learner(zbar), zbar) == \
                empirical_opt(space, zbar)

    def test_enumeration_order_does_not_matter(self):
        rng = random.Random(8)
        for _ in range(25):
            space = random_explicit_space(rng)
            rows = [list(r) for r in space._vectors]
            rng.shuffle(rows)
            permuted = ExplicitSpace(space.domain, rows)
            zbar = random_multisample(rng, space.domain, rng.randint(1, 5))
            assert sem_learner(space)(zbar).key == \
                sem_learner(permuted)(zbar).key

    def test_determinism(self):
        learner = sem_learner(ThresholdSpace())
        zbar = MultiSample.of(((1,), 1), ((2,), 0), ((3,), 1))
        assert learner(zbar).key == learner(zbar).key

    def test_inexact_oracle_refused_without_declaration(self):
        ast = parse_formula("p * x <= 1", ["x"], ["p"])
        space = definable_space(ast, SampledParams(budget=50))
        assert not space.oracle_exact
        with pytest.raises(InexactOracleError):
            sem_learner(space)
        learner = sem_learner(space, declared_slack=(lambda m: F(1), lambda e: 1))
        assert learner.slack(4) == 1


class TestApply:
    def test_constant_ignores_sample(self):
        space = ExplicitSpace(atoms(2), [[1, 1]])
        h = space.hypothesis_from_bits((1, 1))
        from vclab import constant_learner
        learner = constant_learner(h, space=space)
        z1 = MultiSample.of(("s0", 0))
        z2 = MultiSample.of(("s1", 1), ("s0", 0))
        assert apply(learner, z1) is h and apply(learner, z2) is h

    def test_trace_records_errors(self):
        space = ExplicitSpace.full(atoms(2))
        learner = sem_learner(space)
        trace = []
        zbar = MultiSample.of(("s0", 1), ("s1", 0))
        apply(learner, zbar, trace=trace)
        assert trace == [{"m": 2, "sample_error": F(0), "empirical_opt": F(0)}]


class TestNmseContract:
    def test_sem_has_zero_slack_everywhere(self):
        rng = random.Random(3)
        space = ExplicitSpace.full(atoms(2))
        learner = sem_learner(space)
        for m in (1, 2, 5):
            assert learner.m0_nmse(0.25) == 1
            for _ in range(10):
                zbar = random_multisample(rng, space.domain, m)
                gap = (sample_error(learner(zbar), zbar)
                       - empirical_opt(space, zbar))
                assert gap <= learner.slack(m) == 0

    def test_declared_slack_is_honored(self):
        space = ExplicitSpace(atoms(1), [[0], [1]])
        exact = sem_learner(space)
        worst = {0: space.hypothesis_from_bits((1,)),
                 1: space.hypothesis_from_bits((0,))}

        def fn(zbar):
            if zbar.m < 3:
                return worst[zbar.samples[0].label]  # anti-learn tiny samples
            return exact(zbar)

        sloppy = LearningFunction(
            name="sloppy", fn=fn, space=space,
            slack=lambda m: F(1) if m < 3 else F(0),
            m0_nmse=lambda eps: 3)
        rng = random.Random(5)
        for eps in (F(1, 4), F(1, 2)):
            m0 = sloppy.m0_nmse(eps)
            for m in range(m0, m0 + 3):
                for _ in range(10):
                    zbar = random_multisample(rng, space.domain, m)
                    gap = (sample_error(sloppy(zbar), zbar)
                           - empirical_opt(space, zbar))
                    assert gap <= eps


class TestTableLearners:
    def test_lookup_and_default(self):
        space = ExplicitSpace.full(atoms(2))
        key = MultiSample.of(("s0", 1))
        mapped = space.hypothesis_from_bits((1, 1))
        fallback = space.hypothesis_from_bits((0, 0))
        learner = table_learner(space, {key: mapped}, fallback)
        assert learner(MultiSample.of(("s0", 1))) == mapped
        assert learner(MultiSample.of(("s0", 0))) == fallback

    def test_random_table_is_deterministic(self):
        space = ExplicitSpace.full(atoms(3))
        a = random_table_learner(space, seed=9)
        b = random_table_learner(space, seed=9)
        c = random_table_learner(space, seed=10)
        zbar = MultiSample.of(("s0", 1), ("s2", 0))
        assert a(zbar).key == b(zbar).key
        outputs = {random_table_learner(space, seed=s)(zbar).key
                   for s in range(12)}
        assert len(outputs) > 1
        assert c(zbar).key in {h.key for h in space.hypotheses()}


class TestMemorizer:
    def test_recalls_seen_labels_and_defaults_to_zero(self):
        space = ExplicitSpace.full(atoms(3))
        learner = memorizing_learner(space)
        h = learner(MultiSample.of(("s1", 1), ("s1", 0)))
        assert h.key == ("explicit", (0, 1, 0))  # first occurrence wins

    def test_requires_explicit_space(self):
        with pytest.raises(TypeError):
            memorizing_learner(ThresholdSpace())


def test_builtin_registry():
    space = ExplicitSpace.full(atoms(2))
    names = set(builtin_learners(space))
    assert {"sem", "const0", "const1", "memorize"} <= names
    names_parametric = set(builtin_learners(ThresholdSpace()))
    assert names_parametric == {"sem"}
