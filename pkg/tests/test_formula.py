import math
import random
from fractions import Fraction as F

import pytest

from vclab import (
    CoSingletonSpace,
    DefinableSpace,
    ExplicitParams,
    GridParams,
    HalfspaceSpace,
    Instance,
    IntervalSpace,
    SampledParams,
    ThresholdSpace,
    definable_space,
    eval_formula,
    format_formula,
    nip_shatter_search,
    parse_formula,
    realized_dichotomies,
    relu_graph_formula,
    sigmoid_network_formula,
    vc_dimension,
)
from vclab.formula import (
    Add,
    And,
    BackendError,
    Cmp,
    Const,
    Mul,
    Neg,
    ParseError,
    Var,
    recognize_closed_form,
)
from conftest import points

RELU_TEXT = "(x < 0 -> y = 0) and (0 <= x -> y = x)"


class TestParser:
    def test_relu_formula(self):
        ast = parse_formula(RELU_TEXT, ["x", "y"])
        assert isinstance(ast.root, And)
        assert not ast.uses_exp
        assert ast.arity == 2 and ast.param_arity == 0

    def test_cosingleton_formula(self):
        ast = parse_formula("x != p", ["x"], ["p"])
        assert ast.root == Cmp("!=", Var("x"), Var("p"))

    def test_malformed_input_reports_column(self):
        with pytest.raises(ParseError) as exc:
            parse_formula("x < (", ["x"])
        assert exc.value.col >= 5

    def test_undeclared_variable(self):
        with pytest.raises(ParseError) as exc:
            parse_formula("x < q", ["x"], ["p"])
        assert "q" in str(exc.value)

    def test_quantifiers_rejected(self):
        with pytest.raises(ParseError) as exc:
            parse_formula("forall x (x < 1)", ["x"])
        assert "quantifier" in str(exc.value)

    def test_reserved_words_cannot_be_declared(self):
        from vclab.formula import FormulaError
        with pytest.raises(FormulaError):
            parse_formula("exp < 1", ["exp"])

    def test_overlapping_partitions_rejected(self):
        from vclab.formula import FormulaError
        with pytest.raises(FormulaError):
            parse_formula("x < 1", ["x"], ["x"])

    def test_trailing_input_rejected(self):
        with pytest.raises(ParseError):
            parse_formula("x < 1 y", ["x", "y"])

    def test_precedence(self):
        ast = parse_formula("a + b * c < 1", ["a", "b", "c"])
        assert ast.root.left == Add(Var("a"), Mul(Var("b"), Var("c")))
        ast2 = parse_formula("-a * b < 1", ["a", "b"])
        assert ast2.root.left == Mul(Neg(Var("a")), Var("b"))

    def test_rational_and_decimal_literals(self):
        ast = parse_formula("x < 1/3 and x < 0.5", ["x"])
        assert ast.root.left.right == Const(F(1, 3))
        assert ast.root.right.right == Const(F(1, 2))

    def test_zero_denominator_literal_rejected(self):
        with pytest.raises(ParseError):
            parse_formula("x < 1/0", ["x"])

    def test_parenthesized_term_vs_formula(self):
        ast = parse_formula("(x + 1) < 2", ["x"])
        assert ast.root == Cmp("<", Add(Var("x"), Const(F(1))), Const(F(2)))
        ast2 = parse_formula("((x < 2))", ["x"])
        assert ast2.root == Cmp("<", Var("x"), Const(F(2)))


ROUND_TRIP_CORPUS = [
    (RELU_TEXT, ("x", "y"), ()),
    ("x != p", ("x",), ("p",)),
    ("p <= x", ("x",), ("p",)),
    ("a <= x and x <= b", ("x",), ("a", "b")),
    ("0 <= w1 * x1 + w2 * x2 + b", ("x1", "x2"), ("w1", "w2", "b")),
    ("not (x < 1 or x = 2) -> x != 3 -> 0 <= x", ("x",), ()),
    ("x - -1 < x - (2 - 3) + 4 * (x + 1/2)", ("x",), ()),
]


@pytest.mark.parametrize("text,objects,params", ROUND_TRIP_CORPUS)
def test_parse_format_round_trip(text, objects, params):
    ast = parse_formula(text, objects, params)
    formatted = format_formula(ast)
    assert parse_formula(formatted, objects, params) == ast


def test_sigmoid_network_round_trips():
    for n, k in ((1, 1), (2, 2)):
        ast = sigmoid_network_formula(n, k)
        assert ast.uses_exp
        formatted = format_formula(ast)
        assert parse_formula(formatted, ast.objects, ast.params) == ast


class TestEval:
    def test_relu_examples(self):
        ast = relu_graph_formula()
        assert eval_formula(ast, (-2, 0)) is True
        assert eval_formula(ast, (3, 3)) is True
        assert eval_formula(ast, (3, 0)) is False

    def test_relu_against_oracle(self):
        ast = relu_graph_formula()
        rng = random.Random(123)
        for _ in range(500):
            x = F(rng.randint(-60, 60), rng.randint(1, 10))
            y = (max(F(0), x) if rng.random() < 0.5
                 else F(rng.randint(-60, 60), rng.randint(1, 10)))
            assert eval_formula(ast, (x, y)) is (y == max(F(0), x))

    def test_exact_backend_rejects_exp(self):
        ast = sigmoid_network_formula(1, 1)
        with pytest.raises(BackendError):
            eval_formula(ast, (1,), (0,) * len(ast.params), backend="exact")

    def test_arity_validation(self):
        ast = parse_formula("x != p", ["x"], ["p"])
        with pytest.raises(ValueError):
            eval_formula(ast, (1, 2), (0,))
        with pytest.raises(ValueError):
            eval_formula(ast, (1,), ())

    def test_backend_agreement_away_from_boundaries(self):
        ast = parse_formula("a <= x and x <= b", ["x"], ["a", "b"])
        rng = random.Random(6)
        checked = 0
        while checked < 200:
            x = F(rng.randint(-100, 100), 8)
            a = F(rng.randint(-100, 100), 8)
            b = F(rng.randint(-100, 100), 8)
            if x == a or x == b:
                continue
            exact = eval_formula(ast, (x,), (a, b), backend="exact")
            inexact = eval_formula(ast, (x,), (a, b), backend="float")
            assert exact == inexact
            checked += 1

    def test_exp_overflow_is_inf(self):
        ast = parse_formula("exp(x) < y", ["x", "y"])
        assert eval_formula(ast, (10000, 5), backend="float") is False


def sigmoid(t: float) -> float:
    return 1.0 / (1.0 + math.exp(-t))


def test_sigmoid_network_matches_direct_network():
    rng = random.Random(99)
    for n, k in ((1, 1), (2, 2), (2, 3)):
        ast = sigmoid_network_formula(n, k)
        checked = 0
        while checked < 200:
            w = {p: rng.uniform(-4, 4) for p in ast.params}
            x = [rng.uniform(-4, 4) for _ in range(n)]
            total = w["u0"]
            for i in range(1, k + 1):
                pre = w[f"v{i}_0"] + sum(w[f"v{i}_{j}"] * x[j - 1]
                                         for j in range(1, n + 1))
                total += w[f"u{i}"] * sigmoid(pre)
            if abs(total) < 1e-9:
                continue  # resample near the decision boundary
            got = eval_formula(ast, x, [w[p] for p in ast.params],
                               backend="float")
            assert got is (total >= 0)
            checked += 1


class TestDefinableSpace:
    def test_grid_cosingletons(self):
        ast = parse_formula("x != p", ["x"], ["p"])
        space = definable_space(ast, GridParams.of([[0, 1, 2]]))
        assert space.oracle_exact
        assert len(list(space.hypotheses())) == 3
        labelings, exact = realized_dichotomies(space, points(0, 1, 2))
        assert exact
        assert labelings == {(0, 1, 1), (1, 0, 1), (1, 1, 0)}

    def test_sampled_cosingleton_recognized(self):
        ast = parse_formula("x != p", ["x"], ["p"])
        space = definable_space(ast, SampledParams(budget=100))
        assert space.closed_form.name == "co-singleton"
        labelings, exact = realized_dichotomies(space, points(1, 2, 3))
        assert exact
        assert labelings == {(1, 1, 1), (0, 1, 1), (1, 0, 1), (1, 1, 0)}

    def test_recognized_forms_match_native_spaces(self):
        cases = [
            ("p <= x", ("x",), ("p",), ThresholdSpace(), points(1, 2, 4)),
            ("x != p", ("x",), ("p",), CoSingletonSpace(), points(0, 3, 5)),
            ("a <= x and x <= b", ("x",), ("a", "b"), IntervalSpace(),
             points(1, 2, 3, 4)),
            ("0 <= w1 * x1 + w2 * x2 + b", ("x1", "x2"), ("w1", "w2", "b"),
             HalfspaceSpace(2),
             [Instance.point(0, 0), Instance.point(1, 0),
              Instance.point(0, 1)]),
        ]
        for text, objects, params, native, pool in cases:
            ast = parse_formula(text, objects, params)
            space = definable_space(ast, SampledParams(budget=50))
            assert space.closed_form is not None
            got, exact = realized_dichotomies(space, pool)
            want, _ = realized_dichotomies(native, pool)
            assert exact and got == want
            assert space.known_vc() == native.known_vc()

    def test_interval_recognition_with_swapped_declaration_order(self):
        ast = parse_formula("b <= x and x <= a", ["x"], ["a", "b"])
        space = definable_space(ast, SampledParams(budget=30))
        assert space.closed_form.name == "interval"
        got, exact = realized_dichotomies(space, points(1, 2, 3))
        want, _ = realized_dichotomies(IntervalSpace(), points(1, 2, 3))
        assert exact and got == want

    def test_unrecognized_sampled_is_sound_subset(self):
        ast = parse_formula("p * x <= 1", ["x"], ["p"])
        space = definable_space(ast, SampledParams(budget=400, seed=1))
        assert recognize_closed_form(ast) is None
        assert not space.oracle_exact
        pool = points(1, 2)
        table = space.dichotomies(pool)
        assert not table.exact
        for labeling, h in table.witnesses.items():
            assert tuple(h(x) for x in pool) == labeling

    def test_explicit_params(self):
        ast = parse_formula("p <= x", ["x"], ["p"])
        space = definable_space(ast, [[0], [2]])
        labelings, exact = realized_dichotomies(space, points(1,))
        assert exact and labelings == {(0,), (1,)}

    def test_inexact_oracle_gates_error_operations(self):
        from vclab import (
            DiscreteDistribution,
            InexactOracleError,
            MultiSample,
            approximation_error,
            empirical_opt,
            u_statistic,
        )
        ast = parse_formula("p * x <= 1", ["x"], ["p"])
        space = definable_space(ast, SampledParams(budget=200, seed=2))
        dist = DiscreteDistribution.uniform([((1,), 1), ((2,), 0)])
        zbar = MultiSample.of(((1,), 1), ((2,), 0))
        for fn, args in ((approximation_error, (space, dist)),
                         (empirical_opt, (space, zbar)),
                         (u_statistic, (space, dist, zbar))):
            with pytest.raises(InexactOracleError):
                fn(*args)
        # opting in yields bound semantics: an upper bound for the minima,
        # a verified lower bound for the supremum
        opt = approximation_error(space, dist, require_exact=False)
        assert 0 <= opt <= 1
        low = u_statistic(space, dist, zbar, require_exact=False)
        assert 0 <= low <= 1

    def test_empty_param_list_rejected(self):
        with pytest.raises(ValueError):
            ExplicitParams.of([])

    def test_arity_mismatch_rejected(self):
        ast = parse_formula("x != p", ["x"], ["p"])
        with pytest.raises(ValueError):
            DefinableSpace(ast, SampledParams(), instance_arity=2)
        space = definable_space(ast, SampledParams())
        with pytest.raises(TypeError):
            space.dichotomies([Instance.point(1, 2)])

    def test_parameterless_formula_gives_singleton(self):
        ast = parse_formula("0 <= x", ["x"])
        space = definable_space(ast, [[]])
        labelings, exact = realized_dichotomies(space, points(-1, 1))
        assert exact and labelings == {(0, 1)}


class TestShatterSearch:
    def test_cosingleton_pair_not_found(self):
        ast = parse_formula("x != p", ["x"], ["p"])
        verdict = nip_shatter_search(ast, [1, 2], budget=400)
        assert verdict.status == "not-found"
        assert verdict.witnesses is None

    def test_threshold_singleton_shattered(self):
        ast = parse_formula("p <= x", ["x"], ["p"])
        verdict = nip_shatter_search(ast, [1], budget=100)
        assert verdict.shattered
        for labeling, w in verdict.witnesses.items():
            assert (eval_formula(ast, (F(1),), w),) == \
                (bool(labeling[0]),)

    def test_beyond_known_vc_never_found(self):
        ast = parse_formula("p <= x", ["x"], ["p"])
        verdict = nip_shatter_search(ast, [1, 2], budget=500)
        assert verdict.status == "not-found"
        ast2 = parse_formula("a <= x and x <= b", ["x"], ["a", "b"])
        verdict2 = nip_shatter_search(ast2, [1, 2, 3], budget=800)
        assert verdict2.status == "not-found"

    def test_interval_pair_shattered(self):
        ast = parse_formula("a <= x and x <= b", ["x"], ["a", "b"])
        verdict = nip_shatter_search(ast, [1, 2], budget=500)
        assert verdict.shattered

    def test_soundness_of_shattered_verdicts(self):
        rng = random.Random(14)
        pool = [
            ("x != p", ("x",), ("p",)),
            ("p <= x", ("x",), ("p",)),
            ("a <= x and x <= b", ("x",), ("a", "b")),
            ("0 <= w * x + b", ("x",), ("w", "b")),
        ]
        found = 0
        for _ in range(60):
            text, objects, params = rng.choice(pool)
            ast = parse_formula(text, objects, params)
            k = rng.randint(1, 2)
            instances = rng.sample(range(-3, 6), k)
            verdict = nip_shatter_search(ast, instances, budget=400,
                                         seed=rng.randint(0, 99))
            if not verdict.shattered:
                continue
            found += 1
            for labeling, w in verdict.witnesses.items():
                got = tuple(
                    1 if eval_formula(ast, (F(v),), w) else 0
                    for v in instances)
                assert got == labeling
        assert found >= 20

    def test_grid_consistency_with_finite_class_vc(self):
        """Over the same finite parameter grid, explicit-family VC equals the
        largest shatterable instance-set size found by witness search."""
        ast = parse_formula("x != p", ["x"], ["p"])
        grid = [[1, 2, 3]]
        space = definable_space(ast, GridParams.of(grid))
        pool = points(1, 2, 3)
        vc = vc_dimension(space, pool).value
        largest = 0
        from itertools import combinations
        for size in range(1, len(pool) + 1):
            hit = False
            for subset in combinations([1, 2, 3], size):
                verdict = nip_shatter_search(ast, list(subset),
                                             budget=len(grid[0]), grid=grid)
                if verdict.shattered:
                    hit = True
                    break
            if hit:
                largest = size
            else:
                break
        assert vc == largest == 1
