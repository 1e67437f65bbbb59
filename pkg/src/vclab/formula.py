"""Quantifier-free formula DSL over ordered exponential arithmetic.

Partitioned formulas phi(x_1..x_n; p_1..p_l) with object and parameter
variables, rational constants, +, -, *, exp, the comparisons < <= = !=, and
the connectives ``and or not ->``.  Parsing produces a typed AST that
round-trips through :func:`format_formula`; evaluation runs on an exact
rational backend (exp-free formulas only) or an IEEE double backend with
strict comparisons.

A formula plus a parameter source induces a hypothesis space of indicator
functions.  Sampled parameter sources of the syntactically recognized
closed forms (threshold, interval, halfspace, co-singleton) get exact
restriction oracles; otherwise parameter search yields verified subsets
only, never claimed exact.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterator, Sequence

from .model import (
    DichotomyTable,
    Hypothesis,
    HypothesisSpace,
    Instance,
    Labeling,
    as_instance,
    check_instance_tuple,
    to_fraction,
)
from .spaces import (
    cosingleton_dichotomies,
    halfspace_dichotomies,
    interval_dichotomies,
    threshold_dichotomies,
)


class FormulaError(Exception):
    pass


class ParseError(FormulaError):
    def __init__(self, message: str, text: str, pos: int):
        self.pos = pos
        self.line = text.count("\n", 0, pos) + 1
        self.col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} (line {self.line}, column {self.col})")


class BackendError(FormulaError):
    pass


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Const:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str
    pos: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Sub:
    left: object
    right: object


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Neg:
    term: object


@dataclass(frozen=True)
class Exp:
    term: object


@dataclass(frozen=True)
class Cmp:
    op: str  # one of < <= = !=
    left: object
    right: object


@dataclass(frozen=True)
class Not:
    child: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Implies:
    left: object
    right: object


_TERM_NODES = (Const, Var, Add, Sub, Mul, Neg, Exp)
_FORMULA_NODES = (Cmp, Not, And, Or, Implies)


@dataclass(frozen=True)
class FormulaAst:
    """A parsed partitioned formula: object variables, parameter variables,
    and the root node."""

    objects: tuple[str, ...]
    params: tuple[str, ...]
    root: object

    @property
    def arity(self) -> int:
        return len(self.objects)

    @property
    def param_arity(self) -> int:
        return len(self.params)

    @property
    def uses_exp(self) -> bool:
        return any(isinstance(n, Exp) for n in walk(self.root))


def walk(node) -> Iterator:
    yield node
    for attr in ("left", "right", "child", "term"):
        sub = getattr(node, attr, None)
        if sub is not None:
            yield from walk(sub)


# ---------------------------------------------------------------------------
# Lexer

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+(?:\.\d+)?(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>->|<=|!=|[<=+\-*()])
""", re.VERBOSE)

_KEYWORDS = {"and", "or", "not", "exp"}
_QUANTIFIERS = {"forall", "exists"}
RESERVED_WORDS = _KEYWORDS | _QUANTIFIERS


@dataclass(frozen=True)
class _Token:
    kind: str  # num | ident | keyword | op | end
    value: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        if m.lastgroup == "ws":
            pos = m.end()
            continue
        value = m.group()
        kind = m.lastgroup
        if kind == "ident":
            if value in _QUANTIFIERS:
                raise ParseError(
                    "quantifiers are not supported: only quantifier-free "
                    "formulas can be evaluated", text, pos)
            if value in _KEYWORDS:
                kind = "keyword"
        tokens.append(_Token(kind, value, pos))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


# ---------------------------------------------------------------------------
# Parser (recursive descent; one backtrack point for '(' ambiguity)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def next(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok: _Token | None = None):
        tok = tok or self.peek()
        raise ParseError(message, self.text, tok.pos)

    def expect_op(self, op: str) -> _Token:
        tok = self.peek()
        if tok.kind != "op" or tok.value != op:
            self.error(f"expected {op!r}")
        return self.next()

    def at_op(self, *ops: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.value in ops

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "keyword" and tok.value == word

    # formula precedence: -> (right) < or < and < not < comparison

    def parse_formula(self):
        left = self.parse_or()
        if self.at_op("->"):
            self.next()
            return Implies(left, self.parse_formula())
        return left

    def parse_or(self):
        node = self.parse_and()
        while self.at_keyword("or"):
            self.next()
            node = Or(node, self.parse_and())
        return node

    def parse_and(self):
        node = self.parse_not()
        while self.at_keyword("and"):
            self.next()
            node = And(node, self.parse_not())
        return node

    def parse_not(self):
        if self.at_keyword("not"):
            self.next()
            return Not(self.parse_not())
        return self.parse_atom()

    def parse_atom(self):
        if self.at_op("("):
            saved = self.i
            try:
                self.next()
                node = self.parse_formula()
                self.expect_op(")")
                return node
            except ParseError:
                self.i = saved  # '(' opened a term, not a formula
        return self.parse_comparison()

    def parse_comparison(self):
        left = self.parse_term()
        tok = self.peek()
        if tok.kind == "op" and tok.value in ("<", "<=", "=", "!="):
            self.next()
            return Cmp(tok.value, left, self.parse_term())
        self.error("expected a comparison operator (< <= = !=)")

    # term precedence: +,- < * < unary - < primary

    def parse_term(self):
        node = self.parse_factor()
        while self.at_op("+", "-"):
            op = self.next().value
            right = self.parse_factor()
            node = Add(node, right) if op == "+" else Sub(node, right)
        return node

    def parse_factor(self):
        node = self.parse_unary()
        while self.at_op("*"):
            self.next()
            node = Mul(node, self.parse_unary())
        return node

    def parse_unary(self):
        if self.at_op("-"):
            self.next()
            return Neg(self.parse_unary())
        return self.parse_primary()

    def parse_primary(self):
        tok = self.peek()
        if tok.kind == "num":
            self.next()
            try:
                return Const(Fraction(tok.value))
            except ZeroDivisionError:
                self.error("rational literal with zero denominator", tok)
        if tok.kind == "ident":
            self.next()
            return Var(tok.value, tok.pos)
        if tok.kind == "keyword" and tok.value == "exp":
            self.next()
            self.expect_op("(")
            inner = self.parse_term()
            self.expect_op(")")
            return Exp(inner)
        if tok.kind == "op" and tok.value == "(":
            self.next()
            inner = self.parse_term()
            self.expect_op(")")
            return inner
        self.error("expected a term")


def parse_formula(text: str, objects: Sequence[str],
                  params: Sequence[str] = ()) -> FormulaAst:
    """Parse a partitioned formula; every variable occurring in the text
    must be declared in exactly one of the two partitions."""
    objects = tuple(objects)
    params = tuple(params)
    declared = set(objects) | set(params)
    if len(declared) != len(objects) + len(params):
        raise FormulaError("object and parameter variables must be "
                           "pairwise distinct")
    bad = declared & RESERVED_WORDS
    if bad:
        raise FormulaError(f"reserved words cannot be variables: {sorted(bad)}")
    parser = _Parser(text)
    root = parser.parse_formula()
    tail = parser.peek()
    if tail.kind != "end":
        parser.error(f"unexpected trailing input {tail.value!r}", tail)
    for node in walk(root):
        if isinstance(node, Var) and node.name not in declared:
            raise ParseError(f"undeclared variable {node.name!r}",
                             text, node.pos)
    return FormulaAst(objects=objects, params=params, root=root)


# ---------------------------------------------------------------------------
# Formatter (minimal parentheses, preserves tree shape on reparse)

_F_LEVEL = {Implies: 1, Or: 2, And: 3, Not: 4, Cmp: 5}
_T_LEVEL = {Add: 1, Sub: 1, Mul: 2, Neg: 3, Const: 4, Var: 4, Exp: 4}


def _fmt_formula(node, minimum: int) -> str:
    level = _F_LEVEL[type(node)]
    if isinstance(node, Implies):
        body = f"{_fmt_formula(node.left, 2)} -> {_fmt_formula(node.right, 1)}"
    elif isinstance(node, Or):
        body = f"{_fmt_formula(node.left, 2)} or {_fmt_formula(node.right, 3)}"
    elif isinstance(node, And):
        body = f"{_fmt_formula(node.left, 3)} and {_fmt_formula(node.right, 4)}"
    elif isinstance(node, Not):
        body = f"not {_fmt_formula(node.child, 4)}"
    else:
        body = f"{_fmt_term(node.left, 1)} {node.op} {_fmt_term(node.right, 1)}"
    return f"({body})" if level < minimum else body


def _fmt_term(node, minimum: int) -> str:
    level = _T_LEVEL[type(node)]
    if isinstance(node, Const):
        body = str(node.value)
        if node.value < 0:
            body = f"({body})"  # manual ASTs only; parser never builds these
    elif isinstance(node, Var):
        body = node.name
    elif isinstance(node, Add):
        body = f"{_fmt_term(node.left, 1)} + {_fmt_term(node.right, 2)}"
    elif isinstance(node, Sub):
        body = f"{_fmt_term(node.left, 1)} - {_fmt_term(node.right, 2)}"
    elif isinstance(node, Mul):
        body = f"{_fmt_term(node.left, 2)} * {_fmt_term(node.right, 3)}"
    elif isinstance(node, Neg):
        body = f"-{_fmt_term(node.term, 3)}"
    else:
        body = f"exp({_fmt_term(node.term, 1)})"
    return f"({body})" if level < minimum else body


def format_formula(ast: FormulaAst) -> str:
    return _fmt_formula(ast.root, 1)


# ---------------------------------------------------------------------------
# Evaluation

EXACT = "exact"
FLOAT = "float"


def _exp_overflow_safe(v: float) -> float:
    try:
        return math.exp(v)
    except OverflowError:
        return math.inf


def _eval_term(node, env, backend):
    if isinstance(node, Const):
        return node.value if backend == EXACT else float(node.value)
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Add):
        return _eval_term(node.left, env, backend) + _eval_term(node.right, env, backend)
    if isinstance(node, Sub):
        return _eval_term(node.left, env, backend) - _eval_term(node.right, env, backend)
    if isinstance(node, Mul):
        return _eval_term(node.left, env, backend) * _eval_term(node.right, env, backend)
    if isinstance(node, Neg):
        return -_eval_term(node.term, env, backend)
    if isinstance(node, Exp):
        return _exp_overflow_safe(_eval_term(node.term, env, backend))
    raise TypeError(f"not a term node: {node!r}")


def _eval_formula(node, env, backend) -> bool:
    if isinstance(node, Cmp):
        left = _eval_term(node.left, env, backend)
        right = _eval_term(node.right, env, backend)
        if node.op == "<":
            return left < right
        if node.op == "<=":
            return left <= right
        if node.op == "=":
            return left == right
        return left != right
    if isinstance(node, Not):
        return not _eval_formula(node.child, env, backend)
    if isinstance(node, And):
        return _eval_formula(node.left, env, backend) and \
            _eval_formula(node.right, env, backend)
    if isinstance(node, Or):
        return _eval_formula(node.left, env, backend) or \
            _eval_formula(node.right, env, backend)
    if isinstance(node, Implies):
        return (not _eval_formula(node.left, env, backend)) or \
            _eval_formula(node.right, env, backend)
    raise TypeError(f"not a formula node: {node!r}")


def eval_formula(ast: FormulaAst, x: Sequence, w: Sequence = (),
                 backend: str = EXACT) -> bool:
    """Truth value of the formula at object tuple x and parameter tuple w."""
    if backend not in (EXACT, FLOAT):
        raise BackendError(f"unknown backend {backend!r}")
    if len(x) != ast.arity:
        raise ValueError(f"expected {ast.arity} object values, got {len(x)}")
    if len(w) != ast.param_arity:
        raise ValueError(f"expected {ast.param_arity} parameter values, "
                         f"got {len(w)}")
    if backend == EXACT:
        if ast.uses_exp:
            raise BackendError(
                "the exact backend cannot evaluate exp; use backend='float'")
        env = {name: to_fraction(v) for name, v in zip(ast.objects, x)}
        env.update({name: to_fraction(v) for name, v in zip(ast.params, w)})
    else:
        env = {name: float(v) for name, v in zip(ast.objects, x)}
        env.update({name: float(v) for name, v in zip(ast.params, w)})
    return _eval_formula(ast.root, env, backend)


# ---------------------------------------------------------------------------
# Closed-form recognition


@dataclass(frozen=True)
class _ClosedForm:
    name: str
    vc: int
    enumerate_fn: Callable = field(compare=False)


def _match_var(node, names) -> str | None:
    if isinstance(node, Var) and node.name in names:
        return node.name
    return None


def recognize_closed_form(ast: FormulaAst) -> _ClosedForm | None:
    """Detect formulas whose full parameter range has a known combinatorial
    restriction oracle: co-singleton, threshold, interval, halfspace."""
    objects, params = set(ast.objects), set(ast.params)
    root = ast.root

    if ast.arity == 1 and ast.param_arity == 1 and isinstance(root, Cmp):
        left_obj = _match_var(root.left, objects)
        right_obj = _match_var(root.right, objects)
        left_par = _match_var(root.left, params)
        right_par = _match_var(root.right, params)
        if root.op == "!=" and (
                (left_obj and right_par) or (left_par and right_obj)):
            def enum_cosingleton(points):
                values = [p[0] for p in points]
                return [(lab, (w,)) for lab, w in cosingleton_dichotomies(values)]
            return _ClosedForm("co-singleton", 1, enum_cosingleton)
        if root.op == "<=" and left_par and right_obj:
            def enum_threshold(points):
                values = [p[0] for p in points]
                return [(lab, (w,)) for lab, w in threshold_dichotomies(values)]
            return _ClosedForm("threshold", 1, enum_threshold)

    if (ast.arity == 1 and ast.param_arity == 2 and isinstance(root, And)
            and isinstance(root.left, Cmp) and isinstance(root.right, Cmp)
            and root.left.op == "<=" and root.right.op == "<="):
        lo = _match_var(root.left.left, params)
        x1 = _match_var(root.left.right, objects)
        x2 = _match_var(root.right.left, objects)
        hi = _match_var(root.right.right, params)
        if lo and hi and x1 and x2 and x1 == x2 and lo != hi:
            order = {name: i for i, name in enumerate(ast.params)}

            def enum_interval(points, _lo=lo, _hi=hi, _order=order):
                values = [p[0] for p in points]
                out = []
                for lab, (a, b) in interval_dichotomies(values):
                    w = [None, None]
                    w[_order[_lo]] = a
                    w[_order[_hi]] = b
                    out.append((lab, tuple(w)))
                return out
            return _ClosedForm("interval", 2, enum_interval)

    if (ast.param_arity == ast.arity + 1 and isinstance(root, Cmp)
            and root.op == "<=" and root.left == Const(Fraction(0))):
        linear = _match_affine(root.right, ast)
        if linear is not None:
            coeff_params, bias_param = linear
            order = {name: i for i, name in enumerate(ast.params)}

            def enum_halfspace(points, _coeffs=coeff_params, _bias=bias_param,
                               _order=order, _n=ast.arity):
                out = []
                for lab, witness in halfspace_dichotomies(
                        [tuple(p) for p in points], _n):
                    w = [None] * (_n + 1)
                    for j, pname in enumerate(_coeffs):
                        w[_order[pname]] = witness[j]
                    w[_order[_bias]] = witness[_n]
                    out.append((lab, tuple(w)))
                return out
            return _ClosedForm("halfspace", ast.arity + 1, enum_halfspace)
    return None


def _match_affine(node, ast: FormulaAst):
    """Match sum of p_j * x_j products (one per object, distinct params)
    plus exactly one bare parameter; returns (coeff params by object order,
    bias param) or None."""
    objects = set(ast.objects)
    params = set(ast.params)
    addends: list = []

    def flatten(n):
        if isinstance(n, Add):
            flatten(n.left)
            flatten(n.right)
        else:
            addends.append(n)

    flatten(node)
    coeff_by_object: dict[str, str] = {}
    bias: str | None = None
    used_params: set[str] = set()
    for term in addends:
        if isinstance(term, Var) and term.name in params:
            if bias is not None or term.name in used_params:
                return None
            bias = term.name
            used_params.add(term.name)
        elif isinstance(term, Mul):
            a, b = term.left, term.right
            pa, xb = _match_var(a, params), _match_var(b, objects)
            xa, pb = _match_var(a, objects), _match_var(b, params)
            if pa and xb:
                pname, xname = pa, xb
            elif xa and pb:
                pname, xname = pb, xa
            else:
                return None
            if xname in coeff_by_object or pname in used_params:
                return None
            coeff_by_object[xname] = pname
            used_params.add(pname)
        else:
            return None
    if bias is None or set(coeff_by_object) != objects:
        return None
    if used_params != params:
        return None
    return tuple(coeff_by_object[x] for x in ast.objects), bias


# ---------------------------------------------------------------------------
# Parameter sources and definable hypothesis spaces


@dataclass(frozen=True)
class ExplicitParams:
    """A finite, explicitly listed parameter family."""

    tuples: tuple[tuple[Fraction, ...], ...]

    @staticmethod
    def of(tuples: Sequence[Sequence]) -> "ExplicitParams":
        out = tuple(tuple(to_fraction(v) for v in t) for t in tuples)
        if not out:
            raise ValueError("parameter list must be non-empty")
        return ExplicitParams(tuple(sorted(set(out))))


@dataclass(frozen=True)
class GridParams:
    """A rectangular grid: one axis of values per parameter variable."""

    axes: tuple[tuple[Fraction, ...], ...]

    @staticmethod
    def of(axes: Sequence[Sequence]) -> "GridParams":
        out = tuple(tuple(sorted({to_fraction(v) for v in axis}))
                    for axis in axes)
        if not out or any(not axis for axis in out):
            raise ValueError("every grid axis needs at least one value")
        return GridParams(out)

    def tuples(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(product(*self.axes))


@dataclass(frozen=True)
class SampledParams:
    """The full parameter space, explored by seeded random search within a
    budget.  Induced oracles are exact only for recognized closed forms."""

    budget: int = 2000
    seed: int = 0
    low: float = -10.0
    high: float = 10.0


ParamSource = ExplicitParams | GridParams | SampledParams


class DefinableSpace(HypothesisSpace):
    """Indicator functions 1[phi(. ; w)] of a formula, over a parameter
    source."""

    kind = "formula-defined"

    def __init__(self, ast: FormulaAst, source: ParamSource,
                 backend: str | None = None,
                 instance_arity: int | None = None):
        if instance_arity is not None and instance_arity != ast.arity:
            raise ValueError(
                f"formula has object arity {ast.arity}, expected "
                f"{instance_arity}")
        if backend is None:
            backend = FLOAT if ast.uses_exp else EXACT
        if backend == EXACT and ast.uses_exp:
            raise BackendError(
                "the exact backend cannot evaluate exp; use backend='float'")
        self.ast = ast
        self.source = source
        self.backend = backend
        self.closed_form = (recognize_closed_form(ast)
                            if isinstance(source, SampledParams) else None)
        if isinstance(source, GridParams) and len(source.axes) != ast.param_arity:
            raise ValueError("grid must have one axis per parameter variable")
        if isinstance(source, ExplicitParams):
            if any(len(t) != ast.param_arity for t in source.tuples):
                raise ValueError("parameter tuples must match the parameter "
                                 "arity")

    @property
    def oracle_exact(self) -> bool:
        if isinstance(self.source, (ExplicitParams, GridParams)):
            return True
        return self.closed_form is not None

    def known_vc(self) -> int | None:
        return self.closed_form.vc if self.closed_form else None

    def hypothesis(self, w: Sequence) -> Hypothesis:
        w = tuple(to_fraction(v) for v in w)
        if len(w) != self.ast.param_arity:
            raise ValueError("parameter tuple has wrong arity")
        ast, backend = self.ast, self.backend

        def fn(x: Instance, _w=w) -> int:
            coords = x.coords
            if len(coords) != ast.arity:
                raise TypeError(f"instance {x} does not have arity {ast.arity}")
            return 1 if eval_formula(ast, coords, _w, backend) else 0

        return Hypothesis(key=("formula",) + w, fn=fn)

    def hypothesis_from_key(self, key) -> Hypothesis:
        return self.hypothesis(key)

    def _finite_tuples(self) -> tuple[tuple[Fraction, ...], ...]:
        if isinstance(self.source, ExplicitParams):
            return self.source.tuples
        if isinstance(self.source, GridParams):
            return self.source.tuples()
        raise TypeError("the sampled parameter space is not finitely "
                        "enumerable")

    def hypotheses(self) -> Iterator[Hypothesis]:
        for w in sorted(self._finite_tuples()):
            yield self.hypothesis(w)

    def _labeling_of(self, w: Sequence[Fraction],
                     instances: Sequence[Instance]) -> Labeling:
        return tuple(1 if eval_formula(self.ast, x.coords, w, self.backend)
                     else 0 for x in instances)

    def dichotomies(self, instances: Sequence[Instance]) -> DichotomyTable:
        instances = check_instance_tuple(instances)
        for x in instances:
            if len(x.coords) != self.ast.arity:
                raise TypeError(f"instance {x} does not have arity "
                                f"{self.ast.arity}")

        if self.closed_form is not None:
            witnesses: dict[Labeling, Hypothesis] = {}
            points = [x.coords for x in instances]
            for lab, w in self.closed_form.enumerate_fn(points):
                if self._labeling_of(w, instances) != lab:
                    raise AssertionError(
                        f"{self.closed_form.name} witness {w} failed "
                        f"re-verification")
                witnesses.setdefault(lab, self.hypothesis(w))
            return DichotomyTable(instances, witnesses, exact=True)

        if isinstance(self.source, (ExplicitParams, GridParams)):
            witnesses = {}
            for w in sorted(self._finite_tuples()):
                witnesses.setdefault(self._labeling_of(w, instances),
                                     self.hypothesis(w))
            return DichotomyTable(instances, witnesses, exact=True)

        witnesses = {}
        for w in _candidate_parameters(self.ast, [x.coords for x in instances],
                                       self.source, grid=None):
            witnesses.setdefault(self._labeling_of(w, instances),
                                 self.hypothesis(w))
            if len(witnesses) == 2 ** len(instances):
                break
        return DichotomyTable(instances, witnesses, exact=False)


def definable_space(ast: FormulaAst, source, backend: str | None = None,
                    instance_arity: int | None = None) -> DefinableSpace:
    """Build the hypothesis space of a formula over a parameter source.

    ``source`` may be a ParamSource, a list of parameter tuples (explicit),
    or a list of per-parameter axes wrapped via :class:`GridParams`.
    """
    if isinstance(source, (ExplicitParams, GridParams, SampledParams)):
        return DefinableSpace(ast, source, backend, instance_arity)
    return DefinableSpace(ast, ExplicitParams.of(source), backend,
                          instance_arity)


# ---------------------------------------------------------------------------
# Shattering witness search


@dataclass(frozen=True)
class ShatterSearchVerdict:
    """Outcome of parameter-witness search for shattering.

    ``shattered`` verdicts are sound: every labeling's witness has been
    re-verified by evaluation.  The negative outcome is ``not-found``:
    parameter search over an infinite space is incomplete, so absence of a
    witness within budget never proves unshatterability.
    """

    status: str  # "shattered" | "not-found"
    witnesses: dict[Labeling, tuple[Fraction, ...]] | None
    budget_used: int

    @property
    def shattered(self) -> bool:
        return self.status == "shattered"


def _candidate_parameters(ast: FormulaAst, points, source: SampledParams,
                          grid) -> Iterator[tuple[Fraction, ...]]:
    arity = ast.param_arity
    if arity == 0:
        yield ()
        return
    emitted = 0

    def budget_left() -> bool:
        return emitted < source.budget

    if grid is not None:
        axes = [tuple(to_fraction(v) for v in axis) for axis in grid]
        if len(axes) != arity:
            raise ValueError("grid must have one axis per parameter variable")
        for w in product(*axes):
            if not budget_left():
                return
            emitted += 1
            yield w

    coord_values = sorted({c for p in points for c in p})
    axis = set(coord_values) | {Fraction(0), Fraction(1), Fraction(-1)}
    for a, b in zip(coord_values, coord_values[1:]):
        axis.add((a + b) / 2)
    if coord_values:
        axis.add(coord_values[0] - 1)
        axis.add(coord_values[-1] + 1)
    axis = sorted(axis)
    if len(axis) ** arity <= max(0, source.budget - emitted):
        for w in product(axis, repeat=arity):
            if not budget_left():
                return
            emitted += 1
            yield w

    rng = random.Random(source.seed)
    lo = min(source.low, float(coord_values[0]) - 2) if coord_values else source.low
    hi = max(source.high, float(coord_values[-1]) + 2) if coord_values else source.high
    while budget_left():
        emitted += 1
        yield tuple(Fraction(rng.uniform(lo, hi)) for _ in range(arity))


def nip_shatter_search(ast: FormulaAst, instances: Sequence,
                       budget: int = 2000, seed: int = 0,
                       grid: Sequence[Sequence] | None = None
                       ) -> ShatterSearchVerdict:
    """Search parameter space for witnesses realizing every labeling of the
    instances; a complete witness map means the formula's full hypothesis
    family shatters the set."""
    points = [as_instance(x).coords for x in instances]
    if not points:
        raise ValueError("instance list must be non-empty")
    if any(len(p) != ast.arity for p in points):
        raise ValueError(f"instances must have arity {ast.arity}")
    backend = FLOAT if ast.uses_exp else EXACT
    target = 2 ** len(points)
    found: dict[Labeling, tuple[Fraction, ...]] = {}
    used = 0
    for w in _candidate_parameters(ast, points,
                                   SampledParams(budget=budget, seed=seed),
                                   grid):
        used += 1
        labeling = tuple(1 if eval_formula(ast, p, w, backend) else 0
                         for p in points)
        found.setdefault(labeling, w)
        if len(found) == target:
            break
    if len(found) < target:
        return ShatterSearchVerdict(status="not-found", witnesses=None,
                                    budget_used=used)
    for labeling, w in found.items():
        check = tuple(1 if eval_formula(ast, p, w, backend) else 0
                      for p in points)
        if check != labeling:
            raise AssertionError(f"witness {w} failed re-verification")
    return ShatterSearchVerdict(status="shattered", witnesses=dict(found),
                                budget_used=used)


# ---------------------------------------------------------------------------
# Builders for the worked classifier families


def relu_graph_formula() -> FormulaAst:
    """The graph of max(0, x) as a parameter-free formula in (x, y)."""
    return parse_formula("(x < 0 -> y = 0) and (0 <= x -> y = x)",
                         objects=("x", "y"))


def sigmoid_network_formula(n_inputs: int, hidden_units: int) -> FormulaAst:
    """Thresholded two-layer sigmoid network as a formula over exp.

    Hypotheses are 1[u0 + sum_i u_i * s(v_i . x + v_i_0) >= 0] with
    s(t) = 1/(1 + exp(-t)).  The DSL has no division, so the inequality is
    emitted with denominators cleared: multiplying through by the positive
    product of all (1 + exp(-t_i)) factors preserves the sign.
    """
    if n_inputs < 1 or hidden_units < 1:
        raise ValueError("need n_inputs >= 1 and hidden_units >= 1")
    xs = tuple(f"x{j}" for j in range(1, n_inputs + 1))
    us = tuple(f"u{i}" for i in range(hidden_units + 1))
    vs = tuple(f"v{i}_{j}" for i in range(1, hidden_units + 1)
               for j in range(n_inputs + 1))
    params = us + vs

    def pre_activation(i: int):
        term = Var(f"v{i}_0")
        for j in range(1, n_inputs + 1):
            term = Add(term, Mul(Var(f"v{i}_{j}"), Var(f"x{j}")))
        return term

    def factor(i: int):
        return Add(Const(Fraction(1)), Exp(Neg(pre_activation(i))))

    def prod(terms):
        node = terms[0]
        for t in terms[1:]:
            node = Mul(node, t)
        return node

    all_factors = [factor(i) for i in range(1, hidden_units + 1)]
    total = Mul(Var("u0"), prod(all_factors))
    for i in range(1, hidden_units + 1):
        others = [all_factors[j - 1] for j in range(1, hidden_units + 1)
                  if j != i]
        contribution = (Mul(Var(f"u{i}"), prod(others)) if others
                        else Var(f"u{i}"))
        total = Add(total, contribution)
    root = Cmp("<=", Const(Fraction(0)), total)
    return FormulaAst(objects=xs, params=params, root=root)
