"""Common machinery for one-indeterminate normal-form engines.

An engine represents the model ``M⟨x_S⟩`` obtained from a finite model ``M``
by freely adjoining one indeterminate ``x`` of sort ``S``.  Its elements are
hashable normal-form values.  The engine is itself an algebra for the extended
signature (``lookup`` understands the base operations, the diagram constants
``@id`` and the indeterminate ``x``), so terms can be evaluated in it directly
with :func:`isolab.models.eval_term`.  Independently, every engine ships a
rewrite system on terms together with a read-off from irreducible terms to
normal-form values; the two routes are cross-checked by the test suite.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from ..dsl import parse_term
from ..models import PartialStructure, eval_term
from ..phl import App, OpSymbol, Signature, Term, Var
from ..rewriting import Rule, RuleSet, Step, rewrite

INDETERMINATE = "x"


class EngineError(ValueError):
    pass


class NotNormal(EngineError):
    """An irreducible term does not have the shape of a normal form."""


def constant_names(model: PartialStructure) -> dict[tuple[str, str], str]:
    """``@id`` for every element, or ``@Sort.id`` when ``id`` occurs in several sorts."""
    count: dict[str, int] = {}
    for s in model.theory.sorts:
        for a in model.carrier(s):
            count[a] = count.get(a, 0) + 1
    return {
        (s, a): (f"@{a}" if count[a] == 1 else f"@{s}.{a}") for s in model.theory.sorts for a in model.carrier(s)
    }


class Engine:
    """Base class; subclasses implement the value-level structure."""

    name = "engine"

    def __init__(self, model: PartialStructure, sort: str):
        theory = model.theory
        if sort not in theory.sorts:
            raise EngineError(f"unknown sort {sort!r}")
        if theory.signature.has_op(INDETERMINATE):
            raise EngineError(f"the theory already has an operation named {INDETERMINATE!r}")
        self.model = model
        self.theory = theory
        self.sort = sort
        self.const_names = constant_names(model)
        self.const_index = {n: key for key, n in self.const_names.items()}
        self.x_op = OpSymbol(INDETERMINATE, (), sort)
        self.const_ops = {key: OpSymbol(n, (), key[0]) for key, n in self.const_names.items()}
        self.signature: Signature = theory.signature.extend([self.x_op, *self.const_ops.values()])
        self._terms: dict = {}
        self._ruleset: RuleSet | None = None

    # -- value level, supplied by subclasses --

    def const(self, sort: str, elem: str):
        raise NotImplementedError

    def indeterminate(self):
        raise NotImplementedError

    def apply(self, op: str, args: tuple):
        raise NotImplementedError

    def sort_of(self, value) -> str:
        raise NotImplementedError

    def to_term(self, value) -> Term:
        raise NotImplementedError

    def format(self, value) -> str:
        raise NotImplementedError

    def x_count(self, value) -> int:
        raise NotImplementedError

    def length(self, value) -> int:
        raise NotImplementedError

    def enumerate(self, sort: str, bounds: tuple[int, int]) -> list:
        """Normal forms of ``sort`` that mention the indeterminate, within ``(max x-count, max length)``,
        ordered by (x-count, length, letters)."""
        raise NotImplementedError

    def probes(self, sort: str) -> list:
        """Test elements of ``sort``: the constants plus the atoms built from ``x``."""
        raise NotImplementedError

    def rules(self) -> list[Rule]:
        raise NotImplementedError

    def read_off(self, term: Term):
        """The normal form of an irreducible term, or None if it is stuck on an undefined operation."""
        raise NotImplementedError

    # -- shared --

    def lookup(self, op: str, args: tuple):
        if op == INDETERMINATE:
            return self.indeterminate()
        key = self.const_index.get(op)
        if key is not None:
            return self.const(*key)
        return self.apply(op, args)

    def carrier(self, sort):  # pragma: no cover - engines are infinite
        raise EngineError("normal-form algebras have no finite carrier")

    def constants(self, sort: str) -> list:
        return [self.const(sort, a) for a in self.model.carrier(sort)]

    def op(self, name: str) -> OpSymbol:
        return self.signature.op(name)

    def x_term(self) -> App:
        return App(self.x_op, ())

    def const_term(self, sort: str, elem: str) -> App:
        return App(self.const_ops[sort, elem], ())

    def app(self, name: str, *args: Term) -> App:
        return App(self.op(name), tuple(args))

    def term_of(self, value) -> Term:
        t = self._terms.get(value)
        if t is None:
            t = self._terms[value] = self.to_term(value)
        return t

    def contains_x(self, value) -> bool:
        return self.x_count(value) > 0

    def normalize(self, term: Term):
        """Normal form by direct evaluation in the engine; None if undefined."""
        return eval_term(self, term, {})

    @property
    def ruleset(self) -> RuleSet:
        if self._ruleset is None:
            self._ruleset = RuleSet(self.rules())
        return self._ruleset

    def reduce(self, term: Term, strategy: str = "innermost", trace: list[Step] | None = None, limit: int = 10_000):
        """Normal form by rewriting then reading off; None if undefined."""
        return self.read_off(rewrite(term, self.ruleset, strategy, limit, trace))

    def parse(self, text: str, context: Iterable[Var] = ()) -> Term:
        return parse_term(text, self.signature, context)

    def substitute(self, value, repl, target: "Engine | None" = None, hom: Mapping | None = None):
        """Evaluate ``value`` with ``x := repl`` in ``target`` (default: this engine).

        ``hom`` maps this model's constants into the target's model, sort by sort.
        """
        target = self if target is None else target
        return _eval_subst(self.term_of(value), target, repl, self.const_index, hom)

    def equal(self, u, v) -> bool:
        return u == v

    def describe_value(self, value) -> dict:
        return {"sort": self.sort_of(value), "normal_form": self.format(value)}


def _eval_subst(t: Term, target: Engine, repl, const_index, hom):
    op = t.op.name
    if not t.args:
        if op == INDETERMINATE:
            return repl
        sort, elem = const_index[op]
        if hom is not None:
            elem = hom[sort][elem]
        return target.const(sort, elem)
    vals = []
    for a in t.args:
        v = _eval_subst(a, target, repl, const_index, hom)
        if v is None:
            return None
        vals.append(v)
    return target.apply(op, tuple(vals))


def right_comb(engine: Engine, op: str, letters: list[Term], unit: Term) -> Term:
    """``op(l1, op(l2, ... ))``, or ``unit`` for an empty list."""
    if not letters:
        return unit
    out = letters[-1]
    for t in reversed(letters[:-1]):
        out = engine.app(op, t, out)
    return out


def flatten(t: Term, op: str) -> list[Term]:
    if isinstance(t, App) and t.op.name == op:
        out = []
        for a in t.args:
            out.extend(flatten(a, op))
        return out
    return [t]


def pattern_vars(sort_of: Mapping[str, str]) -> dict[str, Var]:
    return {name: Var(name, s) for name, s in sort_of.items()}


def make_rule(engine: Engine, name: str, lhs: str, rhs, variables: Mapping[str, str]) -> Rule:
    """Parse a rule; ``variables`` maps pattern-variable names to sorts, ``rhs`` is text or a function."""
    ctx = list(pattern_vars(variables).values())
    left = engine.parse(lhs, ctx)
    right = engine.parse(rhs, ctx) if isinstance(rhs, str) else rhs
    return Rule(name, left, right)
