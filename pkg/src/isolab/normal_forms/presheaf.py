"""Presheaf models ``J -> Set`` with an indeterminate ``x_i`` of sort ``X_i``.

Every closed term of sort ``X_j`` is either a constant ``Const(a)`` with
``a ∈ M_j`` or ``Gen(f)``, meaning ``a_f(x_i)`` for an arrow ``f : i -> j``.
"""

from __future__ import annotations

from typing import NamedTuple

from ..phl import App, Var
from ..rewriting import Rule, is_diagram_constant
from ..theories import FiniteCategory, presheaf_op, presheaf_sort
from .base import INDETERMINATE, Engine, EngineError, NotNormal


class Const(NamedTuple):
    sort: str
    elem: str

    def __str__(self):
        return f"Const({self.elem})"


class Gen(NamedTuple):
    arrow: str

    def __str__(self):
        return f"Gen({self.arrow})"


class PresheafEngine(Engine):
    name = "presheaf"

    def __init__(self, model, sort: str, J: FiniteCategory):
        super().__init__(model, sort)
        self.J = J
        self.obj_of_sort = {presheaf_sort(i): i for i in J.objects}
        if sort not in self.obj_of_sort:
            raise EngineError(f"{sort!r} is not a sort of the presheaf theory")
        self.i = self.obj_of_sort[sort]
        self.arrow_of_op = {presheaf_op(f): f for f in J.arrows}
        self.tables = {f: {a[0]: r for a, r in model.tables[presheaf_op(f)].items()} for f in J.arrows}

    def const(self, sort, elem):
        return Const(sort, elem)

    def indeterminate(self):
        return Gen(self.J.ident[self.i])

    def sort_of(self, value):
        if isinstance(value, Const):
            return value.sort
        return presheaf_sort(self.J.cod[value.arrow])

    def act(self, f: str, v):
        if isinstance(v, Const):
            return Const(presheaf_sort(self.J.cod[f]), self.tables[f][v.elem])
        return Gen(self.J.comp[f, v.arrow])

    def apply(self, op, args):
        f = self.arrow_of_op.get(op)
        if f is None:
            raise EngineError(f"unknown operation {op!r}")
        return self.act(f, args[0])

    def decide_equal(self, u, v) -> bool:
        """Constants are equal iff they are the same element, generators iff the arrows agree,
        and a constant never equals a generator."""
        return u == v

    def to_term(self, value):
        if isinstance(value, Const):
            return self.const_term(value.sort, value.elem)
        if value.arrow == self.J.ident[self.i]:
            return self.x_term()
        return self.app(presheaf_op(value.arrow), self.x_term())

    def read_off(self, term):
        if is_diagram_constant(term):
            return Const(*self.const_index[term.op.name])
        if isinstance(term, App) and term.op.name == INDETERMINATE:
            return self.indeterminate()
        if (
            isinstance(term, App)
            and term.op.name in self.arrow_of_op
            and term.args[0] == self.x_term()
            and self.arrow_of_op[term.op.name] != self.J.ident[self.i]
        ):
            return Gen(self.arrow_of_op[term.op.name])
        raise NotNormal(f"not a normal form: {term}")

    def rules(self):
        J = self.J
        rules = []
        for f in J.arrows:
            X = Var("X", presheaf_sort(J.dom[f]))
            op_f = self.op(presheaf_op(f))
            if f == J.ident[J.dom[f]]:
                rules.append(Rule(f"ident_{f}", App(op_f, (X,)), X))
            c = Var("@c", presheaf_sort(J.dom[f]))
            rules.append(Rule(f"eval_{f}", App(op_f, (c,)), self._eval_rule(f)))
        for (g, f), h in sorted(J.comp.items()):
            X = Var("X", presheaf_sort(J.dom[f]))
            lhs = App(self.op(presheaf_op(g)), (App(self.op(presheaf_op(f)), (X,)),))
            rules.append(Rule(f"collapse_{g}_{f}", lhs, App(self.op(presheaf_op(h)), (X,))))
        return rules

    def _eval_rule(self, f):
        def fire(b):
            sort, a = self.const_index[b["@c"].op.name]
            return self.const_term(presheaf_sort(self.J.cod[f]), self.tables[f][a])

        return fire

    def format(self, value):
        return str(value)

    def x_count(self, value):
        return 0 if isinstance(value, Const) else 1

    def length(self, value):
        return 1

    def enumerate(self, sort, bounds):
        j = self.obj_of_sort[sort]
        if bounds[0] < 1 or bounds[1] < 1:
            return []
        return [Gen(f) for f in self.J.hom(self.i, j)]

    def probes(self, sort):
        return self.constants(sort) + self.enumerate(sort, (1, 1))


def presheaf_engines(model, J: FiniteCategory) -> dict[str, PresheafEngine]:
    return {presheaf_sort(i): PresheafEngine(model, presheaf_sort(i), J) for i in J.objects}
