"""Syntax of partial Horn logic: signatures, terms, Horn formulas, sequents, theories.

Indeterminates and diagram constants are ordinary 0-ary operation symbols of an
extended signature (see :meth:`Signature.extend`); there is no separate constant
namespace.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union


class SortError(Exception):
    """A term or formula is ill-sorted."""


@dataclass(frozen=True)
class OpSymbol:
    name: str
    arg_sorts: tuple[str, ...]
    result_sort: str

    @property
    def arity(self) -> int:
        return len(self.arg_sorts)

    def __str__(self):
        return f"{self.name} : {', '.join(self.arg_sorts)} -> {self.result_sort}"


class Term:
    """Base class of :class:`Var` and :class:`App`."""

    __slots__ = ()


@dataclass(frozen=True)
class Var(Term):
    name: str
    sort: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App(Term):
    op: OpSymbol
    args: tuple[Term, ...] = ()

    def __str__(self):
        if not self.args:
            return self.op.name
        return f"{self.op.name}({', '.join(str(a) for a in self.args)})"


def const(op: OpSymbol) -> App:
    return App(op, ())


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    @property
    def is_definedness(self) -> bool:
        return self.lhs == self.rhs

    def __str__(self):
        if self.is_definedness:
            return f"def({self.lhs})"
        return f"{self.lhs} = {self.rhs}"


def defined(t: Term) -> Equation:
    """``t ↓`` is the reflexive equation ``t = t``."""
    return Equation(t, t)


@dataclass(frozen=True)
class Horn:
    """A finite conjunction of equations; the empty conjunction is truth."""

    conjuncts: tuple[Equation, ...] = ()

    def __str__(self):
        return ", ".join(str(e) for e in self.conjuncts) if self.conjuncts else "true"

    def __iter__(self):
        return iter(self.conjuncts)

    def __len__(self):
        return len(self.conjuncts)


TOP = Horn(())


@dataclass(frozen=True)
class Sequent:
    context: tuple[Var, ...]
    premise: Horn
    conclusion: Horn
    label: str | None = None

    def __str__(self):
        head = ""
        if self.context:
            head = "forall " + ", ".join(f"{v.name}:{v.sort}" for v in self.context) + ". "
        prem = f"{self.premise} " if self.premise.conjuncts else ""
        return f"{head}{prem}|- {self.conclusion}"


@dataclass(frozen=True)
class Signature:
    sorts: tuple[str, ...]
    ops: tuple[OpSymbol, ...]
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if len(set(self.sorts)) != len(self.sorts):
            raise SortError(f"duplicate sort in {self.sorts}")
        index = {}
        for op in self.ops:
            if op.name in index:
                raise SortError(f"duplicate operation symbol {op.name!r}")
            for s in (*op.arg_sorts, op.result_sort):
                if s not in self.sorts:
                    raise SortError(f"operation {op.name!r} uses unknown sort {s!r}")
            index[op.name] = op
        object.__setattr__(self, "_index", index)

    def op(self, name: str) -> OpSymbol:
        try:
            return self._index[name]
        except KeyError:
            raise SortError(f"unknown operation symbol {name!r}") from None

    def has_op(self, name: str) -> bool:
        return name in self._index

    def extend(self, ops: Iterable[OpSymbol]) -> "Signature":
        return Signature(self.sorts, self.ops + tuple(ops))


@dataclass(frozen=True)
class Theory:
    name: str
    signature: Signature
    axioms: tuple[Sequent, ...]

    def __post_init__(self):
        for ax in self.axioms:
            check_sequent(ax, self.signature)

    @property
    def sorts(self) -> tuple[str, ...]:
        return self.signature.sorts

    @property
    def ops(self) -> tuple[OpSymbol, ...]:
        return self.signature.ops

    def axiom(self, label: str) -> Sequent:
        for ax in self.axioms:
            if ax.label == label:
                return ax
        raise KeyError(label)


Context = Union[Mapping[str, str], Iterable[Var], None]


def _context_map(context: Context) -> dict[str, str] | None:
    if context is None:
        return None
    if isinstance(context, Mapping):
        return dict(context)
    return {v.name: v.sort for v in context}


def infer_sort(t: Term, context: Context = None, signature: Signature | None = None) -> str:
    """Return the sort of ``t``; raise :class:`SortError` if it is ill-typed.

    With a context, every variable must be declared there at its own sort.  With
    a signature, every operation symbol must belong to it.
    """
    ctx = _context_map(context)
    return _infer(t, ctx, signature)


def _infer(t: Term, ctx, signature) -> str:
    if isinstance(t, Var):
        if ctx is not None:
            if t.name not in ctx:
                raise SortError(f"unknown variable {t.name!r}")
            if ctx[t.name] != t.sort:
                raise SortError(f"variable {t.name!r} declared {ctx[t.name]} but used at {t.sort}")
        return t.sort
    if not isinstance(t, App):
        raise SortError(f"not a term: {t!r}")
    op = t.op
    if signature is not None and signature.op(op.name) != op:
        raise SortError(f"operation {op.name!r} does not match the signature")
    if len(t.args) != op.arity:
        raise SortError(f"{op.name} expects {op.arity} arguments, got {len(t.args)} in {t}")
    for i, (arg, want) in enumerate(zip(t.args, op.arg_sorts)):
        got = _infer(arg, ctx, signature)
        if got != want:
            raise SortError(f"argument {i + 1} of {op.name} has sort {got}, expected {want}, in {t}")
    return op.result_sort


def free_vars(t: Term) -> set[Var]:
    if isinstance(t, Var):
        return {t}
    out: set[Var] = set()
    for a in t.args:
        out |= free_vars(a)
    return out


def horn_vars(phi: Horn) -> set[Var]:
    out: set[Var] = set()
    for eq in phi:
        out |= free_vars(eq.lhs) | free_vars(eq.rhs)
    return out


def check_sequent(seq: Sequent, signature: Signature) -> None:
    names = [v.name for v in seq.context]
    if len(set(names)) != len(names):
        raise SortError(f"duplicate variable in context of {seq}")
    for v in seq.context:
        if v.sort not in signature.sorts:
            raise SortError(f"variable {v.name!r} has unknown sort {v.sort!r}")
    for phi in (seq.premise, seq.conclusion):
        for eq in phi:
            a = infer_sort(eq.lhs, seq.context, signature)
            b = infer_sort(eq.rhs, seq.context, signature)
            if a != b:
                raise SortError(f"equation {eq} relates sorts {a} and {b}")


Binding = Union[Var, OpSymbol]


def substitute(t: Term, bindings: Mapping[Binding, Term]) -> Term:
    """Simultaneous substitution.

    Keys are variables or 0-ary operation symbols (indeterminates, diagram
    constants).  Each replacement must have the sort of what it replaces.
    """
    for key, repl in bindings.items():
        want = key.sort if isinstance(key, Var) else key.result_sort
        if isinstance(key, OpSymbol) and key.arity:
            raise SortError(f"cannot substitute for {key.name!r} of arity {key.arity}")
        got = infer_sort(repl)
        if got != want:
            raise SortError(f"binding for {key.name!r} has sort {got}, expected {want}")
    return _subst(t, bindings)


def _subst(t: Term, bindings) -> Term:
    if isinstance(t, Var):
        return bindings.get(t, t)
    if not t.args:
        return bindings.get(t.op, t)
    return App(t.op, tuple(_subst(a, bindings) for a in t.args))


def term_size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(term_size(a) for a in t.args)


def occurs(op_name: str, t: Term) -> bool:
    if isinstance(t, Var):
        return False
    return t.op.name == op_name or any(occurs(op_name, a) for a in t.args)
