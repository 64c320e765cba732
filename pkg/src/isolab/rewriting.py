"""First-order term rewriting with two reduction strategies.

Rules are pattern pairs over :class:`~isolab.phl.Term`.  A pattern variable is
an ordinary :class:`Var`; a variable whose name starts with ``@`` only matches
diagram constants (0-ary operations whose name starts with ``@``).  The
right-hand side is either a template term or a function of the bindings that
returns a term, or ``None`` when the rule should not fire (a guard).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Union

from .phl import App, Term, Var

STRATEGIES = ("innermost", "outermost")


class RewriteLimit(RuntimeError):
    pass


def is_diagram_constant(t: Term) -> bool:
    return isinstance(t, App) and not t.args and t.op.name.startswith("@")


def match(pattern: Term, t: Term, bindings: dict) -> bool:
    if isinstance(pattern, Var):
        if pattern.name.startswith("@") and not is_diagram_constant(t):
            return False
        bound = bindings.get(pattern.name)
        if bound is None:
            bindings[pattern.name] = t
            return True
        return bound == t
    if not isinstance(t, App) or t.op.name != pattern.op.name or len(t.args) != len(pattern.args):
        return False
    return all(match(p, a, bindings) for p, a in zip(pattern.args, t.args))


def instantiate(template: Term, bindings: dict) -> Term:
    if isinstance(template, Var):
        return bindings[template.name]
    if not template.args:
        return template
    return App(template.op, tuple(instantiate(a, bindings) for a in template.args))


RHS = Union[Term, Callable[[dict], Union[Term, None]]]


@dataclass(frozen=True)
class Rule:
    name: str
    lhs: App
    rhs: RHS

    def apply(self, t: Term) -> Term | None:
        b: dict = {}
        if not match(self.lhs, t, b):
            return None
        if callable(self.rhs):
            return self.rhs(b)
        return instantiate(self.rhs, b)

    def __str__(self):
        rhs = "<computed>" if callable(self.rhs) else str(self.rhs)
        return f"{self.name}: {self.lhs} -> {rhs}"


@dataclass
class Step:
    rule: str
    position: tuple[int, ...]
    redex: Term
    contractum: Term

    def __str__(self):
        pos = ".".join(map(str, self.position)) or "root"
        return f"[{self.rule} @ {pos}] {self.redex}  ->  {self.contractum}"


@dataclass
class RuleSet:
    rules: list[Rule]
    _by_head: dict = field(default=None, init=False, repr=False)

    def __post_init__(self):
        self._by_head = {}
        for r in self.rules:
            self._by_head.setdefault(r.lhs.op.name, []).append(r)

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def step_at_root(self, t: Term) -> tuple[Rule, Term] | None:
        if not isinstance(t, App):
            return None
        for r in self._by_head.get(t.op.name, ()):
            out = r.apply(t)
            if out is not None:
                return r, out
        return None

    def is_normal(self, t: Term) -> bool:
        if self.step_at_root(t) is not None:
            return False
        return isinstance(t, Var) or all(self.is_normal(a) for a in t.args)


class _Counter:
    def __init__(self, limit):
        self.limit = limit
        self.n = 0

    def tick(self):
        self.n += 1
        if self.n > self.limit:
            raise RewriteLimit(f"no normal form within {self.limit} steps")


def _innermost(t: Term, rules: RuleSet, pos, counter, trace) -> Term:
    if isinstance(t, App) and t.args:
        args = tuple(_innermost(a, rules, pos + (i,), counter, trace) for i, a in enumerate(t.args))
        if args != t.args:
            t = App(t.op, args)
    hit = rules.step_at_root(t)
    if hit is None:
        return t
    rule, out = hit
    counter.tick()
    if trace is not None:
        trace.append(Step(rule.name, pos, t, out))
    return _innermost(out, rules, pos, counter, trace)


def _outermost_redex(t: Term, rules: RuleSet, pos):
    """Rightmost-outermost: the root first, then children from right to left."""
    hit = rules.step_at_root(t)
    if hit is not None:
        return pos, hit
    if isinstance(t, App):
        for i in range(len(t.args) - 1, -1, -1):
            found = _outermost_redex(t.args[i], rules, pos + (i,))
            if found is not None:
                return found
    return None


def _replace(t: Term, pos, new: Term) -> Term:
    if not pos:
        return new
    i = pos[0]
    args = list(t.args)
    args[i] = _replace(args[i], pos[1:], new)
    return App(t.op, tuple(args))


def _subterm(t: Term, pos) -> Term:
    for i in pos:
        t = t.args[i]
    return t


def rewrite(
    t: Term,
    rules: RuleSet,
    strategy: str = "innermost",
    limit: int = 10_000,
    trace: list | None = None,
) -> Term:
    """Rewrite ``t`` to an irreducible term.

    ``innermost`` is leftmost-innermost, ``outermost`` is rightmost-outermost.
    Raises :class:`RewriteLimit` after ``limit`` steps.
    """
    counter = _Counter(limit)
    if strategy == "innermost":
        return _innermost(t, rules, (), counter, trace)
    if strategy != "outermost":
        raise ValueError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    while True:
        found = _outermost_redex(t, rules, ())
        if found is None:
            return t
        pos, (rule, out) = found
        counter.tick()
        if trace is not None:
            trace.append(Step(rule.name, pos, _subterm(t, pos), out))
        t = _replace(t, pos, out)
