"""Finite partial structures: term evaluation, satisfaction, homomorphisms."""

from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .phl import App, Equation, Horn, Sequent, Term, Theory, Var, free_vars, horn_vars


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class PartialStructure:
    """Carriers are tuples of opaque string ids; an op table maps argument tuples
    to results, and a missing row means the operation is undefined there."""

    theory: Theory
    carriers: Mapping[str, tuple[str, ...]]
    tables: Mapping[str, Mapping[tuple[str, ...], str]]

    def __post_init__(self):
        sig = self.theory.signature
        carriers = {s: tuple(self.carriers.get(s, ())) for s in sig.sorts}
        extra = set(self.carriers) - set(sig.sorts)
        if extra:
            raise ModelError(f"carriers for unknown sorts {sorted(extra)}")
        for s, elems in carriers.items():
            if len(set(elems)) != len(elems):
                raise ModelError(f"duplicate element in carrier of {s}")
        members = {s: frozenset(elems) for s, elems in carriers.items()}
        tables = {}
        for op in sig.ops:
            rows = dict(self.tables.get(op.name, {}))
            for args, res in rows.items():
                if len(args) != op.arity:
                    raise ModelError(f"{op.name}: row {args} has wrong arity")
                for a, s in zip(args, op.arg_sorts):
                    if a not in members[s]:
                        raise ModelError(f"{op.name}: argument {a!r} not in carrier of {s}")
                if res not in members[op.result_sort]:
                    raise ModelError(f"{op.name}: result {res!r} not in carrier of {op.result_sort}")
            tables[op.name] = rows
        unknown = set(self.tables) - {op.name for op in sig.ops}
        if unknown:
            raise ModelError(f"tables for unknown operations {sorted(unknown)}")
        object.__setattr__(self, "carriers", carriers)
        object.__setattr__(self, "tables", tables)
        object.__setattr__(self, "_members", members)

    def lookup(self, op: str, args: tuple) -> str | None:
        return self.tables[op].get(args)

    def carrier(self, sort: str) -> tuple[str, ...]:
        return self.carriers[sort]

    def __contains__(self, item):
        sort, elem = item
        return elem in self._members[sort]


def eval_term(M, t: Term, env: Mapping[str, object]):
    """Strict evaluation: returns None when any subterm is undefined.

    ``M`` is anything with a ``lookup(op_name, args)`` method, so the same code
    evaluates in finite tables and in normal-form algebras.
    """
    if isinstance(t, Var):
        return env[t.name]
    if not t.args:
        return M.lookup(t.op.name, ())
    vals = []
    for a in t.args:
        v = eval_term(M, a, env)
        if v is None:
            return None
        vals.append(v)
    return M.lookup(t.op.name, tuple(vals))


def satisfies(M, eq: Equation, env) -> bool:
    """Existence equality: both sides defined and equal."""
    a = eval_term(M, eq.lhs, env)
    if a is None:
        return False
    b = a if eq.is_definedness else eval_term(M, eq.rhs, env)
    return b is not None and a == b


def _order(context, wanted) -> list[Var]:
    return [v for v in context if v in wanted]


def _premise_envs(M, context, premise: Horn, variables: list[Var]) -> Iterator[dict]:
    """Environments over ``variables`` satisfying the premise.

    Variables are bound left to right and each premise conjunct is tested as
    soon as its variables are bound.
    """
    checks: list[list[Equation]] = [[] for _ in range(len(variables) + 1)]
    pos = {v: i for i, v in enumerate(variables)}
    for eq in premise:
        vs = free_vars(eq.lhs) | free_vars(eq.rhs)
        level = max((pos[v] + 1 for v in vs), default=0)
        checks[level].append(eq)

    env: dict = {}

    def go(i):
        if not all(satisfies(M, eq, env) for eq in checks[i]):
            return
        if i == len(variables):
            yield dict(env)
            return
        v = variables[i]
        for a in M.carrier(v.sort):
            env[v.name] = a
            yield from go(i + 1)
        env.pop(v.name, None)

    yield from go(0)


def counterexample(M, seq: Sequent) -> dict | None:
    """A witnessing environment where the premise holds but the conclusion fails."""
    if any(not M.carrier(v.sort) for v in seq.context):
        return None  # no environments at all
    pvars = horn_vars(seq.premise)
    for eq in seq.conclusion:
        relevant = pvars | free_vars(eq.lhs) | free_vars(eq.rhs)
        variables = _order(seq.context, relevant)
        for env in _premise_envs(M, seq.context, seq.premise, variables):
            if not satisfies(M, eq, env):
                # unconstrained variables take their first value
                for v in seq.context:
                    env.setdefault(v.name, M.carrier(v.sort)[0])
                return env
    return None


def holds(M, seq: Sequent) -> bool:
    return counterexample(M, seq) is None


@dataclass
class ModelReport:
    failures: list[tuple[Sequent, dict]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.ok

    def lines(self) -> list[str]:
        if self.ok:
            return ["pass"]
        out = []
        for ax, env in self.failures:
            name = ax.label or str(ax)
            witness = ", ".join(f"{k}={v}" for k, v in env.items())
            out.append(f"FAIL {name}: {ax}" + (f"  [{witness}]" if witness else ""))
        return out


def check_model(M: PartialStructure) -> ModelReport:
    report = ModelReport()
    for ax in M.theory.axioms:
        env = counterexample(M, ax)
        if env is not None:
            report.failures.append((ax, env))
    return report


class HomKind(enum.Enum):
    NOT_HOM = "not_hom"
    HOM = "hom"
    HOM_REFLECTING = "hom_reflecting"
    ISO = "iso"


@dataclass(frozen=True)
class Homomorphism:
    source: PartialStructure
    target: PartialStructure
    maps: Mapping[str, Mapping[str, str]]

    def __call__(self, sort: str, a: str) -> str:
        return self.maps[sort][a]

    def image(self, op, args):
        return tuple(self.maps[s][a] for s, a in zip(op.arg_sorts, args))


def _is_total_map(h: Homomorphism) -> bool:
    for s in h.source.theory.sorts:
        m = h.maps.get(s, {})
        if set(m) != set(h.source.carrier(s)):
            return False
        if any((s, b) not in h.target for b in m.values()):
            return False
    return True


def is_homomorphism(h: Homomorphism) -> bool:
    if not _is_total_map(h):
        return False
    M, N = h.source, h.target
    for op in M.theory.ops:
        for args, res in M.tables[op.name].items():
            img = N.lookup(op.name, h.image(op, args))
            if img is None or img != h.maps[op.result_sort][res]:
                return False
    return True


def reflects_definedness(h: Homomorphism) -> bool:
    M, N = h.source, h.target
    for op in M.theory.ops:
        for args in itertools.product(*(M.carrier(s) for s in op.arg_sorts)):
            if N.lookup(op.name, h.image(op, args)) is not None and M.lookup(op.name, args) is None:
                return False
    return True


def is_bijective(h: Homomorphism) -> bool:
    for s in h.source.theory.sorts:
        m = h.maps[s]
        if len(set(m.values())) != len(m) or set(m.values()) != set(h.target.carrier(s)):
            return False
    return True


def check_homomorphism(h: Homomorphism) -> HomKind:
    """Isomorphisms are exactly the bijective homomorphisms that reflect definedness."""
    if h.source.theory.signature != h.target.theory.signature:
        raise ModelError("source and target have different signatures")
    if not is_homomorphism(h):
        return HomKind.NOT_HOM
    if not reflects_definedness(h):
        return HomKind.HOM
    return HomKind.ISO if is_bijective(h) else HomKind.HOM_REFLECTING


def identity_hom(M: PartialStructure) -> Homomorphism:
    return Homomorphism(M, M, {s: {a: a for a in M.carrier(s)} for s in M.theory.sorts})


def compose(g: Homomorphism, f: Homomorphism) -> Homomorphism:
    """``g ∘ f``."""
    maps = {s: {a: g.maps[s][b] for a, b in f.maps[s].items()} for s in f.source.theory.sorts}
    return Homomorphism(f.source, g.target, maps)


# -- model documents ---------------------------------------------------------

SCHEMA = "isolab.model/1"


def structure_to_doc(M: PartialStructure, kind: str | None = None, extra: dict | None = None) -> dict:
    doc = {
        "schema": SCHEMA,
        "theory": kind or M.theory.name,
        "carriers": {s: list(M.carrier(s)) for s in M.theory.sorts},
        "ops": {
            op.name: [[list(args), res] for args, res in sorted(M.tables[op.name].items())]
            for op in M.theory.ops
        },
    }
    if extra:
        doc.update(extra)
    return doc


def structure_from_doc(doc: dict, theory: Theory) -> PartialStructure:
    if "carriers" not in doc or "ops" not in doc:
        raise ModelError("model document needs 'carriers' and 'ops'")
    tables = {}
    for name, rows in doc["ops"].items():
        table = {}
        for row in rows:
            args, res = row
            key = tuple(args)
            if key in table:
                raise ModelError(f"{name}: duplicate row for {key}")
            table[key] = res
        tables[name] = table
    return PartialStructure(theory, {s: tuple(v) for s, v in doc["carriers"].items()}, tables)


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1, sort_keys=True, ensure_ascii=False) + "\n"
