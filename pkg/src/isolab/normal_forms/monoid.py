"""Normal forms for monoids, commutative monoids and groups with one adjoined indeterminate.

* ``M⟨x⟩`` for a monoid: expanded alternating words ``m0 x m1 x ... x mn``.
* commutative monoids: pairs ``(m, k)`` meaning ``m·x^k``.
* ``G⟨x⟩`` for a group is the free product ``G * Z``: alternating words
  ``m0 x^k1 m1 ... x^kr mr`` with nonzero exponents and non-unit interior letters.
"""

from __future__ import annotations

import itertools

from ..phl import App, Term
from ..rewriting import is_diagram_constant
from .base import INDETERMINATE, Engine, EngineError, NotNormal, flatten, make_rule, right_comb


def _word_tokens(text: str) -> list[str]:
    return text.replace("·", " ").split()


class _SingleSorted(Engine):
    """Shared set-up for the one-sorted theories with ``e`` and ``mul``."""

    def __init__(self, model, sort=None):
        sort = sort or model.theory.sorts[0]
        super().__init__(model, sort)
        if len(self.theory.sorts) != 1:
            raise EngineError(f"{self.name} engine needs a one-sorted theory")
        self.elements = model.carrier(sort)
        self.index = {a: i for i, a in enumerate(self.elements)}
        self.unit = model.tables["e"][()]
        self.table = model.tables["mul"]

    def m(self, a, b):
        return self.table[a, b]

    def sort_of(self, value) -> str:
        return self.sort

    def probes(self, sort):
        return self.constants(sort) + [self.indeterminate()]

    def _const_letter(self, t: Term) -> str:
        return self.const_index[t.op.name][1]

    def _base_rules(self) -> list:
        u = self.const_names[self.sort, self.unit]
        S = self.sort
        V = {"X": S, "Y": S, "Z": S, "@a": S, "@b": S}
        unit = self.unit

        def merge(b):
            return self.const_term(S, self.m(self._const_letter(b["@a"]), self._const_letter(b["@b"])))

        def merge_nested(b):
            return self.app("mul", merge(b), b["Z"])

        def drop_left(b):
            return b["X"] if self._const_letter(b["@a"]) == unit else None

        def drop_right(b):
            return b["X"] if self._const_letter(b["@a"]) == unit else None

        return [
            make_rule(self, "unit", "e", u, V),
            make_rule(self, "assoc", "mul(mul(X, Y), Z)", "mul(X, mul(Y, Z))", V),
            make_rule(self, "left_unit", "mul(@a, X)", drop_left, V),
            make_rule(self, "right_unit", "mul(X, @a)", drop_right, V),
            make_rule(self, "merge", "mul(@a, @b)", merge, V),
            make_rule(self, "merge_nested", "mul(@a, mul(@b, Z))", merge_nested, V),
        ]


class MonoidEngine(_SingleSorted):
    """``M⟨x⟩`` as expanded words: a value is the tuple ``(m0, ..., mn)`` with ``n`` x's."""

    name = "monoid"

    def const(self, sort, elem):
        return (elem,)

    def indeterminate(self):
        return (self.unit, self.unit)

    def apply(self, op, args):
        if op == "e":
            return (self.unit,)
        if op == "mul":
            return self.mul(*args)
        raise EngineError(f"unknown operation {op!r}")

    # -- the operations on normal forms --

    def nf(self, letters) -> tuple:
        """Normal form of a free word; letters are element ids or ``x``."""
        out = [self.unit]
        for a in letters:
            if a == INDETERMINATE:
                out.append(self.unit)
            else:
                if a not in self.index:
                    raise EngineError(f"{a!r} is not an element")
                out[-1] = self.m(out[-1], a)
        return tuple(out)

    def mul(self, u: tuple, v: tuple) -> tuple:
        return u[:-1] + (self.m(u[-1], v[0]),) + v[1:]

    def subst(self, u: tuple, v: tuple) -> tuple:
        """``u[v/x]``."""
        out = (u[0],)
        for m in u[1:]:
            out = self.mul(self.mul(out, v), (m,))
        return out

    def parse_word(self, text: str) -> tuple:
        return self.nf(_word_tokens(text))

    def to_term(self, value):
        letters = []
        for i, m in enumerate(value):
            if i:
                letters.append(self.x_term())
            if m != self.unit:
                letters.append(self.const_term(self.sort, m))
        return right_comb(self, "mul", letters, self.const_term(self.sort, self.unit))

    def read_off(self, term):
        word = [self.unit]
        prev_const = False
        letters = flatten(term, "mul")
        for t in letters:
            if isinstance(t, App) and t.op.name == INDETERMINATE:
                word.append(self.unit)
                prev_const = False
            elif is_diagram_constant(t):
                a = self._const_letter(t)
                if prev_const or (a == self.unit and len(letters) > 1):
                    raise NotNormal(f"not a normal form: {term}")
                word[-1] = a
                prev_const = True
            else:
                raise NotNormal(f"not a normal form: {term}")
        return tuple(word)

    def rules(self):
        return self._base_rules()

    def format(self, value):
        return " x ".join(value)

    def x_count(self, value):
        return len(value) - 1

    def length(self, value):
        return 2 * len(value) - 1

    def enumerate(self, sort, bounds):
        k, l = bounds
        out = []
        for n in range(1, k + 1):
            if 2 * n + 1 > l:
                break
            out.extend(itertools.product(self.elements, repeat=n + 1))
        return out


class CMonoidEngine(_SingleSorted):
    """Commutative monoid with an indeterminate: a value ``(m, k)`` is ``m·x^k``."""

    name = "cmonoid"

    def __init__(self, model, sort=None):
        super().__init__(model, sort)
        for a in self.elements:
            for b in self.elements:
                if self.m(a, b) != self.m(b, a):
                    raise EngineError(f"monoid is not commutative at ({a}, {b})")

    def const(self, sort, elem):
        return (elem, 0)

    def indeterminate(self):
        return (self.unit, 1)

    def apply(self, op, args):
        if op == "e":
            return (self.unit, 0)
        if op == "mul":
            return self.mul(*args)
        raise EngineError(f"unknown operation {op!r}")

    def nf(self, letters):
        m, k = self.unit, 0
        for a in letters:
            if a == INDETERMINATE:
                k += 1
            else:
                m = self.m(m, a)
        return (m, k)

    def mul(self, u, v):
        return (self.m(u[0], v[0]), u[1] + v[1])

    def subst(self, u, v):
        m, k = u
        out = (m, 0)
        for _ in range(k):
            out = self.mul(out, v)
        return out

    def parse_word(self, text):
        return self.nf(_word_tokens(text))

    def to_term(self, value):
        m, k = value
        letters = [] if m == self.unit else [self.const_term(self.sort, m)]
        letters += [self.x_term()] * k
        return right_comb(self, "mul", letters, self.const_term(self.sort, self.unit))

    def read_off(self, term):
        letters = flatten(term, "mul")
        m, k = self.unit, 0
        for i, t in enumerate(letters):
            if isinstance(t, App) and t.op.name == INDETERMINATE:
                k += 1
            elif is_diagram_constant(t) and i == 0 and (len(letters) == 1 or self._const_letter(t) != self.unit):
                m = self._const_letter(t)
            else:
                raise NotNormal(f"not a normal form: {term}")
        return (m, k)

    def rules(self):
        S = self.sort
        V = {"Z": S, "@a": S}
        return self._base_rules() + [
            make_rule(self, "swap", "mul(x, @a)", "mul(@a, x)", V),
            make_rule(self, "swap_nested", "mul(x, mul(@a, Z))", "mul(@a, mul(x, Z))", V),
        ]

    def format(self, value):
        m, k = value
        if k == 0:
            return m
        return f"{m} x" if k == 1 else f"{m} x^{k}"

    def x_count(self, value):
        return value[1]

    def length(self, value):
        return 1 + value[1]

    def enumerate(self, sort, bounds):
        k, l = bounds
        return [(m, n) for n in range(1, k + 1) if n + 1 <= l for m in self.elements]


class GroupEngine(_SingleSorted):
    """``G⟨x⟩ = G * Z``; a value is ``(m0, k1, m1, ..., kr, mr)`` with integer exponents."""

    name = "group"

    def __init__(self, model, sort=None):
        super().__init__(model, sort)
        self.inv = model.tables["inv"]

    def i(self, a):
        return self.inv[(a,)]

    def const(self, sort, elem):
        return (elem,)

    def indeterminate(self):
        return (self.unit, 1, self.unit)

    def apply(self, op, args):
        if op == "e":
            return (self.unit,)
        if op == "mul":
            return self.mul(*args)
        if op == "inv":
            return self.inverse(args[0])
        raise EngineError(f"unknown operation {op!r}")

    def mul(self, u, v):
        out = list(u)
        rest = list(v[1:])
        out[-1] = self.m(out[-1], v[0])
        # cancel across the seam while the junction letter is the unit
        while rest and len(out) > 1 and out[-1] == self.unit:
            k = out[-2] + rest[0]
            if k:
                out.pop()
                out[-1] = k
                rest = rest[1:]
                break
            out.pop()
            out.pop()
            out[-1] = self.m(out[-1], rest[1])
            rest = rest[2:]
        out.extend(rest)
        return tuple(out)

    def inverse(self, u):
        out = []
        for j, a in enumerate(reversed(u)):
            out.append(self.i(a) if j % 2 == 0 else -a)
        return tuple(out)

    def power(self, u, k):
        base = u if k >= 0 else self.inverse(u)
        out = (self.unit,)
        for _ in range(abs(k)):
            out = self.mul(out, base)
        return out

    def nf(self, letters):
        """Letters are element ids, ``x`` or ``x^k`` (also ``x⁻¹``)."""
        out = (self.unit,)
        for a in letters:
            k = _power_of(a)
            if k is None:
                if a not in self.index:
                    raise EngineError(f"{a!r} is not an element")
                out = self.mul(out, (a,))
            else:
                out = self.mul(out, (self.unit, k, self.unit) if k else (self.unit,))
        return out

    def subst(self, u, v):
        out = (u[0],)
        for j in range(1, len(u), 2):
            out = self.mul(self.mul(out, self.power(v, u[j])), (u[j + 1],))
        return out

    def parse_word(self, text):
        return self.nf(_word_tokens(text))

    def to_term(self, value):
        letters = []
        xt = self.x_term()
        xi = self.app("inv", xt)
        for j, a in enumerate(value):
            if j % 2:
                letters += [xt if a > 0 else xi] * abs(a)
            elif a != self.unit:
                letters.append(self.const_term(self.sort, a))
        return right_comb(self, "mul", letters, self.const_term(self.sort, self.unit))

    def read_off(self, term):
        letters = flatten(term, "mul")
        out = [self.unit]
        prev = None
        for t in letters:
            if isinstance(t, App) and t.op.name == INDETERMINATE:
                step = 1
            elif isinstance(t, App) and t.op.name == "inv" and t.args[0].op.name == INDETERMINATE:
                step = -1
            elif is_diagram_constant(t):
                a = self._const_letter(t)
                if prev == "c" or (a == self.unit and len(letters) > 1):
                    raise NotNormal(f"not a normal form: {term}")
                out[-1] = a
                prev = "c"
                continue
            else:
                raise NotNormal(f"not a normal form: {term}")
            if prev == "p":
                if (out[-2] > 0) != (step > 0):
                    raise NotNormal(f"not a normal form: {term}")
                out[-2] += step
            else:
                out += [step, self.unit]
            prev = "p"
        return tuple(out)

    def rules(self):
        S = self.sort
        u = self.const_names[S, self.unit]
        V = {"X": S, "Y": S, "Z": S, "@a": S}

        def inv_const(b):
            return self.const_term(S, self.i(self._const_letter(b["@a"])))

        return self._base_rules() + [
            make_rule(self, "inv_const", "inv(@a)", inv_const, V),
            make_rule(self, "inv_inv", "inv(inv(X))", "X", V),
            make_rule(self, "inv_mul", "inv(mul(X, Y))", "mul(inv(Y), inv(X))", V),
            make_rule(self, "left_inv", "mul(inv(X), X)", u, V),
            make_rule(self, "right_inv", "mul(X, inv(X))", u, V),
            make_rule(self, "left_inv_nested", "mul(inv(X), mul(X, Z))", "Z", V),
            make_rule(self, "right_inv_nested", "mul(X, mul(inv(X), Z))", "Z", V),
        ]

    def format(self, value):
        parts = []
        for j, a in enumerate(value):
            if j % 2 == 0:
                parts.append(a)
            else:
                parts.append("x" if a == 1 else f"x^{a}")
        return " ".join(parts)

    def x_count(self, value):
        return sum(abs(value[j]) for j in range(1, len(value), 2))

    def length(self, value):
        return (len(value) + 1) // 2 + self.x_count(value)

    def enumerate(self, sort, bounds):
        kmax, lmax = bounds
        out = []
        non_unit = [a for a in self.elements if a != self.unit]
        for r in range(1, kmax + 1):
            for exps in itertools.product([k for k in range(-kmax, kmax + 1) if k], repeat=r):
                xc = sum(abs(k) for k in exps)
                if xc > kmax or (r + 1) + xc > lmax:
                    continue
                for ends in itertools.product(self.elements, repeat=2):
                    for mids in itertools.product(non_unit, repeat=r - 1):
                        ms = (ends[0],) + mids + (ends[1],)
                        word = [ms[0]]
                        for k, m in zip(exps, ms[1:]):
                            word += [k, m]
                        out.append(tuple(word))
        out.sort(key=lambda w: (self.x_count(w), self.length(w), self._key(w)))
        return out

    def _key(self, w):
        return tuple(self.index[a] if j % 2 == 0 else (abs(a), a < 0) for j, a in enumerate(w))

    def probes(self, sort):
        return self.constants(sort) + [self.indeterminate(), self.inverse(self.indeterminate())]


def _power_of(token: str) -> int | None:
    if token == INDETERMINATE:
        return 1
    if token in ("x⁻¹", "x^-1"):
        return -1
    if token.startswith("x^"):
        try:
            return int(token[2:])
        except ValueError:
            return None
    return None
