"""Strict monoidal categories with an adjoined object ``x_O`` or arrow ``x_A``.

A normal form is an alternating word ``c1 ⊗ g1 ⊗ c2 ⊗ ... ⊗ g(n) ⊗ c(n+1)``
where the ``c`` are objects or arrows of C (units included, so every generator
letter is flanked) and the ``g`` are generator codes:

* adjoining an object: objects use ``x``, arrows use ``ix`` (that is ``id(x)``);
* adjoining an arrow: objects use ``D``/``C`` (``dom(x)``/``cod(x)``), arrows
  use ``x``, ``iD`` (``id(dom(x))``) and ``iC`` (``id(cod(x))``).

Domain, codomain and identity act letterwise, composition is letterwise on
words of the same shape and undefined otherwise, and tensor merges the two
constant letters at the seam.
"""

from __future__ import annotations

import itertools
from typing import NamedTuple

from ..phl import App, Term, infer_sort
from ..rewriting import is_diagram_constant
from .base import INDETERMINATE, Engine, EngineError, NotNormal, flatten, make_rule, right_comb


class Word(NamedTuple):
    sort: str
    letters: tuple

    def gens(self) -> tuple:
        return self.letters[1::2]

    def consts(self) -> tuple:
        return self.letters[0::2]


# generator codes per adjoined sort
_OBJ_GENS = {"O": ("x",), "A": ("D", "C")}
_ARR_GENS = {"O": ("ix",), "A": ("x", "iD", "iC")}
_DOM = {"O": {"ix": "x"}, "A": {"x": "D", "iD": "D", "iC": "C"}}
_COD = {"O": {"ix": "x"}, "A": {"x": "C", "iD": "D", "iC": "C"}}
_ID = {"O": {"x": "ix"}, "A": {"D": "iD", "C": "iC"}}
_COMP = {
    "O": {("ix", "ix"): "ix"},
    # (g, f) -> g ∘ f; x ∘ x is never defined since dom(x) and cod(x) are distinct fresh objects
    "A": {("x", "iD"): "x", ("iC", "x"): "x", ("iD", "iD"): "iD", ("iC", "iC"): "iC"},
}
_SHOW = {"x": "x", "ix": "id(x)", "D": "dom(x)", "C": "cod(x)", "iD": "id(dom(x))", "iC": "id(cod(x))"}


class SmcEngine(Engine):
    """``C⟨x_O⟩`` (``sort="O"``) or ``C⟨x_A⟩`` (``sort="A"``) for a finite strict monoidal category."""

    def __init__(self, model, sort):
        super().__init__(model, sort)
        if set(self.theory.sorts) != {"O", "A"}:
            raise EngineError("strict monoidal engine needs the sorts O and A")
        self.name = "smc_xo" if sort == "O" else "smc_xa"
        t = model.tables
        self.dom_t = {a[0]: r for a, r in t["dom"].items()}
        self.cod_t = {a[0]: r for a, r in t["cod"].items()}
        self.id_t = {a[0]: r for a, r in t["id"].items()}
        self.comp_t = t["comp"]
        self.tens = {"O": t["tens_O"], "A": t["tens_A"]}
        self.units = {"O": t["I_O"][()], "A": t["I_A"][()]}
        self.gens = {"O": _OBJ_GENS[sort], "A": _ARR_GENS[sort]}
        self.dom_g, self.cod_g, self.id_g, self.comp_g = _DOM[sort], _COD[sort], _ID[sort], _COMP[sort]
        self.index = {s: {a: i for i, a in enumerate(model.carrier(s))} for s in ("O", "A")}

    # -- value level --

    def const(self, sort, elem):
        return Word(sort, (elem,))

    def atom(self, code: str) -> Word:
        sort = "O" if code in self.gens["O"] else "A"
        return Word(sort, (self.units[sort], code, self.units[sort]))

    def indeterminate(self):
        return self.atom(INDETERMINATE)

    def sort_of(self, value):
        return value.sort

    def dom(self, w: Word) -> Word:
        return Word("O", tuple(self.dom_t[a] if i % 2 == 0 else self.dom_g[a] for i, a in enumerate(w.letters)))

    def cod(self, w: Word) -> Word:
        return Word("O", tuple(self.cod_t[a] if i % 2 == 0 else self.cod_g[a] for i, a in enumerate(w.letters)))

    def ident(self, w: Word) -> Word:
        return Word("A", tuple(self.id_t[a] if i % 2 == 0 else self.id_g[a] for i, a in enumerate(w.letters)))

    def comp(self, g: Word, f: Word) -> Word | None:
        if len(g.letters) != len(f.letters):
            return None
        out = []
        for i, (a, b) in enumerate(zip(g.letters, f.letters)):
            c = self.comp_t.get((a, b)) if i % 2 == 0 else self.comp_g.get((a, b))
            if c is None:
                return None
            out.append(c)
        return Word("A", tuple(out))

    def tensor(self, u: Word, v: Word) -> Word:
        seam = self.tens[u.sort][u.letters[-1], v.letters[0]]
        return Word(u.sort, u.letters[:-1] + (seam,) + v.letters[1:])

    def apply(self, op, args):
        if op == "dom":
            return self.dom(args[0])
        if op == "cod":
            return self.cod(args[0])
        if op == "id":
            return self.ident(args[0])
        if op == "comp":
            return self.comp(*args)
        if op == "tens_O" or op == "tens_A":
            return self.tensor(*args)
        if op == "I_O":
            return Word("O", (self.units["O"],))
        if op == "I_A":
            return Word("A", (self.units["A"],))
        raise EngineError(f"unknown operation {op!r}")

    def word(self, sort: str, tokens) -> Word:
        """Normal form of a ⊗-word; tokens are element ids of ``sort`` or generator codes."""
        out = Word(sort, (self.units[sort],))
        for tok in tokens:
            if tok in self.gens[sort]:
                out = self.tensor(out, self.atom(tok))
            elif tok in self.index[sort]:
                out = self.tensor(out, self.const(sort, tok))
            else:
                raise EngineError(f"{tok!r} is neither an element of {sort} nor a generator")
        return out

    def parse_word(self, text: str, sort: str = None) -> Word:
        tokens = [t for t in text.replace("⊗", " ").split()]
        names = {v: k for k, v in _SHOW.items()}
        tokens = [names.get(t, t) for t in tokens]
        if sort is None:
            sort = "A" if any(t in self.index["A"] or t in self.gens["A"] for t in tokens) else "O"
        return self.word(sort, tokens)

    def substitute(self, value, repl, target=None, hom=None):
        """Letterwise ``value[repl/x]``; agrees with evaluating ``to_term(value)`` (checked in the tests)."""
        T = self if target is None else target
        if not isinstance(T, SmcEngine):
            return super().substitute(value, repl, target, hom)
        s = value.sort
        gen_vals = {}
        out = None
        for i, a in enumerate(value.letters):
            if i % 2 == 0:
                piece = T.const(s, hom[s][a] if hom is not None else a)
            else:
                piece = gen_vals.get(a)
                if piece is None:
                    piece = gen_vals[a] = _apply_gen(T, a, repl)
            out = piece if out is None else T.tensor(out, piece)
        return out

    # -- terms --

    def gen_term(self, code: str) -> Term:
        x = self.x_term()
        return {
            "x": x,
            "ix": self.app("id", x),
            "D": self.app("dom", x),
            "C": self.app("cod", x),
            "iD": self.app("id", self.app("dom", x)),
            "iC": self.app("id", self.app("cod", x)),
        }[code]

    def to_term(self, value):
        s = value.sort
        letters = []
        for i, a in enumerate(value.letters):
            if i % 2:
                letters.append(self.gen_term(a))
            elif a != self.units[s]:
                letters.append(self.const_term(s, a))
        return right_comb(self, f"tens_{s}", letters, self.const_term(s, self.units[s]))

    def _gen_code(self, t: Term, sort: str) -> str | None:
        if not hasattr(self, "_gen_terms"):
            self._gen_terms = {self.gen_term(c): c for s in ("O", "A") for c in self.gens[s]}
        return self._gen_terms.get(t)

    def read_off(self, term):
        sort = infer_sort(term)
        letters = flatten(term, f"tens_{sort}")
        unit = self.units[sort]
        out = [unit]
        prev_const = False
        for t in letters:
            code = self._gen_code(t, sort)
            if code is not None:
                out += [code, unit]
                prev_const = False
            elif is_diagram_constant(t):
                a = self.const_index[t.op.name][1]
                if prev_const or (a == unit and len(letters) > 1):
                    raise NotNormal(f"not a normal form: {term}")
                out[-1] = a
                prev_const = True
            elif _mentions(t, "comp"):
                return None
            else:
                raise NotNormal(f"not a normal form: {term}")
        return Word(sort, tuple(out))

    def rules(self):
        V = {"X": "O", "Y": "O", "Z": "O", "F": "A", "G": "A", "H": "A", "@a": "O", "@b": "O", "@f": "A", "@g": "A"}
        cl = lambda t: self.const_index[t.op.name][1]  # noqa: E731
        ct = self.const_term

        def merged(s, va, vb):
            return lambda b: ct(s, self.tens[s][cl(b[va]), cl(b[vb])])

        def merged_nested(s, va, vb, rest):
            return lambda b: self.app(f"tens_{s}", ct(s, self.tens[s][cl(b[va]), cl(b[vb])]), b[rest])

        def drop(s, va, keep):
            return lambda b: b[keep] if cl(b[va]) == self.units[s] else None

        rules = [
            make_rule(self, "unit_O", "I_O", lambda b: ct("O", self.units["O"]), V),
            make_rule(self, "unit_A", "I_A", lambda b: ct("A", self.units["A"]), V),
            make_rule(self, "dom_const", "dom(@f)", lambda b: ct("O", self.dom_t[cl(b["@f"])]), V),
            make_rule(self, "cod_const", "cod(@f)", lambda b: ct("O", self.cod_t[cl(b["@f"])]), V),
            make_rule(self, "id_const", "id(@a)", lambda b: ct("A", self.id_t[cl(b["@a"])]), V),
            make_rule(self, "dom_tensor", "dom(tens_A(F, G))", "tens_O(dom(F), dom(G))", V),
            make_rule(self, "cod_tensor", "cod(tens_A(F, G))", "tens_O(cod(F), cod(G))", V),
            make_rule(self, "id_tensor", "id(tens_O(X, Y))", "tens_A(id(X), id(Y))", V),
            make_rule(self, "dom_id", "dom(id(X))", "X", V),
            make_rule(self, "cod_id", "cod(id(X))", "X", V),
        ]
        for s, (p, q, r), (ca, cb) in (("O", "XYZ", ("@a", "@b")), ("A", "FGH", ("@f", "@g"))):
            op = f"tens_{s}"
            rules += [
                make_rule(self, f"assoc_{s}", f"{op}({op}({p}, {q}), {r})", f"{op}({p}, {op}({q}, {r}))", V),
                make_rule(self, f"left_unit_{s}", f"{op}({ca}, {p})", drop(s, ca, p), V),
                make_rule(self, f"right_unit_{s}", f"{op}({p}, {ca})", drop(s, ca, p), V),
                make_rule(self, f"merge_{s}", f"{op}({ca}, {cb})", merged(s, ca, cb), V),
                make_rule(self, f"merge_nested_{s}", f"{op}({ca}, {op}({cb}, {r}))", merged_nested(s, ca, cb, r), V),
            ]
        rules.append(make_rule(self, "compose", "comp(F, G)", self._compose_rule, V))
        return rules

    def _compose_rule(self, b):
        """Compose two normal arrow words letterwise; does not fire when undefined."""
        F, G = b["F"], b["G"]
        if not (self.ruleset.is_normal(F) and self.ruleset.is_normal(G)):
            return None
        u, v = self.read_off(F), self.read_off(G)
        if u is None or v is None:
            return None
        w = self.comp(u, v)
        return None if w is None else self.to_term(w)

    # -- enumeration --

    def format(self, value):
        return " ⊗ ".join(_SHOW[a] if i % 2 else a for i, a in enumerate(value.letters))

    def x_count(self, value):
        return len(value.letters) // 2

    def length(self, value):
        return len(value.letters)

    def enumerate(self, sort, bounds):
        k, l = bounds
        consts = self.model.carrier(sort)
        out = []
        for n in range(1, k + 1):
            if 2 * n + 1 > l:
                break
            pools = [consts if i % 2 == 0 else self.gens[sort] for i in range(2 * n + 1)]
            out.extend(Word(sort, letters) for letters in itertools.product(*pools))
        return out

    def probes(self, sort):
        return self.constants(sort) + [self.atom(c) for c in self.gens[sort]]


def _apply_gen(T: SmcEngine, code: str, v: Word) -> Word:
    if code == "x":
        return v
    if code == "ix":
        return T.ident(v)
    if code == "D":
        return T.dom(v)
    if code == "C":
        return T.cod(v)
    if code == "iD":
        return T.ident(T.dom(v))
    return T.ident(T.cod(v))


def _mentions(t: Term, op: str) -> bool:
    return isinstance(t, App) and (t.op.name == op or any(_mentions(a, op) for a in t.args))


def smc_engines(model) -> dict[str, SmcEngine]:
    return {"O": SmcEngine(model, "O"), "A": SmcEngine(model, "A")}

