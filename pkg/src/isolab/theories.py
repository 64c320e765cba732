"""Built-in theories and the finite structures that model them.

Each structure type validates itself on construction by encoding into a
:class:`~isolab.models.PartialStructure` and running the model checker, so a
bad table is reported with the failing axiom and a witnessing environment.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Mapping

from .dsl import parse_theory
from .models import ModelError, PartialStructure, check_model
from .phl import App, Equation, Horn, OpSymbol, Sequent, Signature, Theory, Var, defined

KINDS = ("monoid", "cmonoid", "group", "category", "strmoncat", "presheaf")


class InvariantError(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message if witness is None else f"{message} (witness: {witness})")
        self.witness = witness


# -- theories ---------------------------------------------------------------


@lru_cache(maxsize=None)
def _shipped(kind: str) -> Theory:
    source = resources.files("isolab.data").joinpath(f"{kind}.theory").read_text(encoding="utf-8")
    return parse_theory(source)


def theory_source(kind: str) -> str:
    return resources.files("isolab.data").joinpath(f"{kind}.theory").read_text(encoding="utf-8")


def build_theory(kind: str, J: "FiniteCategory | None" = None) -> Theory:
    if kind == "presheaf":
        if J is None:
            raise ValueError("presheaf theory needs an index category J")
        return presheaf_theory(J)
    if kind not in KINDS:
        raise ValueError(f"unknown theory kind {kind!r}; expected one of {', '.join(KINDS)}")
    return _shipped(kind)


def presheaf_sort(obj: str) -> str:
    return f"X_{obj}"


def presheaf_op(arrow: str) -> str:
    return f"a_{arrow}"


def presheaf_theory(J: "FiniteCategory") -> Theory:
    """Sorts ``X_i`` per object, a unary op ``a_f : X_i -> X_j`` per arrow ``f : i -> j``.

    Axioms: totality per arrow, ``a_{id_i}(x) = x`` per object, and one
    composition axiom per composable pair.
    """
    sorts = tuple(presheaf_sort(i) for i in J.objects)
    ops = {f: OpSymbol(presheaf_op(f), (presheaf_sort(J.dom[f]),), presheaf_sort(J.cod[f])) for f in J.arrows}
    axioms = []
    for f in J.arrows:
        v = Var("x", presheaf_sort(J.dom[f]))
        axioms.append(Sequent((v,), Horn(), Horn((defined(App(ops[f], (v,))),)), f"total_{f}"))
    for i in J.objects:
        v = Var("x", presheaf_sort(i))
        axioms.append(Sequent((v,), Horn(), Horn((Equation(App(ops[J.ident[i]], (v,)), v),)), f"ident_{i}"))
    for (g, f), h in sorted(J.comp.items()):
        v = Var("x", presheaf_sort(J.dom[f]))
        lhs = App(ops[g], (App(ops[f], (v,)),))
        axioms.append(Sequent((v,), Horn(), Horn((Equation(lhs, App(ops[h], (v,))),)), f"comp_{g}_{f}"))
    name = f"presheaf_{J.name}" if J.name else "presheaf"
    return Theory(name, Signature(sorts, tuple(ops[f] for f in J.arrows)), tuple(axioms))


def _validate(M: PartialStructure, what: str):
    report = check_model(M)
    if not report.ok:
        ax, env = report.failures[0]
        raise InvariantError(f"{what}: axiom {ax.label or ax} fails", env)


# -- monoids and groups -------------------------------------------------------


@dataclass(frozen=True)
class FiniteMonoid:
    elements: tuple[str, ...]
    unit: str
    table: Mapping[tuple[str, str], str]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "table", dict(self.table))
        if self.unit not in self.elements:
            raise InvariantError("unit is not an element", self.unit)
        for a, b in itertools.product(self.elements, repeat=2):
            if (a, b) not in self.table:
                raise InvariantError("multiplication is not total", (a, b))
        self._finish()

    def _finish(self):
        _validate(encode_model(self, validate=False), "monoid")

    def __len__(self):
        return len(self.elements)

    def mul(self, a: str, b: str) -> str:
        return self.table[a, b]

    def product(self, letters) -> str:
        out = self.unit
        for a in letters:
            out = self.table[out, a]
        return out

    def inverse(self, a: str) -> str | None:
        for b in self.elements:
            if self.table[a, b] == self.unit and self.table[b, a] == self.unit:
                return b
        return None

    def is_invertible(self, a: str) -> bool:
        return self.inverse(a) is not None

    def is_commutative(self) -> bool:
        return all(self.table[a, b] == self.table[b, a] for a, b in itertools.product(self.elements, repeat=2))

    def center(self) -> tuple[str, ...]:
        return tuple(a for a in self.elements if all(self.table[a, b] == self.table[b, a] for b in self.elements))


@dataclass(frozen=True)
class FiniteGroup(FiniteMonoid):
    inv: Mapping[str, str] = field(default=None, compare=False)

    def _finish(self):
        inv = {}
        for a in self.elements:
            b = self.inverse(a)
            if b is None:
                raise InvariantError("element has no inverse", a)
            inv[a] = b
        object.__setattr__(self, "inv", inv)
        _validate(encode_model(self, validate=False), "group")

    @classmethod
    def from_monoid(cls, M: FiniteMonoid, name: str | None = None) -> "FiniteGroup":
        return cls(M.elements, M.unit, M.table, name if name is not None else M.name)

    def as_monoid(self) -> FiniteMonoid:
        return FiniteMonoid(self.elements, self.unit, self.table, self.name)


def is_monoid_hom(M: FiniteMonoid, N: FiniteMonoid, h: Mapping[str, str]) -> bool:
    if h[M.unit] != N.unit:
        return False
    return all(h[M.mul(a, b)] == N.mul(h[a], h[b]) for a, b in itertools.product(M.elements, repeat=2))


def monoid_isomorphism(M: FiniteMonoid, N: FiniteMonoid) -> dict[str, str] | None:
    """Backtracking search for a monoid isomorphism, or None."""
    if len(M) != len(N):
        return None
    h = {M.unit: N.unit}
    rest = [a for a in M.elements if a != M.unit]
    free = [b for b in N.elements if b != N.unit]

    def consistent():
        for a, b in itertools.product(h, repeat=2):
            c = M.mul(a, b)
            if c in h and h[c] != N.mul(h[a], h[b]):
                return False
        return True

    def go(i):
        if i == len(rest):
            return True
        a = rest[i]
        for b in free:
            if b in h.values():
                continue
            h[a] = b
            if consistent() and go(i + 1):
                return True
            del h[a]
        return False

    return dict(h) if go(0) else None


# -- categories ---------------------------------------------------------------


@dataclass(frozen=True)
class FiniteCategory:
    """``comp[(g, f)]`` is ``g ∘ f`` and must be present exactly when ``dom(g) == cod(f)``."""

    objects: tuple[str, ...]
    arrows: tuple[str, ...]
    dom: Mapping[str, str]
    cod: Mapping[str, str]
    ident: Mapping[str, str]
    comp: Mapping[tuple[str, str], str]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        for attr in ("objects", "arrows"):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))
        for attr in ("dom", "cod", "ident", "comp"):
            object.__setattr__(self, attr, dict(getattr(self, attr)))
        _validate(encode_model(self, validate=False), "category")

    def hom(self, i: str, j: str) -> list[str]:
        return [f for f in self.arrows if self.dom[f] == i and self.cod[f] == j]

    def compose(self, g: str, f: str) -> str | None:
        return self.comp.get((g, f))

    def is_iso(self, f: str) -> bool:
        return self.inverse(f) is not None

    def inverse(self, f: str) -> str | None:
        for g in self.hom(self.cod[f], self.dom[f]):
            if self.comp[g, f] == self.ident[self.dom[f]] and self.comp[f, g] == self.ident[self.cod[f]]:
                return g
        return None


def category_from_composition(objects, arrows, dom, cod, ident, compose, name="") -> FiniteCategory:
    """Tabulate ``compose(g, f)`` over every composable pair."""
    comp = {(g, f): compose(g, f) for g in arrows for f in arrows if dom[g] == cod[f]}
    return FiniteCategory(tuple(objects), tuple(arrows), dom, cod, ident, comp, name)


@dataclass(frozen=True)
class FiniteStrictMonCat:
    category: FiniteCategory
    tensor_ob: Mapping[tuple[str, str], str]
    tensor_arr: Mapping[tuple[str, str], str]
    unit_ob: str
    unit_arr: str
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "tensor_ob", dict(self.tensor_ob))
        object.__setattr__(self, "tensor_arr", dict(self.tensor_arr))
        _validate(encode_model(self, validate=False), "strict monoidal category")

    @property
    def objects(self):
        return self.category.objects

    @property
    def arrows(self):
        return self.category.arrows

    def tensor_objects(self, letters) -> str:
        out = self.unit_ob
        for a in letters:
            out = self.tensor_ob[out, a]
        return out

    def tensor_arrows(self, letters) -> str:
        out = self.unit_arr
        for f in letters:
            out = self.tensor_arr[out, f]
        return out


@dataclass(frozen=True)
class SymmetricStrictMonCat:
    """A strict monoidal category with a symmetry ``braid[(a, b)] : a ⊗ b -> b ⊗ a``."""

    smc: FiniteStrictMonCat
    braid: Mapping[tuple[str, str], str]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "braid", dict(self.braid))
        C = self.smc
        cat = C.category
        t, T = C.tensor_ob, C.tensor_arr
        for a, b in itertools.product(C.objects, repeat=2):
            s = self.braid.get((a, b))
            if s not in cat.dom or cat.dom[s] != t[a, b] or cat.cod[s] != t[b, a]:
                raise InvariantError("symmetry component has the wrong type", (a, b))
        for a, b in itertools.product(C.objects, repeat=2):
            if cat.comp[self.braid[b, a], self.braid[a, b]] != cat.ident[t[a, b]]:
                raise InvariantError("symmetry is not self-inverse", (a, b))
        for a in C.objects:
            if self.braid[a, C.unit_ob] != cat.ident[a]:
                raise InvariantError("symmetry with the unit is not the identity", a)
        for a, b, c in itertools.product(C.objects, repeat=3):
            lhs = self.braid[a, t[b, c]]
            rhs = cat.comp[T[cat.ident[b], self.braid[a, c]], T[self.braid[a, b], cat.ident[c]]]
            if lhs != rhs:
                raise InvariantError("hexagon fails", (a, b, c))
        for f, g in itertools.product(C.arrows, repeat=2):
            a, b = cat.dom[f], cat.dom[g]
            a2, b2 = cat.cod[f], cat.cod[g]
            if cat.comp[self.braid[a2, b2], T[f, g]] != cat.comp[T[g, f], self.braid[a, b]]:
                raise InvariantError("symmetry is not natural", (f, g))


@dataclass(frozen=True)
class CrossedModule:
    """``boundary : A -> G`` with a left action ``action[(g, a)] = g ▷ a`` of G on A."""

    A: FiniteGroup
    G: FiniteGroup
    boundary: Mapping[str, str]
    action: Mapping[tuple[str, str], str]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "boundary", dict(self.boundary))
        object.__setattr__(self, "action", dict(self.action))
        A, G, d, act = self.A, self.G, self.boundary, self.action
        if not is_monoid_hom(A, G, d):
            raise InvariantError("boundary is not a group homomorphism")
        for g, a in itertools.product(G.elements, A.elements):
            if (g, a) not in act:
                raise InvariantError("action is not total", (g, a))
        for a in A.elements:
            if act[G.unit, a] != a:
                raise InvariantError("unit does not act trivially", a)
        for g, h, a in itertools.product(G.elements, G.elements, A.elements):
            if act[G.mul(g, h), a] != act[g, act[h, a]]:
                raise InvariantError("action is not associative", (g, h, a))
        for g, a, b in itertools.product(G.elements, A.elements, A.elements):
            if act[g, A.mul(a, b)] != A.mul(act[g, a], act[g, b]):
                raise InvariantError("action is not by automorphisms", (g, a, b))
        for g, a in itertools.product(G.elements, A.elements):
            if d[act[g, a]] != G.mul(G.mul(g, d[a]), G.inv[g]):
                raise InvariantError("equivariance fails", (g, a))
        for a, b in itertools.product(A.elements, repeat=2):
            if act[d[a], b] != A.mul(A.mul(a, b), A.inv[a]):
                raise InvariantError("Peiffer identity fails", (a, b))


@dataclass(frozen=True)
class Presheaf:
    """A functor ``J -> Set``: a finite set per object and a function per arrow."""

    J: FiniteCategory
    sets: Mapping[str, tuple[str, ...]]
    maps: Mapping[str, Mapping[str, str]]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "sets", {i: tuple(self.sets.get(i, ())) for i in self.J.objects})
        object.__setattr__(self, "maps", {f: dict(self.maps.get(f, {})) for f in self.J.arrows})
        try:
            M = encode_model(self, validate=False)
        except ModelError as exc:
            raise InvariantError(str(exc)) from None
        _validate(M, "presheaf")


# -- encoding and decoding ----------------------------------------------------


def encode_model(x, validate: bool = True) -> PartialStructure:
    if isinstance(x, FiniteGroup):
        th = build_theory("group")
        M = PartialStructure(
            th, {"G": x.elements}, {"e": {(): x.unit}, "mul": x.table, "inv": {(a,): x.inv[a] for a in x.elements}}
        )
    elif isinstance(x, FiniteMonoid):
        M = PartialStructure(build_theory("monoid"), {"M": x.elements}, {"e": {(): x.unit}, "mul": x.table})
    elif isinstance(x, FiniteCategory):
        M = PartialStructure(build_theory("category"), *_category_tables(x))
    elif isinstance(x, FiniteStrictMonCat):
        carriers, tables = _category_tables(x.category)
        tables["tens_O"] = x.tensor_ob
        tables["tens_A"] = x.tensor_arr
        tables["I_O"] = {(): x.unit_ob}
        tables["I_A"] = {(): x.unit_arr}
        M = PartialStructure(build_theory("strmoncat"), carriers, tables)
    elif isinstance(x, Presheaf):
        J = x.J
        carriers = {presheaf_sort(i): x.sets[i] for i in J.objects}
        tables = {presheaf_op(f): {(a,): b for a, b in x.maps[f].items()} for f in J.arrows}
        M = PartialStructure(presheaf_theory(J), carriers, tables)
    else:
        raise TypeError(f"cannot encode {type(x).__name__}")
    if validate:
        _validate(M, type(x).__name__)
    return M


def encode_cmonoid(M: FiniteMonoid) -> PartialStructure:
    if not M.is_commutative():
        raise InvariantError("monoid is not commutative")
    return PartialStructure(build_theory("cmonoid"), {"M": M.elements}, {"e": {(): M.unit}, "mul": M.table})


def _category_tables(C: FiniteCategory):
    carriers = {"O": C.objects, "A": C.arrows}
    tables = {
        "dom": {(f,): C.dom[f] for f in C.arrows},
        "cod": {(f,): C.cod[f] for f in C.arrows},
        "id": {(i,): C.ident[i] for i in C.objects},
        "comp": C.comp,
    }
    return carriers, tables


def _unary(table) -> dict:
    return {args[0]: res for args, res in table.items()}


def decode_model(kind: str, M: PartialStructure, J: FiniteCategory | None = None):
    """Inverse of :func:`encode_model`; raises :class:`InvariantError` on bad tables."""
    t = M.tables
    if kind in ("monoid", "cmonoid"):
        return FiniteMonoid(M.carrier("M"), t["e"][()], t["mul"])
    if kind == "group":
        return FiniteGroup(M.carrier("G"), t["e"][()], t["mul"])
    if kind in ("category", "strmoncat"):
        cat = FiniteCategory(
            M.carrier("O"), M.carrier("A"), _unary(t["dom"]), _unary(t["cod"]), _unary(t["id"]), t["comp"]
        )
        if kind == "category":
            return cat
        for op in ("I_O", "I_A"):
            if () not in t[op]:
                raise InvariantError(f"{op} is undefined")
        return FiniteStrictMonCat(cat, t["tens_O"], t["tens_A"], t["I_O"][()], t["I_A"][()])
    if kind == "presheaf":
        if J is None:
            raise ValueError("decoding a presheaf needs J")
        sets = {i: M.carrier(presheaf_sort(i)) for i in J.objects}
        maps = {f: _unary(t[presheaf_op(f)]) for f in J.arrows}
        return Presheaf(J, sets, maps)
    raise ValueError(f"unknown kind {kind!r}")


# -- Δ, ∇, Ob, Arr ------------------------------------------------------------


def arrow_id(a: str, b: str) -> str:
    """Name of the unique arrow ``a -> b`` in an indiscrete category."""
    return f"{a}>{b}"


def delta_nabla(M: FiniteMonoid, variant: str) -> FiniteStrictMonCat:
    """The discrete (``Δ``) or indiscrete (``∇``) strict monoidal category on ``M``."""
    if variant not in ("discrete", "indiscrete"):
        raise ValueError("variant must be 'discrete' or 'indiscrete'")
    objs = M.elements
    if variant == "discrete":
        pairs = [(a, a) for a in objs]
    else:
        pairs = [(a, b) for a in objs for b in objs]
    arrows = tuple(arrow_id(a, b) for a, b in pairs)
    src = {arrow_id(a, b): a for a, b in pairs}
    tgt = {arrow_id(a, b): b for a, b in pairs}
    ident = {a: arrow_id(a, a) for a in objs}
    comp = {}
    for g in arrows:
        for f in arrows:
            if src[g] == tgt[f]:
                comp[g, f] = arrow_id(src[f], tgt[g])
    prefix = "Delta" if variant == "discrete" else "Nabla"
    cat = FiniteCategory(objs, arrows, src, tgt, ident, comp, f"{prefix}({M.name})")
    tensor_arr = {
        (f, g): arrow_id(M.mul(src[f], src[g]), M.mul(tgt[f], tgt[g])) for f in arrows for g in arrows
    }
    return FiniteStrictMonCat(cat, M.table, tensor_arr, M.unit, ident[M.unit], f"{prefix}({M.name})")


def ob_arr(C: FiniteStrictMonCat, which: str) -> FiniteMonoid:
    if which == "Ob":
        return FiniteMonoid(C.objects, C.unit_ob, C.tensor_ob, f"Ob({C.name})")
    if which == "Arr":
        return FiniteMonoid(C.arrows, C.unit_arr, C.tensor_arr, f"Arr({C.name})")
    raise ValueError("which must be 'Ob' or 'Arr'")


def one_object_category(M: FiniteMonoid, obj: str = "*") -> FiniteCategory:
    """``BM``: one object, arrows the elements of ``M``, composition ``g ∘ f = g·f``."""
    arrows = M.elements
    return FiniteCategory(
        (obj,),
        arrows,
        {f: obj for f in arrows},
        {f: obj for f in arrows},
        {obj: M.unit},
        {(g, f): M.mul(g, f) for g in arrows for f in arrows},
        f"B{M.name}",
    )


def one_object_smc(A: FiniteMonoid, obj: str = "*") -> FiniteStrictMonCat:
    """``BA`` for a commutative monoid ``A``, with tensor equal to composition."""
    if not A.is_commutative():
        raise InvariantError("one-object strict monoidal category needs a commutative monoid")
    cat = one_object_category(A, obj)
    return FiniteStrictMonCat(cat, {(obj, obj): obj}, A.table, obj, A.unit, cat.name)


def pair_id(a: str, b: str) -> str:
    return f"{a}.{b}"


def smc_product(C: FiniteStrictMonCat, D: FiniteStrictMonCat) -> FiniteStrictMonCat:
    c, d = C.category, D.category
    objs = tuple(pair_id(a, b) for a in c.objects for b in d.objects)
    arrows = tuple(pair_id(f, g) for f in c.arrows for g in d.arrows)
    split_o = {pair_id(a, b): (a, b) for a in c.objects for b in d.objects}
    split_a = {pair_id(f, g): (f, g) for f in c.arrows for g in d.arrows}
    dom = {p: pair_id(c.dom[f], d.dom[g]) for p, (f, g) in split_a.items()}
    cod = {p: pair_id(c.cod[f], d.cod[g]) for p, (f, g) in split_a.items()}
    ident = {p: pair_id(c.ident[a], d.ident[b]) for p, (a, b) in split_o.items()}
    comp = {}
    for p, (f, g) in split_a.items():
        for q, (f2, g2) in split_a.items():
            if dom[p] == cod[q]:
                comp[p, q] = pair_id(c.comp[f, f2], d.comp[g, g2])
    name = f"{C.name}x{D.name}"
    cat = FiniteCategory(objs, arrows, dom, cod, ident, comp, name)
    t_o = {
        (p, q): pair_id(C.tensor_ob[a, a2], D.tensor_ob[b, b2])
        for p, (a, b) in split_o.items()
        for q, (a2, b2) in split_o.items()
    }
    t_a = {
        (p, q): pair_id(C.tensor_arr[f, f2], D.tensor_arr[g, g2])
        for p, (f, g) in split_a.items()
        for q, (f2, g2) in split_a.items()
    }
    return FiniteStrictMonCat(
        cat, t_o, t_a, pair_id(C.unit_ob, D.unit_ob), pair_id(C.unit_arr, D.unit_arr), name
    )


def crossed_module_smc(X: CrossedModule) -> FiniteStrictMonCat:
    """The strict monoidal category of a crossed module.

    Objects are elements of G; an arrow ``(a, g)`` goes from ``g`` to ``∂(a)·g``.
    Composition multiplies in A, tensor is ``(a, g) ⊗ (b, h) = (a·(g ▷ b), g·h)``.
    """
    A, G, d, act = X.A, X.G, X.boundary, X.action
    objs = G.elements
    pairs = [(a, g) for a in A.elements for g in G.elements]
    arrows = tuple(pair_id(a, g) for a, g in pairs)
    split = dict(zip(arrows, pairs))
    dom = {p: g for p, (a, g) in split.items()}
    cod = {p: G.mul(d[a], g) for p, (a, g) in split.items()}
    ident = {g: pair_id(A.unit, g) for g in objs}
    comp = {}
    for p, (a2, g2) in split.items():
        for q, (a, g) in split.items():
            if dom[p] == cod[q]:
                comp[p, q] = pair_id(A.mul(a2, a), g)
    cat = FiniteCategory(objs, arrows, dom, cod, ident, comp, X.name)
    t_a = {
        (p, q): pair_id(A.mul(a, act[g, b]), G.mul(g, h)) for p, (a, g) in split.items() for q, (b, h) in split.items()
    }
    return FiniteStrictMonCat(cat, G.table, t_a, G.unit, ident[G.unit], X.name)
