"""Isotropy groups, computed by brute force over normal forms and by closed forms.

An isotropy element is a sort-indexed family ``(s_C)`` where ``s_C`` is a
normal form in ``M⟨x_C⟩`` mentioning the indeterminate.  It is *definable
inner* when

* it is invertible for the substitution product ``[t]·[s] = [t[s/x]]``,
* it commutes generically with every operation ``f : A1 x ... x An -> A``:
  ``f(x1..xn)↓ ⊢ s_A[f(x̄)/x] = f(s_A1[x1/x], ..., s_An[xn/x])``,
* it reflects definedness: ``f(s_A1[x1/x], ...)↓ ⊢ f(x̄)↓``.

The several-indeterminate sequents are checked by instantiating ``x1..xn``
with every tuple of probe elements (constants and the atoms built from ``x``)
of every one-indeterminate algebra available, and deciding each resulting
equation with the engines.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .groups import GroupTable, from_function, trivial_group
from .models import PartialStructure
from .normal_forms import Engine, GroupEngine, Word, engines_for
from .phl import OpSymbol
from .theories import (
    CrossedModule,
    FiniteCategory,
    FiniteGroup,
    FiniteMonoid,
    FiniteStrictMonCat,
    InvariantError,
    Presheaf,
    SymmetricStrictMonCat,
    crossed_module_smc,
    encode_cmonoid,
    encode_model,
    ob_arr,
    pair_id,
)

DEFAULT_BOUNDS = (2, 5)


class ClosureEscape(RuntimeError):
    """The candidate set found within the bounds is not closed under products or inverses."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class IsotropyElement:
    components: tuple[tuple[str, object], ...]

    @classmethod
    def of(cls, mapping: Mapping[str, object], sorts: Iterable[str]) -> "IsotropyElement":
        return cls(tuple((s, mapping[s]) for s in sorts))

    def __getitem__(self, sort):
        for s, v in self.components:
            if s == sort:
                return v
        raise KeyError(sort)

    def as_dict(self) -> dict:
        return dict(self.components)

    @property
    def key(self) -> tuple:
        return tuple(v for _, v in self.components)


@dataclass
class Verdict:
    ok: bool
    condition: str | None = None
    witness: dict | None = None

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "pass"
        return f"fail({self.condition}): {self.witness}"


@dataclass
class ProbeAlgebra:
    """An algebra in which generic commutation is tested, with the map of constants into it."""

    engine: Engine
    hom: Mapping[str, Mapping[str, str]] | None = None
    label: str = ""


class IsotropySetting:
    """Engines for each sort of a finite model, plus any extra probe algebras."""

    def __init__(self, kind: str, model: PartialStructure, engines: Mapping[str, Engine], extra=()):
        self.kind = kind
        self.model = model
        self.theory = model.theory
        self.sorts = self.theory.sorts
        self.engines = dict(engines)
        self.algebras = [ProbeAlgebra(e, None, f"{e.name}<x:{s}>") for s, e in self.engines.items()]
        self.algebras.extend(extra)
        self._probes: dict = {}

    # -- elements --

    def element(self, **values) -> IsotropyElement:
        return IsotropyElement.of(values, self.sorts)

    def identity(self) -> IsotropyElement:
        return IsotropyElement.of({s: self.engines[s].indeterminate() for s in self.sorts}, self.sorts)

    def compose(self, t: IsotropyElement, s: IsotropyElement) -> IsotropyElement | None:
        """``t·s``, computed sortwise as ``t_C[s_C/x_C]``."""
        out = {}
        for c in self.sorts:
            v = self.engines[c].substitute(t[c], s[c])
            if v is None:
                return None
            out[c] = v
        return IsotropyElement.of(out, self.sorts)

    def format(self, e: IsotropyElement) -> str:
        if len(self.sorts) == 1:
            return self.engines[self.sorts[0]].format(e[self.sorts[0]])
        return "(" + ", ".join(f"{s}: {self.engines[s].format(e[s])}" for s in self.sorts) + ")"

    # -- conditions --

    def probes(self, alg: ProbeAlgebra, sort: str) -> list:
        key = (id(alg), sort)
        p = self._probes.get(key)
        if p is None:
            raw = alg.engine.probes(sort)
            # atoms first: they separate candidates fastest
            p = [v for v in raw if alg.engine.contains_x(v)] + [v for v in raw if not alg.engine.contains_x(v)]
            self._probes[key] = p
        return p

    def _subst(self, cand, sort, value, alg: ProbeAlgebra):
        return self.engines[sort].substitute(cand[sort], value, target=alg.engine, hom=alg.hom)

    def op_failure(self, cand: Mapping[str, object], op: OpSymbol, explain: bool = True) -> Verdict | None:
        """The first probe instance violating commutation or reflection for ``op``, or None.

        With ``explain=False`` the verdict carries no witness, which is much cheaper in bulk filtering.
        """
        for alg in self.algebras:
            T = alg.engine
            pools = [self.probes(alg, s) for s in op.arg_sorts]
            for args in itertools.product(*pools):
                fx = T.apply(op.name, args)
                vals = []
                for s, a in zip(op.arg_sorts, args):
                    v = self._subst(cand, s, a, alg)
                    if v is None:
                        break
                    vals.append(v)
                rhs = T.apply(op.name, tuple(vals)) if len(vals) == len(args) else None
                if fx is not None:
                    lhs = self._subst(cand, op.result_sort, fx, alg)
                    if lhs is None or rhs is None or lhs != rhs:
                        w = self._witness(alg, op, args, lhs, rhs) if explain else None
                        return Verdict(False, "commutes", w)
                elif rhs is not None:
                    w = self._witness(alg, op, args, None, rhs) if explain else None
                    return Verdict(False, "reflects", w)
        return None

    def _witness(self, alg, op, args, lhs, rhs) -> dict:
        T = alg.engine
        show = lambda v: None if v is None else T.format(v)  # noqa: E731
        return {
            "op": op.name,
            "algebra": alg.label,
            "arguments": [T.format(a) for a in args],
            "lhs": show(lhs),
            "rhs": show(rhs),
        }

    def inverse_component(self, sort: str, value, pool: Iterable) -> object | None:
        eng = self.engines[sort]
        x = eng.indeterminate()
        for w in pool:
            if eng.substitute(value, w) == x and eng.substitute(w, value) == x:
                return w
        return None

    def ops_by_locality(self) -> tuple[dict[str, list[OpSymbol]], list[OpSymbol]]:
        local: dict[str, list[OpSymbol]] = {s: [] for s in self.sorts}
        cross = []
        for op in self.theory.ops:
            sorts = set(op.arg_sorts) | {op.result_sort}
            if len(sorts) == 1:
                local[op.result_sort].append(op)
            else:
                cross.append(op)
        return local, cross


def check_definable_inner(
    setting: IsotropySetting, cand: IsotropyElement, bounds: tuple[int, int] = DEFAULT_BOUNDS
) -> Verdict:
    """Check the three conditions; invertibility searches inverses within ``bounds``."""
    for s in setting.sorts:
        eng = setting.engines[s]
        v = cand[s]
        if eng.sort_of(v) != s or not eng.contains_x(v):
            return Verdict(False, "well-formed", {"sort": s, "component": eng.format(v)})
    for s in setting.sorts:
        eng = setting.engines[s]
        pool = eng.enumerate(s, bounds)
        if setting.inverse_component(s, cand[s], pool) is None:
            return Verdict(False, "invertible", {"sort": s, "component": eng.format(cand[s]), "searched": len(pool)})
    values = cand.as_dict()
    for op in setting.theory.ops:
        bad = setting.op_failure(values, op)
        if bad is not None:
            return bad
    return Verdict(True)


@dataclass
class IsotropyResult:
    group: GroupTable
    elements: list[IsotropyElement]
    setting: IsotropySetting = field(repr=False)
    candidates: dict[str, int] = field(default_factory=dict)
    definable: int = 0

    def describe(self) -> list[str]:
        return [f"{label}: {self.setting.format(e)}" for label, e in zip(self.group.labels, self.elements)]


def _filter_families(setting: IsotropySetting, bounds) -> list[IsotropyElement]:
    local, cross = setting.ops_by_locality()
    pools: dict[str, list] = {}
    for s in setting.sorts:
        keep = []
        for v in setting.engines[s].enumerate(s, bounds):
            part = {s: v}
            if all(setting.op_failure(part, op, False) is None for op in local[s]):
                keep.append(v)
        pools[s] = keep
    order = list(setting.sorts)
    placed: dict[str, int] = {s: i for i, s in enumerate(order)}
    # check each cross-sort op as soon as the last of its sorts is assigned
    due: dict[int, list[OpSymbol]] = {}
    for op in cross:
        level = max(placed[s] for s in set(op.arg_sorts) | {op.result_sort})
        due.setdefault(level, []).append(op)
    out: list[IsotropyElement] = []
    cur: dict[str, object] = {}

    def go(i):
        if i == len(order):
            out.append(IsotropyElement.of(cur, setting.sorts))
            return
        s = order[i]
        for v in pools[s]:
            cur[s] = v
            if all(setting.op_failure(cur, op, False) is None for op in due.get(i, ())):
                go(i + 1)
        cur.pop(s, None)

    go(0)
    return out


def brute_force_isotropy(setting: IsotropySetting, bounds: tuple[int, int] = DEFAULT_BOUNDS) -> IsotropyResult:
    """Enumerate candidate families within ``bounds`` and keep the definable inner ones.

    Raises :class:`ClosureEscape` if the result is not closed under products
    and inverses within the bounds.
    """
    if bounds[0] < 1 or bounds[1] < 1:
        raise ValueError("bounds must be positive")
    families = _filter_families(setting, bounds)
    by_key = {f.key: f for f in families}
    values = {s: list(dict.fromkeys(f[s] for f in families)) for s in setting.sorts}
    elements = []
    inverses = {}
    for f in families:
        inv = {}
        for s in setting.sorts:
            w = setting.inverse_component(s, f[s], values[s])
            if w is None:
                break
            inv[s] = w
        else:
            g = IsotropyElement.of(inv, setting.sorts)
            if g.key not in by_key:
                raise ClosureEscape(f"inverse of {setting.format(f)} is outside the candidate set", setting.format(g))
            elements.append(f)
            inverses[f.key] = g
    ident = setting.identity()
    if ident.key not in {e.key for e in elements}:
        raise ClosureEscape("the identity family is not among the definable inner candidates")
    elements.sort(key=lambda e: e.key != ident.key)
    labels = [f"s{i}" for i in range(len(elements))]
    label_of = {e.key: l for e, l in zip(elements, labels)}
    table = {}
    for a, la in zip(elements, labels):
        for b, lb in zip(elements, labels):
            c = setting.compose(a, b)
            if c is None or c.key not in label_of:
                shown = None if c is None else setting.format(c)
                raise ClosureEscape(f"product of {la} and {lb} escapes the bounds", shown)
            table[la, lb] = label_of[c.key]
    decorations = {l: setting.format(e) for e, l in zip(elements, labels)}
    group = GroupTable(tuple(labels), table, labels[0], decorations)
    counts = {s: len(setting.engines[s].enumerate(s, bounds)) for s in setting.sorts}
    return IsotropyResult(group, elements, setting, counts, len(families))


# -- settings for the built-in kinds --------------------------------------------


SETTING_KINDS = ("monoid", "cmonoid", "group", "strmoncat", "presheaf", "crossed", "mset")


def _s3_probe_algebra(G: FiniteGroup) -> ProbeAlgebra:
    """``G x S3`` with ``g ↦ (g, 1)``: a non-abelian target for groups whose own ``G⟨x⟩`` is abelian."""
    from .catalog import product_group, symmetric_group

    S3 = symmetric_group(3)
    P = product_group(G, S3)
    hom = {"G": {g: pair_id(g, S3.unit) for g in G.elements}}
    return ProbeAlgebra(GroupEngine(encode_model(P)), hom, f"group<{G.name or 'G'}xS3>")


def setting_for(kind: str, x) -> IsotropySetting:
    """Build the engines for a typed structure of the given kind."""
    if kind == "monoid":
        M = x.as_monoid() if isinstance(x, FiniteGroup) else x
        model = encode_model(M)
        return IsotropySetting(kind, model, engines_for("monoid", model))
    if kind == "cmonoid":
        model = encode_cmonoid(x)
        return IsotropySetting(kind, model, engines_for("cmonoid", model))
    if kind == "group":
        if not isinstance(x, FiniteGroup):
            x = FiniteGroup.from_monoid(x)
        model = encode_model(x)
        return IsotropySetting(kind, model, engines_for("group", model), [_s3_probe_algebra(x)])
    if kind == "strmoncat":
        model = encode_model(x)
        return IsotropySetting(kind, model, engines_for("strmoncat", model))
    if kind == "crossed":
        return setting_for("strmoncat", crossed_module_smc(x))
    if kind in ("presheaf", "mset"):
        model = encode_model(x)
        return IsotropySetting(kind, model, engines_for("presheaf", model, x.J))
    raise ValueError(f"no brute-force setting for {kind!r}; expected one of {', '.join(SETTING_KINDS)}")


# -- closed forms ---------------------------------------------------------------


def inv_elements(M: FiniteMonoid) -> GroupTable:
    """The group of invertible elements of ``M``."""
    units = [a for a in M.elements if M.is_invertible(a)]
    return from_function(units, M.mul, M.unit)


def group_table(G: FiniteMonoid) -> GroupTable:
    return from_function(G.elements, G.mul, G.unit)


def picard(C: FiniteStrictMonCat) -> GroupTable:
    """Invertible objects of C under the tensor."""
    return inv_elements(ob_arr(C, "Ob"))


def center_auts(J: FiniteCategory) -> GroupTable:
    """Natural automorphisms of the identity functor of ``J`` under componentwise composition."""
    objs = J.objects
    autos = {i: [f for f in J.hom(i, i) if J.is_iso(f)] for i in objs}
    families: list[tuple[str, ...]] = []
    cur: dict[str, str] = {}

    def natural_so_far():
        for f in J.arrows:
            i, j = J.dom[f], J.cod[f]
            if i in cur and j in cur and J.comp[cur[j], f] != J.comp[f, cur[i]]:
                return False
        return True

    def go(k):
        if k == len(objs):
            families.append(tuple(cur[i] for i in objs))
            return
        for f in autos[objs[k]]:
            cur[objs[k]] = f
            if natural_so_far():
                go(k + 1)
        cur.pop(objs[k], None)

    go(0)
    ident = tuple(J.ident[i] for i in objs)
    families.sort(key=lambda fam: fam != ident)
    labels = [",".join(fam) for fam in families]
    lab = dict(zip(families, labels))

    def mul(a, b):
        fa, fb = families[labels.index(a)], families[labels.index(b)]
        return lab[tuple(J.comp[p, q] for p, q in zip(fa, fb))]

    return from_function(labels, mul, labels[0])


def is_rigid(J: FiniteCategory) -> bool:
    """No object has a non-identity automorphism."""
    return all(f == J.ident[J.dom[f]] for f in J.arrows if J.dom[f] == J.cod[f] and J.is_iso(f))


def center_inv_monoid(M: FiniteMonoid) -> GroupTable:
    """Invertible elements of the centre of ``M``."""
    units = [a for a in M.center() if M.is_invertible(a)]
    return from_function(units, M.mul, M.unit)


def closed_form_isotropy(kind: str, x) -> GroupTable:
    if kind == "monoid":
        return inv_elements(x)
    if kind == "group":
        return group_table(x)
    if kind == "cmonoid":
        if not x.is_commutative():
            raise InvariantError("monoid is not commutative")
        return trivial_group()
    if kind == "strmoncat":
        return picard(x)
    if kind == "ssmc":
        if not isinstance(x, SymmetricStrictMonCat):
            raise TypeError("expected a symmetric strict monoidal category")
        return trivial_group()
    if kind == "presheaf":
        J = x.J if isinstance(x, Presheaf) else x
        G = center_auts(J)
        if is_rigid(J) and len(G) != 1:
            raise AssertionError("rigid index category with a non-trivial centre")
        return trivial_group() if is_rigid(J) else G
    if kind == "mset":
        J = x.J if isinstance(x, Presheaf) else x
        if len(J.objects) != 1:
            raise InvariantError("an M-set is a presheaf over a one-object category")
        return center_inv_monoid(_endomorphism_monoid(J))
    if kind == "crossed":
        if not isinstance(x, CrossedModule):
            raise TypeError("expected a crossed module")
        return group_table(x.G)
    raise ValueError(f"no closed form for {kind!r}")


def _endomorphism_monoid(J: FiniteCategory) -> FiniteMonoid:
    (obj,) = J.objects
    return FiniteMonoid(J.arrows, J.ident[obj], J.comp)


# -- the Picard comparison maps -------------------------------------------------


def theta(setting: IsotropySetting, a: str) -> IsotropyElement:
    """``(a ⊗ x_O ⊗ b, id(a) ⊗ x_A ⊗ id(b))`` for an invertible object ``a`` with inverse ``b``."""
    if setting.kind not in ("strmoncat", "crossed"):
        raise ValueError("theta is defined for strict monoidal categories")
    eo = setting.engines["O"]
    tens = eo.tens["O"]
    unit = eo.units["O"]
    inverse = [b for b in setting.model.carrier("O") if tens[a, b] == unit and tens[b, a] == unit]
    if not inverse:
        raise InvariantError("object is not invertible", a)
    b = inverse[0]
    ids = eo.id_t
    return setting.element(O=Word("O", (a, "x", b)), A=Word("A", (ids[a], "x", ids[b])))


def sigma(setting: IsotropySetting, e: IsotropyElement) -> str:
    """Read ``a`` off an object component of the form ``a ⊗ x_O ⊗ b``."""
    w = e["O"]
    if len(w.letters) != 3:
        raise InvariantError("object component is not of the form a ⊗ x ⊗ b", setting.format(e))
    return w.letters[0]


def has_picard_shape(setting: IsotropySetting, e: IsotropyElement) -> bool:
    """``s_O = a ⊗ x_O ⊗ b`` and ``s_A = id(a) ⊗ x_A ⊗ id(b)`` letter for letter."""
    o, a = e["O"], e["A"]
    if len(o.letters) != 3 or len(a.letters) != 3 or o.letters[1] != "x" or a.letters[1] != "x":
        return False
    ids = setting.engines["O"].id_t
    return a.letters[0] == ids[o.letters[0]] and a.letters[2] == ids[o.letters[2]]
