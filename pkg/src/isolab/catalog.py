"""Named finite structures used as fixtures by the tests, the acceptance suite and the CLI."""

from __future__ import annotations

import itertools
from functools import lru_cache

from .theories import (
    CrossedModule,
    FiniteCategory,
    FiniteGroup,
    FiniteMonoid,
    FiniteStrictMonCat,
    Presheaf,
    SymmetricStrictMonCat,
    arrow_id,
    category_from_composition,
    crossed_module_smc,
    delta_nabla,
    one_object_category,
    one_object_smc,
    pair_id,
    smc_product,
)

# -- monoids and groups -------------------------------------------------------


def cyclic_group(n: int) -> FiniteGroup:
    els = tuple(str(i) for i in range(n))
    table = {(str(a), str(b)): str((a + b) % n) for a in range(n) for b in range(n)}
    return FiniteGroup(els, "0", table, f"Z{n}")


def semilattice() -> FiniteMonoid:
    """``{e, a}`` with ``a·a = a``."""
    table = {("e", "e"): "e", ("e", "a"): "a", ("a", "e"): "a", ("a", "a"): "a"}
    return FiniteMonoid(("e", "a"), "e", table, "SL2")


def product_monoid(M: FiniteMonoid, N: FiniteMonoid, name: str | None = None) -> FiniteMonoid:
    els = tuple(pair_id(a, b) for a in M.elements for b in N.elements)
    split = {pair_id(a, b): (a, b) for a in M.elements for b in N.elements}
    table = {
        (p, q): pair_id(M.mul(a, c), N.mul(b, d)) for p, (a, b) in split.items() for q, (c, d) in split.items()
    }
    return FiniteMonoid(els, pair_id(M.unit, N.unit), table, name or f"{M.name}x{N.name}")


def product_group(G: FiniteGroup, H: FiniteGroup, name: str | None = None) -> FiniteGroup:
    return FiniteGroup.from_monoid(product_monoid(G, H), name or f"{G.name}x{H.name}")


def symmetric_group(n: int = 3) -> FiniteGroup:
    """Permutations of ``{1..n}`` in one-line notation; ``p·q`` is ``p`` after ``q``."""
    perms = list(itertools.permutations(range(1, n + 1)))
    name = lambda p: "".join(map(str, p))  # noqa: E731
    table = {}
    for p in perms:
        for q in perms:
            table[name(p), name(q)] = name(tuple(p[q[i] - 1] for i in range(n)))
    return FiniteGroup(tuple(name(p) for p in perms), name(tuple(range(1, n + 1))), table, f"S{n}")


def full_transformation_monoid(n: int = 2) -> FiniteMonoid:
    """All maps ``{0..n-1} -> {0..n-1}``, written as value strings; ``f·g`` is ``f`` after ``g``."""
    maps = list(itertools.product(range(n), repeat=n))
    name = lambda f: "".join(map(str, f))  # noqa: E731
    table = {(name(f), name(g)): name(tuple(f[g[i]] for i in range(n))) for f in maps for g in maps}
    return FiniteMonoid(tuple(name(f) for f in maps), name(tuple(range(n))), table, f"T{n}")


def adjoin_zero(M: FiniteMonoid, zero: str = "z") -> FiniteMonoid:
    els = M.elements + (zero,)
    table = dict(M.table)
    for a in els:
        table[a, zero] = zero
        table[zero, a] = zero
    return FiniteMonoid(els, M.unit, table, f"{M.name}+0")


def _monoid_tables(n: int):
    labels = ["e", "a", "b", "c", "d"][:n]
    rest = labels[1:]
    cells = [(x, y) for x in rest for y in rest]
    for values in itertools.product(labels, repeat=len(cells)):
        table = {("e", y): y for y in labels}
        table.update({(x, "e"): x for x in labels})
        table.update(dict(zip(cells, values)))
        if all(
            table[table[x, y], z] == table[x, table[y, z]] for x in labels for y in labels for z in labels
        ):
            yield labels, table


def _canonical(labels, table) -> tuple:
    """A canonical form of a unital table under permutations fixing the unit."""
    best = None
    rest = labels[1:]
    for perm in itertools.permutations(rest):
        ren = dict(zip(rest, perm))
        ren["e"] = "e"
        key = tuple(sorted((ren[x], ren[y], ren[z]) for (x, y), z in table.items()))
        if best is None or key < best:
            best = key
    return best


@lru_cache(maxsize=None)
def small_monoids(max_order: int = 3) -> tuple[FiniteMonoid, ...]:
    """All monoids of order ``<= max_order`` up to isomorphism (1, 2 and 7 of orders 1, 2, 3)."""
    out = []
    for n in range(1, max_order + 1):
        seen = set()
        k = 0
        for labels, table in _monoid_tables(n):
            key = _canonical(labels, table)
            if key in seen:
                continue
            seen.add(key)
            k += 1
            out.append(FiniteMonoid(tuple(labels), "e", table, f"M{n}.{k}"))
    return tuple(out)


@lru_cache(maxsize=None)
def extra_monoids() -> tuple[FiniteMonoid, ...]:
    """Hand-picked monoids of orders 4 and 5."""
    z4 = cyclic_group(4).as_monoid()
    z2 = cyclic_group(2)
    v4 = product_group(z2, z2, "Z2xZ2").as_monoid()
    t2 = full_transformation_monoid(2)
    z2sl = product_monoid(z2.as_monoid(), semilattice(), "Z2xSL2")
    z4z = adjoin_zero(z4)
    return (z4, v4, t2, z2sl, z4z)


def monoid_fixtures() -> tuple[FiniteMonoid, ...]:
    return small_monoids(3) + extra_monoids()


# -- categories ---------------------------------------------------------------


def chain_category(n: int = 3) -> FiniteCategory:
    """The poset ``0 -> 1 -> ... -> n-1``; the arrow ``i -> j`` is named ``i>j``."""
    objs = tuple(str(i) for i in range(n))
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    arrows = tuple(arrow_id(str(i), str(j)) for i, j in pairs)
    dom = {arrow_id(str(i), str(j)): str(i) for i, j in pairs}
    cod = {arrow_id(str(i), str(j)): str(j) for i, j in pairs}
    ident = {o: arrow_id(o, o) for o in objs}
    return category_from_composition(
        objs, arrows, dom, cod, ident, lambda g, f: arrow_id(dom[f], cod[g]), f"chain{n}"
    )


def parallel_pair() -> FiniteCategory:
    """Two objects and two parallel non-identity arrows ``f, g : 0 -> 1``."""
    objs = ("0", "1")
    arrows = ("id0", "id1", "f", "g")
    dom = {"id0": "0", "id1": "1", "f": "0", "g": "0"}
    cod = {"id0": "0", "id1": "1", "f": "1", "g": "1"}
    ident = {"0": "id0", "1": "id1"}

    def compose(g, f):
        if g.startswith("id"):
            return f
        return g

    return category_from_composition(objs, arrows, dom, cod, ident, compose, "parallel")


def cyclic_category(n: int) -> FiniteCategory:
    return one_object_category(cyclic_group(n).as_monoid())


def s3_category() -> FiniteCategory:
    return one_object_category(symmetric_group(3).as_monoid())


def index_categories() -> dict[str, FiniteCategory]:
    return {
        "BZ2": cyclic_category(2),
        "BZ3": cyclic_category(3),
        "BZ4": cyclic_category(4),
        "BS3": s3_category(),
        "chain3": chain_category(3),
        "parallel": parallel_pair(),
    }


# -- presheaves ---------------------------------------------------------------


def _group_action_presheaf(J: FiniteCategory, points, act, name) -> Presheaf:
    (obj,) = J.objects
    return Presheaf(J, {obj: tuple(points)}, {g: {p: act(g, p) for p in points} for g in J.arrows}, name)


def presheaf_models(key: str) -> list[Presheaf]:
    """Three distinct models over each fixture index category, carriers of size <= 4."""
    J = index_categories()[key]
    if key.startswith("BZ"):
        n = int(key[2:])
        regular = _group_action_presheaf(J, [str(i) for i in range(n)], lambda g, p: str((int(g) + int(p)) % n), "regular")
        point = _group_action_presheaf(J, ["p"], lambda g, p: p, "point")
        if n % 2 == 0:
            flip = _group_action_presheaf(
                J, ["p", "q", "r"], lambda g, p: {"p": "q", "q": "p"}.get(p, p) if int(g) % 2 else p, "flip+fixed"
            )
        else:
            flip = _group_action_presheaf(
                J, ["u", "v", "w", "z"],
                lambda g, p: p if p == "z" else "uvw"[("uvw".index(p) + int(g)) % 3],
                "rotate+fixed",
            )
        return [regular, point, flip]
    if key == "BS3":
        natural = _group_action_presheaf(J, ["1", "2", "3"], lambda g, p: g[int(p) - 1], "natural")
        point = _group_action_presheaf(J, ["p"], lambda g, p: p, "point")
        even = {"123", "231", "312"}
        sign = _group_action_presheaf(
            J, ["+", "-"], lambda g, p: p if g in even else {"+": "-", "-": "+"}[p], "sign"
        )
        return [natural, point, sign]
    if key == "chain3":
        objs = J.objects

        def chain_model(sets, fn, name):
            maps = {}
            for f in J.arrows:
                i, j = J.dom[f], J.cod[f]
                maps[f] = {a: fn(i, j, a) for a in sets[i]}
            return Presheaf(J, sets, maps, name)

        const = chain_model({o: ("p",) for o in objs}, lambda i, j, a: "p", "terminal")
        incl = chain_model(
            {"0": ("a",), "1": ("a", "b"), "2": ("a", "b", "c")}, lambda i, j, a: a, "inclusions"
        )
        collapse = chain_model(
            {"0": ("a", "b", "c", "d"), "1": ("a", "b"), "2": ("a",)},
            lambda i, j, a: "a" if j == "2" else ({"c": "a", "d": "b"}.get(a, a) if i == "0" and j == "1" else a),
            "collapse",
        )
        return [const, incl, collapse]
    if key == "parallel":
        def pp(s0, s1, f, g, name):
            return Presheaf(J, {"0": s0, "1": s1}, {"id0": {a: a for a in s0}, "id1": {a: a for a in s1}, "f": f, "g": g}, name)

        return [
            pp(("p",), ("p",), {"p": "p"}, {"p": "p"}, "terminal"),
            pp(("u", "v"), ("a", "b", "c"), {"u": "a", "v": "b"}, {"u": "b", "v": "c"}, "graph"),
            pp(("u",), ("a", "b"), {"u": "a"}, {"u": "b"}, "edge"),
        ]
    raise KeyError(key)


def mset_fixture() -> Presheaf:
    """An M-set over ``M = Z2 x SL2``: M acting on itself by left multiplication."""
    M = product_monoid(cyclic_group(2).as_monoid(), semilattice(), "Z2xSL2")
    J = one_object_category(M)
    return Presheaf(J, {"*": M.elements}, {m: {p: M.mul(m, p) for p in M.elements} for m in M.elements}, "regular")


# -- strict monoidal categories -----------------------------------------------


def max_poset_smc(n: int = 3) -> FiniteStrictMonCat:
    """The chain ``0 <= 1 <= ... <= n-1`` with tensor ``max`` and unit ``0``."""
    cat = chain_category(n)
    objs = cat.objects
    t_o = {(a, b): max(a, b, key=int) for a in objs for b in objs}
    t_a = {}
    for f in cat.arrows:
        for g in cat.arrows:
            t_a[f, g] = arrow_id(t_o[cat.dom[f], cat.dom[g]], t_o[cat.cod[f], cat.cod[g]])
    return FiniteStrictMonCat(cat, t_o, t_a, "0", cat.ident["0"], f"maxchain{n}")


def hand_built_smcs() -> list[FiniteStrictMonCat]:
    """Two strict monoidal categories that are neither discrete nor indiscrete."""
    z2 = cyclic_group(2).as_monoid()
    prod = smc_product(delta_nabla(z2, "discrete"), one_object_smc(z2))
    return [prod, max_poset_smc(3)]


@lru_cache(maxsize=None)
def smc_fixtures() -> tuple[FiniteStrictMonCat, ...]:
    out = []
    for M in monoid_fixtures():
        out.append(delta_nabla(M, "discrete"))
        out.append(delta_nabla(M, "indiscrete"))
    out.extend(hand_built_smcs())
    return tuple(out)


def crossed_module_z2_z4() -> CrossedModule:
    """``Z2 -> Z4`` sending the generator to ``2``, acting trivially."""
    A, G = cyclic_group(2), cyclic_group(4)
    return CrossedModule(A, G, {"0": "0", "1": "2"}, {(g, a): a for g in G.elements for a in A.elements}, "Z2->Z4")


def crossed_module_z3_s3() -> CrossedModule:
    """The normal subgroup ``A3 ≅ Z3`` of S3 with conjugation action."""
    G = symmetric_group(3)
    A = cyclic_group(3)
    emb = {"0": "123", "1": "231", "2": "312"}
    back = {v: k for k, v in emb.items()}
    action = {(g, a): back[G.mul(G.mul(g, emb[a]), G.inv[g])] for g in G.elements for a in A.elements}
    return CrossedModule(A, G, emb, action, "Z3->S3")


def crossed_module_fixtures() -> list[CrossedModule]:
    return [crossed_module_z2_z4(), crossed_module_z3_s3()]


def symmetric_fixtures() -> list[SymmetricStrictMonCat]:
    """Strict symmetric monoidal categories with identity symmetries."""
    out = []
    for C in (delta_nabla(cyclic_group(2).as_monoid(), "discrete"), max_poset_smc(3)):
        braid = {(a, b): C.category.ident[C.tensor_ob[a, b]] for a in C.objects for b in C.objects}
        out.append(SymmetricStrictMonCat(C, braid, f"sym({C.name})"))
    return out


def crossed_smc_fixtures() -> list[FiniteStrictMonCat]:
    return [crossed_module_smc(X) for X in crossed_module_fixtures()]

