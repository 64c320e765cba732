from __future__ import annotations

import itertools

import pytest

from isolab import catalog
from isolab.models import check_model
from isolab.theories import (
    CrossedModule,
    FiniteMonoid,
    InvariantError,
    Presheaf,
    SymmetricStrictMonCat,
    build_theory,
    decode_model,
    delta_nabla,
    encode_model,
    monoid_isomorphism,
    ob_arr,
    presheaf_op,
)

# number of monoids of each order up to isomorphism (OEIS A058129)
MONOIDS_UP_TO_ISO = {1: 1, 2: 2, 3: 7}


def test_build_theory_counts():
    m = build_theory("monoid")
    assert (len(m.sorts), [op.name for op in m.ops], len(m.axioms)) == (1, ["e", "mul"], 5)
    s = build_theory("strmoncat")
    assert (len(s.sorts), len(s.ops), len(s.axioms)) == (2, 8, len(build_theory("category").axioms) + 9)


def test_presheaf_theory_over_bz2():
    th = build_theory("presheaf", catalog.cyclic_category(2))
    assert len(th.sorts) == 1 and len(th.ops) == 2 and all(op.arity == 1 for op in th.ops)
    # 2 totality + 1 identity + 4 composable pairs
    assert len(th.axioms) == 7


def test_small_monoid_catalog_matches_oeis():
    ms = catalog.small_monoids(3)
    for n, count in MONOIDS_UP_TO_ISO.items():
        assert sum(1 for M in ms if len(M) == n) == count
    for M, N in itertools.combinations(ms, 2):
        assert len(M) != len(N) or monoid_isomorphism(M, N) is None


def test_every_catalog_structure_is_a_model():
    for M in catalog.monoid_fixtures():
        assert check_model(encode_model(M)).ok
    for C in catalog.smc_fixtures():
        assert check_model(encode_model(C)).ok
    for key in catalog.index_categories():
        for P in catalog.presheaf_models(key):
            assert check_model(encode_model(P)).ok
            assert all(len(s) <= 4 for s in P.sets.values())


def test_encode_z2_and_round_trip():
    Z2 = catalog.cyclic_group(2).as_monoid()
    M = encode_model(Z2)
    assert M.carrier("M") == ("0", "1")
    assert decode_model("monoid", M) == Z2


def test_presheaf_encoding_is_a_transcription():
    J = catalog.cyclic_category(2)
    F = Presheaf(J, {"*": ("p", "q")}, {"0": {"p": "p", "q": "q"}, "1": {"p": "q", "q": "p"}})
    M = encode_model(F)
    assert M.tables[presheaf_op("1")] == {("p",): "q", ("q",): "p"}
    assert decode_model("presheaf", M, J) == F


def test_round_trips_on_all_fixtures():
    for C in catalog.smc_fixtures():
        assert decode_model("strmoncat", encode_model(C)) == C
    for key, J in catalog.index_categories().items():
        assert decode_model("category", encode_model(J)) == J
        for P in catalog.presheaf_models(key):
            assert decode_model("presheaf", encode_model(P), J) == P
    G = catalog.symmetric_group(3)
    assert decode_model("group", encode_model(G)) == G


@pytest.mark.parametrize("variant,arrows", [("discrete", 2), ("indiscrete", 4)])
def test_delta_nabla_sizes(variant, arrows):
    Z2 = catalog.cyclic_group(2).as_monoid()
    C = delta_nabla(Z2, variant)
    assert (len(C.objects), len(C.arrows)) == (2, arrows)
    assert ob_arr(C, "Ob") == Z2


def test_ob_after_delta_nabla_is_identity():
    for M in catalog.monoid_fixtures():
        for v in ("discrete", "indiscrete"):
            assert ob_arr(delta_nabla(M, v), "Ob") == M


def test_arr_of_nabla_z2_is_z2_squared():
    Z2 = catalog.cyclic_group(2)
    arr = ob_arr(delta_nabla(Z2.as_monoid(), "indiscrete"), "Arr")
    assert monoid_isomorphism(arr, catalog.product_monoid(Z2, Z2)) is not None
    assert monoid_isomorphism(arr, catalog.cyclic_group(4).as_monoid()) is None


def test_arr_of_delta_is_the_monoid():
    for M in catalog.monoid_fixtures():
        C = delta_nabla(M, "discrete")
        arr = ob_arr(C, "Arr")
        ident = C.category.ident
        assert all(arr.mul(ident[a], ident[b]) == ident[M.mul(a, b)] for a in M.elements for b in M.elements)


def test_non_associative_table_is_rejected():
    table = {(a, b): "1" if a == b == "1" else "0" for a in "01" for b in "01"}
    table["0", "0"] = "1"
    with pytest.raises(InvariantError):
        FiniteMonoid(("0", "1"), "0", table)


def test_crossed_modules_validate():
    X = catalog.crossed_module_z3_s3()
    bad = dict(X.action)
    g = next(g for g in X.G.elements if g != X.G.unit)
    for a in X.A.elements:
        bad[g, a] = a
    with pytest.raises(InvariantError):
        CrossedModule(X.A, X.G, X.boundary, bad)


def test_symmetry_validates():
    S = catalog.symmetric_fixtures()[0]
    wrong_type = dict(S.braid)
    wrong_type["1", "1"] = "1>1"
    with pytest.raises(InvariantError):
        SymmetricStrictMonCat(S.smc, wrong_type)
    C = S.smc
    unit_component = dict(S.braid)
    a = next(a for a in C.objects if a != C.unit_ob)
    assert unit_component[a, C.unit_ob] == C.category.ident[a]
    SymmetricStrictMonCat(C, unit_component)
