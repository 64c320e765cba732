from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from isolab import catalog
from isolab.models import (
    HomKind,
    Homomorphism,
    ModelError,
    PartialStructure,
    check_homomorphism,
    check_model,
    compose,
    eval_term,
    holds,
    identity_hom,
    is_homomorphism,
    structure_from_doc,
    structure_to_doc,
)
from isolab.phl import App, Var
from isolab.suite import RANDOM_THEORY, inverse_homomorphism, random_bijective_hom, random_structure
from isolab.theories import build_theory, delta_nabla, encode_model

MONOID = build_theory("monoid")
CAT = build_theory("category")


def z2_model():
    return encode_model(catalog.cyclic_group(2).as_monoid())


def test_eval_variable_and_total_lookup():
    M = z2_model()
    x = Var("x", "M")
    assert eval_term(M, x, {"x": "1"}) == "1"
    mul = MONOID.signature.op("mul")
    assert eval_term(M, App(mul, (x, x)), {"x": "1"}) == "0"


def test_eval_composition_outside_domain_is_undefined():
    C = encode_model(catalog.chain_category(3))
    f, g = Var("f", "A"), Var("g", "A")
    comp = CAT.signature.op("comp")
    assert eval_term(C, App(comp, (f, g)), {"f": "0>1", "g": "1>2"}) is None
    assert eval_term(C, App(comp, (g, f)), {"f": "0>1", "g": "1>2"}) == "0>2"
    # strictness: an undefined subterm makes the whole term undefined
    dom = CAT.signature.op("dom")
    assert eval_term(C, App(dom, (App(comp, (f, g)),)), {"f": "0>1", "g": "1>2"}) is None


def test_holds_examples():
    M = z2_model()
    refl = MONOID.axiom("assoc")
    assert holds(M, refl)
    tables = {k: dict(v) for k, v in M.tables.items()}
    del tables["mul"]["1", "1"]
    broken = PartialStructure(MONOID, M.carriers, tables)
    assert not holds(broken, MONOID.axiom("mul_total"))
    report = check_model(broken)
    assert not report.ok
    assert {ax.label for ax, _ in report.failures} >= {"mul_total"}


def test_delta_z2_passes_and_bad_unit_fails():
    C = delta_nabla(catalog.cyclic_group(2).as_monoid(), "discrete")
    M = encode_model(C)
    assert check_model(M).ok
    tables = {k: dict(v) for k, v in M.tables.items()}
    tables["I_A"] = {(): "1>1"}
    bad = PartialStructure(M.theory, M.carriers, tables)
    failed = {ax.label for ax, _ in check_model(bad).failures}
    assert "id_unit" in failed


def test_presheaf_with_partial_action_fails_totality():
    P = catalog.presheaf_models("BZ2")[0]
    M = encode_model(P)
    tables = {k: dict(v) for k, v in M.tables.items()}
    op = next(name for name in tables if tables[name])
    tables[op].pop(next(iter(tables[op])))
    bad = PartialStructure(M.theory, M.carriers, tables)
    failed = {ax.label for ax, _ in check_model(bad).failures}
    assert any(label.startswith("total") for label in failed)


def test_equation_with_both_sides_undefined_is_not_satisfied():
    th = RANDOM_THEORY
    M = PartialStructure(th, {"P": ("p0",), "Q": ("q0",)}, {})
    from isolab.phl import Equation, Horn, Sequent

    c = App(th.signature.op("c"), ())
    assert not holds(M, Sequent((), Horn(()), Horn((Equation(c, c),))))


def test_table_rows_outside_carrier_are_rejected():
    with pytest.raises(ModelError):
        PartialStructure(MONOID, {"M": ("0",)}, {"mul": {("0", "1"): "0"}})


def test_identity_is_iso():
    M = z2_model()
    assert check_homomorphism(identity_hom(M)) is HomKind.ISO


def _discrete(objs):
    arrows = [f"id{o}" for o in objs]
    tables = {
        "dom": {(f"id{o}",): o for o in objs},
        "cod": {(f"id{o}",): o for o in objs},
        "id": {(o,): f"id{o}" for o in objs},
        "comp": {(f"id{o}", f"id{o}"): f"id{o}" for o in objs},
    }
    return PartialStructure(CAT, {"O": tuple(objs), "A": tuple(arrows)}, tables)


def test_inclusion_of_discrete_into_indiscrete_is_not_iso():
    D = _discrete(["0", "1"])
    N = encode_model(delta_nabla(catalog.semilattice(), "indiscrete").category)
    h = Homomorphism(D, N, {"O": {"0": "e", "1": "a"}, "A": {"id0": "e>e", "id1": "a>a"}})
    kind = check_homomorphism(h)
    assert kind is HomKind.HOM_REFLECTING
    assert kind is not HomKind.ISO


def test_bijective_hom_not_reflecting_composability():
    # discrete category on {0,1} plus an arrow f: 0 -> 1 composed with nothing
    src = _discrete(["0", "1"])
    tables = {k: dict(v) for k, v in src.tables.items()}
    tables["dom"][("f",)] = "0"
    tables["cod"][("f",)] = "1"
    M = PartialStructure(CAT, {"O": ("0", "1"), "A": ("id0", "id1", "f")}, tables)
    tgt = {k: dict(v) for k, v in tables.items()}
    tgt["comp"][("f", "id0")] = "f"
    N = PartialStructure(CAT, M.carriers, tgt)
    h = identity_hom(M)
    h = Homomorphism(M, N, h.maps)
    assert is_homomorphism(h)
    assert check_homomorphism(h) is HomKind.HOM
    assert inverse_homomorphism(h) is None


def test_model_document_round_trip():
    M = z2_model()
    assert structure_from_doc(structure_to_doc(M), MONOID) == M


@given(st.randoms(use_true_random=False))
def test_check_model_agrees_with_holds(rnd):
    carrier = tuple(str(i) for i in range(rnd.randint(1, 2)))
    tables = {"e": {(): rnd.choice(carrier)} if rnd.random() < 0.8 else {}, "mul": {}}
    for a in carrier:
        for b in carrier:
            if rnd.random() < 0.85:
                tables["mul"][a, b] = rnd.choice(carrier)
    M = PartialStructure(MONOID, {"M": carrier}, tables)
    assert check_model(M).ok == all(holds(M, ax) for ax in MONOID.axioms)


@given(st.integers(0, 10**6))
def test_composition_of_homomorphisms(seed):
    rng = random.Random(seed)
    M = random_structure(rng)
    h = random_bijective_hom(rng, M)
    g = random_bijective_hom(rng, h.target)
    assert check_homomorphism(compose(g, h)) is not HomKind.NOT_HOM


@given(st.integers(0, 10**6))
def test_iso_iff_inverse_exists(seed):
    rng = random.Random(seed)
    h = random_bijective_hom(rng, random_structure(rng))
    assert (check_homomorphism(h) is HomKind.ISO) == (inverse_homomorphism(h) is not None)
