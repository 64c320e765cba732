from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from isolab import catalog
from isolab.models import counterexample
from isolab.normal_forms import (
    CMonoidEngine,
    Const,
    EngineError,
    Gen,
    GroupEngine,
    MonoidEngine,
    NotNormal,
    Word,
    engines_for,
)
from isolab.normal_forms.base import Engine
from isolab.phl import term_size
from isolab.suite import arr_preservation_failures, dual_strategy_failures, random_term, word_problem_engines
from isolab.theories import encode_cmonoid, encode_model

Z2 = catalog.cyclic_group(2)
Z3 = catalog.cyclic_group(3)
ENGINES = word_problem_engines()


def monoid_engine(M=None):
    return MonoidEngine(encode_model(M or Z3.as_monoid()))


# -- monoids --


def test_congruence_example():
    eng = monoid_engine()
    m1, m2 = "1", "2"
    m3 = Z3.mul(m1, m2)
    left = eng.parse_word(f"x {m1} x {m1} {m2} x")
    right = eng.parse_word(f"x 0 {m1} 0 x 0 {m3} x")
    assert left == right == ("0", m1, m3, "0")


def test_unit_word_and_unit_law():
    eng = monoid_engine()
    unit = eng.parse_word("0")
    assert unit == ("0",)
    u = eng.parse_word("1 x 2 x")
    assert eng.mul(u, unit) == u == eng.mul(unit, u)


def test_read_off_rejects_non_normal_terms():
    eng = monoid_engine()
    with pytest.raises(NotNormal):
        eng.read_off(eng.parse("mul(@1, @2)"))


words = st.lists(st.sampled_from(["0", "1", "2", "x"]), max_size=7)


@given(words, words)
def test_mul_and_subst_agree_with_normalizing_the_concatenation(u, v):
    eng = monoid_engine()
    assert eng.mul(eng.nf(u), eng.nf(v)) == eng.nf(u + v)
    spliced = [tok for a in u for tok in (v if a == "x" else [a])]
    assert eng.subst(eng.nf(u), eng.nf(v)) == eng.nf(spliced)
    assert eng.subst(eng.nf(u), eng.nf(v)) == eng.substitute(eng.nf(u), eng.nf(v))


def test_enumeration_order_is_by_x_count_then_length_then_elements():
    eng = monoid_engine(Z2.as_monoid())
    out = eng.enumerate("M", (2, 5))
    assert out[:4] == [("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")]
    assert len(out) == 4 + 8
    assert eng.enumerate("M", (2, 3)) == out[:4]


# -- commutative monoids and groups --


def test_cmonoid_normal_form():
    eng = CMonoidEngine(encode_cmonoid(Z2.as_monoid()))
    assert eng.parse_word("1 x 1 x") == ("0", 2)
    assert eng.format(("1", 3)) == "1 x^3"


def test_group_free_product_normal_form():
    eng = GroupEngine(encode_model(catalog.symmetric_group(3)))
    e = eng.unit
    assert eng.parse_word("x x⁻¹") == (e,)
    assert eng.parse_word("132 x x 132") == ("132", 2, "132")
    u = eng.parse_word("213 x 132 x^-1 231")
    assert eng.mul(u, eng.inverse(u)) == (e,)
    g = "231"
    conj = eng.parse_word(f"{g} x {catalog.symmetric_group(3).inv[g]}")
    assert eng.subst(conj, eng.parse_word("x^2")) == eng.mul(conj, conj)


def test_engine_refuses_theory_with_an_x_symbol():
    from isolab.dsl import parse_theory
    from isolab.models import PartialStructure

    th = parse_theory("theory t\nsort S;\nop x : -> S;\n")
    M = PartialStructure(th, {"S": ("a",)}, {"x": {(): "a"}})
    with pytest.raises(EngineError):
        Engine(M, "S")


# -- strict monoidal categories --


def smc_engines(C=None):
    C = C or catalog.hand_built_smcs()[0]
    return engines_for("strmoncat", encode_model(C))


def test_composite_of_the_arrow_indeterminate_with_itself_is_undefined():
    eng = smc_engines()["A"]
    x = eng.indeterminate()
    assert eng.comp(x, x) is None
    assert eng.dom(x) != eng.cod(x)
    assert eng.reduce(eng.parse("comp(x, x)")) is None
    assert eng.reduce(eng.parse("comp(x, id(dom(x)))")) == x


def test_object_indeterminate_words():
    eng = smc_engines()["O"]
    C = catalog.hand_built_smcs()[0]
    a = next(a for a in C.objects if a != C.unit_ob)
    w = eng.word("O", [a, "x", a])
    assert w == Word("O", (a, "x", a))
    assert eng.format(w) == f"{a} ⊗ x ⊗ {a}"
    assert eng.ident(w) == Word("A", (C.category.ident[a], "ix", C.category.ident[a]))


class Sample:
    """A finite sample of an engine's elements, viewed as a partial structure for axiom checking."""

    def __init__(self, engine, pools):
        self.engine, self.pools = engine, pools

    def lookup(self, op, args):
        return self.engine.lookup(op, args)

    def carrier(self, sort):
        return self.pools[sort]


def sample_pools(eng, rng):
    pools = {}
    for s in eng.theory.sorts:
        base = eng.probes(s)
        extra = []
        for _ in range(3):
            u, v = rng.choice(base), rng.choice(base)
            extra.append(eng.apply(f"tens_{s}", (u, v)))
        pools[s] = list(dict.fromkeys(base + extra))
    return pools


@pytest.mark.parametrize("sort", ["O", "A"])
@pytest.mark.parametrize("index", [0, 1])
def test_strict_monoidal_axioms_hold_on_normal_forms(sort, index):
    eng = smc_engines(catalog.hand_built_smcs()[index])[sort]
    sample = Sample(eng, sample_pools(eng, random.Random(index)))
    for ax in eng.theory.axioms:
        assert counterexample(sample, ax) is None, ax.label


@given(st.integers(0, 10**6), st.sampled_from(["O", "A"]), st.sampled_from([0, 1]))
def test_letterwise_substitution_matches_term_evaluation(seed, sort, index):
    engines = smc_engines(catalog.hand_built_smcs()[index])
    eng = engines[sort]
    rng = random.Random(seed)
    for target in eng.theory.sorts:
        words = eng.enumerate(target, (2, 5)) + eng.constants(target)
        u = rng.choice(words)
        v = rng.choice(eng.probes(sort) + eng.enumerate(sort, (1, 3)))
        generic = Engine.substitute(eng, u, v)
        assert eng.substitute(u, v) == generic


def test_arr_preservation_on_a_hand_built_category():
    assert arr_preservation_failures(catalog.hand_built_smcs()[0]) == []


# -- presheaves --


def test_presheaf_decide_equal():
    P = catalog.presheaf_models("parallel")[1]
    engines = engines_for("presheaf", encode_model(P), P.J)
    J = P.J
    src = next(i for i in J.objects if len(J.hom(i, i)) == 1 and any(J.dom[f] == i != J.cod[f] for f in J.arrows))
    eng = engines[f"X_{src}"]
    f, g = [a for a in J.arrows if J.dom[a] == src and J.cod[a] != src]
    assert not eng.decide_equal(Gen(f), Gen(g))
    assert eng.decide_equal(Gen(f), eng.act(f, eng.indeterminate()))
    some = next(iter(P.sets[J.cod[f]]))
    assert not eng.decide_equal(Gen(f), Const(f"X_{J.cod[f]}", some))


def test_presheaf_enumeration_is_the_hom_set():
    J = catalog.s3_category()
    P = catalog.presheaf_models("BS3")[0]
    (eng,) = engines_for("presheaf", encode_model(P), J).values()
    assert [g.arrow for g in eng.enumerate(eng.sort, (1, 1))] == list(J.arrows)


# -- both rewriting strategies agree with direct evaluation --


@pytest.mark.parametrize("label,eng", ENGINES, ids=[label for label, _ in ENGINES])
@given(rnd=st.randoms(use_true_random=False))
def test_dual_strategy_confluence(label, eng, rnd):
    term = random_term(eng, rnd.choice(eng.theory.sorts), 12, rnd)
    assert term_size(term) <= 12
    assert dual_strategy_failures(eng, term) is None


@pytest.mark.parametrize("label,eng", ENGINES, ids=[label for label, _ in ENGINES])
@given(rnd=st.randoms(use_true_random=False))
def test_rewriting_normal_forms_print_and_reparse(label, eng, rnd):
    term = random_term(eng, rnd.choice(eng.theory.sorts), 12, rnd)
    value = eng.normalize(term)
    if value is not None:
        assert eng.normalize(eng.term_of(value)) == value
        assert eng.ruleset.is_normal(eng.term_of(value))
