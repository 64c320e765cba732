from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from isolab.dsl import DSLError, format_theory, parse_term, parse_theory
from isolab.phl import App, OpSymbol, Signature, SortError, Var, free_vars, infer_sort, substitute
from isolab.theories import build_theory, theory_source

SHIPPED = ["monoid", "cmonoid", "group", "category", "strmoncat"]


@pytest.mark.parametrize("kind", SHIPPED)
def test_shipped_files_round_trip(kind):
    th = parse_theory(theory_source(kind))
    assert parse_theory(format_theory(th)) == th
    assert th == build_theory(kind)


def test_monoid_file_counts():
    th = parse_theory(theory_source("monoid"))
    assert (len(th.sorts), len(th.ops), len(th.axioms)) == (1, 2, 5)


def test_strmoncat_file_counts():
    th = parse_theory(theory_source("strmoncat"))
    assert set(th.sorts) == {"O", "A"}
    assert {op.name for op in th.ops} == {"dom", "cod", "id", "comp", "tens_O", "tens_A", "I_O", "I_A"}
    cat = parse_theory(theory_source("category"))
    assert len(th.axioms) == len(cat.axioms) + 9
    assert str(th.axiom("id_unit")) == "|- id(I_O) = I_A"


def test_wrong_sort_is_rejected_with_position():
    src = "theory bad\nsort O;\nsort A;\nop dom : A -> O;\naxiom d: forall x:O. |- def(dom(x));\n"
    with pytest.raises(DSLError) as err:
        parse_theory(src)
    assert err.value.line == 5
    assert "sort" in str(err.value)


def test_lex_error_reports_column():
    with pytest.raises(DSLError) as err:
        parse_theory("theory t\nsort S$;")
    assert (err.value.line, err.value.col) == (2, 7)


def test_def_sugar_and_comments():
    th = parse_theory("theory t # a comment\nsort S;\nop c : -> S;\naxiom |- def(c);\n")
    (ax,) = th.axioms
    (eq,) = ax.conclusion
    assert eq.is_definedness


CAT = build_theory("category")


def test_infer_sort_examples():
    f = Var("f", "A")
    assert infer_sort(Var("x", "O")) == "O"
    assert infer_sort(App(CAT.signature.op("dom"), (f,)), {"f": "A"}) == "O"
    with pytest.raises(SortError):
        infer_sort(App(CAT.signature.op("comp"), (f, Var("x", "O"))))


def test_infer_sort_unknown_variable():
    with pytest.raises(SortError):
        infer_sort(Var("y", "A"), {"f": "A"})


def test_substitute_examples():
    sig = Signature(("S",), (OpSymbol("f", ("S",), "S"), OpSymbol("c", (), "S")))
    x, y = Var("x", "S"), Var("y", "S")
    fy = App(sig.op("f"), (y,))
    assert substitute(x, {x: fy}) == fy
    c = App(sig.op("c"), ())
    assert substitute(c, {x: fy}) == c
    with pytest.raises(SortError):
        substitute(x, {x: Var("z", "T")})


def test_substitute_identity_arrow_for_arrow_indeterminate():
    sig = CAT.signature
    xa, xo = Var("xa", "A"), Var("xo", "O")
    s_a = App(sig.op("comp"), (xa, xa))
    out = substitute(s_a, {xa: App(sig.op("id"), (xo,))})
    assert infer_sort(out) == "A" and free_vars(out) == {xo}


# -- compositionality of substitution --

SIG = Signature(("S",), (OpSymbol("f", ("S",), "S"), OpSymbol("g", ("S", "S"), "S"), OpSymbol("c", (), "S")))
VARS = [Var(n, "S") for n in "pqrs"]


def terms(vars_):
    leaves = st.sampled_from(vars_ + [App(SIG.op("c"), ())])
    return st.recursive(
        leaves,
        lambda sub: st.one_of(
            st.builds(lambda t: App(SIG.op("f"), (t,)), sub),
            st.builds(lambda s, t: App(SIG.op("g"), (s, t)), sub, sub),
        ),
        max_leaves=8,
    )


@given(terms(VARS[:2]), terms(VARS[2:]), terms(VARS[2:]), terms(VARS[:1]))
def test_substitution_composes(t, s1, s2, r):
    a, b, c, _ = VARS
    sigma = {a: s1, b: s2}
    tau = {c: r}
    composed = {v: substitute(u, tau) for v, u in sigma.items()}
    assert substitute(substitute(t, sigma), tau) == substitute(t, composed)


@given(terms(VARS))
def test_parse_term_inverts_printing(t):
    assert parse_term(str(t), SIG, VARS) == t
    assert infer_sort(t) == "S"
