from __future__ import annotations

import pytest

from isolab.phl import App, OpSymbol, Signature, Var
from isolab.rewriting import RewriteLimit, Rule, RuleSet, instantiate, match, rewrite

SIG = Signature(
    ("S",),
    (OpSymbol("f", ("S",), "S"), OpSymbol("g", ("S", "S"), "S"), OpSymbol("a", (), "S"), OpSymbol("@b", (), "S")),
)
f, g = SIG.op("f"), SIG.op("g")
a, b = App(SIG.op("a"), ()), App(SIG.op("@b"), ())
X, Y = Var("X", "S"), Var("Y", "S")


def test_match_and_instantiate():
    binds = {}
    assert match(App(g, (X, X)), App(g, (a, a)), binds)
    assert binds == {"X": a}
    assert not match(App(g, (X, X)), App(g, (a, b)), {})
    assert instantiate(App(g, (X, Y)), {"X": b, "Y": a}) == App(g, (b, a))


def test_diagram_constant_pattern_only_matches_constants():
    c = Var("@c", "S")
    assert match(App(f, (c,)), App(f, (b,)), {})
    assert not match(App(f, (c,)), App(f, (a,)), {})


def test_strategies_and_trace():
    rules = RuleSet([Rule("ff", App(f, (App(f, (X,)),)), X), Rule("ga", App(g, (X, a)), X)])
    t = App(g, (App(f, (App(f, (b,)),)), a))
    inner, outer = [], []
    assert rewrite(t, rules, "innermost", trace=inner) == b
    assert rewrite(t, rules, "outermost", trace=outer) == b
    assert [s.rule for s in inner] == ["ff", "ga"]
    assert [s.rule for s in outer] == ["ga", "ff"]
    assert inner[0].position == (0,)
    assert rules.is_normal(b) and not rules.is_normal(t)


def test_guarded_rule_does_not_fire():
    rules = RuleSet([Rule("never", App(f, (X,)), lambda binds: None)])
    t = App(f, (a,))
    assert rewrite(t, rules) == t


def test_step_limit():
    loop = RuleSet([Rule("grow", App(f, (X,)), App(f, (App(f, (X,)),)))])
    with pytest.raises(RewriteLimit):
        rewrite(App(f, (a,)), loop, "outermost", limit=50)
    with pytest.raises(ValueError):
        rewrite(a, loop, "sideways")
