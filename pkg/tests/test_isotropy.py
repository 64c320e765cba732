from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from isolab import catalog
from isolab.groups import describe, group_isomorphic
from isolab.isotropy import (
    ClosureEscape,
    brute_force_isotropy,
    center_auts,
    check_definable_inner,
    closed_form_isotropy,
    has_picard_shape,
    inv_elements,
    is_rigid,
    picard,
    setting_for,
    sigma,
    theta,
)
from isolab.theories import FiniteGroup

# Orders of the unit groups, counted by hand from the multiplication tables.
INV_ORDERS = {
    "M1.1": 1, "M2.1": 2, "M2.2": 1, "M3.1": 2, "M3.2": 1, "M3.3": 1, "M3.4": 1,
    "M3.5": 1, "M3.6": 1, "M3.7": 3, "Z4": 4, "Z2xZ2": 4, "T2": 2, "Z2xSL2": 2, "Z4+0": 4,
}


def units_by_definition(M):
    return [a for a in M.elements if any(M.mul(a, b) == M.unit == M.mul(b, a) for b in M.elements)]


@pytest.mark.parametrize("M", catalog.monoid_fixtures(), ids=lambda M: M.name)
def test_unit_group_orders(M):
    assert len(units_by_definition(M)) == INV_ORDERS[M.name]
    assert len(inv_elements(M)) == INV_ORDERS[M.name]


# -- the definable-inner check on single candidates --


def monoid_setting(M):
    s = setting_for("monoid", M)
    return s, s.engines["M"]


def test_conjugation_is_definable_inner():
    G = catalog.symmetric_group(3)
    s = setting_for("group", G)
    eng = s.engines["G"]
    for g in G.elements:
        cand = s.element(G=eng.parse_word(f"{g} x {G.inv[g]}"))
        assert check_definable_inner(s, cand).ok


def test_identity_family_passes():
    s, _ = monoid_setting(catalog.semilattice())
    assert check_definable_inner(s, s.identity()).ok


def test_semilattice_sandwich_is_not_invertible():
    s, eng = monoid_setting(catalog.semilattice())
    v = check_definable_inner(s, s.element(M=eng.parse_word("a x a")))
    assert not v.ok and v.condition == "invertible"
    assert "fail(invertible)" in str(v)


def test_constant_component_is_rejected_as_ill_formed():
    s, eng = monoid_setting(catalog.cyclic_group(2).as_monoid())
    v = check_definable_inner(s, s.element(M=eng.parse_word("1")))
    assert v.condition == "well-formed"


def test_non_commuting_candidate_reports_a_witness():
    G = catalog.symmetric_group(3)
    s = setting_for("group", G)
    cand = s.element(G=s.engines["G"].parse_word("132 x"))
    v = check_definable_inner(s, cand)
    assert not v.ok and v.condition == "commutes"
    assert v.witness["op"]


def test_x_inverse_is_ruled_out_even_though_inverse_is_a_homomorphism_on_the_trivial_group():
    G = FiniteGroup(("e",), "e", {("e", "e"): "e"}, "Z1")
    s = setting_for("group", G)
    cand = s.element(G=s.engines["G"].parse_word("x⁻¹"))
    assert not check_definable_inner(s, cand).ok
    assert len(brute_force_isotropy(s).group) == 1


# -- brute force --


def test_brute_force_on_z2():
    r = brute_force_isotropy(setting_for("monoid", catalog.cyclic_group(2).as_monoid()))
    assert len(r.group) == 2
    assert r.describe() == ["s0: 0 x 0", "s1: 1 x 1"]


def test_brute_force_on_the_semilattice_is_trivial():
    r = brute_force_isotropy(setting_for("monoid", catalog.semilattice()))
    assert len(r.group) == 1


def test_brute_force_on_bz3_presheaves():
    for P in catalog.presheaf_models("BZ3"):
        r = brute_force_isotropy(setting_for("presheaf", P), (1, 1))
        assert group_isomorphic(r.group, center_auts(P.J))
        assert len(r.group) == 3


def test_elements_found_are_sound():
    for M in catalog.monoid_fixtures()[:10]:
        s = setting_for("monoid", M)
        r = brute_force_isotropy(s, (2, 5))
        for e in r.elements:
            assert check_definable_inner(s, e).ok, (M.name, s.format(e))


def test_identity_is_listed_first():
    s = setting_for("monoid", catalog.cyclic_group(4).as_monoid())
    r = brute_force_isotropy(s)
    assert r.elements[0] == s.identity()
    assert r.group.identity == "s0"


def test_tight_bounds_report_closure_escape():
    # length 1 words with one x hold only the bare indeterminate, so the unit is missing
    with pytest.raises(ClosureEscape):
        brute_force_isotropy(setting_for("monoid", catalog.cyclic_group(2).as_monoid()), (1, 1))


def test_bounds_must_be_positive():
    with pytest.raises(ValueError):
        brute_force_isotropy(setting_for("monoid", catalog.semilattice()), (0, 3))


def test_symmetric_monoidal_kind_has_no_brute_force_setting():
    with pytest.raises(ValueError):
        setting_for("ssmc", catalog.symmetric_fixtures()[0])


# -- closed forms --


def test_picard_of_delta_and_nabla():
    by_name = {C.name: C for C in catalog.smc_fixtures()}
    assert len(picard(by_name["Delta(Z4)"])) == 4
    assert len(picard(by_name["Nabla(M2.2)"])) == 1
    assert len(picard(by_name["Delta(T2)"])) == 2


@pytest.mark.parametrize(
    "key,order,rigid",
    [("BZ2", 2, False), ("BZ3", 3, False), ("BZ4", 4, False), ("BS3", 1, False), ("chain3", 1, True), ("parallel", 1, True)],
)
def test_center_of_index_categories(key, order, rigid):
    J = catalog.index_categories()[key]
    assert len(center_auts(J)) == order
    assert is_rigid(J) is rigid


def test_closed_forms_for_each_kind():
    assert len(closed_form_isotropy("cmonoid", catalog.cyclic_group(3).as_monoid())) == 1
    assert len(closed_form_isotropy("group", catalog.symmetric_group(3))) == 6
    assert len(closed_form_isotropy("ssmc", catalog.symmetric_fixtures()[0])) == 1
    assert len(closed_form_isotropy("mset", catalog.mset_fixture())) == 2
    assert describe(closed_form_isotropy("crossed", catalog.crossed_module_z2_z4())) == "Z4"
    with pytest.raises(ValueError):
        closed_form_isotropy("category", catalog.chain_category())


@pytest.mark.parametrize(
    "kind,x,bounds",
    [
        ("group", catalog.symmetric_group(3), (2, 5)),
        ("cmonoid", catalog.cyclic_group(3).as_monoid(), (2, 5)),
        ("mset", catalog.mset_fixture(), (1, 1)),
        ("crossed", catalog.crossed_module_z2_z4(), (2, 5)),
    ],
    ids=["S3", "Z3-commutative", "mset", "crossed"],
)
def test_brute_force_matches_closed_form(kind, x, bounds):
    r = brute_force_isotropy(setting_for(kind, x), bounds)
    assert group_isomorphic(r.group, closed_form_isotropy(kind, x))


# -- Picard comparison maps --

SMCS = [C for C in catalog.smc_fixtures() if len(picard(C)) > 1][:6]


@pytest.mark.parametrize("C", SMCS, ids=lambda C: C.name)
def test_theta_then_sigma_is_identity(C):
    s = setting_for("strmoncat", C)
    P = picard(C)
    images = {}
    for a in P.labels:
        e = theta(s, a)
        assert has_picard_shape(s, e)
        assert sigma(s, e) == a
        images[e.key] = a
    assert len(images) == len(P)
    assert theta(s, C.unit_ob) == s.identity()


@given(st.data())
def test_sigma_is_multiplicative(data):
    C = data.draw(st.sampled_from(SMCS))
    s = setting_for("strmoncat", C)
    P = picard(C)
    a, b = data.draw(st.sampled_from(P.labels)), data.draw(st.sampled_from(P.labels))
    prod = s.compose(theta(s, a), theta(s, b))
    assert sigma(s, prod) == C.tensor_ob[a, b]
