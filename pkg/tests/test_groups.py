from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from isolab.groups import (
    GroupError,
    GroupTable,
    cyclic,
    describe,
    direct_product,
    group_isomorphic,
    group_isomorphism,
    symmetric3,
    trivial_group,
)

SMALL = [trivial_group(), cyclic(2), cyclic(3), cyclic(4), direct_product(cyclic(2), cyclic(2)), cyclic(6), symmetric3()]


def relabel(G: GroupTable, perm: list[int]) -> GroupTable:
    names = {a: f"g{perm[i]}" for i, a in enumerate(G.labels)}
    table = {(names[a], names[b]): names[c] for (a, b), c in G.table.items()}
    labels = sorted(names.values())
    return GroupTable(tuple(labels), table, names[G.identity])


def test_identity_witness():
    G = symmetric3()
    h = group_isomorphism(G, G)
    assert h is not None and all(h[G.mul(a, b)] == G.mul(h[a], h[b]) for a in G.labels for b in G.labels)


def test_z4_is_not_klein():
    assert not group_isomorphic(cyclic(4), direct_product(cyclic(2), cyclic(2)))


def test_z6_is_not_s3():
    assert not group_isomorphic(cyclic(6), symmetric3())
    assert group_isomorphic(cyclic(6), direct_product(cyclic(2), cyclic(3)))


def test_size_limit():
    with pytest.raises(GroupError):
        group_isomorphic(cyclic(65), cyclic(65))


def test_describe():
    assert [describe(G) for G in SMALL] == ["trivial", "Z2", "Z3", "Z4", "Z2xZ2", "Z6", "S3"]
    assert describe(cyclic(7)) == "group of order 7"


def test_invalid_tables():
    with pytest.raises(GroupError):
        GroupTable(("a", "b"), {("a", "a"): "a", ("a", "b"): "b", ("b", "a"): "b", ("b", "b"): "b"}, "a")


@given(st.sampled_from(SMALL), st.data())
def test_relabelled_groups_are_isomorphic(G, data):
    perm = data.draw(st.permutations(range(len(G))))
    H = relabel(G, list(perm))
    h = group_isomorphism(G, H)
    assert h is not None
    assert sorted(h.values()) == sorted(H.labels)


@given(st.sampled_from(SMALL), st.sampled_from(SMALL))
def test_isomorphism_is_decided_by_name(G, H):
    assert group_isomorphic(G, H) == (describe(G) == describe(H))
