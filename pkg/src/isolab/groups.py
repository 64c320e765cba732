"""Finite groups given by multiplication tables, and isomorphism testing between them."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Sequence

MAX_ISO_ORDER = 64


class GroupError(ValueError):
    pass


@dataclass(frozen=True)
class GroupTable:
    """Element labels, a multiplication table and the identity; inverses are derived.

    ``decorations`` optionally attaches a description (for instance a normal
    form) to each label; it does not take part in equality.
    """

    labels: tuple[str, ...]
    table: Mapping[tuple[str, str], str]
    identity: str
    decorations: Mapping[str, object] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "table", dict(self.table))
        object.__setattr__(self, "decorations", dict(self.decorations))
        els = set(self.labels)
        if len(els) != len(self.labels):
            raise GroupError("duplicate labels")
        if self.identity not in els:
            raise GroupError(f"identity {self.identity!r} is not a label")
        for a, b in itertools.product(self.labels, repeat=2):
            c = self.table.get((a, b))
            if c not in els:
                raise GroupError(f"product {a}*{b} missing or outside the group")
        for a in self.labels:
            if self.table[self.identity, a] != a or self.table[a, self.identity] != a:
                raise GroupError(f"{self.identity} is not an identity for {a}")
        for a, b, c in itertools.product(self.labels, repeat=3):
            if self.table[self.table[a, b], c] != self.table[a, self.table[b, c]]:
                raise GroupError(f"associativity fails at ({a}, {b}, {c})")
        inverse = {}
        for a in self.labels:
            for b in self.labels:
                if self.table[a, b] == self.identity:
                    inverse[a] = b
                    break
            else:
                raise GroupError(f"{a} has no inverse")
        object.__setattr__(self, "inverse", inverse)

    def __len__(self):
        return len(self.labels)

    @property
    def order(self) -> int:
        return len(self.labels)

    def mul(self, a: str, b: str) -> str:
        return self.table[a, b]

    def inv(self, a: str) -> str:
        return self.inverse[a]

    def element_order(self, a: str) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table[x, a]
            k += 1
        return k

    def is_abelian(self) -> bool:
        return all(self.table[a, b] == self.table[b, a] for a, b in itertools.product(self.labels, repeat=2))

    def order_profile(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(Counter(self.element_order(a) for a in self.labels).items()))

    def rows(self) -> list[list[str]]:
        return [[self.table[a, b] for b in self.labels] for a in self.labels]

    def to_doc(self) -> dict:
        return {
            "order": self.order,
            "name": describe(self),
            "identity": self.identity,
            "elements": list(self.labels),
            "table": self.rows(),
            "decorations": {k: str(v) for k, v in self.decorations.items()},
        }

    def format(self) -> str:
        width = max(len(a) for a in self.labels)
        head = " " * width + " | " + " ".join(b.rjust(width) for b in self.labels)
        lines = [head, "-" * len(head)]
        for a in self.labels:
            lines.append(a.rjust(width) + " | " + " ".join(self.table[a, b].rjust(width) for b in self.labels))
        return "\n".join(lines)


def from_function(labels: Sequence[str], mul, identity: str, decorations=None) -> GroupTable:
    table = {(a, b): mul(a, b) for a in labels for b in labels}
    return GroupTable(tuple(labels), table, identity, decorations or {})


def trivial_group(label: str = "e") -> GroupTable:
    return GroupTable((label,), {(label, label): label}, label)


def cyclic(n: int) -> GroupTable:
    return from_function([str(i) for i in range(n)], lambda a, b: str((int(a) + int(b)) % n), "0")


def direct_product(G: GroupTable, H: GroupTable) -> GroupTable:
    labels = [f"{a}.{b}" for a in G.labels for b in H.labels]
    split = {f"{a}.{b}": (a, b) for a in G.labels for b in H.labels}

    def mul(p, q):
        (a, b), (c, d) = split[p], split[q]
        return f"{G.mul(a, c)}.{H.mul(b, d)}"

    return from_function(labels, mul, f"{G.identity}.{H.identity}")


def symmetric3() -> GroupTable:
    perms = ["".join(p) for p in itertools.permutations("123")]
    return from_function(perms, lambda p, q: "".join(p[int(q[i]) - 1] for i in range(3)), "123")


def _generators(G: GroupTable) -> list[str]:
    """A small generating set, greedily chosen by decreasing element order."""
    gens: list[str] = []
    span = {G.identity}
    for a in sorted(G.labels, key=lambda a: (-G.element_order(a), G.labels.index(a))):
        if a in span:
            continue
        gens.append(a)
        span = _closure(G, gens)
        if len(span) == len(G):
            break
    return gens


def _closure(G: GroupTable, gens) -> set[str]:
    span = {G.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = G.mul(a, g)
                if b not in span:
                    span.add(b)
                    nxt.append(b)
        frontier = nxt
    return span


def _extend(G: GroupTable, H: GroupTable, gens, images) -> dict[str, str] | None:
    """Extend generator images to a homomorphism by breadth-first words; None if inconsistent."""
    h = {G.identity: H.identity}
    frontier = [G.identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g, img in zip(gens, images):
                b = G.mul(a, g)
                v = H.mul(h[a], img)
                if b in h:
                    if h[b] != v:
                        return None
                else:
                    h[b] = v
                    nxt.append(b)
        frontier = nxt
    return h


def group_isomorphism(G: GroupTable, H: GroupTable) -> dict[str, str] | None:
    """A witnessing isomorphism ``G -> H`` or None.

    Backtracks over images of a generating set of G, pruned by element orders,
    and checks the extension is a bijective homomorphism.
    """
    if max(len(G), len(H)) > MAX_ISO_ORDER:
        raise GroupError(f"isomorphism testing is limited to order {MAX_ISO_ORDER}")
    if len(G) != len(H) or G.order_profile() != H.order_profile():
        return None
    gens = _generators(G)
    by_order: dict[int, list[str]] = {}
    for b in H.labels:
        by_order.setdefault(H.element_order(b), []).append(b)
    choices = [by_order.get(G.element_order(g), []) for g in gens]
    for images in itertools.product(*choices):
        h = _extend(G, H, gens, images)
        if h is None or len(set(h.values())) != len(G):
            continue
        if all(h[G.mul(a, b)] == H.mul(h[a], h[b]) for a in G.labels for b in G.labels):
            return h
    return None


def group_isomorphic(G: GroupTable, H: GroupTable) -> bool:
    return group_isomorphism(G, H) is not None


@lru_cache(maxsize=None)
def _named() -> tuple[tuple[str, GroupTable], ...]:
    z2 = cyclic(2)
    return (
        ("trivial", trivial_group()),
        ("Z2", z2),
        ("Z3", cyclic(3)),
        ("Z4", cyclic(4)),
        ("Z2xZ2", direct_product(z2, z2)),
        ("Z5", cyclic(5)),
        ("Z6", cyclic(6)),
        ("S3", symmetric3()),
    )


def describe(G: GroupTable) -> str:
    """A conventional name for small groups, else ``group of order n``."""
    for name, H in _named():
        if len(H) == len(G) and group_isomorphic(G, H):
            return name
    return f"group of order {len(G)}"
