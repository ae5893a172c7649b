"""Mergings of two posets, the lattice they form, and the star/antichain quotient.

A merging of ``P`` and ``Q`` is a pair ``(R, T)`` with ``R`` in ``P x Q`` and
``T`` in ``Q x P`` such that the union of both orders with ``R`` and ``T`` is
again a quasi-order; ``p R q`` reads "``p`` lies weakly below ``q``".
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property, lru_cache

from .dot import lattice_dot
from .fca import contraordinal_scale, enumerate_bonds, is_bond
from .relations import (
    GroundSet,
    Poset,
    Relation,
    bits,
    hasse_edges,
    make_antichain,
    make_chain,
    make_star,
    relational_product,
)

#: largest ``|P| * |Q|`` that :func:`enumerate_proper_mergings` accepts
MAX_CELLS = 20


class SizeGuardError(ValueError):
    """Raised when a brute-force enumeration would exceed :data:`MAX_CELLS`."""


def _same(a: GroundSet, b: GroundSet) -> bool:
    return a is b or a == b


def _check_carriers(r: Relation, t: Relation, p: Poset, q: Poset) -> None:
    if not p.carrier.labels_set.isdisjoint(q.carrier.labels):
        overlap = p.carrier.labels_set & set(q.carrier.labels)
        raise ValueError(f"posets share elements {sorted(overlap)}")
    if not (_same(r.domain, p.carrier) and _same(r.codomain, q.carrier)):
        raise ValueError(f"R has shape {r.shape}, expected {p.size}x{q.size}")
    if not (_same(t.domain, q.carrier) and _same(t.codomain, p.carrier)):
        raise ValueError(f"T has shape {t.shape}, expected {q.size}x{p.size}")


def is_merging(r: Relation, t: Relation, p: Poset, q: Poset) -> bool:
    """Bond conditions on both sides plus ``R.T <= P`` and ``T.R <= Q``."""
    _check_carriers(r, t, p, q)
    kp, kq = contraordinal_scale(p), contraordinal_scale(q)
    return (
        is_bond(r, kp, kq)
        and is_bond(t, kq, kp)
        and relational_product(r, t) <= p.order
        and relational_product(t, r) <= q.order
    )


@dataclass(frozen=True)
class Merging:
    p: Poset
    q: Poset
    r: Relation
    t: Relation

    def __post_init__(self):
        if not is_merging(self.r, self.t, self.p, self.q):
            raise ValueError("(R, T) is not a merging of P and Q")

    @cached_property
    def key(self) -> bytes:
        """Canonical encoding of ``(R, T)``; used for ordering and dedup."""
        return self.r.to_bytes() + b"\x00" + self.t.to_bytes()

    @property
    def is_proper(self) -> bool:
        return is_proper(self)

    def __le__(self, other: Merging) -> bool:
        return self.r <= other.r and self.t >= other.t

    def to_dict(self) -> dict:
        return {
            "R": [list(pair) for pair in self.r.label_pairs()],
            "T": [list(pair) for pair in self.t.label_pairs()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_dot(self, name: str = "merging") -> str:
        """Hasse diagram of the merged order."""
        order = induced_order(self)
        return lattice_dot(
            name,
            order.domain.size,
            hasse_edges(order),
            node_labels=dict(enumerate(order.domain.labels)),
        )


def is_proper(m: Merging) -> bool:
    """No element of ``P`` is identified with one of ``Q``."""
    return all(row & col == 0 for row, col in zip(m.r.rows, m.t.columns))


def induced_order(m: Merging) -> Relation:
    """The merged relation on ``P + Q`` (``P`` first)."""
    carrier = m.p.carrier + m.q.carrier
    shift = m.p.size
    rows = [m.p.order.rows[i] | (m.r.rows[i] << shift) for i in range(m.p.size)]
    rows += [m.t.rows[j] | (m.q.order.rows[j] << shift) for j in range(m.q.size)]
    return Relation(carrier, carrier, tuple(rows))


# -- lattice ------------------------------------------------------------------


def _same_pair(x: Merging, y: Merging) -> None:
    if x.p != y.p or x.q != y.q:
        raise ValueError("mergings belong to different poset pairs")


def lattice_join(x: Merging, y: Merging) -> Merging:
    _same_pair(x, y)
    return Merging(x.p, x.q, x.r | y.r, x.t & y.t)


def lattice_meet(x: Merging, y: Merging) -> Merging:
    _same_pair(x, y)
    return Merging(x.p, x.q, x.r & y.r, x.t | y.t)


@dataclass(frozen=True)
class MergingLattice:
    p: Poset
    q: Poset
    elements: tuple[Merging, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @cached_property
    def _positions(self) -> dict[bytes, int]:
        return {x.key: i for i, x in enumerate(self.elements)}

    def index(self, x: Merging) -> int:
        return self._positions[x.key]

    def __contains__(self, x: Merging) -> bool:
        return x.key in self._positions

    @cached_property
    def order(self) -> Relation:
        carrier = GroundSet.indexed("m", 0, len(self.elements))
        els = self.elements
        return Relation.from_predicate(carrier, carrier, lambda i, j: els[i] <= els[j])

    def leq(self, i: int, j: int) -> bool:
        return (i, j) in self.order

    def _lookup(self, r: Relation, t: Relation) -> int:
        # membership in the element set stands in for re-validating the pair
        return self._positions[r.to_bytes() + b"\x00" + t.to_bytes()]

    def join(self, i: int, j: int) -> int:
        """Index of ``(R1 | R2, T1 & T2)``; ``KeyError`` if it left the set."""
        x, y = self.elements[i], self.elements[j]
        return self._lookup(x.r | y.r, x.t & y.t)

    def meet(self, i: int, j: int) -> int:
        x, y = self.elements[i], self.elements[j]
        return self._lookup(x.r & y.r, x.t | y.t)

    @property
    def bottom(self) -> int:
        return self.index(bottom_merging(self.p, self.q))

    @property
    def top(self) -> int:
        return self.index(top_merging(self.p, self.q))

    def covers(self) -> list[tuple[int, int]]:
        return hasse_edges(self.order)

    def is_interval(self, members) -> bool:
        """``members`` has a least and a greatest element and is order-convex."""
        members = set(members)
        if not members:
            return False
        lows = [i for i in members if all(self.leq(i, j) for j in members)]
        highs = [i for i in members if all(self.leq(j, i) for j in members)]
        if len(lows) != 1 or len(highs) != 1:
            return False
        lo, hi = lows[0], highs[0]
        between = {k for k in range(len(self)) if self.leq(lo, k) and self.leq(k, hi)}
        return between == members

    def to_dot(self, clusters=None, name: str = "mergings") -> str:
        return lattice_dot(
            name,
            len(self),
            self.covers(),
            node_labels={i: str(i) for i in range(len(self))},
            clusters=clusters,
        )


def bottom_merging(p: Poset, q: Poset) -> Merging:
    return Merging(p, q, Relation.empty(p.carrier, q.carrier), Relation.full(q.carrier, p.carrier))


def top_merging(p: Poset, q: Poset) -> Merging:
    return Merging(p, q, Relation.full(p.carrier, q.carrier), Relation.empty(q.carrier, p.carrier))


def _proper_mergings(p: Poset, q: Poset):
    kp, kq = contraordinal_scale(p), contraordinal_scale(q)
    t_bonds = [t.rows for t in enumerate_bonds(kq, kp)]
    p_up = p.order.rows
    q_up = q.order.rows
    p_full = p.carrier.full_mask
    for r in enumerate_bonds(kp, kq):
        rcols = r.columns
        # per T-row c: forbidden P-elements given R
        forbidden = []
        for c in range(q.size):
            below_c = rcols[c]
            allowed = p_full
            for x in bits(below_c):
                allowed &= p_up[x]  # R.T within P's order
            allowed &= ~below_c  # properness
            for x in range(p.size):
                if r.rows[x] & ~q_up[c]:
                    allowed &= ~(1 << x)  # T.R within Q's order
            forbidden.append(~allowed)
        for t_rows in t_bonds:
            if all(row & bad == 0 for row, bad in zip(t_rows, forbidden)):
                yield Merging(p, q, r, Relation(q.carrier, p.carrier, t_rows))


def enumerate_proper_mergings(p: Poset, q: Poset) -> MergingLattice:
    """All proper mergings of ``p`` and ``q``, ordered by canonical encoding.

    Bonds ``R`` and ``T`` are enumerated separately (rows constrained to
    intents) and then paired.
    """
    if p.size * q.size > MAX_CELLS:
        raise SizeGuardError(
            f"|P|*|Q| = {p.size * q.size} exceeds the brute-force limit of {MAX_CELLS}"
        )
    found = {x.key: x for x in _proper_mergings(p, q)}
    return MergingLattice(p, q, tuple(found[k] for k in sorted(found)))


@lru_cache(maxsize=64)
def star_chain_lattice(m: int, n: int) -> MergingLattice:
    """Proper mergings of an ``m``-star and an ``n``-chain."""
    return enumerate_proper_mergings(make_star(m), make_chain(n))


@lru_cache(maxsize=64)
def antichain_chain_lattice(m: int, n: int) -> MergingLattice:
    return enumerate_proper_mergings(make_antichain(m), make_chain(n))


# -- the restriction map and its section --------------------------------------


def _star_size(p: Poset) -> int:
    m = p.size - 1
    if m < 0 or p != make_star(m):
        raise ValueError("expected a star poset built by make_star")
    return m


def _antichain_size(p: Poset) -> int:
    if p != make_antichain(p.size):
        raise ValueError("expected an antichain built by make_antichain")
    return p.size


def _chain_size(q: Poset) -> int:
    if q != make_chain(q.size):
        raise ValueError("expected a chain built by make_chain")
    return q.size


def eta(x: Merging) -> Merging:
    """Drop ``s0``: restrict a star/chain merging to the antichain ``s1..sm``."""
    m = _star_size(x.p)
    _chain_size(x.q)
    a = make_antichain(m)
    r = Relation(a.carrier, x.q.carrier, x.r.rows[1:])
    t = Relation(x.q.carrier, a.carrier, tuple(row >> 1 for row in x.t.rows))
    return Merging(a, x.q, r, t)


def xi(y: Merging) -> Merging:
    """Re-attach ``s0`` below everything any ``a_i`` lies below; ``s0`` gets no ``T`` entries."""
    m = _antichain_size(y.p)
    _chain_size(y.q)
    s = make_star(m)
    union = 0
    for row in y.r.rows:
        union |= row
    r = Relation(s.carrier, y.q.carrier, (union,) + y.r.rows)
    t = Relation(y.q.carrier, s.carrier, tuple(row << 1 for row in y.t.rows))
    return Merging(s, y.q, r, t)


@dataclass(frozen=True)
class MergingClass:
    k1: int
    k2: int
    l: int  # noqa: E741

    def __post_init__(self):
        if not self.k1 > self.k2 >= self.l >= 0:
            raise ValueError(f"invalid class parameters {(self.k1, self.k2, self.l)}")

    def as_tuple(self) -> tuple[int, int, int]:
        return self.k1, self.k2, self.l


def classify(y: Merging) -> MergingClass:
    """``(k1, k2, l)`` of a proper antichain/chain merging (1-based chain indices).

    ``k1``: first chain element lying above some ``a_i`` (``n+1`` if none);
    ``k2``: last chain element lying below some ``a_i`` (``0`` if none);
    ``l``: largest ``l <= k2`` with ``c_l`` below every ``a_i``.
    """
    _antichain_size(y.p)
    n = _chain_size(y.q)
    if not is_proper(y):
        raise ValueError("classification needs a proper merging")
    union = 0
    for row in y.r.rows:
        union |= row
    k1 = (union & -union).bit_length() if union else n + 1
    k2 = max((j + 1 for j, row in enumerate(y.t.rows) if row), default=0)
    full = y.p.carrier.full_mask
    l = k2  # noqa: E741
    while l > 0 and y.t.rows[l - 1] != full:
        l -= 1  # noqa: E741
    return MergingClass(k1, k2, l)


def fiber(target: Merging, all_sc: MergingLattice) -> tuple[Merging, ...]:
    """Elements of ``all_sc`` whose restriction is ``target``."""
    return tuple(x for x in all_sc if eta(x) == target)


def fibers(all_sc: MergingLattice) -> dict[bytes, list[int]]:
    """Partition of ``all_sc`` indices keyed by the canonical key of the image."""
    groups: dict[bytes, list[int]] = defaultdict(list)
    for i, x in enumerate(all_sc):
        groups[eta(x).key].append(i)
    return dict(groups)
