"""Formal contexts, concept lattices, bonds and Galois connections.

Index sets are handled as bitmasks internally; public results are sorted
tuples of indices.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Literal

from .dot import lattice_dot
from .relations import (
    GroundSet,
    Poset,
    Relation,
    bits,
    hasse_edges,
    make_chain,
    make_star,
    popcount,
    to_mask,
    write_cross_table,
)


@dataclass(frozen=True)
class FormalContext:
    objects: GroundSet
    attributes: GroundSet
    incidence: Relation

    def __post_init__(self):
        if self.incidence.domain != self.objects or self.incidence.codomain != self.attributes:
            raise ValueError("incidence must relate objects to attributes")

    @classmethod
    def from_relation(cls, rel: Relation) -> FormalContext:
        return cls(rel.domain, rel.codomain, rel)

    def up(self, extent: int) -> int:
        """Attributes shared by every object in the bitmask ``extent``."""
        out = self.attributes.full_mask
        rows = self.incidence.rows
        for g in bits(extent):
            out &= rows[g]
        return out

    def down(self, intent: int) -> int:
        """Objects having every attribute in the bitmask ``intent``."""
        out = 0
        for g, row in enumerate(self.incidence.rows):
            if row & intent == intent:
                out |= 1 << g
        return out

    def intent_closure(self, intent: int) -> int:
        return self.up(self.down(intent))

    def extent_closure(self, extent: int) -> int:
        return self.down(self.up(extent))

    def dual(self) -> FormalContext:
        return FormalContext(self.attributes, self.objects, self.incidence.inverse())

    @cached_property
    def intents(self) -> tuple[int, ...]:
        """All intents in lectic order (next closure)."""
        return tuple(_next_closure_intents(self))

    @cached_property
    def extents(self) -> tuple[int, ...]:
        return tuple(self.down(b) for b in self.intents)

    @cached_property
    def intent_set(self) -> frozenset[int]:
        return frozenset(self.intents)

    @cached_property
    def extent_set(self) -> frozenset[int]:
        return frozenset(self.extents)

    def is_intent(self, mask: int) -> bool:
        return mask in self.intent_set

    def is_extent(self, mask: int) -> bool:
        return mask in self.extent_set

    def to_cross_table(self) -> str:
        return write_cross_table(self.incidence)


def _next_closure_intents(ctx: FormalContext):
    k = ctx.attributes.size
    full = ctx.attributes.full_mask
    current = ctx.intent_closure(0)
    yield current
    while current != full:
        for i in reversed(range(k)):
            bit = 1 << i
            if current & bit:
                continue
            lower = bit - 1
            candidate = ctx.intent_closure((current & lower) | bit)
            if candidate & lower == current & lower:
                current = candidate
                yield current
                break
        else:  # pragma: no cover - the full set is always closed
            raise AssertionError("next closure ran past the last intent")


@lru_cache(maxsize=256)
def contraordinal_scale(p: Poset) -> FormalContext:
    """Context ``(P, P, not >=)``: ``g`` has ``m`` iff ``m <= g`` fails."""
    incidence = Relation(p.carrier, p.carrier, tuple(
        p.carrier.full_mask & ~p.down(g) for g in range(p.size)
    ))
    return FormalContext(p.carrier, p.carrier, incidence)


Side = Literal["object", "attribute"]


def derive(ctx: FormalContext, side: Side, subset: Iterable[int]) -> tuple[int, ...]:
    """Derivation operator applied to a set of objects (or attributes)."""
    subset = tuple(subset)
    size = ctx.objects.size if side == "object" else ctx.attributes.size
    for i in subset:
        if not 0 <= i < size:
            raise IndexError(f"index {i} out of range for {side} side of size {size}")
    mask = to_mask(subset)
    if side == "object":
        return tuple(bits(ctx.up(mask)))
    if side == "attribute":
        return tuple(bits(ctx.down(mask)))
    raise ValueError(f"side must be 'object' or 'attribute', not {side!r}")


@dataclass(frozen=True, order=False)
class FormalConcept:
    extent: tuple[int, ...]
    intent: tuple[int, ...]

    @property
    def extent_mask(self) -> int:
        return to_mask(self.extent)

    @property
    def intent_mask(self) -> int:
        return to_mask(self.intent)


@dataclass(frozen=True)
class ConceptLattice:
    """Concepts sorted by extent size, then lexicographically by extent."""

    context: FormalContext
    concepts: tuple[FormalConcept, ...]
    order: Relation
    object_concept: tuple[int, ...]
    attribute_concept: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.concepts)

    @cached_property
    def _by_extent(self) -> dict[int, int]:
        return {c.extent_mask: i for i, c in enumerate(self.concepts)}

    def index_of_extent(self, extent: int) -> int:
        """Concept index for an extent bitmask (must be closed)."""
        return self._by_extent[extent]

    def leq(self, i: int, j: int) -> bool:
        return (i, j) in self.order

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.concepts) - 1

    def meet(self, i: int, j: int) -> int:
        ext = self.concepts[i].extent_mask & self.concepts[j].extent_mask
        return self._by_extent[ext]

    def join(self, i: int, j: int) -> int:
        ext = self.context.extent_closure(
            self.concepts[i].extent_mask | self.concepts[j].extent_mask
        )
        return self._by_extent[ext]

    def covers(self) -> list[tuple[int, int]]:
        return hasse_edges(self.order)

    def as_poset(self) -> Poset:
        return Poset(self.order.domain, self.order)

    def to_json(self) -> str:
        g, m = self.context.objects.labels, self.context.attributes.labels
        return json.dumps(
            {
                "schema": 1,
                "concepts": [
                    {"extent": [g[i] for i in c.extent], "intent": [m[j] for j in c.intent]}
                    for c in self.concepts
                ],
            },
            indent=2,
        )

    def to_dot(self, name: str = "concepts") -> str:
        """Hasse diagram; object labels below nodes, attribute labels above."""
        g, m = self.context.objects.labels, self.context.attributes.labels
        below = {i: [] for i in range(len(self))}
        above = {i: [] for i in range(len(self))}
        for obj, c in enumerate(self.object_concept):
            below[c].append(g[obj])
        for att, c in enumerate(self.attribute_concept):
            above[c].append(m[att])
        return lattice_dot(name, len(self), self.covers(), below=below, above=above)


def enumerate_concepts(ctx: FormalContext) -> ConceptLattice:
    pairs = [(ctx.down(b), b) for b in ctx.intents]
    pairs.sort(key=lambda p: (popcount(p[0]), tuple(bits(p[0]))))
    concepts = tuple(FormalConcept(tuple(bits(a)), tuple(bits(b))) for a, b in pairs)
    carrier = GroundSet.indexed("b", 0, len(concepts))
    ext = [a for a, _ in pairs]
    order = Relation.from_predicate(carrier, carrier, lambda i, j: ext[i] & ~ext[j] == 0)
    by_extent = {a: i for i, a in enumerate(ext)}
    gamma = tuple(
        by_extent[ctx.extent_closure(1 << g)] for g in range(ctx.objects.size)
    )
    mu = tuple(by_extent[ctx.down(1 << m)] for m in range(ctx.attributes.size))
    return ConceptLattice(ctx, concepts, order, gamma, mu)


# -- bonds ---------------------------------------------------------------


def _check_cross(r: Relation, rows: GroundSet, cols: GroundSet) -> None:
    # identity first: the same ground sets are passed on every hot call
    if not (r.domain is rows or r.domain == rows) or not (r.codomain is cols or r.codomain == cols):
        raise ValueError(
            f"relation of shape {r.shape} does not match {rows.size}x{cols.size}"
        )


def is_bond(r: Relation, k1: FormalContext, k2: FormalContext) -> bool:
    """Rows are intents of ``k2`` and columns are extents of ``k1``."""
    _check_cross(r, k1.objects, k2.attributes)
    return all(k2.is_intent(row) for row in r.rows) and all(
        k1.is_extent(col) for col in r.columns
    )


def is_dual_bond(r: Relation, k1: FormalContext, k2: FormalContext) -> bool:
    """``r`` relates objects of ``k1`` to objects of ``k2``; rows and columns are extents."""
    _check_cross(r, k1.objects, k2.objects)
    return all(k2.is_extent(row) for row in r.rows) and all(
        k1.is_extent(col) for col in r.columns
    )


def _cross_relations(row_candidates: list[tuple[int, ...]], domain, codomain, col_ok):
    for rows in itertools.product(*row_candidates):
        rel = Relation(domain, codomain, rows)
        if all(col_ok(c) for c in rel.columns):
            yield rel


def enumerate_bonds(k1: FormalContext, k2: FormalContext):
    """All bonds from ``k1`` to ``k2`` (rows drawn from the intents of ``k2``)."""
    cands = [k2.intents] * k1.objects.size
    return _cross_relations(cands, k1.objects, k2.attributes, k1.is_extent)


def enumerate_dual_bonds(k1: FormalContext, k2: FormalContext):
    cands = [k2.extents] * k1.objects.size
    return _cross_relations(cands, k1.objects, k2.objects, k1.is_extent)


# -- Galois connections --------------------------------------------------


@dataclass(frozen=True)
class GaloisConnection:
    """A pair of maps between concept lattices given as index tuples."""

    left: ConceptLattice
    right: ConceptLattice
    phi: tuple[int, ...]
    psi: tuple[int, ...]

    def is_antitone(self) -> bool:
        L, R = self.left, self.right
        ok_phi = all(
            R.leq(self.phi[j], self.phi[i])
            for i in range(len(L)) for j in range(len(L)) if L.leq(i, j)
        )
        ok_psi = all(
            L.leq(self.psi[j], self.psi[i])
            for i in range(len(R)) for j in range(len(R)) if R.leq(i, j)
        )
        return ok_phi and ok_psi

    def is_extensive(self) -> bool:
        """``p <= psi(phi(p))`` and ``q <= phi(psi(q))`` everywhere."""
        return all(self.left.leq(p, self.psi[self.phi[p]]) for p in range(len(self.left))) and all(
            self.right.leq(q, self.phi[self.psi[q]]) for q in range(len(self.right))
        )

    def is_valid(self) -> bool:
        return self.is_antitone() and self.is_extensive()

    def table(self) -> dict[str, list]:
        def show(lat: ConceptLattice, i: int) -> list[str]:
            labels = lat.context.objects.labels
            return [labels[g] for g in lat.concepts[i].extent]

        return {
            "phi": [[show(self.left, i), show(self.right, j)] for i, j in enumerate(self.phi)],
            "psi": [[show(self.right, i), show(self.left, j)] for i, j in enumerate(self.psi)],
        }


def galois_from_dual_bond(
    r: Relation,
    k1: FormalContext,
    k2: FormalContext,
    left: ConceptLattice | None = None,
    right: ConceptLattice | None = None,
) -> GaloisConnection:
    """``phi(X) = X^R`` and ``psi(Y) = Y^R`` on extents."""
    if not is_dual_bond(r, k1, k2):
        raise ValueError("relation is not a dual bond")
    left = left or enumerate_concepts(k1)
    right = right or enumerate_concepts(k2)
    rows, cols = r.rows, r.columns
    full_h, full_g = k2.objects.full_mask, k1.objects.full_mask

    def common(mask: int, vectors, full: int) -> int:
        out = full
        for i in bits(mask):
            out &= vectors[i]
        return out

    phi = tuple(
        right.index_of_extent(common(c.extent_mask, rows, full_h)) for c in left.concepts
    )
    psi = tuple(
        left.index_of_extent(common(c.extent_mask, cols, full_g)) for c in right.concepts
    )
    return GaloisConnection(left, right, phi, psi)


def dual_bond_from_galois(gc: GaloisConnection) -> Relation:
    """``{(g, h) | gamma g <= psi(gamma h)}``."""
    k1, k2 = gc.left.context, gc.right.context
    g1, g2 = gc.left.object_concept, gc.right.object_concept
    return Relation.from_predicate(
        k1.objects, k2.objects, lambda g, h: gc.left.leq(g1[g], gc.psi[g2[h]])
    )


def dual_bond_from_proper_T(t: Relation, star: Poset, chain: Poset) -> Relation:
    """Dual bond ``C x S`` attached to a proper merging ``(empty, t)``.

    Row ``i`` is the complement in ``S`` of row ``n+1-i`` of ``t`` (1-based),
    or empty when that row is all of ``S``.
    """
    kc, ks = contraordinal_scale(chain), contraordinal_scale(star)
    _check_cross(t, chain.carrier, star.carrier)
    # with R empty the product and properness conditions are vacuous
    if not is_bond(t, kc, ks):
        raise ValueError("(empty, t) is not a proper merging of the star and the chain")
    full = star.carrier.full_mask
    n = chain.size
    rows = []
    for i in range(n):
        src = t.rows[n - 1 - i]
        rows.append(0 if src == full else full & ~src)
    return Relation(chain.carrier, star.carrier, tuple(rows))


def star_chain_dual_bonds(m: int, n: int) -> list[Relation]:
    kc = contraordinal_scale(make_chain(n))
    ks = contraordinal_scale(make_star(m))
    return list(enumerate_dual_bonds(kc, ks))


def count_galois_connections(m: int, n: int) -> int:
    """Exhaustive count of dual bonds from the ``n``-chain scale to the ``m``-star scale."""
    if m < 0 or n < 0:
        raise ValueError("m and n must be nonnegative")
    return len(star_chain_dual_bonds(m, n))


def build_balloon(m: int) -> ConceptLattice:
    """Concept lattice of the ``m``-star's contraordinal scale."""
    return enumerate_concepts(contraordinal_scale(make_star(m)))
