"""Finite binary relations stored as rows of bitmasks.

A :class:`Relation` between two :class:`GroundSet` objects keeps one integer
per domain element; bit ``j`` of row ``i`` is set iff ``(i, j)`` is in the
relation.  Everything here is immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def bits(mask: int) -> Iterator[int]:
    """Yield the set bit positions of ``mask`` in ascending order."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def to_mask(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


@dataclass(frozen=True)
class GroundSet:
    """An ordered, duplicate-free list of element labels."""

    labels: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"duplicate labels in ground set: {self.labels}")

    @classmethod
    def indexed(cls, prefix: str, start: int, stop: int) -> GroundSet:
        """Labels ``prefix+start`` ... ``prefix+(stop-1)``."""
        return cls(tuple(f"{prefix}{i}" for i in range(start, stop)))

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.labels)) - 1

    @cached_property
    def labels_set(self) -> frozenset[str]:
        return frozenset(self.labels)

    @cached_property
    def _positions(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def index(self, label: str) -> int:
        try:
            return self._positions[label]
        except KeyError:
            raise KeyError(f"{label!r} is not in the ground set") from None

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self._positions

    def __add__(self, other: GroundSet) -> GroundSet:
        """Disjoint union, ``self`` first."""
        return GroundSet(self.labels + other.labels)

    def subset(self, indices: Sequence[int]) -> GroundSet:
        return GroundSet(tuple(self.labels[i] for i in indices))


@dataclass(frozen=True)
class Relation:
    """A relation ``domain x codomain`` as one codomain bitmask per domain row."""

    domain: GroundSet
    codomain: GroundSet
    rows: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(self.rows))
        if len(self.rows) != self.domain.size:
            raise ValueError(
                f"relation has {len(self.rows)} rows but domain has {self.domain.size} elements"
            )
        limit = self.codomain.full_mask
        for row in self.rows:
            if row < 0 or row & ~limit:
                raise ValueError("row mask exceeds codomain size")

    # -- construction -------------------------------------------------

    @classmethod
    def empty(cls, domain: GroundSet, codomain: GroundSet) -> Relation:
        return cls(domain, codomain, (0,) * domain.size)

    @classmethod
    def full(cls, domain: GroundSet, codomain: GroundSet) -> Relation:
        return cls(domain, codomain, (codomain.full_mask,) * domain.size)

    @classmethod
    def identity(cls, carrier: GroundSet) -> Relation:
        return cls(carrier, carrier, tuple(1 << i for i in range(carrier.size)))

    @classmethod
    def from_pairs(
        cls, domain: GroundSet, codomain: GroundSet, pairs: Iterable[tuple[int, int]]
    ) -> Relation:
        rows = [0] * domain.size
        for i, j in pairs:
            if not (0 <= i < domain.size and 0 <= j < codomain.size):
                raise IndexError(f"pair {(i, j)} out of range")
            rows[i] |= 1 << j
        return cls(domain, codomain, tuple(rows))

    @classmethod
    def from_labels(
        cls, domain: GroundSet, codomain: GroundSet, pairs: Iterable[tuple[str, str]]
    ) -> Relation:
        return cls.from_pairs(
            domain, codomain, ((domain.index(a), codomain.index(b)) for a, b in pairs)
        )

    @classmethod
    def from_predicate(cls, domain: GroundSet, codomain: GroundSet, pred) -> Relation:
        """Build from ``pred(i, j) -> bool`` over indices."""
        return cls(
            domain,
            codomain,
            tuple(
                to_mask(j for j in range(codomain.size) if pred(i, j))
                for i in range(domain.size)
            ),
        )

    # -- inspection ---------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.domain.size, self.codomain.size

    @property
    def is_endo(self) -> bool:
        return self.domain == self.codomain

    def __contains__(self, pair: tuple[int, int]) -> bool:
        i, j = pair
        return bool(self.rows[i] >> j & 1)

    def __len__(self) -> int:
        return sum(popcount(r) for r in self.rows)

    def pairs(self) -> list[tuple[int, int]]:
        """All pairs in row-major order."""
        return [(i, j) for i, row in enumerate(self.rows) for j in bits(row)]

    def label_pairs(self) -> list[tuple[str, str]]:
        d, c = self.domain.labels, self.codomain.labels
        return [(d[i], c[j]) for i, j in self.pairs()]

    def row(self, i: int) -> int:
        return self.rows[i]

    @cached_property
    def columns(self) -> tuple[int, ...]:
        """Column bitmasks over the domain, one per codomain element."""
        cols = [0] * self.codomain.size
        for i, row in enumerate(self.rows):
            for j in bits(row):
                cols[j] |= 1 << i
        return tuple(cols)

    def column(self, j: int) -> int:
        return self.columns[j]

    def matrix(self) -> list[list[bool]]:
        return [[bool(row >> j & 1) for j in range(self.codomain.size)] for row in self.rows]

    # -- algebra ------------------------------------------------------

    def _check_same_shape(self, other: Relation) -> None:
        if not (self.domain is other.domain or self.domain == other.domain) or not (
            self.codomain is other.codomain or self.codomain == other.codomain
        ):
            raise ValueError("relations live on different ground sets")

    def __or__(self, other: Relation) -> Relation:
        self._check_same_shape(other)
        return Relation(self.domain, self.codomain, tuple(a | b for a, b in zip(self.rows, other.rows)))

    def __and__(self, other: Relation) -> Relation:
        self._check_same_shape(other)
        return Relation(self.domain, self.codomain, tuple(a & b for a, b in zip(self.rows, other.rows)))

    def __sub__(self, other: Relation) -> Relation:
        self._check_same_shape(other)
        return Relation(self.domain, self.codomain, tuple(a & ~b for a, b in zip(self.rows, other.rows)))

    def __le__(self, other: Relation) -> bool:
        self._check_same_shape(other)
        return all(a & ~b == 0 for a, b in zip(self.rows, other.rows))

    def __ge__(self, other: Relation) -> bool:
        return other <= self

    def complement(self) -> Relation:
        full = self.codomain.full_mask
        return Relation(self.domain, self.codomain, tuple(full & ~r for r in self.rows))

    def inverse(self) -> Relation:
        return Relation(self.codomain, self.domain, self.columns)

    def compose(self, other: Relation) -> Relation:
        return relational_product(self, other)

    def restrict(self, rows: Sequence[int], cols: Sequence[int]) -> Relation:
        """Sub-relation on the given domain and codomain indices (in that order)."""
        new_rows = []
        for i in rows:
            row = self.rows[i]
            new_rows.append(to_mask(k for k, j in enumerate(cols) if row >> j & 1))
        return Relation(self.domain.subset(rows), self.codomain.subset(cols), tuple(new_rows))

    def transitive_closure(self) -> Relation:
        if not self.is_endo:
            raise ValueError("transitive closure needs an endorelation")
        rows = list(self.rows)
        n = len(rows)
        # Warshall on bit rows
        for k in range(n):
            bit = 1 << k
            rk = rows[k]
            for i in range(n):
                if rows[i] & bit:
                    rows[i] |= rk
        return Relation(self.domain, self.codomain, tuple(rows))

    def reflexive_closure(self) -> Relation:
        return self | Relation.identity(self.domain)

    # -- order axioms -------------------------------------------------

    def _require_endo(self) -> None:
        if not self.is_endo:
            raise ValueError(f"expected an endorelation, got shape {self.shape}")

    def is_reflexive(self) -> bool:
        self._require_endo()
        return all(row >> i & 1 for i, row in enumerate(self.rows))

    def is_transitive(self) -> bool:
        self._require_endo()
        rows = self.rows
        for row in rows:
            reach = 0
            for j in bits(row):
                reach |= rows[j]
            if reach & ~row:
                return False
        return True

    def is_antisymmetric(self) -> bool:
        self._require_endo()
        cols = self.columns
        return all(
            (row & cols[i]) & ~(1 << i) == 0 for i, row in enumerate(self.rows)
        )

    # -- canonical form -----------------------------------------------

    @cached_property
    def packed_bits(self) -> bytes:
        """Row-major cell bits, MSB first, zero padded to whole bytes."""
        ncols = self.codomain.size
        out = bytearray()
        acc = 0
        nbits = 0
        for row in self.rows:
            for j in range(ncols):
                acc = (acc << 1) | (row >> j & 1)
                nbits += 1
                if nbits == 8:
                    out.append(acc)
                    acc = nbits = 0
        if nbits:
            out.append(acc << (8 - nbits))
        return bytes(out)

    def to_bytes(self) -> bytes:
        """Canonical encoding: ground-set labels followed by packed cells."""
        header = "\x1f".join(self.domain.labels) + "\x1e" + "\x1f".join(self.codomain.labels) + "\x1e"
        shape = self.shape[0].to_bytes(4, "big") + self.shape[1].to_bytes(4, "big")
        return shape + header.encode("utf-8") + self.packed_bits

    def __repr__(self) -> str:
        return f"Relation({self.domain.size}x{self.codomain.size}, {self.label_pairs()})"


def relational_product(r: Relation, s: Relation) -> Relation:
    """``(a, c)`` is in the result iff some ``b`` has ``(a, b) in r`` and ``(b, c) in s``."""
    if r.codomain != s.domain:
        raise ValueError(
            f"cannot compose {r.shape} with {s.shape}: middle ground sets differ"
        )
    srows = s.rows
    out = []
    for row in r.rows:
        acc = 0
        for b in bits(row):
            acc |= srows[b]
        out.append(acc)
    return Relation(r.domain, s.codomain, tuple(out))


def is_quasi_order(r: Relation) -> bool:
    return r.is_reflexive() and r.is_transitive()


def is_partial_order(r: Relation) -> bool:
    return is_quasi_order(r) and r.is_antisymmetric()


@dataclass(frozen=True)
class Poset:
    """A finite poset; the order is checked on construction."""

    carrier: GroundSet
    order: Relation

    def __post_init__(self):
        if self.order.domain != self.carrier or self.order.codomain != self.carrier:
            raise ValueError("order must be an endorelation on the carrier")
        if not is_partial_order(self.order):
            raise ValueError("order is not a partial order")

    def __hash__(self) -> int:
        # posets key the scale cache, so the hash is computed once
        cached = self.__dict__.get("_hash")
        if cached is None:
            cached = hash((self.carrier, self.order))
            object.__setattr__(self, "_hash", cached)
        return cached

    @property
    def size(self) -> int:
        return self.carrier.size

    def le(self, i: int, j: int) -> bool:
        return (i, j) in self.order

    def up(self, i: int) -> int:
        """Bitmask of elements above ``i``, including ``i``."""
        return self.order.rows[i]

    def down(self, i: int) -> int:
        return self.order.columns[i]

    def covers(self) -> list[tuple[int, int]]:
        return hasse_edges(self.order)


def hasse_edges(order: Relation) -> list[tuple[int, int]]:
    """Covering pairs ``(i, j)`` of a partial order (its transitive reduction)."""
    rows = order.rows
    edges = []
    for i, row in enumerate(rows):
        strict = row & ~(1 << i)
        for j in bits(strict):
            between = strict & order.columns[j] & ~(1 << j)
            if not between:
                edges.append((i, j))
    return edges


@lru_cache(maxsize=None)
def make_chain(n: int, prefix: str = "c") -> Poset:
    """Chain ``c1 < c2 < ... < cn``."""
    if n < 0:
        raise ValueError("chain length must be nonnegative")
    carrier = GroundSet.indexed(prefix, 1, n + 1)
    order = Relation.from_predicate(carrier, carrier, lambda i, j: i <= j)
    return Poset(carrier, order)


@lru_cache(maxsize=None)
def make_antichain(m: int, prefix: str = "a") -> Poset:
    if m < 0:
        raise ValueError("antichain size must be nonnegative")
    carrier = GroundSet.indexed(prefix, 1, m + 1)
    return Poset(carrier, Relation.identity(carrier))


@lru_cache(maxsize=None)
def make_star(m: int, prefix: str = "s") -> Poset:
    """``m``-antichain ``s1..sm`` with a least element ``s0`` at index 0."""
    if m < 0:
        raise ValueError("star size must be nonnegative")
    carrier = GroundSet.indexed(prefix, 0, m + 1)
    order = Relation.from_predicate(carrier, carrier, lambda i, j: i == j or i == 0)
    return Poset(carrier, order)


# -- cross-table text format ---------------------------------------------


def write_cross_table(rel: Relation) -> str:
    """Burmeister-style ``.cxt`` text for a relation read as a context."""
    lines = ["B", "", str(rel.domain.size), str(rel.codomain.size), ""]
    lines.extend(rel.domain.labels)
    lines.extend(rel.codomain.labels)
    for row in rel.rows:
        lines.append("".join("X" if row >> j & 1 else "." for j in range(rel.codomain.size)))
    return "\n".join(lines) + "\n"


def read_cross_table(text: str) -> Relation:
    """Parse the output of :func:`write_cross_table` (or a standard ``.cxt`` file)."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != "B":
        raise ValueError("cross table must start with a 'B' line")
    pos = 1
    # optional name line, then blank lines before the counts
    while pos < len(lines) and not lines[pos].strip().isdigit():
        pos += 1
    try:
        n_obj = int(lines[pos])
        n_attr = int(lines[pos + 1])
    except (IndexError, ValueError):
        raise ValueError("missing object/attribute counts") from None
    pos += 2
    while pos < len(lines) and not lines[pos].strip():
        pos += 1
    body = lines[pos:]
    if len(body) < n_obj + n_attr + n_obj:
        raise ValueError("cross table is truncated")
    objects = GroundSet(tuple(s.strip() for s in body[:n_obj]))
    attributes = GroundSet(tuple(s.strip() for s in body[n_obj : n_obj + n_attr]))
    rows = []
    for line in body[n_obj + n_attr : n_obj + n_attr + n_obj]:
        cells = line.strip()
        if len(cells) != n_attr or set(cells) - {"X", "x", "."}:
            raise ValueError(f"bad cross-table row {line!r}")
        rows.append(to_mask(j for j, ch in enumerate(cells) if ch in "Xx"))
    return Relation(objects, attributes, tuple(rows))
