"""Monotone colorings of layered digraphs and two bijections onto mergings.

Antichain/chain mergings correspond to monotone colorings of the complete
bipartite digraph ``K_{m,m}``; star/chain mergings correspond to
order-preserving maps from a chain into the poset ``X + Y +_c Z`` built by
:func:`build_farley_poset`.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .mergings import Merging, is_proper
from .relations import GroundSet, Poset, Relation, make_antichain, make_chain, make_star


@dataclass(frozen=True)
class LayeredDigraph:
    """Complete edges ``V_i x V_{i+1}`` between consecutive layers.

    Layers may be empty (``K_{0,0}`` is the graph for the 0-antichain); an
    empty layer carries no edges, so it separates its neighbours.
    """

    layer_sizes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "layer_sizes", tuple(self.layer_sizes))
        if not self.layer_sizes:
            raise ValueError("a layered digraph needs at least one layer")
        if any(k < 0 for k in self.layer_sizes):
            raise ValueError("layer sizes must be non-negative")

    @classmethod
    def bipartite(cls, m: int) -> LayeredDigraph:
        return cls((m, m))

    @classmethod
    def tripartite(cls, m: int) -> LayeredDigraph:
        """``K_{m+1,1,m}``."""
        return cls((m + 1, 1, m))

    @property
    def vertices(self) -> list[tuple[int, int]]:
        return [(layer, v) for layer, k in enumerate(self.layer_sizes) for v in range(k)]

    @property
    def edges(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        out = []
        for layer in range(len(self.layer_sizes) - 1):
            for u in range(self.layer_sizes[layer]):
                for v in range(self.layer_sizes[layer + 1]):
                    out.append(((layer, u), (layer + 1, v)))
        return out


@dataclass(frozen=True)
class MonotoneColoring:
    graph: LayeredDigraph
    colors: tuple[tuple[int, ...], ...]  # one tuple per layer
    palette: int

    def __post_init__(self):
        colors = tuple(tuple(layer) for layer in self.colors)
        object.__setattr__(self, "colors", colors)
        if tuple(len(layer) for layer in colors) != self.graph.layer_sizes:
            raise ValueError("colors do not match the layer sizes")
        for layer in colors:
            for c in layer:
                if not 1 <= c <= self.palette:
                    raise ValueError(f"color {c} outside 1..{self.palette}")
        for (a, u), (b, v) in self.graph.edges:
            if colors[a][u] > colors[b][v]:
                raise ValueError(f"edge ({a},{u})->({b},{v}) decreases the color")

    def color(self, vertex: tuple[int, int]) -> int:
        layer, v = vertex
        return self.colors[layer][v]

    def to_dict(self) -> list[dict]:
        return [
            {"layer": layer, "vertex": v, "color": c}
            for layer, row in enumerate(self.colors)
            for v, c in enumerate(row)
        ]

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def count_monotone_colorings(g: LayeredDigraph, palette: int) -> int:
    """Layer-by-layer count, tracking the largest color of the previous layer.

    A layer of ``k`` vertices colored from ``[a, palette]`` has
    ``(M-a+1)^k - (M-a)^k`` colorings whose maximum is exactly ``M``.
    """
    if palette < 0:
        raise ValueError("palette must be non-negative")
    states = {1: 1}  # lower bound for the next layer -> count
    for k in g.layer_sizes:
        if k == 0:
            states = {1: sum(states.values())}
            continue
        nxt: dict[int, int] = {}
        for a, cnt in states.items():
            for top in range(a, palette + 1):
                ways = (top - a + 1) ** k - (top - a) ** k
                nxt[top] = nxt.get(top, 0) + cnt * ways
        states = nxt
    return sum(states.values())


def iter_monotone_colorings(g: LayeredDigraph, palette: int):
    """Every monotone coloring, by filtering the full product (small graphs only)."""
    sizes = g.layer_sizes
    total = sum(sizes)
    for flat in itertools.product(range(1, palette + 1), repeat=total):
        layers, pos = [], 0
        for k in sizes:
            layers.append(flat[pos : pos + k])
            pos += k
        if all(layers[a][u] <= layers[b][v] for (a, u), (b, v) in g.edges):
            yield MonotoneColoring(g, tuple(layers), palette)


# -- antichain/chain mergings <-> colorings of K_{m,m} ------------------------


def _ac_shape(y: Merging) -> tuple[int, int]:
    m, n = y.p.size, y.q.size
    if y.p != make_antichain(m) or y.q != make_chain(n):
        raise ValueError("expected a merging of make_antichain(m) and make_chain(n)")
    if not is_proper(y):
        raise ValueError("expected a proper merging")
    return m, n


def coloring_from_merging(y: Merging) -> MonotoneColoring:
    """Color ``a_i`` in the first layer by the longest suffix of the chain above it,
    and ``a_j`` in the second layer by the longest prefix below it.

    A row ``a_i^R = {c_k, ..., c_n}`` gives color ``n+2-k`` (``1`` when empty);
    a column ``a_j^T = {c_1, ..., c_p}`` gives color ``n+1-p``.
    """
    m, n = _ac_shape(y)
    first = []
    for row in y.r.rows:
        k1 = (row & -row).bit_length() if row else n + 1
        first.append(n + 2 - k1)
    second = [n + 1 - col.bit_length() for col in y.t.columns]
    return MonotoneColoring(LayeredDigraph.bipartite(m), (tuple(first), tuple(second)), n + 1)


def merging_from_coloring(c: MonotoneColoring, n: int) -> Merging:
    """Inverse of :func:`coloring_from_merging`."""
    m = c.graph.layer_sizes[0]
    if c.graph != LayeredDigraph.bipartite(m):
        raise ValueError("expected a coloring of K_{m,m}")
    if c.palette > n + 1:
        raise ValueError(f"palette {c.palette} exceeds n+1 = {n + 1}")
    a, ch = make_antichain(m), make_chain(n)
    full = ch.carrier.full_mask
    r_rows = tuple(full & ~((1 << (n + 1 - col)) - 1) for col in c.colors[0])
    t_cols = [(1 << (n + 1 - col)) - 1 for col in c.colors[1]]
    t_rows = tuple(
        sum(1 << j for j in range(m) if t_cols[j] >> i & 1) for i in range(n)
    )
    y = Merging(a, ch, Relation(a.carrier, ch.carrier, r_rows), Relation(ch.carrier, a.carrier, t_rows))
    if not is_proper(y):
        raise ValueError("coloring does not correspond to a proper merging")
    return y


# -- Farley's chain maps ------------------------------------------------------


@dataclass(frozen=True)
class FarleyElement:
    """``x``, a subset of ``{0..m}`` in ``Y`` or a subset of ``{1..m}`` in ``Z``.

    The full set of ``Y`` is identified with the empty set of ``Z`` and is
    represented only by the latter.
    """

    part: str  # "X", "Y" or "Z"
    subset: frozenset[int] = frozenset()

    @property
    def label(self) -> str:
        if self.part == "X":
            return "x"
        return f"{self.part}{{{','.join(map(str, sorted(self.subset)))}}}"

    @property
    def rank(self) -> int:
        return "XYZ".index(self.part)

    def __le__(self, other: FarleyElement) -> bool:
        if self.rank != other.rank:
            return self.rank < other.rank
        return self.subset <= other.subset


def farley_elements(m: int) -> tuple[FarleyElement, ...]:
    if m < 0:
        raise ValueError("m must be non-negative")

    def subsets(ground):
        return [
            frozenset(c) for k in range(len(ground) + 1) for c in itertools.combinations(ground, k)
        ]

    y_full = frozenset(range(m + 1))
    els = [FarleyElement("X")]
    els += [FarleyElement("Y", s) for s in subsets(range(m + 1)) if s != y_full]
    els += [FarleyElement("Z", s) for s in subsets(range(1, m + 1))]
    return tuple(els)


def build_farley_poset(m: int) -> Poset:
    """``X + Y +_c Z``: a point, below the subsets of ``{0..m}``, glued to the subsets of ``{1..m}``."""
    els = farley_elements(m)
    carrier = GroundSet(tuple(e.label for e in els))
    return Poset(carrier, Relation.from_predicate(carrier, carrier, lambda i, j: els[i] <= els[j]))


@dataclass(frozen=True)
class FarleyChainMap:
    m: int
    images: tuple[FarleyElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        valid = set(farley_elements(self.m))
        for d in self.images:
            if d not in valid:
                raise ValueError(f"{d.label} is not an element for m={self.m}")
        for a, b in zip(self.images, self.images[1:]):
            if not a <= b:
                raise ValueError(f"map is not order-preserving at {a.label} -> {b.label}")

    @property
    def n(self) -> int:
        return len(self.images)


def enumerate_farley_chain_maps(m: int, n: int) -> list[FarleyChainMap]:
    """All order-preserving maps from the ``n``-chain, i.e. multichains of length ``n``."""
    els = farley_elements(m)
    above = {e: [f for f in els if e <= f] for e in els}

    def grow(prefix):
        if len(prefix) == n:
            yield prefix
            return
        for f in above[prefix[-1]] if prefix else els:
            yield from grow(prefix + (f,))

    return [FarleyChainMap(m, images) for images in grow(())]


def farley_map(z: FarleyChainMap) -> Merging:
    """The star/chain merging assigned to a chain map, case by case on ``d_i``."""
    m, n = z.m, z.n
    s, ch = make_star(m), make_chain(n)
    arms = s.carrier.full_mask & ~1
    r_cols = [0] * n
    t_rows = [0] * n
    for i, d in enumerate(z.images):
        if d.part == "X":
            t_rows[i] = s.carrier.full_mask
        elif d.part == "Y":
            if 0 in d.subset:
                r_cols[i] = 1
            t_rows[i] = arms & ~sum(1 << j for j in d.subset)
        else:
            r_cols[i] = 1 | sum(1 << j for j in d.subset)
    r_rows = tuple(sum(1 << i for i in range(n) if r_cols[i] >> x & 1) for x in range(m + 1))
    return Merging(s, ch, Relation(s.carrier, ch.carrier, r_rows), Relation(ch.carrier, s.carrier, tuple(t_rows)))
