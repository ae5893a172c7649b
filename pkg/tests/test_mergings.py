from __future__ import annotations

import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import (
    antichain_le,
    brute_mergings,
    chain_le,
    merged_is_quasi_order,
    poset_from_pairs,
    posets_up_to_iso,
    rows_of,
    star_le,
)
from starmerge.formulas import F_V1, F_V2, F_sc, class_triples, fiber_size
from starmerge.mergings import (
    MAX_CELLS,
    Merging,
    SizeGuardError,
    antichain_chain_lattice,
    bottom_merging,
    classify,
    enumerate_proper_mergings,
    eta,
    fiber,
    fibers,
    induced_order,
    is_merging,
    is_proper,
    lattice_join,
    lattice_meet,
    star_chain_lattice,
    top_merging,
    xi,
)
from starmerge.relations import (
    GroundSet,
    Relation,
    is_partial_order,
    is_quasi_order,
    make_antichain,
    make_chain,
    make_star,
)

S4, C4 = make_star(4), make_chain(4)


def four_star_example() -> Merging:
    r = Relation.from_labels(
        S4.carrier, C4.carrier,
        [("s0", "c2"), ("s0", "c3"), ("s0", "c4"), ("s1", "c4"), ("s2", "c3"), ("s2", "c4")],
    )
    t = Relation.from_labels(C4.carrier, S4.carrier, [("c1", s) for s in S4.carrier.labels])
    return Merging(S4, C4, r, t)


def as_rows(x: Merging):
    return rows_of(x.r), rows_of(x.t)


# -- validity -------------------------------------------------------------------


def test_bottom_and_top_are_mergings():
    s, c = make_star(2), make_chain(2)
    bot = (Relation.empty(s.carrier, c.carrier), Relation.full(c.carrier, s.carrier))
    top = (Relation.full(s.carrier, c.carrier), Relation.empty(c.carrier, s.carrier))
    assert is_merging(*bot, s, c) and is_merging(*top, s, c)
    lat = star_chain_lattice(2, 2)
    assert lat.elements[lat.bottom] == bottom_merging(s, c)
    assert all(lat.leq(lat.bottom, i) and lat.leq(i, lat.top) for i in range(len(lat)))


def test_four_star_example_is_proper_merging():
    x = four_star_example()
    assert is_proper(x)
    order = induced_order(x)
    assert is_partial_order(order)


def test_four_star_example_eta_and_xi():
    x = four_star_example()
    y = eta(x)
    assert [sorted(y.r.label_pairs())] == [[("a1", "c4"), ("a2", "c3"), ("a2", "c4")]]
    assert sorted(y.t.label_pairs()) == [("c1", f"a{i}") for i in range(1, 5)]
    back = xi(y)
    assert sorted(p for p in back.r.label_pairs() if p[0] == "s0") == [("s0", "c3"), ("s0", "c4")]
    assert eta(back) == y


def test_improper_merging():
    a, c = make_antichain(1), make_chain(1)
    x = Merging(a, c, Relation.full(a.carrier, c.carrier), Relation.full(c.carrier, a.carrier))
    assert not is_proper(x)
    order = induced_order(x)
    assert is_quasi_order(order) and not order.is_antisymmetric()


def test_overlapping_carriers_rejected():
    c = make_chain(2)
    with pytest.raises(ValueError):
        is_merging(Relation.empty(c.carrier, c.carrier), Relation.empty(c.carrier, c.carrier), c, c)


def test_construction_validates():
    s, c = make_star(1), make_chain(2)
    r = Relation.from_labels(s.carrier, c.carrier, [("s1", "c1")])  # c2 must follow
    with pytest.raises(ValueError):
        Merging(s, c, r, Relation.empty(c.carrier, s.carrier))


def test_bottom_induced_order_puts_chain_under_star():
    s, c = make_star(2), make_chain(2)
    order = induced_order(bottom_merging(s, c))
    # every chain element lies below every star element
    for j in range(c.size):
        for i in range(s.size):
            assert (s.size + j, i) in order
            assert (i, s.size + j) not in order


def _all_small_poset_pairs(max_cells):
    reps = {n: posets_up_to_iso(n) for n in range(1, 4)}
    for np_, nq in itertools.product(range(1, 4), repeat=2):
        if np_ * nq > max_cells:
            continue
        for pp, qq in itertools.product(reps[np_], reps[nq]):
            yield np_, nq, pp, qq


def _check_equivalence(np_, nq, pp, qq):
    p = poset_from_pairs(pp, np_, "p")
    q = poset_from_pairs(qq, nq, "q")
    for rmask in range(1 << (np_ * nq)):
        r_rows = tuple((rmask >> (nq * i)) & ((1 << nq) - 1) for i in range(np_))
        r = Relation(p.carrier, q.carrier, r_rows)
        r_sets = [{j for j in range(nq) if row >> j & 1} for row in r_rows]
        for tmask in range(1 << (np_ * nq)):
            t_rows = tuple((tmask >> (np_ * j)) & ((1 << np_) - 1) for j in range(nq))
            t = Relation(q.carrier, p.carrier, t_rows)
            t_sets = [{i for i in range(np_) if row >> i & 1} for row in t_rows]
            expect = merged_is_quasi_order(
                lambda a, b: (a, b) in pp, lambda a, b: (a, b) in qq, np_, nq, r_sets, t_sets
            )
            assert is_merging(r, t, p, q) == expect, (pp, qq, r_rows, t_rows)


@pytest.mark.parametrize("np_,nq,pp,qq", list(_all_small_poset_pairs(6)))
def test_merging_iff_quasi_order(np_, nq, pp, qq):
    _check_equivalence(np_, nq, pp, qq)


# -- enumeration ------------------------------------------------------------------


@pytest.mark.parametrize(
    "m,n,size", [(3, 1, 24), (2, 1, 12), (2, 2, 68), (4, 0, 1), (0, 0, 1), (0, 3, 10)]
)
def test_star_chain_counts(m, n, size):
    assert len(star_chain_lattice(m, n)) == size


@pytest.mark.parametrize("m,n", [(1, 1), (2, 1), (3, 1), (1, 2), (2, 2), (0, 2), (1, 0)])
def test_enumeration_matches_brute_force(m, n):
    sc = {as_rows(x) for x in star_chain_lattice(m, n)}
    assert sc == brute_mergings(star_le, chain_le, m + 1, n)
    ac = {as_rows(y) for y in antichain_chain_lattice(m, n)}
    assert ac == brute_mergings(antichain_le, chain_le, m, n)


def test_enumeration_order_is_canonical():
    lat = star_chain_lattice(2, 2)
    keys = [x.key for x in lat]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)
    again = enumerate_proper_mergings(make_star(2), make_chain(2))
    assert [x.key for x in again] == keys


def test_size_guard():
    with pytest.raises(SizeGuardError, match="limit"):
        enumerate_proper_mergings(make_star(4), make_chain(5))
    assert MAX_CELLS == 20


# -- lattice operations -------------------------------------------------------------


def test_join_meet_units_and_idempotence():
    lat = star_chain_lattice(2, 1)
    bot, top = lat.elements[lat.bottom], lat.elements[lat.top]
    assert bot == bottom_merging(lat.p, lat.q) and top == top_merging(lat.p, lat.q)
    for x in lat:
        assert lattice_join(x, x) == x
        assert lattice_join(bot, x) == x
        assert lattice_meet(top, x) == x


def test_distributive_on_sc21():
    lat = star_chain_lattice(2, 1)
    for x, y, z in itertools.product(lat, repeat=3):
        assert lattice_meet(x, lattice_join(y, z)) == lattice_join(lattice_meet(x, y), lattice_meet(x, z))


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_join_is_least_upper_bound(data):
    lat = star_chain_lattice(2, 2)
    i = data.draw(st.integers(0, len(lat) - 1))
    j = data.draw(st.integers(0, len(lat) - 1))
    k = lat.join(i, j)
    assert lat.leq(i, k) and lat.leq(j, k)
    uppers = [u for u in range(len(lat)) if lat.leq(i, u) and lat.leq(j, u)]
    assert all(lat.leq(k, u) for u in uppers)
    w = lat.meet(i, j)
    lowers = [u for u in range(len(lat)) if lat.leq(u, i) and lat.leq(u, j)]
    assert all(lat.leq(u, w) for u in lowers)


def test_mixed_pairs_rejected():
    a = star_chain_lattice(1, 1).elements[0]
    b = star_chain_lattice(2, 1).elements[0]
    with pytest.raises(ValueError):
        lattice_join(a, b)


# -- eta, xi and fibers -------------------------------------------------------------


def test_eta_of_bottom():
    lat = star_chain_lattice(3, 1)
    ac = antichain_chain_lattice(3, 1)
    assert eta(lat.elements[lat.bottom]) == ac.elements[ac.bottom]


def test_xi_of_empty_r():
    a, c = make_antichain(2), make_chain(2)
    t = Relation.from_labels(c.carrier, a.carrier, [("c1", "a1"), ("c1", "a2")])
    x = xi(Merging(a, c, Relation.empty(a.carrier, c.carrier), t))
    assert not any(x.r.rows)
    assert all(not row & 1 for row in x.t.rows)


def test_xi_injective_and_section():
    ac = antichain_chain_lattice(3, 1)
    images = [xi(y) for y in ac]
    assert len(ac) == 15 and len({x.key for x in images}) == 15
    sc = star_chain_lattice(3, 1)
    assert all(x in sc for x in images)
    assert all(eta(xi(y)) == y for y in ac)


def eta_index_map(m, n):
    sc, ac = star_chain_lattice(m, n), antichain_chain_lattice(m, n)
    return sc, ac, [ac.index(eta(x)) for x in sc]


@pytest.mark.parametrize("m,n", [(m, n) for m in range(1, 4) for n in range(3)])
def test_eta_homomorphism(m, n):
    sc, ac, h = eta_index_map(m, n)
    assert set(h) == set(range(len(ac)))
    for i, j in itertools.product(range(len(sc)), repeat=2):
        assert h[sc.join(i, j)] == ac.join(h[i], h[j])
        assert h[sc.meet(i, j)] == ac.meet(h[i], h[j])


def test_eta_homomorphism_on_merging_values():
    sc = star_chain_lattice(2, 1)
    for x, y in itertools.product(sc, repeat=2):
        assert eta(lattice_join(x, y)) == lattice_join(eta(x), eta(y))
        assert eta(lattice_meet(x, y)) == lattice_meet(eta(x), eta(y))


def test_lattice_index_ops_agree_with_values():
    sc = star_chain_lattice(2, 2)
    for i, j in itertools.product(range(0, len(sc), 5), repeat=2):
        x, y = sc.elements[i], sc.elements[j]
        assert sc.elements[sc.join(i, j)] == lattice_join(x, y)
        assert sc.elements[sc.meet(i, j)] == lattice_meet(x, y)


@pytest.mark.parametrize("m,n", [(m, n) for m in range(1, 4) for n in range(4)])
def test_fibers_are_intervals_of_predicted_size(m, n):
    sc = star_chain_lattice(m, n)
    ac = antichain_chain_lattice(m, n)
    groups = fibers(sc)
    assert sorted(i for g in groups.values() for i in g) == list(range(len(sc)))
    for y in ac:
        members = groups[y.key]
        assert sc.is_interval(members)
        cls = classify(y)
        assert len(members) == fiber_size(cls.k1, cls.l)
    assert sum(len(g) for g in groups.values()) == len(sc) == F_sc(m, n)


def test_fiber_function():
    sc = star_chain_lattice(3, 1)
    ac = antichain_chain_lattice(3, 1)
    bottom = ac.elements[ac.bottom]
    assert classify(bottom).as_tuple() == (2, 1, 1)
    assert len(fiber(bottom, sc)) == 3
    top = ac.elements[ac.top]
    assert classify(top).as_tuple() == (1, 0, 0)
    assert len(fiber(top, sc)) == 1


@pytest.mark.parametrize("n", range(4))
def test_zero_arm_fiber_is_everything(n):
    # with no arms the single antichain merging has no a_i to bound s0, so
    # its fiber is all of SC(0, n) rather than k1 (l+1) - C(l+1, 2) elements
    sc = star_chain_lattice(0, n)
    (y,) = antichain_chain_lattice(0, n).elements
    assert classify(y).as_tuple() == (n + 1, 0, 0)
    assert len(fiber(y, sc)) == len(sc) == (n + 1) * (n + 2) // 2


# -- classification -------------------------------------------------------------------


@pytest.mark.parametrize("n", range(4))
def test_classify_extremes(n):
    ac = antichain_chain_lattice(2, n)
    assert classify(ac.elements[ac.bottom]).as_tuple() == (n + 1, n, n)
    assert classify(ac.elements[ac.top]).as_tuple() == (1, 0, 0)


def test_classify_trivial_merging():
    a, c = make_antichain(2), make_chain(0)
    y = Merging(a, c, Relation.empty(a.carrier, c.carrier), Relation.empty(c.carrier, a.carrier))
    assert classify(y).as_tuple() == (1, 0, 0)


@pytest.mark.parametrize("m,n", [(m, n) for m in range(1, 4) for n in range(4)])
def test_class_sizes_match_product(m, n):
    counts: dict = {}
    for y in antichain_chain_lattice(m, n):
        t = classify(y).as_tuple()
        counts[t] = counts.get(t, 0) + 1
    for t in class_triples(n):
        k1, k2, l = t  # noqa: E741
        assert counts.get(t, 0) == F_V1(m, n, k1) * F_V2(m, k2, l)
    assert sum(counts.values()) == len(antichain_chain_lattice(m, n))


# -- exports ----------------------------------------------------------------------------


def test_json_and_dot_exports():
    x = four_star_example()
    payload = json.loads(x.to_json())
    assert ["s1", "c4"] in payload["R"] and ["c1", "s0"] in payload["T"]
    dot = x.to_dot()
    assert dot.count("->") == len(induced_order(x).pairs()) - len(
        [p for p in induced_order(x).pairs() if p[0] == p[1]]
    ) - _non_cover_count(x)
    lat = star_chain_lattice(3, 1)
    text = lat.to_dot(clusters=[[0, 1]])
    assert "subgraph cluster_0" in text and text.count("->") == len(lat.covers())


def _non_cover_count(x: Merging) -> int:
    order = induced_order(x)
    strict = [(a, b) for a, b in order.pairs() if a != b]
    covers = {
        (a, b) for a, b in strict
        if not any((a, c) in order and (c, b) in order for c in range(order.domain.size) if c not in (a, b))
    }
    return len(strict) - len(covers)


def test_empty_ground_sets_allowed():
    s, c = make_star(2), make_chain(0)
    lat = star_chain_lattice(2, 0)
    (only,) = lat.elements
    assert only.r == Relation.empty(s.carrier, c.carrier)
    assert only.t == Relation(c.carrier, s.carrier, ())
    assert GroundSet(()).size == 0
