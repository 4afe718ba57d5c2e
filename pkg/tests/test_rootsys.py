import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from chevalley.rootsys import RootSystemError, build_root_system, embed_A2_triple, neg, parse_system

TYPES = [("A", 2), ("A", 3), ("A", 5), ("B", 2), ("B", 3), ("C", 3), ("D", 4), ("D", 5), ("G", 2), ("F", 4),
         ("E", 6), ("E", 7), ("E", 8)]

ROOT_COUNTS = {"A": lambda l: l * (l + 1), "B": lambda l: 2 * l * l, "C": lambda l: 2 * l * l,
               "D": lambda l: 2 * l * (l - 1), "E": {6: 72, 7: 126, 8: 240}.get, "F": lambda l: 48,
               "G": lambda l: 12}


def positive_roots_from_cartan(C):
    """Root-string closure using only the Cartan matrix: beta + a_i is a root iff q > 0."""
    l = len(C)
    simple = [tuple(int(i == j) for j in range(l)) for i in range(l)]
    roots = set(simple)
    layer = list(simple)
    while layer:
        nxt = []
        for b in layer:
            for i in range(l):
                p = 0
                while tuple(x - (p + 1) * (j == i) for j, x in enumerate(b)) in roots:
                    p += 1
                pairing = sum(b[j] * C[j][i] for j in range(l))  # <beta, a_i^vee>
                if p - pairing > 0:
                    c = tuple(x + (j == i) for j, x in enumerate(b))
                    if c not in roots:
                        roots.add(c)
                        nxt.append(c)
        layer = nxt
    return roots


@pytest.mark.parametrize("fam,l", TYPES)
def test_root_counts(fam, l):
    rs = build_root_system(fam, l)
    assert len(rs.roots) == ROOT_COUNTS[fam](l)
    assert len(rs.positive) * 2 == len(rs.roots)
    cart = np.asarray(rs.cartan_matrix)
    # cartan_matrix[i, j] = <a_i, a_j>; the closure wants C[j][i] = <a_j, a_i^vee> = <a_j, a_i>
    pos = positive_roots_from_cartan(cart.tolist())
    assert pos == {tuple(rs.coefficients(a)) for a in rs.positive}


@pytest.mark.parametrize("fam,l", TYPES[:10])
def test_root_system_axioms(fam, l):
    rs = build_root_system(fam, l)
    roots = set(rs.roots)
    for a in rs.roots:
        assert neg(a) in roots
        assert rs.pairing(a, a) == 2
        assert all(c >= 0 for c in rs.coefficients(a)) or all(c <= 0 for c in rs.coefficients(a))
        for b in rs.roots:
            assert rs.reflect(a, b) in roots
            assert rs.reflect(a, rs.reflect(a, b)) == b
            assert rs.pairing(a, b) * rs.pairing(b, a) in (0, 1, 2, 3, 4)
    lengths = {}
    for a in rs.roots:
        lengths.setdefault(rs.inner(a, a), set()).add(a)
    assert sorted(map(frozenset, lengths.values()), key=len) == sorted(rs.orbits(), key=len)


def test_b2_layout():
    rs = build_root_system("B", 2)
    a, b = rs.simple
    assert rs.is_long(a) and not rs.is_long(b)
    assert {rs.name(r) for r in rs.positive} == {"a1", "a2", "a1+a2", "a1+2*a2"}
    assert rs.pairing(a, b) == -2 and rs.pairing(b, a) == -1
    assert rs.reflect(b, a) == rs.parse_root("a1+2*a2")
    assert embed_A2_triple(rs, b) is None


def test_a2_basics():
    rs = build_root_system("A", 2)
    a1, a2 = rs.simple
    assert rs.pairing(a1, a2) == -1
    assert rs.reflect(a1, a2) == rs.parse_root("a1+a2")
    assert rs.reflect(a1, a1) == neg(a1)
    assert set(embed_A2_triple(rs, rs.parse_root("a1+a2"))) == {a1, a2}


def test_b3_long_root_has_a2_triple():
    rs = build_root_system("B", 3)
    long_root = next(a for a in rs.roots if rs.is_long(a))
    b, c = embed_A2_triple(rs, long_root)
    assert tuple(x + y for x, y in zip(b, c)) == long_root


@pytest.mark.parametrize("fam,l,count", [("A", 2, 2), ("A", 4, 2), ("B", 3, 1), ("D", 4, 6), ("D", 5, 2),
                                         ("E", 6, 2), ("E", 7, 1), ("G", 2, 1)])
def test_diagram_automorphism_counts(fam, l, count):
    rs = build_root_system(fam, l)
    perms = rs.diagram_automorphisms()
    assert len(perms) == count and perms[0] == tuple(range(l))
    for p in perms:
        assert {rs.apply_diagram(p, a) for a in rs.roots} == set(rs.roots)


def test_root_ordering_is_height_first():
    rs = build_root_system("F", 4)
    heights = [rs.height(a) for a in rs.positive]
    assert heights == sorted(heights)


@given(st.sampled_from(TYPES[:10]), st.data())
def test_root_names_round_trip(t, data):
    rs = build_root_system(*t)
    a = data.draw(st.sampled_from(rs.roots))
    assert rs.parse_root(rs.name(a)) == a


def test_invalid_systems():
    for fam, l in [("A", 1), ("D", 3), ("E", 5), ("G", 3), ("H", 3)]:
        with pytest.raises(RootSystemError):
            build_root_system(fam, l)
    with pytest.raises(RootSystemError):
        parse_system("A")
    rs = build_root_system("A", 2)
    with pytest.raises(Exception):
        rs.check_root((1, 1, 1))
