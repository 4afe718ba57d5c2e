from fractions import Fraction
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chevalley import matrices as mx
from chevalley.groupcore import (GroupContext, TorusCharacter, commutator_constants, elementary_group,
                                 full_group, product_order, verify_relations, verify_torus_conjugation,
                                 weyl_quotient_order)
from chevalley.reps import get_representation
from chevalley.rings import RingError, parse_ring
from chevalley.rootsys import build_root_system


def context(fam, l, tag, ring):
    return GroupContext(get_representation(build_root_system(fam, l), tag), parse_ring(ring))


def _add(*roots):
    return tuple(sum(xs) for xs in zip(*roots))


def _scale(k, a):
    return tuple(k * x for x in a)


def _string_product(B, a, b, i):
    p = Fraction(1)
    for k in range(i):
        p *= B.N(a, _add(_scale(k, a), b))
    return p / factorial(i)


def closed_form_constants(B, rs, a, b):
    """C_ij for x_b(u)^-1 x_a(t)^-1 x_b(u) x_a(t) = prod x_{ia+jb}(C_ij (-t)^i u^j)."""
    out = {}
    for i in range(1, 4):
        if _add(_scale(i, a), b) in rs.index:
            out[(i, 1)] = _string_product(B, a, b, i)
    for j in range(2, 4):
        if _add(a, _scale(j, b)) in rs.index:
            out[(1, j)] = (-1) ** j * _string_product(B, b, a, j)
    if _add(_scale(3, a), _scale(2, b)) in rs.index:
        out[(3, 2)] = _string_product(B, _add(a, b), a, 2) / 3
    if _add(_scale(2, a), _scale(3, b)) in rs.index:
        out[(2, 3)] = -2 * _string_product(B, _add(b, a), b, 2) / 3
    return out


@pytest.mark.parametrize("fam,l", [("A", 2), ("B", 2), ("C", 2), ("G", 2), ("A", 3), ("B", 3), ("C", 3)])
def test_commutator_constants_agree_with_closed_formulas(fam, l):
    rs = build_root_system(fam, l)
    rep = get_representation(rs, "adjoint")
    for a in rs.roots:
        for b in rs.roots:
            if a == b or _add(a, b) == _scale(0, a) or _add(a, b) not in rs.index:
                continue
            ours = commutator_constants(rep, a, b)
            # our [x_a(t), x_b(u)] is the closed formula's commutator with the roles of a and b swapped
            expected = {(j, i): (-1) ** j * v for (i, j), v in closed_form_constants(rep.basis, rs, b, a).items()}
            assert ours == expected


def test_constants_do_not_depend_on_representation():
    rs = build_root_system("C", 2)
    a, b = rs.simple
    assert commutator_constants(get_representation(rs, "universal"), a, b) == \
        commutator_constants(get_representation(rs, "adjoint"), a, b)


def test_b2_and_g2_constant_tables():
    rs = build_root_system("B", 2)
    rep = get_representation(rs, "adjoint")
    a, b = rs.simple
    assert commutator_constants(rep, a, b) == {(1, 1): 1, (1, 2): 1}
    assert commutator_constants(rep, _add(a, b), b) == {(1, 1): -2}
    g2 = build_root_system("G", 2)
    assert commutator_constants(get_representation(g2, "adjoint"), *g2.simple) == \
        {(1, 1): 1, (2, 1): 1, (3, 1): 1, (3, 2): 2}
    assert [(i, j) for i, j, _ in product_order(rep, a, b)] == [(1, 1), (1, 2)]


@pytest.mark.parametrize("fam,l,tag,ring", [("A", 2, "sc", "GF(4)"), ("G", 2, "adjoint", "Z/7"),
                                            ("B", 2, "adjoint", "Z/6"), ("C", 2, "universal", "Z/2 x Z/3"),
                                            ("A", 3, "w2", "loc(Z/12, 2)"), ("D", 4, "standard", "Z/3"),
                                            ("A", 2, "sc", "Z/5[y]/(y^2 - 4)")])
def test_relations_sampled_on_other_rings(fam, l, tag, ring):
    reports = verify_relations(context(fam, l, tag, ring), budget=400, seed=7)
    assert [r.relation for r in reports] == ["R1", "R2", "R3", "R4", "R5", "R6"]
    assert all(r.passed for r in reports), [r.failures[:2] for r in reports if not r.passed]


def test_relation_report_is_reproducible():
    G = context("B", 2, "adjoint", "Z/7")
    one = [r.to_json() for r in verify_relations(G, budget=50, seed=3)]
    two = [r.to_json() for r in verify_relations(G, budget=50, seed=3)]
    assert one == two


def test_w_squared_and_h_definitions():
    G = context("A", 2, "sc", "Z/5")
    R = G.R
    for a in G.rs.roots:
        w = G.w(a, R.one)
        assert (mx.matmul(R, w, w) == G.h(a, R.from_int(-1))).all()
        assert mx.is_identity(R, G.h(a, R.one))
    with pytest.raises(RingError):
        G.w(G.rs.simple[0], R.zero)


@settings(max_examples=30)
@given(st.data())
def test_x_is_additive_and_inverse(data):
    G = context("C", 2, "universal", "Z/6")
    R = G.R
    a = data.draw(st.sampled_from(G.rs.roots))
    t, u = data.draw(st.integers(0, 5)), data.draw(st.integers(0, 5))
    assert (mx.matmul(R, G.x(a, t), G.x(a, u)) == G.x(a, R.add(t, u))).all()
    assert mx.is_identity(R, mx.matmul(R, G.x(a, t), G.x_inv(a, t)))
    assert R.is_unit(mx.det(R, G.x(a, t)))


def test_torus_relations():
    for fam, l, tag in [("A", 2, "sc"), ("C", 2, "universal")]:
        G = context(fam, l, tag, "Z/5")
        assert verify_torus_conjugation(G, samples=50, seed=1).passed
        for a in G.rs.simple:
            for u in G.R.units:
                assert (G.torus(G.chi_root(a, u)) == G.h(a, u)).all()
    G = context("A", 2, "sc", "Z/5")
    with pytest.raises(RingError):
        G.torus(TorusCharacter((0, 1)))


@pytest.mark.parametrize("fam,l,tag,ring,e_order,g_order", [
    ("A", 2, "sc", "Z/5", 372000, 372000),
    ("A", 2, "sc", "Z/4", 43008, 43008),
    ("A", 2, "adjoint", "GF(4)", 20160, 60480),
    ("C", 2, "universal", "Z/3", 51840, 51840),
    ("B", 2, "adjoint", "Z/3", 25920, 51840),
])
def test_group_orders_match_classical_formulas(fam, l, tag, ring, e_order, g_order):
    G = context(fam, l, tag, ring)
    F = full_group(G)
    assert F.E.order() == e_order
    assert F.order() == g_order


def test_weyl_quotients():
    assert weyl_quotient_order(context("A", 2, "sc", "Z/5")) == 6
    assert weyl_quotient_order(context("B", 2, "adjoint", "Z/3")) == 8


def test_unipotent_subgroup_order():
    G = context("A", 2, "sc", "Z/5")
    from chevalley.groupcore import MatrixGroup
    U = MatrixGroup(G.R, [g.matrix for g in G.subgroup_generators("U")])
    assert U.order() == 125
