import numpy as np
import pytest

from chevalley.chevbasis import adjoint_representation, build_chevalley_basis, killing_form
from chevalley.rootsys import build_root_system, neg

SMALL = [("A", 2), ("A", 3), ("B", 2), ("B", 3), ("C", 3), ("D", 4), ("G", 2), ("F", 4)]


@pytest.mark.parametrize("fam,l", SMALL)
def test_jacobi_and_string_values(fam, l):
    rs = build_root_system(fam, l)
    B = build_chevalley_basis(rs)
    B.check_jacobi()
    assert B.dim == l + len(rs.roots)
    for a in rs.roots:
        for b in rs.roots:
            s = tuple(x + y for x, y in zip(a, b))
            if s in rs.index:
                p = 0
                while tuple(y - (p + 1) * x for x, y in zip(a, b)) in rs.index:
                    p += 1
                assert abs(B.N(a, b)) == p + 1
                assert B.N(a, b) == -B.N(b, a)
                assert B.N(neg(a), neg(b)) == -B.N(a, b)
            elif a != neg(b):
                assert B.N(a, b) == 0


@pytest.mark.parametrize("fam,l", SMALL)
def test_cartan_action_and_coroots(fam, l):
    rs = build_root_system(fam, l)
    B = build_chevalley_basis(rs)
    for i in range(l):
        for a in rs.roots:
            v = B.bracket_basis(i, l + rs.index[a])
            expected = np.zeros(B.dim, dtype=np.int64)
            expected[l + rs.index[a]] = rs.pairing(a, rs.simple[i])
            assert (v == expected).all()
    for a in rs.roots:
        v = B.bracket_basis(l + rs.index[a], l + rs.index[neg(a)])
        assert not v[l:].any()
        assert tuple(v[:l]) == tuple(rs.coroot_coefficients(a))


def test_extraspecial_constants_positive():
    for fam, l in SMALL:
        rs = build_root_system(fam, l)
        B = build_chevalley_basis(rs)
        for xi, (a, b) in B.extraspecial_pairs.items():
            assert B.N(a, b) > 0


def test_b2_values():
    rs = build_root_system("B", 2)
    B = build_chevalley_basis(rs)
    a, b = rs.simple
    ab = tuple(x + y for x, y in zip(a, b))
    assert abs(B.N(b, ab)) == 2
    assert B.dim == 10


def test_ad_matrices_reproduce_table():
    rs = build_root_system("G", 2)
    B = build_chevalley_basis(rs)
    ad = B.ad_matrices
    for i in range(B.dim):
        for j in range(B.dim):
            assert (ad[i][:, j] == B.bracket_basis(i, j)).all()
        assert not ad[i][:, i].any()


def test_killing_form_a2():
    rs = build_root_system("A", 2)
    B = build_chevalley_basis(rs)
    K = killing_form(B)
    ad = B.ad_matrices
    assert (K == K.T).all()
    i1, i2 = 2 + rs.index[rs.simple[0]], 2 + rs.index[rs.simple[1]]
    assert K[i1, i2] == 0
    assert K[0, 0] == int(np.trace(ad[0] @ ad[0])) == 12  # 2n * (h, h) with n = 3, (h1, h1) = 2


def test_adjoint_representation_brackets():
    rep = adjoint_representation(build_chevalley_basis(build_root_system("B", 2)))
    rep.check_brackets()
    assert rep.dim == 10 and rep.lattice.tag == "adjoint"
