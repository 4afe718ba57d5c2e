import numpy as np
import pytest

from chevalley.reps import (RepresentationError, build_weight_diagram, fundamental_weight, get_representation,
                            is_microweight, matrix_unit, microweights)
from chevalley.rootsys import build_root_system

CATALOGUE = [("A", 2, "sc", 3), ("A", 2, "adjoint", 8), ("A", 3, "w2", 6), ("A", 3, "standard", 4),
             ("B", 2, "adjoint", 10), ("C", 2, "universal", 4), ("C", 3, "universal", 6), ("D", 4, "standard", 8),
             ("D", 4, "sc", 16), ("D", 5, "sc", 16), ("G", 2, "adjoint", 14), ("E", 6, "sc", 27),
             ("E", 7, "sc", 56), ("B", 3, "sc", 8), ("A", 7, "w2", 28)]


def unit_vector(n, i):
    v = [0] * n
    v[i] = 1
    return v


def root(rs, coords):
    return rs.check_root(tuple(coords))


@pytest.mark.parametrize("fam,l,tag,dim", CATALOGUE)
def test_catalogue_dimensions_and_brackets(fam, l, tag, dim):
    rs = build_root_system(fam, l)
    rep = get_representation(rs, tag)
    assert rep.dim == dim
    rep.check_brackets()
    rep.check_weight_grading()
    for a in rs.roots:
        for M in rep.divided[a]:
            assert M.dtype.kind == "i"


def test_lattice_tags():
    assert get_representation(build_root_system("A", 2), "sc").lattice.tag == "simply-connected"
    assert get_representation(build_root_system("A", 2), "adjoint").lattice.tag == "adjoint"
    assert get_representation(build_root_system("A", 3), "w2").lattice.tag == "intermediate"
    assert get_representation(build_root_system("A", 3), "w2").lattice.index_in_sc == 2
    assert get_representation(build_root_system("D", 4), "sc").lattice.tag == "simply-connected"


def test_standard_a2_matrices():
    rs = build_root_system("A", 2)
    rep = get_representation(rs, "standard")
    X12 = rep.X(root(rs, (1, -1, 0)))
    assert (X12 == matrix_unit(3, 0, 1)).all()
    X23 = rep.X(root(rs, (0, 1, -1)))
    assert (X12 @ X23 - X23 @ X12 == matrix_unit(3, 0, 2)).all()
    assert rep.square_zero


def test_universal_c2_matrices():
    rs = build_root_system("C", 2)
    rep = get_representation(rs, "universal")
    assert (rep.X(root(rs, (2, 0))) == matrix_unit(4, 0, 2)).all()
    for a in rs.roots:
        X = rep.X(a)
        assert not (X @ X @ X).any()


def test_standard_d4_matrices():
    rs = build_root_system("D", 4)
    rep = get_representation(rs, "standard")
    l = 4
    for i in range(l):
        for j in range(l):
            if i == j:
                continue
            a = root(rs, [int(k == i) - int(k == j) for k in range(l)])
            expected = matrix_unit(8, i, j) - matrix_unit(8, l + j, l + i)
            assert (rep.X(a) == expected).all()
    for a in rs.roots:
        assert not (rep.X(a) @ rep.X(a)).any()
    lhs = (matrix_unit(8, 0, 0) - matrix_unit(8, 4, 4)) @ (matrix_unit(8, 0, 1) - matrix_unit(8, 5, 4))
    assert (lhs == matrix_unit(8, 0, 1)).all()


@pytest.mark.parametrize("fam,l,k,size,diameter", [("A", 7, 2, 28, 12), ("A", 3, 2, 6, 4), ("A", 2, 1, 3, 2),
                                                   ("E", 6, 1, 27, 16), ("D", 5, 5, 16, 10)])
def test_weight_diagrams(fam, l, k, size, diameter):
    rs = build_root_system(fam, l)
    D = build_weight_diagram(rs, fundamental_weight(rs, k))
    assert len(D.vertices) == size
    assert D.diameter == diameter
    idx = {v: n for n, v in enumerate(D.vertices)}
    for u, v, i, s in D.edges:
        alpha = rs.dynkin_labels(rs.simple[i - 1])
        assert tuple(x - y for x, y in zip(D.vertices[u], D.vertices[v])) == tuple(alpha)
        assert s == 1 and idx[D.vertices[v]] == v


def test_a2_path_and_edge_counts():
    rs = build_root_system("A", 2)
    D = build_weight_diagram(rs, fundamental_weight(rs, 1))
    assert [i for _, _, i, _ in sorted(D.edges)] == [1, 2]
    rs3 = build_root_system("A", 3)
    rep = get_representation(rs3, "w2")
    for s in rs3.simple:
        assert np.count_nonzero(rep.X(s)) == 2
    rs7 = build_root_system("A", 7)
    assert np.count_nonzero(get_representation(rs7, "w2").X(rs7.simple[0])) == 6


def test_microweight_checks():
    rs = build_root_system("B", 3)
    assert microweights(rs) == [3]
    assert not is_microweight(rs, fundamental_weight(rs, 1))
    with pytest.raises(RepresentationError):
        get_representation(rs, "w1")
    assert microweights(build_root_system("E", 8)) == []
    with pytest.raises(RepresentationError):
        get_representation(rs, "bogus")
