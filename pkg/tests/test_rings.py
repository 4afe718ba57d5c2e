import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from chevalley.rings import (GF, ZZ, IdempotentSystem, IntegerMod, RingError, RingSpecError, UnsupportedCapability,
                             diagonal_embedding, find_idempotent_systems, fractions_ring, ideals, idempotents,
                             is_homomorphism, local_maximal_ideal, localize_at, maximal_ideals, parse_ring,
                             product_ring, quotient_extension, ring_automorphisms)

SPECS = ["Z/2", "Z/4", "Z/5", "Z/6", "Z/12", "Z/2 x Z/3", "Z/5[y]/(y^2 - 2)", "Z/5[y]/(y^2 - 4)",
         "loc(Z/12, 2)", "loc(Z/12, 3)", "GF(4)", "GF(8)", "GF(9)", "(Z/2 x Z/2)"]


@pytest.fixture(scope="module", params=SPECS)
def ring(request):
    return parse_ring(request.param)


def test_ring_axioms_exhaustive(ring):
    n = len(ring)
    A, M = ring.add_t, ring.mul_t
    idx = np.arange(n)
    assert (A == A.T).all() and (M == M.T).all()
    assert (A[0] == idx).all() and (M[1] == idx).all()
    # associativity and distributivity on all triples
    assert (A[A[:, :, None], idx[None, None, :]] == A[idx[:, None, None], A[None, :, :]]).all()
    assert (M[M[:, :, None], idx[None, None, :]] == M[idx[:, None, None], M[None, :, :]]).all()
    assert (M[idx[:, None, None], A[None, :, :]] == A[M[:, :, None], M[:, None, :]]).all()
    for a in range(n):
        assert ring.add(a, ring.neg(a)) == ring.zero


def test_units_have_inverses(ring):
    for u in ring.units:
        assert ring.mul(u, ring.inv(u)) == ring.one
    assert all(not ring.is_unit(a) for a in range(len(ring)) if a not in set(ring.units))


@given(st.data())
def test_characteristic_and_int_map(data):
    R = parse_ring(data.draw(st.sampled_from(SPECS)))
    k = data.draw(st.integers(-50, 50))
    m = data.draw(st.integers(-50, 50))
    assert R.add(R.from_int(k), R.from_int(m)) == R.from_int(k + m)
    assert R.mul(R.from_int(k), R.from_int(m)) == R.from_int(k * m)
    assert R.from_int(R.characteristic) == R.zero
    assert all(R.from_int(j) != R.zero for j in range(1, R.characteristic))


def test_parse_errors_report_position():
    with pytest.raises(RingSpecError) as exc:
        parse_ring("Z/")
    assert exc.value.pos == 2
    for bad in ["", "Z/0", "Q", "Z/6 x", "Z/5[y]/(y^2 - 5)"]:
        with pytest.raises((RingSpecError, RingError)):
            parse_ring(bad)


def test_parse_is_case_and_space_insensitive():
    assert len(parse_ring("z / 6")) == 6
    assert len(parse_ring("Z/2 X Z/3")) == 6
    assert parse_ring("Z") is ZZ


def test_fractions_of_z6_kill_three():
    R = IntegerMod(6)
    L = fractions_ring(R, [1, 2, 4])
    assert L.equivalent(3, 1, 0, 1)
    assert L.from_fraction(3, 1) == L.zero
    assert len(L) == 3


def test_fractions_of_integers():
    L = fractions_ring(ZZ, [2])
    assert L.eq(L.element(2, 1), L.element(4, 2))
    assert L.is_unit(L.element(8)) and not L.is_unit(L.element(3))
    Z1 = fractions_ring(ZZ, [])
    assert Z1.eq(Z1.add(Z1.element(3), Z1.element(4)), Z1.element(7))


def test_fractions_need_multiplicative_set():
    with pytest.raises(RingError):
        fractions_ring(IntegerMod(6), [1, 2])  # 2*2 = 4 is missing


def test_maximal_ideals_examples():
    sizes = sorted(len(I) for I in maximal_ideals(IntegerMod(12)))
    assert sizes == [4, 6]
    assert [sorted(I.elements) for I in maximal_ideals(IntegerMod(5))] == [[0]]
    assert [sorted(I.elements) for I in maximal_ideals(IntegerMod(4))] == [[0, 2]]
    with pytest.raises(UnsupportedCapability):
        maximal_ideals(ZZ)


def test_ideal_count_matches_divisors():
    for n in (6, 8, 12, 30):
        divisors = [d for d in range(1, n + 1) if n % d == 0]
        assert len(ideals(IntegerMod(n))) == len(divisors)


@pytest.mark.parametrize("n,p,size", [(12, 2, 4), (12, 3, 3), (30, 5, 5), (8, 2, 8)])
def test_localization_sizes_match_crt(n, p, size):
    R = IntegerMod(n)
    P = next(I for I in maximal_ideals(R) if R.from_int(p) in I)
    L = localize_at(R, P)
    assert len(L) == size
    assert len(local_maximal_ideal(L)) == size // p
    assert len(maximal_ideals(L)) == 1


def test_localizing_a_field_changes_nothing():
    R = IntegerMod(5)
    L = localize_at(R, maximal_ideals(R)[0])
    assert len(L) == 5 and L.is_field()


def test_non_prime_ideal_is_rejected():
    R = IntegerMod(12)
    I = next(I for I in ideals(R) if len(I) == 2)  # (6)
    with pytest.raises(RingError):
        localize_at(R, I)


@pytest.mark.parametrize("n", [6, 12, 30, 60, 5])
def test_diagonal_embedding_is_injective_homomorphism(n):
    R = IntegerMod(n)
    S, f = diagonal_embedding(R)
    assert len(set(f.tolist())) == n
    assert is_homomorphism(R, S, f)
    if n > 5:
        assert len(S) == n


def test_diagonal_embedding_crt_value():
    R = IntegerMod(12)
    S, f = diagonal_embedding(R)
    comps = S.component_codes(int(f[7]))
    labels = sorted(int(str(F.format(c))) for F, c in zip(S.factors, comps))
    assert labels == [1, 3]  # 7 = 3 mod 4, 1 mod 3


def test_quotient_extension_examples():
    R = IntegerMod(5)
    F = quotient_extension(R, 2, 2)
    assert len(F) == 25 and F.is_field()
    S = quotient_extension(R, 4, 2)
    y = S.generator
    a = S.sub(y, S.embed(2))
    b = S.add(y, S.embed(2))
    assert a != S.zero and b != S.zero and S.mul(a, b) == S.zero
    assert len(quotient_extension(R, 1, 1)) == 5
    with pytest.raises(RingError):
        quotient_extension(IntegerMod(6), 2, 2)


def test_idempotent_systems_examples():
    assert IdempotentSystem((3, 4)) in find_idempotent_systems(IntegerMod(6), 2)
    assert [s.elements for s in find_idempotent_systems(IntegerMod(7), 1)] == [(1,)]
    assert sorted(s.elements for s in find_idempotent_systems(IntegerMod(5), 2)) == [(0, 1), (1, 0)]
    for s in find_idempotent_systems(IntegerMod(30), 3):
        assert s.check(IntegerMod(30))


def test_idempotents_of_products():
    R = product_ring([IntegerMod(2), IntegerMod(3), IntegerMod(5)])
    assert len(idempotents(R)) == 8


@pytest.mark.parametrize("q,count", [(2, 1), (4, 2), (8, 3), (9, 2), (25, 2)])
def test_galois_field_automorphisms(q, count):
    F = GF(q)
    assert F.is_field() and len(F) == q
    auts = ring_automorphisms(F)
    assert len(auts) == count
    for f in auts:
        assert is_homomorphism(F, F, f)


def test_frobenius_of_gf4_squares():
    F = GF(4)
    frob = [f for f in ring_automorphisms(F) if not (f == np.arange(4)).all()][0]
    assert all(frob[a] == F.mul(a, a) for a in range(4))


def test_product_ring_automorphisms_and_zn():
    for n in (6, 12, 30):
        assert len(ring_automorphisms(IntegerMod(n))) == 1
    # swapping equal factors is an automorphism
    assert len(ring_automorphisms(product_ring([IntegerMod(2), IntegerMod(2)]))) == 2


def test_product_components_round_trip():
    R = parse_ring("Z/4 x Z/3")
    for a, b in itertools.product(range(4), range(3)):
        x = R.from_components([a, b])
        assert list(R.component_codes(x)) == [a, b]
