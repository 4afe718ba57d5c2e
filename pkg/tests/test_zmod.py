import itertools

import numpy as np
from hypothesis import given, settings, strategies as st

from chevalley import zmod


def small_matrices(max_rows=3, max_cols=3):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols), st.sampled_from([2, 4, 6, 8, 9, 12])).flatmap(
        lambda rcn: st.tuples(
            st.lists(st.integers(0, rcn[2] - 1), min_size=rcn[0] * rcn[1], max_size=rcn[0] * rcn[1])
            .map(lambda xs, r=rcn[0], c=rcn[1]: np.array(xs, dtype=np.int64).reshape(r, c)),
            st.just(rcn[2])))


def brute_kernel(A, n):
    cols = A.shape[1]
    return {v for v in itertools.product(range(n), repeat=cols) if not ((A @ np.array(v)) % n).any()}


def span(gens, n, cols):
    found = {tuple([0] * cols)}
    frontier = list(found)
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = tuple((np.array(v) + g) % n)
                if w not in found:
                    found.add(w)
                    nxt.append(w)
        frontier = nxt
    return found


@settings(max_examples=60)
@given(small_matrices())
def test_kernel_matches_brute_force(An):
    A, n = An
    gens = zmod.kernel_mod(A, n)
    for g in gens:
        assert not ((A @ g) % n).any()
    assert span(gens, n, A.shape[1]) == brute_kernel(A, n)


@settings(max_examples=60)
@given(small_matrices(), st.data())
def test_solve_matches_brute_force(An, data):
    A, n = An
    b = np.array(data.draw(st.lists(st.integers(0, n - 1), min_size=A.shape[0], max_size=A.shape[0])))
    sol = zmod.solve_mod(A, b, n)
    exists = any(not ((A @ np.array(v) - b) % n).any() for v in itertools.product(range(n), repeat=A.shape[1]))
    assert (sol is not None) == exists
    if sol is not None:
        assert not ((A @ sol - b) % n).any()


@settings(max_examples=60)
@given(small_matrices())
def test_image_order_matches_brute_force(An):
    A, n = An
    image = {tuple((A @ np.array(v)) % n) for v in itertools.product(range(n), repeat=A.shape[1])}
    assert zmod.image_order(A, n) == len(image)


@settings(max_examples=60)
@given(st.sampled_from([(2, 1), (2, 3), (3, 2), (5, 1)]), st.integers(1, 4), st.integers(1, 4), st.data())
def test_smith_form_identity(pe, r, c, data):
    p, e = pe
    q = p**e
    A = np.array(data.draw(st.lists(st.integers(0, q - 1), min_size=r * c, max_size=r * c)),
                 dtype=np.int64).reshape(r, c)
    sf = zmod.smith_prime_power(A, p, e)
    D = np.zeros((r, c), dtype=np.int64)
    for i, v in enumerate(sf.valuations):
        D[i, i] = p**v
    assert ((sf.U @ A @ sf.V - D) % q == 0).all()
    assert ((sf.U @ sf.U_inv) % q == np.eye(r, dtype=np.int64)).all()


def test_prime_power_factors():
    assert zmod.prime_power_factors(360) == ((2, 3), (3, 2), (5, 1))
