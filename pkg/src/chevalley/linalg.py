"""Additive linear algebra over finite rings.

A finite ring is presented additively as (Z/c)^r modulo relations, so any
additive map between arrays of ring elements becomes a matrix over Z/c.
Kernels, particular solutions and spans are then computed with the Smith
forms of ``zmod``; zero divisors need no special care.
"""

from __future__ import annotations

import numpy as np

from . import matrices as mx
from . import zmod
from .rings import FiniteRing


def coord_vector(R: FiniteRing, X) -> np.ndarray:
    """Additive coordinates of an array of codes, flattened."""
    return R.additive.coords[np.asarray(X, dtype=np.int64).ravel()].ravel()


def from_coord_vector(R: FiniteRing, v, shape) -> np.ndarray:
    add = R.additive
    r = add.rank
    v = np.asarray(v).reshape(-1, r)
    return np.array([add.element(row) for row in v], dtype=np.int64).reshape(shape)


def relation_block(R: FiniteRing, m: int) -> np.ndarray:
    """Columns generating the coordinate vectors of zero in R^m."""
    add = R.additive
    r = add.rank
    cols = []
    for p in range(m):
        for rel in add.relations:
            v = np.zeros(m * r, dtype=np.int64)
            v[p * r:(p + 1) * r] = rel
            cols.append(v)
    if not cols:
        return np.zeros((m * r, 0), dtype=np.int64)
    return np.array(cols, dtype=np.int64).T


def linear_matrix(R: FiniteRing, f, shape_in) -> tuple[np.ndarray, int]:
    """Matrix over Z/char of an additive map ``f`` on arrays of shape ``shape_in``."""
    add = R.additive
    m = int(np.prod(shape_in))
    cols = []
    out_len = None
    for j in range(m):
        for g in add.gens:
            Y = np.zeros(m, dtype=np.int64)
            Y[j] = g
            out = np.asarray(f(Y.reshape(shape_in)))
            out_len = out.size
            cols.append(coord_vector(R, out))
    return np.array(cols, dtype=np.int64).T, out_len


def kernel(R: FiniteRing, f, shape_in) -> list[np.ndarray]:
    """Additive generators of {Y : f(Y) = 0}."""
    A, out_len = linear_matrix(R, f, shape_in)
    m = int(np.prod(shape_in)) * R.additive.rank
    M = np.hstack([A, relation_block(R, out_len)])
    out = []
    seen = set()
    for v in zmod.kernel_mod(M, R.additive.char):
        Y = from_coord_vector(R, v[:m], shape_in)
        k = mx.key(Y)
        if Y.any() and k not in seen:
            seen.add(k)
            out.append(Y)
    return out


def solve(R: FiniteRing, f, shape_in, target) -> np.ndarray | None:
    """Some Y with f(Y) = target, or None."""
    A, out_len = linear_matrix(R, f, shape_in)
    m = int(np.prod(shape_in)) * R.additive.rank
    M = np.hstack([A, relation_block(R, out_len)])
    sol = zmod.solve_mod(M, coord_vector(R, target), R.additive.char)
    if sol is None:
        return None
    return from_coord_vector(R, sol[:m], shape_in)


def span_elements(R: FiniteRing, gens, budget: int = 100_000) -> list[np.ndarray]:
    """All elements of the additive group generated by ``gens`` (BFS on sums)."""
    from .groupcore import Undecided

    gens = [np.asarray(g, dtype=np.int64) for g in gens]
    if not gens:
        return []
    zero = np.zeros_like(gens[0])
    found = {mx.key(zero): zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for X in frontier:
            for g in gens:
                Y = R.add_t[X, g]
                k = mx.key(Y)
                if k not in found:
                    found[k] = Y
                    nxt.append(Y)
                    if len(found) > budget:
                        raise Undecided(f"span exceeds budget {budget}")
        frontier = nxt
    return list(found.values())


def r_span_generators(R: FiniteRing, mats) -> list[np.ndarray]:
    """Additive generators of the R-span of ``mats``: products g*M for additive generators g."""
    return [R.mul_t[g, np.asarray(M)] for M in mats for g in R.additive.gens]


class AdditiveSpan:
    """A subgroup of R^shape given by generators, with exact membership tests."""

    def __init__(self, R: FiniteRing, shape, gens=()):
        self.R = R
        self.shape = tuple(shape)
        self.size = int(np.prod(self.shape))
        self.rel = relation_block(R, self.size)
        self.cols: list[np.ndarray] = []
        self.gens: list[np.ndarray] = []
        self._basis = None
        for g in gens:
            self.add(g)

    def _matrix(self) -> np.ndarray:
        parts = [np.array(self.cols, dtype=np.int64).T] if self.cols else []
        parts.append(self.rel)
        return np.hstack(parts) if parts else self.rel

    def contains(self, X) -> bool:
        v = coord_vector(self.R, X)
        if not v.any():
            return True
        if not self.cols:
            return not np.asarray(X).any()
        return zmod.solve_mod(self._matrix(), v, self.R.additive.char) is not None

    def add(self, X) -> bool:
        """Add a generator; returns False if it was already in the span."""
        if self.contains(X):
            return False
        self.cols.append(coord_vector(self.R, X))
        self.gens.append(np.asarray(X, dtype=np.int64).reshape(self.shape))
        self._reduce()
        return True

    def _reduce(self):
        # keep the generating set small: replace by Smith image generators modulo relations
        c = self.R.additive.char
        if len(self.cols) <= 2 * self.size * self.R.additive.rank:
            return
        img = zmod.image_generators(self._matrix(), c)
        self.cols = [v for v, _ in img]
        self.gens = [from_coord_vector(self.R, v, self.shape) for v in self.cols]

    def order(self) -> int:
        c = self.R.additive.char
        full = zmod.image_order(self._matrix(), c)
        rel = zmod.image_order(self.rel, c) if self.rel.shape[1] else 1
        return full // rel


def commutant(R: FiniteRing, mats, budget: int = 100_000) -> list[np.ndarray]:
    """All N x N matrices commuting with every matrix in ``mats``."""
    mats = [np.asarray(M) for M in mats]
    n = mats[0].shape[0]
    S = np.stack(mats)

    def f(Y):
        return mx.sub(R, mx.matmul(R, Y[None], S), mx.matmul(R, S, Y[None]))

    return span_elements(R, kernel(R, f, (n, n)), budget)
