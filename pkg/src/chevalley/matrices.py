"""Matrix arithmetic over finite rings, on arrays of element codes.

Residue rings Z/n take a fast path through ordinary integer products; every
other ring goes through its operation tables.  All functions broadcast over
leading batch dimensions.
"""

from __future__ import annotations

import numpy as np

from .rings import FiniteRing, RingError


def _modulus(R: FiniteRing) -> int | None:
    m = getattr(R, "modulus", None)
    return m if isinstance(m, int) else None


def identity(R: FiniteRing, n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64) * R.one


def zeros(n: int, m: int | None = None) -> np.ndarray:
    return np.zeros((n, n if m is None else m), dtype=np.int64)


def add(R: FiniteRing, A, B) -> np.ndarray:
    return R.add_t[A, B]


def neg(R: FiniteRing, A) -> np.ndarray:
    return R.neg_t[A]


def sub(R: FiniteRing, A, B) -> np.ndarray:
    return R.add_t[A, R.neg_t[B]]


def scale(R: FiniteRing, c, A) -> np.ndarray:
    return R.mul_t[c, A]


def rsum(R: FiniteRing, X: np.ndarray, axis: int) -> np.ndarray:
    """Ring sum along one axis."""
    X = np.moveaxis(np.asarray(X), axis, 0)
    m = _modulus(R)
    if m is not None:
        return X.sum(axis=0) % m
    acc = X[0]
    for k in range(1, X.shape[0]):
        acc = R.add_t[acc, X[k]]
    return acc


def matmul(R: FiniteRing, A, B) -> np.ndarray:
    A = np.asarray(A)
    B = np.asarray(B)
    m = _modulus(R)
    if m is not None:
        return np.matmul(A, B) % m
    # C[..., i, j] = sum_k A[..., i, k] * B[..., k, j]
    P = R.mul_t[A[..., :, :, None], B[..., None, :, :]]
    return rsum(R, P, axis=-2)


def matvec(R: FiniteRing, A, v) -> np.ndarray:
    return matmul(R, A, np.asarray(v)[..., None])[..., 0]


def matprod(R: FiniteRing, mats, n: int | None = None) -> np.ndarray:
    mats = list(mats)
    if not mats:
        return identity(R, n)
    out = mats[0]
    for M in mats[1:]:
        out = matmul(R, out, M)
    return out


def from_int_matrix(R: FiniteRing, M) -> np.ndarray:
    return R.reduce_ints(M)


def charpoly(R: FiniteRing, A) -> list[int]:
    """Coefficients of det(xI - A), leading coefficient first (Berkowitz, division free)."""
    A = np.asarray(A)
    n = A.shape[0]
    p = np.array([R.one], dtype=np.int64)
    for k in range(1, n + 1):
        a = A[k - 1, k - 1]
        row = A[k - 1, :k - 1]
        col = A[:k - 1, k - 1]
        M = A[:k - 1, :k - 1]
        # Toeplitz column: 1, -a, -row col, -row M col, ...
        t = [R.one, int(R.neg_t[a])]
        v = col
        for _ in range(k - 1):
            t.append(int(R.neg_t[rsum(R, R.mul_t[row, v], 0)]))
            v = matvec(R, M, v)
        q = np.zeros(k + 1, dtype=np.int64)
        for i in range(k + 1):
            acc = R.zero
            for j in range(min(i + 1, k)):
                acc = R.add(acc, R.mul(t[i - j], int(p[j])))
            q[i] = acc
        p = q
    return [int(x) for x in p]


def det(R: FiniteRing, A) -> int:
    c = charpoly(R, A)[-1]
    n = np.asarray(A).shape[0]
    return c if n % 2 == 0 else R.neg(c)


def inverse(R: FiniteRing, A) -> np.ndarray:
    """Inverse by Cayley-Hamilton; raises if det A is not a unit."""
    A = np.asarray(A)
    n = A.shape[0]
    c = charpoly(R, A)
    c0 = c[-1]
    if not R.is_unit(c0):
        raise RingError("matrix is not invertible")
    # A^{-1} = -c0^{-1} (A^{n-1} + c_1 A^{n-2} + ... + c_{n-1} I)
    acc = identity(R, n)
    for k in range(1, n):
        acc = add(R, matmul(R, acc, A), scale(R, c[k], identity(R, n)))
    return scale(R, R.neg(R.inv(c0)), acc)


def is_identity(R: FiniteRing, A) -> bool:
    A = np.asarray(A)
    return bool((A == identity(R, A.shape[-1])).all())


def is_scalar(A) -> bool:
    A = np.asarray(A)
    d = np.diagonal(A)
    return bool((A == np.diag(d)).all() and (d == d[0]).all())


def key(A) -> bytes:
    """Hashable key for a code matrix."""
    return np.ascontiguousarray(A, dtype=np.int64).tobytes()


def apply_ring_map(f: np.ndarray, A) -> np.ndarray:
    """Entrywise image under a ring map given as a code table."""
    return np.asarray(f)[np.asarray(A)]


def embed(S: FiniteRing, R: FiniteRing, A) -> np.ndarray:
    """Carry a matrix over R into an extension S built on R (constants keep their codes)."""
    if getattr(S, "base", None) is R:
        return np.asarray(A).copy()
    raise RingError(f"{S.name} is not an extension of {R.name}")
