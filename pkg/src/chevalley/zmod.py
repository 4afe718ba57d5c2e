"""Linear algebra over Z/n.

Everything is reduced to prime-power moduli through the Chinese remainder
theorem; over Z/p^e a Smith form is computed by pivoting on an entry of minimal
p-adic valuation, which always divides the rest of the active block.  Matrices
are numpy int64 arrays holding least residues.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import sympy


@lru_cache(maxsize=None)
def prime_power_factors(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(sympy.factorint(n).items()))


def _valuation(x: np.ndarray, p: int, e: int) -> np.ndarray:
    """p-adic valuation of residues mod p^e (zero gets e)."""
    v = np.zeros(x.shape, dtype=np.int64)
    y = x.copy()
    live = y != 0
    v[~live] = e
    for _ in range(e):
        step = live & (y % p == 0)
        if not step.any():
            break
        v[step] += 1
        y[step] //= p
        live = step
    return v


@dataclass
class SmithForm:
    """``U @ A @ V == diag(p**valuations)`` modulo ``p**e``."""

    p: int
    e: int
    valuations: list[int]
    U: np.ndarray
    U_inv: np.ndarray
    V: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.valuations)


def smith_prime_power(A: np.ndarray, p: int, e: int, track_rows: bool = True,
                      track_cols: bool = True) -> SmithForm:
    """Smith form; the row or column transforms can be skipped when unused
    (they are then left as 1 x 1 placeholders)."""
    q = p**e
    A = np.array(A, dtype=np.int64) % q
    m, n = A.shape
    U = np.eye(m if track_rows else 1, dtype=np.int64)
    U_inv = np.eye(m if track_rows else 1, dtype=np.int64)
    V = np.eye(n if track_cols else 1, dtype=np.int64)
    vals: list[int] = []
    t = 0
    while t < min(m, n):
        sub = A[t:, t:]
        if not sub.any():
            break
        val = _valuation(sub, p, e)
        i, j = np.unravel_index(np.argmin(val), val.shape)
        i += t
        j += t
        v = int(val[i - t, j - t])
        if i != t:
            A[[t, i]] = A[[i, t]]
            if track_rows:
                U[[t, i]] = U[[i, t]]
                U_inv[:, [t, i]] = U_inv[:, [i, t]]
        if j != t:
            A[:, [t, j]] = A[:, [j, t]]
            if track_cols:
                V[:, [t, j]] = V[:, [j, t]]
        pv = p**v
        unit = int(A[t, t]) // pv
        unit_inv = pow(unit, -1, q)
        A[t] = A[t] * unit_inv % q
        if track_rows:
            U[t] = U[t] * unit_inv % q
            U_inv[:, t] = U_inv[:, t] * unit % q
        f = (A[t + 1:, t] // pv) % q
        if f.any():
            A[t + 1:] = (A[t + 1:] - np.outer(f, A[t])) % q
            if track_rows:
                U[t + 1:] = (U[t + 1:] - np.outer(f, U[t])) % q
                U_inv[:, t] = (U_inv[:, t] + U_inv[:, t + 1:] @ f) % q
        # after row elimination only the pivot row has entries right of the pivot
        g = (A[t, t + 1:] // pv) % q
        if g.any():
            A[t, t + 1:] = 0
            if track_cols:
                V[:, t + 1:] = (V[:, t + 1:] - np.outer(V[:, t], g)) % q
        vals.append(v)
        t += 1
    return SmithForm(p, e, vals, U, U_inv, V)


def _crt_lift(n: int, q: int) -> int:
    """Integer that is 1 mod q and 0 mod n/q."""
    rest = n // q
    if rest == 1:
        return 1
    return rest * pow(rest % q, -1, q) % n


def kernel_mod(A: np.ndarray, n: int) -> list[np.ndarray]:
    """Generators of the Z/n-module {x : A x = 0 mod n}."""
    A = np.asarray(A, dtype=np.int64)
    cols = A.shape[1]
    gens: list[np.ndarray] = []
    for p, e in prime_power_factors(n):
        q = p**e
        sf = smith_prime_power(A, p, e, track_rows=False)
        lift = _crt_lift(n, q)
        for i in range(cols):
            if i < sf.rank:
                k = e - sf.valuations[i]
                if k == e:
                    continue
                vec = sf.V[:, i] * p**k % q
            else:
                vec = sf.V[:, i]
            vec = vec * lift % n
            if vec.any():
                gens.append(vec)
    return gens


def solve_mod(A: np.ndarray, b: np.ndarray, n: int) -> np.ndarray | None:
    """One solution of A x = b mod n, or None."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    x = np.zeros(A.shape[1], dtype=np.int64)
    for p, e in prime_power_factors(n):
        q = p**e
        sf = smith_prime_power(A, p, e)
        c = sf.U @ (b % q) % q
        if c[sf.rank:].any():
            return None
        y = np.zeros(A.shape[1], dtype=np.int64)
        for i, v in enumerate(sf.valuations):
            if c[i] % p**v:
                return None
            y[i] = c[i] // p**v
        x = (x + (sf.V @ y % q) * _crt_lift(n, q)) % n
    return x


def image_generators(A: np.ndarray, n: int) -> list[tuple[np.ndarray, int]]:
    """A reduced generating set of the column span of A, with additive orders."""
    A = np.asarray(A, dtype=np.int64)
    out = []
    for p, e in prime_power_factors(n):
        q = p**e
        sf = smith_prime_power(A, p, e, track_cols=False)
        lift = _crt_lift(n, q)
        for i, v in enumerate(sf.valuations):
            if v >= e:
                continue
            vec = sf.U_inv[:, i] * p**v % q * lift % n
            out.append((vec, p ** (e - v)))
    return out


def image_order(A: np.ndarray, n: int) -> int:
    """Number of elements in the column span of A mod n."""
    A = np.asarray(A, dtype=np.int64)
    order = 1
    for p, e in prime_power_factors(n):
        sf = smith_prime_power(A, p, e, track_rows=False, track_cols=False)
        for v in sf.valuations:
            order *= p ** (e - v)
    return order
