"""Commutative rings with 1: residue rings, products, polynomial quotients,
rings of fractions and localizations.

Finite rings are tabulated.  An element of a finite ring is an integer code in
``range(len(R))``; ``R.add_t`` and ``R.mul_t`` are the full operation tables,
so matrix arithmetic over any finite ring reduces to numpy fancy indexing.
Code 0 is always zero and code 1 is always one.  ``R.label(code)`` gives a
JSON-friendly canonical value and ``R.from_label`` inverts it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import zmod

#: default budget for exhaustive enumerations
SIZE_BUDGET = 10_000
#: largest ring that gets operation tables
MAX_TABLE = 4096


class RingError(ValueError):
    pass


class UnsupportedCapability(RingError):
    pass


class Ring:
    """Interface shared by finite and infinite rings."""

    name: str = "?"
    finite: bool = False

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"

    def __str__(self) -> str:
        return self.name


class Integers(Ring):
    """The ring Z with Python ints as elements."""

    name = "Z"
    finite = False
    is_domain = True
    zero = 0
    one = 1

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def eq(self, a, b):
        return a == b

    def is_unit(self, a):
        return a in (1, -1)

    def inv(self, a):
        if not self.is_unit(a):
            raise RingError(f"{a} is not invertible in Z")
        return a

    def from_int(self, n):
        return int(n)

    def elements(self):
        raise UnsupportedCapability("Z is not enumerable")


ZZ = Integers()


class FiniteRing(Ring):
    """A finite commutative ring given by operation tables on codes."""

    finite = True

    def __init__(self, name: str, labels: Sequence, add_t: np.ndarray, mul_t: np.ndarray):
        n = len(labels)
        if n < 2:
            raise RingError("the zero ring is not allowed")
        if n > MAX_TABLE:
            raise UnsupportedCapability(f"ring of size {n} exceeds table limit {MAX_TABLE}")
        self.name = name
        self._labels = list(labels)
        self._index = {self._key(lab): i for i, lab in enumerate(self._labels)}
        self.add_t = np.asarray(add_t, dtype=np.int64)
        self.mul_t = np.asarray(mul_t, dtype=np.int64)
        self.zero = 0
        self.one = 1
        self.neg_t = np.argmin(self.add_t, axis=1)  # a + b == 0 iff code 0
        if not (self.add_t[np.arange(n), self.neg_t] == 0).all():
            raise RingError("additive inverses missing")
        inv = np.full(n, -1, dtype=np.int64)
        a, b = np.nonzero(self.mul_t == 1)
        inv[a] = b
        self.inv_t = inv

    @staticmethod
    def _key(label):
        if isinstance(label, list):
            return tuple(FiniteRing._key(x) for x in label)
        return label

    def __len__(self) -> int:
        return len(self._labels)

    def elements(self) -> range:
        return range(len(self))

    # scalar arithmetic on codes
    def add(self, a, b):
        return int(self.add_t[a, b])

    def neg(self, a):
        return int(self.neg_t[a])

    def sub(self, a, b):
        return int(self.add_t[a, self.neg_t[b]])

    def mul(self, a, b):
        return int(self.mul_t[a, b])

    def eq(self, a, b):
        return a == b

    def is_unit(self, a) -> bool:
        return bool(self.inv_t[a] >= 0)

    def inv(self, a):
        r = int(self.inv_t[a])
        if r < 0:
            raise RingError(f"{self.label(a)} is not invertible in {self.name}")
        return r

    def pow(self, a, k: int):
        if k < 0:
            a, k = self.inv(a), -k
        r = self.one
        for _ in range(k):
            r = int(self.mul_t[r, a])
        return r

    @cached_property
    def units(self) -> list[int]:
        return [int(a) for a in np.nonzero(self.inv_t >= 0)[0]]

    @cached_property
    def characteristic(self) -> int:
        k, x = 1, self.one
        while x != self.zero:
            x = int(self.add_t[x, self.one])
            k += 1
        return k

    @cached_property
    def int_codes(self) -> np.ndarray:
        """``int_codes[k]`` is the code of k*1 for 0 <= k < characteristic."""
        c = self.characteristic
        out = np.zeros(c, dtype=np.int64)
        for k in range(1, c):
            out[k] = self.add_t[out[k - 1], self.one]
        return out

    def from_int(self, n: int) -> int:
        return int(self.int_codes[n % self.characteristic])

    def reduce_ints(self, M) -> np.ndarray:
        """Image of an integer array under Z -> R."""
        return self.int_codes[np.asarray(M, dtype=np.int64) % self.characteristic]

    def label(self, a):
        return self._labels[int(a)]

    def from_label(self, label) -> int:
        key = self._key(label)
        if key not in self._index:
            raise RingError(f"{label!r} is not an element of {self.name}")
        return self._index[key]

    def format(self, a) -> str:
        return str(self.label(a))

    def is_field(self) -> bool:
        return len(self.units) == len(self) - 1

    # additive structure, used for linear algebra over R
    @cached_property
    def additive(self) -> "AdditiveStructure":
        return AdditiveStructure(self)

    def __eq__(self, other):
        return isinstance(other, FiniteRing) and self.name == other.name and len(self) == len(other)

    def __hash__(self):
        return hash((self.name, len(self)))


def _sum_closure(R: FiniteRing, seeds: Iterable[int], with_mul: bool) -> np.ndarray:
    S = np.unique(np.fromiter(seeds, dtype=np.int64))
    while True:
        parts = [S, R.add_t[np.ix_(S, S)].ravel()]
        if with_mul:
            parts.append(R.mul_t[np.ix_(S, S)].ravel())
        T = np.unique(np.concatenate(parts))
        if len(T) == len(S):
            return S
        S = T


class AdditiveStructure:
    """Presentation of (R, +) as (Z/c)^r modulo a relation submodule.

    ``coords[a]`` holds coordinates of element a in terms of ``gens``;
    ``relations`` generate the vectors that map to zero.
    """

    def __init__(self, R: FiniteRing):
        self.ring = R
        c = R.characteristic
        gens: list[int] = []
        span = np.array([0], dtype=np.int64)
        while len(span) < len(R):
            missing = np.setdiff1d(np.arange(len(R)), span)
            gens.append(int(missing[0]))
            span = _sum_closure(R, [0, *gens], with_mul=False)
        r = len(gens)
        if c**r > 10**6:
            raise UnsupportedCapability("additive presentation too large")
        grid = np.array(list(itertools.product(range(c), repeat=r)), dtype=np.int64).reshape(-1, r)
        # element of each coordinate vector
        mult = np.zeros((r, c), dtype=np.int64)
        for j, g in enumerate(gens):
            for k in range(1, c):
                mult[j, k] = R.add_t[mult[j, k - 1], g]
        vals = np.zeros(len(grid), dtype=np.int64)
        for j in range(r):
            vals = R.add_t[vals, mult[j, grid[:, j]]]
        coords = np.full((len(R), r), -1, dtype=np.int64)
        relations = []
        first: dict[int, int] = {}
        for idx, v in enumerate(vals):
            v = int(v)
            if v in first:
                relations.append((grid[idx] - grid[first[v]]) % c)
            else:
                first[v] = idx
                coords[v] = grid[idx]
        self.char = c
        self.gens = gens
        self.coords = coords
        self.grid_values = vals
        if relations:
            rel = np.array(relations).T
            self.relations = [vec for vec, _ in zmod.image_generators(rel, c)]
        else:
            self.relations = []

    @property
    def rank(self) -> int:
        return len(self.gens)

    def element(self, coord_vec) -> int:
        idx = 0
        for x in np.asarray(coord_vec) % self.char:
            idx = idx * self.char + int(x)
        return int(self.grid_values[idx])


# ---------------------------------------------------------------------------
# concrete rings


def IntegerMod(n: int) -> FiniteRing:
    if n < 2:
        raise RingError("Z/n needs n >= 2 (the zero ring is rejected)")
    a = np.arange(n)
    R = FiniteRing(f"Z/{n}", list(range(n)), np.add.outer(a, a) % n, np.multiply.outer(a, a) % n)
    R.modulus = n
    return R


def _radix_split(codes: np.ndarray, sizes: Sequence[int]) -> list[np.ndarray]:
    return list(np.unravel_index(codes, tuple(sizes)))


class ProductRing(FiniteRing):
    """Componentwise product R_1 x ... x R_k."""

    def __init__(self, factors: Sequence[FiniteRing]):
        self.factors = list(factors)
        sizes = [len(f) for f in factors]
        self._sizes = sizes
        n = int(np.prod(sizes))
        if n > MAX_TABLE:
            raise UnsupportedCapability(f"product of size {n} too large")
        raw = np.arange(n)
        comps = _radix_split(raw, sizes)
        one_raw = int(np.ravel_multi_index(tuple(1 for _ in factors), sizes))
        # raw <-> code permutation swapping raw 1 with the identity element
        perm = np.arange(n)
        perm[1], perm[one_raw] = one_raw, 1  # code -> raw
        inv = np.argsort(perm)  # raw -> code
        A = [c[perm][:, None] for c in comps]
        B = [c[perm][None, :] for c in comps]
        add = inv[np.ravel_multi_index(tuple(f.add_t[a, b] for f, a, b in zip(factors, A, B)), sizes)]
        mul = inv[np.ravel_multi_index(tuple(f.mul_t[a, b] for f, a, b in zip(factors, A, B)), sizes)]
        self._perm = perm
        self._inv = inv
        labels = [[f.label(int(c[perm[i]])) for f, c in zip(factors, comps)] for i in range(n)]
        super().__init__(" x ".join(f"({f.name})" if " x " in f.name else f.name for f in factors),
                         labels, add, mul)

    def component_codes(self, a: int) -> tuple[int, ...]:
        raw = int(self._perm[int(a)])
        return tuple(int(c) for c in np.unravel_index(raw, tuple(self._sizes)))

    def from_components(self, comps: Sequence[int]) -> int:
        return int(self._inv[np.ravel_multi_index(tuple(int(c) for c in comps), tuple(self._sizes))])


def product_ring(factors: Sequence[FiniteRing]) -> FiniteRing:
    if len(factors) == 1:
        return factors[0]
    return ProductRing(factors)


class PolyQuotientRing(FiniteRing):
    """``base[y] / (monic modulus)``; elements are coefficient vectors, low degree first.

    ``modulus`` lists the base codes of m_0..m_{k-1} for y^k + m_{k-1} y^{k-1} + ... + m_0.
    """

    def __init__(self, base: FiniteRing, modulus: Sequence[int], var: str = "y", name: str | None = None):
        k = len(modulus)
        if k < 1:
            raise RingError("modulus must have positive degree")
        self.base = base
        self.modulus = [int(m) for m in modulus]
        self.degree = k
        self.var = var
        b = len(base)
        n = b**k
        if n > MAX_TABLE:
            raise UnsupportedCapability(f"extension of size {n} too large")
        # code = sum c_i * b^i, so code 1 is the constant 1
        codes = np.arange(n)
        coeff = [(codes // b**i) % b for i in range(k)]
        A = [c[:, None] * np.ones((1, n), dtype=np.int64) for c in coeff]
        B = [np.ones((n, 1), dtype=np.int64) * c[None, :] for c in coeff]
        add_c = [base.add_t[a, bb] for a, bb in zip(A, B)]
        prod = [np.zeros((n, n), dtype=np.int64) for _ in range(2 * k - 1)]
        for i in range(k):
            for j in range(k):
                prod[i + j] = base.add_t[prod[i + j], base.mul_t[A[i], B[j]]]
        neg_mod = [int(base.neg_t[m]) for m in self.modulus]
        for d in range(2 * k - 2, k - 1, -1):
            top = prod[d]
            for i in range(k):
                if neg_mod[i]:
                    prod[d - k + i] = base.add_t[prod[d - k + i], base.mul_t[top, neg_mod[i]]]
        mul_c = prod[:k]
        weights = [b**i for i in range(k)]
        add = sum(c * w for c, w in zip(add_c, weights))
        mul = sum(c * w for c, w in zip(mul_c, weights))
        labels = [[base.label(int(c[i])) for c in coeff] for i in range(n)]
        if name is None:
            terms = [f"{var}^{k}"]
            for i in range(k - 1, -1, -1):
                m = self.modulus[i]
                if m:
                    mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
                    coef = base.format(m)
                    terms.append(f"{coef}*{mono}" if mono else coef)
            name = f"{base.name}[{var}]/({' + '.join(terms)})"
        super().__init__(name, labels, add, mul)

    def embed(self, a: int) -> int:
        """Constant polynomial a."""
        return int(a)

    def coefficients(self, x: int) -> list[int]:
        b = len(self.base)
        return [(int(x) // b**i) % b for i in range(self.degree)]

    def from_coefficients(self, coeffs: Sequence[int]) -> int:
        b = len(self.base)
        return int(sum(int(c) * b**i for i, c in enumerate(coeffs)))

    @property
    def generator(self) -> int:
        """Residue of the adjoined variable."""
        if self.degree == 1:
            return int(self.base.neg_t[self.modulus[0]])
        return len(self.base)

    def format(self, x) -> str:
        cs = self.coefficients(x)
        terms = []
        for i, c in enumerate(cs):
            if c == 0:
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            cf = _atom(self.base.format(c)) if mono else self.base.format(c)
            if mono and cf == "1":
                terms.append(mono)
            else:
                terms.append(f"{cf}*{mono}" if mono else cf)
        return "+".join(reversed(terms)) or "0"


def _atom(text: str) -> str:
    return f"({text})" if any(ch in text for ch in "+*") else text


def quotient_extension(R: FiniteRing, lam: int, k: int, var: str = "y") -> PolyQuotientRing:
    """R[y]/(y^k - lam) for an invertible lam."""
    if k < 1:
        raise RingError("k must be positive")
    if not R.is_unit(lam):
        raise RingError(f"{R.format(lam)} is not invertible in {R.name}")
    modulus = [0] * k
    modulus[0] = int(R.neg_t[lam])
    S = PolyQuotientRing(R, modulus, var=var,
                         name=f"{R.name}[{var}]/({var}^{k} - {_atom(R.format(lam))})")
    S.adjoined = (int(lam), k)
    return S


def _find_irreducible(p: int, k: int) -> list[int]:
    base = IntegerMod(p)
    for tail in itertools.product(range(p), repeat=k):
        coeffs = list(reversed(tail))
        if coeffs[0] == 0:
            continue
        S = PolyQuotientRing(base, coeffs)
        if S.is_field():
            return coeffs
    raise RingError(f"no irreducible polynomial of degree {k} mod {p}")  # pragma: no cover


def GF(q: int) -> FiniteRing:
    """Finite field with q elements (q = p^k)."""
    fac = zmod.prime_power_factors(q)
    if len(fac) != 1:
        raise RingError(f"GF({q}): {q} is not a prime power")
    p, k = fac[0]
    if k == 1:
        return IntegerMod(p)
    S = PolyQuotientRing(IntegerMod(p), _find_irreducible(p, k), var="w", name=f"GF({q})")
    return S


# ---------------------------------------------------------------------------
# fractions and localization


@dataclass(frozen=True)
class Ideal:
    """Ideal of a finite ring as an explicit element set with generator witnesses."""

    elements: frozenset
    generators: tuple

    def __contains__(self, a) -> bool:
        return int(a) in self.elements

    def __len__(self) -> int:
        return len(self.elements)


class FractionRing(FiniteRing):
    """Y^{-1} R for a finite ring R and a multiplicatively closed Y.

    Codes index equivalence classes; ``fraction(code)`` returns the least
    representative pair (a, s).
    """

    def __init__(self, base: FiniteRing, Y: Iterable[int], name: str | None = None):
        Y = sorted({int(y) for y in Y})
        if base.one not in Y:
            raise RingError("1 must belong to Y")
        Yarr = np.array(Y)
        if not np.isin(base.mul_t[np.ix_(Yarr, Yarr)], Yarr).all():
            raise RingError("Y is not multiplicatively closed")
        if base.zero in Y:
            raise RingError("0 in Y gives the zero ring")
        self.base = base
        self.Y = tuple(Y)
        pairs = [(a, s) for s in Y for a in base.elements()]
        # union-find on the relation a/s ~ b/t  <=>  (at - bs) u = 0 for some u in Y
        n = len(base)
        parent = list(range(len(pairs)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        A = np.array([p[0] for p in pairs])
        S = np.array([p[1] for p in pairs])
        for i in range(len(pairs)):
            a, s = pairs[i]
            at = base.mul_t[a, S]
            bs = base.mul_t[A, s]
            diff = base.add_t[at, base.neg_t[bs]]
            hit = (base.mul_t[np.ix_(diff, Yarr)] == 0).any(axis=1)
            for j in np.nonzero(hit)[0]:
                ri, rj = find(i), find(int(j))
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
        roots = sorted({find(i) for i in range(len(pairs))}, key=lambda r: (pairs[r][0] != 0, pairs[r][0] != 1 or pairs[r][1] != 1, pairs[r][1], pairs[r][0]))
        # roots are minimal indices of their classes; order puts 0/1 and 1/1 first
        code_of_root = {r: c for c, r in enumerate(roots)}
        self._class = np.array([code_of_root[find(i)] for i in range(len(pairs))])
        self._pair_index = {p: i for i, p in enumerate(pairs)}
        reps = [pairs[r] for r in roots]
        self._reps = reps
        m = len(reps)
        add = np.zeros((m, m), dtype=np.int64)
        mul = np.zeros((m, m), dtype=np.int64)
        for x, (a, s) in enumerate(reps):
            for y, (b, t) in enumerate(reps):
                st = base.mul(s, t)
                num = base.add(base.mul(a, t), base.mul(b, s))
                add[x, y] = self._class[self._pair_index[(num, st)]]
                mul[x, y] = self._class[self._pair_index[(base.mul(a, b), st)]]
        labels = [[base.label(a), base.label(s)] for a, s in reps]
        if name is None:
            name = f"Frac({base.name}; {len(Y)} denominators)"
        n_classes = m
        if n_classes < 2:
            raise RingError("the ring of fractions is the zero ring")
        del n
        super().__init__(name, labels, add, mul)

    def fraction(self, code: int) -> tuple[int, int]:
        return self._reps[int(code)]

    def from_fraction(self, a: int, s: int) -> int:
        if int(s) not in self.Y:
            raise RingError("denominator outside Y")
        return int(self._class[self._pair_index[(int(a), int(s))]])

    def from_base(self, a: int) -> int:
        return self.from_fraction(a, self.base.one)

    def equivalent(self, a, s, b, t) -> bool:
        """The defining relation, evaluated directly on the base ring."""
        R = self.base
        diff = R.sub(R.mul(a, t), R.mul(b, s))
        return any(R.mul(diff, u) == R.zero for u in self.Y)

    def format(self, x) -> str:
        a, s = self.fraction(x)
        if s == self.base.one:
            return self.base.format(a)
        return f"{self.base.format(a)}/{self.base.format(s)}"


class IntegerFractions(Ring):
    """Y^{-1} Z for Y generated by the given nonzero integers."""

    finite = False
    is_domain = True

    def __init__(self, generators: Sequence[int]):
        gens = [int(g) for g in generators if int(g) != 1]
        if any(g == 0 for g in gens):
            raise RingError("0 in Y gives the zero ring")
        self.generators = tuple(gens)
        self.name = "Z" if not gens else f"Z[1/{'*'.join(map(str, gens))}]"
        self.zero = (0, 1)
        self.one = (1, 1)

    def in_Y(self, s: int) -> bool:
        s = abs(s)
        for g in self.generators:
            while g not in (1, -1) and s % g == 0:
                s //= g
        return s == 1

    def element(self, a: int, s: int = 1):
        if not self.in_Y(s):
            raise RingError(f"{s} is not in Y")
        return (int(a), int(s))

    def eq(self, x, y) -> bool:
        (a, s), (b, t) = x, y
        return a * t - b * s == 0  # Z is a domain, so u = 1 suffices

    def add(self, x, y):
        (a, s), (b, t) = x, y
        return (a * t + b * s, s * t)

    def mul(self, x, y):
        return (x[0] * y[0], x[1] * y[1])

    def neg(self, x):
        return (-x[0], x[1])

    def is_unit(self, x) -> bool:
        a, _ = x
        return a != 0 and self.in_Y(abs(a))


def fractions_ring(R: Ring, Y) -> Ring:
    """Ring of fractions of R with denominators in Y.

    For finite R, Y is an explicit set; for Z it is a list of generators of the
    multiplicative monoid.
    """
    if isinstance(R, Integers):
        return IntegerFractions(list(Y))
    if not R.finite:
        raise UnsupportedCapability("fractions over this ring are not supported")
    return FractionRing(R, Y)


def ideals(R: FiniteRing) -> list[Ideal]:
    """All ideals of a finite ring, ordered by size then elements."""
    if len(R) > SIZE_BUDGET:
        raise UnsupportedCapability("ring too large for ideal enumeration")
    principal = {}
    for a in R.elements():
        el = frozenset(int(x) for x in np.unique(R.mul_t[a]))
        principal.setdefault(el, (a,))
    found = dict(principal)
    frontier = list(found.items())
    while frontier:
        nxt = []
        for el, gens in frontier:
            for el2, gens2 in principal.items():
                if el2 <= el:
                    continue
                a = np.array(sorted(el))
                b = np.array(sorted(el2))
                s = frozenset(int(x) for x in np.unique(R.add_t[np.ix_(a, b)]))
                if s not in found:
                    found[s] = gens + gens2
                    nxt.append((s, found[s]))
        frontier = nxt
    out = [Ideal(el, tuple(int(g) for g in gens)) for el, gens in found.items()]
    return sorted(out, key=lambda I: (len(I), sorted(I.elements)))


def maximal_ideals(R: Ring) -> list[Ideal]:
    if not getattr(R, "finite", False):
        raise UnsupportedCapability(f"{R} is not enumerable")
    proper = [I for I in ideals(R) if R.one not in I]
    maxi = [I for I in proper if not any(I.elements < J.elements for J in proper)]
    return sorted(maxi, key=lambda I: (-len(I), min(I.elements - {0}, default=0)))


def is_prime_ideal(R: FiniteRing, I: Ideal) -> bool:
    if R.one in I:
        return False
    inside = np.zeros(len(R), dtype=bool)
    inside[list(I.elements)] = True
    prod_in = inside[R.mul_t]
    return not (prod_in & ~inside[:, None] & ~inside[None, :]).any()


def localize_at(R: FiniteRing, P: Ideal) -> FractionRing:
    """R_P: fractions with denominators outside the prime ideal P."""
    if not is_prime_ideal(R, P):
        raise RingError("localization needs a prime ideal")
    Y = [a for a in R.elements() if a not in P]
    gens = ",".join(R.format(g) for g in P.generators)
    L = FractionRing(R, Y, name=f"loc({R.name}, ({gens}))")
    L.prime = P
    return L


def local_maximal_ideal(L: FiniteRing) -> list[int]:
    """Non-units of a local ring; raises if they do not form an ideal."""
    nonunits = np.array([a for a in L.elements() if not L.is_unit(a)])
    ok = np.isin(L.add_t[np.ix_(nonunits, nonunits)], nonunits).all() and \
        np.isin(L.mul_t[nonunits], nonunits).all()
    if not ok:
        raise RingError(f"{L.name} is not local")
    return [int(a) for a in nonunits]


def diagonal_embedding(R: FiniteRing):
    """R -> prod over maximal ideals of R_m, a |-> (a/1)_m.

    Returns the product ring and an array mapping codes of R to codes of it.
    """
    maxi = maximal_ideals(R)
    locs = [localize_at(R, m) for m in maxi]
    S = product_ring(locs)
    if len(locs) == 1:
        image = np.array([locs[0].from_base(a) for a in R.elements()])
    else:
        image = np.array([S.from_components([L.from_base(a) for L in locs]) for a in R.elements()])
    return S, image


def is_homomorphism(R: FiniteRing, S: FiniteRing, f: np.ndarray) -> bool:
    f = np.asarray(f)
    return (f[R.one] == S.one
            and (f[R.add_t] == S.add_t[np.ix_(f, f)]).all()
            and (f[R.mul_t] == S.mul_t[np.ix_(f, f)]).all())


# ---------------------------------------------------------------------------
# idempotents and automorphisms


@dataclass(frozen=True)
class IdempotentSystem:
    elements: tuple

    def check(self, R: FiniteRing) -> bool:
        es = self.elements
        if any(R.mul(e, e) != e for e in es):
            return False
        if any(R.mul(a, b) != R.zero for i, a in enumerate(es) for b in es[i + 1:]):
            return False
        total = R.zero
        for e in es:
            total = R.add(total, e)
        return total == R.one


def idempotents(R: FiniteRing) -> list[int]:
    d = np.diagonal(R.mul_t)
    return [int(a) for a in np.nonzero(d == np.arange(len(R)))[0]]


def find_idempotent_systems(R: FiniteRing, k: int) -> list[IdempotentSystem]:
    """All ordered k-tuples of orthogonal idempotents summing to 1."""
    ids = idempotents(R)
    out = []

    def extend(prefix, total):
        if len(prefix) == k - 1:
            last = R.sub(R.one, total)
            if last in ids and all(R.mul(last, e) == R.zero for e in prefix):
                out.append(IdempotentSystem(tuple(prefix) + (last,)))
            return
        for e in ids:
            if all(R.mul(e, f) == R.zero for f in prefix):
                extend(prefix + [e], R.add(total, e))

    if k < 1:
        return []
    extend([], R.zero)
    return out


def ring_generators(R: FiniteRing) -> list[int]:
    """Greedy set of elements generating R as a ring."""
    gens: list[int] = []
    span = _sum_closure(R, [0, 1], with_mul=True)
    while len(span) < len(R):
        missing = np.setdiff1d(np.arange(len(R)), span)
        gens.append(int(missing[0]))
        span = _sum_closure(R, [0, 1, *gens], with_mul=True)
    return gens


def _extend_map(R: FiniteRing, gens: Sequence[int], images: Sequence[int]) -> np.ndarray | None:
    n = len(R)
    f = np.full(n, -1, dtype=np.int64)
    f[0], f[1] = 0, 1
    for g, h in zip(gens, images):
        if f[g] >= 0 and f[g] != h:
            return None
        f[g] = h
    while True:
        known = np.nonzero(f >= 0)[0]
        fk = f[known]
        new_codes = np.concatenate([R.add_t[np.ix_(known, known)].ravel(), R.mul_t[np.ix_(known, known)].ravel()])
        new_imgs = np.concatenate([R.add_t[np.ix_(fk, fk)].ravel(), R.mul_t[np.ix_(fk, fk)].ravel()])
        clash = (f[new_codes] >= 0) & (f[new_codes] != new_imgs)
        if clash.any():
            return None
        fresh = f[new_codes] < 0
        if not fresh.any():
            break
        codes, imgs = new_codes[fresh], new_imgs[fresh]
        order = np.argsort(codes, kind="stable")
        codes, imgs = codes[order], imgs[order]
        uniq, start = np.unique(codes, return_index=True)
        # inconsistent images for one new code
        for u, s in zip(uniq, start):
            seg = imgs[codes == u]
            if (seg != seg[0]).any():
                return None
        f[uniq] = imgs[start]
    return f


def ring_automorphisms(R: FiniteRing) -> list[np.ndarray]:
    """All automorphisms of a finite ring as code permutations; identity first."""
    gens = ring_generators(R)
    out = []
    for images in itertools.product(range(len(R)), repeat=len(gens)):
        f = _extend_map(R, gens, images)
        if f is None or (f < 0).any():
            continue
        if len(np.unique(f)) != len(R) or not is_homomorphism(R, R, f):
            continue
        out.append(f)
    out.sort(key=lambda f: (not (f == np.arange(len(R))).all(), tuple(f)))
    return out


# ---------------------------------------------------------------------------
# ring-spec grammar


class RingSpecError(ValueError):
    def __init__(self, text: str, pos: int, msg: str):
        self.text, self.pos = text, pos
        super().__init__(f"{msg} at position {pos} in {text!r}")


class _Parser:
    def __init__(self, text: str):
        self.orig = text
        # drop whitespace but keep positions for error messages
        self.chars = [(i, c.lower()) for i, c in enumerate(text) if not c.isspace()]
        self.i = 0

    def pos(self) -> int:
        return self.chars[self.i][0] if self.i < len(self.chars) else len(self.orig)

    def peek(self, k: int = 1) -> str:
        return "".join(c for _, c in self.chars[self.i:self.i + k])

    def error(self, msg: str):
        raise RingSpecError(self.orig, self.pos(), msg)

    def expect(self, s: str):
        if self.peek(len(s)) != s:
            self.error(f"expected {s!r}")
        self.i += len(s)

    def accept(self, s: str) -> bool:
        if self.peek(len(s)) == s:
            self.i += len(s)
            return True
        return False

    def integer(self) -> int:
        sign = -1 if self.accept("-") else 1
        start = self.i
        while self.i < len(self.chars) and self.chars[self.i][1].isdigit():
            self.i += 1
        if start == self.i:
            self.error("expected an integer")
        return sign * int("".join(c for _, c in self.chars[start:self.i]))

    def parse(self) -> Ring:
        R = self.product()
        if self.i != len(self.chars):
            self.error("unexpected trailing input")
        return R

    def product(self) -> Ring:
        factors = [self.atom()]
        while self.accept("x"):
            factors.append(self.atom())
        if len(factors) == 1:
            return factors[0]
        if not all(f.finite for f in factors):
            self.error("products need finite factors")
        return product_ring(factors)

    def atom(self) -> Ring:
        if self.accept("("):
            R = self.product()
            self.expect(")")
            return self.suffix(R)
        if self.accept("loc("):
            R = self.product()
            self.expect(",")
            start = self.pos()
            p = self.integer()
            self.expect(")")
            if not R.finite:
                raise RingSpecError(self.orig, start, "loc() needs a finite ring")
            P = _ideal_generated(R, R.from_int(p))
            if not is_prime_ideal(R, P):
                raise RingSpecError(self.orig, start, f"({p}) is not a prime ideal of {R.name}")
            return self.suffix(localize_at(R, P))
        if self.accept("gf("):
            start = self.pos()
            q = self.integer()
            self.expect(")")
            try:
                return self.suffix(GF(q))
            except RingError as exc:
                raise RingSpecError(self.orig, start, str(exc)) from None
        if self.accept("z"):
            if self.accept("/"):
                start = self.pos()
                n = self.integer()
                if n < 2:
                    raise RingSpecError(self.orig, start, "modulus must be at least 2")
                return self.suffix(IntegerMod(n))
            return ZZ
        self.error("expected a ring")

    def suffix(self, R: Ring) -> Ring:
        while self.peek() == "[":
            start = self.pos()
            self.expect("[")
            var = self.peek()
            if not var.isalpha():
                self.error("expected a variable name")
            self.i += 1
            self.expect("]")
            self.expect("/(")
            self.expect(var)
            self.expect("^")
            k = self.integer()
            self.expect("-")
            c = self.integer()
            self.expect(")")
            if not R.finite:
                raise RingSpecError(self.orig, start, "extensions need a finite base ring")
            try:
                R = quotient_extension(R, R.from_int(c), k, var=var)
            except RingError as exc:
                raise RingSpecError(self.orig, start, str(exc)) from None
        return R


def _ideal_generated(R: FiniteRing, a: int) -> Ideal:
    return Ideal(frozenset(int(x) for x in np.unique(R.mul_t[a])), (int(a),))


def parse_ring(text: str) -> Ring:
    """Parse ``Z/n``, ``A x B``, ``Z/n[y]/(y^k - c)``, ``loc(Z/n, p)``, ``GF(q)``, ``Z``."""
    if not text or not text.strip():
        raise RingSpecError(text or "", 0, "empty ring spec")
    return _Parser(text).parse()
