"""Indecomposable root systems of rank > 1 in fixed integer realizations."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

Root = tuple  # integer coordinate vector


class RootSystemError(ValueError):
    pass


def _unit(n: int, i: int, c: int = 1) -> list[int]:
    v = [0] * n
    v[i] = c
    return v


def _simple_roots(family: str, l: int) -> list[list[int]]:
    if family == "A":
        return [[1 if k == i else -1 if k == i + 1 else 0 for k in range(l + 1)] for i in range(l)]
    if family in "BCD":
        base = [[1 if k == i else -1 if k == i + 1 else 0 for k in range(l)] for i in range(l - 1)]
        if family == "B":
            return base + [_unit(l, l - 1)]
        if family == "C":
            return base + [_unit(l, l - 1, 2)]
        last = [0] * l
        last[l - 2] = last[l - 1] = 1
        return base + [last]
    if family == "G":
        return [[1, -1, 0], [-2, 1, 1]]
    if family == "F":
        # Bourbaki realization scaled by 2 to stay integral
        return [[0, 2, -2, 0], [0, 0, 2, -2], [0, 0, 0, 2], [1, -1, -1, -1]]
    if family == "E":
        e8 = [[1, -1, -1, -1, -1, -1, -1, 1],
              [2, 2, 0, 0, 0, 0, 0, 0],
              [-2, 2, 0, 0, 0, 0, 0, 0],
              [0, -2, 2, 0, 0, 0, 0, 0],
              [0, 0, -2, 2, 0, 0, 0, 0],
              [0, 0, 0, -2, 2, 0, 0, 0],
              [0, 0, 0, 0, -2, 2, 0, 0],
              [0, 0, 0, 0, 0, -2, 2, 0]]
        return e8[:l]
    raise RootSystemError(f"unknown family {family!r}")


VALID_RANKS = {
    "A": lambda l: l >= 2,
    "B": lambda l: l >= 2,
    "C": lambda l: l >= 2,
    "D": lambda l: l >= 4,
    "E": lambda l: l in (6, 7, 8),
    "F": lambda l: l == 4,
    "G": lambda l: l == 2,
}


@dataclass(frozen=True)
class RootSystem:
    family: str
    rank: int
    simple: tuple
    positive: tuple
    _coeffs: dict = field(repr=False, compare=False)

    # ---- basic data
    @cached_property
    def roots(self) -> tuple:
        """Positive roots in the fixed order, followed by their negatives."""
        return self.positive + tuple(neg(a) for a in self.positive)

    @cached_property
    def index(self) -> dict:
        return {a: i for i, a in enumerate(self.roots)}

    @property
    def label(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def n_positive(self) -> int:
        return len(self.positive)

    def __contains__(self, a) -> bool:
        return tuple(a) in self.index

    def check_root(self, a) -> Root:
        a = tuple(int(x) for x in a)
        if a not in self.index:
            raise RootSystemError(f"{a} is not a root of {self.label}")
        return a

    def inner(self, a, b) -> int:
        return int(sum(x * y for x, y in zip(a, b)))

    def coefficients(self, a) -> tuple:
        """Coordinates of a root with respect to the simple roots."""
        a = tuple(a)
        if a in self._coeffs:
            return self._coeffs[a]
        return tuple(-c for c in self._coeffs[neg(a)])

    def from_coefficients(self, coeffs) -> Root:
        v = [0] * len(self.simple[0])
        for c, s in zip(coeffs, self.simple):
            for k in range(len(v)):
                v[k] += c * s[k]
        return tuple(v)

    def height(self, a) -> int:
        return sum(self.coefficients(a))

    def is_positive(self, a) -> bool:
        return tuple(a) in self._coeffs

    def is_long(self, a) -> bool:
        return self.inner(a, a) == self.max_norm

    @cached_property
    def max_norm(self) -> int:
        return max(self.inner(a, a) for a in self.positive)

    @cached_property
    def simply_laced(self) -> bool:
        return len({self.inner(a, a) for a in self.positive}) == 1

    # ---- pairing and reflections
    def pairing(self, a, b) -> int:
        """<a, b> = 2 (a, b) / (b, b), exact."""
        num, den = 2 * self.inner(a, b), self.inner(b, b)
        q, r = divmod(num, den)
        if r:
            raise RootSystemError(f"non-integral pairing <{a}, {b}>")
        return q

    def reflect(self, a, b) -> Root:
        """w_a(b) = b - <b, a> a."""
        a = self.check_root(a)
        b = self.check_root(b)
        c = self.pairing(b, a)
        r = tuple(x - c * y for x, y in zip(b, a))
        if r not in self.index:
            raise AssertionError(f"reflection left the root system: w_{a}({b}) = {r}")
        return r

    @cached_property
    def cartan_matrix(self) -> np.ndarray:
        """``C[i, j] = <alpha_i, alpha_j>``."""
        l = self.rank
        return np.array([[self.pairing(self.simple[i], self.simple[j]) for j in range(l)] for i in range(l)])

    def coroot_coefficients(self, a) -> tuple:
        """Coordinates of a^vee in the simple coroots."""
        n = self.inner(a, a)
        out = []
        for c, s in zip(self.coefficients(a), self.simple):
            q, r = divmod(c * self.inner(s, s), n)
            assert r == 0
            out.append(q)
        return tuple(out)

    def dynkin_labels(self, a) -> tuple:
        """(<a, alpha_i>)_i for any vector a in the span."""
        return tuple(self.pairing(a, s) for s in self.simple)

    def sum(self, a, b) -> Root | None:
        s = tuple(x + y for x, y in zip(a, b))
        return s if s in self.index else None

    # ---- names
    def name(self, a) -> str:
        terms = []
        for i, c in enumerate(self.coefficients(a), start=1):
            if c == 0:
                continue
            mag = abs(c)
            t = f"a{i}" if mag == 1 else f"{mag}*a{i}"
            terms.append(("-" if c < 0 else "+") + t)
        s = "".join(terms)
        return s[1:] if s.startswith("+") else s

    def parse_root(self, text: str) -> Root:
        """Parse ``a1+2*a2`` (or letters ``a``, ``b``, ... for simple roots)."""
        t = text.replace(" ", "").lower()
        if not t:
            raise RootSystemError("empty root name")
        coeffs = [0] * self.rank
        pos = 0
        pattern = re.compile(r"([+-]?)(?:(\d+)\*?)?(a\d+|[a-h])")
        while pos < len(t):
            m = pattern.match(t, pos)
            if not m or (pos > 0 and not m.group(1)):
                raise RootSystemError(f"cannot parse root {text!r} at position {pos}")
            sign = -1 if m.group(1) == "-" else 1
            mult = int(m.group(2)) if m.group(2) else 1
            tok = m.group(3)
            i = int(tok[1:]) - 1 if len(tok) > 1 else ord(tok) - ord("a")
            if not 0 <= i < self.rank:
                raise RootSystemError(f"no simple root {tok!r} in {self.label}")
            coeffs[i] += sign * mult
            pos = m.end()
        root = self.from_coefficients(coeffs)
        if root not in self.index:
            raise RootSystemError(f"{text!r} is not a root of {self.label}")
        return root

    # ---- derived structure
    def orbits(self) -> list[frozenset]:
        """Weyl orbits of roots, via the simple reflections."""
        seen: set = set()
        out = []
        for a in self.roots:
            if a in seen:
                continue
            orbit = {a}
            stack = [a]
            while stack:
                b = stack.pop()
                for s in self.simple:
                    c = self.reflect(s, b)
                    if c not in orbit:
                        orbit.add(c)
                        stack.append(c)
            seen |= orbit
            out.append(frozenset(orbit))
        return out

    def diagram_automorphisms(self) -> list[tuple]:
        """Permutations of simple-root indices preserving the Cartan matrix; identity first."""
        C = self.cartan_matrix
        l = self.rank
        out = []

        def extend(perm):
            k = len(perm)
            if k == l:
                out.append(tuple(perm))
                return
            for j in range(l):
                if j in perm:
                    continue
                if C[k, k] != C[j, j]:
                    continue
                if all(C[k, i] == C[j, perm[i]] and C[i, k] == C[perm[i], j] for i in range(k)):
                    extend(perm + [j])

        extend([])
        return out

    def apply_diagram(self, perm, a) -> Root:
        """Linear extension of a simple-root permutation to a root."""
        coeffs = self.coefficients(a)
        new = [0] * self.rank
        for i, c in enumerate(coeffs):
            new[perm[i]] += c
        return self.from_coefficients(new)


def neg(a) -> Root:
    return tuple(-x for x in a)


_CACHE: dict = {}


def build_root_system(family: str, rank: int) -> RootSystem:
    """Root system of type (family, rank), e.g. ("B", 2)."""
    family = family.upper()
    if family not in VALID_RANKS:
        raise RootSystemError(f"unknown family {family!r}")
    if rank <= 1 or not VALID_RANKS[family](rank):
        raise RootSystemError(f"{family}{rank} is not a supported indecomposable type of rank > 1")
    key = (family, rank)
    if key in _CACHE:
        return _CACHE[key]
    simple = [tuple(s) for s in _simple_roots(family, rank)]

    def refl(a, b):
        c = 2 * sum(x * y for x, y in zip(b, a))
        d = sum(x * x for x in a)
        q, r = divmod(c, d)
        assert r == 0
        return tuple(x - q * y for x, y in zip(b, a))

    roots = set(simple)
    stack = list(simple)
    while stack:
        b = stack.pop()
        for s in simple:
            c = refl(s, b)
            if c not in roots:
                roots.add(c)
                stack.append(c)
    # coefficients in the simple roots via the inverse Gram matrix
    import sympy

    S = sympy.Matrix(simple)
    gram_inv = (S * S.T).inv()
    coeffs = {}
    for a in roots:
        v = gram_inv * (S * sympy.Matrix(a))
        cs = tuple(int(x) for x in v)
        if all(c >= 0 for c in cs):
            coeffs[a] = cs
    positive = sorted(coeffs, key=lambda a: (sum(coeffs[a]), tuple(-c for c in coeffs[a])))
    rs = RootSystem(family, rank, tuple(simple), tuple(positive), coeffs)
    _CACHE[key] = rs
    return rs


def parse_system(text: str) -> RootSystem:
    m = re.fullmatch(r"\s*([A-Ga-g])\s*(\d+)\s*", text)
    if not m:
        raise RootSystemError(f"cannot parse root system {text!r}")
    return build_root_system(m.group(1), int(m.group(2)))


def pairing(rs: RootSystem, a, b) -> int:
    return rs.pairing(rs.check_root(a), rs.check_root(b))


def reflect(rs: RootSystem, a, b) -> Root:
    return rs.reflect(a, b)


def embed_A2_triple(rs: RootSystem, a) -> tuple | None:
    """Roots (b, c) with b + c = a spanning an A2 subsystem with a, or None."""
    a = rs.check_root(a)
    n = rs.inner(a, a)
    for b in rs.roots:
        c = tuple(x - y for x, y in zip(a, b))
        if c not in rs.index:
            continue
        if rs.inner(b, b) != n or rs.inner(c, c) != n:
            continue
        if rs.pairing(b, c) == -1:
            return b, c
    return None
