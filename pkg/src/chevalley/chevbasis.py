"""Chevalley basis over Z and the adjoint representation.

Basis order: h_1..h_l (simple coroots), then x_a for a in ``rs.roots``.
Structure constants for positive pairs are fixed by taking every extraspecial
pair positive; all others follow from the Jacobi identity and the standard
symmetries, and the finished table is re-checked against Jacobi.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property

import numpy as np

from .rootsys import RootSystem, neg


class ChevalleyBasisError(RuntimeError):
    pass


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


class ChevalleyBasis:
    def __init__(self, rs: RootSystem, validate: bool | None = None):
        self.rs = rs
        self._pos: dict = {}
        self._extraspecial: dict = {}
        self._build()
        if validate is None:
            validate = self.dim <= 80
        if validate:
            self.check_jacobi()

    # ---- labels
    @property
    def dim(self) -> int:
        return self.rs.rank + len(self.rs.roots)

    @cached_property
    def labels(self) -> list[str]:
        return [f"h{i + 1}" for i in range(self.rs.rank)] + [f"x[{self.rs.name(a)}]" for a in self.rs.roots]

    def root_index(self, a) -> int:
        return self.rs.rank + self.rs.index[tuple(a)]

    # ---- structure constants
    def string_p(self, a, b) -> int:
        """Largest p with b - p a a root."""
        p = 0
        c = _sub(b, a)
        while c in self.rs.index:
            p += 1
            c = _sub(c, a)
        return p

    def N(self, a, b) -> int:
        """Structure constant with [x_a, x_b] = N(a, b) x_{a+b}."""
        rs = self.rs
        s = _add(a, b)
        if s not in rs.index:
            return 0
        pa, pb = rs.is_positive(a), rs.is_positive(b)
        if pa and pb:
            return self._pos[(a, b)]
        if not pa and not pb:
            return -self._pos[(neg(a), neg(b))]
        c = neg(s)
        pc = rs.is_positive(c)
        norm = rs.inner
        if pb == pc:
            val = Fraction(norm(c, c), norm(a, a)) * self.N(b, c)
        else:
            val = Fraction(norm(c, c), norm(b, b)) * self.N(c, a)
        if val.denominator != 1:
            raise ChevalleyBasisError(f"non-integral constant N({a}, {b})")
        return int(val)

    def _build(self):
        rs = self.rs
        norm = rs.inner
        by_height: dict = {}
        for xi in rs.positive:
            by_height.setdefault(rs.height(xi), []).append(xi)
        for h in sorted(by_height):
            if h < 2:
                continue
            for xi in by_height[h]:
                alpha = beta = None
                for s in rs.simple:
                    d = _sub(xi, s)
                    if rs.is_positive(d) and d in rs.index:
                        alpha, beta = s, d
                        break
                n_ab = self.string_p(alpha, beta) + 1
                self._pos[(alpha, beta)] = n_ab
                self._pos[(beta, alpha)] = -n_ab
                self._extraspecial[xi] = (alpha, beta)
                for gamma in rs.positive:
                    delta = _sub(xi, gamma)
                    if delta not in rs.index or not rs.is_positive(delta):
                        continue
                    if gamma in (alpha, beta) or (gamma, delta) in self._pos:
                        continue
                    # Jacobi on (x_alpha, x_beta, x_-gamma), solved for N(gamma, delta)
                    t = 0
                    bg = _sub(beta, gamma)
                    if bg in rs.index:
                        t += self.N(beta, neg(gamma)) * self.N(alpha, bg)
                    ag = _sub(alpha, gamma)
                    if ag in rs.index:
                        t += self.N(neg(gamma), alpha) * self.N(beta, ag)
                    val = Fraction(-t * norm(xi, xi), norm(delta, delta) * n_ab)
                    if val.denominator != 1 or abs(val) != self.string_p(gamma, delta) + 1:
                        raise ChevalleyBasisError(f"inconsistent constant for ({gamma}, {delta}): {val}")
                    self._pos[(gamma, delta)] = int(val)
                    self._pos[(delta, gamma)] = -int(val)

    @property
    def extraspecial_pairs(self) -> dict:
        return dict(self._extraspecial)

    # ---- brackets on basis vectors
    def bracket_basis(self, i: int, j: int) -> np.ndarray:
        """Coordinates of [b_i, b_j]."""
        rs = self.rs
        l = rs.rank
        out = np.zeros(self.dim, dtype=np.int64)
        if i < l and j < l:
            return out
        if i < l:
            b = rs.roots[j - l]
            out[j] = rs.pairing(b, rs.simple[i])
            return out
        if j < l:
            return -self.bracket_basis(j, i)
        a, b = rs.roots[i - l], rs.roots[j - l]
        s = _add(a, b)
        if all(x == 0 for x in s):
            out[:l] = rs.coroot_coefficients(a)
            return out
        n = self.N(a, b)
        if n:
            out[self.root_index(s)] = n
        return out

    def bracket(self, u, v) -> np.ndarray:
        """Bracket of two coordinate vectors."""
        u = np.asarray(u)
        v = np.asarray(v)
        out = np.zeros(self.dim, dtype=np.int64)
        for i in np.nonzero(u)[0]:
            for j in np.nonzero(v)[0]:
                out += u[i] * v[j] * self.bracket_basis(int(i), int(j))
        return out

    @cached_property
    def ad_matrices(self) -> np.ndarray:
        """``ad[i]`` is the matrix of ad(b_i); column j holds [b_i, b_j]."""
        d = self.dim
        ad = np.zeros((d, d, d), dtype=np.int64)
        for i in range(d):
            for j in range(d):
                ad[i, :, j] = self.bracket_basis(i, j)
        return ad

    def structure_table(self) -> dict:
        """Nonzero brackets keyed by ordered label pairs."""
        out = {}
        for i in range(self.dim):
            for j in range(self.dim):
                v = self.bracket_basis(i, j)
                if v.any():
                    out[f"{self.labels[i]},{self.labels[j]}"] = v.tolist()
        return out

    def check_jacobi(self) -> None:
        """ad must be a Lie homomorphism: [ad u, ad v] = ad [u, v] on all basis pairs."""
        ad = self.ad_matrices
        d = self.dim
        for i in range(d):
            for j in range(i + 1, d):
                lhs = ad[i] @ ad[j] - ad[j] @ ad[i]
                rhs = np.tensordot(self.bracket_basis(i, j), ad, axes=1)
                if not (lhs == rhs).all():
                    raise ChevalleyBasisError(f"Jacobi fails for ({self.labels[i]}, {self.labels[j]})")


_CACHE: dict = {}


def build_chevalley_basis(rs: RootSystem) -> ChevalleyBasis:
    if rs.label not in _CACHE:
        _CACHE[rs.label] = ChevalleyBasis(rs)
    return _CACHE[rs.label]


def adjoint_representation(B: ChevalleyBasis):
    from .reps import Representation

    rs = B.rs
    mats = {a: B.ad_matrices[B.root_index(a)] for a in rs.roots}
    weights = [(0,) * rs.rank] * rs.rank + [rs.dynkin_labels(a) for a in rs.roots]
    return Representation(rs, mats, weights, name="adjoint", basis=B)


def killing_form(B: ChevalleyBasis) -> np.ndarray:
    ad = B.ad_matrices
    return np.einsum("ikl,jlk->ij", ad, ad)
