"""Elementary Chevalley groups over finite rings.

A ``GroupContext`` pairs a representation with a ring and turns the integral
divided powers into code matrices, so x_a(t) = sum_k t^k D_k(a) is a table
lookup away.  Relations are checked exhaustively when the ring is small and
by seeded sampling otherwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import matrices as mx
from .reps import Representation
from .rings import FiniteRing, RingError, SIZE_BUDGET
from .rootsys import neg

#: default cap on the size of a generated group
CLOSURE_BUDGET = 500_000


class Undecided(RuntimeError):
    """A search ran out of budget before reaching a verdict."""


@dataclass
class GroupElement:
    matrix: np.ndarray
    word: tuple = ()

    def __eq__(self, other):
        return isinstance(other, GroupElement) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(mx.key(self.matrix))


@dataclass(frozen=True)
class TorusCharacter:
    """Values (ring codes) of a character on the basis of the weight lattice."""

    values: tuple

    def value(self, R: FiniteRing, coords) -> int:
        out = R.one
        for v, c in zip(self.values, coords):
            out = R.mul(out, R.pow(v, int(c)))
        return out


class GroupContext:
    def __init__(self, rep: Representation, R: FiniteRing):
        if not getattr(R, "finite", False):
            raise RingError("group computations need a finite ring")
        self.rep = rep
        self.R = R
        self.rs = rep.rs
        self.n = rep.dim
        self.D = {a: np.stack([R.reduce_ints(M) for M in rep.divided[a]]) for a in self.rs.roots}
        self.I = mx.identity(R, self.n)

    def __repr__(self) -> str:
        return f"GroupContext({self.rs.label}, {self.rep.name}, {self.R.name})"

    # ---- generators
    def _powers(self, t, k: int) -> np.ndarray:
        R = self.R
        t = np.asarray(t, dtype=np.int64)
        out = [np.full_like(t, R.one)]
        for _ in range(1, k):
            out.append(R.mul_t[out[-1], t])
        return np.stack(out, axis=-1)

    def x(self, a, t) -> np.ndarray:
        """x_a(t); ``t`` may be an array of codes, giving a batch."""
        R = self.R
        D = self.D[tuple(a)]
        P = self._powers(t, len(D))  # (..., k)
        terms = R.mul_t[P[..., :, None, None], D]  # (..., k, n, n)
        return mx.rsum(R, terms, axis=-3)

    def x_inv(self, a, t) -> np.ndarray:
        return self.x(a, self.R.neg_t[np.asarray(t)])

    def _unit(self, t) -> int:
        if not self.R.is_unit(t):
            raise RingError(f"{self.R.format(t)} is not invertible in {self.R.name}")
        return int(t)

    def w(self, a, t) -> np.ndarray:
        """w_a(t) = x_a(t) x_{-a}(-t^{-1}) x_a(t)."""
        R = self.R
        t = self._unit(t)
        a = tuple(a)
        return mx.matprod(R, [self.x(a, t), self.x(neg(a), R.neg(R.inv(t))), self.x(a, t)])

    def w_inv(self, a, t) -> np.ndarray:
        return self.w(a, self.R.neg(self._unit(t)))

    def h(self, a, t) -> np.ndarray:
        """h_a(t) = w_a(t) w_a(1)^{-1}."""
        return mx.matmul(self.R, self.w(a, t), self.w_inv(a, self.R.one))

    # ---- torus
    @cached_property
    def lattice_rank(self) -> int:
        return self.rep.lattice.basis.shape[1]

    def torus(self, chi: TorusCharacter) -> np.ndarray:
        R = self.R
        for v in chi.values:
            self._unit(v)
        d = [chi.value(R, c) for c in self.rep.weight_coords]
        M = np.zeros((self.n, self.n), dtype=np.int64)
        M[np.arange(self.n), np.arange(self.n)] = d
        return M

    def chi_root(self, a, u) -> TorusCharacter:
        """chi_{a,u}: lambda -> u^{<lambda, a^vee>}."""
        cc = self.rs.coroot_coefficients(a)
        B = self.rep.lattice.basis
        vals = []
        for j in range(B.shape[1]):
            e = sum(c * int(x) for c, x in zip(cc, B[:, j]))
            vals.append(self.R.pow(self._unit(u), e))
        return TorusCharacter(tuple(vals))

    def chi_on_root(self, chi: TorusCharacter, b) -> int:
        return chi.value(self.R, self.rep.lattice_coords(self.rs.dynkin_labels(b)))

    def all_characters(self):
        return (TorusCharacter(v) for v in itertools.product(self.R.units, repeat=self.lattice_rank))

    def random_character(self, rng) -> TorusCharacter:
        U = self.R.units
        return TorusCharacter(tuple(int(U[i]) for i in rng.integers(0, len(U), self.lattice_rank)))

    # ---- words
    def element(self, word) -> GroupElement:
        """Evaluate a word of tokens ('x', a, t) / ('w', a, t) / ('h', a, t) / ('torus', chi)."""
        M = self.I
        for tok in word:
            kind = tok[0]
            if kind == "x":
                G = self.x(tok[1], tok[2])
            elif kind == "w":
                G = self.w(tok[1], tok[2])
            elif kind == "h":
                G = self.h(tok[1], tok[2])
            elif kind == "torus":
                G = self.torus(tok[1])
            else:
                raise ValueError(f"unknown generator {kind!r}")
            M = mx.matmul(self.R, M, G)
        return GroupElement(M, tuple(word))

    def additive_generators(self) -> list[int]:
        return [int(g) for g in self.R.additive.gens]

    def elementary_generators(self) -> list[np.ndarray]:
        return [self.x(a, t) for a in self.rs.roots for t in self.additive_generators()]

    def subgroup_generators(self, which: str) -> list[GroupElement]:
        rs, R = self.rs, self.R
        which = which.upper()
        if which == "U":
            return [GroupElement(self.x(a, t), (("x", a, t),)) for a in rs.positive for t in self.additive_generators()]
        if which == "V":
            return [GroupElement(self.x(neg(a), t), (("x", neg(a), t),)) for a in rs.positive
                    for t in self.additive_generators()]
        if which == "H":
            return [GroupElement(self.h(a, t), (("h", a, t),)) for a in rs.simple for t in R.units]
        if which == "N":
            return [GroupElement(self.w(a, t), (("w", a, t),)) for a in rs.simple for t in R.units]
        raise ValueError(f"unknown subgroup {which!r}; expected U, V, H or N")

    def conj(self, g, x, g_inv=None) -> np.ndarray:
        R = self.R
        if g_inv is None:
            g_inv = mx.inverse(R, g)
        return mx.matmul(R, mx.matmul(R, g, x), g_inv)


# ---------------------------------------------------------------------------
# commutator constants over Z[t, u]


def _poly_mul(A: dict, B: dict) -> dict:
    out: dict = {}
    for (i, j), M in A.items():
        for (k, l), N in B.items():
            key = (i + k, j + l)
            P = M @ N
            out[key] = out.get(key, 0) + P
    return {k: v for k, v in out.items() if np.any(v)}


def _poly_x(rep: Representation, a, coef: int, it: int, ju: int) -> dict:
    """x_a(coef t^it u^ju) as a polynomial matrix."""
    return {(k * it, k * ju): (coef**k) * D for k, D in enumerate(rep.divided[tuple(a)]) if coef**k or k == 0}


def product_order(rep: Representation, a, b) -> list[tuple]:
    """Roots i a + j b (i, j >= 1) in the fixed order: by i + j, then by root index."""
    rs = rep.rs
    out = []
    for i in range(1, 4):
        for j in range(1, 4):
            g = tuple(i * x + j * y for x, y in zip(a, b))
            if g in rs.index:
                out.append((i, j, g))
    return sorted(out, key=lambda t: (t[0] + t[1], rs.index[t[2]]))


_CONST_CACHE: dict = {}


def commutator_constants(rep: Representation, a, b) -> dict:
    """c_ij with x_a(t) x_b(u) x_a(-t) x_b(-u) = prod x_{ia+jb}(c_ij t^i u^j).

    Solved degree by degree over Z[t, u]: the bidegree (i, j) part of the
    commutator equals c_ij pi(X_{ia+jb}) plus products of lower terms.
    """
    a, b = tuple(a), tuple(b)
    if all(x + y == 0 for x, y in zip(a, b)):
        raise ValueError("commutator constants need a + b != 0")
    key = (id(rep), a, b)
    if key in _CONST_CACHE:
        return _CONST_CACHE[key]
    C = _poly_x(rep, a, 1, 1, 0)
    for P in (_poly_x(rep, b, 1, 0, 1), _poly_x(rep, a, -1, 1, 0), _poly_x(rep, b, -1, 0, 1)):
        C = _poly_mul(C, P)
    order = product_order(rep, a, b)
    consts: dict = {}

    def rhs():
        P = {(0, 0): np.eye(rep.dim, dtype=np.int64)}
        for i, j, g in order:
            c = consts.get((i, j), 0)
            if c:
                P = _poly_mul(P, _poly_x(rep, g, c, i, j))
        return P

    zero = np.zeros((rep.dim, rep.dim), dtype=np.int64)
    for i, j, g in order:
        diff = C.get((i, j), zero) - rhs().get((i, j), zero)
        X = rep.X(g)
        nz = np.nonzero(X)
        c, r = divmod(int(diff[nz][0]), int(X[nz][0]))
        if r or not (diff == c * X).all():
            raise RuntimeError(f"commutator of {a} and {b} has no expression at bidegree ({i}, {j})")
        consts[(i, j)] = c
    final = rhs()
    keys = set(C) | set(final)
    if any(not np.array_equal(C.get(k, zero), final.get(k, zero)) for k in keys):
        raise RuntimeError(f"commutator of {a} and {b} is not reproduced by its constants")
    out = {(i, j): consts[(i, j)] for i, j, _ in order if consts[(i, j)]}
    _CONST_CACHE[key] = out
    return out


# ---------------------------------------------------------------------------
# relation checks


@dataclass
class RelationReport:
    relation: str
    system: str
    ring: str
    rep: str
    samples: int = 0
    exhaustive: bool = True
    failures: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "relation": self.relation,
            "system": self.system,
            "ring": self.ring,
            "rep": self.rep,
            "samples": self.samples,
            "exhaustive": self.exhaustive,
            "verdict": "pass" if self.passed else "fail",
            "failures": self.failures,
            "notes": self.notes,
        }


class _Sampler:
    """Exhaustive product of domains if within budget, else seeded draws."""

    def __init__(self, budget: int, rng):
        self.budget = budget
        self.rng = rng

    def pairs(self, A, B, force: bool):
        A, B = np.asarray(A), np.asarray(B)
        if force or len(A) * len(B) <= self.budget:
            a, b = np.meshgrid(A, B, indexing="ij")
            return a.ravel(), b.ravel(), True
        k = self.budget
        return A[self.rng.integers(0, len(A), k)], B[self.rng.integers(0, len(B), k)], False


def _fail_rows(lhs, rhs) -> np.ndarray:
    return np.nonzero(~(lhs == rhs).reshape(len(lhs), -1).all(axis=1))[0]


RELATIONS = ("R1", "R2", "R3", "R4", "R5", "R6")


def verify_relations(G: GroupContext, relations=RELATIONS, exhaustive: bool = False,
                     budget: int = SIZE_BUDGET, seed: int = 0) -> list[RelationReport]:
    rng = np.random.default_rng(seed)
    samp = _Sampler(budget, rng)
    out = []
    for rel in relations:
        rep = RelationReport(rel, G.rs.label, G.R.name, G.rep.name)
        _CHECKS[rel](G, rep, samp, exhaustive)
        out.append(rep)
    return out


def _fmt(G, t):
    return G.R.label(int(t))


def _check_R1(G, report, samp, force):
    R, rs = G.R, G.rs
    elems = np.arange(len(R))
    t, u, full = samp.pairs(elems, elems, force)
    report.exhaustive = full
    for a in rs.roots:
        lhs = mx.matmul(R, G.x(a, t), G.x(a, u))
        rhs = G.x(a, R.add_t[t, u])
        report.samples += len(t)
        for k in _fail_rows(lhs, rhs)[:5]:
            report.failures.append({"root": rs.name(a), "t": _fmt(G, t[k]), "u": _fmt(G, u[k])})


def _check_R2(G, report, samp, force):
    R, rs = G.R, G.rs
    elems = np.arange(len(R))
    t, u, full = samp.pairs(elems, elems, force)
    report.exhaustive = full
    table = {}
    for a in rs.roots:
        for b in rs.roots:
            if a == neg(b):
                continue
            consts = commutator_constants(G.rep, a, b)
            table[f"{rs.name(a)},{rs.name(b)}"] = {f"{i},{j}": c for (i, j), c in consts.items()}
            lhs = mx.matprod(R, [G.x(a, t), G.x(b, u), G.x_inv(a, t), G.x_inv(b, u)])
            rhs = np.broadcast_to(G.I, lhs.shape)
            for i, j, g in product_order(G.rep, a, b):
                c = consts.get((i, j), 0)
                if not c:
                    continue
                arg = R.mul_t[R.from_int(c), R.mul_t[G._powers(t, i + 1)[..., i], G._powers(u, j + 1)[..., j]]]
                rhs = mx.matmul(R, rhs, G.x(g, arg))
            report.samples += len(t)
            for k in _fail_rows(lhs, rhs)[:5]:
                report.failures.append({"pair": [rs.name(a), rs.name(b)], "t": _fmt(G, t[k]), "u": _fmt(G, u[k])})
    report.notes["constants"] = table


def _reflect_weight(rs, a, lam):
    """Reflection in Dynkin coordinates: lam - <lam, a^vee> a."""
    cc = rs.coroot_coefficients(a)
    k = sum(c * x for c, x in zip(cc, lam))
    return tuple(x - k * y for x, y in zip(lam, rs.dynkin_labels(a)))


def _check_R3(G, report, samp, force):
    """w_a = w_a(1) is a monomial +-1 matrix carrying weight lines along the reflection,
    and its square is h_a(-1)."""
    R, rs = G.R, G.rs
    widx = {}
    for k, lam in enumerate(G.rep.weights):
        widx.setdefault(lam, []).append(k)
    pm = {R.one, R.neg(R.one)}
    for a in rs.roots:
        W = G.w(a, R.one)
        report.samples += 1
        problems = []
        for col in range(G.n):
            rows = np.nonzero(W[:, col])[0]
            lam = G.rep.weights[col]
            target = _reflect_weight(rs, a, lam)
            if any(G.rep.weights[r] != target for r in rows):
                problems.append(f"column {col} leaves the reflected weight space")
            if len(widx.get(lam, [])) == 1 and (len(rows) != 1 or int(W[rows[0], col]) not in pm):
                problems.append(f"column {col} is not a signed basis vector")
        if not np.array_equal(mx.matmul(R, W, W), G.h(a, R.neg(R.one))):
            problems.append("w_a(1)^2 != h_a(-1)")
        for p in problems[:3]:
            report.failures.append({"root": rs.name(a), "problem": p})


def _check_R4(G, report, samp, force):
    R, rs = G.R, G.rs
    units = R.units
    for a in rs.roots:
        W, Wi = G.w(a, R.one), G.w_inv(a, R.one)
        for b in rs.roots:
            wb = rs.reflect(a, b)
            for t in units:
                report.samples += 1
                if not np.array_equal(G.conj(W, G.h(b, t), Wi), G.h(wb, t)):
                    report.failures.append({"pair": [rs.name(a), rs.name(b)], "t": _fmt(G, t)})


def _check_R5(G, report, samp, force):
    R, rs = G.R, G.rs
    units = np.array(R.units)
    signs = {}
    for a in rs.roots:
        W, Wi = G.w(a, R.one), G.w_inv(a, R.one)
        for b in rs.roots:
            wb = rs.reflect(a, b)
            lhs = G.conj(W, G.x(b, units), Wi)
            report.samples += len(units)
            c = None
            for s in (1, -1):
                if np.array_equal(lhs, G.x(wb, R.mul_t[R.from_int(s), units])):
                    c = s
                    break
            if c is None:
                report.failures.append({"pair": [rs.name(a), rs.name(b)], "problem": "no sign c = +-1 fits"})
            else:
                signs[f"{rs.name(a)},{rs.name(b)}"] = c
    report.notes["signs"] = signs


def _check_R6(G, report, samp, force):
    R, rs = G.R, G.rs
    units = np.array(R.units)
    elems = np.arange(len(R))
    t, u, full = samp.pairs(units, elems, force)
    report.exhaustive = full
    for a in rs.roots:
        Hs = {int(s): (G.h(a, s), G.h(a, R.inv(int(s)))) for s in np.unique(t)}
        H = np.stack([Hs[int(s)][0] for s in t])
        Hi = np.stack([Hs[int(s)][1] for s in t])
        for b in rs.roots:
            e = rs.pairing(b, a)
            tp = np.array([R.pow(int(s), e) for s in t], dtype=np.int64)
            lhs = mx.matprod(R, [H, G.x(b, u), Hi])
            rhs = G.x(b, R.mul_t[tp, u])
            report.samples += len(t)
            for k in _fail_rows(lhs, rhs)[:5]:
                report.failures.append({"pair": [rs.name(a), rs.name(b)], "t": _fmt(G, t[k]), "u": _fmt(G, u[k])})


_CHECKS = {"R1": _check_R1, "R2": _check_R2, "R3": _check_R3, "R4": _check_R4, "R5": _check_R5, "R6": _check_R6}


def verify_torus_conjugation(G: GroupContext, samples: int = 200, seed: int = 0) -> RelationReport:
    """h(chi) x_b(xi) h(chi)^{-1} = x_b(chi(b) xi) on seeded triples."""
    R, rs = G.R, G.rs
    rng = np.random.default_rng(seed)
    report = RelationReport("e4", rs.label, R.name, G.rep.name, exhaustive=False)
    for _ in range(samples):
        chi = G.random_character(rng)
        b = rs.roots[int(rng.integers(0, len(rs.roots)))]
        xi = int(rng.integers(0, len(R)))
        Hm = G.torus(chi)
        Hinv = G.torus(TorusCharacter(tuple(R.inv(v) for v in chi.values)))
        lhs = mx.matprod(R, [Hm, G.x(b, xi), Hinv])
        rhs = G.x(b, R.mul(G.chi_on_root(chi, b), xi))
        report.samples += 1
        if not np.array_equal(lhs, rhs):
            report.failures.append({"chi": [R.label(v) for v in chi.values], "root": rs.name(b), "xi": R.label(xi)})
    return report


# ---------------------------------------------------------------------------
# finite groups by closure


class MatrixGroup:
    """Subgroup of GL_N(R) generated by finitely many matrices, enumerated by BFS."""

    def __init__(self, R: FiniteRing, gens, budget: int = CLOSURE_BUDGET):
        self.R = R
        self.gens = [np.asarray(g, dtype=np.int64) for g in gens]
        self.n = self.gens[0].shape[0] if self.gens else 0
        self.budget = budget
        self._elements = None
        self._index: dict | None = None

    def _close(self):
        R = self.R
        I = mx.identity(R, self.n)
        index = {mx.key(I): 0}
        elems = [I]
        frontier = I[None]
        gens = np.stack(self.gens)
        while len(frontier):
            new = []
            for start in range(0, len(frontier), 4096):
                block = frontier[start:start + 4096]
                prods = mx.matmul(R, block[:, None], gens[None]).reshape(-1, self.n, self.n)
                for M in prods:
                    k = M.tobytes()
                    if k not in index:
                        index[k] = len(elems)
                        elems.append(M)
                        new.append(M)
                        if len(elems) > self.budget:
                            raise Undecided(f"group closure exceeded budget {self.budget}")
            frontier = np.stack(new) if new else np.zeros((0, self.n, self.n), dtype=np.int64)
        self._elements = np.stack(elems)
        self._index = index

    @property
    def elements(self) -> np.ndarray:
        if self._elements is None:
            self._close()
        return self._elements

    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, M) -> bool:
        if self._index is None:
            self._close()
        return mx.key(M) in self._index

    def center(self) -> np.ndarray:
        """Brute force: elements commuting with every generator."""
        E = self.elements
        ok = np.ones(len(E), dtype=bool)
        for g in self.gens:
            ok &= (mx.matmul(self.R, E, g) == mx.matmul(self.R, g, E)).reshape(len(E), -1).all(axis=1)
        return E[ok]


def elementary_group(G: GroupContext, budget: int = CLOSURE_BUDGET) -> MatrixGroup:
    return MatrixGroup(G.R, G.elementary_generators(), budget)


def torus_group(G: GroupContext) -> list[np.ndarray]:
    return [G.torus(chi) for chi in G.all_characters()]


class FullGroup:
    """G = T.E over a finite ring, with membership via torus read-off plus closure lookup."""

    def __init__(self, G: GroupContext, budget: int = CLOSURE_BUDGET):
        self.ctx = G
        self.E = elementary_group(G, budget)
        self.torus = torus_group(G)

    def __contains__(self, M) -> bool:
        R = self.ctx.R
        M = np.asarray(M)
        for h in self.torus:
            hinv = np.diag(R.inv_t[np.diagonal(h)])
            if mx.matmul(R, hinv, M) in self.E:
                return True
        return False

    def generators(self) -> list[np.ndarray]:
        return self.ctx.elementary_generators() + self.torus

    def order(self) -> int:
        R = self.ctx.R
        cosets = set()
        for h in self.torus:
            # h E = h' E iff h'^{-1} h in E
            rep = None
            for c in cosets:
                hc = np.frombuffer(c, dtype=np.int64).reshape(self.ctx.n, self.ctx.n)
                if mx.matmul(R, np.diag(R.inv_t[np.diagonal(hc)]), h) in self.E:
                    rep = c
                    break
            if rep is None:
                cosets.add(mx.key(h))
        return len(cosets) * self.E.order()


def full_group(G: GroupContext, budget: int = CLOSURE_BUDGET) -> FullGroup:
    return FullGroup(G, budget)


def center_by_commutant(G: GroupContext, group: MatrixGroup | None = None, roots=None) -> list[np.ndarray]:
    """Center of E: matrices commuting with x_a(t) for a in ``roots`` (all roots by
    default) solved linearly, then filtered by membership in E."""
    from .linalg import commutant

    roots = G.rs.roots if roots is None else roots
    gens = [G.x(a, t) for a in roots for t in G.additive_generators()]
    cands = commutant(G.R, gens)
    group = group or elementary_group(G)
    return [C for C in cands if mx.det(G.R, C) != G.R.zero and C in group]


def scalar_center_oracle(G: GroupContext) -> list[int]:
    """Units lambda with lambda^N = 1: the scalar matrices of determinant one."""
    R = G.R
    return [u for u in R.units if R.pow(u, G.n) == R.one]


def weyl_quotient_order(G: GroupContext) -> int:
    """|<w_a(1), H>| / |H| computed by closure."""
    H = MatrixGroup(G.R, [g.matrix for g in G.subgroup_generators("H")])
    Nn = MatrixGroup(G.R, [g.matrix for g in G.subgroup_generators("H")] + [G.w(a, G.R.one) for a in G.rs.simple])
    return Nn.order() // H.order()
