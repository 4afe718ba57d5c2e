"""Representations of Chevalley bases by integer matrices.

Weights are written in Dynkin coordinates (values on the simple coroots), so
the simply connected lattice is Z^l and the root lattice is spanned by the
rows of the Cartan matrix.  A representation stores pi(X_a) for every root
together with the integral divided powers pi(X_a)^k / k!.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import sympy
from sympy.matrices.normalforms import hermite_normal_form

from .chevbasis import ChevalleyBasis, adjoint_representation, build_chevalley_basis
from .rootsys import RootSystem, neg


class RepresentationError(ValueError):
    pass


def matrix_unit(n: int, i: int, j: int) -> np.ndarray:
    E = np.zeros((n, n), dtype=np.int64)
    E[i, j] = 1
    return E


# ---------------------------------------------------------------------------
# lattices


def _lattice_basis(vectors) -> np.ndarray:
    """Columns form a Z-basis of the lattice spanned by ``vectors``."""
    M = sympy.Matrix(np.asarray(vectors, dtype=object).T.tolist())
    H = hermite_normal_form(M)
    return np.array(H.tolist(), dtype=np.int64)


@dataclass(frozen=True)
class WeightLattice:
    basis: np.ndarray  # columns, Dynkin coordinates
    tag: str
    index_in_sc: int

    def contains(self, v) -> bool:
        return coordinates(self.basis, v) is not None

    def contains_lattice(self, other: "WeightLattice") -> bool:
        return all(self.contains(other.basis[:, j]) for j in range(other.basis.shape[1]))


def coordinates(basis: np.ndarray, v) -> np.ndarray | None:
    """Integer coordinates of v in the column basis, or None."""
    B = sympy.Matrix(basis.tolist())
    sol = B.solve(sympy.Matrix(list(v))) if B.shape[0] == B.shape[1] else None
    if sol is None or any(x.q != 1 for x in sol):
        return None
    return np.array([int(x) for x in sol], dtype=np.int64)


def root_lattice(rs: RootSystem) -> WeightLattice:
    B = _lattice_basis([rs.dynkin_labels(s) for s in rs.simple])
    return WeightLattice(B, "adjoint", abs(int(round(np.linalg.det(B)))))


def sc_lattice(rs: RootSystem) -> WeightLattice:
    return WeightLattice(np.eye(rs.rank, dtype=np.int64), "simply-connected", 1)


def weight_lattice(rs: RootSystem, weights) -> WeightLattice:
    B = _lattice_basis(list(weights) + [rs.dynkin_labels(s) for s in rs.simple])
    if B.shape[1] != rs.rank:
        raise RepresentationError("weights do not span the weight space")
    idx = abs(int(round(np.linalg.det(B.astype(float)))))
    ad = root_lattice(rs)
    if idx == 1:
        tag = "simply-connected"
    elif idx == ad.index_in_sc:
        tag = "adjoint"
    else:
        tag = "intermediate"
    return WeightLattice(B, tag, idx)


# ---------------------------------------------------------------------------
# representations


class Representation:
    def __init__(self, rs: RootSystem, mats: dict, weights, name: str = "",
                 basis: ChevalleyBasis | None = None, check: bool = True):
        self.rs = rs
        self.name = name
        self.basis = basis if basis is not None else build_chevalley_basis(rs)
        self.mats = {tuple(a): np.asarray(M, dtype=np.int64) for a, M in mats.items()}
        self.weights = [tuple(int(x) for x in w) for w in weights]
        self.dim = len(self.weights)
        missing = [a for a in rs.roots if a not in self.mats]
        if missing:
            raise RepresentationError(f"no matrix for root {rs.name(missing[0])}")
        self.divided = {a: self._divided_powers(M) for a, M in self.mats.items()}
        if check:
            self.check_weight_grading()
            self.check_brackets()

    def __repr__(self) -> str:
        return f"Representation({self.rs.label}, {self.name!r}, dim={self.dim})"

    def X(self, a) -> np.ndarray:
        return self.mats[tuple(a)]

    def H(self, a) -> np.ndarray:
        """Diagonal action of h_a: entries <lambda, a^vee>."""
        cc = self.rs.coroot_coefficients(a)
        return np.diag([sum(c * w for c, w in zip(cc, lam)) for lam in self.weights]).astype(np.int64)

    @staticmethod
    def _divided_powers(M: np.ndarray) -> list[np.ndarray]:
        """[I, M, M^2/2, ...] up to the last nonzero term, with exact integrality check."""
        n = M.shape[0]
        out = [np.eye(n, dtype=np.int64)]
        P = np.eye(n, dtype=object)
        Mo = M.astype(object)
        k = 1
        while True:
            P = P.dot(Mo)
            if not P.any():
                break
            f = math.factorial(k)
            if any(x % f for x in P.ravel()):
                raise RepresentationError(f"divided power of order {k} is not integral")
            out.append((P // f).astype(np.int64))
            k += 1
            if k > n + 1:
                raise RepresentationError("root matrix is not nilpotent")
        return out

    def nilpotency_degree(self, a) -> int:
        return len(self.divided[tuple(a)])

    @cached_property
    def square_zero(self) -> bool:
        return all(len(d) <= 2 for d in self.divided.values())

    # ---- validation
    def check_brackets(self) -> None:
        rs, N = self.rs, self.basis.N
        for a in rs.roots:
            A = self.mats[a]
            for b in rs.roots:
                C = A @ self.mats[b] - self.mats[b] @ A
                if a == neg(b):
                    expect = self.H(a)
                else:
                    s = tuple(x + y for x, y in zip(a, b))
                    n = N(a, b)
                    expect = n * self.mats[s] if n else np.zeros_like(C)
                if not (C == expect).all():
                    raise RepresentationError(
                        f"{self.name}: bracket of x[{rs.name(a)}] and x[{rs.name(b)}] disagrees with the structure constants")
        for i in range(rs.rank):
            for a in rs.roots:
                C = self.H(rs.simple[i]) @ self.mats[a] - self.mats[a] @ self.H(rs.simple[i])
                if not (C == rs.pairing(a, rs.simple[i]) * self.mats[a]).all():
                    raise RepresentationError(f"{self.name}: h{i + 1} does not scale x[{rs.name(a)}] correctly")

    def check_weight_grading(self) -> None:
        for a, M in self.mats.items():
            da = self.rs.dynkin_labels(a)
            rows, cols = np.nonzero(M)
            for r, c in zip(rows, cols):
                if tuple(x + y for x, y in zip(self.weights[c], da)) != self.weights[r]:
                    raise RepresentationError(f"{self.name}: x[{self.rs.name(a)}] breaks the weight grading")

    # ---- lattices and characters
    @cached_property
    def lattice(self) -> WeightLattice:
        return weight_lattice(self.rs, self.weights)

    @cached_property
    def weight_coords(self) -> np.ndarray:
        """Row k: coordinates of weight k in the lattice basis."""
        return np.array([coordinates(self.lattice.basis, w) for w in self.weights], dtype=np.int64)

    def lattice_coords(self, v) -> np.ndarray:
        c = coordinates(self.lattice.basis, v)
        if c is None:
            raise RepresentationError(f"{v} is not in the weight lattice of {self.name}")
        return c

    def to_json(self) -> dict:
        rs = self.rs
        return {
            "system": rs.label,
            "name": self.name,
            "dim": self.dim,
            "lattice": self.lattice.tag,
            "weights": [list(w) for w in self.weights],
            "matrices": {rs.name(a): self.mats[a].tolist() for a in rs.roots},
        }


def from_simple(rs: RootSystem, pos: list, negs: list, name: str, weights=None,
                basis: ChevalleyBasis | None = None) -> Representation:
    """Generate all root matrices from those of the simple roots and their negatives."""
    B = basis if basis is not None else build_chevalley_basis(rs)
    mats = {}
    for s, P, Q in zip(rs.simple, pos, negs):
        mats[s] = np.asarray(P, dtype=np.int64)
        mats[neg(s)] = np.asarray(Q, dtype=np.int64)
    for xi, (a, b) in sorted(B.extraspecial_pairs.items(), key=lambda kv: rs.height(kv[0])):
        for sign in (1, -1):
            aa, bb = tuple(sign * x for x in a), tuple(sign * x for x in b)
            C = mats[aa] @ mats[bb] - mats[bb] @ mats[aa]
            n = B.N(aa, bb)
            if (C % n).any():
                raise RepresentationError(f"{name}: bracket not divisible by its structure constant")
            mats[tuple(sign * x for x in xi)] = C // n
    if weights is None:
        weights = []
        H = [mats[s] @ mats[neg(s)] - mats[neg(s)] @ mats[s] for s in rs.simple]
        for Hi in H:
            if (Hi != np.diag(np.diagonal(Hi))).any():
                raise RepresentationError(f"{name}: simple coroot does not act diagonally")
        weights = [tuple(int(Hi[k, k]) for Hi in H) for k in range(len(pos[0]))]
    return Representation(rs, mats, weights, name=name, basis=B)


def standard_rep_A(l: int) -> Representation:
    from .rootsys import build_root_system

    rs = build_root_system("A", l)
    n = l + 1
    pos = [matrix_unit(n, i, i + 1) for i in range(l)]
    negs = [matrix_unit(n, i + 1, i) for i in range(l)]
    return from_simple(rs, pos, negs, "standard")


def universal_rep_C(l: int) -> Representation:
    from .rootsys import build_root_system

    rs = build_root_system("C", l)
    n = 2 * l
    pos = [matrix_unit(n, i, i + 1) - matrix_unit(n, l + i + 1, l + i) for i in range(l - 1)]
    negs = [matrix_unit(n, i + 1, i) - matrix_unit(n, l + i, l + i + 1) for i in range(l - 1)]
    pos.append(matrix_unit(n, l - 1, 2 * l - 1))
    negs.append(matrix_unit(n, 2 * l - 1, l - 1))
    return from_simple(rs, pos, negs, "universal")


def standard_rep_D(l: int) -> Representation:
    from .rootsys import build_root_system

    rs = build_root_system("D", l)
    n = 2 * l
    pos = [matrix_unit(n, i, i + 1) - matrix_unit(n, l + i + 1, l + i) for i in range(l - 1)]
    negs = [matrix_unit(n, i + 1, i) - matrix_unit(n, l + i, l + i + 1) for i in range(l - 1)]
    pos.append(matrix_unit(n, l - 2, 2 * l - 1) - matrix_unit(n, l - 1, 2 * l - 2))
    negs.append(matrix_unit(n, 2 * l - 1, l - 2) - matrix_unit(n, 2 * l - 2, l - 1))
    return from_simple(rs, pos, negs, "standard")


# ---------------------------------------------------------------------------
# weight diagrams


@dataclass
class WeightDiagram:
    rs: RootSystem
    highest: tuple
    vertices: list  # Dynkin coordinates, highest weight first
    edges: list  # (upper index, lower index, label i (1-based), sign)

    @cached_property
    def index(self) -> dict:
        return {v: k for k, v in enumerate(self.vertices)}

    def down(self, v: int, i: int) -> int | None:
        """Vertex reached from v by subtracting alpha_i, if any."""
        w = tuple(x - y for x, y in zip(self.vertices[v], self.rs.cartan_matrix[i - 1]))
        return self.index.get(w)

    def edges_with_label(self, i: int) -> list:
        return [e for e in self.edges if e[2] == i]

    @cached_property
    def diameter(self) -> int:
        n = len(self.vertices)
        adj = [[] for _ in range(n)]
        for u, v, _, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        best = 0
        for s in range(n):
            dist = {s: 0}
            frontier = [s]
            while frontier:
                nxt = []
                for u in frontier:
                    for v in adj[u]:
                        if v not in dist:
                            dist[v] = dist[u] + 1
                            nxt.append(v)
                frontier = nxt
            if len(dist) != n:
                raise RepresentationError("weight diagram is not connected")
            best = max(best, max(dist.values()))
        return best

    def to_json(self) -> dict:
        return {
            "system": self.rs.label,
            "highest_weight": list(self.highest),
            "vertices": [{"index": k, "weight": list(v)} for k, v in enumerate(self.vertices)],
            "edges": [{"from": u, "to": v, "label": i, "sign": s} for u, v, i, s in self.edges],
        }


def is_microweight(rs: RootSystem, w) -> bool:
    for a in rs.positive:
        cc = rs.coroot_coefficients(a)
        if abs(sum(c * x for c, x in zip(cc, w))) > 1:
            return False
    return True


def build_weight_diagram(rs: RootSystem, highest) -> WeightDiagram:
    """Diagram of the Weyl orbit of a microweight; every edge gets sign +1.

    With all signs +1 the simple root matrices satisfy the Serre relations
    (strings have length one), so they define a representation; the bracket
    check in ``rep_from_diagram`` confirms it.
    """
    highest = tuple(int(x) for x in highest)
    if not is_microweight(rs, highest):
        raise RepresentationError(f"{highest} is not a microweight of {rs.label}")
    C = rs.cartan_matrix
    seen = {highest: 0}
    order = [highest]
    frontier = [highest]
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(rs.rank):
                if v[i] == 1:
                    w = tuple(x - y for x, y in zip(v, C[i]))
                    if w not in seen:
                        seen[w] = seen[v] + 1
                        nxt.append(w)
        frontier = sorted(nxt, reverse=True)
        order.extend(frontier)
    index = {v: k for k, v in enumerate(order)}
    edges = []
    for k, v in enumerate(order):
        for i in range(rs.rank):
            if v[i] == 1:
                w = tuple(x - y for x, y in zip(v, C[i]))
                edges.append((k, index[w], i + 1, 1))
    D = WeightDiagram(rs, highest, order, edges)
    D.diameter  # connectivity check
    return D


def rep_from_diagram(D: WeightDiagram, name: str | None = None) -> Representation:
    rs = D.rs
    n = len(D.vertices)
    pos = [np.zeros((n, n), dtype=np.int64) for _ in range(rs.rank)]
    negs = [np.zeros((n, n), dtype=np.int64) for _ in range(rs.rank)]
    for u, v, i, s in D.edges:
        pos[i - 1][u, v] = s
        negs[i - 1][v, u] = s
    label = name or "w" + "".join(str(k + 1) for k, x in enumerate(D.highest) if x)
    return from_simple(rs, pos, negs, label, weights=D.vertices)


def direct_sum(reps: list, name: str) -> Representation:
    rs = reps[0].rs
    n = sum(r.dim for r in reps)
    mats = {}
    for a in rs.roots:
        M = np.zeros((n, n), dtype=np.int64)
        k = 0
        for r in reps:
            M[k:k + r.dim, k:k + r.dim] = r.X(a)
            k += r.dim
        mats[a] = M
    weights = [w for r in reps for w in r.weights]
    return Representation(rs, mats, weights, name=name, basis=reps[0].basis)


def fundamental_weight(rs: RootSystem, k: int) -> tuple:
    return tuple(1 if i == k - 1 else 0 for i in range(rs.rank))


def microweights(rs: RootSystem) -> list[int]:
    """Indices k (1-based) with omega_k a microweight."""
    return [k for k in range(1, rs.rank + 1) if is_microweight(rs, fundamental_weight(rs, k))]


_CACHE: dict = {}


def get_representation(rs: RootSystem, tag: str) -> Representation:
    """Catalogue: ``adjoint``, ``sc``, ``standard`` (A, D), ``universal`` (C), ``w<k>`` microweights."""
    key = (rs.label, tag)
    if key in _CACHE:
        return _CACHE[key]
    fam, l = rs.family, rs.rank
    if tag in ("adjoint", "ad"):
        rep = adjoint_representation(build_chevalley_basis(rs))
    elif tag == "standard" and fam == "A":
        rep = standard_rep_A(l)
    elif tag == "standard" and fam == "D":
        rep = standard_rep_D(l)
    elif tag == "universal" and fam == "C":
        rep = universal_rep_C(l)
    elif tag.startswith("w") and tag[1:].isdigit():
        k = int(tag[1:])
        if not 1 <= k <= l:
            raise RepresentationError(f"no fundamental weight {tag} for {rs.label}")
        rep = rep_from_diagram(build_weight_diagram(rs, fundamental_weight(rs, k)), name=tag)
    elif tag == "sc":
        if fam == "A":
            rep = standard_rep_A(l)
        elif fam == "C":
            rep = universal_rep_C(l)
        elif fam in "GFE" and not microweights(rs):
            rep = adjoint_representation(build_chevalley_basis(rs))
        elif fam == "D":
            parts = [get_representation(rs, f"w{l - 1}"), get_representation(rs, f"w{l}")]
            rep = direct_sum(parts, "sc") if l % 2 == 0 else parts[1]
        else:
            rep = get_representation(rs, f"w{microweights(rs)[0]}")
        if rep.lattice.tag != "simply-connected":
            raise RepresentationError(f"no simply connected representation available for {rs.label}")
    else:
        raise RepresentationError(f"unknown representation {tag!r} for {rs.label}")
    _CACHE[key] = rep
    return rep
