"""Generation arguments: the Lie algebra from unipotents, the full matrix ring
from the Lie algebra, and the normalizer test for conjugating elements."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from . import matrices as mx
from . import zmod
from .groupcore import GroupContext, Undecided
from .reps import Representation, RepresentationError, WeightDiagram, matrix_unit
from .rings import FiniteRing, RingError


# ---------------------------------------------------------------------------
# recovering pi(X_a) from x_a(1)


def recover_lie_generator(G: GroupContext, x, mode: str) -> np.ndarray:
    """pi(X_a) from x = x_a(1).

    ``square-zero``: X = x - 1, valid when every root matrix squares to zero.
    ``half``: X = (x - 1) - (x - 1)^2 / 2, valid when 2 is a unit and X^3 = 0.
    """
    R = G.R
    A = mx.sub(R, np.asarray(x), G.I)
    if mode == "square-zero":
        if not G.rep.square_zero:
            raise RepresentationError(f"{G.rep.name} has root matrices with nonzero square")
        return A
    if mode == "half":
        two = R.from_int(2)
        if not R.is_unit(two):
            raise RingError(f"2 is not invertible in {R.name}")
        if any(len(d) > 3 for d in G.rep.divided.values()):
            raise RepresentationError(f"{G.rep.name} has root matrices with nonzero cube")
        return mx.sub(R, A, mx.scale(R, R.inv(two), mx.matmul(R, A, A)))
    raise ValueError(f"unknown mode {mode!r}; expected 'half' or 'square-zero'")


# ---------------------------------------------------------------------------
# algebra closure


def _reduced_basis(R: FiniteRing, mats, shape) -> list[np.ndarray]:
    """Small additive generating set of the span of ``mats``."""
    if not mats:
        return []
    cols = np.array([linalg.coord_vector(R, M) for M in mats], dtype=np.int64).T
    rel = linalg.relation_block(R, int(np.prod(shape)))
    out = []
    for v, _ in zmod.image_generators(np.hstack([cols, rel]), R.additive.char):
        M = linalg.from_coord_vector(R, v, shape)
        if M.any():
            out.append(M)
    return out


def _span_order(R: FiniteRing, mats, shape) -> int:
    rel = linalg.relation_block(R, int(np.prod(shape)))
    c = R.additive.char
    base = zmod.image_order(rel, c) if rel.shape[1] else 1
    if not mats:
        return 1
    cols = np.array([linalg.coord_vector(R, M) for M in mats], dtype=np.int64).T
    return zmod.image_order(np.hstack([cols, rel]), c) // base


def span_contains(R: FiniteRing, basis, X) -> bool:
    X = np.asarray(X)
    if not X.any():
        return True
    if not basis:
        return False
    cols = np.array([linalg.coord_vector(R, M) for M in basis], dtype=np.int64).T
    rel = linalg.relation_block(R, X.size)
    return zmod.solve_mod(np.hstack([cols, rel]), linalg.coord_vector(R, X), R.additive.char) is not None


@dataclass
class MatrixAlgebraClosure:
    ring: FiniteRing
    n: int
    basis: list
    identity_adjoined: bool
    order: int
    rounds: int
    complete: bool = True

    @property
    def is_full(self) -> bool:
        return self.order == len(self.ring) ** (self.n * self.n)

    def contains(self, X) -> bool:
        return span_contains(self.ring, self.basis, X)

    def matrix_units_reached(self) -> list[tuple[int, int]]:
        R = self.ring
        return [(i, j) for i in range(self.n) for j in range(self.n)
                if self.contains(R.reduce_ints(matrix_unit(self.n, i, j)))]

    def check_closed(self) -> bool:
        """Post hoc: every product of basis pairs lies in the span."""
        R = self.ring
        return all(self.contains(mx.matmul(R, A, B)) for A in self.basis for B in self.basis)


def algebra_closure(R: FiniteRing, gens, adjoin_identity: bool = True, max_rounds: int | None = None) -> MatrixAlgebraClosure:
    """Subalgebra of M_N(R) generated by ``gens``: the span grows by right
    multiplication with the generators until its order stops changing."""
    gens = [np.asarray(g, dtype=np.int64) for g in gens]
    n = gens[0].shape[0]
    shape = (n, n)
    start = linalg.r_span_generators(R, gens)
    if adjoin_identity:
        start += linalg.r_span_generators(R, [mx.identity(R, n)])
    basis = _reduced_basis(R, start, shape)
    order = _span_order(R, basis, shape)
    cap = max_rounds if max_rounds is not None else n * n + 1
    rounds = 0
    G = np.stack(gens)
    full = len(R) ** (n * n)
    while order < full:
        if rounds >= cap:
            return MatrixAlgebraClosure(R, n, basis, adjoin_identity, order, rounds, complete=False)
        rounds += 1
        B = np.stack(basis) if basis else np.zeros((0, n, n), dtype=np.int64)
        prods = mx.matmul(R, B[:, None], G[None]).reshape(-1, n, n) if len(B) else B
        basis = _reduced_basis(R, basis + list(prods), shape)
        new_order = _span_order(R, basis, shape)
        if new_order == order:
            break
        order = new_order
    return MatrixAlgebraClosure(R, n, basis, adjoin_identity, order, rounds)


def lie_algebra_images(G: GroupContext) -> list[np.ndarray]:
    """pi(X_a) for all roots and pi(h_i), reduced into the ring."""
    rep, R = G.rep, G.R
    mats = [R.reduce_ints(rep.X(a)) for a in rep.rs.roots]
    mats += [R.reduce_ints(rep.H(s)) for s in rep.rs.simple]
    return mats


# ---------------------------------------------------------------------------
# path certificates on weight diagrams


@dataclass
class PathCertificate:
    start: int  # gamma
    neighbour: int  # gamma shifted along the first label
    end: int  # gamma'
    labels: tuple  # (i0, i1, ..., ik), 1-based
    full_count: int  # vertices admitting the whole label path
    tail_count: int  # vertices admitting the tail (i1, ..., ik)

    def to_json(self) -> dict:
        return {
            "from": self.start,
            "to": self.neighbour,
            "end": self.end,
            "labels": list(self.labels),
            "full_path_starts": self.full_count,
            "tail_path_starts": self.tail_count,
        }


def _walk(D: WeightDiagram, v: int, labels) -> int | None:
    for i in labels:
        v = D.down(v, i)
        if v is None:
            return None
    return v


def _starts(D: WeightDiagram, labels) -> list[int]:
    return [v for v in range(len(D.vertices)) if _walk(D, v, labels) is not None]


def _make_certificate(D: WeightDiagram, gamma: int, labels) -> PathCertificate | None:
    labels = tuple(labels)
    nb = D.down(gamma, labels[0])
    end = _walk(D, gamma, labels)
    if nb is None or end is None:
        return None
    full = _starts(D, labels)
    tail = _starts(D, labels[1:]) if len(labels) > 1 else [nb]
    return PathCertificate(gamma, nb, end, labels, len(full), len(tail))


def certificate_valid(cert: PathCertificate) -> bool:
    if cert.full_count != 1:
        return False
    return len(cert.labels) == 1 or cert.tail_count == 1


def find_path_certificate(D: WeightDiagram, gamma: int, label: int, max_length: int | None = None) -> PathCertificate:
    """Shortest, then lexicographically least, descending label path certifying
    the matrix unit between gamma and its neighbour along ``label``."""
    if D.down(gamma, label) is None:
        raise ValueError(f"vertex {gamma} has no edge labelled {label} going down")
    cap = max_length if max_length is not None else 2 * D.diameter
    frontier = [((label,), D.down(gamma, label))]
    for _ in range(cap):
        for labels, _v in frontier:
            cert = _make_certificate(D, gamma, labels)
            if certificate_valid(cert):
                return cert
        nxt = []
        for labels, v in frontier:
            for i in range(1, D.rs.rank + 1):
                w = D.down(v, i)
                if w is not None:
                    nxt.append((labels + (i,), w))
        frontier = nxt
        if not frontier:
            break
    raise Undecided(f"no path certificate of length <= {cap} for vertex {gamma}, label {label}")


def brute_force_path_starts(D: WeightDiagram, labels) -> int:
    """Count vertices starting a descending walk with these labels, using only the edge list."""
    by_label: dict = {}
    for u, v, i, _ in D.edges:
        by_label.setdefault(i, {}).setdefault(u, []).append(v)
    count = 0
    for s in range(len(D.vertices)):
        ends = [s]
        for i in labels:
            ends = [w for v in ends for w in by_label.get(i, {}).get(v, [])]
        if ends:
            count += 1
    return count


def check_certificate(D: WeightDiagram, gamma: int, labels) -> dict:
    """Independent soundness check of a proposed certificate."""
    labels = tuple(labels)
    walk = [gamma]
    for i in labels:
        nxt = [v for u, v, lab, _ in D.edges if u == walk[-1] and lab == i]
        if len(nxt) != 1:
            return {"valid": False, "reason": f"label {i} cannot be followed from vertex {walk[-1]}"}
        walk.append(nxt[0])
    full = brute_force_path_starts(D, labels)
    tail = brute_force_path_starts(D, labels[1:]) if len(labels) > 1 else 1
    ok = full == 1 and tail == 1
    return {"valid": ok, "walk": walk, "full_path_starts": full, "tail_path_starts": tail}


def matrix_unit_from_certificate(rep: Representation, cert: PathCertificate, R: FiniteRing | None = None) -> np.ndarray:
    """X_{i0} X_{i1} ... X_{ik} X_{-ik} ... X_{-i1}, normalized to a +1 matrix unit."""
    rs = rep.rs
    simple = rs.simple
    n = rep.dim
    P = np.eye(n, dtype=np.int64)
    for i in cert.labels:
        P = P @ rep.X(simple[i - 1])
    if len(cert.labels) > 1:
        Q = np.eye(n, dtype=np.int64)
        for i in reversed(cert.labels[1:]):
            Q = Q @ rep.X(tuple(-x for x in simple[i - 1]))
        P = P @ Q
    nz = np.argwhere(P)
    if len(nz) != 1 or abs(int(P[tuple(nz[0])])) != 1:
        raise RepresentationError(f"certificate {cert.labels} does not collapse to a single matrix unit")
    if tuple(nz[0]) != (cert.start, cert.neighbour):
        raise RepresentationError(f"certificate {cert.labels} produced the wrong matrix unit")
    P = P * int(P[tuple(nz[0])])
    return R.reduce_ints(P) if R is not None else P


# ---------------------------------------------------------------------------
# normalizer test


def _in_base(S: FiniteRing, R: FiniteRing, A) -> bool:
    if S is R:
        return True
    if getattr(S, "base", None) is R:
        return bool((np.asarray(A) < len(R)).all())
    raise RingError(f"{S.name} is not an extension of {R.name}")


@dataclass
class NormalizationVerdict:
    passed: bool
    witnesses: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"verdict": "pass" if self.passed else "fail", "witnesses": self.witnesses}


def normalization_check(y, G: GroupContext, S: FiniteRing | None = None) -> NormalizationVerdict:
    """Does y (over S containing G.R) normalize pi(L_R), and do its conjugates of
    the elementary generators have entries in R?"""
    R = G.R
    S = S or R
    y = np.asarray(y)
    y_inv = mx.inverse(S, y)
    lie = lie_algebra_images(G)
    basis = _reduced_basis(R, linalg.r_span_generators(R, lie), (G.n, G.n))
    wit = []
    for a, X in zip(list(G.rs.roots) + [("h", i) for i in range(G.rs.rank)], lie):
        Xs = mx.embed(S, R, X) if S is not R else X
        C = mx.matmul(S, mx.matmul(S, y, Xs), y_inv)
        name = G.rs.name(a) if a[0] != "h" else f"h{a[1] + 1}"
        if not _in_base(S, R, C):
            wit.append({"element": name, "problem": "conjugate has entries outside the base ring"})
        elif not span_contains(R, basis, C):
            wit.append({"element": name, "problem": "conjugate leaves the Lie algebra"})
    for a in G.rs.roots:
        Xs = G.x(a, R.one)
        Xs = mx.embed(S, R, Xs) if S is not R else Xs
        C = mx.matmul(S, mx.matmul(S, y, Xs), y_inv)
        if not _in_base(S, R, C):
            wit.append({"element": f"x[{G.rs.name(a)}](1)", "problem": "conjugate has entries outside the base ring"})
    return NormalizationVerdict(not wit, wit)
