"""Figures for CLI reports (written next to the JSON output)."""

from __future__ import annotations

import numpy as np


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _save(fig, path) -> str:
    # no timestamp or version metadata, so reruns write identical files
    fig.savefig(path, metadata={"Software": None}, dpi=100)
    _pyplot().close(fig)
    return str(path)


def _plane_coordinates(rs) -> np.ndarray:
    """Orthonormal coordinates of the roots in the span of the simple roots."""
    S = np.array(rs.simple, dtype=float)
    Q, _ = np.linalg.qr(S.T)
    return np.array(rs.roots, dtype=float) @ Q


def plot_root_system(rs, path) -> str:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(5, 5))
    if rs.rank == 2:
        P = _plane_coordinates(rs)
        simple = {rs.index[s] for s in rs.simple}
        for k, (x, y) in enumerate(P):
            color = "tab:red" if k in simple else ("tab:blue" if rs.is_long(rs.roots[k]) else "tab:green")
            ax.annotate("", xy=(x, y), xytext=(0, 0), arrowprops={"arrowstyle": "->", "color": color})
            ax.text(1.08 * x, 1.08 * y, rs.name(rs.roots[k]), fontsize=7, ha="center", va="center")
        lim = 1.3 * np.abs(P).max()
        ax.set_xlim(-lim, lim)
        ax.set_ylim(-lim, lim)
        ax.set_aspect("equal")
        ax.axis("off")
        ax.set_title(f"{rs.label}: {len(rs.roots)} roots (simple in red)")
    else:
        C = np.asarray(rs.cartan_matrix)
        ax.imshow(C, cmap="coolwarm", vmin=-3, vmax=3)
        for i in range(rs.rank):
            for j in range(rs.rank):
                ax.text(j, i, str(C[i, j]), ha="center", va="center", fontsize=8)
        ax.set_xticks(range(rs.rank), [f"a{i + 1}" for i in range(rs.rank)])
        ax.set_yticks(range(rs.rank), [f"a{i + 1}" for i in range(rs.rank)])
        ax.set_title(f"{rs.label} Cartan matrix")
    return _save(fig, path)


def _depths(D) -> list[int]:
    depth = [0] * len(D.vertices)
    for u, v, _, _ in sorted(D.edges):
        depth[v] = max(depth[v], depth[u] + 1)
    return depth


def plot_weight_diagram(D, path, walk=None) -> str:
    """Layered drawing, highest weight on top; ``walk`` (vertex list) is highlighted."""
    plt = _pyplot()
    depth = _depths(D)
    layers: dict = {}
    for v, d in enumerate(depth):
        layers.setdefault(d, []).append(v)
    pos = {}
    for d, vs in layers.items():
        for k, v in enumerate(vs):
            pos[v] = (k - (len(vs) - 1) / 2, -d)
    fig, ax = plt.subplots(figsize=(6, max(3, 0.45 * len(layers))))
    cmap = plt.get_cmap("tab10")
    on_walk = set(zip(walk, walk[1:])) if walk else set()
    for u, v, lab, _ in D.edges:
        (x0, y0), (x1, y1) = pos[u], pos[v]
        hot = (u, v) in on_walk
        ax.plot([x0, x1], [y0, y1], color=cmap((lab - 1) % 10), lw=2.5 if hot else 0.8, alpha=1 if hot else 0.6)
    xs = [pos[v][0] for v in range(len(D.vertices))]
    ys = [pos[v][1] for v in range(len(D.vertices))]
    ax.scatter(xs, ys, s=30, c="black", zorder=3)
    if walk:
        ax.scatter([pos[v][0] for v in walk], [pos[v][1] for v in walk], s=60, c="tab:red", zorder=4)
    for v in range(len(D.vertices)):
        ax.text(pos[v][0], pos[v][1] + 0.2, str(v + 1), fontsize=6, ha="center")
    labels = sorted({lab for _, _, lab, _ in D.edges})
    for lab in labels:
        ax.plot([], [], color=cmap((lab - 1) % 10), label=f"a{lab}")
    ax.legend(fontsize=6, loc="upper right")
    ax.axis("off")
    ax.set_title(f"{D.rs.label} weight diagram, highest weight {list(D.highest)}")
    return _save(fig, path)


def plot_relations(reports, path) -> str:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 3))
    names = [r["relation"] for r in reports]
    samples = [r["samples"] for r in reports]
    colors = ["tab:green" if r["verdict"] == "pass" else "tab:red" for r in reports]
    ax.bar(names, samples, color=colors)
    ax.set_ylabel("checked instances")
    ax.set_yscale("log")
    if reports:
        r0 = reports[0]
        ax.set_title(f"{r0['system']} {r0['rep']} over {r0['ring']}")
    return _save(fig, path)


def plot_matrix_pattern(mats: dict, n: int, path, title: str = "") -> str:
    """Support of the root matrices: entry (i, j) counts roots with X[i, j] != 0."""
    plt = _pyplot()
    support = np.zeros((n, n), dtype=int)
    for M in mats.values():
        support += (np.asarray(M) != 0).astype(int)
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.imshow(support, cmap="Greys")
    ax.set_title(title)
    return _save(fig, path)


def plot_candidates(tried, path) -> str:
    """Invertible conjugators found per (ring, graph) candidate of a decomposition."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6, 3))
    labels = [f"{k}" for k in range(1, len(tried) + 1)]
    vals = [t.get("invertible_solutions", 0) for t in tried]
    colors = ["tab:green" if t.get("result") == "solution" else "tab:gray" for t in tried]
    ax.bar(labels, vals, color=colors)
    ax.set_xlabel("candidate")
    ax.set_ylabel("invertible solutions")
    return _save(fig, path)
