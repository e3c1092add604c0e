"""Undirected simple graphs: container, synthetic generators, stats, file I/O.

Vertices are 0-based in memory and 1-based in the text file format.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = [
    "Graph",
    "GraphStats",
    "star_graph",
    "densify",
    "community_graph",
    "random_bounded_degree",
    "stats",
    "write_graph",
    "read_graph",
]


def _canon(i: int, j: int) -> tuple[int, int]:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph on vertices 0..p-1."""

    p: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be positive")
        edges = frozenset(_canon(i, j) for (i, j) in self.edges)
        object.__setattr__(self, "edges", edges)
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < self.p and 0 <= j < self.p):
                raise ValueError(f"edge ({i},{j}) out of range for p={self.p}")

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        return _canon(i, j) in self.edges

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.p, dtype=int)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def neighbors(self, r: int) -> set[int]:
        return {j if i == r else i for (i, j) in self.edges if r in (i, j)}

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.p, self.p), dtype=int)
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1
        return a

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def is_connected(self) -> bool:
        if self.p == 1:
            return True
        adj: list[list[int]] = [[] for _ in range(self.p)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.p


@dataclass(frozen=True)
class GraphStats:
    max_degree: int
    avg_degree: float
    edge_density: float


def stats(g: Graph) -> GraphStats:
    """Exact max degree d, average degree d-bar = (p-1)*rho, density rho = 2m/(p(p-1))."""
    if g.p < 2:
        raise ValueError("stats requires p >= 2")
    rho = 2 * g.m / (g.p * (g.p - 1))
    deg = g.degrees()
    return GraphStats(max_degree=int(deg.max()), avg_degree=(g.p - 1) * rho, edge_density=rho)


def _maybe_connected(build, rng: np.random.Generator, require_connected: bool, max_retries: int = 50) -> Graph:
    if not require_connected:
        return build(rng)
    for _ in range(max_retries):
        g = build(rng)
        if g.is_connected():
            return g
    raise RuntimeError(f"no connected graph found in {max_retries} attempts")


def star_graph(a: int, b: int) -> Graph:
    """Clique of a centers, each with b private leaves; p = a(b+1), d = a+b-1."""
    if a < 1 or b < 1:
        raise ValueError("star_graph requires a >= 1 and b >= 1")
    edges = set()
    for c1 in range(a):
        for c2 in range(c1 + 1, a):
            edges.add((c1, c2))
    for c in range(a):
        for leaf in range(b):
            edges.add(_canon(c, a + c * b + leaf))
    return Graph(p=a * (b + 1), edges=frozenset(edges))


def densify(
    g: Graph,
    target_rho: float,
    preserve_max_degree: bool = False,
    rng: np.random.Generator | None = None,
) -> Graph:
    """Add uniform-random edges until density reaches target_rho.

    With preserve_max_degree, only vertices strictly below the original max
    degree may gain edges, so the output keeps max degree d(g).
    """
    if rng is None:
        rng = np.random.default_rng()
    current = stats(g).edge_density
    if not (current < target_rho <= 1.0):
        raise ValueError(f"target_rho must be in ({current}, 1], got {target_rho}")
    d_cap = stats(g).max_degree
    edges = set(g.edges)
    deg = g.degrees()
    total_pairs = g.p * (g.p - 1) // 2

    def allowed() -> list[tuple[int, int]]:
        out = []
        for i in range(g.p):
            if preserve_max_degree and deg[i] >= d_cap:
                continue
            for j in range(i + 1, g.p):
                if preserve_max_degree and deg[j] >= d_cap:
                    continue
                if (i, j) not in edges:
                    out.append((i, j))
        return out

    while 2 * len(edges) / (g.p * (g.p - 1)) < target_rho:
        cands = allowed()
        if not cands:
            reachable = 2 * len(edges) / (g.p * (g.p - 1))
            raise ValueError(
                f"target density {target_rho} unreachable under max-degree cap {d_cap}; "
                f"achievable maximum is {reachable:.6g}"
            )
        i, j = cands[rng.integers(len(cands))]
        edges.add((i, j))
        deg[i] += 1
        deg[j] += 1
    return Graph(p=g.p, edges=frozenset(edges))


def community_graph(
    s: int,
    t: int,
    beta_in: float,
    beta_out: float,
    rng: np.random.Generator | None = None,
    require_connected: bool = False,
) -> Graph:
    """s groups of t vertices; intra-group edges w.p. beta_in, inter-group w.p. beta_out."""
    if s < 1 or t < 1:
        raise ValueError("community_graph requires s >= 1 and t >= 1")
    if not (0.0 <= beta_out <= beta_in <= 1.0):
        raise ValueError("require 0 <= beta_out <= beta_in <= 1")
    if rng is None:
        rng = np.random.default_rng()
    p = s * t

    def build(r: np.random.Generator) -> Graph:
        edges = set()
        for i in range(p):
            for j in range(i + 1, p):
                prob = beta_in if i // t == j // t else beta_out
                if r.random() < prob:
                    edges.add((i, j))
        return Graph(p=p, edges=frozenset(edges))

    return _maybe_connected(build, rng, require_connected)


def random_bounded_degree(
    p: int,
    d_max: int,
    m_target: int,
    rng: np.random.Generator | None = None,
    require_connected: bool = False,
) -> Graph:
    """Random graph with exactly m_target edges and max degree <= d_max.

    Edges are inserted sequentially, uniform over non-edges whose endpoints
    both have residual degree capacity; the build restarts if it gets stuck.
    """
    if d_max < 1:
        raise ValueError("d_max must be >= 1")
    if m_target > p * d_max // 2 or m_target > p * (p - 1) // 2 or m_target < 0:
        raise ValueError(
            f"infeasible: m_target={m_target} with p={p}, d_max={d_max} "
            f"(bounds: {min(p * d_max // 2, p * (p - 1) // 2)})"
        )
    if require_connected and m_target < p - 1:
        raise ValueError(f"connected graph on {p} vertices needs at least {p - 1} edges")
    if rng is None:
        rng = np.random.default_rng()

    def build(r: np.random.Generator) -> Graph:
        for _ in range(50):
            edges: set[tuple[int, int]] = set()
            deg = np.zeros(p, dtype=int)
            stuck = False
            while len(edges) < m_target:
                cands = [
                    (i, j)
                    for i in range(p)
                    if deg[i] < d_max
                    for j in range(i + 1, p)
                    if deg[j] < d_max and (i, j) not in edges
                ]
                if not cands:
                    stuck = True
                    break
                i, j = cands[r.integers(len(cands))]
                edges.add((i, j))
                deg[i] += 1
                deg[j] += 1
            if not stuck:
                return Graph(p=p, edges=frozenset(edges))
        raise RuntimeError("degree-capacity rejection failed to place all edges")

    return _maybe_connected(build, rng, require_connected)


def write_graph(g: Graph, path: str | Path) -> None:
    """Plain text: line 1 "p m", then m lines "i j", 1-based, i<j, sorted."""
    lines = [f"{g.p} {g.m}"]
    lines += [f"{i + 1} {j + 1}" for i, j in g.sorted_edges()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_graph(path: str | Path) -> Graph:
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines() if ln.strip()]
    p, m = map(int, lines[0].split())
    edges = set()
    for ln in lines[1 : m + 1]:
        i, j = map(int, ln.split())
        if not i < j:
            raise ValueError(f"graph file edge must satisfy i < j, got {i} {j}")
        edges.add((i - 1, j - 1))
    if len(edges) != m:
        raise ValueError(f"graph file declares {m} edges, found {len(edges)}")
    return Graph(p=p, edges=frozenset(edges))
