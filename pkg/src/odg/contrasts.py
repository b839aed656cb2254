"""Contrast systems and their comparison-graph structure.

A contrast system is a v-by-s coefficient matrix whose columns each sum to
zero: column k encodes the linear combination sum_i q[i, k] * effect_i. When
every column has exactly one +1 and one -1 the system is a set of pairwise
comparisons and is represented by a directed graph on the treatments, with
one edge per column.

Vertices are 1-indexed in all file formats and reports, 0-indexed in code.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._config import COLUMN_SUM_TOL, default_rank_tol
from ._kernels import eigh_sym
from .errors import MalformedInput, NotAContrast, ZeroRow


@dataclass(frozen=True, eq=False)
class ContrastSystem:
    """Validated v-by-s matrix of contrast coefficients."""

    q: np.ndarray

    def __post_init__(self):
        q = np.array(self.q, dtype=np.float64)
        if q.ndim != 2:
            raise MalformedInput(f"coefficient matrix must be 2-dimensional, got ndim={q.ndim}")
        v, s = q.shape
        if v < 2 or s < 1:
            raise MalformedInput(f"need at least 2 treatments and 1 contrast, got {v}x{s}")
        if not np.all(np.isfinite(q)):
            raise MalformedInput("coefficient matrix contains non-finite entries")
        sums = q.sum(axis=0)
        bad = np.flatnonzero(np.abs(sums) > COLUMN_SUM_TOL)
        if bad.size:
            raise NotAContrast(f"column {bad[0] + 1} sums to {sums[bad[0]]!r}, not zero")
        zero = np.flatnonzero(~q.any(axis=1))
        if zero.size:
            raise ZeroRow(f"treatment {zero[0] + 1} has an all-zero coefficient row")
        q.flags.writeable = False
        object.__setattr__(self, "q", q)

    @property
    def v(self) -> int:
        return self.q.shape[0]

    @property
    def s(self) -> int:
        return self.q.shape[1]


@dataclass(frozen=True, eq=False)
class ComparisonGraph:
    """Directed graph of pairwise comparisons: edge (j, i) compares j against i.

    No loops and no repeated vertex pairs; degrees count incident edges
    regardless of direction.
    """

    v: int
    edges: tuple[tuple[int, int], ...]
    degrees: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if self.v < 2:
            raise MalformedInput(f"graph needs at least 2 vertices, got {self.v}")
        seen = set()
        deg = [0] * self.v
        for a, b in self.edges:
            if not (0 <= a < self.v and 0 <= b < self.v):
                raise MalformedInput(f"edge ({a + 1}, {b + 1}) out of range for v={self.v}")
            if a == b:
                raise MalformedInput(f"loop at vertex {a + 1}")
            key = (min(a, b), max(a, b))
            if key in seen:
                raise MalformedInput(f"repeated comparison between {a + 1} and {b + 1}")
            seen.add(key)
            deg[a] += 1
            deg[b] += 1
        object.__setattr__(self, "edges", tuple((int(a), int(b)) for a, b in self.edges))
        object.__setattr__(self, "degrees", tuple(deg))

    @property
    def s(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class GraphClassification:
    is_pairwise: bool
    is_connected: bool
    component_count: int
    is_tree: bool
    bipartition: Optional[tuple[int, ...]]
    sink_source_signs: Optional[tuple[int, ...]]


def parse_contrast_matrix(text: str) -> ContrastSystem:
    """Parse CSV (one row per treatment, comma-separated, no header)."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        cells = [c.strip() for c in line.split(",")]
        try:
            rows.append([float(c) for c in cells])
        except ValueError:
            raise MalformedInput(f"line {lineno}: non-numeric value") from None
    if not rows:
        raise MalformedInput("empty input")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise MalformedInput("ragged rows: all treatments need the same number of coefficients")
    return ContrastSystem(np.array(rows, dtype=np.float64))


def parse_edge_list(text: str) -> ComparisonGraph:
    """Parse an edge list: first line ``v=<n>``, then one ``j i`` pair per line.

    Each pair is 1-indexed and encodes the comparison of treatment j against
    treatment i.
    """
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].replace(" ", "").startswith("v="):
        raise MalformedInput("edge list must start with a 'v=<n>' line")
    try:
        v = int(lines[0].split("=", 1)[1])
    except ValueError:
        raise MalformedInput("invalid vertex count in 'v=' line") from None
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise MalformedInput(f"edge line {ln!r} must contain exactly two vertex indices")
        try:
            j, i = int(parts[0]), int(parts[1])
        except ValueError:
            raise MalformedInput(f"edge line {ln!r} must contain integers") from None
        if not (1 <= j <= v and 1 <= i <= v):
            raise MalformedInput(f"edge ({j}, {i}) out of range for v={v}")
        edges.append((j - 1, i - 1))
    return ComparisonGraph(v, tuple(edges))


def detect_pairwise(system: ContrastSystem) -> Optional[ComparisonGraph]:
    """Return the comparison graph when every column is a +1/-1 pair, else None.

    Entries are compared exactly against {-1, 0, +1}: scaled contrasts do not
    qualify, and duplicated comparisons (which would require a multigraph)
    also return None.
    """
    q = system.q
    edges = []
    seen = set()
    for k in range(system.s):
        col = q[:, k]
        plus = np.flatnonzero(col == 1.0)
        minus = np.flatnonzero(col == -1.0)
        rest = np.flatnonzero(col != 0.0)
        if plus.size != 1 or minus.size != 1 or rest.size != 2:
            return None
        j, i = int(plus[0]), int(minus[0])
        key = (min(i, j), max(i, j))
        if key in seen:
            return None
        seen.add(key)
        edges.append((j, i))
    return ComparisonGraph(system.v, tuple(edges))


def _adjacency(graph: ComparisonGraph) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(graph.v)]
    for a, b in graph.edges:
        adj[a].append(b)
        adj[b].append(a)
    return adj


def classify(graph: ComparisonGraph) -> GraphClassification:
    """Connectivity, tree and bipartiteness structure of a comparison graph.

    The bipartition is a breadth-first 2-coloring started from the
    lowest-index vertex of each component (seed color 0); it is absent when
    the graph has an odd cycle. For bipartite graphs, each edge gets sign +1
    when directed from color 0 to color 1 and -1 otherwise, so that flipping
    the -1 edges leaves every vertex a pure sink or pure source.
    """
    adj = _adjacency(graph)
    color = [-1] * graph.v
    components = 0
    bipartite = True
    for start in range(graph.v):
        if color[start] >= 0:
            continue
        components += 1
        color[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for nb in adj[u]:
                if color[nb] < 0:
                    color[nb] = 1 - color[u]
                    queue.append(nb)
                elif color[nb] == color[u]:
                    bipartite = False
    connected = components == 1
    is_tree = connected and graph.s == graph.v - 1
    bipartition = tuple(color) if bipartite else None
    signs = None
    if bipartite:
        signs = tuple(1 if color[a] == 0 else -1 for a, b in graph.edges)
    return GraphClassification(
        is_pairwise=True,
        is_connected=connected,
        component_count=components,
        is_tree=is_tree,
        bipartition=bipartition,
        sink_source_signs=signs,
    )


def incidence_matrix(graph: ComparisonGraph) -> np.ndarray:
    """v-by-s incidence matrix: +1 at the edge tail, -1 at the head."""
    r = np.zeros((graph.v, graph.s))
    for k, (a, b) in enumerate(graph.edges):
        r[a, k] = 1.0
        r[b, k] = -1.0
    return r


def graph_system(graph: ComparisonGraph) -> ContrastSystem:
    """The contrast system whose coefficient matrix is the incidence matrix."""
    return ContrastSystem(incidence_matrix(graph))


def rank_of(system: ContrastSystem, tol: float | None = None) -> int:
    """Numeric rank: eigenvalues of q^T q above tol relative to the largest."""
    if tol is None:
        tol = default_rank_tol()
    if tol <= 0:
        raise ValueError("rank tolerance must be positive")
    gram = system.q.T @ system.q
    vals, _ = eigh_sym(gram)
    if vals[0] <= 0.0:
        return 0
    return int(np.count_nonzero(vals > tol * vals[0]))
