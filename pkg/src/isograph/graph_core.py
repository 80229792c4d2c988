"""Finite simple graphs: families, graph6 I/O, the shortest-path metric, shape tests."""
from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

INF = math.inf


class Graph6ParseError(ValueError):
    """Malformed graph6 input; carries the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class NotConnectedError(ValueError):
    """Raised by operations defined only on connected graphs."""

    def __init__(self, components):
        self.components = [sorted(c) for c in components]
        super().__init__(
            "graph is not connected; components: "
            + "; ".join(str(c) for c in self.components)
        )


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..vertex_count-1."""

    vertex_count: int
    edges: frozenset

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be nonnegative")
        for e in self.edges:
            if not (isinstance(e, tuple) and len(e) == 2):
                raise ValueError(f"edge {e!r} is not a pair")
            i, j = e
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            if not (0 <= i < j < self.vertex_count):
                raise ValueError(f"edge {e!r} out of range or unnormalized")

    @staticmethod
    def from_edges(vertex_count: int, edges: Iterable) -> "Graph":
        normalized = set()
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            normalized.add((min(i, j), max(i, j)))
        return Graph(vertex_count, frozenset(normalized))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def neighbors(self, v: int):
        return sorted(
            j if i == v else i for (i, j) in self.edges if v in (i, j)
        )

    def degrees(self):
        deg = [0] * self.vertex_count
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.vertex_count, self.vertex_count), dtype=int)
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1
        return a

    def components(self):
        seen = set()
        comps = []
        adj = {v: [] for v in range(self.vertex_count)}
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        for start in range(self.vertex_count):
            if start in seen:
                continue
            comp = {start}
            queue = deque([start])
            while queue:
                u = queue.popleft()
                for w in adj[u]:
                    if w not in comp:
                        comp.add(w)
                        queue.append(w)
            seen |= comp
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        return self.vertex_count <= 1 or len(self.components()) == 1

    def complement_edges(self):
        """Unordered vertex pairs that are NOT edges."""
        return [
            (i, j)
            for i in range(self.vertex_count)
            for j in range(i + 1, self.vertex_count)
            if (i, j) not in self.edges
        ]


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric nonnegative matrix with zero diagonal; inf marks no path."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError("distance matrix must be square")
        finite = np.isfinite(v)
        if np.any(v[finite] < 0):
            raise ValueError("negative distance entry")
        if not np.array_equal(v, v.T):
            raise ValueError("distance matrix must be symmetric")
        if np.any(np.diag(v) != 0):
            raise ValueError("diagonal must be zero")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def size(self) -> int:
        return self.values.shape[0]

    @property
    def has_infinite(self) -> bool:
        return bool(np.any(np.isinf(self.values)))

    @property
    def max_finite(self) -> float:
        finite = self.values[np.isfinite(self.values)]
        return float(finite.max()) if finite.size else 0.0

    def check_triangle(self, slack: float = 1e-9) -> bool:
        """Triangle inequality over finite entries."""
        v = self.values
        n = self.size
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if v[i, k] > v[i, j] + v[j, k] + slack:
                        return False
        return True


@dataclass(frozen=True)
class ShapeFlags:
    """Which of the classification forms a connected graph matches.

    Flags overlap by design: K_3 is both complete and a 3-cycle, and every
    complete graph on >= 3 vertices is trivially complete-minus-matching
    (empty matching).
    """

    is_path: bool
    is_cycle: bool
    is_complete: bool
    is_complete_minus_matching: bool
    max_degree: int
    matching_size: Optional[int]


# ---------------------------------------------------------------------------
# graph6 (short form, n <= 62)

def parse_graph6(text) -> Graph:
    """Decode one short-form graph6 string."""
    if isinstance(text, bytes):
        data = text
    else:
        data = text.encode("ascii", errors="strict")
    data = data.rstrip(b"\r\n")
    if not data:
        raise Graph6ParseError("empty input", 0)
    if data[0:1] == b":":
        raise Graph6ParseError("sparse6 input is not supported", 0)
    if data[0] == 126:  # '~'
        raise Graph6ParseError("long-form vertex count is not supported", 0)
    n = data[0] - 63
    if not (0 <= n <= 62):
        raise Graph6ParseError(f"malformed header byte {data[0]}", 0)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(data) - 1 != nbytes:
        raise Graph6ParseError(
            f"expected {nbytes} payload bytes for n={n}, got {len(data) - 1}",
            min(len(data), 1 + nbytes),
        )
    bits = []
    for off, b in enumerate(data[1:], start=1):
        if not (63 <= b <= 126):
            raise Graph6ParseError(f"payload byte {b} out of range", off)
        val = b - 63
        bits.extend((val >> k) & 1 for k in (5, 4, 3, 2, 1, 0))
    for k in range(nbits, len(bits)):
        if bits[k]:
            raise Graph6ParseError("nonzero padding bits", len(data) - 1)
    edges = set()
    idx = 0
    for j in range(1, n):
        for i in range(j):
            if bits[idx]:
                edges.add((i, j))
            idx += 1
    return Graph(n, frozenset(edges))


def write_graph6(g: Graph) -> str:
    """Encode a graph in short-form graph6."""
    n = g.vertex_count
    if n > 62:
        raise ValueError("short-form graph6 supports at most 62 vertices")
    bits = []
    for j in range(1, n):
        for i in range(j):
            bits.append(1 if (i, j) in g.edges else 0)
    while len(bits) % 6:
        bits.append(0)
    out = [chr(63 + n)]
    for k in range(0, len(bits), 6):
        val = 0
        for b in bits[k : k + 6]:
            val = (val << 1) | b
        out.append(chr(63 + val))
    return "".join(out)


# ---------------------------------------------------------------------------
# families

PATH = "path"
CYCLE = "cycle"
COMPLETE = "complete"
COCKTAIL = "cocktail"
COMPLETE_MINUS_MATCHING = "complete_minus_matching"


def construct_family(family: str, *params: int) -> Graph:
    """Build one of the classification families.

    path(k>=1), cycle(m>=3), complete(m>=1), cocktail(n>=1),
    complete_minus_matching(m>=1, t with 2t<=m).

    cocktail(n) is the hyperoctahedral graph on 2(n+1) vertices: i and
    i+(n+1) are the unique non-adjacent pairs.
    """
    if family == PATH:
        (k,) = params
        if k < 1:
            raise ValueError("path needs at least one vertex")
        return Graph.from_edges(k, [(i, i + 1) for i in range(k - 1)])
    if family == CYCLE:
        (m,) = params
        if m < 3:
            raise ValueError("cycle needs at least three vertices")
        return Graph.from_edges(
            m, [(i, (i + 1) % m) for i in range(m)]
        )
    if family == COMPLETE:
        (m,) = params
        if m < 1:
            raise ValueError("complete graph needs at least one vertex")
        return Graph.from_edges(
            m, [(i, j) for i in range(m) for j in range(i + 1, m)]
        )
    if family == COCKTAIL:
        (n,) = params
        if n < 1:
            raise ValueError("cocktail parameter must be >= 1")
        m = 2 * (n + 1)
        half = n + 1
        edges = [
            (i, j)
            for i in range(m)
            for j in range(i + 1, m)
            if j - i != half
        ]
        return Graph.from_edges(m, edges)
    if family == COMPLETE_MINUS_MATCHING:
        m, t = params
        if m < 1 or t < 0 or 2 * t > m:
            raise ValueError("need m >= 1 and 2t <= m")
        removed = {(2 * i, 2 * i + 1) for i in range(t)}
        edges = [
            (i, j)
            for i in range(m)
            for j in range(i + 1, m)
            if (i, j) not in removed
        ]
        return Graph.from_edges(m, edges)
    raise ValueError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# metric and shape

def distance_matrix(g: Graph) -> DistanceMatrix:
    """All-pairs shortest paths by BFS from every vertex."""
    n = g.vertex_count
    adj = [[] for _ in range(n)]
    for i, j in g.edges:
        adj[i].append(j)
        adj[j].append(i)
    d = np.full((n, n), INF)
    for s in range(n):
        d[s, s] = 0.0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if not np.isfinite(d[s, w]):
                    d[s, w] = d[s, u] + 1.0
                    queue.append(w)
    return DistanceMatrix(d)


def complement_is_partial_matching(g: Graph) -> bool:
    """True iff every vertex has at most one non-neighbor."""
    n = g.vertex_count
    deg = g.degrees()
    return all(deg[v] >= n - 2 for v in range(n))


def classify_shape(g: Graph) -> ShapeFlags:
    """Evaluate the classification-form predicates on a connected graph."""
    comps = g.components()
    if g.vertex_count > 1 and len(comps) > 1:
        raise NotConnectedError(comps)
    n = g.vertex_count
    deg = g.degrees()
    max_degree = max(deg) if deg else 0
    is_path = len(g.edges) == n - 1 and max_degree <= 2
    is_cycle = n >= 3 and all(d == 2 for d in deg)
    is_complete = len(g.edges) == n * (n - 1) // 2
    cmm = n >= 3 and complement_is_partial_matching(g)
    matching_size = len(g.complement_edges()) if cmm else None
    return ShapeFlags(
        is_path=is_path,
        is_cycle=is_cycle,
        is_complete=is_complete,
        is_complete_minus_matching=cmm,
        max_degree=max_degree,
        matching_size=matching_size,
    )


# ---------------------------------------------------------------------------
# edge-list JSON

def from_edge_list_json(text: str) -> Graph:
    """Parse {"vertices": n, "edges": [[i,j],...]}; repeats and loops rejected."""
    obj = json.loads(text)
    n = obj["vertices"]
    seen = set()
    for i, j in obj["edges"]:
        if i == j:
            raise ValueError(f"self-loop at vertex {i}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise ValueError(f"repeated edge {key}")
        seen.add(key)
    return Graph.from_edges(n, seen)


def to_edge_list_json(g: Graph) -> str:
    return json.dumps(
        {"vertices": g.vertex_count, "edges": sorted(map(list, g.edges))}
    )
