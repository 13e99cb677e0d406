"""Graph families: the circulant bipartite graphs G(m, d), cycles, complete
bipartite graphs and categorical products.

Vertices are stored in a canonical total order; adjacency is kept as one
bitmask per vertex index so that the complex enumerator can work on ints.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Hashable, Iterable, Sequence

MAX_ISO_VERTICES = 16


class Side(str, Enum):
    A = "a"
    B = "b"


def residue(i: int, m: int) -> int:
    """Reduce ``i`` modulo ``m`` into ``[1, m]`` (so 0 maps to m)."""
    r = i % m
    return m if r == 0 else r


@dataclass(frozen=True, order=True)
class Vertex:
    side: Side
    index: int

    def __str__(self) -> str:
        return f"{self.side.value}{self.index}"


def a(i: int) -> Vertex:
    return Vertex(Side.A, i)


def b(i: int) -> Vertex:
    return Vertex(Side.B, i)


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph with a canonical vertex order.

    ``vertices[i]`` is the vertex with canonical position ``i``;
    ``adjacency[i]`` is the bitmask of the neighbours of that vertex.
    """

    vertices: tuple[Hashable, ...]
    adjacency: tuple[int, ...]
    family: str = "custom"
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        n = len(self.vertices)
        if len(self.adjacency) != n:
            raise ValueError("adjacency length does not match vertex count")
        if len(set(self.vertices)) != n:
            raise ValueError("duplicate vertices")
        for i, row in enumerate(self.adjacency):
            if row >> i & 1:
                raise ValueError(f"self-loop at {self.label(i)}")
            if row >> n:
                raise ValueError("adjacency refers to a vertex out of range")
            for j in _bits(row):
                if not self.adjacency[j] >> i & 1:
                    raise ValueError("adjacency is not symmetric")
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.vertices)})

    @classmethod
    def from_edges(
        cls,
        vertices: Sequence[Hashable],
        edges: Iterable[tuple[Hashable, Hashable]],
        family: str = "custom",
        params: dict | None = None,
    ) -> "Graph":
        index = {v: i for i, v in enumerate(vertices)}
        adj = [0] * len(vertices)
        for u, v in edges:
            i, j = index[u], index[v]
            if i == j:
                raise ValueError(f"self-loop at {u}")
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return cls(tuple(vertices), tuple(adj), family, dict(params or {}))

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, v: Hashable) -> int:
        return self._index[v]

    def label(self, i: int) -> str:
        return _label(self.vertices[i])

    def degree(self, v: Hashable) -> int:
        return self.adjacency[self.index(v)].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adjacency]

    def neighbors(self, v: Hashable) -> set:
        return {self.vertices[j] for j in _bits(self.adjacency[self.index(v)])}

    def adjacent(self, u: Hashable, v: Hashable) -> bool:
        return bool(self.adjacency[self.index(u)] >> self.index(v) & 1)

    def edges(self) -> list[tuple[Hashable, Hashable]]:
        return [
            (self.vertices[i], self.vertices[j])
            for i, row in enumerate(self.adjacency)
            for j in _bits(row)
            if i < j
        ]

    def mask(self, vs: Iterable[Hashable]) -> int:
        out = 0
        for v in vs:
            out |= 1 << self.index(v)
        return out

    def unmask(self, mask: int) -> tuple:
        return tuple(self.vertices[i] for i in _bits(mask))

    def to_json(self) -> dict:
        out: dict = {"family": self.family}
        out.update(self.params)
        out["vertices"] = [self.label(i) for i in range(self.n)]
        out["edges"] = [[_label(u), _label(v)] for u, v in self.edges()]
        return out

    def to_dot(self) -> str:
        name = self.family.replace("-", "_")
        lines = [f"graph {name} {{"]
        lines += [f'  "{self.label(i)}";' for i in range(self.n)]
        lines += [f'  "{_label(u)}" -- "{_label(v)}";' for u, v in self.edges()]
        lines.append("}")
        return "\n".join(lines) + "\n"


def _label(v: Hashable) -> str:
    if isinstance(v, tuple):
        return "(" + ",".join(_label(x) for x in v) + ")"
    return str(v)


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def build_gmd(m: int, d: int) -> Graph:
    """The d-regular bipartite graph on a_1..a_m, b_1..b_m where
    a_i is adjacent to b_i, b_{i+1}, ..., b_{i+d-1} (indices mod m)."""
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    if not 1 <= d <= m:
        raise ValueError(f"need 1 <= d <= m, got m={m}, d={d}")
    vertices = [a(i) for i in range(1, m + 1)] + [b(i) for i in range(1, m + 1)]
    edges = [(a(i), b(residue(i + k, m))) for i in range(1, m + 1) for k in range(d)]
    return Graph.from_edges(vertices, edges, "gmd", {"m": m, "d": d})


def build_cycle(r: int) -> Graph:
    if r < 3:
        raise ValueError(f"cycle length must be at least 3, got {r}")
    vertices = list(range(1, r + 1))
    edges = [(i, i % r + 1) for i in range(1, r + 1)]
    return Graph.from_edges(vertices, edges, "cycle", {"r": r})


def build_complete_bipartite(p: int, q: int) -> Graph:
    if p < 1 or q < 1:
        raise ValueError(f"part sizes must be positive, got {p}, {q}")
    vertices = [a(i) for i in range(1, p + 1)] + [b(j) for j in range(1, q + 1)]
    edges = [(a(i), b(j)) for i in range(1, p + 1) for j in range(1, q + 1)]
    return Graph.from_edges(vertices, edges, "complete_bipartite", {"p": p, "q": q})


def build_complete(n: int) -> Graph:
    vertices = list(range(1, n + 1))
    return Graph.from_edges(vertices, itertools.combinations(vertices, 2), "complete", {"n": n})


def categorical_product(G: Graph, H: Graph) -> Graph:
    """(g, h) ~ (g', h') iff g ~ g' in G and h ~ h' in H."""
    if G.n == 0 or H.n == 0:
        raise ValueError("categorical product needs nonempty factors")
    vertices = [(g, h) for g in G.vertices for h in H.vertices]
    edges = [
        ((g, h), (g2, h2))
        for g, g2 in G.edges()
        for h, h2 in H.edges()
    ]
    # each unordered pair of edges gives two product edges
    edges += [((g, h2), (g2, h)) for g, g2 in G.edges() for h, h2 in H.edges()]
    return Graph.from_edges(vertices, edges, "product")


def are_isomorphic(G: Graph, H: Graph) -> bool:
    """Exhaustive isomorphism test with degree-class pruning (<= 16 vertices)."""
    if G.n > MAX_ISO_VERTICES or H.n > MAX_ISO_VERTICES:
        raise ValueError(f"isomorphism search limited to {MAX_ISO_VERTICES} vertices")
    if G.n != H.n:
        return False
    dg, dh = G.degrees(), H.degrees()
    if sorted(dg) != sorted(dh):
        return False
    n = G.n
    # map G vertices high degree first so that failures surface early
    order = sorted(range(n), key=lambda i: (-dg[i], i))
    image = [-1] * n
    used = 0

    def extend(pos: int) -> bool:
        nonlocal used
        if pos == n:
            return True
        u = order[pos]
        for w in range(n):
            if used >> w & 1 or dh[w] != dg[u]:
                continue
            ok = True
            for prev in order[:pos]:
                if bool(G.adjacency[u] >> prev & 1) != bool(H.adjacency[w] >> image[prev] & 1):
                    ok = False
                    break
            if not ok:
                continue
            image[u] = w
            used |= 1 << w
            if extend(pos + 1):
                return True
            used &= ~(1 << w)
            image[u] = -1
        return False

    return extend(0)


def graph_from_json(data: dict | str) -> Graph:
    if isinstance(data, str):
        data = json.loads(data)
    params = {k: v for k, v in data.items() if k not in ("family", "vertices", "edges")}
    return Graph.from_edges(
        data["vertices"], [tuple(e) for e in data["edges"]], data.get("family", "custom"), params
    )
