"""Independence complexes and their face posets.

A face is an ``int`` bitmask over the owning graph's canonical vertex order
(bit ``i`` set means vertex ``i`` is in the face).  The empty face is ``0``.
"""

from __future__ import annotations

import json
from functools import lru_cache
from typing import Iterable, Iterator

import numpy as np

from .errors import BudgetExceededError, UnknownFaceError
from .graphs import Graph, _bits

DEFAULT_FACE_BUDGET = 2_000_000


def count_independent_sets(G: Graph) -> int:
    """Number of independent sets of ``G``, the empty set included."""
    adj = G.adjacency

    @lru_cache(maxsize=None)
    def count(cand: int) -> int:
        if cand == 0:
            return 1
        low = cand & -cand
        v = low.bit_length() - 1
        rest = cand ^ low
        return count(rest) + count(rest & ~adj[v])

    return count((1 << G.n) - 1)


def iter_independent_sets(G: Graph) -> Iterator[int]:
    """Depth-first enumeration in canonical order: a face is followed by all
    of its extensions by larger-indexed vertices."""
    adj = G.adjacency
    full = (1 << G.n) - 1
    stack = [(0, full)]
    while stack:
        face, cand = stack.pop()
        yield face
        children = []
        for v in _bits(cand):
            above = full & ~((2 << v) - 1)
            children.append((face | 1 << v, cand & above & ~adj[v]))
        stack.extend(reversed(children))


def dim(face: int) -> int:
    return face.bit_count() - 1


def incidence(face: int, v: int) -> int:
    """Sign of the facet ``face - {v}`` in the boundary of ``face``."""
    return -1 if (face & ((1 << v) - 1)).bit_count() & 1 else 1


class Complex:
    """All faces of Ind(G), including the empty face."""

    def __init__(self, graph: Graph, faces: Iterable[int]):
        self.graph = graph
        self.faces: tuple[int, ...] = tuple(faces)
        self._members = frozenset(self.faces)
        if len(self._members) != len(self.faces):
            raise ValueError("duplicate faces")
        top = max((f.bit_count() for f in self.faces), default=0)
        fv = [0] * (top + 1)
        for f in self.faces:
            fv[f.bit_count()] += 1
        # fv[0] counts the empty face
        self._fv = fv
        self._sorted: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.faces)

    def __contains__(self, face: int) -> bool:
        return face in self._members

    def __iter__(self):
        return iter(self.faces)

    @property
    def dimension(self) -> int:
        return len(self._fv) - 2

    def faces_of_dim(self, p: int) -> list[int]:
        return [f for f in self.faces if f.bit_count() == p + 1]

    def sorted_array(self) -> np.ndarray:
        """Faces as a sorted uint64 array, for vectorised lookups."""
        if self._sorted is None:
            self._sorted = np.array(sorted(self.faces), dtype=np.uint64)
        return self._sorted

    def covers(self, face: int) -> set[int]:
        """Faces covered by ``face``: delete one vertex."""
        if face not in self._members:
            raise UnknownFaceError(self.labels(face))
        return {face ^ (1 << v) for v in _bits(face)}

    def is_independent(self, face: int) -> bool:
        adj = self.graph.adjacency
        return all(not (adj[v] & face) for v in _bits(face))

    def facets(self) -> list[int]:
        adj = self.graph.adjacency
        full = (1 << self.graph.n) - 1
        out = []
        for f in self.faces:
            blocked = f
            for v in _bits(f):
                blocked |= adj[v]
            if blocked == full:
                out.append(f)
        return out

    def f_vector(self) -> list[int]:
        """Counts per dimension -1, 0, 1, ..."""
        return list(self._fv)

    def reduced_euler(self) -> int:
        # fv[k] counts faces of dimension k-1, whose sign is (-1)^(k-1)
        return sum(-n if k % 2 == 0 else n for k, n in enumerate(self._fv))

    def labels(self, face: int) -> list[str]:
        return [self.graph.label(v) for v in _bits(face)]

    def face_from_labels(self, labels: Iterable[str]) -> int:
        by_label = {self.graph.label(i): i for i in range(self.graph.n)}
        face = 0
        for s in labels:
            face |= 1 << by_label[s]
        return face

    def to_jsonl(self, facets_only: bool = False) -> str:
        faces = self.facets() if facets_only else self.faces
        return "".join(json.dumps(self.labels(f)) + "\n" for f in faces)


def independence_complex(G: Graph, budget: int = DEFAULT_FACE_BUDGET) -> Complex:
    n_faces = count_independent_sets(G)
    if n_faces > budget:
        raise BudgetExceededError("independence complex", n_faces, budget)
    return Complex(G, iter_independent_sets(G))


def full_simplex(n: int) -> Complex:
    """Ind of the edgeless graph on n vertices (a contractible simplex)."""
    G = Graph(tuple(range(1, n + 1)), (0,) * n, "empty", {"n": n})
    return independence_complex(G)
