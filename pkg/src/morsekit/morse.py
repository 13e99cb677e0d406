"""Sequential element matching on a face poset, matching verification,
critical cells and the Morse chain complex built from gradient paths."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .complex import Complex, incidence
from .errors import NotAcyclicError
from .graphs import _bits
from .homology import IntegerMatrix
from .homotopy import HomotopyPrediction

log = logging.getLogger(__name__)

DOWN, UP = "down", "up"


@dataclass(frozen=True)
class MorseMatching:
    """Pairs ``sigma -> sigma + {x}`` plus the phase that produced each.

    ``pairs`` maps the lower face to the upper one; ``phase`` maps every
    matched face to ``(vertex index, role)``; ``critical`` lists unmatched
    faces in the complex's enumeration order.
    """

    pairs: dict[int, int]
    phase: dict[int, tuple[int, str]]
    critical: tuple[int, ...]
    order: tuple[int, ...] = ()

    @classmethod
    def from_pairs(cls, c: Complex, pairs: dict[int, int]) -> "MorseMatching":
        """Wrap an arbitrary pairing (no validity checks)."""
        phase: dict[int, tuple[int, str]] = {}
        for lo, hi in pairs.items():
            diff = lo ^ hi
            x = diff.bit_length() - 1 if diff.bit_count() == 1 else -1
            phase[lo] = (x, DOWN)
            phase[hi] = (x, UP)
        critical = tuple(f for f in c.faces if f not in phase)
        return cls(dict(pairs), phase, critical)

    @property
    def upper(self) -> set[int]:
        return set(self.pairs.values())

    def critical_by_dim(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for f in self.critical:
            out.setdefault(f.bit_count() - 1, []).append(f)
        return out


def _order_indices(c: Complex, order: Sequence[Hashable] | None) -> list[int]:
    G = c.graph
    if order is None:
        return list(range(G.n))
    try:
        idx = [G.index(v) for v in order]
    except KeyError as exc:
        raise ValueError(f"order contains unknown vertex {exc.args[0]!r}") from None
    if sorted(idx) != list(range(G.n)):
        raise ValueError("order must be a permutation of the graph's vertices")
    return idx


def sequential_element_matching(c: Complex, order: Sequence[Hashable] | None = None) -> MorseMatching:
    """For each vertex x in ``order`` pair every residual face sigma with
    ``x not in sigma`` and ``sigma + {x}`` residual, then drop both.

    ``order`` defaults to the graph's canonical order.
    """
    idx = _order_indices(c, order)
    arr = c.sorted_array()
    n = len(arr)
    alive = np.ones(n, dtype=bool)
    lows, ups, xs = [], [], []
    for x in idx:
        bit = np.uint64(1 << x)
        cand = np.flatnonzero(alive & ((arr & bit) == 0))
        target = arr[cand] | bit
        pos = np.minimum(np.searchsorted(arr, target), n - 1)
        ok = (arr[pos] == target) & alive[pos]
        lo, hi = cand[ok], pos[ok]
        alive[lo] = False
        alive[hi] = False
        lows.append(lo)
        ups.append(hi)
        xs.append(np.full(len(lo), x, dtype=np.int64))
    lo = arr[np.concatenate(lows)].tolist() if lows else []
    hi = arr[np.concatenate(ups)].tolist() if ups else []
    xv = np.concatenate(xs).tolist() if xs else []
    pairs = dict(zip(lo, hi))
    phase = {f: (x, DOWN) for f, x in zip(lo, xv)}
    phase.update({f: (x, UP) for f, x in zip(hi, xv)})
    critical = tuple(f for f in c.faces if f not in phase)
    return MorseMatching(pairs, phase, critical, tuple(idx))


def replay_trace(mm: MorseMatching) -> dict[int, int]:
    """Rebuild the pairing from the phase trace alone."""
    return {f: f | (1 << x) for f, (x, role) in mm.phase.items() if role == DOWN}


def partial_matching_violation(mm: MorseMatching, c: Complex) -> str | None:
    """Describe the first way ``mm`` fails to be a partial matching, if any."""
    seen: set[int] = set()
    for lo, hi in mm.pairs.items():
        if lo not in c or hi not in c:
            missing = lo if lo not in c else hi
            return f"pair {c.labels(lo)} -> {c.labels(hi)}: {c.labels(missing)} is not a face"
        if lo & ~hi or (hi ^ lo).bit_count() != 1:
            return f"pair {c.labels(lo)} -> {c.labels(hi)} is not a cover relation"
        for f in (lo, hi):
            if f in seen:
                return f"face {c.labels(f)} occurs in two pairs"
            seen.add(f)
    return None


def verify_partial_matching(mm: MorseMatching, c: Complex) -> bool:
    problem = partial_matching_violation(mm, c)
    if problem:
        log.warning("not a partial matching: %s", problem)
    return problem is None


def verify_acyclic(mm: MorseMatching, c: Complex) -> bool:
    """No directed cycle in the Hasse diagram with matched edges reversed."""
    arr = c.sorted_array()
    n = len(arr)
    if n == 0:
        return True
    partner = np.full(n, -1, dtype=np.int64)
    if mm.pairs:
        lo = np.searchsorted(arr, np.array(list(mm.pairs.keys()), dtype=np.uint64))
        hi = np.searchsorted(arr, np.array(list(mm.pairs.values()), dtype=np.uint64))
        partner[lo] = hi
    src, dst = [], []
    for v in range(c.graph.n):
        bit = np.uint64(1 << v)
        top = np.flatnonzero(arr & bit)
        if not len(top):
            continue
        bottom = np.searchsorted(arr, arr[top] ^ bit)
        up = partner[bottom] == top
        src += [bottom[up], top[~up]]
        dst += [top[up], bottom[~up]]
    if not src:
        return True
    s, t = np.concatenate(src), np.concatenate(dst)
    g = csr_matrix((np.ones(len(s), dtype=np.int8), (s, t)), shape=(n, n))
    n_comp, _ = connected_components(g, directed=True, connection="strong")
    return n_comp == n


@dataclass(frozen=True)
class MorseChainComplex:
    """Critical cells by dimension and Morse boundaries between them.

    ``boundaries[p]`` maps critical p-cells (columns) to critical
    (p-1)-cells (rows), both in the order of ``cells``.
    """

    cells: dict[int, tuple[int, ...]]
    boundaries: dict[int, IntegerMatrix]

    def chain_ranks(self) -> dict[int, int]:
        return {p: len(v) for p, v in self.cells.items() if v}

    def boundary(self, p: int) -> IntegerMatrix:
        if p in self.boundaries:
            return self.boundaries[p]
        return IntegerMatrix(len(self.cells.get(p - 1, ())), len(self.cells.get(p, ())))


def _flow(start: int, mm: MorseMatching, critical: set[int], memo: dict[int, dict[int, int]]) -> dict[int, int]:
    """Coefficients on critical cells reached by gradient paths from ``start``."""
    stack = [start]
    visiting: set[int] = set()
    while stack:
        r = stack[-1]
        if r in memo:
            stack.pop()
            continue
        if r in critical:
            memo[r] = {r: 1}
            stack.pop()
            continue
        up = mm.pairs.get(r)
        if up is None:
            memo[r] = {}
            stack.pop()
            continue
        x = (up ^ r).bit_length() - 1
        nexts = [(up ^ (1 << w), w) for w in _bits(up) if w != x]
        missing = [f for f, _ in nexts if f not in memo]
        if missing:
            if r in visiting:
                raise NotAcyclicError(f"gradient path cycle through face {r:#x}")
            visiting.add(r)
            for f in missing:
                if f in visiting:
                    raise NotAcyclicError(f"gradient path cycle through face {f:#x}")
            stack.extend(missing)
            continue
        visiting.discard(r)
        e = incidence(up, x)
        acc: dict[int, int] = {}
        for f, w in nexts:
            coef = -e * incidence(up, w)
            for cell, k in memo[f].items():
                acc[cell] = acc.get(cell, 0) + coef * k
        memo[r] = {cell: k for cell, k in acc.items() if k}
        stack.pop()
    return memo[start]


def morse_chain_complex(c: Complex, mm: MorseMatching, check: bool = True) -> MorseChainComplex:
    if check and not verify_acyclic(mm, c):
        raise NotAcyclicError("matching is not acyclic")
    by_dim = {p: tuple(sorted(fs)) for p, fs in mm.critical_by_dim().items()}
    critical = set(mm.critical)
    memo: dict[int, dict[int, int]] = {}
    boundaries = {}
    for p, cells in by_dim.items():
        if p < 0:
            continue
        targets = by_dim.get(p - 1, ())
        row = {f: i for i, f in enumerate(targets)}
        cols = []
        for sigma in cells:
            acc: dict[int, int] = {}
            for v in _bits(sigma):
                e = incidence(sigma, v)
                for cell, k in _flow(sigma ^ (1 << v), mm, critical, memo).items():
                    acc[row[cell]] = acc.get(row[cell], 0) + e * k
            cols.append(acc)
        boundaries[p] = IntegerMatrix(len(targets), len(cells), cols)
    return MorseChainComplex(by_dim, boundaries)


def infer_wedge(mm: MorseMatching) -> HomotopyPrediction | None:
    """Wedge of spheres when all critical cells share one dimension, else None."""
    if 0 in mm.critical:
        raise ValueError("the empty face is critical")
    dims = {f.bit_count() - 1 for f in mm.critical}
    if not dims:
        return HomotopyPrediction()
    if len(dims) > 1:
        return None
    return HomotopyPrediction.wedge(dims.pop(), len(mm.critical))


def cells_to_labels(c: Complex, cells: Iterable[int]) -> list[list[str]]:
    return [c.labels(f) for f in cells]
