"""Closed-form predicates and predictions for Ind(G(m, d)) and Ind(C_r).

Everything here works on sets of B-indices (``{1, 3}`` stands for
``{b1, b3}``) and never touches the matching engine, so it can serve as an
independent oracle for it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Collection, Iterable

from .graphs import residue
from .homotopy import HomotopyPrediction

BCell = frozenset[int]


@dataclass(frozen=True)
class InstanceParams:
    m: int
    d: int

    def __post_init__(self):
        if not 1 <= self.d <= self.m:
            raise ValueError(f"need 1 <= d <= m, got m={self.m}, d={self.d}")

    @property
    def t(self) -> int:
        return self.m // (self.d + 1)

    @property
    def alpha(self) -> int:
        return self.m - self.t * (self.d + 1)

    def k(self, j1: int) -> int:
        return j1 + self.m - self.d - 1

    def i(self, r: int) -> int:
        return 1 + (r - 1) * (self.d + 1)

    def j(self, r: int, j1: int) -> int:
        return j1 + (r - 1) * (self.d + 1)


def _params(p: InstanceParams | tuple[int, int]) -> InstanceParams:
    return p if isinstance(p, InstanceParams) else InstanceParams(*p)


def b_set(s: int, p: InstanceParams) -> BCell:
    """The cyclic block {b_s, ..., b_{s+m-d-1}}; empty when d = m."""
    p = _params(p)
    if not 1 <= s <= p.m:
        raise ValueError(f"block index {s} outside [1, {p.m}]")
    return frozenset(residue(s + k, p.m) for k in range(p.m - p.d))


def pointed_contained(sigma: Collection[int], s: int, p: InstanceParams) -> bool:
    """``sigma`` lies in block s and contains its basepoint b_s."""
    sigma = frozenset(sigma)
    return s in sigma and sigma <= b_set(s, p)


def plain_contained(sigma: Collection[int], p: InstanceParams) -> bool:
    p = _params(p)
    sigma = frozenset(sigma)
    return any(sigma <= b_set(s, p) for s in range(1, p.m + 1))


def in_m(sigma: Collection[int], p: InstanceParams) -> bool:
    """Whether a nonempty B-face survives the A-phases of the matching."""
    p = _params(p)
    sigma = frozenset(sigma)
    if not sigma:
        raise ValueError("in_m is defined for nonempty faces only")
    return not any(pointed_contained(sigma, s, p) for s in range(1, p.m + 1))


def extension_exists(sigma: Collection[int], p: InstanceParams) -> bool:
    """Some a_i has no neighbour in ``sigma`` (N(a_i) = b_i .. b_{i+d-1})."""
    p = _params(p)
    sigma = frozenset(sigma)
    return any(
        not any(residue(i + k, p.m) in sigma for k in range(p.d)) for i in range(1, p.m + 1)
    )


def satisfies_p(sigma: Collection[int], l: int, p: InstanceParams) -> bool:
    """Property P_l: the anchored shape plus the deletion condition."""
    p = _params(p)
    if not 1 <= l <= p.t:
        raise ValueError(f"l={l} outside [1, t={p.t}]")
    elems = sorted(sigma)
    if not elems:
        raise ValueError("satisfies_p is defined for nonempty faces only")
    if len(elems) < 2 * l or elems[0] != 1:
        return False
    j1 = elems[1]
    if not 1 < j1 <= p.d + 1 or elems[-1] != p.k(j1):
        return False
    anchors = []
    for r in range(1, l + 1):
        anchors += [p.i(r), p.j(r, j1)]
    if elems[: 2 * l] != anchors:
        return False
    full = frozenset(elems)
    return all(not in_m(full - {x}, p) for x in anchors)


def predicted_critical_cells(p: InstanceParams) -> set[BCell]:
    p = _params(p)
    if p.d == p.m:
        return {frozenset({1})}
    t = p.t
    if p.alpha == 0:
        return {
            frozenset(x for r in range(1, t + 1) for x in (p.i(r), p.j(r, j1)))
            for j1 in range(2, p.d + 2)
        }
    j1 = p.d - p.alpha + 2
    cell = {x for r in range(1, t + 1) for x in (p.i(r), p.j(r, j1))}
    cell.add(p.i(t + 1))
    return {frozenset(cell)}


def predicted_homotopy(p: InstanceParams) -> HomotopyPrediction:
    p = _params(p)
    if p.alpha == 0:
        return HomotopyPrediction.wedge(2 * p.t - 1, p.d)
    return HomotopyPrediction.wedge(2 * p.t, 1)


def kozlov_predicted(r: int) -> HomotopyPrediction:
    if r < 3:
        raise ValueError(f"cycle length must be at least 3, got {r}")
    k, rem = divmod(r, 3)
    if rem == 0:
        return HomotopyPrediction.wedge(k - 1, 2)
    if rem == 2:
        k += 1
    return HomotopyPrediction.wedge(k - 1, 1)


def predicted_euler(p: InstanceParams) -> int:
    p = _params(p)
    return -p.d if p.alpha == 0 else 1


def cell_labels(cell: Iterable[int]) -> list[str]:
    return [f"b{i}" for i in sorted(cell)]
