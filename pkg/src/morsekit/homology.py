"""Exact integer homology through Smith normal form.

Boundary matrices of flag complexes are sparse and mostly reducible by
unit pivots, so :func:`smith_normal_form` first eliminates +-1 pivots on a
sparse column representation, then finishes the (usually tiny) remainder
with a dense Smith reduction.  All arithmetic is on Python ints.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Protocol, Sequence

from .complex import Complex, incidence
from .errors import BudgetExceededError
from .graphs import _bits

DEFAULT_SNF_BUDGET = 100_000


class IntegerMatrix:
    """Sparse exact integer matrix stored column-wise."""

    def __init__(self, n_rows: int, n_cols: int, columns: Sequence[dict[int, int]] | None = None):
        self.n_rows = n_rows
        self.n_cols = n_cols
        if columns is None:
            columns = [{} for _ in range(n_cols)]
        if len(columns) != n_cols:
            raise ValueError("column count mismatch")
        self.columns = [{i: v for i, v in col.items() if v} for col in columns]
        for col in self.columns:
            for i in col:
                if not 0 <= i < n_rows:
                    raise IndexError(f"row index {i} out of range")

    @property
    def shape(self) -> tuple[int, int]:
        return self.n_rows, self.n_cols

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> "IntegerMatrix":
        n_rows = len(rows)
        n_cols = len(rows[0]) if n_rows else 0
        cols = [{i: int(rows[i][j]) for i in range(n_rows) if rows[i][j]} for j in range(n_cols)]
        return cls(n_rows, n_cols, cols)

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.n_cols for _ in range(self.n_rows)]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.n_cols != other.n_rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = []
        for col in other.columns:
            acc: dict[int, int] = {}
            for k, v in col.items():
                for i, w in self.columns[k].items():
                    acc[i] = acc.get(i, 0) + w * v
            cols.append(acc)
        return IntegerMatrix(self.n_rows, other.n_cols, cols)

    def is_zero(self) -> bool:
        return not any(self.columns)

    def nnz(self) -> int:
        return sum(len(c) for c in self.columns)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntegerMatrix)
            and self.shape == other.shape
            and self.columns == other.columns
        )

    def __repr__(self) -> str:
        return f"IntegerMatrix({self.n_rows}x{self.n_cols}, nnz={self.nnz()})"


def _eliminate_unit_pivots(cols: dict[int, dict[int, int]]) -> int:
    """Strip +-1 pivots in place; return how many were removed."""
    rows: dict[int, set[int]] = {}
    for j, col in cols.items():
        for i in col:
            rows.setdefault(i, set()).add(j)
    removed = 0
    progress = True
    while progress and cols:
        progress = False
        for j in sorted(cols, key=lambda j: len(cols[j])):
            col = cols.get(j)
            if col is None:
                continue
            if not col:
                del cols[j]
                continue
            best = None
            for i, v in col.items():
                if v == 1 or v == -1:
                    if best is None or len(rows[i]) < len(rows[best]):
                        best = i
            if best is None:
                continue
            pivot = col[best]
            for k in list(rows[best]):
                if k == j:
                    continue
                other = cols[k]
                factor = other[best] * pivot
                for i, v in col.items():
                    new = other.get(i, 0) - factor * v
                    if new:
                        if i not in other:
                            rows[i].add(k)
                        other[i] = new
                    elif i in other:
                        del other[i]
                        rows[i].discard(k)
            for i in col:
                rows[i].discard(j)
            del rows[best]
            del cols[j]
            removed += 1
            progress = True
    return removed


def _dense_diagonal(a: list[list[int]]) -> list[int]:
    """Diagonalise by unimodular row/column moves; return nonzero diagonal."""
    n_rows = len(a)
    n_cols = len(a[0]) if n_rows else 0
    diag = []
    t = 0
    while t < min(n_rows, n_cols):
        # minimal |entry| pivot keeps growth in check
        piv = None
        for i in range(t, n_rows):
            for j in range(t, n_cols):
                v = a[i][j]
                if v and (piv is None or abs(v) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        a[t], a[i] = a[i], a[t]
        for row in a:
            row[t], row[j] = row[j], row[t]
        while True:
            p = a[t][t]
            dirty = False
            for i in range(t + 1, n_rows):
                q = a[i][t] // p
                if q:
                    ri, rt = a[i], a[t]
                    for j in range(t, n_cols):
                        ri[j] -= q * rt[j]
                if a[i][t]:
                    dirty = True
            for j in range(t + 1, n_cols):
                q = a[t][j] // p
                if q:
                    for row in a[t:]:
                        row[j] -= q * row[t]
                if a[t][j]:
                    dirty = True
            if not dirty:
                break
            # a remainder survived: move the smallest one to the pivot slot
            best = None
            for i in range(t + 1, n_rows):
                if a[i][t] and (best is None or abs(a[i][t]) < abs(best[2])):
                    best = (i, t, a[i][t])
            for j in range(t + 1, n_cols):
                if a[t][j] and (best is None or abs(a[t][j]) < abs(best[2])):
                    best = (t, j, a[t][j])
            i, j, _ = best
            if j == t:
                a[t], a[i] = a[i], a[t]
            else:
                for row in a:
                    row[t], row[j] = row[j], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def _invariant_factors(diag: Iterable[int]) -> tuple[int, ...]:
    """Turn an arbitrary nonzero diagonal into d_1 | d_2 | ... form."""
    d = sorted(diag)
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                g = gcd(d[i], d[j])
                if g != d[i]:
                    d[i], d[j] = g, d[i] * d[j] // g
                    changed = True
        d.sort()
    return tuple(d)


def smith_normal_form(M: IntegerMatrix | Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Invariant factors (nonzero diagonal of the Smith form) of ``M``."""
    if not isinstance(M, IntegerMatrix):
        M = IntegerMatrix.from_dense(M)
    cols = {j: dict(c) for j, c in enumerate(M.columns) if c}
    units = _eliminate_unit_pivots(cols)
    if not cols:
        return (1,) * units
    row_ids = sorted({i for c in cols.values() for i in c})
    pos = {i: k for k, i in enumerate(row_ids)}
    col_ids = sorted(cols)
    dense = [[0] * len(col_ids) for _ in row_ids]
    for jj, j in enumerate(col_ids):
        for i, v in cols[j].items():
            dense[pos[i]][jj] = v
    rest = _dense_diagonal(dense)
    return (1,) * units + _invariant_factors(rest)


def rank(M: IntegerMatrix) -> int:
    return len(smith_normal_form(M))


class ChainSource(Protocol):
    """Anything with augmented chain groups and boundary matrices."""

    def chain_ranks(self) -> dict[int, int]: ...

    def boundary(self, p: int) -> IntegerMatrix: ...


def _faces_by_dim(c: Complex) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {}
    for f in c.faces:
        out.setdefault(f.bit_count() - 1, []).append(f)
    for fs in out.values():
        fs.sort()
    return out


def boundary_matrix(c: Complex, p: int, _by_dim: dict[int, list[int]] | None = None) -> IntegerMatrix:
    """Simplicial boundary C_p -> C_{p-1}, augmented at p = 0.

    Rows and columns follow the faces of each dimension sorted by bitmask.
    """
    by_dim = _by_dim if _by_dim is not None else _faces_by_dim(c)
    if p < 0:
        return IntegerMatrix(0, 0)
    lower = by_dim.get(p - 1, [])
    upper = by_dim.get(p, [])
    index = {f: k for k, f in enumerate(lower)}
    cols = []
    for f in upper:
        cols.append({index[f ^ (1 << v)]: incidence(f, v) for v in _bits(f)})
    return IntegerMatrix(len(lower), len(upper), cols)


class SimplicialChains:
    """Augmented simplicial chain complex of a :class:`Complex`."""

    def __init__(self, c: Complex):
        self.complex = c
        self._by_dim = _faces_by_dim(c)

    def chain_ranks(self) -> dict[int, int]:
        return {p: len(v) for p, v in self._by_dim.items()}

    def boundary(self, p: int) -> IntegerMatrix:
        return boundary_matrix(self.complex, p, self._by_dim)


@dataclass(frozen=True)
class HomologyProfile:
    """Reduced integral homology: Betti numbers and torsion per dimension."""

    betti: dict[int, int]
    torsion: dict[int, tuple[int, ...]] = field(default_factory=dict)
    top: int = field(default=0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "betti", {p: r for p, r in sorted(self.betti.items()) if r})
        object.__setattr__(
            self, "torsion", {p: tuple(t) for p, t in sorted(self.torsion.items()) if t}
        )

    def to_json(self) -> dict:
        top = max([self.top, *self.betti, *self.torsion], default=0)
        lo = -1 if self.betti.get(-1) else 0
        return {
            "betti": {str(p): self.betti.get(p, 0) for p in range(lo, top + 1)},
            "torsion": {str(p): list(t) for p, t in self.torsion.items()},
        }

    @classmethod
    def from_json(cls, data: dict) -> "HomologyProfile":
        betti = {int(p): r for p, r in data["betti"].items()}
        return cls(
            betti,
            {int(p): tuple(t) for p, t in data.get("torsion", {}).items()},
            max(betti, default=0),
        )

    def is_wedge_of(self, betti: dict[int, int]) -> bool:
        return not self.torsion and self.betti == {p: r for p, r in betti.items() if r}


def reduced_homology(chain, budget: int = DEFAULT_SNF_BUDGET) -> HomologyProfile:
    """Reduced homology of a :class:`Complex` or any :class:`ChainSource`
    (e.g. a Morse chain complex)."""
    if isinstance(chain, Complex):
        if len(chain) > budget:
            raise BudgetExceededError("homology", len(chain), budget)
        chain = SimplicialChains(chain)
    sizes = chain.chain_ranks()
    if not sizes:
        return HomologyProfile({})
    lo, hi = min(sizes), max(sizes)
    factors = {p: smith_normal_form(chain.boundary(p)) for p in range(max(lo, 0), hi + 1)}
    ranks = {p: len(f) for p, f in factors.items()}
    betti, torsion = {}, {}
    for p in range(lo, hi + 1):
        betti[p] = sizes.get(p, 0) - ranks.get(p, 0) - ranks.get(p + 1, 0)
        torsion[p] = tuple(x for x in factors.get(p + 1, ()) if x > 1)
    return HomologyProfile(betti, torsion, hi)
