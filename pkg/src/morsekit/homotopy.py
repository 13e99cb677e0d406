from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class HomotopyPrediction:
    """A wedge of spheres, as ``((dimension, multiplicity), ...)``.

    The empty wedge is a point.
    """

    spheres: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        merged: dict[int, int] = {}
        for p, c in self.spheres:
            if p < 0 or c < 1:
                raise ValueError(f"invalid sphere term S^{p} x {c}")
            merged[p] = merged.get(p, 0) + c
        object.__setattr__(self, "spheres", tuple(sorted(merged.items())))

    @classmethod
    def wedge(cls, dimension: int, count: int) -> "HomotopyPrediction":
        return cls(((dimension, count),))

    def betti(self) -> dict[int, int]:
        """Reduced Betti numbers of the wedge."""
        return dict(self.spheres)

    def __str__(self) -> str:
        if not self.spheres:
            return "pt"
        return " v ".join(f"S^{p}" for p, c in self.spheres for _ in range(c))

    def to_json(self) -> dict:
        return {
            "text": str(self),
            "spheres": [{"dim": p, "count": c} for p, c in self.spheres],
        }

    @classmethod
    def from_json(cls, data: dict) -> "HomotopyPrediction":
        return cls(tuple((s["dim"], s["count"]) for s in data["spheres"]))
