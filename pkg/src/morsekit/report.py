"""Per-instance pipeline: build, match, verify, compare with theory.

Records are plain JSON-ready dicts so that the CLI output is byte-stable.
"""

from __future__ import annotations

import hashlib
import json
import os
import random
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import theory
from .complex import DEFAULT_FACE_BUDGET, Complex, independence_complex
from .errors import BudgetExceededError
from .graphs import Graph, build_cycle, build_gmd
from .homology import DEFAULT_SNF_BUDGET, HomologyProfile, reduced_homology
from .homotopy import HomotopyPrediction
from .morse import (
    MorseMatching,
    infer_wedge,
    morse_chain_complex,
    partial_matching_violation,
    replay_trace,
    sequential_element_matching,
    verify_acyclic,
)

SCHEMA = 1
PASS, FAIL, SKIP = "pass", "fail", "skip"
CACHE_ENV = "MORSEKIT_CACHE_DIR"


@dataclass(frozen=True)
class Instance:
    family: str
    m: int | None = None
    d: int | None = None
    r: int | None = None

    @classmethod
    def gmd(cls, m: int, d: int) -> "Instance":
        return cls("gmd", m=m, d=d)

    @classmethod
    def cycle(cls, r: int) -> "Instance":
        return cls("cycle", r=r)

    def graph(self) -> Graph:
        if self.family == "gmd":
            return build_gmd(self.m, self.d)
        if self.family == "cycle":
            return build_cycle(self.r)
        raise ValueError(f"unknown family {self.family!r}")

    def key(self) -> dict:
        if self.family == "gmd":
            return {"family": "gmd", "m": self.m, "d": self.d}
        return {"family": self.family, "r": self.r}

    def prediction(self) -> HomotopyPrediction:
        if self.family == "gmd":
            return theory.predicted_homotopy(theory.InstanceParams(self.m, self.d))
        return theory.kozlov_predicted(self.r)

    def predicted_cells(self) -> list[list[str]] | None:
        if self.family != "gmd":
            return None
        cells = theory.predicted_critical_cells(theory.InstanceParams(self.m, self.d))
        return sorted(theory.cell_labels(c) for c in cells)


def resolve_order(G: Graph, order: str) -> list | None:
    if order == "canonical":
        return None
    if order == "reverse":
        return list(reversed(G.vertices))
    if order.startswith("random:"):
        vs = list(G.vertices)
        random.Random(int(order.split(":", 1)[1])).shuffle(vs)
        return vs
    raise ValueError(f"unknown order {order!r} (canonical, reverse, random:SEED)")


def sort_cells(cells: list[list[str]]) -> list[list[str]]:
    return sorted(cells, key=lambda c: (len(c), c))


def _verdict(ok: bool) -> str:
    return PASS if ok else FAIL


def matching_dump(c: Complex, mm: MorseMatching) -> dict:
    g = c.graph
    return {
        "pairs": [
            {"down": c.labels(lo), "up": c.labels(hi), "phase": g.label(mm.phase[lo][0])}
            for lo, hi in sorted(mm.pairs.items())
        ]
    }


def run_instance(
    inst: Instance,
    order: str = "canonical",
    face_budget: int = DEFAULT_FACE_BUDGET,
    snf_budget: int = DEFAULT_SNF_BUDGET,
    via: str = "both",
    timings: bool = False,
    prediction_from: Instance | None = None,
    dump: bool = False,
) -> dict:
    """Run every enabled check on one instance and return its record.

    ``prediction_from`` substitutes another instance's predictions (used
    for fault-injection self tests of the harness).
    """
    clock: dict[str, float] = {}
    t0 = time.perf_counter()
    G = inst.graph()
    c = independence_complex(G, face_budget)
    clock["complex"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    mm = sequential_element_matching(c, resolve_order(G, order))
    clock["matching"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    violation = partial_matching_violation(mm, c)
    acyclic = violation is None and verify_acyclic(mm, c)
    clock["acyclic"] = time.perf_counter() - t0

    source = prediction_from or inst
    predicted = source.prediction()
    predicted_cells = source.predicted_cells()
    critical = sort_cells([c.labels(f) for f in mm.critical])
    inferred = infer_wedge(mm) if acyclic and 0 not in mm.critical else None

    checks: dict[str, str] = {
        "partial_matching": _verdict(violation is None and replay_trace(mm) == mm.pairs),
        "acyclic": _verdict(acyclic),
    }
    if predicted_cells is not None and order == "canonical":
        checks["critical_cells"] = _verdict(critical == sort_cells(predicted_cells))
    else:
        checks["critical_cells"] = SKIP
    checks["wedge"] = SKIP if inferred is None else _verdict(inferred == predicted)
    euler = c.reduced_euler()
    predicted_euler = sum((-1) ** p * n for p, n in predicted.spheres)
    checks["euler"] = _verdict(euler == predicted_euler)

    full = morse = None
    t0 = time.perf_counter()
    if len(c) <= snf_budget:
        if via in ("snf", "both"):
            full = reduced_homology(c, snf_budget)
        if via in ("morse", "both") and acyclic:
            morse = reduced_homology(morse_chain_complex(c, mm, check=False))
    clock["homology"] = time.perf_counter() - t0
    profile = full or morse
    checks["homology"] = SKIP if profile is None else _verdict(profile.is_wedge_of(predicted.betti()))
    if full is not None and morse is not None:
        checks["morse_agreement"] = _verdict(full == morse)
    else:
        checks["morse_agreement"] = SKIP

    record = {
        "schema": SCHEMA,
        "instance": inst.key(),
        "order": order,
        "face_count": len(c),
        "f_vector": c.f_vector(),
        "reduced_euler": euler,
        "critical": critical,
        "critical_dims": [len(x) - 1 for x in critical],
        "predicted_cells": predicted_cells,
        "predicted_homotopy": predicted.to_json(),
        "inferred_homotopy": None if inferred is None else inferred.to_json(),
        "homology": None if full is None else full.to_json(),
        "morse_homology": None if morse is None else morse.to_json(),
        "checks": checks,
        "verdict": PASS if FAIL not in checks.values() else FAIL,
    }
    if dump:
        record["matching"] = matching_dump(c, mm)
    if timings:
        record["timings"] = {k: round(v, 6) for k, v in clock.items()}
    return record


def record_checksum(record: dict) -> str:
    body = {k: v for k, v in record.items() if k != "timings"}
    return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()


@dataclass
class ReportCache:
    """On-disk store of records keyed by instance and run options."""

    root: Path
    hits: int = field(default=0, init=False)

    @classmethod
    def from_env(cls, override: str | None = None) -> "ReportCache | None":
        path = override or os.environ.get(CACHE_ENV)
        return cls(Path(path)) if path else None

    def _path(self, inst: Instance, **opts) -> Path:
        key = json.dumps({**inst.key(), **opts}, sort_keys=True)
        return self.root / (hashlib.sha256(key.encode()).hexdigest()[:24] + ".json")

    def get(self, inst: Instance, **opts) -> dict | None:
        path = self._path(inst, **opts)
        try:
            stored = json.loads(path.read_text())
        except (OSError, ValueError):
            return None
        record = stored.get("record")
        if not isinstance(record, dict) or stored.get("sha256") != record_checksum(record):
            return None
        self.hits += 1
        return record

    def put(self, inst: Instance, record: dict, **opts) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        path = self._path(inst, **opts)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps({"sha256": record_checksum(record), "record": record}, sort_keys=True))
        tmp.replace(path)


def cached_run(inst: Instance, cache: ReportCache | None, **kwargs) -> dict:
    """``run_instance`` through the cache (timed and fault runs bypass it)."""
    usable = cache is not None and not kwargs.get("timings") and kwargs.get("prediction_from") is None
    opts = {k: kwargs.get(k) for k in ("order", "face_budget", "snf_budget", "via", "dump")}
    if usable:
        hit = cache.get(inst, **opts)
        if hit is not None:
            return hit
    record = run_instance(inst, **kwargs)
    if usable:
        cache.put(inst, record, **opts)
    return record


def budget_error_record(inst: Instance, err: BudgetExceededError) -> dict:
    return {
        "schema": SCHEMA,
        "instance": inst.key(),
        "error": "budget_exceeded",
        "stage": err.what,
        "count": err.count,
        "budget": err.budget,
    }


def homology_report(inst: Instance, via: str, face_budget: int, snf_budget: int) -> dict:
    c = independence_complex(inst.graph(), face_budget)
    out: dict = {"schema": SCHEMA, "instance": inst.key(), "via": via}
    full = morse = None
    if via in ("snf", "both"):
        full = reduced_homology(c, snf_budget)
        out["snf"] = full.to_json()
    if via in ("morse", "both"):
        if len(c) > snf_budget:
            raise BudgetExceededError("homology", len(c), snf_budget)
        mm = sequential_element_matching(c)
        morse = reduced_homology(morse_chain_complex(c, mm))
        out["morse"] = morse.to_json()
    if via == "both":
        out["agreement"] = full == morse
    return out


def profile_of(record: dict) -> HomologyProfile | None:
    data = record.get("homology") or record.get("morse_homology")
    return None if data is None else HomologyProfile.from_json(data)
