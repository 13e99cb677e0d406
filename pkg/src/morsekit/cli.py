"""``morsekit`` command line: gen, morse, homology, verify."""

from __future__ import annotations

import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import click

from .complex import DEFAULT_FACE_BUDGET, independence_complex
from .errors import BudgetExceededError
from .homology import DEFAULT_SNF_BUDGET
from .homotopy import HomotopyPrediction
from .report import (
    SCHEMA,
    Instance,
    ReportCache,
    budget_error_record,
    cached_run,
    homology_report,
)

CHECK_COLUMNS = ["partial_matching", "acyclic", "critical_cells", "wedge", "euler", "homology", "morse_agreement"]


def _dump(obj) -> None:
    click.echo(json.dumps(obj, sort_keys=True))


def _instance(m: int | None, d: int | None, r: int | None) -> Instance:
    if r is not None:
        if m is not None or d is not None:
            raise click.UsageError("give either --r or --m/--d, not both")
        return Instance.cycle(r)
    if m is None or d is None:
        raise click.UsageError("need --m and --d (or --r for a cycle)")
    return Instance.gmd(m, d)


def _fail_budget(inst: Instance, err: BudgetExceededError):
    _dump(budget_error_record(inst, err))
    sys.exit(2)


def _check_instance(inst: Instance):
    try:
        inst.graph()
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None


budget_options = [
    click.option("--face-budget", default=DEFAULT_FACE_BUDGET, show_default=True, help="Max faces to enumerate."),
    click.option("--snf-budget", default=DEFAULT_SNF_BUDGET, show_default=True, help="Max faces for SNF homology."),
]


def with_budgets(f):
    for opt in reversed(budget_options):
        f = opt(f)
    return f


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Discrete Morse matchings on independence complexes of circulant bipartite graphs."""


@main.command()
@click.option("--m", type=int)
@click.option("--d", type=int)
@click.option("--r", type=int, help="Cycle length (instead of --m/--d).")
@click.option("--format", "fmt", type=click.Choice(["json", "dot", "faces", "facets"]), default="json")
@click.option("--face-budget", default=DEFAULT_FACE_BUDGET, show_default=True)
def gen(m, d, r, fmt, face_budget):
    """Export a graph (JSON/DOT) or its independence complex (JSON lines)."""
    inst = _instance(m, d, r)
    _check_instance(inst)
    G = inst.graph()
    if fmt == "json":
        _dump(G.to_json())
    elif fmt == "dot":
        click.echo(G.to_dot(), nl=False)
    else:
        try:
            c = independence_complex(G, face_budget)
        except BudgetExceededError as err:
            _fail_budget(inst, err)
        click.echo(c.to_jsonl(facets_only=fmt == "facets"), nl=False)


@main.command()
@click.option("--m", type=int)
@click.option("--d", type=int)
@click.option("--r", type=int, help="Cycle length (instead of --m/--d).")
@click.option("--order", default="canonical", show_default=True, help="canonical, reverse or random:SEED")
@click.option("--dump-matching", is_flag=True, help="Include all matched pairs with their phase.")
@click.option("--timings", is_flag=True, help="Add wall-clock timings (breaks byte-stability).")
@click.option("--cache-dir", type=click.Path(file_okay=False), help="Overrides $MORSEKIT_CACHE_DIR.")
@with_budgets
def morse(m, d, r, order, dump_matching, timings, cache_dir, face_budget, snf_budget):
    """Run the matching on one instance and print its report."""
    inst = _instance(m, d, r)
    _check_instance(inst)
    try:
        record = cached_run(
            inst,
            ReportCache.from_env(cache_dir),
            order=order,
            face_budget=face_budget,
            snf_budget=snf_budget,
            via="both",
            timings=timings,
            dump=dump_matching,
        )
    except BudgetExceededError as err:
        _fail_budget(inst, err)
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from None
    _dump(record)
    sys.exit(0 if record["verdict"] == "pass" else 1)


@main.command()
@click.option("--m", type=int)
@click.option("--d", type=int)
@click.option("--r", type=int, help="Cycle length (instead of --m/--d).")
@click.option("--via", type=click.Choice(["snf", "morse", "both"]), default="both", show_default=True)
@with_budgets
def homology(m, d, r, via, face_budget, snf_budget):
    """Reduced integral homology of Ind(G)."""
    inst = _instance(m, d, r)
    _check_instance(inst)
    try:
        out = homology_report(inst, via, face_budget, snf_budget)
    except BudgetExceededError as err:
        _fail_budget(inst, err)
    _dump(out)
    sys.exit(0 if out.get("agreement", True) else 1)


def _sweep(family: str, m_max: int | None, r_max: int | None, d_policy: str) -> list[Instance]:
    if family == "cycle":
        return [Instance.cycle(r) for r in range(3, (r_max or 14) + 1)]
    out = []
    for m in range(1, (m_max or 8) + 1):
        for d in range(1, m + 1):
            if d_policy == "all" or (d_policy == "proper") == (d < m):
                out.append(Instance.gmd(m, d))
    return out


def _run_one(args):
    inst, kwargs, cache_dir = args
    try:
        return cached_run(inst, ReportCache.from_env(cache_dir), **kwargs)
    except BudgetExceededError as err:
        return budget_error_record(inst, err)


def _row(rec: dict) -> dict:
    inst = rec["instance"]
    row = {"family": inst["family"], "m": inst.get("m", ""), "d": inst.get("d", ""), "r": inst.get("r", "")}
    if "error" in rec:
        row.update({"faces": rec["count"], "verdict": "budget"})
        return row
    inferred = rec["inferred_homotopy"]
    hom = rec["homology"] or rec["morse_homology"]
    row.update(
        {
            "faces": rec["face_count"],
            "critical": len(rec["critical"]),
            "predicted": rec["predicted_homotopy"]["text"],
            "inferred": inferred["text"] if inferred else "indeterminate",
            "computed": str(HomotopyPrediction(tuple((int(p), b) for p, b in hom["betti"].items() if b)))
            if hom
            else "",
        }
    )
    row.update(rec["checks"])
    row["verdict"] = rec["verdict"]
    return row


@main.command()
@click.option("--family", type=click.Choice(["gmd", "cycle"]), default="gmd", show_default=True)
@click.option("--m-max", type=int, default=8, show_default=True)
@click.option("--r-max", type=int, default=14, show_default=True)
@click.option(
    "--d-policy",
    type=click.Choice(["all", "proper", "full"]),
    default="all",
    show_default=True,
    help="all d <= m, only d < m, or only d = m.",
)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True, help="Worker processes.")
@click.option("--inject-fault", type=click.Choice(["swap-prediction"]), help="Harness self-test.")
@click.option("--cache-dir", type=click.Path(file_okay=False), help="Overrides $MORSEKIT_CACHE_DIR.")
@with_budgets
def verify(family, m_max, r_max, d_policy, fmt, jobs, inject_fault, cache_dir, face_budget, snf_budget):
    """Sweep instances, compare engine output with the closed forms; exit 0 iff all pass."""
    instances = _sweep(family, m_max, r_max, d_policy)
    tasks = []
    for k, inst in enumerate(instances):
        kwargs = {"order": "canonical", "face_budget": face_budget, "snf_budget": snf_budget, "via": "both"}
        if inject_fault == "swap-prediction" and len(instances) > 1:
            kwargs["prediction_from"] = instances[(k + 1) % len(instances)]
        tasks.append((inst, kwargs, cache_dir))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_one, tasks))
    else:
        records = [_run_one(t) for t in tasks]

    if fmt == "json":
        _dump({"schema": SCHEMA, "records": records})
    else:
        rows = [_row(r) for r in records]
        fields = ["family", "m", "d", "r", "faces", "critical", "predicted", "inferred", "computed"]
        fields += CHECK_COLUMNS + ["verdict"]
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n", restval="")
        writer.writeheader()
        writer.writerows(rows)
        click.echo(buf.getvalue(), nl=False)

    failing = [r for r in records if r.get("verdict") == "fail"]
    if failing:
        first = failing[0]["instance"]
        click.echo(f"FAIL: first failing instance {json.dumps(first, sort_keys=True)}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
