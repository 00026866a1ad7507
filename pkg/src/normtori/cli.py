"""Command line interface: ``normtori classify | resolve | cohom | family | catalog | verify``.

A group descriptor is a catalog label (``10T3``, ``F(7,3)``, ``C(5)*C(2)``), a
path to a JSON file, or an inline JSON object
``{"degree": n, "generators": [...], "stabilizer_point": k}`` whose
generators are 1-based image lists or cycle strings.
"""
from __future__ import annotations

import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Any, Optional

import click
import numpy as np

from . import catalog
from .cohom import DEFAULT_H1_CAP, h1, tate_h0, tate_hminus1
from .flabby import flabby_resolution, minimize_base
from .glattice import chevalley_module, dual
from .permgrp import (
    DEFAULT_ORDER_CAP,
    CapError,
    Perm,
    PermGroup,
    is_transitive,
    point_stabilizer,
    subgroup_classes,
)
from .rational import (
    ClassificationReport,
    ClassifyConfig,
    FamilyError,
    IsoCertificate,
    classify,
    psl_family_params,
    verify_certificate,
    verify_section,
)

__all__ = ["main", "parse_descriptor", "report_document", "dumps", "loads", "verify_document"]

EXIT_DECIDED, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2


def _version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0.0.0"


# ---------------------------------------------------------------------------
# descriptors and documents


def parse_descriptor(text: str) -> tuple[PermGroup, int, dict]:
    """Resolve a descriptor to ``(group, stabilizer point, normalized input)``."""
    text = text.strip()
    data: Optional[dict] = None
    if text.startswith("{"):
        data = json.loads(text)
    elif text.endswith(".json") or Path(text).is_file():
        data = json.loads(Path(text).read_text())
    if data is None:
        G = catalog.lookup(text)
        return G, 1, {"label": text, "degree": G.degree, "stabilizer_point": 1}
    if "label" in data and "generators" not in data:
        G = catalog.lookup(data["label"])
        point = int(data.get("stabilizer_point", 1))
        return G, point, {"label": data["label"], "degree": G.degree, "stabilizer_point": point}
    n = int(data["degree"])
    perms = []
    for g in data["generators"]:
        perms.append(Perm.from_cycles(g, n) if isinstance(g, str) else Perm.from_images(g))
    point = int(data.get("stabilizer_point", 1))
    if not 1 <= point <= n:
        raise ValueError(f"stabilizer point {point} outside 1..{n}")
    G = PermGroup(n, perms, DEFAULT_ORDER_CAP, name=data.get("name"))
    if not is_transitive(G):
        raise ValueError("the group is not transitive")
    norm = {"degree": n, "generators": [list(p.images) for p in perms], "stabilizer_point": point}
    if data.get("name"):
        norm["name"] = data["name"]
    return G, point, norm


def _plain(x: Any) -> Any:
    """JSON-ready copy (tuples to lists, numpy scalars to int)."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=None, separators=(",", ":"))


def loads(text: str) -> dict:
    return json.loads(text)


def _envelope(command: str, inp: dict, result: dict, seed: Optional[int], elapsed: float) -> dict:
    return _plain(
        {
            "version": _version(),
            "command": command,
            "input": inp,
            "seed": seed,
            "timing": round(elapsed, 3),
            "result": result,
        }
    )


def report_document(report: ClassificationReport, inp: dict, seed: int, elapsed: float) -> dict:
    doc = _envelope("classify", inp, report.to_dict(), seed, elapsed)
    # flat copies for quick access
    doc["retract"] = doc["result"]["retract"]
    doc["stably"] = doc["result"]["stably"]
    doc["trail"] = doc["result"]["trail"]
    doc["summary"] = report.summary()
    return doc


def verify_document(doc: dict) -> list[tuple[str, bool]]:
    """Re-check every certificate payload of a classify document."""
    out = []
    result = doc.get("result", doc)
    for key in ("retract", "stably"):
        v = result.get(key) or {}
        cert = v.get("certificate")
        if not cert:
            continue
        if v.get("rule") == "certificate":
            out.append((key, verify_certificate(IsoCertificate.from_dict(cert))))
        elif v.get("rule") == "invertibility" and v.get("value") == "yes":
            out.append((key, verify_section(cert)))
    return out


def _exit_for(reports: list[dict]) -> int:
    ok = all(d["retract"]["value"] != "unknown" and d["stably"]["value"] != "unknown" for d in reports)
    return EXIT_DECIDED if ok else EXIT_UNKNOWN


# ---------------------------------------------------------------------------
# commands


@click.group()
@click.version_option(_version(), prog_name="normtori")
def main() -> None:
    """Retract and stable rationality of norm one tori."""


def _classify_one(desc: str, cfg: ClassifyConfig) -> dict:
    G, point, inp = parse_descriptor(desc)
    H = point_stabilizer(G, point) if point != 1 else None
    t0 = time.perf_counter()
    rep = classify(G, H, cfg)
    return report_document(rep, inp, cfg.seed, time.perf_counter() - t0)


def _derived_seed(master: int, k: int) -> int:
    return int(np.random.SeedSequence([master, k]).generate_state(1)[0])


@main.command("classify")
@click.argument("descriptors", nargs=-1, required=True)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--trials", default=100000, show_default=True, type=int)
@click.option("--order-cap", default=DEFAULT_ORDER_CAP, show_default=True, type=int)
@click.option("--h1-cap", default=DEFAULT_H1_CAP, show_default=True, type=int)
@click.option("--skip-direct", is_flag=True, help="theorem rules and reductions only")
@click.option("--json/--text", "as_json", default=False, help="output format")
@click.option("--jobs", default=1, show_default=True, type=int, help="descriptors classified concurrently")
def cmd_classify(descriptors, seed, trials, order_cap, h1_cap, skip_direct, as_json, jobs):
    """Classify one or more groups."""
    try:
        cfgs = []
        for k in range(len(descriptors)):
            s = seed if len(descriptors) == 1 else _derived_seed(seed, k)
            cfgs.append(ClassifyConfig(seed=s, trials=trials, order_cap=order_cap, h1_cap=h1_cap, skip_direct=skip_direct))
        if jobs > 1 and len(descriptors) > 1:
            with ThreadPoolExecutor(jobs) as pool:
                docs = list(pool.map(_classify_one, descriptors, cfgs))
        else:
            docs = [_classify_one(d, c) for d, c in zip(descriptors, cfgs)]
    except (ValueError, KeyError, ArithmeticError, json.JSONDecodeError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_ERROR)
    if as_json:
        out = docs[0] if len(docs) == 1 else {"reports": docs}
        click.echo(dumps(out))
    else:
        for d, desc in zip(docs, descriptors):
            click.echo(
                f"{desc}\tretract={d['retract']['value']} ({d['retract']['rule'] or '-'})"
                f"\tstably={d['stably']['value']} ({d['stably']['rule'] or '-'})\t{d['summary']}"
            )
    sys.exit(_exit_for(docs))


@main.command("resolve")
@click.argument("descriptor")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--restarts", default=0, show_default=True, type=int)
@click.option("--order-cap", default=DEFAULT_ORDER_CAP, show_default=True, type=int)
@click.option("--json/--text", "as_json", default=False)
def cmd_resolve(descriptor, seed, restarts, order_cap, as_json):
    """Flabby resolution 0 -> J -> P -> F -> 0 of the Chevalley module."""
    try:
        G, point, inp = parse_descriptor(descriptor)
        G.order_cap = max(G.order_cap, order_cap)
        t0 = time.perf_counter()
        table = subgroup_classes(G, order_cap)
        J = chevalley_module(G)
        bases = minimize_base(dual(J), table, restarts=restarts, seed=seed)
        res = flabby_resolution(J, table, bases[0])
        names = table.names()
        result = {
            "J_rank": J.rank,
            "P_rank": res.P.rank,
            "F_rank": res.F.rank,
            "exact": res.is_exact(),
            "summands": [{"class": i, "name": names[i], "order": table.orders[i], "multiplicity": m} for i, m in res.summands],
            "candidate_base_ranks": [b.rank for b in bases],
        }
        doc = _envelope("resolve", inp, result, seed, time.perf_counter() - t0)
    except (ValueError, KeyError, ArithmeticError, CapError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_ERROR)
    if as_json:
        click.echo(dumps(doc))
    else:
        click.echo(f"rank J = {result['J_rank']}, rank P = {result['P_rank']}, rank F = {result['F_rank']}, exact = {result['exact']}")
        for s in result["summands"]:
            click.echo(f"  Z[G/{s['name']}] (class {s['class']}, order {s['order']}) x {s['multiplicity']}")


@main.command("cohom")
@click.argument("descriptor")
@click.option("--subgroup", "subgroups", multiple=True, type=int, help="class indices (default: all)")
@click.option("--lattice", type=click.Choice(["J", "F"]), default="J", show_default=True)
@click.option("--order-cap", default=DEFAULT_ORDER_CAP, show_default=True, type=int)
@click.option("--h1-cap", default=DEFAULT_H1_CAP, show_default=True, type=int)
@click.option("--json/--text", "as_json", default=False)
def cmd_cohom(descriptor, subgroups, lattice, order_cap, h1_cap, as_json):
    """Tate cohomology of J (or of its flabby class) over subgroup classes."""
    try:
        G, point, inp = parse_descriptor(descriptor)
        G.order_cap = max(G.order_cap, order_cap)
        t0 = time.perf_counter()
        table = subgroup_classes(G, order_cap)
        M = chevalley_module(G)
        if lattice == "F":
            M = flabby_resolution(M, table).F
        names = table.names()
        rows = []
        for i in subgroups or range(len(table)):
            H = table.representatives[i]
            rows.append(
                {
                    "class": i,
                    "name": names[i],
                    "order": table.orders[i],
                    "size": table.class_sizes[i],
                    "H0": str(tate_h0(M, H)),
                    "H-1": str(tate_hminus1(M, H)),
                    "H1": str(h1(M, H, h1_cap)),
                }
            )
        inp = dict(inp, lattice=lattice)
        doc = _envelope("cohom", inp, {"classes": len(table), "rows": rows}, None, time.perf_counter() - t0)
    except (ValueError, KeyError, IndexError, ArithmeticError, CapError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_ERROR)
    if as_json:
        click.echo(dumps(doc))
    else:
        click.echo(f"{len(table)} subgroup classes")
        for r in rows:
            click.echo(f"  {r['class']:>3} {r['name']:<12} |H|={r['order']:<5} H^0={r['H0']:<10} H^-1={r['H-1']:<10} H^1={r['H1']}")


@main.command("family")
@click.argument("d", type=int)
@click.argument("q", type=int)
@click.option("--json/--text", "as_json", default=False)
def cmd_family(d, q, as_json):
    """Arithmetic of PSL_d(F_q) on a prime number of projective points."""
    try:
        params = psl_family_params(d, q)
    except FamilyError as exc:
        if as_json:
            click.echo(dumps(_envelope("family", {"d": d, "q": q}, {"error": str(exc)}, None, 0.0)))
        else:
            click.echo(f"rejected: {exc}", err=True)
        sys.exit(EXIT_ERROR)
    doc = _envelope("family", {"d": d, "q": q}, params.to_dict(), None, 0.0)
    if as_json:
        click.echo(dumps(doc))
    else:
        p = params
        click.echo(f"p = {p.p}, |G| = {p.order_G}, |H| = {p.order_H}, q = {p.ell}^{p.e}")


@main.command("catalog")
@click.option("--self-test", is_flag=True, help="re-check every entry's recorded facts")
@click.option("--json/--text", "as_json", default=False)
def cmd_catalog(self_test, as_json):
    """List (and optionally validate) the curated groups."""
    entries = [{"label": l, "order": catalog.CURATED[l].order, "structure": catalog.CURATED[l].structure} for l in catalog.labels()]
    failures = catalog.self_test() if self_test else {}
    if as_json:
        click.echo(dumps(_envelope("catalog", {}, {"entries": entries, "failures": failures}, None, 0.0)))
    else:
        for e in entries:
            mark = "" if not self_test else ("  FAIL " + "; ".join(failures[e["label"]]) if e["label"] in failures else "  ok")
            click.echo(f"{e['label']:<6} order {e['order']:<6} {e['structure'] or ''}{mark}")
    sys.exit(EXIT_ERROR if failures else EXIT_DECIDED)


@main.command("verify")
@click.argument("path", type=click.Path(exists=True, dir_okay=False, allow_dash=True))
def cmd_verify(path):
    """Re-check the certificates of a saved classify document."""
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    doc = loads(text)
    docs = doc["reports"] if "reports" in doc else [doc]
    ok = True
    for d in docs:
        for key, good in verify_document(d):
            ok &= good
            click.echo(f"{d.get('input', {}).get('label', '?')} {key}: {'ok' if good else 'FAILED'}")
    sys.exit(EXIT_DECIDED if ok else EXIT_ERROR)


if __name__ == "__main__":
    main()
