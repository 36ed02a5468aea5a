"""Command-line front end.

Every command prints one JSON report on stdout:
``{"command": [...], "seed": ..., "wall_time": ..., "payload": {...}}``.
Exit codes: 0 success/accept, 1 reject or violation found, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import gallai, hardness
from .graphs import (
    BudgetExceeded,
    ColoredGraph,
    EditTranscript,
    apply_edits,
    count_rainbow_triangles,
    default_budget,
    dumps,
    enumerate_copies,
    graph_from_json,
    is_copy,
    recolor_random_pairs,
    triangles_avoiding_color,
    verify_pair_disjoint,
)
from .repair import RepairConfig, repair, test_rainbow_free


class UsageError(Exception):
    pass


def _read_json(path) -> dict:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: line {exc.lineno} column {exc.colno} (offset {exc.pos}): {exc.msg}")


def _read_graph(path):
    try:
        return graph_from_json(_read_json(path))
    except (KeyError, ValueError, TypeError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"{path}: {exc}")


def _colored(path) -> ColoredGraph:
    g = _read_graph(path)
    if not isinstance(g, ColoredGraph):
        raise UsageError(f"{path}: expected a colored graph")
    return g


def _write(path, text: str) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text)


# -- generate -----------------------------------------------------------------

def _write_bundle(inst: hardness.HardnessInstance, out: Path, family: hardness.EquationFamily,
                  inside) -> dict:
    out.mkdir(parents=True, exist_ok=True)
    _write(out / "host.json", dumps(inst.host.to_json()))
    _write(out / "blowup.json", dumps(inst.blown.to_json()))
    fam = {
        "pattern": inst.pattern.to_json(),
        "mode": "colored" if isinstance(inst.host, ColoredGraph) else "induced",
        "role_map": list(range(inst.f)),
        "host_copies": [list(t) for t in inst.host_copies],
        "blowup_copies": [list(t) for t in inst.blown_copies],
    }
    _write(out / "family.json", dumps(fam))
    claims = dict(inst.claims)
    claims["equations"] = family.to_json()
    claims["inside"] = inside
    claims["blocks"] = [list(b) for b in inst.blocks]
    _write(out / "claims.json", dumps(claims))
    return claims


def cmd_generate(args) -> tuple[dict, int]:
    kind = args.kind
    if not args.out:
        raise UsageError("--out is required")
    out = Path(args.out)
    if kind == "gallai":
        if args.n is None or args.n < 1:
            raise UsageError("gallai needs --n >= 1")
        tree = gallai.random_gallai_tree(args.n, args.seed, max_children=args.max_children)
        g = gallai.compose(tree)
        _write(out, dumps(g.to_json()))
        if args.tree_out:
            _write(args.tree_out, dumps(tree.to_json()))
        return {"kind": kind, "n": g.n, "rainbow": count_rainbow_triangles(g)}, 0
    if kind == "corrupt":
        if not args.input:
            raise UsageError("corrupt needs --input")
        g = _colored(args.input)
        count = int(args.noise * g.n * (g.n - 1) // 2) if args.pairs is None else args.pairs
        h, t = recolor_random_pairs(g, count, args.seed)
        _write(out, dumps(h.to_json()))
        if args.transcript_out:
            _write(args.transcript_out, t.to_jsonl())
        return {"kind": kind, "n": g.n, "recolored": t.cost, "rainbow": count_rainbow_triangles(h)}, 0
    if args.m is None or args.m < 1:
        raise UsageError(f"{kind} needs --m >= 1")
    if kind == "triangle-hardness":
        if not args.pattern:
            raise UsageError("triangle-hardness needs --pattern FILE")
        pattern = _colored(args.pattern)
        fam = hardness.EquationFamily.weighted(pattern.n)
        s = hardness.avoiding_set(args.m, fam, args.method)
        inst = hardness.triangle_hardness(pattern, args.avoided, args.m, args.factor, s=s)
        inside = args.avoided
    elif kind == "f4-hardness":
        fam = hardness.EquationFamily.four_term()
        inst = hardness.f4_hardness(args.m, args.factor, s=hardness.avoiding_set(args.m, fam, args.method))
        inside = 3
    elif kind == "d3-hardness":
        fam = hardness.EquationFamily.three_ap()
        inst = hardness.d3_hardness(args.m, args.factor, s=hardness.avoiding_set(args.m, fam, args.method))
        inside = "tournament"
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown kind {kind}")
    claims = _write_bundle(inst, out, fam, inside)
    return {"kind": kind, "out": str(out), "claims": claims}, 0


# -- count / decompose / test / repair -----------------------------------------

def cmd_count(args) -> tuple[dict, int]:
    g = _read_graph(args.graph)
    payload = {"n": g.n}
    if args.pattern:
        pattern = _read_graph(args.pattern)
        fam = enumerate_copies(g, pattern, budget=args.budget, workers=args.workers)
        payload.update(copies=len(fam), injections=fam.injections)
    elif args.avoiding is not None:
        payload["count"] = triangles_avoiding_color(g, args.avoiding)
    else:
        if not isinstance(g, ColoredGraph):
            raise UsageError("rainbow counting needs a colored graph")
        payload["count"] = count_rainbow_triangles(g)
    return payload, 0


def cmd_decompose(args) -> tuple[dict, int]:
    g = _colored(args.graph)
    try:
        tree = gallai.decompose(g)
    except gallai.RainbowTriangleError as exc:
        return {"ok": False, "witness": list(exc.witness)}, 1
    payload = {"ok": True, "height": tree.height()}
    if args.format == "dot":
        payload["dot"] = tree.to_dot()
    else:
        payload["tree"] = tree.to_json()
    if args.out:
        _write(args.out, tree.to_dot() if args.format == "dot" else dumps(tree.to_json()))
    return payload, 0


def cmd_test(args) -> tuple[dict, int]:
    g = _colored(args.graph)
    res = test_rainbow_free(
        g, args.epsilon, exponent=args.exponent, confidence=args.confidence,
        seed=args.seed, queries=args.queries, budget=args.budget,
    )
    return res.report(), 0 if res.accept else 1


def _repair_config(args) -> RepairConfig:
    return RepairConfig(
        epsilon=args.epsilon, seed_size=args.seed_size, batch_size=args.batch_size,
        batches=args.batches, density=args.density, retries=args.retries, seed=args.seed,
    )


def cmd_repair(args) -> tuple[dict, int]:
    g = _colored(args.graph)
    res = repair(g, cfg=_repair_config(args))
    fixed = apply_edits(g, res.transcript)
    payload = res.report()
    payload["post_count"] = count_rainbow_triangles(fixed)
    payload["pre_count"] = count_rainbow_triangles(g)
    payload["budget"] = args.epsilon * g.n * g.n
    payload["certified"] = bool(
        res.complete
        and res.recertify(g)
        and payload["post_count"] == 0
        and res.cost <= payload["budget"]
    )
    if res.diagnosis:
        payload["diagnosis"] = res.diagnosis
    if args.transcript_out:
        _write(args.transcript_out, res.transcript.to_jsonl())
    if args.out:
        _write(args.out, dumps(fixed.to_json()))
    return payload, 0 if payload["certified"] else 1


def cmd_apply(args) -> tuple[dict, int]:
    g = _colored(args.graph)
    t = EditTranscript.from_jsonl(Path(args.transcript).read_text())
    h = apply_edits(g, t)
    if args.out:
        _write(args.out, dumps(h.to_json()))
    return {"cost": t.cost, "rainbow": count_rainbow_triangles(h)}, 0


# -- verify -------------------------------------------------------------------

def verify_bundle(path, budget: int | None = None, workers: int = 1) -> tuple[dict, bool]:
    """Re-derive every claim of a hardness bundle from its raw files."""
    d = Path(path)
    host = _read_graph(d / "host.json")
    blown = _read_graph(d / "blowup.json")
    fam = _read_json(d / "family.json")
    claims = _read_json(d / "claims.json")
    pattern = graph_from_json(fam["pattern"])
    host_copies = [tuple(t) for t in fam["host_copies"]]
    blown_copies = [tuple(t) for t in fam["blowup_copies"]]
    checks = {}
    failures = {}

    def check(name, ok, witness=None):
        checks[name] = bool(ok)
        if not ok:
            failures[name] = witness

    equations = hardness.EquationFamily.from_json(claims["equations"])
    ok, w = hardness.verify_avoiding_set(claims["S"], equations)
    check("S_avoids_equations", ok, w)
    m, s = claims["m"], claims["S"]
    bad = next((t for t in host_copies if not is_copy(host, pattern, t)), None)
    check("host_copies_valid", bad is None, bad)
    bad = next((t for t in blown_copies if not is_copy(blown, pattern, t)), None)
    check("blowup_copies_valid", bad is None, bad)
    ok, viol = verify_pair_disjoint(host_copies)
    check("host_pair_disjoint", ok, viol[:5])
    ok, viol = verify_pair_disjoint(blown_copies)
    check("blowup_pair_disjoint", ok, viol[:5])
    check("planted_count", len(host_copies) == m * len(s) == claims["host_copies_exact"],
          {"planted": len(host_copies), "m*|S|": m * len(s)})
    inside = None if claims["inside"] == "tournament" else claims["inside"]
    expect = hardness.blowup(host, claims["factor"], inside)
    check("blowup_matches_host", expect == blown)
    try:
        total = enumerate_copies(host, pattern, budget=budget, workers=workers)
        exact = len(total)
    except BudgetExceeded as exc:
        exact = None
        failures["host_total_count"] = str(exc)
    if exact is not None:
        check("host_total_count", exact == m * len(s), {"found": exact, "claimed": m * len(s)})
    if claims["kind"] == "triangle":
        tri = triangles_avoiding_color(host, claims["avoided"])
        check("triangles_avoiding_bound", tri <= claims["f"] ** 4 * m * m,
              {"count": tri, "bound": claims["f"] ** 4 * m * m})
    payload = {"kind": claims["kind"], "checks": checks, "host_total": exact}
    if failures:
        payload["witness"] = failures
    return payload, not failures


def cmd_verify(args) -> tuple[dict, int]:
    payload, ok = verify_bundle(args.bundle, args.budget, args.workers)
    return payload, 0 if ok else 1


# -- plumbing -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--budget", type=int, default=None,
                        help="enumeration / sample cap (default: $GALLAI_LAB_BUDGET or 1e9)")

    parser = argparse.ArgumentParser(prog="gallai-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common])
    p.add_argument("kind", choices=["gallai", "corrupt", "triangle-hardness", "f4-hardness", "d3-hardness"])
    p.add_argument("--out", "-o")
    p.add_argument("--n", type=int)
    p.add_argument("--max-children", type=int, default=4)
    p.add_argument("--tree-out")
    p.add_argument("--input")
    p.add_argument("--noise", type=float, default=0.01, help="fraction of all pairs to recolor")
    p.add_argument("--pairs", type=int, help="exact number of pairs to recolor (overrides --noise)")
    p.add_argument("--transcript-out")
    p.add_argument("--m", type=int)
    p.add_argument("--factor", type=int, default=1)
    p.add_argument("--pattern")
    p.add_argument("--avoided", type=int, default=3)
    p.add_argument("--method", choices=["exhaustive-greedy", "greedy", "behrend"], default="exhaustive-greedy")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("count", parents=[common])
    p.add_argument("graph")
    what = p.add_mutually_exclusive_group()
    what.add_argument("--rainbow", action="store_true")
    what.add_argument("--avoiding", type=int, metavar="COLOR")
    what.add_argument("--pattern")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("repair", parents=[common])
    p.add_argument("graph")
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--seed-size", type=int, default=12)
    p.add_argument("--batch-size", type=int, default=40)
    p.add_argument("--batches", type=int, default=8)
    p.add_argument("--density", type=float, default=0.02)
    p.add_argument("--retries", type=int, default=64)
    p.add_argument("--transcript-out")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_repair)

    p = sub.add_parser("apply", parents=[common])
    p.add_argument("graph")
    p.add_argument("transcript")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("test", parents=[common])
    p.add_argument("graph")
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--exponent", type=float, default=36)
    p.add_argument("--confidence", type=float, default=0.99)
    p.add_argument("--queries", type=int)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("decompose", parents=[common])
    p.add_argument("graph")
    p.add_argument("--format", choices=["json", "dot"], default="json")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", parents=[common])
    p.add_argument("bundle")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.budget is None:
        args.budget = default_budget() if args.command != "test" else 10**6
    start = time.perf_counter()
    try:
        payload, code = args.func(args)
    except UsageError as exc:
        print(f"gallai-lab: {exc}", file=sys.stderr)
        return 2
    except (hardness.ConstructionError, BudgetExceeded, ValueError, FileNotFoundError) as exc:
        print(f"gallai-lab: {exc}", file=sys.stderr)
        return 2
    report = {
        "command": ["gallai-lab", *argv],
        "seed": args.seed,
        "wall_time": round(time.perf_counter() - start, 6),
        "payload": payload,
    }
    sys.stdout.write(json.dumps(report, sort_keys=True) + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
