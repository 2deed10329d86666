"""Command line front end.

Results go to stdout as JSON, diagnostics to stderr as JSON.  Exit codes:
0 answer produced, 10 unsatisfiable, 20 timeout or refinement cap,
3 oracle disagreement (``oracle-check``), 1 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence

from .cube import as_config, config_to_str
from .network import (BnetError, BooleanNetwork, assignment_from_json,
                      assignment_to_json, parse_bnet, parse_influence_graph)
from .oracle import OracleScaleError

EXIT_OK, EXIT_ERROR, EXIT_MISMATCH, EXIT_UNSAT, EXIT_TIMEOUT = 0, 1, 3, 10, 20
WORKERS_ENV = "TRAPCEGAR_WORKERS"


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _load_marker(text: str, names):
    if text.lstrip().startswith("{"):
        return assignment_from_json(text, names)
    return assignment_from_json(_read(text), names)


def _names_to_indices(text: Optional[str], f: BooleanNetwork) -> List[int]:
    if not text:
        return []
    out = []
    for name in text.split(","):
        name = name.strip()
        if name not in f.index:
            raise UsageError(f"unknown component {name!r}")
        out.append(f.index[name])
    return out


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2))


def _status_code(status: str) -> int:
    return {"sat": EXIT_OK, "unsat": EXIT_UNSAT}.get(status, EXIT_TIMEOUT)


# -- subcommands -------------------------------------------------------------


def cmd_ts(args) -> int:
    from .trapspace import is_minimal, saturation_trace
    f = parse_bnet(_read(args.bnet))
    x = as_config(args.config, f.n)
    trace = saturation_trace(f, x)
    h = trace[-1]
    out = {"config": config_to_str(x, f.n), "trap_space": str(h), "trace": [str(t) for t in trace]}
    if args.minimal:
        from .sat import SatEngine
        out["minimal"] = is_minimal(f, h, None if f.n <= 12 else SatEngine())
    _emit(out)
    return EXIT_OK


def cmd_mts(args) -> int:
    from .trapspace import enumerate_mts
    f = parse_bnet(_read(args.bnet))
    _emit(sorted(str(m) for m in enumerate_mts(f, limit=args.limit)))
    return EXIT_OK


def _cegar_options(args) -> dict:
    return {"variant": args.variant, "timeout": args.timeout, "witness": args.witness,
            "depth": args.depth, "max_refinements": args.max_refinements}


def cmd_reprogram(args) -> int:
    from .cegar import ReprogrammingCegar
    f = parse_bnet(_read(args.bnet))
    marker = _load_marker(args.marker, f)
    solver = ReprogrammingCegar(f, marker, args.k, uncontrollable=_names_to_indices(args.uncontrollable, f),
                                forbid_marker_nodes=not args.allow_marker_nodes, **_cegar_options(args))
    result = solver.run(first=not args.enumerate)
    out = result.to_json(f.names)
    out["mode"] = "enumerate" if args.enumerate else "first"
    _emit(out)
    return _status_code(result.status)


def cmd_synthesize(args) -> int:
    from .cegar import solve_synthesis
    g = parse_influence_graph(_read(args.graph))
    marker = _load_marker(args.marker, g)
    result = solve_synthesis(g, marker, args.mode, args.clauses, **_cegar_options(args))
    _emit(result.to_json(g.node_names()))
    return _status_code(result.status)


def cmd_export_qdimacs(args) -> int:
    from .qdimacs import export_qdimacs
    f = parse_bnet(_read(args.bnet))
    marker = _load_marker(args.marker, f)
    text = export_qdimacs(f, marker, args.k, _names_to_indices(args.uncontrollable, f),
                          forbid_marker_nodes=not args.allow_marker_nodes)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    from .cegar import enumerate_reprogramming
    from .oracle import brute_mts, brute_reprogramming, brute_ts
    from .trapspace import enumerate_mts, ts_of
    f = parse_bnet(_read(args.bnet))
    checks = {}
    checks["ts_of"] = all(ts_of(f, x) == brute_ts(f, x) for x in range(1 << f.n))
    checks["mts"] = set(enumerate_mts(f)) == brute_mts(f)
    if args.marker is not None:
        marker = _load_marker(args.marker, f)
        forbid = not args.allow_marker_nodes
        expected = brute_reprogramming(f, marker, args.k, forbid_marker_nodes=forbid)
        key = sorted(sorted(p.items()) for p in expected)
        for v in (0, 1, 2):
            got = enumerate_reprogramming(f, marker, args.k, variant=v, forbid_marker_nodes=forbid).solutions
            checks[f"reprogramming_v{v}"] = sorted(sorted(p.items()) for p in got) == key
    _emit({"checks": checks, "agree": all(checks.values())})
    return EXIT_OK if all(checks.values()) else EXIT_MISMATCH


# -- bench ---------------------------------------------------------------------

BENCH_FIELDS = ["index", "name", "n", "k", "variant", "status", "first_ms", "enum_ms",
                "n_solutions", "n_counter_examples", "complete", "error"]


def _resolve(base: Path, value):
    return value if Path(value).is_absolute() else str(base / value)


def _bench_one(task) -> dict:
    index, entry, base = task
    from .cegar import enumerate_reprogramming, solve_reprogramming
    row = {"index": index, "name": entry.get("name", f"instance-{index}"), "error": ""}
    try:
        f = parse_bnet(Path(_resolve(base, entry["network"])).read_text())
        m = entry.get("marker", {})
        marker = assignment_from_json(m if isinstance(m, dict) else Path(_resolve(base, m)).read_text(), f)
        opts = {"variant": int(entry.get("variant", 2)), "timeout": entry.get("timeout"),
                "forbid_marker_nodes": not entry.get("allow_marker_nodes", False),
                "uncontrollable": [f.index[u] for u in entry.get("uncontrollable", [])]}
        k = int(entry["k"])
        row.update(n=f.n, k=k, variant=opts["variant"])
        first = solve_reprogramming(f, marker, k, **opts)
        row["first_ms"] = round(first.stats.total_ms, 3)
        enum = enumerate_reprogramming(f, marker, k, **opts)
        row.update(enum_ms=round(enum.stats.total_ms, 3), n_solutions=len(enum.solutions),
                   n_counter_examples=enum.stats.counter_examples, complete=enum.complete,
                   status="done" if enum.complete else enum.status,
                   solutions=[assignment_to_json(p, f.names) for p in enum.solutions])
    except Exception as exc:  # isolate per-instance failures
        row.update(status="error", error=f"{type(exc).__name__}: {exc}")
    return row


def run_bench(manifest: Path, workers: Optional[int] = None) -> List[dict]:
    data = json.loads(manifest.read_text())
    entries = data["instances"] if isinstance(data, dict) else data
    tasks = [(i, e, manifest.parent) for i, e in enumerate(entries)]
    if not tasks:
        return []
    workers = workers or int(os.environ.get(WORKERS_ENV, 0)) or os.cpu_count() or 1
    if workers == 1:
        return [_bench_one(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
        return list(pool.map(_bench_one, tasks))


def bench_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, BENCH_FIELDS, extrasaction="ignore")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def cmd_bench(args) -> int:
    rows = run_bench(Path(args.manifest), args.workers)
    if args.out:
        Path(args.out + ".json").write_text(json.dumps(rows, indent=2))
        Path(args.out + ".csv").write_text(bench_csv(rows))
    _emit(rows)
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def _add_cegar_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--marker", required=True, help="JSON object name -> 0/1, or a file holding one")
    p.add_argument("--variant", type=int, choices=(0, 1, 2), default=2,
                   help="refinement: 0 block candidate, 1 not in a minimal trap space, 2 full (default)")
    p.add_argument("--timeout", type=float, default=None, help="wall-clock seconds (default: none)")
    p.add_argument("--witness", choices=("closure", "circuit"), default="closure",
                   help="encoding of the trap-space witnesses (default: closure)")
    p.add_argument("--depth", choices=("auto", "full", "adaptive"), default="auto",
                   help="unrolling of refinement circuits (default: auto)")
    p.add_argument("--max-refinements", type=int, default=10_000)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trapcegar", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ts", help="smallest trap space containing a configuration")
    p.add_argument("bnet")
    p.add_argument("config", help="bit string, first component first")
    p.add_argument("--minimal", action="store_true", help="also report whether it is minimal")
    p.set_defaults(func=cmd_ts)

    p = sub.add_parser("mts", help="minimal trap spaces")
    p.add_argument("bnet")
    p.add_argument("--limit", type=int, default=None)
    p.set_defaults(func=cmd_mts)

    p = sub.add_parser("reprogram", help="perturbations making all minimal trap spaces match a marker")
    p.add_argument("bnet")
    p.add_argument("--k", type=int, required=True, help="maximum perturbation size")
    _add_cegar_args(p)
    p.add_argument("--uncontrollable", help="comma separated components that cannot be perturbed")
    p.add_argument("--allow-marker-nodes", action="store_true",
                   help="allow perturbing marked components (denied by default)")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--first", action="store_true", help="stop at the first solution (default)")
    mode.add_argument("--enumerate", action="store_true", help="all subset-minimal solutions")
    p.set_defaults(func=cmd_reprogram)

    p = sub.add_parser("synthesize", help="network over an influence graph whose minimal trap spaces match")
    p.add_argument("graph", help="lines 'source -> target +|-'")
    _add_cegar_args(p)
    p.add_argument("--mode", choices=("exact", "subset"), default="exact")
    p.add_argument("--clauses", type=int, default=32, help="DNF clause budget per component (default 32)")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("export-qdimacs", help="write the reprogramming problem as a QBF")
    p.add_argument("bnet")
    p.add_argument("--marker", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--uncontrollable")
    p.add_argument("--allow-marker-nodes", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export_qdimacs)

    p = sub.add_parser("oracle-check", help="compare solvers against brute force (small networks)")
    p.add_argument("bnet")
    p.add_argument("--marker")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--allow-marker-nodes", action="store_true")
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("bench", help="run a JSON manifest of reprogramming instances")
    p.add_argument("manifest")
    p.add_argument("--workers", type=int, default=None, help=f"worker processes (default ${WORKERS_ENV} or CPU count)")
    p.add_argument("--out", help="write <out>.json and <out>.csv")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return args.func(args)
    except BnetError as exc:
        err = {"error": str(exc), "line": exc.line, "column": exc.column}
    except (UsageError, ValueError, KeyError, OracleScaleError) as exc:
        err = {"error": str(exc)}
    print(json.dumps(err), file=sys.stderr)
    return EXIT_ERROR


run = main

if __name__ == "__main__":
    sys.exit(main())
