"""Command line: ``c2inv c2``, ``c2inv verify`` and ``c2inv catalog``.

Every flag of ``verify`` can also come from a ``C2INV_*`` environment variable
(``C2INV_SEED``, ``C2INV_BUDGET_EVALS``, ``C2INV_BUDGET_STATES``,
``C2INV_FORMAT``, ``C2INV_WORKERS``, ``C2INV_OUTPUT``); flags win.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from contextlib import contextmanager
from pathlib import Path

from . import catalog as cat
from .config import RunConfig
from .counting import BudgetExceeded, PreconditionError
from .gf import FieldError, PrimePower
from .graph import GraphError
from .theorem import METHODS, compute_c2
from .verify import SUITES, header, run_suite


@contextmanager
def _output(path):
    if path:
        with open(path, "w") as fh:
            yield fh
    else:
        yield sys.stdout


def _add_run_flags(sp: argparse.ArgumentParser):
    sp.add_argument("--seed", type=int)
    sp.add_argument("--budget-evals", type=int, dest="budget_evaluations")
    sp.add_argument("--budget-states", type=int)
    sp.add_argument("--format", choices=("json", "table"))
    sp.add_argument("--workers", type=int, dest="worker_count")
    sp.add_argument("--output", dest="output_path")


def _config(args) -> RunConfig:
    keys = ("seed", "budget_evaluations", "budget_states", "format", "worker_count", "output_path")
    return RunConfig.from_env(**{k: getattr(args, k, None) for k in keys})


def cmd_c2(args) -> int:
    cfg = _config(args)
    try:
        name, G = cat.resolve_graph(args.graph)
        pp = PrimePower(args.p, args.s)
        rep = compute_c2(G, pp, args.method, budget=cfg.budget_evaluations, budget_states=cfg.budget_states,
                         workers=cfg.worker_count, graph_id=name)
    except BudgetExceeded as exc:
        print(f"budget rejected: {exc} (raise --budget-evals / --budget-states to at least {exc.required})",
              file=sys.stderr)
        return 2
    except (PreconditionError, GraphError, FieldError, cat.CatalogError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    record = rep.record()
    with _output(cfg.output_path) as out:
        if cfg.format == "json":
            print(json.dumps(record), file=out)
        else:
            mod = "p" if rep.modulus == pp.p and pp.s > 1 else "q"
            print(f"c2^({pp.q})({name}) = {rep.value} mod {rep.modulus}   [method {rep.method}, residue mod {mod}]",
                  file=out)
            if rep.count is not None:
                label = "coefficient" if rep.method == "coefficient" else "count"
                print(f"  {label}: {rep.count}   runtime: {rep.runtime_ms:.1f} ms", file=out)
    return 0


def _table_line(rec: dict) -> str:
    extra = ", ".join(f"{k}={v}" for k, v in rec.items() if k not in ("suite", "check", "status", "seed"))
    return f"{rec['status']:8s} {rec['check']:45s} {extra}"


def cmd_verify(args) -> int:
    cfg = _config(args)
    failed = passed = skipped = 0
    with _output(cfg.output_path) as out:
        if cfg.format == "json":
            print(json.dumps(header(cfg)), file=out)
        else:
            print(f"# suite={args.suite} seed={cfg.seed} catalog_version={header(cfg)['catalog_version']}", file=out)
        for check in run_suite(args.suite, cfg):
            rec = check.record(cfg.seed)
            print(json.dumps(rec) if cfg.format == "json" else _table_line(rec), file=out, flush=True)
            failed += check.status == "FAIL"
            passed += check.status == "PASS"
            skipped += check.status == "SKIPPED"
        summary = {"passed": passed, "failed": failed, "skipped": skipped}
        print(json.dumps({"summary": summary}) if cfg.format == "json"
              else f"# {passed} passed, {failed} failed, {skipped} skipped", file=out)
    return 1 if failed else 0


def cmd_catalog(args) -> int:
    try:
        entries = cat.catalog()
    except cat.CatalogError as exc:
        print(f"catalog failed to load: {exc}", file=sys.stderr)
        return 1
    for e in entries:
        if e.run:
            G = e.decompletion
            print(f"{e.name:8s} |V|={G.num_vertices} |E|={G.num_edges} apex={e.apex}  {e.provenance}")
        else:
            print(f"{e.name:8s} (documentation only) {e.documented}  {e.provenance}")
    if args.emit_dir:
        for path in cat.emit(Path(args.emit_dir)):
            print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="c2inv", description="c2 invariants of Feynman graphs at prime powers")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("c2", help="compute c2 of one graph at q = p^s")
    sp.add_argument("--graph", required=True, help="catalog name or edge-list file")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--s", type=int, default=1)
    sp.add_argument("--method", choices=METHODS, default="auto")
    _add_run_flags(sp)
    sp.set_defaults(func=cmd_c2)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("--suite", choices=SUITES, default="all")
    _add_run_flags(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("catalog", help="list shipped graphs")
    sp.add_argument("--emit-dir")
    sp.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        # output piped into e.g. head; silence the flush at interpreter exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 1


if __name__ == "__main__":
    sys.exit(main())
