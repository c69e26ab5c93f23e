"""Command-line benchmark: generate or load a workload, run it, audit, write the round ledger."""
from __future__ import annotations

import argparse
import sys

from .graph import GraphError, read_graph, read_updates
from .runner import ALGOS, AUDITS, MODES, RunError, emit_csv, emit_summary, run
from .workload import DECREMENTAL, FAMILIES, INCREMENTAL, Workload, WorkloadError, gen_workload

_DEFAULT_DIRECTION = {"inc_seq": INCREMENTAL, "inc_dist": INCREMENTAL, "dec_dist": DECREMENTAL}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lazybfs", description=__doc__)
    p.add_argument("--family", choices=FAMILIES, default="path_with_chords")
    p.add_argument("--n", type=int, default=100, help="number of nodes")
    p.add_argument("--q", type=int, default=None, help="number of changes (default: n)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--algo", choices=ALGOS, default="inc_dist")
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--mode", choices=MODES, default=None,
                   help="distributed meters rounds, sequential meters work (default follows --algo)")
    p.add_argument("--direction", choices=(INCREMENTAL, DECREMENTAL), default=None,
                   help="needed only for naive/es; otherwise implied by --algo")
    p.add_argument("--audit", choices=AUDITS, default="full")
    p.add_argument("--graph", help="initial graph file ('n m' then 'u v' lines)")
    p.add_argument("--updates", help="update file ('I u v' / 'D u v' lines); requires --graph")
    p.add_argument("--root", type=int, default=0)
    p.add_argument("--out", help="write the per-stage ledger CSV here")
    return p


def _load(args) -> Workload:
    g = read_graph(args.graph)
    changes = read_updates(args.updates) if args.updates else []
    ops = {op for op, _, _ in changes}
    if len(ops) > 1:
        raise WorkloadError("update file mixes insertions and deletions")
    if ops:
        direction = INCREMENTAL if ops == {"I"} else DECREMENTAL
    else:
        direction = args.direction or _DEFAULT_DIRECTION.get(args.algo, INCREMENTAL)
    w = Workload("file", g.n, args.seed, direction, list(g.edges()), changes, root=args.root)
    w.check()
    return w


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.updates and not args.graph:
            raise WorkloadError("--updates needs --graph")
        if args.graph:
            w = _load(args)
        else:
            direction = args.direction or _DEFAULT_DIRECTION.get(args.algo, INCREMENTAL)
            q = args.n if args.q is None else args.q
            w = gen_workload(args.family, args.n, q, args.seed, direction)
        report = run(w, args.algo, args.epsilon, args.mode, args.audit)
    except (WorkloadError, RunError, GraphError, ValueError) as exc:
        print(f"lazybfs: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        try:
            emit_csv(report, args.out)
        except OSError as exc:
            print(f"lazybfs: error: cannot write {args.out}: {exc}", file=sys.stderr)
            return 2
    emit_summary(report)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
