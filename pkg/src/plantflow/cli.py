"""Command line front end for the flow, reliability, importance and fault
tree analyses.

Exit codes: 0 success, 2 bad input (diagnostic names the offending field),
3 internal invariant violation.  JSON output is deterministic: identical
invocations produce byte-identical documents (no timestamps, no timings).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import datasets, faulttree, reliability
from .errors import PlantDataError, PlantflowError
from .flow import BACKENDS, LP_BACKEND, MAXFLOW_BACKEND, max_processable_flow
from .model import MODES, STATION_THROUGHPUT

_TABLE_EDGE_CAP = 50  # human tables truncate flow listings past this; --full lifts it


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plantflow",
        description="Throughput and reliability analysis of multi-stage plant networks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    source = argparse.ArgumentParser(add_help=False)
    grp = source.add_mutually_exclusive_group(required=True)
    grp.add_argument("--builtin", choices=datasets.BUILTINS,
                     help="named built-in dataset")
    grp.add_argument("--file", help="path to a network document file")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--target", type=float, default=None,
                        help="target flow (default: the dataset's)")
    common.add_argument("--mode", choices=MODES, default=STATION_THROUGHPUT,
                        help="capacity semantics (default: %(default)s)")
    common.add_argument("--backend", choices=BACKENDS, default=MAXFLOW_BACKEND,
                        help="solver backend (default: %(default)s)")

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--format", choices=("table", "json", "csv"), default="table",
                     help="output format (default: %(default)s)")
    out.add_argument("--out", default=None, help="write output to this path instead of stdout")

    mc = argparse.ArgumentParser(add_help=False)
    mc.add_argument("--samples", type=int, default=100_000,
                    help="Monte Carlo sample count (default: %(default)s)")
    mc.add_argument("--seed", type=int, default=42,
                    help="random seed (default: %(default)s)")
    mc.add_argument("--workers", type=int, default=1,
                    help="parallel workers; results do not depend on this")

    p = sub.add_parser("maxflow", parents=[source, common, out],
                       help="maximum processable flow for one scenario")
    p.add_argument("--fail", action="append", default=[], metavar="RV_ID",
                   help="fail this component (repeatable)")
    p.add_argument("--full", action="store_true",
                   help="list every edge flow in table output")

    sub.add_parser("reliability", parents=[source, common, out, mc],
                   help="Monte Carlo failure probability")

    p = sub.add_parser("importance", parents=[source, common, out, mc],
                       help="Birnbaum importance per component")
    p.add_argument("--top", type=int, default=6,
                   help="size of the highest-importance list (default: %(default)s)")
    p.add_argument("--bottom", type=int, default=6,
                   help="size of the lowest-importance list (default: %(default)s)")

    p = sub.add_parser("faulttree", parents=[out],
                       help="exact fault-tree baseline on the didactic system")
    p.add_argument("--p-fail", type=float, default=0.03,
                   help="per-component failure probability (default: %(default)s)")
    return parser


def _load(args) -> tuple:
    if args.builtin is not None:
        doc = datasets.builtin(args.builtin)
        name = args.builtin
    else:
        doc = datasets.load_network(args.file)
        name = args.file
    return doc, name


def _target(args, doc) -> float:
    return args.target if args.target is not None else doc.defaults.target_flow


def _emit(args, text: str) -> None:
    if args.out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(args.out, "w") as fh:
            fh.write(text)


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def cmd_maxflow(args) -> int:
    doc, name = _load(args)
    net, model = doc.network, doc.model
    assignment = model.all_up()
    for rv_id in args.fail:
        if rv_id not in assignment:
            raise PlantDataError(f"--fail: unknown component {rv_id!r}")
        assignment[rv_id] = 0
    sol = max_processable_flow(net, model, assignment,
                               mode=args.mode, backend=args.backend)
    if args.format == "json":
        _emit(args, json.dumps({
            "command": "maxflow",
            "network": name,
            "mode": sol.mode,
            "backend": sol.backend,
            "failed": sorted(args.fail),
            "u_star": sol.value,
            "edge_flow": sol.edge_flow,
            "station_flow": {str(k): v for k, v in sol.station_flow.items()},
        }, indent=2))
    elif args.format == "csv":
        rows = [[e.edge_id, e.tail, e.head, e.stage, sol.edge_flow[e.edge_id]]
                for e in net.edges]
        _emit(args, _csv_text(["edge_id", "tail", "head", "stage", "flow"], rows))
    else:
        lines = [
            f"network: {name}",
            f"mode: {sol.mode}   backend: {sol.backend}",
            f"failed: {', '.join(sorted(args.fail)) or '(none)'}",
            f"u* = {sol.value:.6f}",
            "",
            "edge flows:",
        ]
        shown = net.edges if (args.full or len(net.edges) <= _TABLE_EDGE_CAP) \
            else net.edges[:_TABLE_EDGE_CAP]
        for e in shown:
            lines.append(f"  {e.edge_id:>5}  ({e.tail:>2} -> {e.head:>2}, stage {e.stage})"
                         f"  {sol.edge_flow[e.edge_id]:.6f}")
        if len(shown) < len(net.edges):
            lines.append(f"  ... {len(net.edges) - len(shown)} more edges (use --full)")
        _emit(args, "\n".join(lines))
    return 0


def _query(args, doc) -> reliability.ReliabilityQuery:
    if args.samples < 1:
        raise PlantDataError("--samples: must be at least 1")
    if args.workers < 1:
        raise PlantDataError("--workers: must be at least 1")
    return reliability.ReliabilityQuery(
        target_flow=_target(args, doc),
        mode=args.mode,
        backend=args.backend,
        samples=args.samples,
        seed=args.seed,
    )


def cmd_reliability(args) -> int:
    doc, name = _load(args)
    query = _query(args, doc)
    if query.samples < 100:
        print(f"warning: {query.samples} samples; the normal-approximation "
              "standard error is unreliable at this size", file=sys.stderr)
    rep = reliability.estimate_failure_probability(
        doc.network, doc.model, query, workers=args.workers)
    if args.format == "json":
        _emit(args, json.dumps({
            "command": "reliability",
            "network": name,
            "mode": query.mode,
            "backend": query.backend,
            "target_flow": query.target_flow,
            "samples": query.samples,
            "seed": query.seed,
            "failures": rep.failures,
            "p_fail_hat": rep.failure_probability,
            "std_error": rep.std_error,
        }, indent=2))
    elif args.format == "csv":
        _emit(args, _csv_text(
            ["network", "mode", "backend", "target_flow", "samples", "seed",
             "failures", "p_fail_hat", "std_error"],
            [[name, query.mode, query.backend, query.target_flow, query.samples,
              query.seed, rep.failures, rep.failure_probability, rep.std_error]]))
    else:
        _emit(args, "\n".join([
            f"network: {name}",
            f"mode: {query.mode}   backend: {query.backend}",
            f"target flow: {query.target_flow}",
            f"samples: {query.samples}   seed: {query.seed}",
            f"failures: {rep.failures}",
            f"p_fail = {rep.failure_probability:.5f}  (std error {rep.std_error:.5f})",
        ]))
    return 0


def cmd_importance(args) -> int:
    doc, name = _load(args)
    if args.top < 0:
        raise PlantDataError("--top: must be non-negative")
    if args.bottom < 0:
        raise PlantDataError("--bottom: must be non-negative")
    query = _query(args, doc)
    rep = reliability.birnbaum_importance(
        doc.network, doc.model, query, workers=args.workers)
    top = reliability.rank_components(rep, limit=args.top)
    bottom = reliability.rank_components(rep, limit=args.bottom, smallest=True)
    if args.format == "json":
        _emit(args, json.dumps({
            "command": "importance",
            "network": name,
            "mode": query.mode,
            "backend": query.backend,
            "target_flow": query.target_flow,
            "samples": query.samples,
            "seed": query.seed,
            "entries": [{"rv_id": e.rv_id, "birnbaum": e.importance,
                         "std_error": e.std_error} for e in rep.entries],
            "top": [e.rv_id for e in top.entries],
            "bottom": [e.rv_id for e in bottom.entries],
            "truncated": top.truncated or bottom.truncated,
        }, indent=2))
    elif args.format == "csv":
        _emit(args, _csv_text(
            ["rv_id", "birnbaum", "std_error"],
            [[e.rv_id, e.importance, e.std_error] for e in rep.entries]))
    else:
        lines = [
            f"network: {name}",
            f"mode: {query.mode}   backend: {query.backend}   target: {query.target_flow}",
            f"samples: {query.samples}   seed: {query.seed}",
        ]
        if args.top:
            lines += ["", f"top {len(top.entries)} by Birnbaum importance:"]
            lines += [f"  {e.rv_id:>6}  {e.importance:+.5f}  (se {e.std_error:.5f})"
                      for e in top.entries]
        if args.bottom:
            lines += ["", f"bottom {len(bottom.entries)}:"]
            lines += [f"  {e.rv_id:>6}  {e.importance:+.5f}  (se {e.std_error:.5f})"
                      for e in bottom.entries]
        if not args.top and not args.bottom:
            lines += ["", "all components:"]
            lines += [f"  {e.rv_id:>6}  {e.importance:+.5f}  (se {e.std_error:.5f})"
                      for e in rep.entries]
        if top.truncated or bottom.truncated:
            lines += ["", "(requested list size exceeds component count; truncated)"]
        _emit(args, "\n".join(lines))
    return 0


# The two storage scenarios the flow function separates but the tree cannot:
# both fail station n9 plus one pipe, differing only in which pipe.
_CONTRAST_SCENARIOS = (
    ("n9 + pipe (8,9) failed", ("n9", "p8_9")),
    ("n9 + pipe (4,5) failed", ("n9", "p4_5")),
)


def cmd_faulttree(args) -> int:
    if not 0.0 <= args.p_fail <= 1.0:
        raise PlantDataError("--p-fail: must be a probability in [0, 1]")
    doc = datasets.didactic(p_fail=args.p_fail)
    net, model = doc.network, doc.model
    tree = faulttree.didactic_fault_tree()
    p_fail = {rv.rv_id: rv.p_fail for rv in model.rvs}
    exact = faulttree.failure_probability(tree, p_fail)

    contrast = []
    for label, failed in _CONTRAST_SCENARIOS:
        assignment = model.all_up()
        for rv_id in failed:
            assignment[rv_id] = 0
        tree_fails = faulttree.evaluate_failure(tree, assignment)
        u = max_processable_flow(net, model, assignment).value
        flow_fails = u < doc.defaults.target_flow
        contrast.append({
            "scenario": label,
            "fault_tree": "fail" if tree_fails else "survive",
            "flow_function": "fail" if flow_fails else "survive",
            "u_star": u,
        })

    if args.format == "json":
        _emit(args, json.dumps({
            "command": "faulttree",
            "network": "didactic",
            "p_fail": args.p_fail,
            "failure_probability": exact,
            "contrast": contrast,
        }, indent=2))
    elif args.format == "csv":
        _emit(args, _csv_text(
            ["scenario", "fault_tree", "flow_function", "u_star"],
            [[c["scenario"], c["fault_tree"], c["flow_function"], c["u_star"]]
             for c in contrast]))
    else:
        lines = [
            "network: didactic",
            f"component failure probability: {args.p_fail}",
            f"exact system failure probability (gate arithmetic): {exact:.10f}",
            "",
            "scenario contrast (fault tree vs flow function):",
        ]
        for c in contrast:
            lines.append(f"  {c['scenario']:<28} tree: {c['fault_tree']:<8} "
                         f"flow: {c['flow_function']:<8} (u* = {c['u_star']:.3f})")
        _emit(args, "\n".join(lines))
    return 0


_COMMANDS = {
    "maxflow": cmd_maxflow,
    "reliability": cmd_reliability,
    "importance": cmd_importance,
    "faulttree": cmd_faulttree,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except PlantDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (PlantflowError, RuntimeError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
