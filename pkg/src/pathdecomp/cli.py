"""Command line front end.

Every subcommand that reads graphs takes a file name or ``-`` for stdin and
writes one JSON object per line.  Exit codes: 0 clean, 2 a violation was
found, 3 some search timed out.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Iterator, TextIO

from . import __version__
from .canon import graph_id
from .decomposition import PathDecomposition, validate
from .formats import FormatError, emit_graph6, read_graphs
from .generators import (
    GenerationError,
    clique_minus_matching,
    embed_as_even_subgraph,
    enumerate_connected,
    figure1_family,
    random_set_graph,
)
from .graph import SimpleGraph, even_subgraph, norm_edge
from .harness import (
    EXIT_CLEAN,
    EXIT_TIMEOUT,
    EXIT_VIOLATION,
    SCHEMA_VERSION,
    SUITES,
    Budget,
    classify,
    ev_family_verdict,
    run_suite,
)
from .solver import DEFAULT_TIMEOUT_MS, SearchTimeout, pn_exact
from .transforms import OUTWARDS, TOWARDS, TransformationCertificate, apply_addible, verify_transformation

EXIT_USAGE = 1


def _dump(obj: dict, out: TextIO) -> None:
    out.write(json.dumps(obj, separators=(",", ":")) + "\n")


def _graphs(args: argparse.Namespace) -> Iterator[SimpleGraph]:
    if args.input == "-":
        yield from read_graphs(sys.stdin, args.format)
    else:
        with open(args.input) as fh:
            yield from read_graphs(fh, args.format)


def _budget(args: argparse.Namespace) -> Budget:
    return Budget(timeout_ms=args.timeout_ms, deterministic=args.deterministic)


def cmd_pn(args: argparse.Namespace, out: TextIO) -> int:
    budget = _budget(args)
    code = EXIT_CLEAN
    for g in _graphs(args):
        res = pn_exact(g, **budget.solver_args())
        rec = {"v": SCHEMA_VERSION, "graph_id": graph_id(g), "graph6": emit_graph6(g),
               "pn": res.pn, "exact": not res.timed_out,
               "lower_bound": res.best_lower_bound if res.timed_out else res.pn}
        if res.timed_out:
            code = EXIT_TIMEOUT
        _dump(rec, out)
    return code


def cmd_decompose(args: argparse.Namespace, out: TextIO) -> int:
    budget = _budget(args)
    code = EXIT_CLEAN
    for g in _graphs(args):
        res = pn_exact(g, **budget.solver_args())
        if res.timed_out:
            code = EXIT_TIMEOUT
        rec = {"v": SCHEMA_VERSION, "graph6": emit_graph6(g), "exact": not res.timed_out}
        rec.update(res.witness.to_json())
        rec["endpoint_counts"] = list(res.witness.endpoint_counts)
        _dump(rec, out)
    return code


def cmd_ev(args: argparse.Namespace, out: TextIO) -> int:
    budget = _budget(args)
    code = EXIT_CLEAN
    for g in _graphs(args):
        ev = even_subgraph(g)
        verdict = ev_family_verdict(g, budget)
        if verdict == "unknown":
            code = EXIT_TIMEOUT
        _dump({
            "v": SCHEMA_VERSION,
            "graph6": emit_graph6(g),
            "even_vertices": list(ev.even_vertices),
            "ev_graph6": emit_graph6(ev.ev_graph),
            "ev_edges": [list(e) for e in ev.host_edges()],
            "ev_max_degree": ev.max_e_degree,
            "ev_in_family_g": verdict,
        }, out)
    return code


def cmd_classify(args: argparse.Namespace, out: TextIO) -> int:
    budget = _budget(args)
    violation = timeout = False
    for g in _graphs(args):
        rec = classify(g, budget, timing=args.timing)
        violation |= rec.theorem_holds is False
        timeout |= not rec.pn_exact
        _dump(rec.to_json(), out)
    if violation:
        return EXIT_VIOLATION
    return EXIT_TIMEOUT if timeout else EXIT_CLEAN


def _generated(args: argparse.Namespace) -> Iterator[SimpleGraph]:
    fam = args.family
    if fam == "clique-minus-matching":
        yield clique_minus_matching(args.k)
    elif fam in ("chain", "necklace"):
        inst = figure1_family(fam, args.t, args.stubs)
        yield embed_as_even_subgraph(inst.pattern) if args.host else inst.pattern
    elif fam == "random-set":
        for i in range(args.count):
            yield random_set_graph(args.n_odd, args.extra, args.seed + i)
    elif fam == "enumerate":
        for n in range(1, args.max_n + 1):
            yield from enumerate_connected(n)


def cmd_generate(args: argparse.Namespace, out: TextIO) -> int:
    for g in _generated(args):
        out.write(emit_graph6(g) + "\n")
    return EXIT_CLEAN


def _parse_edges(text: str) -> list[tuple[int, int]]:
    edges = []
    for part in text.split(","):
        a, _, b = part.strip().partition("-")
        edges.append(norm_edge(int(a), int(b)))
    return edges


def cmd_transform(args: argparse.Namespace, out: TextIO) -> int:
    if args.action == "verify":
        code = EXIT_CLEAN
        fh = sys.stdin if args.input == "-" else open(args.input)
        with fh:
            for line in fh:
                if not line.strip():
                    continue
                cert = TransformationCertificate.from_json(line)
                problems = verify_transformation(cert)
                if problems:
                    code = EXIT_VIOLATION
                _dump({"v": SCHEMA_VERSION, "ok": not problems, "problems": problems}, out)
        return code

    edges = _parse_edges(args.edges)
    code = EXIT_CLEAN
    for g in _graphs(args):
        missing = [e for e in edges if not g.has_edge(*e)]
        if missing:
            raise ValueError(f"edges {missing} are not in the graph")
        base = g.remove_edges(edges)
        res = pn_exact(base, timeout_ms=args.timeout_ms)
        rec = {"v": SCHEMA_VERSION, "graph6": emit_graph6(g), "pivot": args.pivot,
               "direction": args.direction, "edges": [list(e) for e in edges]}
        try:
            cert = apply_addible(base, res.witness, edges, args.pivot, args.direction, args.timeout_ms)
        except SearchTimeout:
            code = EXIT_TIMEOUT
            rec["addible"] = None
            _dump(rec, out)
            continue
        rec["addible"] = cert is not None
        if cert is not None:
            rec["certificate"] = cert.to_json()
        _dump(rec, out)
    return code


def cmd_check(args: argparse.Namespace, out: TextIO) -> int:
    params: dict = {}
    if args.max_n is not None:
        params["max_n"] = args.max_n
    if args.sizes:
        params["sizes"] = tuple(args.sizes)
    if args.per_size is not None:
        params["per_size"] = args.per_size
    budget = _budget(args)
    report = out
    fh = None
    if args.out:
        fh = open(args.out, "a" if args.resume else "w")
        report = fh
    try:
        summary = run_suite(
            args.suite, params, budget, out=report,
            resume_from=args.out if args.resume else None, workers=args.workers,
        )
    finally:
        if fh is not None:
            fh.close()
    print(summary.line(), file=sys.stderr)
    return summary.exit_code


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pathdecomp", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--timeout-ms", type=int, default=DEFAULT_TIMEOUT_MS)
    common.add_argument("--deterministic", action="store_true",
                        help="bound searches by node count instead of wall clock")
    reader = argparse.ArgumentParser(add_help=False)
    reader.add_argument("input", help="graph file, or - for stdin")
    reader.add_argument("--format", choices=("graph6", "edgelist"), default="graph6")

    sub = p.add_subparsers(dest="command", required=True)
    sp = sub.add_parser("pn", parents=[common, reader], help="path number of each graph")
    sp.set_defaults(func=cmd_pn)
    sp = sub.add_parser("decompose", parents=[common, reader], help="a minimum path decomposition")
    sp.set_defaults(func=cmd_decompose)
    sp = sub.add_parser("ev", parents=[common, reader], help="even subgraph and family-G verdict")
    sp.set_defaults(func=cmd_ev)
    sp = sub.add_parser("classify", parents=[common, reader], help="full classification record")
    sp.add_argument("--timing", action="store_true", help="include wall-clock timing")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("generate", help="emit generated graphs as graph6")
    sp.add_argument("family", choices=("clique-minus-matching", "chain", "necklace", "random-set", "enumerate"))
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--t", type=int, default=3)
    sp.add_argument("--stubs", type=int, default=3)
    sp.add_argument("--host", action="store_true", help="embed the pattern as an even subgraph")
    sp.add_argument("--n-odd", type=int, default=4)
    sp.add_argument("--extra", type=int, default=2)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--max-n", type=int, default=5)
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("transform", help="add edges at a pivot or verify certificates")
    tsub = sp.add_subparsers(dest="action", required=True)
    ta = tsub.add_parser("apply", parents=[reader],
                         help="remove EDGES, decompose, then try to add them back at PIVOT")
    ta.add_argument("--edges", required=True, help="comma separated u-v pairs")
    ta.add_argument("--pivot", type=int, required=True)
    ta.add_argument("--direction", choices=(TOWARDS, OUTWARDS), default=TOWARDS)
    ta.add_argument("--timeout-ms", type=int, default=DEFAULT_TIMEOUT_MS)
    tv = tsub.add_parser("verify", help="recheck certificate JSON lines")
    tv.add_argument("input", help="certificate file, or - for stdin")
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("check", parents=[common], help="run a verification suite")
    sp.add_argument("--suite", choices=SUITES, required=True)
    sp.add_argument("--max-n", type=int, default=None)
    sp.add_argument("--sizes", type=int, nargs="+", default=None)
    sp.add_argument("--per-size", type=int, default=None)
    sp.add_argument("--out", default=None, help="report file (default stdout)")
    sp.add_argument("--resume", action="store_true", help="skip graphs already in --out")
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_check)
    return p


def main(argv: list[str] | None = None, out: TextIO | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "resume", False) and not args.out:
        parser.error("--resume needs --out")
    try:
        return args.func(args, out or sys.stdout)
    except (FormatError, GenerationError, ValueError, OSError) as exc:
        print(f"pathdecomp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
