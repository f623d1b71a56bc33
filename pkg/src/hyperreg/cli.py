"""Command line interface.

The primary artifact (hypergraph text, certificate JSON or a number) goes to
stdout or ``--out``; the run report goes to stderr as ``key: value`` lines, or
as JSON with ``--json``.  Exit codes: 0 found or valid, 1 not found,
2 budget exhausted, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .constructions import ConstructionParams, gen_lower_bound, gen_pasch_free_probe, gen_random_linear, gen_sts
from .errors import BudgetExhausted, HypergraphError, RetryLimitExceeded
from .hypercore import (
    certificate_from_json,
    certificate_host_view,
    certificate_to_json,
    check_certificate,
    pair_hypergraph,
    read_hypergraph,
    serialize_hypergraph,
)
from .immersion import ImmersionCertificate, clone_decompose, find_zero_immersion
from .oracles import OracleBudget, find_even_subhypergraph, find_r_regular_exact, hom_cycle_count
from .regsearch import SearchParams, find_two_regular
from .regularize import balanced_equal_parts, balanced_kpartite
from .rregsearch import SunflowerParams, find_r_regular_sunflower
from .smallreg import find_small_two_regular_hypergraph

EXIT_FOUND, EXIT_NOT_FOUND, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    g = p.add_argument_group("common options")
    g.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    g.add_argument("--budget", type=int, default=None, help="node / sample budget")
    g.add_argument("--time-limit", type=float, default=None, help="seconds (exact searches)")
    g.add_argument("--workers", type=int, default=1, help="sampler threads (default 1)")
    g.add_argument("--out", default=None, help="write the artifact here instead of stdout")
    g.add_argument("--json", action="store_true", help="machine-readable report on stderr")
    g.add_argument("--timings", action="store_true", help="include wall-clock time in the report")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    top = _Parser(prog="hyperreg", description="Regular substructures in linear hypergraphs.")
    sub = top.add_subparsers(dest="command", required=True)

    def group(name, help_):
        p = sub.add_parser(name, help=help_)
        return p.add_subparsers(dest="action", required=True)

    gen = group("gen", "generate instances")
    p = gen.add_parser("sts", parents=[common], help="Steiner triple system")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--relabel", action="store_true", help="randomly relabel points using --seed")
    p = gen.add_parser("random", parents=[common], help="random linear k-graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--m", type=int, required=True)
    p = gen.add_parser("lower-bound", parents=[common], help="deletion-method construction")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--c0", type=float, default=0.5)
    p.add_argument("--bad-check-depth", type=int, default=12)
    p = gen.add_parser("pasch-free", parents=[common], help="negative-control probe")
    p.add_argument("--n", type=int, required=True)

    det = group("detect", "search for substructures")
    p = det.add_parser("even", parents=[common], help="even subhypergraph")
    p.add_argument("host")
    p = det.add_parser("regular", parents=[common], help="r-regular subhypergraph")
    p.add_argument("host")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--method", choices=("exact", "sunflower"), default="exact")
    p.add_argument("--max-edges", type=int, default=None, help="witness size cap (exact)")
    p = det.add_parser("two-regular", parents=[common], help="2-regular via collision search")
    p.add_argument("host")
    p.add_argument("--strategy", choices=("auto", "cycles", "paths", "matchings"), default="auto")
    p.add_argument("--h", type=int, default=2)
    p.add_argument("--t", type=int, default=None)
    p = det.add_parser("small-two-regular", parents=[common], help="4l-edge 2-regular via pair products")
    p.add_argument("host")
    p.add_argument("--l", type=int, default=2, dest="ell")

    reg = group("regularize", "balanced partite subhypergraphs")
    p = reg.add_parser("kpartite", parents=[common])
    p.add_argument("host")
    p = reg.add_parser("equal-parts", parents=[common])
    p.add_argument("host")
    p.add_argument("--d", type=float, default=None, help="density parameter (default e/n)")

    imm = group("immersion", "closed surfaces")
    p = imm.add_parser("lift", parents=[common], help="pair hypergraph")
    p.add_argument("host")
    p.add_argument("--drop-isolated", action="store_true")
    p = imm.add_parser("decompose", parents=[common], help="split a 3-graph with 2-regular links")
    p.add_argument("host")
    p = imm.add_parser("find", parents=[common], help="search for a surface")
    p.add_argument("host")
    p.add_argument("--max-edges", type=int, default=None)

    p = sub.add_parser("verify", parents=[common], help="check a certificate against a host")
    p.add_argument("cert")
    p.add_argument("host")

    orc = group("oracle", "exact baselines")
    p = orc.add_parser("regular", parents=[common])
    p.add_argument("host")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--max-edges", type=int, default=None)
    p = orc.add_parser("even", parents=[common])
    p.add_argument("host")
    p = orc.add_parser("homcount", parents=[common])
    p.add_argument("host")
    p.add_argument("--h", type=int, required=True)
    return top


def _budget(args, max_edges=None) -> OracleBudget:
    return OracleBudget(max_edges_in_witness=max_edges, max_nodes=args.budget, time_limit=args.time_limit)


def _emit(args, text: str, report: dict):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        report["output"] = args.out
    else:
        sys.stdout.write(text)


def _cert_outcome(args, cert, report, host=None):
    if cert is None:
        report["outcome"] = "not-found"
        return EXIT_NOT_FOUND
    report["outcome"] = "found"
    report["certificate_edges"] = len(cert.edges)
    _emit(args, certificate_to_json(cert), report)
    return EXIT_FOUND


def _cmd_gen(args, report):
    if args.action == "sts":
        H = gen_sts(args.n, args.seed if args.relabel else None)
    elif args.action == "random":
        H = gen_random_linear(args.n, args.k, args.m, seed=args.seed)
        report["target_m"] = args.m
    elif args.action == "lower-bound":
        params = ConstructionParams(args.n, args.k, args.r, args.c0, args.seed, args.bad_check_depth)
        H, rep = gen_lower_bound(params)
        report.update(rep.as_dict())
    else:
        H = gen_pasch_free_probe(args.n, seed=args.seed)
    report.update(outcome="generated", n=H.n, m=H.m, k=H.k)
    _emit(args, serialize_hypergraph(H), report)
    return EXIT_FOUND


def _cmd_detect(args, report):
    if args.action == "even":
        H = read_hypergraph(args.host, linear=False)
        return _cert_outcome(args, find_even_subhypergraph(H), report)
    H = read_hypergraph(args.host)
    if args.action == "regular":
        if args.method == "exact":
            cert = find_r_regular_exact(H, args.r, _budget(args, args.max_edges))
        else:
            params = SunflowerParams(matching_budget=args.budget or 100_000)
            stats = {}
            cert = find_r_regular_sunflower(H, args.r, params, seed=args.seed, stats=stats)
            report.update(stats)
        return _cert_outcome(args, cert, report)
    if args.action == "two-regular":
        params = SearchParams(
            h=args.h, t=args.t, seed=args.seed, workers=args.workers,
            sample_budget=args.budget if args.budget is not None else 100_000,
        )
        cert, view = find_two_regular(H, args.strategy, params)
        report["colours"] = view.s
        report["view_edges"] = view.m
        if cert is not None:
            report["host_edges"] = list(cert.pull_back(view).edges)
        return _cert_outcome(args, cert, report)
    cert, view = find_small_two_regular_hypergraph(
        H, args.ell, budget=args.budget or 1_000_000, seed=args.seed
    )
    report["view_edges"] = view.m
    return _cert_outcome(args, cert, report)


def _cmd_regularize(args, report):
    H = read_hypergraph(args.host)
    if args.action == "kpartite":
        B = balanced_kpartite(H, seed=args.seed)
    else:
        d = args.d if args.d is not None else H.m / max(H.n, 1)
        B = balanced_equal_parts(H, d, seed=args.seed)
    doc = {
        "edges": list(B.edges),
        "parts": [list(p) for p in B.parts],
        "mu": B.mu,
        "lambda": B.lam,
        "per_part_max_degree": list(B.per_part_max_degree),
    }
    report.update(outcome="found", edges=B.m, mu=B.mu)
    _emit(args, json.dumps(doc, indent=2, sort_keys=True) + "\n", report)
    return EXIT_FOUND


def _cmd_immersion(args, report):
    G = read_hypergraph(args.host, linear=False)
    if args.action == "lift":
        H, pair_map = pair_hypergraph(G, drop_isolated=args.drop_isolated)
        comment = "\n".join(f"pair {i} {u} {v}" for i, (u, v) in enumerate(pair_map))
        report.update(outcome="generated", n=H.n, m=H.m)
        _emit(args, serialize_hypergraph(H, comment=comment), report)
        return EXIT_FOUND
    if args.action == "decompose":
        surface, phi = clone_decompose(G)
        cert = ImmersionCertificate(surface, phi, tuple(range(G.m)))
    else:
        cert = find_zero_immersion(G, _budget(args, args.max_edges), seed=args.seed)
    if cert is not None:
        report["surfaces"] = ", ".join(
            f"{c.name} (chi={c.euler})" for c in cert.surface.components
        )
    return _cert_outcome(args, cert, report)


def _cmd_verify(args, report):
    with open(args.cert, "rb") as fh:
        cert = certificate_from_json(fh.read())
    linear = not isinstance(cert, ImmersionCertificate)
    H = read_hypergraph(args.host, linear=linear)
    problems = check_certificate(certificate_host_view(H, cert), cert)
    report["kind"] = cert.kind
    if problems:
        report["outcome"] = "invalid"
        report["violations"] = problems
        return EXIT_INPUT
    report["outcome"] = "valid"
    return EXIT_FOUND


def _cmd_oracle(args, report):
    H = read_hypergraph(args.host, linear=False)
    if args.action == "regular":
        return _cert_outcome(args, find_r_regular_exact(H, args.r, _budget(args, args.max_edges)), report)
    if args.action == "even":
        return _cert_outcome(args, find_even_subhypergraph(H), report)
    value = hom_cycle_count(H, args.h)
    report.update(outcome="found", homcount=value)
    _emit(args, f"{value}\n", report)
    return EXIT_FOUND


COMMANDS = {
    "gen": _cmd_gen,
    "detect": _cmd_detect,
    "regularize": _cmd_regularize,
    "immersion": _cmd_immersion,
    "verify": _cmd_verify,
    "oracle": _cmd_oracle,
}


def _write_report(report: dict, as_json: bool):
    if as_json:
        sys.stderr.write(json.dumps(report, sort_keys=True) + "\n")
        return
    for key, value in report.items():
        if isinstance(value, list) and value and isinstance(value[0], str):
            sys.stderr.write(f"{key}:\n")
            for item in value:
                sys.stderr.write(f"  - {item}\n")
        else:
            sys.stderr.write(f"{key}: {value}\n")


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    cmd = args.command if args.command == "verify" else f"{args.command} {args.action}"
    report = {"command": cmd, "seed": args.seed}
    start = time.perf_counter()
    try:
        code = COMMANDS[args.command](args, report)
    except BudgetExhausted as exc:
        report["outcome"] = "budget-exhausted"
        report["detail"] = str(exc)
        code = EXIT_BUDGET
    except RetryLimitExceeded as exc:
        report["outcome"] = "budget-exhausted"
        report["detail"] = str(exc)
        code = EXIT_BUDGET
    except (HypergraphError, OSError) as exc:
        report["outcome"] = "input-error"
        report["detail"] = str(exc)
        code = EXIT_INPUT
    if args.timings:
        report["seconds"] = round(time.perf_counter() - start, 6)
    report["exit"] = code
    _write_report(report, args.json)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
