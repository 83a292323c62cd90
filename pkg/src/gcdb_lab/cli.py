"""gcdb-lab command line.

Every subcommand shares one flag set (the run configuration), builds a
list of result records and writes them as a versioned JSON envelope or a
fixed-header CSV table. Exit status: 0 ok, 2 discrepancy reported, 1 error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import arith, graph, lattice, patterns
from .factor import FactorizationTimeout
from .records import STAT_COLUMNS, VERDICT_COLUMNS, to_csv, to_json
from .window import default_workers

EXIT_OK, EXIT_ERROR, EXIT_DISCREPANCY = 0, 1, 2


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for discrepancies here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _f_registry(name: str, N: int, k: int | None, seed: int) -> arith.ArithTable:
    if name == "unit":
        return arith.unit_table(N)
    if name == "indicator-k":
        if k is None:
            raise CliError("f=indicator-k needs --k")
        return arith.indicator_table(N, k)
    if name == "floor-inverse":
        return arith.floor_inverse_table(N)
    if name == "phi":
        return arith.phi_sieve(N)
    if name == "mobius":
        return arith.mobius_sieve(N)
    if name == "random-sign":
        return arith.random_sign_table(N, seed)
    raise CliError(f"unknown f-name {name!r}; choose from {', '.join(F_NAMES)}")


F_NAMES = ("unit", "indicator-k", "floor-inverse", "phi", "mobius", "random-sign")


def _need(args, *names):
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise CliError(f"{args.command}: missing required flag(s) " + ", ".join("--" + m for m in missing))


def _load_pattern(path: str | None) -> patterns.BPattern:
    if path is None:
        raise CliError("missing required flag --file")
    try:
        text = Path(path).read_text()
    except OSError as err:
        raise CliError(f"cannot read pattern file {path}: {err.strerror}") from None
    try:
        return patterns.parse_pattern(text)
    except patterns.PatternError as err:
        raise CliError(f"{path}: {err}") from None


def _stat(rec: dict, provenance: str) -> dict:
    rec.setdefault("provenance", provenance)
    return rec


# -- subcommands: each returns (records, discrepancy, csv_columns) ---------------------------


def cmd_density(a):
    _need(a, "b", "N")
    ks = [a.k] if a.k is not None else [1]
    return [lattice.density_estimate(a.b, k, a.N, a.workers).to_record() for k in ks], False, STAT_COLUMNS


def cmd_mean_value(a):
    _need(a, "b", "N", "f")
    f = _f_registry(a.f, a.N, a.k, a.seed)
    rec = lattice.mean_value_estimate(f, a.b, a.N).to_record()
    if a.k is not None:
        rec["k"] = a.k
    return [rec], False, STAT_COLUMNS


def cmd_avg_gcd(a):
    _need(a, "b", "x")
    cmp = lattice.compare_avg_gcd(a.b, a.x)
    rec = cmp.to_record()
    rec.update(raw_sum=rec["exact"], estimate=cmp.ratio, target=1.0, abs_error=cmp.rel_error)
    prov = "exact sum of gcd over 1..x squared vs log-x main term" if a.b == 1 else "exact sum over 1..x by 1..x^b vs x^(b+1) zeta(b)/zeta(b+1)"
    return [_stat(rec, prov)], False, STAT_COLUMNS


def cmd_zeta(a):
    if a.s is None:
        raise CliError("zeta: missing required flag --s")
    z = arith.zeta(a.s)
    rec = {
        "op": "zeta",
        "s": a.s,
        "estimate": z.value,
        "terms_used": z.terms_used,
        "tail_bound": z.tail_bound,
        "provenance": "partial sum plus Euler-Maclaurin tail",
    }
    return [rec], False, ("op", "s", "estimate", "terms_used", "tail_bound", "provenance")


def cmd_pattern_check(a):
    P = _load_pattern(a.file)
    rec = {"op": "pattern_check", "b": P.b, "w": P.w, "h": P.h, **patterns.is_realizable(P).to_record()}
    return [rec], False, None


def cmd_pattern_realize(a):
    P = _load_pattern(a.file)
    try:
        real = patterns.realize(P, factor_budget_s=a.factor_budget_ms / 1000.0)
    except patterns.NotRealizableError as err:
        raise CliError(f"pattern is not realizable: complete rectangle modulo prime {err.prime}") from None
    rec = {"op": "pattern_realize", **real.to_record(), "verification": real.verify().to_record()}
    return [rec], False, None


def cmd_pattern_verify(a):
    _need(a, "u", "v")
    P = _load_pattern(a.file)
    rep = patterns.verify_realization(P, a.u, a.v)
    if a.format == "csv":
        rows = [{"r": c.cell[0], "s": c.cell[1], "kind": c.kind.value, "status": c.status, "detail": c.detail} for c in rep.verdicts]
        return rows, False, VERDICT_COLUMNS
    return [{"op": "pattern_verify", **rep.to_record()}], False, None


def cmd_pattern_brute(a):
    _need(a, "bound")
    P = _load_pattern(a.file)
    res = patterns.brute_force_realize(P, a.bound)
    return [{"op": "pattern_brute", "b": P.b, "w": P.w, "h": P.h, **res.to_record()}], False, None


def cmd_pattern_square(a):
    _need(a, "b", "N")
    rep = patterns.square_corollary_check(a.N, a.b, brute_bound=a.bound or 0)
    return [rep.to_record()], rep.discrepancy, None


def cmd_pattern_boundary(a):
    _need(a, "b", "M", "N")
    rep = patterns.boundary_corollary_check(a.M, a.N, a.b)
    return [rep.to_record()], rep.discrepancy, None


def cmd_graph_connectivity(a):
    _need(a, "b", "N")
    return [graph.mean_connectivity_estimate(a.b, a.N, a.workers).to_record()], False, STAT_COLUMNS


def cmd_graph_components(a):
    _need(a, "b", "N")
    rep = graph.largest_component_density(a.b, a.N, a.schedule, a.workers)
    recs = [_stat(r, "largest 4-connected component of visible points in T_N; no analytic target") for r in rep.to_records()]
    for r in recs:
        r.setdefault("target", None)
    if a.dump_prefix:
        g = graph.window_graph(a.b, 1, a.N, 1, a.N, a.workers)
        graph.write_pbm(g.bitmap, f"{a.dump_prefix}.pbm")
        graph.write_pgm(g.labels()[0], f"{a.dump_prefix}.pgm")
    return recs, False, STAT_COLUMNS


def cmd_graph_lonesome(a):
    _need(a, "b")
    if a.strategy == "construct":
        res = graph.find_lonesome(a.b, "construct", factor_budget_s=a.factor_budget_ms / 1000.0)
    else:
        n = a.N or 200
        point = (a.u, a.v) if a.u is not None and a.v is not None else None
        res = graph.find_lonesome(a.b, "scan", window=(1, n, 1, n), point=point)
    return [res.to_record()], False, None


def cmd_graph_spheres(a):
    _need(a, "b", "N")
    est = lattice.zeta_Lambda_estimate(graph.VisibleNeighborCount(a.b), a.b, a.N, K=a.trunc_K, bound=4.0)
    rec = est.to_record()
    rec.update(target=4.0, abs_error=abs(est.value - 4.0))
    return [_stat(rec, "sphere averages of the visible-neighbour count; target 4")], False, STAT_COLUMNS


PATTERN_CMDS = {
    "check": cmd_pattern_check,
    "realize": cmd_pattern_realize,
    "verify": cmd_pattern_verify,
    "brute": cmd_pattern_brute,
    "square": cmd_pattern_square,
    "boundary": cmd_pattern_boundary,
}
GRAPH_CMDS = {
    "connectivity": cmd_graph_connectivity,
    "components": cmd_graph_components,
    "lonesome": cmd_graph_lonesome,
    "spheres": cmd_graph_spheres,
}


# -- argument parsing --------------------------------------------------------------------


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def _nonneg(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {n}")
    return n


def _schedule(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(sorted(int(t) for t in text.split(",") if t.strip()))
    except ValueError:
        raise argparse.ArgumentTypeError(f"schedule must be comma-separated integers, got {text!r}") from None
    if not vals or vals[0] < 1:
        raise argparse.ArgumentTypeError("schedule needs positive window sizes")
    return vals


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    g = p.add_argument_group("run configuration")
    g.add_argument("--b", type=_positive, help="exponent b")
    g.add_argument("--N", type=_positive, help="window size (pattern commands: height)")
    g.add_argument("--x", type=_positive, help="average-gcd range")
    g.add_argument("--k", type=_positive, help="gcd_b value / indicator index")
    g.add_argument("--M", type=_positive, help="boundary pattern width")
    g.add_argument("--f", help="arithmetic function: " + ", ".join(F_NAMES))
    g.add_argument("--file", help="pattern file")
    g.add_argument("--u", type=_nonneg, help="translate u")
    g.add_argument("--v", type=_nonneg, help="translate v")
    g.add_argument("--format", choices=("json", "csv"), default="json")
    g.add_argument("--workers", type=_positive, default=None, help="worker threads (default: $GCDB_LAB_WORKERS or 1)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--trunc-K", dest="trunc_K", type=_positive, default=lattice.DEFAULT_TRUNCATION_K)
    g.add_argument("--factor-budget-ms", type=_positive, default=10_000)
    g.add_argument("--bound", type=_nonneg, help="brute-force search bound")
    g.add_argument("--schedule", type=_schedule, help="comma-separated window sizes")
    g.add_argument("--strategy", choices=("scan", "construct"), default="scan")
    g.add_argument("--dump-prefix", help="write <prefix>.pbm and <prefix>.pgm")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="gcdb-lab", description="Experiments with the generalized gcd_b.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("density", parents=[common], help="share of T_N with gcd_b = k")
    sub.add_parser("mean-value", parents=[common], help="window mean of Lambda_f")
    sub.add_parser("avg-gcd", parents=[common], help="average of gcd_b against its main term")
    z = sub.add_parser("zeta", parents=[common], help="Riemann zeta at real s > 1")
    z.add_argument("--s", type=float)
    for name, table in (("pattern", PATTERN_CMDS), ("graph", GRAPH_CMDS)):
        p = sub.add_parser(name, help=f"{name} subcommands")
        inner = p.add_subparsers(dest="action", required=True)
        for action in table:
            inner.add_parser(action, parents=[common])
    return parser


def _dispatch(a):
    if a.command == "pattern":
        return PATTERN_CMDS[a.action](a)
    if a.command == "graph":
        return GRAPH_CMDS[a.action](a)
    return {"density": cmd_density, "mean-value": cmd_mean_value, "avg-gcd": cmd_avg_gcd, "zeta": cmd_zeta}[a.command](a)


def _config(a) -> dict:
    # workers is left out on purpose: output must not depend on it
    skip = {"workers", "format", "dump_prefix"}
    return {k: (list(v) if isinstance(v, tuple) else v) for k, v in sorted(vars(a).items()) if k not in skip and v is not None}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    if a.workers is None:
        try:
            a.workers = default_workers()
        except ValueError as err:
            print(f"gcdb-lab: error: {err}", file=sys.stderr)
            return EXIT_ERROR
    name = a.command if a.command not in ("pattern", "graph") else f"{a.command} {a.action}"
    try:
        records, discrepancy, columns = _dispatch(a)
    except (CliError, arith.InvalidPoint, patterns.CompleteRectangleError, FactorizationTimeout, ValueError) as err:
        print(f"gcdb-lab {name}: error: {err}", file=sys.stderr)
        return EXIT_ERROR
    if a.format == "csv":
        if columns is None:
            print(f"gcdb-lab {name}: error: csv output is only available for numeric and verdict tables", file=sys.stderr)
            return EXIT_ERROR
        sys.stdout.write(to_csv(records, columns))
    else:
        sys.stdout.write(to_json(name, _config(a), records))
    if discrepancy:
        print(f"gcdb-lab {name}: discrepancy between stated and derived conditions", file=sys.stderr)
        return EXIT_DISCREPANCY
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
