"""``ftcut`` command-line front end.

Every run reads one graph (a file, ``-`` for stdin, or a generated family),
runs one pipeline and prints one report.  Exit codes: 0 success, 2 bad input
or exceeded caps, 3 numerical or internal failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .errors import FtcutError, NumericalError, InvariantViolation
from .exact import (
    EXACT_MAX_CUT,
    STABLE_HALF_MAX_CUT,
    EnumerationCaps,
    exact_aftcut,
    exact_max_cut,
    exact_oftcut_value,
)
from .graph import WeightedGraph, cut_value, dump_graph, ft_value, load_graph, max_fault_degree
from .instances import FAMILIES, FamilySpec, generate, star_reduction, uniform_random_cut_ft
from .kfault import aftcut_k_pipeline
from .local import local_search_single_fault
from .lp import EllipsoidConfig
from .oblivious import solve_oftcut

ORACLES = {"exact": EXACT_MAX_CUT, "stable-half": STABLE_HALF_MAX_CUT}
RANDOMCUT_COLUMNS = ("family", "n", "k", "trials", "mean", "stderr", "phi_star", "ratio")
PHI_STAR_MAX_N = 20


def _number(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else float(x)
    return x


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return v


def _open_unit(text: str) -> float:
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"expected a value strictly between 0 and 1, got {text}")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("graph", nargs="?", help="graph file ('-' for stdin); omit when using --family")
    g = p.add_argument_group("generated input")
    g.add_argument("--family", choices=FAMILIES, help="generate the input instead of reading a file")
    g.add_argument("-n", type=_nonneg_int, default=0, help="family size parameter")
    g.add_argument("--triangles", type=_positive_int, default=2, help="triangle count for shared-triangles")
    g.add_argument("--p", type=float, default=0.3, help="extra-edge probability for random-connected")
    g.add_argument("--max-weight", type=_positive_int, default=1, help="largest random edge weight")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=0, help="seed for every random choice")
    p.add_argument("--max-n", type=_positive_int, default=26, help="enumeration cap on vertices")
    p.add_argument("--max-fault-sets", type=_positive_int, default=20_000, help="cap on C(n,k)")
    p.add_argument("--max-lp-n", type=_positive_int, default=14, help="cap on n for the full configuration LP")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ftcut", description="Fault tolerant max-cut toolkit")
    parser.add_argument("--version", action="version", version=f"ftcut {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="brute-force optimum")
    p.add_argument("--mode", choices=("maxcut", "adaptive", "oblivious"), default="adaptive")
    p.add_argument("-k", type=_nonneg_int, default=1)
    _add_input(p)
    _add_common(p)

    p = sub.add_parser("aftcut-local", help="single-fault local search (unweighted)")
    p.add_argument("--compare", action="store_true", help="also report the brute-force optimum")
    _add_input(p)
    _add_common(p)

    p = sub.add_parser("aftcut-k", help="k-fault heavy-vertex pipeline (unweighted)")
    p.add_argument("-k", type=_positive_int, default=1)
    p.add_argument("--eps", type=_open_unit, default=0.1)
    p.add_argument("--compare", action="store_true", help="also report the brute-force optimum")
    _add_input(p)
    _add_common(p)

    p = sub.add_parser("oftcut", help="oblivious-adversary distribution via ellipsoid + LP")
    p.add_argument("-k", type=_positive_int, default=1)
    p.add_argument("--eps-y", type=_positive_float, default=1e-4)
    p.add_argument("--oracle", choices=tuple(ORACLES), default="exact")
    p.add_argument("--eps-vol", type=_positive_float, default=1e-8)
    _add_input(p)
    _add_common(p)

    p = sub.add_parser("randomcut", help="fault tolerant value of a uniform random cut")
    p.add_argument("-k", type=_nonneg_int, default=1)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="average over all 2^n cuts")
    mode.add_argument("--trials", type=_positive_int, help="Monte-Carlo sample count")
    p.add_argument("--no-phi-star", action="store_true", help="skip the brute-force optimum")
    _add_input(p)
    _add_common(p)

    p = sub.add_parser("reduce", help="star reduction of an unweighted graph")
    p.add_argument("-o", "--output", help="write the graph here instead of stdout")
    _add_input(p)
    _add_common(p)

    p = sub.add_parser("gen", help="generate a family member")
    p.add_argument("-o", "--output", help="write the graph here instead of stdout")
    _add_input(p)
    _add_common(p)
    return parser


def _caps(args) -> EnumerationCaps:
    return EnumerationCaps(args.max_n, args.max_fault_sets, args.max_lp_n)


def _family_spec(args) -> FamilySpec:
    return FamilySpec(args.family, n=args.n, t=args.triangles, p=args.p, seed=args.seed, max_weight=args.max_weight)


def _read_input(args) -> tuple[WeightedGraph, str]:
    if args.family and args.graph:
        raise _UsageError("give either a graph file or --family, not both")
    if args.family:
        return generate(_family_spec(args)), args.family
    if not args.graph:
        raise _UsageError("no input: give a graph file or --family")
    if args.graph == "-":
        return load_graph(sys.stdin.read()), "stdin"
    try:
        with open(args.graph, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _UsageError(f"cannot read {args.graph}: {exc.strerror}") from exc
    return load_graph(text), args.graph


class _UsageError(FtcutError, ValueError):
    stage = "input"


def _check_k(G: WeightedGraph, k: int) -> None:
    if k > G.n:
        raise _UsageError(f"fault budget k={k} exceeds vertex count {G.n}")


def _run_exact(args, G, source) -> dict:
    caps = _caps(args)
    out = {"command": "exact", "mode": args.mode, "input": source, "n": G.n, "m": G.m}
    if args.mode == "maxcut":
        S, val = exact_max_cut(G, caps)
        out.update(cut=S.members(), max_cut=val)
        return out
    _check_k(G, args.k)
    out["k"] = args.k
    if args.mode == "adaptive":
        S, val = exact_aftcut(G, args.k, caps)
        out.update(cut=S.members(), phi_star=val, cut_value=cut_value(G, S))
        return out
    D, mu = exact_oftcut_value(G, args.k, caps)
    out.update(mu_star=mu, support=[{"cut": S.members(), "p": float(p)} for S, p in D.support])
    return out


def _run_local(args, G, source) -> dict:
    S, trace = local_search_single_fault(G)
    phi = ft_value(G, S, 1)
    out = {
        "command": "aftcut-local",
        "input": source,
        "n": G.n,
        "m": G.m,
        "max_degree": G.max_degree,
        "cut": S.members(),
        "phi": phi,
        "target": _number(Fraction(G.m - G.max_degree, 2)),
        "iterations": len(trace),
        "trace": trace.to_json(),
    }
    if args.compare:
        star = exact_aftcut(G, 1, _caps(args))[1]
        out["phi_star"] = star
        out["ratio"] = 1.0 if star == 0 else phi / star
    return out


def _run_kfault(args, G, source) -> dict:
    _check_k(G, args.k)
    rep = aftcut_k_pipeline(G, args.k, args.eps, caps=_caps(args))
    if args.compare:
        rep.phi_star = exact_aftcut(G, args.k, _caps(args))[1]
    out = {"command": "aftcut-k", "input": source, "n": G.n, "m": G.m, "k": args.k, "eps": args.eps}
    out.update(rep.to_json())
    return out


def _run_oftcut(args, G, source) -> dict:
    _check_k(G, args.k)
    cfg = EllipsoidConfig(eps_vol=args.eps_vol)
    rep = solve_oftcut(G, args.k, args.eps_y, ORACLES[args.oracle], cfg, _caps(args))
    out = {"command": "oftcut", "input": source, "n": G.n, "m": G.m, "k": args.k, "oracle": args.oracle}
    out.update(rep.to_json())
    return out


def _run_randomcut(args, G, source) -> dict:
    _check_k(G, args.k)
    if args.trials:
        res = uniform_random_cut_ft(G, args.k, "monte-carlo", trials=args.trials, seed=args.seed)
    else:
        res = uniform_random_cut_ft(G, args.k, "exact")
    phi_star = None
    if not args.no_phi_star and G.n <= min(PHI_STAR_MAX_N, args.max_n):
        phi_star = exact_aftcut(G, args.k, _caps(args))[1]
    mean = _number(res.mean)
    out = {
        "command": "randomcut",
        "input": source,
        "family": args.family or "file",
        "n": G.n,
        "m": G.m,
        "k": args.k,
        "exact": res.exact,
        "trials": res.trials,
        "mean": mean,
        "stderr": res.stderr,
        "uniform_distribution_value": _number(Fraction(G.total_weight - max_fault_degree(G, args.k), 2)),
        "phi_star": phi_star,
        "ratio": None if not phi_star else float(res.mean) / phi_star,
    }
    if res.exact and isinstance(res.mean, Fraction):
        out["mean_fraction"] = str(res.mean)
    return out


def _run_graph_output(args, G, source) -> tuple[dict, Optional[str]]:
    text = dump_graph(G)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        return {"command": args.command, "input": source, "output": args.output, "n": G.n, "m": G.m,
                "total_weight": G.total_weight}, None
    return {}, text


def _render(report: dict, fmt: str, command: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=False)
    buf = io.StringIO()
    if command == "randomcut":
        cols = list(RANDOMCUT_COLUMNS)
    else:
        cols = [k for k, v in report.items() if not isinstance(v, (list, dict))]
    writer = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    writer.writerow({c: ("" if report.get(c) is None else report.get(c)) for c in cols})
    return buf.getvalue().rstrip("\n")


RUNNERS = {
    "exact": _run_exact,
    "aftcut-local": _run_local,
    "aftcut-k": _run_kfault,
    "oftcut": _run_oftcut,
    "randomcut": _run_randomcut,
}


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    """Parse ``argv``, execute, print the report; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return int(exc.code or 0)
    try:
        if args.command == "gen":
            if not args.family:
                raise _UsageError("gen needs --family")
            if args.graph:
                raise _UsageError("gen takes no graph file")
            G, source = generate(_family_spec(args)), args.family
        else:
            G, source = _read_input(args)
        if args.command == "reduce":
            G = star_reduction(G)
        if args.command in ("gen", "reduce"):
            report, text = _run_graph_output(args, G, source)
            print(text.rstrip("\n") if text is not None else _render(report, args.format, args.command), file=stdout)
            return 0
        report = RUNNERS[args.command](args, G, source)
        print(_render(report, args.format, args.command), file=stdout)
        return 0
    except (NumericalError, InvariantViolation) as exc:
        print(f"ftcut: {exc.stage} failed: {exc}", file=stderr)
        return 3
    except FtcutError as exc:
        print(f"ftcut: {exc.stage} failed: {exc}", file=stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
