"""Command-line front end: ``rigidcuts <subcommand> ...``.

Exit codes: 0 success, 2 usage or parameter error, 3 instance too large,
1 contract violation or other internal error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from rigidcuts import graphio
from rigidcuts.cuts import critical_edges, enumerate_cuts, max_cut
from rigidcuts.equivalence import core_meets_alpha, equivalence
from rigidcuts.errors import ContractError, DeskScaleError, ParameterError, RigidCutsError
from rigidcuts.experiments import config_from_mapping, parse_config, run_experiment
from rigidcuts.extremal import (copy_hypergraph, delta_bound_check, janson_delta, janson_mu,
                                max_h_free_subgraph, partial_hypergraph)
from rigidcuts.graph import Graph, RngSeed, sample_gnm, sample_gnp
from rigidcuts.patterns import BUILTINS, Pattern, builtin, is_colourable

PROG = "rigidcuts"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), allow_nan=False) + "\n"


def _pair(text: str) -> tuple[int, int]:
    try:
        u, v = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a pair 'u,v', got {text!r}") from None
    return u, v


def _load_graph(args) -> Graph:
    fmt = None if args.input_format == "auto" else args.input_format
    if args.graph == "-":
        return graphio.parse_graph(sys.stdin.read(), fmt)
    return graphio.read_graph(args.graph, fmt)


def _load_pattern(args) -> Pattern:
    if args.pattern_file:
        return Pattern(graphio.read_graph(args.pattern_file, "edgelist"))
    return builtin(args.pattern)


def _add_graph(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", required=True, help="graph file (graph6 or edge list), '-' for stdin")
    p.add_argument("--input-format", choices=("auto", "graph6", "edgelist"), default="auto",
                   help="input graph format (default: detect)")


def _add_pattern(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--pattern", default="K3", choices=sorted(BUILTINS), help="built-in pattern (default: K3)")
    g.add_argument("--pattern-file", help="pattern as an edge-list file")


def _add_format(p: argparse.ArgumentParser, choices=("plain", "json"), default="plain") -> None:
    p.add_argument("--format", choices=choices, default=default, help=f"output format (default: {default})")


def _edges_text(edges) -> str:
    return "".join(f"{u} {v}\n" for u, v in sorted(edges))


# -- subcommands ---------------------------------------------------------------

def cmd_gen(args) -> str:
    seed = RngSeed(args.seed, args.stream)
    if (args.m is None) == (args.p is None):
        raise ParameterError("give exactly one of --m and --p")
    if args.model == "gnm":
        if args.m is None:
            raise ParameterError("model gnm needs --m")
        G = sample_gnm(args.n, args.m, seed)
    else:
        if args.p is None:
            raise ParameterError("model gnp needs --p")
        G = sample_gnp(args.n, args.p, seed)
    return graphio.format_graph(G, args.format)


def cmd_maxcut(args) -> str:
    G = _load_graph(args)
    cut = max_cut(G, args.r)
    if args.format == "json":
        return _dump({"n": G.n, "m": G.m, "r": args.r, "b": cut.size, "cut": list(cut.assign)})
    return f"{cut.size}\n"


def cmd_cuts(args) -> str:
    G = _load_graph(args)
    fam = enumerate_cuts(G, args.r, args.d, naive=args.naive)
    if args.format == "json":
        return _dump({"graph": fam.graph_digest, "r": fam.r, "d": fam.d, "b": fam.b,
                      "cuts": [c.to_record() for c in fam.cuts]})
    return fam.to_jsonl()


def cmd_eq(args) -> str:
    G = _load_graph(args)
    S = equivalence(G, args.r, args.d)
    if args.format == "plain":
        return "".join(" ".join(map(str, sorted(X))) + "\n" for X in S.components)
    return S.to_json() + "\n"


def cmd_core(args) -> str:
    G = _load_graph(args)
    S = equivalence(G, args.r, args.d)
    out = {"r": S.r, "d": S.d, "core": None if S.core is None else [sorted(X) for X in S.core], "x_r": S.x_r}
    if args.alpha is not None:
        if not 0 <= args.alpha < 1:
            raise ParameterError("--alpha must lie in [0, 1)")
        out["alpha"] = args.alpha
        out["in_core_class"] = core_meets_alpha(S, args.alpha)
    return _dump(out)


def cmd_crit(args) -> str:
    G = _load_graph(args)
    crit = critical_edges(G, args.r)
    if args.format == "json":
        return _dump({"r": args.r, "critical": [list(e) for e in sorted(crit)]})
    return _edges_text(crit)


def cmd_hconst(args) -> str:
    return _dump(_load_pattern(args).report())


def _hfree(args):
    G = _load_graph(args)
    P = _load_pattern(args)
    size, witnesses = max_h_free_subgraph(G, P)
    return G, P, size, witnesses


def cmd_hfree(args) -> str:
    G, _, size, witnesses = _hfree(args)
    if args.format == "graph6":
        return graphio.write_graph6_list(Graph.from_edges(G.n, W) for W in witnesses)
    return _dump({"size": size, "count": len(witnesses),
                  "witnesses": [[list(e) for e in sorted(W)] for W in witnesses]})


def cmd_simonovits(args) -> str:
    G, P, size, witnesses = _hfree(args)
    ok = all(is_colourable(Graph.from_edges(G.n, W), P.chi - 1) for W in witnesses)
    if args.format == "json":
        return _dump({"simonovits": ok, "size": size, "count": len(witnesses), "parts": P.chi - 1})
    return f"{str(ok).lower()}\n"


def cmd_janson(args) -> str:
    P = _load_pattern(args)
    if not 0 <= args.p <= 1:
        raise ParameterError("--p must lie in [0, 1]")
    if args.f is not None:
        if args.e is None:
            raise ParameterError("--f requires --e")
        lhs, scale = delta_bound_check(P, args.e, args.f, args.n, args.p)
        return _dump({"n": args.n, "p": args.p, "e": list(args.e), "f": list(args.f), "delta": lhs,
                      "scale": scale, "ratio": lhs / scale if scale else None})
    hg = partial_hypergraph(args.n, P, args.e) if args.e is not None else copy_hypergraph(args.n, P)
    return _dump({"n": args.n, "p": args.p, "e": list(args.e) if args.e else None, "members": len(hg),
                  "mu": janson_mu(hg, args.p), "delta": janson_delta(hg, args.p)})


_EXPERIMENT_FLAGS = ("kind", "n", "m", "p", "grid", "r", "d", "alpha", "eps", "k", "trials", "seed", "C",
                     "pattern", "samples", "exhaustive_n")


def cmd_experiment(args) -> str:
    values: dict[str, str] = {}
    if args.config:
        cfg_text = Path(args.config).read_text()
        base = parse_config(cfg_text)
        values = {k: ",".join(map(str, v)) if isinstance(v, (list, tuple)) else str(v)
                  for k, v in base.to_dict().items() if v is not None}
        has_seed = any(line.split("#", 1)[0].split("=", 1)[0].strip() == "seed"
                       for line in cfg_text.splitlines() if "=" in line.split("#", 1)[0])
    else:
        has_seed = False
    for key in _EXPERIMENT_FLAGS:
        val = getattr(args, "exp_" + key)
        if val is not None:
            values[key] = val
    if args.exp_seed is None and not has_seed:
        raise UsageError(f"{PROG} experiment: error: a seed is required (--seed or 'seed' in the config)")
    values["keep_records"] = "true" if args.records else "false"
    cfg = config_from_mapping(values)
    summary = run_experiment(cfg, threads=args.threads)
    if args.out_json:
        Path(args.out_json).write_text(summary.to_json())
    if args.out_csv:
        Path(args.out_csv).write_text(summary.to_csv())
    if args.records:
        Path(args.records).write_text(summary.records_jsonl())
    return summary.to_csv() if args.format == "csv" else summary.to_json()


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROG, description="Exact max-cut structure, pattern constants and experiments.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("gen", help="sample a random graph", description="Sample G(n,m) or G(n,p).")
    p.add_argument("--model", choices=("gnm", "gnp"), required=True, help="random graph model")
    p.add_argument("--n", type=int, required=True, help="number of vertices")
    p.add_argument("--m", type=int, help="number of edges (gnm)")
    p.add_argument("--p", type=float, help="edge probability (gnp)")
    p.add_argument("--seed", type=int, required=True, help="master seed (required)")
    p.add_argument("--stream", type=int, default=0, help="stream index under the seed (default: 0)")
    _add_format(p, ("graph6", "edgelist"), "graph6")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("maxcut", help="maximum r-cut", description="Exact maximum r-cut size.")
    _add_graph(p)
    p.add_argument("--r", type=int, default=2, help="number of parts (default: 2)")
    _add_format(p)
    p.set_defaults(func=cmd_maxcut)

    p = sub.add_parser("cuts", help="cuts within a deficit budget",
                       description="All canonical r-cuts with deficit at most d.")
    _add_graph(p)
    p.add_argument("--r", type=int, default=2, help="number of parts (default: 2)")
    p.add_argument("--d", type=int, default=0, help="deficit budget (default: 0)")
    p.add_argument("--naive", action="store_true", help="brute-force enumeration (small n only)")
    _add_format(p, ("jsonl", "json"), "jsonl")
    p.set_defaults(func=cmd_cuts)

    p = sub.add_parser("eq", help="(d,r)-equivalence classes", description="(d,r)-components and core.")
    _add_graph(p)
    p.add_argument("--r", type=int, default=2, help="number of parts (default: 2)")
    p.add_argument("--d", type=int, default=0, help="deficit budget, -1 for one fixed max cut (default: 0)")
    _add_format(p, ("json", "plain"), "json")
    p.set_defaults(func=cmd_eq)

    p = sub.add_parser("core", help="(d,r)-core and x_r", description="(d,r)-core, x_r and CORE membership.")
    _add_graph(p)
    p.add_argument("--r", type=int, default=2, help="number of parts (default: 2)")
    p.add_argument("--d", type=int, default=0, help="deficit budget (default: 0)")
    p.add_argument("--alpha", type=float, help="also test membership in CORE_d^r(alpha)")
    p.set_defaults(func=cmd_core)

    p = sub.add_parser("crit", help="r-critical edges", description="Edges crossing every maximum r-cut.")
    _add_graph(p)
    p.add_argument("--r", type=int, default=2, help="number of parts (default: 2)")
    _add_format(p)
    p.set_defaults(func=cmd_crit)

    p = sub.add_parser("hconst", help="pattern constants", description="Constants of a pattern graph H.")
    _add_pattern(p)
    p.set_defaults(func=cmd_hconst)

    p = sub.add_parser("hfree", help="maximum H-free subgraphs",
                       description="Largest H-free subgraphs of a graph and all maximum witnesses.")
    _add_graph(p)
    _add_pattern(p)
    _add_format(p, ("json", "graph6"), "json")
    p.set_defaults(func=cmd_hfree)

    p = sub.add_parser("simonovits", help="H-Simonovits test",
                       description="Whether every largest H-free subgraph is (chi(H)-1)-partite.")
    _add_graph(p)
    _add_pattern(p)
    _add_format(p)
    p.set_defaults(func=cmd_simonovits)

    p = sub.add_parser("janson", help="Janson sums of copy hypergraphs",
                       description="mu_p and Delta_p of the copy hypergraph of H in K_n or of its link at e.")
    _add_pattern(p)
    p.add_argument("--n", type=int, required=True, help="number of vertices of K_n")
    p.add_argument("--p", type=float, required=True, help="probability")
    p.add_argument("--e", type=_pair, help="link pair 'u,v'")
    p.add_argument("--f", type=_pair, help="second link pair 'u,v' (reports the Delta_p bound check)")
    p.set_defaults(func=cmd_janson)

    p = sub.add_parser("experiment", help="run a Monte Carlo experiment",
                       description="Run a seeded experiment from a config file and/or flags.")
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--kind", dest="exp_kind", help="rigidity, core, xr, maxcut, balance, simonovits, boundary")
    p.add_argument("--n", dest="exp_n", help="vertex counts, comma separated")
    p.add_argument("--m", dest="exp_m", help="edge counts, comma separated")
    p.add_argument("--p", dest="exp_p", help="edge probabilities, comma separated")
    p.add_argument("--grid", dest="exp_grid", help="'product' or 'zip'")
    p.add_argument("--r", dest="exp_r", help="number of parts")
    p.add_argument("--d", dest="exp_d", help="deficit budget")
    p.add_argument("--alpha", dest="exp_alpha", help="core tolerance alpha")
    p.add_argument("--eps", dest="exp_eps", help="rigidity / balance tolerance")
    p.add_argument("--k", dest="exp_k", help="neighbourhood set size")
    p.add_argument("--trials", dest="exp_trials", help="trials per grid point")
    p.add_argument("--seed", dest="exp_seed", help="master seed (required here or in the config)")
    p.add_argument("--C", dest="exp_C", help="constant used in reported theorem bounds")
    p.add_argument("--pattern", dest="exp_pattern", help="pattern for the simonovits probe")
    p.add_argument("--samples", dest="exp_samples", help="random test sets per trial (boundary)")
    p.add_argument("--exhaustive-n", dest="exp_exhaustive_n", help="largest n for exhaustive sets (boundary)")
    p.add_argument("--threads", type=int, default=1, help="worker threads; output does not depend on it")
    p.add_argument("--out-json", help="write the JSON summary here")
    p.add_argument("--out-csv", help="write the CSV summary here")
    p.add_argument("--records", help="write per-trial records (JSON lines) here")
    _add_format(p, ("json", "csv"), "json")
    p.set_defaults(func=cmd_experiment)
    return parser


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        output = args.func(args)
    except UsageError as exc:
        print(exc, file=stderr)
        return 2
    except ParameterError as exc:
        print(f"{PROG}: parameter error: {exc}", file=stderr)
        return 2
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"{PROG}: {exc}", file=stderr)
        return 2
    except DeskScaleError as exc:
        print(f"{PROG}: instance too large: {exc}", file=stderr)
        return 3
    except (ContractError, RigidCutsError) as exc:
        print(f"{PROG}: contract violation: {exc}", file=stderr)
        return 1
    stdout.write(output)
    return 0


def main(argv: list[str] | None = None) -> int:
    try:
        return run(argv)
    except SystemExit as exc:  # --help exits through argparse
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
