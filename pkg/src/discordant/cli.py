"""Command-line interface.

Subcommands: ``simulate``, ``sweep``, ``exact``, ``chain``, ``analyze`` and
``params``.  Exit status is 0 on success, 2 on argument errors and 1 on
runtime errors.  Output files are UTF-8 with LF line endings.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import math
import sys
from fractions import Fraction
from typing import Sequence

from . import exact as exact_mod
from . import mc
from .analysis import cycle as cyc
from .analysis import lp, params
from .chains import hit_profile, pull_chain, push_chain
from .configuration import COLORING_KINDS, ColoringSpec, Configuration, coloring_opinions, default_coloring
from .graph import FAMILIES, Graph, generate, read
from .protocols import Protocol, as_protocol, run_to_consensus


class UsageError(Exception):
    """Invalid arguments detected after parsing."""


# -- helpers -----------------------------------------------------------------------


@contextlib.contextmanager
def _open_out(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _writer(out) -> csv.writer:
    return csv.writer(out, lineterminator="\n")


def _num(x) -> str:
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else str(x.numerator)
    if isinstance(x, float):
        return "nan" if math.isnan(x) else repr(x)
    return str(x)


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _sizes(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"sizes must be integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("sizes must not be empty")
    return vals


def _add_graph_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_argument_group("graph")
    g.add_argument("--family", choices=FAMILIES, help="graph family")
    g.add_argument("--n", type=int, help="family size parameter (leaves per side for double_star, clique size for barbell)")
    g.add_argument("--graph", metavar="FILE", help="graph text file (overrides --family/--n)")


def _add_coloring_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--coloring", choices=COLORING_KINDS, help="initial colouring (default depends on the family)")
    p.add_argument("--red", type=int, help="red count for --coloring random")
    p.add_argument("--vertex", type=int, default=0, help="blue vertex for --coloring all_but_one")
    p.add_argument("--coloring-seed", type=int, default=0, help="seed of random colourings")


def _add_protocol(p: argparse.ArgumentParser, choices=tuple(x.value for x in Protocol)) -> None:
    p.add_argument("--protocol", required=True, choices=choices)


def _add_output(p: argparse.ArgumentParser, formats: bool = False) -> None:
    p.add_argument("--output", "-o", metavar="FILE", help="output file (default stdout)")
    if formats:
        p.add_argument("--format", choices=("csv", "json"), default="csv")


def _graph_from_args(args) -> tuple[Graph, list[int] | None, str]:
    if args.graph:
        try:
            g, ops = read(args.graph)
        except OSError as exc:
            raise UsageError(f"cannot read graph file: {exc}") from None
        return g, ops, "custom"
    if args.family is None or args.n is None:
        raise UsageError("give --family and --n, or --graph")
    return generate(args.family, args.n), None, args.family


def _opinions_from_args(args, g: Graph, file_ops, family: str) -> list[int]:
    if args.coloring is None and file_ops is not None:
        return file_ops
    if args.coloring is None:
        if family == "custom":
            raise UsageError("custom graph needs an opinion line or --coloring")
        spec = default_coloring(family, args.coloring_seed)
    else:
        spec = ColoringSpec(args.coloring, red=args.red, vertex=args.vertex, seed=args.coloring_seed)
    return coloring_opinions(g, spec)


# -- subcommands -------------------------------------------------------------------


def _prep_simulate(args):
    g, ops, family = _graph_from_args(args)
    opinions = _opinions_from_args(args, g, ops, family)
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    mc.normalize(1.0, args.normalizer, g.n, 0)

    def run():
        c = Configuration(g, opinions)
        if args.trace:
            with open(args.trace, "w", encoding="utf-8", newline="\n") as fh:
                fh.write("t active change |K|\n")
                run_to_consensus(c, args.protocol, mc.trial_generator(args.seed, 0), args.cutoff, trace=fh)
        stats = mc.estimate_ET(g, c, args.protocol, args.trials, args.seed, args.cutoff, n_jobs=args.jobs)
        red = sum(1 for x in opinions if x == 0)
        norm = mc.normalize(stats.mean, args.normalizer, g.n, red)
        size = args.n if family != "custom" else g.n
        row = mc.SweepRow(family, args.protocol, size, args.trials, stats, args.normalizer, norm)
        with _open_out(args.output) as out:
            (mc.write_json if args.format == "json" else mc.write_csv)([row], out)

    return run


def _prep_sweep(args):
    if args.table1:
        def run():
            rows = mc.table1(args.trials, args.seed, args.cutoff, n_jobs=args.jobs)
            with _open_out(args.output) as out:
                (mc.write_json if args.format == "json" else mc.write_csv)(rows, out)

        return run
    if args.family is None or args.protocol is None or args.sizes is None:
        raise UsageError("sweep needs --family, --protocol and --sizes (or --table1)")
    if args.sizes != sorted(args.sizes):
        raise UsageError("--sizes must be ascending")
    for s in args.sizes:
        generate(args.family, s)
    mc.normalize(1.0, args.normalizer, 2, 1)
    spec = None
    if args.coloring:
        spec = ColoringSpec(args.coloring, red=args.red, vertex=args.vertex, seed=args.coloring_seed)
        for s in args.sizes:
            coloring_opinions(generate(args.family, s), spec)

    def run():
        rows = mc.sweep(args.family, args.protocol, args.sizes, args.trials, args.seed, args.cutoff,
                        args.normalizer, spec, n_jobs=args.jobs)
        with _open_out(args.output) as out:
            (mc.write_json if args.format == "json" else mc.write_csv)(rows, out)

    return run


def _bits(opinions) -> str:
    return "".join(str(int(x)) for x in opinions)


def _prep_exact(args):
    g, ops, family = _graph_from_args(args)
    opinions = _opinions_from_args(args, g, ops, family)
    method = args.method
    if method == "lumped" and family not in ("complete", "star"):
        raise UsageError("lumped solver exists for complete and star graphs only")
    if method == "auto":
        method = "lumped" if family in ("complete", "star") else "brute"
    if method == "lumped" and family == "complete" and g.n % 2:
        raise UsageError("lumped complete-graph solver needs even n")

    def run():
        dump = []
        if method == "lumped" and family == "complete":
            red = sum(1 for x in opinions if x == 0)
            chain = exact_mod.kn_chain(g.n, args.protocol)
            states = chain.N + 1
            et = exact_mod.lumped_kn_ET(g.n, args.protocol, red=red)
            if args.dump_states:
                cum = hit_profile(chain).cumulative
                dump = [(i, cum[-1] - (cum[i - 1] if i else 0.0)) for i in range(chain.N)] + [(chain.N, 0.0)]
        elif method == "lumped":
            centre = opinions[0]
            red = sum(1 for x in opinions if x == 0)
            trans = exact_mod.star_transitions(g.n, args.protocol)
            states = len(trans) + 2
            et = exact_mod.lumped_star_ET(g.n, args.protocol, (red, centre))
            if args.dump_states:
                system = exact_mod.absorbing_system(trans, {(g.n, 0), (0, 1)})
                h = system.solve()
                dump = sorted([(f"{r}:{'RB'[c]}", v) for (r, c), v in zip(system.states, h.tolist())])
                dump += [(f"{g.n}:R", 0.0), ("0:B", 0.0)]
        else:
            c = Configuration(g, opinions)
            if c.is_consensus():
                vec = {c.to_bits(): 0.0}
            else:
                vec = exact_mod.brute_force_vector(g, c, args.protocol)
            states = len(vec)
            et = vec[c.to_bits()]
            dump = sorted(((_bits((s >> v) & 1 for v in range(g.n)), val) for s, val in vec.items()))
        with _open_out(args.output) as out:
            w = _writer(out)
            w.writerow(["states", "ET"])
            w.writerow([states, _num(float(et))])
        if args.dump_states:
            with open(args.dump_states, "w", encoding="utf-8", newline="\n") as fh:
                w = _writer(fh)
                w.writerow(["state", "ET"])
                for s, val in dump:
                    w.writerow([s, _num(float(val))])

    return run


def _prep_chain(args):
    if args.n % 2 or args.n < 4:
        raise UsageError("--n must be even and >= 4")

    def run():
        build = push_chain if args.protocol == "push" else pull_chain
        prof = hit_profile(build(args.n, args.delta, exact=args.exact), method=args.method)
        with _open_out(args.output) as out:
            w = _writer(out)
            w.writerow(["i", "E_step", "E_cum"])
            for i, s, c in prof.rows():
                w.writerow([i, _num(s), _num(c)])

    return run


def _params_rows(g: Graph, family: str, size: int) -> list[list[str]]:
    phi = params.conductance(g)
    psi_v = params.psi_param(g) if g.is_connected() else float("nan")
    nu = params.nu_param(g)
    return [[family, size, g.n, _num(phi), _num(psi_v), _num(nu), _num(float(phi)), _num(float(psi_v)), _num(float(nu))]]


_PARAM_HEADER = ["family", "n", "vertices", "phi", "psi", "nu", "phi_float", "psi_float", "nu_float"]


def _prep_params_graph(g: Graph, family: str, size: int, output):
    if g.n > params.MAX_VERTICES:
        raise UsageError(f"parameter search limited to {params.MAX_VERTICES} vertices (got {g.n})")

    def run():
        rows = _params_rows(g, family, size)
        with _open_out(output) as out:
            w = _writer(out)
            w.writerow(_PARAM_HEADER)
            w.writerows(rows)

    return run


def _prep_params(args):
    g, _, family = _graph_from_args(args)
    return _prep_params_graph(g, family, args.n if family != "custom" else g.n, args.output)


def _prep_analyze(args):
    if args.drift_scan is not None:
        n = args.drift_scan
        if n < 3:
            raise UsageError("--drift-scan needs n >= 3")

        def run():
            report = cyc.drift_scan(n, reduce=args.reduce)
            with _open_out(args.output) as out:
                w = _writer(out)
                w.writerow(["check", "worst_margin", "configuration", "holds"])
                for key in sorted(report.worst):
                    margin, bits = report.worst[key]
                    w.writerow([key, _num(margin), _bits((bits >> v) & 1 for v in range(n)), margin <= cyc.TOL])
            status = "all inequalities hold" if report.ok else f"{len(report.violations)} violations"
            print(f"drift scan n={n}: {report.configurations} configurations, {status}", file=sys.stderr)
            if not report.ok:
                raise RuntimeError("drift inequalities violated")

        return run
    if args.lp is not None:
        n, r0 = args.lp
        if n < 1 or r0 < 1:
            raise UsageError("--lp needs positive n and r0")

        def run():
            inst = lp.cycle_lp_instance(n, r0)
            sol = lp.lp_bound(inst)
            with _open_out(args.output) as out:
                w = _writer(out)
                w.writerow(["r", "b", "c", "x", "y"])
                for r in range(inst.nu):
                    w.writerow([r + 1] + [_num(float(v[r])) for v in (inst.b, inst.c, sol.x, sol.y)])
            limit = lp.cycle_lp_limit(n)
            print(
                f"T* = {float(sol.value)!r} (primal == dual: {sol.primal == sol.dual}); "
                f"(10 pi^2/3) n^2 = {limit!r}; bound holds: {float(sol.value) <= limit}",
                file=sys.stderr,
            )

        return run
    family, size = args.params
    if family not in FAMILIES:
        raise UsageError(f"unknown family {family!r}; expected one of {FAMILIES}")
    try:
        size = int(size)
    except ValueError:
        raise UsageError(f"size must be an integer (got {size!r})") from None
    return _prep_params_graph(generate(family, size), family, size, args.output)


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="discordant", description="Discordant voting simulator and exact analysis.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="Monte Carlo estimate of E T for one graph")
    _add_graph_args(p)
    _add_coloring_args(p)
    _add_protocol(p)
    p.add_argument("--trials", type=_positive, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cutoff", type=_positive, default=mc.DEFAULT_CUTOFF)
    p.add_argument("--normalizer", choices=sorted(mc.NORMALIZERS), default="none")
    p.add_argument("--jobs", type=_positive, default=None, help=f"worker processes (default ${mc.THREADS_ENV} or 1)")
    p.add_argument("--trace", metavar="FILE", help="write the trajectory of trial 0 as 't active change |K|' lines")
    _add_output(p, formats=True)
    p.set_defaults(prep=_prep_simulate, parser=p)

    p = sub.add_parser("sweep", help="estimate E T over a range of sizes")
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--protocol", choices=tuple(x.value for x in Protocol))
    p.add_argument("--sizes", type=_sizes, help="ascending sizes, e.g. 50,100,200")
    _add_coloring_args(p)
    p.add_argument("--trials", type=_positive, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cutoff", type=_positive, default=mc.DEFAULT_CUTOFF)
    p.add_argument("--normalizer", choices=sorted(mc.NORMALIZERS), default="none")
    p.add_argument("--jobs", type=_positive, default=None)
    p.add_argument("--table1", action="store_true", help="run every family and protocol at desk-scale sizes")
    _add_output(p, formats=True)
    p.set_defaults(prep=_prep_sweep, parser=p)

    p = sub.add_parser("exact", help="exact E T by linear solve")
    _add_graph_args(p)
    _add_coloring_args(p)
    _add_protocol(p)
    p.add_argument("--method", choices=("auto", "brute", "lumped"), default="auto")
    p.add_argument("--dump-states", metavar="FILE", help="write the per-state vector as CSV")
    _add_output(p)
    p.set_defaults(prep=_prep_exact, parser=p)

    p = sub.add_parser("chain", help="hitting-time profile of the push or pull chain")
    p.add_argument("--n", type=int, required=True)
    _add_protocol(p, choices=("push", "pull"))
    p.add_argument("--delta", type=int, choices=(-1, 0, 1), default=0)
    p.add_argument("--method", choices=("recurrence", "balance", "product"), default="recurrence")
    p.add_argument("--exact", action="store_true", help="rational arithmetic")
    _add_output(p)
    p.set_defaults(prep=_prep_chain, parser=p)

    p = sub.add_parser("analyze", help="drift scan, LP bound or graph parameters")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--drift-scan", type=int, metavar="N")
    mode.add_argument("--lp", type=int, nargs=2, metavar=("N", "R0"))
    mode.add_argument("--params", nargs=2, metavar=("FAMILY", "N"))
    p.add_argument("--reduce", action="store_true", help="drift scan up to rotation and colour swap")
    _add_output(p)
    p.set_defaults(prep=_prep_analyze, parser=p)

    p = sub.add_parser("params", help="conductance, Psi and nu of a graph")
    _add_graph_args(p)
    _add_output(p)
    p.set_defaults(prep=_prep_params, parser=p)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "protocol", None):
            as_protocol(args.protocol)
        run = args.prep(args)
    except (UsageError, ValueError) as exc:
        args.parser.error(str(exc))  # exits with status 2
    try:
        run()
    except (exact_mod.StateSpaceError, exact_mod.SingularSystemError, ValueError, RuntimeError, OSError) as exc:
        print(f"discordant: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
