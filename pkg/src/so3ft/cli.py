"""Command-line interface: ``so3ft <subcommand> ...``.

Exit status is 0 on success, 2 for invalid input (bad flags, malformed
files, symmetry violations) and 1 for anything else.
"""
from __future__ import annotations

import argparse
import contextlib
import logging
import sys

import numpy as np

from . import _backend
from .analysis import counterexample_regularity_report
from .experiments import KERNELS, accuracy_run, bench_run, loglog_slope
from .formats import FormatError, read_harmonic, read_nodes, read_values, write_harmonic, write_nodes, write_values
from .nsoft import make_nsoft_plan, nsoft_adjoint, nsoft_forward
from .quadrature import analyze, make_rule
from .symmetry import SymmetryError, SymmetrySpec, symmetrize
from .wigner import make_plan

CSV_HEADER = "# so3ft-csv v1"

log = logging.getLogger("so3ft")


class ValidationError(ValueError):
    pass


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals or min(vals) < 0:
        raise argparse.ArgumentTypeError("need at least one nonnegative integer")
    return vals


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


@contextlib.contextmanager
def _output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _spec(args) -> SymmetrySpec:
    return SymmetrySpec(args.right, args.left, args.real, args.inversion)


def _rule_nodes_match(rule, nodes) -> None:
    if len(nodes) != rule.size:
        raise ValidationError(f"values file has {len(nodes)} nodes, rule has {rule.size}")
    if np.abs(nodes.angles - rule.nodes.angles).max() > 1e-12:
        raise ValidationError("values file nodes are not the rule nodes in rule order")


# ---------------------------------------------------------------------------


def cmd_grid(args) -> int:
    rule = make_rule(args.bandwidth, args.flavor)
    with _output(args.out) as fh:
        write_nodes(rule.nodes, fh, rule.weights)
    return 0


def cmd_transform(args) -> int:
    fhat = read_harmonic(args.coefficients)
    N = fhat.bandwidth
    if args.nodes:
        nodes, _ = read_nodes(args.nodes)
        plan = make_nsoft_plan(N, nodes=nodes, backend=args.backend, threads=args.threads)
    else:
        rule = make_rule(N, args.flavor)
        nodes = rule.nodes
        plan = make_nsoft_plan(N, rule=rule, backend=args.backend, threads=args.threads)
    values = nsoft_forward(plan, fhat)
    with _output(args.out) as fh:
        write_values(nodes, values, fh)
    return 0


def cmd_adjoint(args) -> int:
    nodes, values = read_values(args.values)
    N = args.bandwidth
    weights = None
    if args.weights:
        wnodes, weights = read_nodes(args.weights)
        if weights is None:
            raise ValidationError("weights file has no weight column")
        if len(wnodes) != len(nodes) or np.abs(wnodes.angles - nodes.angles).max() > 1e-12:
            raise ValidationError("weights file nodes differ from the values file nodes")
    plan = make_nsoft_plan(N, nodes=nodes, backend=args.backend, threads=args.threads)
    fhat = nsoft_adjoint(plan, values, weights)
    with _output(args.out) as fh:
        write_harmonic(fhat, fh)
    return 0


def cmd_analyze(args) -> int:
    nodes, values = read_values(args.values)
    rule = make_rule(args.bandwidth, args.flavor)
    _rule_nodes_match(rule, nodes)
    plan = make_plan(args.bandwidth, backend=args.backend, threads=args.threads)
    with _output(args.out) as fh:
        write_harmonic(analyze(rule, values, plan), fh)
    return 0


def cmd_symmetrize(args) -> int:
    fhat = read_harmonic(args.coefficients)
    with _output(args.out) as fh:
        write_harmonic(symmetrize(fhat, _spec(args)), fh)
    return 0


def cmd_bench(args) -> int:
    kernels = args.kernels or list(KERNELS)
    rows = []
    for N in args.bandwidths:
        rows.extend(bench_run(N, args.reps, args.seed, kernels, args.backend, args.threads))
    with _output(args.out) as fh:
        fh.write(CSV_HEADER + "\n")
        fh.write("N,kernel,seconds,threads\n")
        for r in rows:
            fh.write(f"{r.N},{r.kernel},{r.seconds!r},{r.threads}\n")
        if len(args.bandwidths) >= 2:
            for k in kernels:
                sel = [r for r in rows if r.kernel == k]
                slope = loglog_slope([r.N for r in sel], [r.seconds for r in sel])
                fh.write(f"# slope {k} {slope:.4f}\n")
    return 0


def cmd_accuracy(args) -> int:
    rng = np.random.default_rng(args.seed)
    with _output(args.out) as fh:
        fh.write(CSV_HEADER + "\n")
        fh.write("N,E_max,E_var\n")
        for N in args.bandwidths:
            row = accuracy_run(N, args.trials, rng, args.flavor, args.backend, args.threads)
            fh.write(f"{row.N},{row.E_max!r},{row.E_var!r}\n")
    return 0


def cmd_analyze_regularity(args) -> int:
    rep = counterexample_regularity_report(args.bandwidth, args.s)
    with _output(args.out) as fh:
        fh.write(CSV_HEADER + "\n")
        lo, hi = (float(rep.xi.min()), float(rep.xi.max())) if rep.xi.size else (float("nan"),) * 2
        fh.write(f"# xi_min {lo!r} xi_max {hi!r} inside_from {rep.xi_inside_from}\n")
        fh.write("s,n,term,partial_norm,xi\n")
        for s, n, term, pn, xi in rep.rows():
            fh.write(f"{s!r},{n},{term!r},{pn!r},{xi!r}\n")
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None, help="cap on kernel threads (default: all cores)")
    common.add_argument("--backend", choices=sorted(_backend.BACKENDS), default=None)
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    sym = argparse.ArgumentParser(add_help=False)
    sym.add_argument("--right", default="C1", help="right point group, e.g. C4, D2, T, O, I")
    sym.add_argument("--left", default="C1", help="left point group")
    sym.add_argument("--real", action="store_true", help="real-valued function")
    sym.add_argument("--inversion", action="store_true", help="inversion symmetry f(R) = f(R^-1)")

    p = argparse.ArgumentParser(prog="so3ft", description="SO(3) Fourier transforms via the double Fourier sphere.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("grid", parents=[common], help="write quadrature nodes and weights")
    g.add_argument("--bandwidth", type=int, required=True)
    g.add_argument("--flavor", choices=["cc", "gl"], default="cc")
    g.set_defaults(func=cmd_grid)

    t = sub.add_parser("transform", parents=[common], help="evaluate a coefficient file at nodes")
    t.add_argument("coefficients")
    src = t.add_mutually_exclusive_group()
    src.add_argument("--nodes", help="SO3FT NODES file")
    src.add_argument("--flavor", choices=["cc", "gl"], default="cc", help="use the quadrature grid")
    t.set_defaults(func=cmd_transform)

    a = sub.add_parser("adjoint", parents=[common], help="adjoint transform of a values file")
    a.add_argument("values")
    a.add_argument("--bandwidth", type=int, required=True)
    a.add_argument("--weights", help="SO3FT NODES file with a weight column, applied before the adjoint")
    a.set_defaults(func=cmd_adjoint)

    z = sub.add_parser("analyze", parents=[common], help="quadrature recovery of coefficients from grid values")
    z.add_argument("values")
    z.add_argument("--bandwidth", type=int, required=True)
    z.add_argument("--flavor", choices=["cc", "gl"], default="cc")
    z.set_defaults(func=cmd_analyze)

    s = sub.add_parser("symmetrize", parents=[common, sym], help="project coefficients onto a symmetry class")
    s.add_argument("coefficients")
    s.set_defaults(func=cmd_symmetrize)

    b = sub.add_parser("bench", parents=[common], help="median kernel timings as CSV")
    b.add_argument("--bandwidths", type=_int_list, default=[32, 48, 64, 96, 128])
    b.add_argument("--reps", type=int, default=3)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--kernels", type=lambda x: x.split(","), default=None,
                   help=f"comma-separated subset of {','.join(KERNELS)},synthesis_naive")
    b.set_defaults(func=cmd_bench)

    c = sub.add_parser("accuracy", parents=[common], help="roundtrip error E_l1->l2 as CSV")
    c.add_argument("--bandwidths", type=_int_list, default=[4, 8, 16, 32, 64])
    c.add_argument("--trials", type=int, default=10)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--flavor", choices=["cc", "gl"], default="cc")
    c.set_defaults(func=cmd_accuracy)

    r = sub.add_parser("analyze-regularity", parents=[common], help="counterexample regularity report as CSV")
    r.add_argument("--bandwidth", type=int, default=400)
    r.add_argument("--s", type=_float_list, default=[0.25, 0.4, 0.5, 0.75])
    r.set_defaults(func=cmd_analyze_regularity)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    for name in ("bandwidth", "threads", "trials", "reps"):
        v = getattr(args, name, None)
        if v is not None and v < (1 if name != "bandwidth" else 0):
            print(f"so3ft: error: --{name} out of range: {v}", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except (FormatError, SymmetryError, ValidationError, ValueError, OSError) as exc:
        print(f"so3ft: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - reported, not handled
        log.debug("internal error", exc_info=True)
        print(f"so3ft: internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
