"""Command-line entry point: ``entgeo measure|verify|random|monogamy|optimize``.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 unsupported
measure/method/state combination. Results go to stdout as JSON (CSV for
``monogamy``); diagnostics go to stderr.
"""
import argparse
import dataclasses
import json
import os
import sys

import numpy as np

from . import __version__
from .errors import DimMismatch, EntgeoError, NotBipartite, NotPure, NotQubits
from .measures import (analytic_report, concurrence_pure, dbar_sep_two_qubit, dsep_prime_pure, dsep_prime_x_state,
                       monogamy_terms, wootters_concurrence, x_state_params)
from .optimizer import OptimizerConfig, variational_distance
from .states import load_state, named_state, random_density, random_pure, save_state
from .verify import SUITE_NAMES, Tolerances, run_suite

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_UNSUPPORTED = 0, 1, 2, 3
MEASURES = ("dsep-prime", "dsep", "dbar", "dfsep-prime", "concurrence")
VARIATIONAL_MODE = {"dsep-prime": "sep-cone", "dsep": "sep-normalized", "dfsep-prime": "fsep-cone"}
# raised by analytic routines when the state is outside their scope
OUT_OF_SCOPE = (NotPure, NotBipartite, NotQubits, DimMismatch)


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit_json(obj, out=None):
    out = out or sys.stdout
    out.write(json.dumps(obj, indent=2, sort_keys=True, default=_jsonable) + "\n")


def _floats(text, what):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise CliError(f"{what}: expected comma-separated numbers, got {text!r}", EXIT_INPUT) from None


def resolve_state(source):
    """A state file path, or a named state: bell, w, ghz, werner:p, x:a0,a1re,a1im, product:bits."""
    if os.path.isfile(source):
        with open(source, "rb") as fh:
            return load_state(fh.read())
    name, _, arg = source.partition(":")
    name = name.lower()
    if name in ("bell", "phi+", "w", "ghz") and not arg:
        return named_state(name)
    if name == "werner":
        vals = _floats(arg, "werner")
        if len(vals) != 1:
            raise CliError("werner needs one parameter, e.g. werner:0.8", EXIT_INPUT)
        return named_state("werner", vals[0])
    if name == "x":
        vals = _floats(arg, "x")
        if len(vals) not in (2, 3):
            raise CliError("x needs a0,a1re[,a1im]", EXIT_INPUT)
        a0 = vals[0]
        a1 = complex(vals[1], vals[2] if len(vals) == 3 else 0.0)
        return named_state("x_state", a0, a1, 1.0 - a0)
    if name == "product" and arg and set(arg) <= {"0", "1"}:
        return named_state("product", arg)
    raise CliError(f"state: no such file or named state {source!r}", EXIT_INPUT)


def _optimizer_config(args):
    return OptimizerConfig(
        ensemble_size=args.ensemble_size,
        restarts=args.restarts,
        max_iters=args.iters,
        seed=args.seed,
        tol=args.tol,
    )


def _analytic(state, measure):
    if measure == "dsep-prime":
        if state.is_pure:
            return analytic_report(measure, dsep_prime_pure(state), route="schmidt closed form")
        params = x_state_params(state) if state.dims == (2, 2) else None
        if params is None:
            raise CliError("dsep-prime analytic: mixed input must be a two-qubit X state", EXIT_UNSUPPORTED)
        return analytic_report(measure, dsep_prime_x_state(*params), route="X-state closed form 2|a1|")
    if measure == "dsep":
        if not (state.is_pure and state.dims == (2, 2)):
            raise CliError("dsep analytic: only two-qubit pure states have a closed form", EXIT_UNSUPPORTED)
        return analytic_report(measure, concurrence_pure(state), route="equals the concurrence")
    if measure in ("dbar", "concurrence"):
        if state.is_pure and state.n_parties == 2 and measure == "concurrence":
            return analytic_report(measure, concurrence_pure(state), route="pure-state concurrence")
        fn = dbar_sep_two_qubit if measure == "dbar" else wootters_concurrence
        return analytic_report(measure, fn(state), route="Wootters formula")
    raise CliError(f"{measure} has no analytic method; use --method variational", EXIT_UNSUPPORTED)


def cmd_measure(args):
    state = resolve_state(args.state)
    if args.method == "analytic":
        try:
            report = _analytic(state, args.measure)
        except OUT_OF_SCOPE as exc:
            raise CliError(f"{args.measure} analytic: {exc}", EXIT_UNSUPPORTED) from None
    else:
        mode = VARIATIONAL_MODE.get(args.measure)
        if mode is None:
            raise CliError(f"{args.measure} has no variational method", EXIT_UNSUPPORTED)
        try:
            report, _ = variational_distance(state, mode, _optimizer_config(args))
        except OUT_OF_SCOPE as exc:
            raise CliError(f"{args.measure} variational: {exc}", EXIT_UNSUPPORTED) from None
    emit_json(report.to_dict())
    return EXIT_OK


def cmd_optimize(args):
    state = resolve_state(args.state)
    try:
        report, ensemble = variational_distance(state, args.mode, _optimizer_config(args))
    except OUT_OF_SCOPE as exc:
        raise CliError(f"optimize: {exc}", EXIT_UNSUPPORTED) from None
    doc = report.to_dict()
    doc["ensemble"] = {
        "weights": [float(w) for w in ensemble.weights],
        # kets[i][p] is member i's ket on party p, as [re, im] pairs
        "kets": [[[[z.real, z.imag] for z in party[i]] for party in ensemble.kets] for i in range(ensemble.size)],
    }
    emit_json(doc)
    print(f"best restart {report.diagnostics['best_restart']} value {report.value:.12g}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args):
    overrides = {f.name: getattr(args, f.name) for f in dataclasses.fields(Tolerances)}
    suites = run_suite(args.suite, Tolerances(**overrides))
    ok = all(s.passed for s in suites)
    for s in suites:
        n_pass = sum(c.passed for c in s.cases)
        print(f"{'PASS' if s.passed else 'FAIL'} {s.name}: {n_pass}/{len(s.cases)} cases ({s.seconds:.1f}s)",
              file=sys.stderr)
        for c in s.cases:
            if not c.passed or args.verbose:
                print(c.line(), file=sys.stderr)
    emit_json({"suite": args.suite, "passed": ok, "suites": [s.to_dict() for s in suites]})
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_random(args):
    dims = [int(d) for d in _floats(args.dims, "dims")]
    if not dims or any(d < 1 for d in dims):
        raise CliError("dims: need positive integers", EXIT_INPUT)
    if args.kind == "pure":
        state = random_pure(dims, args.seed)
    else:
        state = random_density(dims, args.rank if args.rank is not None else int(np.prod(dims)), args.seed)
    blob = save_state(state)
    if args.out == "-":
        sys.stdout.buffer.write(blob)
        print(f"seed {args.seed}", file=sys.stderr)
    else:
        with open(args.out, "wb") as fh:
            fh.write(blob)
        emit_json({"seed": args.seed, "out": args.out, "kind": state.kind, "dims": list(state.dims)})
    return EXIT_OK


def cmd_monogamy(args):
    if args.n < 3:
        raise CliError("n must be at least 3", EXIT_INPUT)
    if args.samples < 0:
        raise CliError("samples must be nonnegative", EXIT_INPUT)
    states = []
    for name in args.inject or []:
        st = resolve_state(name)
        if st.dims != (2,) * args.n or not st.is_pure:
            raise CliError(f"inject: {name!r} is not a pure {args.n}-qubit state", EXIT_INPUT)
        states.append(st)
    states += [random_pure([2] * args.n, args.seed + k) for k in range(args.samples)]
    rows = ["index,lhs,rhs,residual"]
    worst = None
    for i, st in enumerate(states):
        lhs, pairs = monogamy_terms(st)
        rhs = sum(pairs)
        res = lhs - rhs
        worst = res if worst is None else min(worst, res)
        rows.append(f"{i},{lhs:.17g},{rhs:.17g},{res:.17g}")
    text = "\n".join(rows) + "\n"
    summary = f"min residual {worst:.6g} over {len(states)} samples" if states else "no samples"
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(text)
        emit_json({"n": args.n, "samples": len(states), "seed": args.seed, "min_residual": worst, "csv": args.csv})
    else:
        sys.stdout.write(text)
    print(summary, file=sys.stderr)
    return EXIT_OK


def _add_optimizer_flags(p):
    p.add_argument("--ensemble-size", type=int, default=None, help="product terms K (default: dim^2)")
    p.add_argument("--restarts", type=int, default=16)
    p.add_argument("--iters", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-4)


def build_parser():
    parser = argparse.ArgumentParser(prog="entgeo", description="Trace-norm entanglement measures.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="compute one measure of a state")
    p.add_argument("--state", required=True, help="state file or name (bell, w, ghz, werner:p, x:a0,a1re,a1im)")
    p.add_argument("--measure", required=True, choices=MEASURES)
    p.add_argument("--method", choices=("analytic", "variational"), default="analytic")
    _add_optimizer_flags(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=SUITE_NAMES, default="all")
    p.add_argument("-v", "--verbose", action="store_true", help="list passing cases too")
    for f in dataclasses.fields(Tolerances):
        p.add_argument("--" + f.name.replace("_", "-"), dest=f.name, type=type(f.default), default=f.default,
                       help=f"default {f.default}")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("random", help="write a seeded random state")
    p.add_argument("--kind", choices=("pure", "mixed"), required=True)
    p.add_argument("--dims", required=True, help="comma-separated local dimensions")
    p.add_argument("--rank", type=int, default=None, help="rank of a mixed state (default: full)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.set_defaults(func=cmd_random)

    p = sub.add_parser("monogamy", help="monogamy residuals of random pure qubit states")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", default=None, help="write CSV here and a JSON summary to stdout")
    p.add_argument("--inject", action="append", help="extra state (file or name) placed before the samples")
    p.set_defaults(func=cmd_monogamy)

    p = sub.add_parser("optimize", help="variational product-ensemble search")
    p.add_argument("--state", required=True)
    p.add_argument("--mode", choices=("sep-cone", "sep-normalized", "fsep-cone"), default="sep-cone")
    _add_optimizer_flags(p)
    p.set_defaults(func=cmd_optimize)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (EntgeoError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
