"""Command line entry point.

Exit codes: 0 converged/success, 2 audit violation, 3 validation or parse
error, 4 iteration limit, 5 numerical breakdown, 64 usage error.
"""

import argparse
import logging
import os
import sys

from . import bounds
from .analysis import certify_alpha_hat, certify_shortstep_params, scaling_experiment
from .errors import (
    IPMError,
    MissingFile,
    ParamsInfeasible,
    ParseError,
    StartOutsideNeighbourhood,
    ValidationError,
    ValidationFailed,
)
from .generator import GenSpec, generate
from .io import load_instance, save_instance, save_rows, save_trace
from .ipm import SolverConfig, Status, StepMode, Variant, run
from .newton import InexactMode, InexactnessPolicy, InjectShape

EXIT_OK = 0
EXIT_AUDIT = 2
EXIT_INVALID = 3
EXIT_ITER_LIMIT = 4
EXIT_BREAKDOWN = 5
EXIT_USAGE = 64

STATUS_EXIT = {
    Status.CONVERGED: EXIT_OK,
    Status.AUDIT_VIOLATION: EXIT_AUDIT,
    Status.ITERATION_LIMIT: EXIT_ITER_LIMIT,
    Status.NUMERICAL_BREAKDOWN: EXIT_BREAKDOWN,
}

CERT_SIZES = (2, 3, 5, 10, 100, 1000, 10**6)

log = logging.getLogger("inexact_ipm")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _gen_spec(text, seed):
    try:
        n, m, density, qrank, mu0 = text.split(",")
        return GenSpec(n=int(n), m=int(m), density=float(density), q_rank=int(qrank), mu0=float(mu0), seed=seed)
    except ValueError as exc:
        raise UsageError(f"--generate expects n,m,density,qrank,mu0: {exc}") from exc


def _int_list(text):
    try:
        return [int(float(t)) for t in text.split(",") if t]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser():
    p = _Parser(prog="inexact-ipm", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="run the short- or long-step method")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--manifest", help="instance manifest (JSON)")
    src.add_argument("--generate", metavar="n,m,density,qrank,mu0", help="generate a random instance")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--variant", choices=["short", "long"], default="short")
    s.add_argument("--delta", type=float, default=None)
    s.add_argument("--epsilon", type=float, default=1e-6)
    s.add_argument("--max-iters", type=int, default=None)
    s.add_argument("--inexact", choices=[m.value for m in InexactMode], default="exact")
    s.add_argument("--inject-shape", choices=[m.value for m in InjectShape], default="random-sphere")
    s.add_argument("--inject-fraction", type=float, default=1.0)
    s.add_argument("--step-mode", choices=["theory", "practical"], default="theory")
    s.add_argument("--audit", action="store_true")
    s.add_argument("--trace", metavar="PATH", help="write the iteration trace as CSV")

    c = sub.add_parser("certify", help="check the parameter certificates")
    c.add_argument("--theta", type=float, default=0.1)
    c.add_argument("--beta", type=float, default=0.1)
    c.add_argument("--delta-short", type=float, default=0.3)
    c.add_argument("--gamma", type=float, default=0.5)
    c.add_argument("--sigma", type=float, default=0.5)
    c.add_argument("--delta-long", type=float, default=0.05)
    c.add_argument("--sizes", type=_int_list, default=list(CERT_SIZES))
    c.add_argument("--out", metavar="PATH", help="write per-size slacks as CSV")

    sc = sub.add_parser("scale", help="iteration-count scaling experiment")
    sc.add_argument("--variant", choices=["short", "long"], default="short")
    sc.add_argument("--sizes", type=_int_list, required=True)
    sc.add_argument("--epsilon", type=float, default=1e-3)
    sc.add_argument("--trials", type=int, default=1)
    sc.add_argument("--seed", type=int, default=0)
    sc.add_argument("--out", metavar="PATH", help="write the report as CSV")

    g = sub.add_parser("gen", help="write a random instance to files")
    g.add_argument("--generate", metavar="n,m,density,qrank,mu0", required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", metavar="DIR", required=True)
    g.add_argument("--name", default="instance")
    return p


def _cmd_solve(args):
    if args.manifest:
        problem, start = load_instance(args.manifest)
        if start is None:
            raise UsageError("manifest has no start point; the feasible method needs one")
    else:
        problem, start = generate(_gen_spec(args.generate, args.seed))
    policy = InexactnessPolicy(
        mode=InexactMode(args.inexact),
        inject_shape=InjectShape(args.inject_shape),
        inject_fraction=args.inject_fraction,
        seed=args.seed,
    )
    cfg = SolverConfig(
        variant=Variant(args.variant),
        delta=args.delta,
        epsilon=args.epsilon,
        max_iters=args.max_iters,
        inexact=policy,
        step_mode=StepMode(args.step_mode),
        audit=args.audit,
    )
    result = run(problem, start, cfg)
    if args.trace:
        save_trace(result, args.trace)
    print(f"status {result.status.value}  iterations {result.iterations}  mu {result.final.mu:.6e}")
    if result.message:
        print(result.message, file=sys.stderr)
    return STATUS_EXIT[result.status]


def _cmd_certify(args):
    short = certify_shortstep_params(args.theta, args.beta, args.delta_short, args.sizes)
    const = bounds.longstep_constant(args.gamma, args.sigma, args.delta_long)
    long_ = certify_alpha_hat(args.gamma, args.sigma, args.delta_long, args.sizes)
    print(f"short-step theta={args.theta} beta={args.beta} delta={args.delta_short}: "
          f"{'pass' if short.passed else 'FAIL'} (worst slack {short.worst_slack:.6g} at n={short.worst_n}), "
          f"eta={short.details['eta']:.6g}")
    print(f"long-step constant (1+delta)^2/gamma (1/gamma-sigma)^2 = {const:.10g}")
    print(f"alpha_hat = 1/(50n): {'pass' if long_.passed else 'FAIL'} "
          f"(worst slack {long_.worst_slack:.6g} at n={long_.worst_n})")
    if args.out:
        rows = [
            (n, s1, s2, *m)
            for n, s1, s2, m in zip(short.sizes, short.slacks, long_.slacks, long_.details["condition_margins"])
        ]
        save_rows(rows, ("n", "shortstep_slack", "alpha_hat_slack", "cnd1_margin", "cnd2_margin", "cnd3_margin"), args.out)
    return EXIT_OK if short.passed and long_.passed else 1


def _cmd_scale(args):
    rep = scaling_experiment(Variant(args.variant), args.sizes, args.epsilon, trials=args.trials, seed=args.seed)
    for n, L in zip(rep.sizes, rep.iterations):
        print(f"n={n:6d}  iterations {L:.1f}")
    print(f"fitted exponent {rep.fitted_exponent:.4f}  r^2 {rep.r_squared:.6f}")
    if args.out:
        save_rows(list(zip(rep.sizes, rep.iterations)), ("n", "iterations"), args.out)
    return EXIT_OK


def _cmd_gen(args):
    problem, start = generate(_gen_spec(args.generate, args.seed))
    path = save_instance(problem, args.out, start=start, name=args.name)
    print(path)
    return EXIT_OK


COMMANDS = {"solve": _cmd_solve, "certify": _cmd_certify, "scale": _cmd_scale, "gen": _cmd_gen}


def _configure_logging():
    level = os.environ.get("IPM_LOG", "error").upper()
    logging.basicConfig(stream=sys.stderr, level=getattr(logging, level, logging.ERROR),
                        format="%(levelname)s %(name)s: %(message)s")


def main(argv=None):
    _configure_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, ValidationFailed, ParseError, MissingFile, StartOutsideNeighbourhood, ParamsInfeasible) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except IPMError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_BREAKDOWN
    except ValueError as exc:
        # out-of-range option values rejected by the config classes
        print(f"inexact-ipm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
