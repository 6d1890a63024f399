"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 precondition failure, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import __version__
from .bounds import (
    AsymptoticKind,
    BoundKind,
    asymptotic_bound,
    bounds_for_instance,
    integral_lower_bound_P,
    integral_lower_bound_window,
    series_lower_bound,
    threshold_search,
)
from .errors import (
    ConsistencyError,
    GerjuoyInapplicableError,
    ModulusTooLargeError,
    NotCoprimeError,
    RegisterTooLargeError,
    RegisterTooSmallError,
    UnreachableError,
)
from .modular import OrderInstance, decompose_order, is_prime_power, multiplicative_order, register_sizes
from .oracle import (
    FULL_TRANSFORM_MAX_BITS,
    NAIVE_DFT_MAX_BITS,
    closed_form_table,
    figure1_dump,
    full_transform,
    mass_on_set,
    write_figure1_csv,
)
from .shor_state import TargetKind, TargetSet, exact_P, exact_P_tilde_q, target_set_members

SCHEMA = "shorprob.v1"

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_PRECONDITION = 3
EXIT_VERIFY = 4

SET_KINDS = {
    "nearest": TargetKind.NEAREST_INTEGER,
    "window": TargetKind.WINDOW_2,
    "window-q": TargetKind.WINDOW_Q,
}


def _fmt(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _emit(payload: dict, fmt: str, out) -> None:
    if fmt == "json":
        json.dump({"schema": SCHEMA, **payload}, out, indent=2)
        out.write("\n")
        return
    for key, value in payload.items():
        if isinstance(value, dict):
            out.write(f"{key}:\n")
            for k, v in value.items():
                out.write(f"  {k} = {_fmt(v)}\n")
        elif isinstance(value, list):
            out.write(f"{key}:\n")
            for item in value:
                out.write(f"  {item if not isinstance(item, dict) else _row(item)}\n")
        else:
            out.write(f"{key} = {_fmt(value)}\n")


def _row(d: dict) -> str:
    return ", ".join(f"{k}={_fmt(v) if not isinstance(v, (list, dict)) else v}" for k, v in d.items())


def _instance(args) -> OrderInstance:
    return OrderInstance.from_base(args.N, args.b, x0=args.x0, q_pad=args.q_pad)


def _instance_dict(inst: OrderInstance) -> dict:
    return {
        "N": inst.N, "b": inst.b, "r": inst.r, "kappa": inst.kappa, "r_prime": inst.r_prime,
        "n": inst.n, "n0": inst.n0, "q_pad": inst.q_pad, "x0": inst.x0, "m": inst.m,
    }


def cmd_order(args, out) -> int:
    r = multiplicative_order(args.b, args.N)
    kappa, r_prime = decompose_order(r)
    _emit({"N": args.N, "b": args.b, "r": r, "kappa": kappa, "r_prime": r_prime}, args.format, out)
    return EXIT_OK


def cmd_exact(args, out) -> int:
    inst = _instance(args)
    kind = SET_KINDS[args.set]
    if kind is TargetKind.NEAREST_INTEGER:
        report = exact_P(inst, cross_check=not args.no_cross_check)
    else:
        if kind is TargetKind.WINDOW_2 and inst.q_pad != 0:
            raise ValueError("--set window is the radius-2 set on the unpadded register; use --set window-q")
        report = exact_P_tilde_q(inst, allow_prime_power=args.allow_prime_power)
    _emit({"instance": _instance_dict(inst), "set": args.set, "report": report.as_dict()}, args.format, out)
    return EXIT_OK


def _bound_params(args) -> tuple[int, int, int, int, int]:
    """(N, kappa, r_prime, n, n0) from either --b or explicit --kappa/--r-prime."""
    n, n0 = register_sizes(args.N)
    if args.b is not None:
        kappa, r_prime = decompose_order(multiplicative_order(args.b, args.N))
    else:
        if args.r_prime is None:
            raise ValueError("give --b, or --r-prime (and optionally --kappa)")
        kappa, r_prime = args.kappa, args.r_prime
    return args.N, kappa, r_prime, n, n0


def cmd_bounds(args, out) -> int:
    N, kappa, r_prime, n, n0 = _bound_params(args)
    n_total = n + args.q_pad
    reports = [
        series_lower_bound(n_total, n0, kappa, r_prime),
        integral_lower_bound_P(N, kappa, r_prime, n=n_total),
        integral_lower_bound_window(N, kappa, r_prime, args.q_pad, n=n),
    ]
    asymptotes = {
        "P": asymptotic_bound(AsymptoticKind.NEAREST),
        f"P_tilde_q{args.q_pad}": asymptotic_bound(AsymptoticKind.WINDOW_Q, args.q_pad),
    }
    payload = {
        "parameters": {"N": N, "kappa": kappa, "r_prime": r_prime, "n": n, "n0": n0, "q_pad": args.q_pad},
        "bounds": [rep.as_dict() for rep in reports],
        "asymptotes": asymptotes,
    }
    if args.format == "json":
        _emit(payload, "json", out)
    else:
        out.write(f"N = {N}, kappa = {kappa}, r_prime = {r_prime}, n = {n}, n0 = {n0}, q_pad = {args.q_pad}\n")
        for rep in reports:
            unmet = [name for name, ok in rep.preconditions if not ok]
            note = "" if not unmet else "  [unmet: " + "; ".join(unmet) + "]"
            out.write(f"{rep.bound_kind.value:<20} {rep.value:.17g}{note}\n")
        for name, value in asymptotes.items():
            out.write(f"asymptote {name:<10} {value:.17g}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    inst = _instance(args)
    if inst.n_total > FULL_TRANSFORM_MAX_BITS:
        raise RegisterTooLargeError(f"verify needs n + q <= {FULL_TRANSFORM_MAX_BITS}")
    start = time.perf_counter()
    oracle = full_transform(inst)
    closed = closed_form_table(inst)
    deviation = float(np.max(np.abs(oracle.probabilities - closed.probabilities)))
    checks = {"max_entry_deviation": deviation, "unitarity_deviation": abs(oracle.total() - 1.0)}
    if args.naive and inst.n_total <= NAIVE_DFT_MAX_BITS:
        naive = full_transform(inst, method="naive")
        checks["naive_vs_fft_deviation"] = float(np.max(np.abs(naive.probabilities - oracle.probabilities)))

    sets = {"nearest": exact_P(inst).P}
    window_ok = 2 * inst.r < inst.N and (args.allow_prime_power or not is_prime_power(inst.N))
    if window_ok:
        sets["window-q" if inst.q_pad else "window"] = exact_P_tilde_q(inst, args.allow_prime_power).P_tilde
    masses = {}
    for name, formula in sets.items():
        target = TargetSet(SET_KINDS[name], inst.q_pad if name == "window-q" else 0)
        members = target_set_members(inst, target, allow_prime_power=args.allow_prime_power)
        mass = mass_on_set(oracle, members)
        masses[name] = {"formula": formula, "oracle": mass, "deviation": abs(formula - mass)}
        checks[f"{name}_mass_deviation"] = abs(formula - mass)

    passed = all(v <= args.tol for v in checks.values())
    payload = {
        "instance": _instance_dict(inst),
        "tolerance": args.tol,
        "checks": checks,
        "set_masses": masses,
        "elapsed_s": time.perf_counter() - start,
        "result": "pass" if passed else "fail",
    }
    _emit(payload, args.format, out)
    return EXIT_OK if passed else EXIT_VERIFY


def cmd_amplitudes(args, out) -> int:
    inst = _instance(args)
    rows = figure1_dump(inst)
    if args.out and args.out != "-":
        with open(args.out, "w", newline="") as fh:
            write_figure1_csv(rows, fh)
        flagged = sum(row[3] for row in rows)
        sys.stderr.write(f"wrote {len(rows)} rows ({flagged} flagged) to {args.out}\n")
    else:
        write_figure1_csv(rows, out)
    return EXIT_OK


BOUND_NAMES = {
    "integral-P": BoundKind.INTEGRAL_P,
    "window": BoundKind.INTEGRAL_P_TILDE,
    "window-q": BoundKind.INTEGRAL_P_TILDE_Q,
    "series-odd": BoundKind.SERIES_ODD,
    "series-even": BoundKind.SERIES_EVEN,
}


def cmd_thresholds(args, out) -> int:
    kind = BOUND_NAMES[args.bound]
    value = threshold_search(
        kind, args.target, args.search,
        N=args.N, kappa=args.kappa, r_prime=args.r_prime, q_pad=args.q_pad,
        n_minus_n0=args.n_minus_n0,
    )
    _emit({"bound": args.bound, "target": args.target, "search": args.search,
           "N": args.N, "kappa": args.kappa, "q_pad": args.q_pad, "result": value}, args.format, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shorprob",
        description="Exact success probabilities, lower bounds and a DFT oracle for Shor's order finding.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, need_b=True, fmt_choices=("text", "json")):
        p.add_argument("--N", type=int, required=True, help="modulus")
        p.add_argument("--b", type=int, required=need_b, default=None, help="base, 1 < b < N, coprime to N")
        p.add_argument("--format", choices=fmt_choices, default="text")

    def instance_opts(p):
        p.add_argument("--x0", type=int, default=0, help="offset from the output measurement (default 0)")
        p.add_argument("--q-pad", type=int, default=0, dest="q_pad", help="extra input qubits")
        p.add_argument("--allow-prime-power", action="store_true",
                       help="permit window sets for prime-power N when r < N/2")

    p = sub.add_parser("order", help="multiplicative order of b mod N")
    common(p)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("exact", help="exact probability of the nearest-integer or window set")
    common(p)
    instance_opts(p)
    p.add_argument("--set", choices=sorted(SET_KINDS), default="nearest")
    p.add_argument("--no-cross-check", action="store_true",
                   help="skip the outcome-by-outcome recomputation of P")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("bounds", help="evaluate every lower bound and the asymptotes")
    common(p, need_b=False)
    p.add_argument("--kappa", type=int, default=0)
    p.add_argument("--r-prime", type=int, default=None, dest="r_prime")
    p.add_argument("--q-pad", type=int, default=0, dest="q_pad")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="compare the closed form against the full inverse DFT")
    common(p)
    instance_opts(p)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--naive", action="store_true", help=f"also run the direct DFT (n + q <= {NAIVE_DFT_MAX_BITS})")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("amplitudes", help="dump (y, y/2^n, probability, flag) as CSV")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    instance_opts(p)
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.set_defaults(func=cmd_amplitudes)

    p = sub.add_parser("thresholds", help="least odd r' (or power-of-two N) reaching a target bound")
    p.add_argument("--bound", choices=sorted(BOUND_NAMES), required=True)
    p.add_argument("--target", type=float, required=True)
    p.add_argument("--search", choices=("r_prime", "N"), default="r_prime")
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--kappa", type=int, default=0)
    p.add_argument("--r-prime", type=int, default=None, dest="r_prime")
    p.add_argument("--q-pad", type=int, default=0, dest="q_pad")
    p.add_argument("--n-minus-n0", type=int, default=None, dest="n_minus_n0",
                   help="register headroom for the series bounds")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_thresholds)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except (GerjuoyInapplicableError, RegisterTooSmallError, RegisterTooLargeError, UnreachableError) as exc:
        sys.stderr.write(f"shorprob: precondition failed: {exc}\n")
        return EXIT_PRECONDITION
    except ConsistencyError as exc:
        sys.stderr.write(f"shorprob: consistency check failed: {exc}\n")
        return EXIT_VERIFY
    except (NotCoprimeError, ModulusTooLargeError, ValueError) as exc:
        sys.stderr.write(f"shorprob: invalid input: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
