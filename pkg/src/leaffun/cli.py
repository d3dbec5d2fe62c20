"""Command-line interface.

Subcommands
-----------
constants   tabulate pi_n, eta_n, zeta_n
eval        evaluate one leaf function at one argument
wave        sample a catalogue solution to CSV (exact / numeric /
            residual / envelope channels)
verify      run the verification battery
simulate    integrate an arbitrary (damped) Duffing equation

Exit status: 0 ok, 2 usage error, 3 domain error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import duffing, leaf, verify as verify_mod
from .duffing import Damping, SolutionSpec
from .leaf import DomainError, LeafKind, make_basis
from .numerics import SecondOrderIVP, StepSizeError, rk_integrate

MAX_WAVE_SAMPLES = 10_000_000
# stderr heads-up when an eval argument is this close (in t) to a pole
POLE_WARN_BAND = 1e-3


def fmt(v: float) -> str:
    """15 significant digits; scientific notation outside [1e-4, 1e6)."""
    if v != v:
        return "nan"
    if v == 0.0:
        return "0"
    a = abs(v)
    if 1e-4 <= a < 1e6:
        return f"{v:.15g}"
    return f"{v:.14e}"


def _parse_poly(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"polynomial must be comma-separated numbers, got {text!r}")


def _parse_ids(text: str) -> tuple[int, ...]:
    try:
        ids = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"ids must be integers, got {text!r}")
    bad = [i for i in ids if i not in duffing.ALL_IDS]
    if bad:
        raise argparse.ArgumentTypeError(f"ids out of range 1..14: {bad}")
    return ids


def _spec_from_args(args) -> SolutionSpec:
    damping = None
    if args.beta is not None:
        damping = Damping(beta_poly=args.beta, c=args.c)
    return SolutionSpec(args.id, args.A, args.omega, damping=damping)


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def cmd_constants(args) -> int:
    print("n, pi_n, eta_n, zeta_n")
    for n in range(1, args.n_max + 1):
        b = make_basis(n)
        eta = fmt(b.eta_n) if b.eta_n is not None else "N/A"
        zeta = fmt(b.zeta_n) if b.zeta_n is not None else "N/A"
        print(f"{n}, {fmt(b.pi_n)}, {eta}, {zeta}")
    return 0


def cmd_eval(args) -> int:
    kind = LeafKind(args.kind)
    basis = make_basis(args.n)
    if kind is LeafKind.CLEAFH and basis.eta_n is not None:
        eta = basis.eta_n
        k = round((args.t - eta) / (2.0 * eta))
        pole = eta + 2.0 * eta * k
        if abs(args.t - pole) <= POLE_WARN_BAND:
            print(f"warning: t={args.t:g} is near the cleafh_{args.n} pole at "
                  f"t={pole:.12g}; values grow without bound there",
                  file=sys.stderr)
    value = leaf.value(kind, basis, args.t)
    print(fmt(value))
    return 0


def _wave_grid(args, parser) -> np.ndarray:
    if not args.t_min < args.t_max:
        parser.error("--t-min must be below --t-max")
    if not args.dt > 0:
        parser.error("--dt must be positive")
    n = int(math.floor((args.t_max - args.t_min) / args.dt + 1e-9)) + 1
    if n > MAX_WAVE_SAMPLES:
        parser.error(f"grid of {n} samples exceeds the {MAX_WAVE_SAMPLES} cap")
    return args.t_min + args.dt * np.arange(n)


def cmd_wave(args, parser) -> int:
    spec = _spec_from_args(args)
    channels = args.channels.split(",")
    known = ("exact", "numeric", "residual", "envelope")
    for ch in channels:
        if ch not in known:
            parser.error(f"unknown channel {ch!r}; pick from {','.join(known)}")
    channels = [ch for ch in known if ch in channels]
    t = _wave_grid(args, parser)
    if "numeric" in channels and args.t_min < 0:
        parser.error("the numeric channel integrates forward from t = 0; "
                     "--t-min must be >= 0")

    ok = duffing.valid_mask(spec, t)
    ks = duffing.kink_points(spec.undamped)
    on_kink = np.zeros(t.shape, dtype=bool)
    if ks is not None:
        m = np.round((t - ks.offset) / ks.spacing)
        on_kink = t == ks.offset + m * ks.spacing
    if not ok.all():
        print(f"note: {np.count_nonzero(~ok)} samples fall where solution "
              f"{spec.id} is undefined (pole guard band or missing branch); "
              "their value fields are left empty", file=sys.stderr)

    columns: dict[str, np.ndarray] = {}
    if "exact" in channels:
        x = np.full(t.shape, np.nan)
        x[ok] = np.asarray(duffing.solution_value(spec, t[ok]))
        columns["exact"] = x
    if "numeric" in channels:
        ic = duffing.initial_conditions(spec)
        accel = duffing.acceleration(spec)
        cap = 1e6
        wf = rk_integrate(SecondOrderIVP(accel, x0=ic.x0, v0=ic.v0),
                          max(args.t_max, args.dt), tol=1e-10, blowup_cap=cap)
        num = np.full(t.shape, np.nan)
        inside = t <= wf.t[-1]
        num[inside] = wf.at(t[inside])
        if not inside.all():
            print(f"note: numeric channel stopped at t={wf.t[-1]:.9g} "
                  f"(|x| cap {cap:g}); later samples are empty", file=sys.stderr)
        columns["numeric"] = num
    if "residual" in channels:
        res = np.full(t.shape, np.nan)
        good = ok & ~on_kink
        res[good] = np.asarray(duffing.ode_residual(spec, t[good]))
        columns["residual"] = res
    if "envelope" in channels:
        if spec.damping is not None:
            env = np.asarray(duffing.damped_transform(
                spec.damping.beta_poly, spec.damping.c, t))
        else:
            env = np.ones(t.shape)
        columns["envelope"] = env

    header = "t," + ",".join(f"x_{c}" if c in ("exact", "numeric") else c
                             for c in channels)
    lines = [header]
    for j, tj in enumerate(t):
        cells = [fmt(tj)]
        for c in channels:
            vj = columns[c][j]
            cells.append("" if vj != vj else fmt(float(vj)))
        lines.append(",".join(cells))
    body = "\n".join(lines) + "\n"
    if args.out == "-":
        sys.stdout.write(body)
    else:
        with open(args.out, "w") as fh:
            fh.write(body)
    return 0


def cmd_verify(args) -> int:
    kwargs = {}
    if args.ids is not None:
        kwargs["ids"] = args.ids
    if args.damped:
        kwargs["include_undamped"] = False
    if args.undamped:
        kwargs["include_damped"] = False
    if args.beta is not None:
        kwargs["beta_poly"] = args.beta
    kwargs["c"] = args.c
    kwargs["A"] = args.A
    kwargs["omega"] = args.omega
    if args.tol is not None:
        kwargs.update(residual_tol=args.tol, agreement_tol=args.tol,
                      identity_tol=args.tol, base_case_tol=args.tol)
    config = verify_mod.VerifyConfig(**kwargs)
    reports = verify_mod.run_suite(config)
    if args.out is not None:
        payload = verify_mod.reports_to_jsonl(reports)
        if args.out == "-":
            sys.stdout.write(payload)
        else:
            with open(args.out, "w") as fh:
                fh.write(payload)
    print(verify_mod.summary_table(reports))
    return 0 if all(r.passed for r in reports) else 1


def cmd_simulate(args, parser) -> int:
    beta = args.beta or (0.0,)
    damping = Damping(beta_poly=beta, c=args.c)

    def accel(t, x, v):
        return -(damping.beta(t) * v + args.alpha1 * x
                 + args.alpha2 * x ** 3 + args.alpha3 * x ** 5)

    try:
        wf = rk_integrate(SecondOrderIVP(accel, x0=args.x0, v0=args.v0),
                          args.t_max, tol=args.tol, blowup_cap=args.cap)
    except StepSizeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    if args.dt is not None:
        ts = args.dt * np.arange(int(math.floor(wf.t[-1] / args.dt)) + 1)
        xs = wf.at(ts)
        vs = wf.velocity_at(ts)
    else:
        ts, xs, vs = wf.t, wf.x, wf.v
    lines = ["t,x,v"]
    lines += [f"{fmt(a)},{fmt(b)},{fmt(c)}" for a, b, c in zip(ts, xs, vs)]
    body = "\n".join(lines) + "\n"
    if args.out == "-":
        sys.stdout.write(body)
    else:
        with open(args.out, "w") as fh:
            fh.write(body)
    if wf.meta.blown_up:
        print(f"note: |x| exceeded {args.cap:g} at t={wf.meta.blowup_time:.9g}",
              file=sys.stderr)
    return 0


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leaffun",
        description="Leaf functions and the exact Duffing solutions built "
                    "from them.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="tabulate pi_n, eta_n, zeta_n")
    p.add_argument("--n-max", type=int, default=3)

    p = sub.add_parser("eval", help="evaluate one leaf function")
    p.add_argument("kind", choices=[k.value for k in LeafKind])
    p.add_argument("n", type=int)
    p.add_argument("t", type=float)

    p = sub.add_parser("wave", help="sample a catalogue solution to CSV")
    p.add_argument("--id", type=int, required=True, choices=duffing.ALL_IDS)
    p.add_argument("--A", type=float, default=1.0)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--beta", type=_parse_poly, default=None,
                   help="damping polynomial, constant term first (e.g. 0.5)")
    p.add_argument("--c", type=float, default=0.0,
                   help="lower limit of the damping integral")
    p.add_argument("--t-min", type=float, default=0.0)
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--dt", type=float, required=True)
    p.add_argument("--channels", default="exact",
                   help="comma list from exact,numeric,residual,envelope")
    p.add_argument("--out", default="-", help="output path ('-' = stdout)")

    p = sub.add_parser("verify", help="run the verification battery")
    p.add_argument("--ids", type=_parse_ids, default=None,
                   help="comma list of solution ids (default all)")
    p.add_argument("--damped", action="store_true",
                   help="damped variants only")
    p.add_argument("--undamped", action="store_true",
                   help="undamped variants only")
    p.add_argument("--A", type=float, default=1.0)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--beta", type=_parse_poly, default=None)
    p.add_argument("--c", type=float, default=0.0)
    p.add_argument("--tol", type=float, default=None,
                   help="override the residual/agreement/identity tolerances")
    p.add_argument("--out", default=None,
                   help="also write line-delimited JSON records here")

    p = sub.add_parser("simulate",
                       help="integrate x'' + beta(t) x' + a1 x + a2 x^3 "
                            "+ a3 x^5 = 0 from given initial conditions")
    p.add_argument("--alpha1", type=float, required=True)
    p.add_argument("--alpha2", type=float, default=0.0)
    p.add_argument("--alpha3", type=float, default=0.0)
    p.add_argument("--beta", type=_parse_poly, default=None)
    p.add_argument("--c", type=float, default=0.0)
    p.add_argument("--x0", type=float, required=True)
    p.add_argument("--v0", type=float, required=True)
    p.add_argument("--t-max", type=float, required=True)
    p.add_argument("--dt", type=float, default=None,
                   help="resample step (default: accepted solver steps)")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--cap", type=float, default=1e6)
    p.add_argument("--out", default="-")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "constants":
            if not 1 <= args.n_max <= 16:
                parser.error("--n-max must be in 1..16")
            return cmd_constants(args)
        if args.command == "eval":
            return cmd_eval(args)
        if args.command == "wave":
            return cmd_wave(args, parser)
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "simulate":
            return cmd_simulate(args, parser)
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3
    except StepSizeError as exc:
        print(f"integration stalled: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
