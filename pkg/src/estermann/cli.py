"""Command-line interface: ``estermann <subcommand> ...``.

Exit codes: 0 success, 1 a ``verify`` criterion failed, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys

from estermann.arith import RationalApprox, dirichlet_approx
from estermann.bounds import corollary2_bound, weyl_bound_rhs
from estermann.dissect import ProblemInstance, dissection_params, sample_arcs, theta
from estermann.errors import DomainError, EstermannError
from estermann.experiment import ConfigError, ExperimentConfig, emit_report, run_experiment, write_report
from estermann.expsum import SumWindow, complete_sum, gamma_integral, major_arc_weyl_approx, weyl_sum
from estermann.repcount import exact_count, h_threshold, main_term
from estermann.sseries import DEFAULT_CUTOFF, VARIANTS, singular_series
from estermann.verify import CHECKS, render, run_checks

_ALPHA = re.compile(r"^\s*([+-]?\d+)\s*/\s*(\d+)\s*(?:([+-])\s*([0-9.eE+-]+))?\s*$")


def parse_alpha(text: str, Q: float = 1e6) -> RationalApprox:
    """Parse 'a/q', 'a/q+lam' or 'a/q-lam'; a bare real goes through dirichlet_approx(., Q)."""
    m = _ALPHA.match(text)
    if m:
        a, q = int(m.group(1)), int(m.group(2))
        lam = float(m.group(4)) if m.group(4) else 0.0
        if m.group(3) == "-":
            lam = -lam
        g = math.gcd(a, q)
        if g != 1:
            # reduce a/q, the offset is unaffected
            a, q = a // g, q // g
        return RationalApprox(a, q, lam)
    try:
        return dirichlet_approx(float(text), Q)
    except ValueError as exc:
        raise ConfigError(f"cannot parse alpha {text!r}") from exc


def _instance(args) -> ProblemInstance:
    if (args.H is None) == (args.H_exp is None):
        raise ConfigError("give exactly one of --H or --H-exp")
    H = args.H if args.H is not None else float(args.N) ** args.H_exp
    return ProblemInstance(args.N, args.n, *args.mu, H)


def _add_instance_args(p):
    p.add_argument("--N", type=lambda s: int(float(s)) if "e" in s.lower() else int(s), required=True)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--mu", type=float, nargs=3, default=[1 / 3, 1 / 3, 1 / 3], metavar=("MU1", "MU2", "MU3"))
    p.add_argument("--H", type=float, help="absolute window half-width")
    p.add_argument("--H-exp", dest="H_exp", type=float, help="use H = N**H_EXP")


def cmd_count(args) -> int:
    rep = exact_count(_instance(args), variant=args.variant, prime_cutoff=args.cutoff, workers=args.workers)
    if not args.timing:
        rep.elapsed = None
    sys.stdout.write(emit_report([rep], args.format))
    return 0


def cmd_predict(args) -> int:
    inst = _instance(args)
    ss = singular_series(inst.N, inst.n, args.cutoff, args.variant)
    p = dissection_params(inst)
    out = {
        "N": inst.N,
        "n": inst.n,
        "H": inst.H,
        "sseries": ss.value,
        "sseries_tail_bound": ss.tail_bound,
        "main_term": main_term(inst, ss.value),
        "h_threshold": h_threshold(inst.N, inst.n) if inst.N > 1 else None,
        "desk_H": inst.N ** (1 - theta(inst.n)),
        "N3": p.N3,
        "H3": p.H3,
        "tau": p.tau,
        "theta": p.theta,
        "omega": p.omega,
        "eta": p.eta,
        "major_radius": p.major_radius,
    }
    print(json.dumps(out, indent=2))
    return 0


def cmd_sseries(args) -> int:
    variants = VARIANTS if args.variant == "both" else (args.variant,)
    for v in variants:
        r = singular_series(args.N, args.n, args.cutoff, v)
        print(f"{v}: value={r.value:.12g} cutoff={r.prime_cutoff} tail_bound={r.tail_bound:.3g}")
    return 0


def _c(z: complex) -> list:
    return [float(format(z.real, ".12g")), float(format(z.imag, ".12g"))]


def cmd_weyl(args) -> int:
    ap = parse_alpha(args.alpha, args.Q)
    w = SumWindow(args.x, args.y, args.n)
    t = weyl_sum(ap, w)
    s = complete_sum(ap.a, ap.q, args.n)
    g = gamma_integral(ap.lam, w)
    approx = major_arc_weyl_approx(ap, w, override=True)
    cor1_limit = 1.0 / (2 * args.n * ap.q * args.x ** (args.n - 1))
    out = {
        "alpha": str(ap),
        "terms": w.term_count,
        "T": _c(t),
        "abs_T": abs(t),
        "S(a,q)": _c(s),
        "gamma": _c(g),
        "major_arc_approx": _c(approx),
        "major_arc_residual": abs(t - approx),
        "major_arc_hypothesis": abs(ap.lam) <= cor1_limit,
        "corollary2_bound": corollary2_bound(ap.q, args.x, args.y, args.n),
        "weyl_bound_rhs": weyl_bound_rhs(ap.q, args.y, args.n) if args.y > 1 else None,
    }
    print(json.dumps(out, indent=2))
    return 0


def cmd_arcs(args) -> int:
    p = dissection_params(_instance(args))
    s = sample_arcs(p, args.samples, args.seed, args.eta)
    print(json.dumps({"tau": p.tau, "L": p.L, "eta": s.eta_used, "counts": s.counts, "max_ratio": s.max_ratio},
                     indent=2))
    return 0


def cmd_verify(args) -> int:
    only = [c.strip() for c in args.only.split(",")] if args.only else None
    if only and any(c.upper() not in CHECKS for c in only):
        raise ConfigError(f"unknown criterion in {args.only!r}; choose from {', '.join(CHECKS)}")
    checks = run_checks(only, workers=args.workers)
    sys.stdout.write(render(checks))
    return 0 if all(c.passed for c in checks) else 1


def cmd_experiment(args) -> int:
    if args.config:
        cfg = ExperimentConfig.from_file(args.config)
    else:
        if not args.N:
            raise ConfigError("give --config or at least one --N")
        cfg = ExperimentConfig(Ns=args.N, n=args.n, mu=tuple(args.mu), h_policy=args.h_policy,
                               h_value=args.h_value, prime_cutoff=args.cutoff, variant=args.variant,
                               arc_samples=args.arc_samples, seed=args.seed)
    if args.workers is not None:
        cfg.workers = args.workers
    if args.csv:
        cfg.csv_path = args.csv
    if args.json:
        cfg.json_path = args.json
    reports, arcs = run_experiment(cfg, return_arcs=True)
    if cfg.csv_path:
        write_report(reports, cfg.csv_path, "csv")
    if cfg.json_path:
        write_report(reports, cfg.json_path, "json", arcs)
    if not cfg.csv_path and not cfg.json_path:
        sys.stdout.write(emit_report(reports, "csv"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="estermann", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("count", help="exact count with predicted main term")
    _add_instance_args(p)
    p.add_argument("--variant", choices=VARIANTS, default="rho_minus_one")
    p.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--timing", action="store_true", help="fill elapsed_ms")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("predict", help="singular series, main term and dissection parameters")
    _add_instance_args(p)
    p.add_argument("--variant", choices=VARIANTS, default="rho_minus_one")
    p.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("sseries", help="truncated singular series")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)
    p.add_argument("--variant", choices=VARIANTS + ("both",), default="both")
    p.set_defaults(func=cmd_sseries)

    p = sub.add_parser("weyl", help="T(alpha; x, y), approximants and bound right-hand sides")
    p.add_argument("--alpha", required=True, help="'a/q+lam' split form, or a real")
    p.add_argument("--Q", type=float, default=1e6, help="denominator cap when alpha is a bare real")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--n", type=int, default=3)
    p.set_defaults(func=cmd_weyl)

    p = sub.add_parser("arcs", help="classify sampled alpha and report per-class bound ratios")
    _add_instance_args(p)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--eta", type=float, default=None, help="override the major-arc exponent")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_arcs)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--only", help="comma-separated criteria, e.g. C1,C4")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("experiment", help="batch run from a JSON config or flags")
    p.add_argument("--config")
    p.add_argument("--N", type=lambda s: int(float(s)), nargs="*")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--mu", type=float, nargs=3, default=[1 / 3, 1 / 3, 1 / 3])
    p.add_argument("--h-policy", dest="h_policy", choices=("exponent", "absolute", "threshold"), default="exponent")
    p.add_argument("--h-value", dest="h_value", type=float)
    p.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)
    p.add_argument("--variant", choices=VARIANTS, default="rho_minus_one")
    p.add_argument("--arc-samples", dest="arc_samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int)
    p.add_argument("--csv")
    p.add_argument("--json")
    p.set_defaults(func=cmd_experiment)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except EstermannError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
