"""Command-line driver.

Exit status: 0 when every check passes, 1 when a check fails (or a run stops
early), 2 for usage and file errors.
"""
import argparse
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import io
from .errors import CheckpointError, ParseError, RegionNotCoveredError, ValidationError
from .evolution import simulate
from .grid import SigmaSchedule

OK, FAILED, USAGE = 0, 1, 2


def _floats(text):
    return [float(x) for x in text.replace(",", " ").split()]


def _line(ok, text):
    print(f"{'PASS' if ok else 'FAIL'}  {text}")
    return ok


def cmd_simulate(args):
    cfg = io.load_config(args.config)
    out = Path(args.out or cfg.output.directory)
    if not out.is_absolute() and args.out is None:
        out = Path(args.config).resolve().parent / out
    traj = simulate(cfg.evolution_config(), progress=args.verbose)
    io.save_trajectory(traj, out, cfg)
    last = traj.records[-1]
    print(f"wrote {len(traj)} snapshots to {out}")
    print(f"t={last.t:.6g} sup|Gamma|={last.sup_abs_gamma:.6g} "
          f"energy={last.kinetic_energy:.6g}")
    if traj.error is not None:
        print(f"run stopped early: {traj.error}")
        return FAILED
    return OK


def cmd_verify_swirl(args):
    from .verification.swirl import SWIRL_TOL_C, check_swirl_bounds

    traj = io.load_trajectory(args.trajectory)
    rep = check_swirl_bounds(traj, SWIRL_TOL_C if args.c is None else args.c)
    print(f"boundary={rep.boundary_mode} tolerance={rep.tolerance:.3e} sup|Gamma(0)|={rep.s0:.6g}")
    print(f"sup increase {rep.sup_increase:.3e}, excess over initial {rep.sup_excess:.3e}, "
          f"pointwise excess {rep.pointwise_excess:.3e}")
    for p, inc in rep.lp_increase.items():
        print(f"L{p} increase {inc:.3e}")
    for msg in rep.failures:
        print(f"  {msg}")
    return OK if _line(rep.passed, "swirl bounds") else FAILED


def cmd_verify_thm1(args):
    from .verification.theorem import DEFAULT_CEILING, check_theorem_i, check_theorem_ii

    traj = io.load_trajectory(args.trajectory)
    check = check_theorem_i if args.part == "i" else check_theorem_ii
    ceiling = DEFAULT_CEILING[args.part] if args.ceiling is None else args.ceiling
    result = check(traj, args.radii, ceiling)
    print(f"part {args.part}, ceiling {ceiling:g}, grid {traj.grid.n_r}x{traj.grid.n_z}, "
          f"{traj.boundary_mode}")
    print(f"{'R':>6} {'measured':>13} {'proxy':>13} {'ratio':>13} {'clipped':>8}")
    for r in result:
        print(f"{r.R:6g} {r.measured:13.6e} {r.proxy:13.6e} {r.ratio:13.6e} "
              f"{r.clipped_fraction:8.4f}")
    _line(result.proxy_non_increasing, "proxy non-increasing as R decreases")
    ok = all(_line(r.passed, f"R={r.R:g} ratio finite and below ceiling") for r in result)
    return OK if ok and result.proxy_non_increasing else FAILED


def cmd_verify_scaling(args):
    from .verification import scaling

    families = {"swirling": scaling.swirling_family, "axial": scaling.axial_family,
                "vortex": scaling.vortex_family}
    fam = families[args.family]()
    ok = True
    for k in args.k:
        rep = scaling.check_scaling(fam, k)
        worst = max(rep.discrepancies.values())
        detail = " ".join(f"{name}={d:.1e}" for name, d in sorted(rep.discrepancies.items()))
        ok &= _line(rep.passed(args.tol), f"k={k:g} {detail} (max {worst:.1e})")
    return OK if ok else FAILED


def cmd_moser_ladder(args):
    from .norms import moser_ladder, omega_bar_sample

    traj = io.load_trajectory(args.trajectory)
    lam, sample = omega_bar_sample(traj)
    rep = moser_ladder(sample, SigmaSchedule(max(args.depth, 1)), args.depth)
    print(f"Lambda={lam:.6g}")
    for i, (s, v) in enumerate(zip(rep.sigmas, rep.values)):
        print(f"  i={i:2d} sigma={s:.6f} L={v:.8g}")
    print(f"direct sup^2={rep.direct_sup_sq:.8g} extrapolated={rep.extrapolated:.8g}")
    _line(abs(rep.extrapolated_gap) <= args.tol,
          f"extrapolated limit within {args.tol:.0%} ({rep.extrapolated_gap:+.3%})")
    ok = _line(abs(rep.relative_gap) <= args.tol,
               f"L_{args.depth} within {args.tol:.0%} of sup^2 ({rep.relative_gap:+.3%})")
    return OK if ok else FAILED


def cmd_helmholtz(args):
    from .verification import helmholtz as hz

    grid = hz.family_grid(args.n_r)
    ok = True
    for kind, solenoidal in (("helmholtz", False), ("axisym", True)):
        specs = hz.random_family(args.family_size, args.seed, solenoidal)
        for q in args.q:
            sweep = hz.family_sweep(specs, grid, q, kind)
            m = sweep.max_ratio
            ok &= _line(math.isfinite(m), f"{kind} q={q:.6g} max ratio {m:.6g} "
                        f"(median {float(np.median(sweep.ratios)):.6g})")
    return OK if ok else FAILED


def cmd_convergence(args):
    from .verification.convergence import operator_convergence

    levels = args.levels or [65, 129, 257]
    if len(levels) < 2:
        raise ValidationError("levels", "need at least two levels")
    res = operator_convergence(tuple(levels))
    ok = True
    for name, ratios in res.ratios.items():
        text = ", ".join(f"{q:.3f}" for q in ratios)
        ok &= _line(all(abs(q - 4.0) <= args.band for q in ratios),
                    f"{name} error ratios {text}")
    if args.mms:
        from .manufactured import mms_convergence

        mms = mms_convergence()
        for name, orders in (("Gamma", mms.gamma_orders), ("Omega", mms.omega_orders)):
            text = ", ".join(f"{p:.3f}" for p in orders)
            ok &= _line(all(abs(p - 2.0) <= 0.3 for p in orders), f"{name} MMS orders {text}")
    return OK if ok else FAILED


def build_parser():
    p = argparse.ArgumentParser(prog="swirlbound", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="integrate a configuration and save the trajectory")
    s.add_argument("config")
    s.add_argument("--out", help="output directory (default: output.directory)")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("verify-swirl", help="maximum-principle checks on a saved run")
    s.add_argument("trajectory")
    s.add_argument("--c", type=float, help="tolerance constant in 1e-8 + C h^2")
    s.set_defaults(func=cmd_verify_swirl)

    s = sub.add_parser("verify-thm1", help="vorticity bound ratio tests on a saved run")
    s.add_argument("trajectory")
    s.add_argument("--part", choices=("i", "ii"), default="i")
    s.add_argument("--radii", type=float, nargs="+", default=[0.25, 0.5, 1.0])
    s.add_argument("--ceiling", type=float)
    s.set_defaults(func=cmd_verify_thm1)

    s = sub.add_parser("verify-scaling", help="scaling identities on closed-form fields")
    s.add_argument("--k", type=float, nargs="+", default=[1.0, 0.5, 0.25])
    s.add_argument("--family", choices=("swirling", "axial", "vortex"), default="swirling")
    s.add_argument("--tol", type=float, default=1e-8)
    s.set_defaults(func=cmd_verify_scaling)

    s = sub.add_parser("moser-ladder", help="Moser ladder of Omega_plus on a saved run")
    s.add_argument("trajectory")
    s.add_argument("--depth", type=int, default=8)
    s.add_argument("--tol", type=float, default=0.05)
    s.set_defaults(func=cmd_moser_ladder)

    s = sub.add_parser("helmholtz", help="gradient-estimate ratios over random fields")
    s.add_argument("--q", type=float, nargs="+", default=[2.0, 10 / 3])
    s.add_argument("--family-size", type=int, default=50)
    s.add_argument("--seed", type=int, default=7)
    s.add_argument("--n-r", type=int, default=97)
    s.set_defaults(func=cmd_helmholtz)

    s = sub.add_parser("convergence", help="operator (and optionally MMS) convergence")
    s.add_argument("--levels", type=int, nargs="+")
    s.add_argument("--band", type=float, default=0.8)
    s.add_argument("--mms", action="store_true", help="also run the manufactured solution")
    s.set_defaults(func=cmd_convergence)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (OSError, CheckpointError, ParseError, ValidationError,
            RegionNotCoveredError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
