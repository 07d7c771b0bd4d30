"""Command-line front end.

Subcommands: ``classify``, ``snapshot``, ``verify``, ``scan``, ``fission``.
Exit status is 0 on success, 1 on invalid input or domain errors and 2 when
a verification fails.  Set ``VAKH_LOG`` (e.g. ``DEBUG``) for verbose logs.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from .analysis import DEFAULT_PROMINENCE, fission_timeline
from .bilinear import COEFFICIENT_TOL, GRID_TOL, verification_report
from .classify import classify_regime, region_scan
from .errors import VakhnenkoError
from .presets import PRESETS
from .soliton import UncertifiedTauWarning, build_one_soliton, build_two_soliton
from .transform import DEFAULT_SAMPLES, snapshot

log = logging.getLogger("vakhnenko")

EXIT_OK, EXIT_DOMAIN, EXIT_VERIFY = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_DOMAIN, f"{self.prog}: error: {message}\n")


def _parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("parameters")
    g.add_argument("--preset", choices=sorted(PRESETS))
    g.add_argument("--alpha", type=float)
    g.add_argument("--v", type=float, help="velocity of a one-soliton")
    g.add_argument("--v1", type=float)
    g.add_argument("--v2", type=float)
    g.add_argument("--eta01", type=float, default=0.0)
    g.add_argument("--eta02", type=float, default=0.0)
    g.add_argument("--dispersion", choices=("coupled", "exact"), default="coupled")
    g.add_argument("--coefficients", choices=("printed", "oracle"), default="printed")
    o = common.add_argument_group("output")
    o.add_argument("--format", choices=("csv", "json"), default=None)
    o.add_argument("--out", type=Path)
    o.add_argument("--json", action="store_true", help="print machine-readable JSON")

    p = _Parser(prog="vakhnenko", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="loop/cusp/hump verdict")
    c.add_argument("--tie-tol", type=float, default=1e-9)

    s = sub.add_parser("snapshot", parents=[common], help="sample a physical profile")
    s.add_argument("--time", type=float, nargs="+")
    s.add_argument("--T-min", dest="T_min", type=float)
    s.add_argument("--T-max", dest="T_max", type=float)
    s.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    s.add_argument("--x0", type=float, default=0.0)

    v = sub.add_parser("verify", parents=[common], help="residual certification report")
    v.add_argument("--tol", type=float, default=COEFFICIENT_TOL)
    v.add_argument("--grid-tol", type=float, default=GRID_TOL)

    sc = sub.add_parser("scan", parents=[common], help="regime map over (alpha, v)")
    sc.add_argument("--alpha-min", type=float, default=0.0)
    sc.add_argument("--alpha-max", type=float, default=3.0)
    sc.add_argument("--v-min", type=float, default=0.05)
    sc.add_argument("--v-max", type=float, default=1.0)
    sc.add_argument("--grid", type=int, nargs=2, default=(60, 60), metavar=("NA", "NV"))

    f = sub.add_parser("fission", parents=[common], help="structure census over time")
    f.add_argument("--time", type=float, nargs="+")
    f.add_argument("--t-start", type=float)
    f.add_argument("--t-end", type=float)
    f.add_argument("--t-steps", type=int)
    f.add_argument("--T-min", dest="T_min", type=float)
    f.add_argument("--T-max", dest="T_max", type=float)
    f.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    f.add_argument("--x0", type=float, default=0.0)
    f.add_argument("--prominence", type=float, default=DEFAULT_PROMINENCE)
    return p


def _resolve(args) -> None:
    """Fill in preset values and validate numerics, collecting every problem."""
    problems = []
    if args.preset:
        pr = PRESETS[args.preset]
        args.alpha = pr.alpha if args.alpha is None else args.alpha
        args.v1 = pr.v1 if args.v1 is None else args.v1
        args.v2 = pr.v2 if args.v2 is None else args.v2
        if getattr(args, "time", "missing") is None and not getattr(args, "t_start", None):
            args.time = list(pr.times)
    if args.command != "scan":
        if args.alpha is None:
            problems.append("--alpha is required")
        elif not (np.isfinite(args.alpha) and args.alpha >= 0):
            problems.append(f"--alpha must be finite and >= 0 (got {args.alpha})")
        if args.v is not None and (args.v1 is not None or args.v2 is not None):
            problems.append("give either --v or --v1/--v2, not both")
        if args.v is None and args.v1 is None:
            problems.append("a velocity is required (--v, or --v1 and --v2)")
        if args.v is None and (args.v1 is None) != (args.v2 is None) and args.v2 is None:
            args.v, args.v1 = args.v1, None
        for name in ("v", "v1", "v2"):
            val = getattr(args, name)
            if val is not None and not (np.isfinite(val) and val > 0):
                problems.append(f"--{name} must be positive (got {val})")
        if args.v1 is not None and args.v2 is not None and args.v1 == args.v2:
            problems.append("--v1 and --v2 must differ")
    if args.command == "classify" and args.v1 is not None:
        problems.append("classify takes a single --v")
    if args.command in ("snapshot", "fission"):
        if args.samples < 3:
            problems.append("--samples must be at least 3")
        if (args.T_min is None) != (args.T_max is None):
            problems.append("--T-min and --T-max go together")
        elif args.T_min is not None and not args.T_min < args.T_max:
            problems.append("--T-min must be below --T-max")
    if args.command == "snapshot" and not args.time:
        problems.append("--time is required")
    if args.command == "fission":
        ranged = [args.t_start, args.t_end, args.t_steps]
        if not args.time and None in ranged:
            problems.append("give --time values or all of --t-start/--t-end/--t-steps")
        if None not in ranged and not (args.t_start < args.t_end and args.t_steps >= 2):
            problems.append("need --t-start < --t-end and --t-steps >= 2")
        if not args.prominence > 0:
            problems.append("--prominence must be positive")
    if args.command == "verify" and not (args.tol > 0 and args.grid_tol > 0):
        problems.append("tolerances must be positive")
    if args.command == "scan":
        if args.alpha_min < 0 or args.alpha_max <= args.alpha_min:
            problems.append("need 0 <= --alpha-min < --alpha-max")
        if args.v_min <= 0 or args.v_max <= args.v_min:
            problems.append("need 0 < --v-min < --v-max")
        if min(args.grid) < 2:
            problems.append("--grid must be at least 2 2")
    if args.out is not None and args.out.parent and not args.out.parent.exists():
        problems.append(f"output directory {args.out.parent} does not exist")
    if problems:
        raise UsageError("; ".join(problems))


def _tau(args):
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", UncertifiedTauWarning)
        if args.v1 is not None and args.v2 is not None:
            params, tau = build_two_soliton(
                args.alpha, args.v1, args.v2, args.eta01, args.eta02, dispersion=args.dispersion,
                coefficients=args.coefficients, strict=False)
        else:
            params, tau = build_one_soliton(args.alpha, args.v, args.eta01, args.dispersion)
    for w in caught:
        log.warning("%s", w.message)
    return params, tau


def _emit(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        out.write_text(text if text.endswith("\n") else text + "\n")
        log.info("wrote %s", out)


def _cmd_classify(args) -> int:
    rc = classify_regime(args.alpha, args.v, args.tie_tol, args.dispersion)
    if args.json or args.format == "json":
        _emit(json.dumps(rc.to_dict(), indent=2), args.out)
    else:
        _emit(f"{rc.regime.value.upper()}  alpha={rc.alpha:g} v={rc.v:g}  K={rc.K:.12g}  "
              f"lambda={rc.lam:.12g}  alpha*={rc.alpha_star:.12g}  U_M={rc.U_M:.12g}", args.out)
    return EXIT_OK


def _with_time(path: Path, t: float, many: bool) -> Path:
    return path if not many else path.with_name(f"{path.stem}_t{t:g}{path.suffix}")


def _cmd_snapshot(args) -> int:
    _, tau = _tau(args)
    T_range = None if args.T_min is None else (args.T_min, args.T_max)
    fmt = args.format or "csv"
    many = len(args.time) > 1
    blobs = []
    for t in args.time:
        prof = snapshot(tau, t, T_range, args.samples, args.x0)
        meta = {"multivalued": prof.multivalued, "sign_changes": prof.sign_changes}
        if tau.kind == "one-soliton":
            meta["classification"] = classify_regime(tau.alpha, tau.params.modes[0].v,
                                                     dispersion=tau.params.dispersion).to_dict()
        if tau.certificate is not None:
            meta["certificate"] = tau.certificate.to_dict()
        if fmt == "csv" and args.out is not None:
            path = _with_time(args.out, t, many)
            prof.to_csv(path)
            prof.write_sidecar(path.with_suffix(path.suffix + ".json"), **meta)
            log.info("wrote %s", path)
        elif fmt == "csv":
            sys.stdout.write("T,x,U,xT\n")
            for row in zip(prof.T, prof.x, prof.U, prof.xT):
                sys.stdout.write(",".join(repr(float(v)) for v in row) + "\n")
        else:
            blobs.append({"t": t, "x0": args.x0, **prof.metadata, **meta,
                          "T": prof.T.tolist(), "x": prof.x.tolist(),
                          "U": prof.U.tolist(), "xT": prof.xT.tolist()})
    if fmt == "json":
        _emit(json.dumps(blobs if many else blobs[0]), args.out)
    return EXIT_OK


def _fmt(v):
    return "-" if v is None else f"{v:.3e}"


def _cmd_verify(args) -> int:
    rep = verification_report(args.alpha, args.v1 if args.v is None else args.v,
                              args.v2 if args.v is None else None, args.eta01, args.eta02,
                              tol=args.tol, grid_tol=args.grid_tol, dispersion=args.dispersion,
                              coefficients=args.coefficients)
    text = json.dumps(rep, indent=2)
    if args.out is not None:
        args.out.write_text(text + "\n")
    if args.json:
        sys.stdout.write(text + "\n")
    else:
        lines = [f"verification  alpha={args.alpha:g}  v={rep['v']}  model={rep['dispersion']}",
                 f"{'check':<24}{'max rel coef':>14}{'grid max':>12}  result"]
        for name, r in rep["checks"].items():
            lines.append(f"{name:<24}{_fmt(r['max_relative_coefficient']):>14}"
                         f"{_fmt(r['grid_max_abs']):>12}  {'PASS' if r['passed'] else 'FAIL'}")
        if "coefficients" in rep:
            co = rep["coefficients"]
            lines.append("coefficient comparison (order-by-order vs closed form)")
            for k in "ABC":
                lines.append(f"  {k}: solved={co['solved'][k]:.12g}  closed={co['printed'][k]:.12g}  "
                             f"rel.dev={co['relative_deviation'][k]:.2e}  "
                             f"{'agree' if co['formula_agrees'][k] else 'DISAGREE'}")
            lines.append(f"  ansatz consistent: {co['consistent']}")
        ref = rep["exact_reference"]
        if ref.get("available"):
            lines.append(f"exact-model reference: bilinear max rel "
                         f"{_fmt(ref['bilinear']['max_relative_coefficient'])}, grid max "
                         f"{_fmt(ref['pde']['grid_max_abs'])}  {'PASS' if ref['passed'] else 'FAIL'}")
        else:
            lines.append(f"exact-model reference unavailable: {ref['reason']}")
        lines.append(f"overall: {'PASS' if rep['passed'] else 'FAIL'}")
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK if rep["passed"] else EXIT_VERIFY


def _cmd_scan(args) -> int:
    scan = region_scan((args.alpha_min, args.alpha_max), (args.v_min, args.v_max),
                       tuple(args.grid), dispersion=args.dispersion)
    if args.format == "json" or args.json:
        rows = [dict(zip(("alpha", "v", "K", "lambda", "U_M", "regime"), r)) for r in scan.rows()]
        _emit(json.dumps(rows), args.out)
    elif args.out is not None:
        scan.to_csv(args.out)
    else:
        sys.stdout.write("alpha,v,K,lambda,U_M,regime\n")
        for r in scan.rows():
            sys.stdout.write(",".join(repr(x) if isinstance(x, float) else x for x in r) + "\n")
    return EXIT_OK


def _cmd_fission(args) -> int:
    _, tau = _tau(args)
    T_range = None if args.T_min is None else (args.T_min, args.T_max)
    tl = fission_timeline(tau, args.t_start, args.t_end, args.t_steps, args.prominence,
                          times=args.time, n_samples=args.samples, x0=args.x0, T_range=T_range)
    if args.format == "csv" and args.out is not None:
        tl.to_csv(args.out)
    elif args.out is not None or args.json or args.format == "json":
        _emit(json.dumps(tl.to_list(), indent=2), args.out)
    if not args.json and args.format != "json":
        for c in tl.censuses:
            shapes = ", ".join(f"U={s.U_peak:.4g}@x={s.x_peak:.4g}"
                               f"{' (multivalued)' if s.multivalued else ''}" for s in c.structures)
            sys.stdout.write(f"t={c.t:g}: {c.count} structure(s)  {shapes}\n")
        if tl.fission_index is not None:
            sys.stdout.write(f"fission between t={tl.times[tl.fission_index - 1]:g} "
                             f"and t={tl.times[tl.fission_index]:g}\n")
    return EXIT_OK


COMMANDS = {"classify": _cmd_classify, "snapshot": _cmd_snapshot, "verify": _cmd_verify,
            "scan": _cmd_scan, "fission": _cmd_fission}


def main(argv=None) -> int:
    level = os.environ.get("VAKH_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = _parser()
    args = parser.parse_args(argv)
    try:
        _resolve(args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        sys.stderr.write(f"vakhnenko {args.command}: {exc}\n")
        return EXIT_DOMAIN
    except (VakhnenkoError, OSError) as exc:
        sys.stderr.write(f"vakhnenko {args.command}: {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
