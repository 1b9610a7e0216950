"""Command-line entry point ``nearint``.

Exit codes: 0 success, 1 usage or domain error, 2 verification failure,
3 internal error.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from fractions import Fraction

from . import certificates, constructions, oracles, profile, snowflake, spherical
from .errors import CapExceededError, DomainError, NearIntError, PreconditionError
from .fileio import read_certificate, read_pointset, write_certificate, write_pointset
from .geometry import NormSpec, as_rational, check_delta, pairwise_verify

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (DomainError, ValueError, ZeroDivisionError) as e:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from e


def _delta(text: str) -> Fraction:
    try:
        return check_delta(_rational(text))
    except DomainError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _delta_or_auto(text: str):
    return "auto" if text.strip().lower() == "auto" else _delta(text)


def _eta_or_auto(text: str):
    if text.strip().lower() == "auto":
        return "auto"
    try:
        return float(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"eta must be a number or 'auto', got {text!r}") from e


def _norm(text: str) -> NormSpec:
    try:
        return NormSpec.parse(text)
    except DomainError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _cmd_construct_sarkozy(a) -> int:
    try:
        S, params = constructions.build_sarkozy3d(a.X, a.delta, cap=a.cap)
    except CapExceededError as e:
        print(f"error: {e}", file=sys.stderr)
        print(f"count: {e.count} (k={e.params.k}, t={e.params.t}); not materialized")
        return EXIT_USAGE
    meta = {"construction": "sarkozy3d", "X": params.X, "delta": params.delta,
            "k": params.k, "t": params.t, "count": params.count,
            "count_lower_bound": params.lower_bound(), "seed": a.seed}
    write_pointset(a.out, S, a.delta, meta)
    print(f"k={params.k} t={params.t} points={len(S)} radius<={params.radius} -> {a.out}")
    return EXIT_OK


def _cmd_construct_snowflake(a) -> int:
    eta = snowflake.best_eta(a.M, a.levels) if a.eta == "auto" else a.eta
    curve = snowflake.build_snowflake_curve(a.levels, eta)
    delta = None if a.delta == "auto" else a.delta
    S, p = snowflake.snowflake_lift(a.M, curve, delta)
    meta = {"construction": "snowflake-lift", "M": a.M, "levels": a.levels, "eta": eta,
            "lambda": p.lam, "c_emp": p.c_emp, "C_emp": p.C_emp, "delta_phi": p.delta_phi,
            "seed": a.seed}
    write_pointset(a.out, S, p.delta, meta)
    print(f"eta={eta:g} delta_phi={p.delta_phi:.6g} lambda={p.lam:.6g} "
          f"points={len(S)} -> {a.out}")
    return EXIT_OK


def _cmd_verify(a) -> int:
    f = read_pointset(a.inp)
    delta = a.delta if a.delta is not None else f.delta
    if delta is None:
        raise DomainError("no --delta given and the file records none")
    rep = pairwise_verify(f.points, delta, a.norm, workers=a.threads)
    print(rep.summary())
    print(f"points: {len(f.points)}")
    return EXIT_OK if rep.passed else EXIT_FAIL


def _cmd_certify(a) -> int:
    res = certificates.certify_negative_polynomial(a.delta, a.ell, a.max_degree, a.grid_points)
    write_certificate(a.out, res)
    if isinstance(res, certificates.TrigCertificate):
        print(f"feasible: degree={res.degree} margin={res.margin:.6g} "
              f"grid_step={res.grid_step:.3g} -> {a.out}")
    else:
        print(f"infeasible: best grid margin {res.best_margin:.3g} over degrees "
              f"{list(res.degrees_tried)} -> {a.out}")
    return EXIT_OK


def _cmd_check_cert(a) -> int:
    res = read_certificate(a.inp)
    if isinstance(res, certificates.Infeasible):
        raise DomainError("file holds an infeasible report, not a certificate")
    ok = certificates.check_certificate(res)
    print(f"certificate delta={res.delta} ell={res.ell} degree={res.degree} "
          f"margin={res.margin:.6g}: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_besselcheck(a) -> int:
    S = read_pointset(a.inp).points
    d = S.dim - 1 if a.dim_sphere is None else a.dim_sphere
    fit = spherical.spherical_constant(d, samples=a.samples, seed=a.seed)
    print(f"C_{d} = {fit.C:.8f} +- {fit.stderr:.2g} ({fit.samples} samples)")
    floor = -1e-6 * len(S)
    worst = math.inf
    for k in range(1, a.kmax + 1):
        e = spherical.bessel_energy(S, k, fit.C, d)
        worst = min(worst, e)
        print(f"k={k} energy={e:.10g}")
    ok = worst >= floor
    print(f"min energy {worst:.6g} (floor {floor:.1e}): {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_bruteforce(a) -> int:
    f = read_pointset(a.inp)
    delta = a.delta if a.delta is not None else f.delta
    if delta is None:
        raise DomainError("no --delta given and the file records none")
    if a.greedy:
        idx = oracles.greedy_valid_subset(f.points, delta, seed=a.seed)
        kind = "greedy"
    else:
        idx = oracles.max_valid_subset(f.points, delta)
        kind = "exact"
    print(f"{kind} valid subset: {len(idx)} of {len(f.points)} candidates "
          "(a lower bound for the ball's maximum)")
    print("indices: " + " ".join(map(str, idx)))
    if a.out:
        sub = f.points.subset(idx)
        write_pointset(a.out, sub, delta, {"source": str(a.inp), "search": kind, "seed": a.seed})
    return EXIT_OK


def _cmd_bound(a) -> int:
    prof = profile.bound_profile(a.dim)
    print(f"d={a.dim}: f_d(X) = {prof}")
    if a.X is not None:
        X = float(a.X)
        print(f"f_d({X:g}) = {prof(X):.10g}")
        print(f"integral_2^(4X) f_d(t) t^(-d/2-1) dt = {profile.recursion_integral(a.dim, X):.12g}")
    return EXIT_OK


_AXES = "xyzw"


def _cmd_plot_data(a) -> int:
    S = read_pointset(a.inp).points
    proj = a.projection.lower()
    if len(proj) != 2 or any(ch not in _AXES for ch in proj) or proj[0] == proj[1]:
        raise DomainError(f"projection must name two distinct axes from {_AXES!r}, got {proj!r}")
    cols = [_AXES.index(ch) for ch in proj]
    if max(cols) >= S.dim:
        raise DomainError(f"projection {proj!r} needs dimension > {max(cols)}, points have {S.dim}")
    with open(a.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["index", proj[0], proj[1]])
        for i, row in enumerate(S.coords.tolist()):
            w.writerow([i, row[cols[0]], row[cols[1]]])
    print(f"{len(S)} rows ({proj} projection) -> {a.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for all randomness")

    ap = _Parser(prog="nearint", description="Point sets avoiding near-integer distances.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    con = sub.add_parser("construct", help="build a point set")
    csub = con.add_subparsers(dest="construction", required=True, parser_class=_Parser)
    s3 = csub.add_parser("sarkozy3d", parents=[common], help="3D digit-expansion set")
    s3.add_argument("--X", type=_rational, required=True)
    s3.add_argument("--delta", type=_delta, required=True)
    s3.add_argument("--out", required=True)
    s3.add_argument("--cap", type=int, default=constructions.DEFAULT_POINT_CAP)
    s3.set_defaults(func=_cmd_construct_sarkozy)

    sl = csub.add_parser("snowflake-lift", parents=[common], help="4D lift of {1..M}")
    sl.add_argument("--M", type=int, default=64)
    sl.add_argument("--eta", type=_eta_or_auto, default=snowflake.DEFAULT_ETA,
                    help="displacement amplitude, or 'auto' to sweep")
    sl.add_argument("--levels", type=int, default=20)
    sl.add_argument("--delta", type=_delta_or_auto, default="auto")
    sl.add_argument("--out", required=True)
    sl.set_defaults(func=_cmd_construct_snowflake)

    ve = sub.add_parser("verify", parents=[common], help="check every pairwise gap")
    ve.add_argument("--in", dest="inp", required=True)
    ve.add_argument("--delta", type=_delta)
    ve.add_argument("--norm", type=_norm, default=None)
    ve.add_argument("--threads", type=int, default=None)
    ve.set_defaults(func=_cmd_verify)

    ce = sub.add_parser("certify", parents=[common], help="search for a negativity certificate")
    ce.add_argument("--delta", type=_delta, required=True)
    ce.add_argument("--ell", type=int, required=True)
    ce.add_argument("--max-degree", type=int, default=64)
    ce.add_argument("--grid-points", type=int, default=None)
    ce.add_argument("--out", required=True)
    ce.set_defaults(func=_cmd_certify)

    cc = sub.add_parser("check-cert", parents=[common], help="re-verify a certificate file")
    cc.add_argument("--in", dest="inp", required=True)
    cc.set_defaults(func=_cmd_check_cert)

    bc = sub.add_parser("besselcheck", parents=[common], help="Bessel energy diagnostics")
    bc.add_argument("--in", dest="inp", required=True)
    bc.add_argument("--kmax", type=int, required=True)
    bc.add_argument("--dim-sphere", type=int, default=None)
    bc.add_argument("--samples", type=int, default=spherical.DEFAULT_SAMPLES)
    bc.set_defaults(func=_cmd_besselcheck)

    bf = sub.add_parser("bruteforce", parents=[common], help="largest valid subset")
    bf.add_argument("--in", dest="inp", required=True)
    bf.add_argument("--delta", type=_delta)
    g = bf.add_mutually_exclusive_group()
    g.add_argument("--exact", action="store_true")
    g.add_argument("--greedy", action="store_true")
    bf.add_argument("--out", default=None)
    bf.set_defaults(func=_cmd_bruteforce)

    bo = sub.add_parser("bound", parents=[common], help="upper-bound growth profile")
    bo.add_argument("--dim", type=int, required=True)
    bo.add_argument("--X", type=_rational, default=None)
    bo.set_defaults(func=_cmd_bound)

    pd = sub.add_parser("plot-data", parents=[common], help="CSV of a 2D projection")
    pd.add_argument("--in", dest="inp", required=True)
    pd.add_argument("--projection", default="yz")
    pd.add_argument("--out", required=True)
    pd.set_defaults(func=_cmd_plot_data)
    return ap


def run_cli(args=None) -> int:
    try:
        ns = build_parser().parse_args(args)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:  # --help
        return EXIT_OK if not e.code else EXIT_USAGE
    try:
        return ns.func(ns)
    except (DomainError, PreconditionError, CapExceededError, FileNotFoundError,
            IsADirectoryError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NearIntError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as e:  # noqa: BLE001
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
