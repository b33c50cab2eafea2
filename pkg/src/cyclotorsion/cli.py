"""Command-line front end: subcommands, manifests, delimited output.

Every file-writing subcommand confines itself to the --out directory and
drops a manifest.json there: config digest, input digests, result digests,
wall time. Result files are canonical, so identical configs reproduce
identical digests; the wall time lives only in the manifest.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 exhausted
precision or budget.
"""

import argparse
import csv
import hashlib
import json
import math
import os
import sys
import time
from fractions import Fraction

import mpmath

from . import __version__
from .analytic import LatticeCache, period_lattice, theta_map
from .counting import (
    CompactSetSpec,
    CountReport,
    compute_delta,
    count_rational_points,
    degree_bound_report,
    delta_derivation,
)
from .cyclotomic import RootOfUnityTuple, has_vanishing_subsum, sl2_torsion_order
from .elliptic import legendre_scheme
from .errors import BudgetExceeded, CyclotorsionError, PrecisionExhausted
from .search import (
    SearchConfig,
    TorsionCertificate,
    certify,
    enumerate_tuples,
    run_search,
    search_report,
)
from .serde import canonical_json, json_digest


def _env_precision() -> int:
    raw = os.environ.get("CYCLOTORSION_PRECISION", "")
    try:
        bits = int(raw)
        if bits >= 64:
            return bits
    except ValueError:
        pass
    if raw:
        print("ignoring invalid CYCLOTORSION_PRECISION=%r" % raw, file=sys.stderr)
    return 128


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _ensure_out(args) -> str:
    os.makedirs(args.out, exist_ok=True)
    return args.out


def _write_text(out_dir: str, name: str, text: str) -> str:
    path = os.path.join(out_dir, name)
    with open(path, "w") as fh:
        fh.write(text)
    return path


def _write_manifest(out_dir, subcommand, config, inputs, results, wall, bits):
    manifest = {
        "schema": 1,
        "tool": "cyclotorsion",
        "version": __version__,
        "subcommand": subcommand,
        "config": config,
        "config_digest": json_digest(config),
        "inputs": {os.path.basename(p): _sha256(p) for p in inputs},
        "results": {os.path.basename(p): _sha256(p) for p in results},
        "precision_bits": bits,
        "wall_time_s": round(wall, 3),
    }
    return _write_text(out_dir, "manifest.json", canonical_json(manifest) + "\n")


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise CyclotorsionError("not a rational number: %r" % text)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_sl2(args) -> int:
    from .cyclotomic import CyclotomicField

    lam = CyclotomicField.get(1).from_rational(_parse_fraction(args.lam))
    order = sl2_torsion_order(lam)
    print("order %d" % order if order is not None else "infinite")
    return 0


def _cmd_delta(args) -> int:
    bad = [_parse_fraction(s) for s in args.bad.split(",")] if args.bad else []
    info = delta_derivation(_parse_fraction(args.a), bad, args.kdeg,
                            args.precision_bits)
    print("delta = %s" % info["delta"])
    print("1/delta = %s" % info["inverse_delta"])
    print("l = %d  K_degree = %d  formula: %s"
          % (info["l"], info["K_degree"], info["formula"]))
    print("bad points: %s" % (", ".join(info["bad_points"]) or "none"))
    if args.out:
        start = time.time()
        out = _ensure_out(args)
        path = _write_text(out, "delta.json",
                           canonical_json({"schema": 1, **info}) + "\n")
        _write_manifest(out, "delta", vars_config(args), [], [path],
                        time.time() - start, args.precision_bits)
    return 0


def _cmd_betti(args) -> int:
    scheme = legendre_scheme(args.section_x)
    lam = _parse_fraction(args.lam)
    bits = args.precision_bits
    with mpmath.workprec(bits):
        lp = theta_map(scheme, mpmath.mpf(lam.numerator) / lam.denominator, (),
                       LatticeCache(), prec=bits)
        print("b1 = %s" % mpmath.nstr(lp.b1, 30))
        print("b2 = %s" % mpmath.nstr(lp.b2, 30))
        print("err = %s" % mpmath.nstr(lp.err, 10))
    return 0


def _cmd_periods(args) -> int:
    scheme = legendre_scheme(args.section_x)
    lam = _parse_fraction(args.lam)
    sec = scheme.specialize(lam)
    bits = args.precision_bits
    lat = period_lattice(sec.curve.a, sec.curve.b, sec.curve.c, bits)
    with mpmath.workprec(bits):
        print("omega1 = %s" % mpmath.nstr(lat.omega1, 30))
        print("omega2 = %s" % mpmath.nstr(lat.omega2, 30))
        print("tau = %s" % mpmath.nstr(lat.tau, 30))
        print("err = %s" % mpmath.nstr(lat.err, 10))
    return 0


def _cmd_tuples(args) -> int:
    rows = []
    for t in enumerate_tuples(args.n, args.nmax,
                              skip_vanishing_subsums=args.skip_subsums):
        rows.append((t.order, " ".join(str(e) for e in t.exponents),
                     has_vanishing_subsum(t)))
    if args.out:
        start = time.time()
        out = _ensure_out(args)
        path = os.path.join(out, "tuples.csv")
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["order", "exponents", "vanishing_subsum"])
            writer.writerows(rows)
        _write_manifest(out, "tuples", vars_config(args), [], [path],
                        time.time() - start, 0)
    else:
        for order, exps, subsum in rows:
            print("%d\t%s\t%s" % (order, exps, "subsum" if subsum else "-"))
    print("%d tuples" % len(rows))
    return 0


def _cmd_search(args) -> int:
    start = time.time()
    if args.config:
        with open(args.config) as fh:
            config = SearchConfig.from_json_dict(json.load(fh))
    else:
        config = SearchConfig(
            scheme=legendre_scheme(args.section_x),
            n=args.n, N_max=args.nmax, T_max=args.tmax,
            precision=args.precision_bits,
            skip_vanishing_subsums=args.skip_subsums,
            budget=args.budget,
        )
    out = _ensure_out(args)
    try:
        certs = run_search(config, resume=args.resume, jobs=args.jobs)
    except BudgetExceeded as exc:
        print("budget exhausted; resume with --resume %s" % exc.resume_token,
              file=sys.stderr)
        return 3
    cert_dir = os.path.join(out, "certs")
    os.makedirs(cert_dir, exist_ok=True)
    results = []
    for k, cert in enumerate(certs):
        path = os.path.join(cert_dir, "cert-%03d.json" % k)
        with open(path, "w") as fh:
            fh.write(cert.canonical() + "\n")
        results.append(path)
    index_path = os.path.join(out, "index.csv")
    with open(index_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["N", "exponents", "lambda_min_poly", "curve_order",
                         "tuple_order", "T", "degree"])
        for cert in certs:
            writer.writerow([
                cert.tuple.order,
                " ".join(str(e) for e in cert.tuple.exponents),
                cert.lambda_min_poly, cert.curve_order, cert.tuple_order,
                cert.combined_order, cert.degree,
            ])
    results.append(index_path)
    report = search_report(config, certs)
    results.append(_write_text(out, "report.json",
                               canonical_json({"schema": 1, **report}) + "\n"))
    figures = []
    if not args.no_figures:
        from .figures import render_degree_figure

        fig_path = os.path.join(out, "degrees.png")
        render_degree_figure(degree_bound_report(certs), fig_path)
        figures.append(fig_path)
    _write_manifest(out, "search", config.to_json_dict(), [],
                    results + figures, time.time() - start, config.precision)
    print("%d certificates -> %s" % (len(certs), out))
    return 0


def _cmd_certify(args) -> int:
    with open(args.file) as fh:
        cert = TorsionCertificate.from_json_dict(json.load(fh))
    result = certify(cert, prescreen_primes=args.prescreen_primes)
    if result.ok:
        print("PASS: order %d at T = %d, degree %d"
              % (cert.curve_order, cert.combined_order, cert.degree))
        return 0
    print("FAIL: %d check(s) rejected" % len(result.failures))
    for failure in result.failures:
        print("  %s: %s" % (failure["check"], failure.get("residue", "")))
    return 1


def _cmd_count(args) -> int:
    start = time.time()
    scheme = legendre_scheme(args.section_x)
    spec = CompactSetSpec.default(scheme)
    report = count_rational_points(scheme=scheme, spec=spec, T_max=args.tmax,
                                   precision=args.precision_bits, n=args.n)
    out = _ensure_out(args)
    counts_path = os.path.join(out, "counts.csv")
    with open(counts_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["T", "N_nosubsum", "N_subsum"])
        writer.writerows(report.csv_rows())
    results = [counts_path]
    results.append(_write_text(
        out, "report.json",
        canonical_json({"schema": 1, **report.to_json_dict()}) + "\n"))
    figures = []
    if not args.no_figures:
        from .figures import render_count_figure

        fig_path = os.path.join(out, "counts.png")
        render_count_figure(report, fig_path)
        figures.append(fig_path)
    _write_manifest(out, "count", report.to_json_dict()["config"], [],
                    results + figures, time.time() - start, args.precision_bits)
    slope = "n/a" if report.slope is None else "%.3f" % report.slope
    print("N(T) = %s, slope %s -> %s"
          % (report.counts_total(), slope, out))
    if report.slope_warning:
        print("warning: no-subsum slope at or above 0.7", file=sys.stderr)
    return 0


def vars_config(args) -> dict:
    skip = {"func", "out"}
    return {k: v for k, v in sorted(vars(args).items())
            if k not in skip and v is not None}


# ---------------------------------------------------------------------------
# parser


def _add_precision(p, default_bits):
    p.add_argument("--precision-bits", type=int, default=default_bits,
                   help="working precision in bits (default: "
                        "CYCLOTORSION_PRECISION or 128)")


def _add_scheme(p):
    p.add_argument("--section-x", default="2",
                   help="section abscissa of the Legendre family (default 2)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyclotorsion",
        description="torsion specializations at sums of roots of unity")
    sub = parser.add_subparsers(dest="command", required=True)
    env_bits = _env_precision()

    p = sub.add_parser("sl2", help="order of [[0,1],[-1,lam]] in SL2")
    p.add_argument("--lambda", dest="lam", required=True,
                   help="rational value, e.g. 1 or 3/2")
    p.set_defaults(func=_cmd_sl2)

    p = sub.add_parser("delta", help="compact-set radius with derivation")
    p.add_argument("--a", default="1", help="height bound (rational)")
    p.add_argument("--bad", default="", help="comma-separated bad points")
    p.add_argument("--kdeg", type=int, default=1, help="degree of the base field")
    p.add_argument("--out", help="optional output directory")
    _add_precision(p, env_bits)
    p.set_defaults(func=_cmd_delta)

    p = sub.add_parser("betti", help="Betti coordinates of the section")
    p.add_argument("--lambda", dest="lam", required=True)
    _add_scheme(p)
    _add_precision(p, env_bits)
    p.set_defaults(func=_cmd_betti)

    p = sub.add_parser("periods", help="period lattice at a rational fiber")
    p.add_argument("--lambda", dest="lam", required=True)
    _add_scheme(p)
    _add_precision(p, env_bits)
    p.set_defaults(func=_cmd_periods)

    p = sub.add_parser("tuples", help="enumerate root-of-unity tuples")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--skip-subsums", action="store_true")
    p.add_argument("--out", help="optional output directory")
    p.set_defaults(func=_cmd_tuples)

    p = sub.add_parser("search", help="torsion search over tuple parameters")
    p.add_argument("--config", help="SearchConfig JSON file")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--nmax", type=int, default=8)
    p.add_argument("--tmax", type=int, default=8)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--budget", type=int)
    p.add_argument("--resume", help="resume token from a budget stop")
    p.add_argument("--skip-subsums", action="store_true")
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("--out", required=True)
    _add_scheme(p)
    _add_precision(p, env_bits)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("certify", help="re-verify a certificate file")
    p.add_argument("--file", required=True)
    p.add_argument("--prescreen-primes", type=int, default=0)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("count", help="count rational points of the log set")
    p.add_argument("--tmax", type=int, default=32)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("--out", required=True)
    _add_scheme(p)
    _add_precision(p, env_bits)
    p.set_defaults(func=_cmd_count)

    return parser


def dispatch(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print("budget exhausted; resume with --resume %s" % exc.resume_token,
              file=sys.stderr)
        return 3
    except PrecisionExhausted as exc:
        print("precision exhausted: %s" % exc, file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print("missing file: %s" % exc, file=sys.stderr)
        return 2
    except CyclotorsionError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
