"""
Command-line front end.

Exit codes: 0 ok, 1 parse/input error, 2 invalid channel or inconsistent
parameters, 3 unsupported regime (tau = 1), 4 numerical failure.
"""

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import attack as atk
from . import channel as chn
from . import dilation as dil
from . import keyrate, protocol
from .errors import CompletionError, DomainError, InvalidChannelError, SizeError, UnsupportedRegimeError

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_REGIME, EXIT_NUMERIC = 0, 1, 2, 3, 4

SWEEP_VARIABLES = ("tau", "w", "eta", "mu")
SWEEP_COLUMNS = ("b_alpha", "b_beta", "b_inf", "eta")
BRACKET_WIDTH = 1e-6


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _tol():
    raw = os.environ.get("GAUSSRATE_TOL")
    if raw is None:
        return chn.TOL_CPT
    try:
        return float(raw)
    except ValueError:
        raise CliError(f"GAUSSRATE_TOL is not a number: {raw!r}", EXIT_PARSE)


def fmt(x):
    return f"{x:.12g}"


def _round12(obj):
    if isinstance(obj, float):
        return None if not math.isfinite(obj) else float(fmt(obj))
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    if isinstance(obj, np.generic):
        return _round12(obj.item())
    return obj


def dumps(obj):
    return json.dumps(_round12(obj), indent=2, sort_keys=True)


def _read_json(path):
    try:
        if path in (None, "-"):
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read JSON input: {exc}", EXIT_PARSE)


def _emit(text, path):
    if path:
        with open(path, "w") as fh:
            fh.write(text + ("" if text.endswith("\n") else "\n"))
    else:
        sys.stdout.write(text + ("" if text.endswith("\n") else "\n"))


def _channel_from_json(data):
    if not isinstance(data, dict):
        raise CliError("channel JSON must be an object", EXIT_PARSE)
    try:
        if "T" in data:
            return chn.GaussianChannel.from_dict(data)
        if "tau" in data:
            return atk.CollectiveGaussianAttack.from_dict(data).to_channel()
        if "channel" in data:
            return chn.GaussianChannel.from_dict(data["channel"])
        if "attack" in data:
            return atk.CollectiveGaussianAttack.from_dict(data["attack"]).to_channel()
    except SizeError as exc:
        raise CliError(str(exc), EXIT_PARSE)
    raise CliError("expected a channel {T, N, d} or an attack {tau, nbar, MA, MB}", EXIT_PARSE)


def cmd_classify(args):
    ch = _channel_from_json(_read_json(args.input))
    tol = _tol()
    report = chn.validate(ch, tol)
    out = {"valid": report.ok, "violations": list(report.violations)}
    if report.ok:
        inv = chn.invariants(ch, tol)
        out.update({"class": chn.classify(ch, tol), "tau": inv.tau, "r": inv.r,
                    "nbar": inv.nbar, "w": inv.w})
    _emit(dumps(out), args.output)
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_decompose(args):
    ch = _channel_from_json(_read_json(args.input))
    tol = _tol()
    ua, cf, ub = chn.decompose(ch, tol=tol)
    a = atk.CollectiveGaussianAttack(cf.class_label, cf.invariants, ua.s, ub.s, ua.d, ub.d)
    out = a.to_dict()
    out.update({"Tc": cf.tc.tolist(), "Nc": cf.nc.tolist(), "thetas": list(a.thetas())})
    _emit(dumps(out), args.output)
    return EXIT_OK


def _report_csv(rows, header):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def cmd_rate(args):
    ch = _channel_from_json(_read_json(args.input))
    tol = _tol()
    chn.require_valid(ch, tol)
    inv = chn.invariants(ch, tol)
    if inv.tau == 1.0:
        raise CliError("tau = 1 is outside the supported regime", EXIT_REGIME)
    report = protocol.rate_of_channel(ch)
    if args.format == "csv":
        fields = list(keyrate.RateReport.__dataclass_fields__)
        _emit(_report_csv([[getattr(report, f) for f in fields]], fields), args.output)
    else:
        _emit(dumps(report.to_dict()), args.output)
    return EXIT_OK


def _sweep_point(var, x, fixed):
    """(b_alpha, b_beta, b_inf, eta) at one grid point; NaNs outside the domain."""
    tau, w, eta = fixed["tau"], fixed["w"], fixed["eta"]
    if var == "tau":
        tau = x
    elif var == "w":
        w = x
    elif var == "eta":
        eta = x
    if eta is None:
        eta = keyrate.eta_canonical(tau, w)
    rep = keyrate.rate_from_triplet(tau, w, eta)
    return [rep.b_alpha, rep.b_beta, rep.b_inf, rep.eta]


def _bisect(f, lo, hi, flo):
    while hi - lo > BRACKET_WIDTH:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


def sweep_rows(var, start, stop, steps, fixed, brackets=True):
    """Grid rows ``[x, b_alpha, b_beta, b_inf, eta, (mi)]`` plus bracketing rows at zero crossings."""
    if var not in SWEEP_VARIABLES:
        raise CliError(f"unknown sweep variable {var!r}", EXIT_PARSE)
    if steps < 2:
        raise CliError("a sweep needs at least 2 steps", EXIT_PARSE)
    failures = 0

    def point(x):
        nonlocal failures
        try:
            if var == "mu":
                vals = _sweep_point(None, x, fixed)
                return vals + [keyrate.asymptotic_mi(x, vals[3])]
            return _sweep_point(var, x, fixed)
        except (DomainError, UnsupportedRegimeError):
            failures += 1
            return [float("nan")] * (5 if var == "mu" else 4)

    grid = [float(x) for x in np.linspace(start, stop, steps)]
    rows = {x: point(x) for x in grid}
    if brackets and var != "mu":
        for col in (0, 1):
            for x0, x1 in zip(grid, grid[1:]):
                f0, f1 = rows[x0][col], rows[x1][col]
                if not (math.isfinite(f0) and math.isfinite(f1)) or (f0 > 0) == (f1 > 0):
                    continue
                if var == "tau" and min(x0, x1) <= 1.0 <= max(x0, x1):
                    continue
                lo, hi = _bisect(lambda x: point(x)[col], x0, x1, f0)
                rows.setdefault(lo, point(lo))
                rows.setdefault(hi, point(hi))
    return [[x] + rows[x] for x in sorted(rows)], failures


def cmd_sweep(args):
    fixed = {"tau": args.tau, "w": args.w, "eta": args.eta}
    if args.variable != "tau" and fixed["tau"] is None:
        raise CliError("--tau is required unless sweeping tau", EXIT_PARSE)
    rows, failures = sweep_rows(args.variable, args.start, args.stop, args.steps, fixed,
                                brackets=not args.no_brackets)
    header = [args.variable, *SWEEP_COLUMNS] + (["mi_asymptotic"] if args.variable == "mu" else [])
    if args.format == "json":
        _emit(dumps([dict(zip(header, r)) for r in rows]), args.output)
    else:
        _emit(_report_csv(rows, header), args.output)
    if failures:
        print(f"warning: {failures} grid point(s) outside the domain (NaN columns)", file=sys.stderr)
    return EXIT_OK


def cmd_simulate(args):
    data = _read_json(args.input)
    if not isinstance(data, dict):
        raise CliError("config must be a JSON object", EXIT_PARSE)
    for key, flag in (("seed", args.seed), ("n_samples", args.samples), ("mu", args.mu)):
        if flag is not None:
            data[key] = flag
    missing = [k for k in ("mu", "n_samples", "seed") if k not in data]
    if missing:
        raise CliError(f"config is missing {', '.join(missing)}", EXIT_PARSE)
    try:
        cfg = protocol.ProtocolConfig.from_dict(data)
    except (KeyError, SizeError, TypeError, ValueError) as exc:
        if isinstance(exc, (InvalidChannelError, DomainError)):
            raise
        raise CliError(f"bad config: {exc}", EXIT_PARSE)
    record = protocol.run_simulation(cfg, workers=args.workers, keep_samples=bool(args.samples_csv))
    if args.samples_csv:
        if record.samples is None:
            raise CliError(f"sample CSV is only kept up to {protocol.SAMPLE_CAP} rounds", EXIT_PARSE)
        protocol.write_samples_csv(args.samples_csv, record.samples)
    _emit(dumps(record.to_dict()), args.output)
    return EXIT_OK


def cmd_dilate(args):
    d = dil.dilate(args.label, args.tau, args.nbar, b2_path=args.b2_path)
    out = {"class": d.class_label, "tau": d.invariants.tau, "nbar": d.invariants.nbar,
           "w": d.invariants.w, "l_shape": list(d.l.shape), "env_w": float(d.env_cov[0, 0]),
           "L": d.l.tolist(), "env_cov": d.env_cov.tolist()}
    code = EXIT_OK
    if args.verify:
        res = dil.verify(d, np.random.default_rng(args.seed))
        out["residuals"] = {"symplectic": res.symplectic, "env_purity": res.env_purity,
                            "reduction": res.reduction}
        if not res.within():
            code = EXIT_NUMERIC
    _emit(dumps(out), args.output)
    return code


def build_parser():
    p = argparse.ArgumentParser(prog="gaussrate", description=__doc__.strip().splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def io_flags(sp, needs_input=True):
        if needs_input:
            sp.add_argument("--input", "-i", default="-", help="JSON input file ('-' for stdin)")
        sp.add_argument("--output", "-o", help="write output here instead of stdout")

    sp = sub.add_parser("classify", help="validate and classify a channel")
    io_flags(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("decompose", help="canonical decomposition U_B o C o U_A")
    io_flags(sp)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("rate", help="asymptotic key-rate bounds of a channel or attack")
    io_flags(sp)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.set_defaults(func=cmd_rate)

    sp = sub.add_parser("sweep", help="rate bounds over a parameter grid")
    io_flags(sp, needs_input=False)
    sp.add_argument("--variable", choices=SWEEP_VARIABLES, required=True)
    sp.add_argument("--start", type=float, required=True)
    sp.add_argument("--stop", type=float, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--tau", type=float)
    sp.add_argument("--w", type=float, default=1.0)
    sp.add_argument("--eta", type=float, help="fixed total noise (default: canonical)")
    sp.add_argument("--no-brackets", action="store_true", help="omit zero-crossing rows")
    sp.add_argument("--format", choices=("json", "csv"), default="csv")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("simulate", help="Monte-Carlo run of the protocol with tomography")
    io_flags(sp)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--mu", type=float)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--samples-csv", help="also write raw (qa,pa,qb,pb) rows")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("dilate", help="Stinespring dilation of a canonical form")
    io_flags(sp, needs_input=False)
    sp.add_argument("label", choices=chn.CLASS_LABELS)
    sp.add_argument("tau", type=float)
    sp.add_argument("nbar", type=float, nargs="?", default=0.0)
    sp.add_argument("--verify", action="store_true")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--b2-path", choices=(dil.B2_COMPOSITION, dil.B2_TMSV), default=dil.B2_COMPOSITION)
    sp.set_defaults(func=cmd_dilate)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except UnsupportedRegimeError as exc:
        print(f"error: unsupported regime: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except (InvalidChannelError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except SizeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (CompletionError, np.linalg.LinAlgError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
