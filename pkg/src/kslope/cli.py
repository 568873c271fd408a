"""Command line front end.

Every subcommand loads its inputs, calls one engine operation and prints a
certificate (JSON) or a CSV table. Exit codes: 0 computed, 2 validation
error, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

from . import __version__
from .corpus import build
from .destabilizer import NotFound, find_witness, rp_criterion
from .errors import KslopeError
from .exact import decimal_string, format_rational, parse_rational
from .fibration import (
    BundleData,
    FibrationData,
    adiabatic_obstruction,
    bundle_obstruction,
    fibre_average_scalar,
)
from .geometry import dumps, load_setup, parse_class, setup_digest
from .seshadri import DEFAULT_TOL, NoBindingConstraint, seshadri_enclosure
from .slope import audit_printed, check_stability, energy_pieces, sample_table, slope_data

EXIT_OK, EXIT_INVALID, EXIT_INCONCLUSIVE = 0, 2, 3


class UsageError(KslopeError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def certificate(command: str, setup, inputs: dict, result: dict) -> dict:
    return {
        "command": command,
        "engine_version": __version__,
        "setup_digest": None if setup is None else setup_digest(setup),
        "inputs": inputs,
        "result": result,
    }


def _setup_and_divisor(args):
    setup = load_setup(args.setup)
    return setup, setup.divisor(args.divisor)


def cmd_check(args, out):
    setup, D = _setup_and_divisor(args)
    lam = parse_rational(args.lambda_max)
    verdict = check_stability(setup, D, lam)
    inputs = {"divisor": D.name, "lambda_max": format_rational(lam)}
    out.write(dumps(certificate("check", setup, inputs, verdict.to_json())))
    return EXIT_OK


def cmd_seshadri(args, out):
    setup, D = _setup_and_divisor(args)
    tol = parse_rational(args.tol)
    enc = seshadri_enclosure(setup, D, tol)
    inputs = {"divisor": D.name, "tol": format_rational(tol)}
    out.write(dumps(certificate("seshadri", setup, inputs, enc.to_json())))
    return EXIT_INCONCLUSIVE if isinstance(enc, NoBindingConstraint) else EXIT_OK


def _schedule(max_k):
    from fractions import Fraction

    return [Fraction(1, 2**k) for k in range(1, max_k + 1)]


def cmd_destabilize(args, out):
    setup, D = _setup_and_divisor(args)
    ref = parse_class(setup, args.reference) if args.reference else None
    result = find_witness(setup, D, ref, _schedule(args.max_k))
    _, value = rp_criterion(setup, D)
    inputs = {
        "divisor": D.name,
        "reference": args.reference or "reference",
        "max_k": args.max_k,
        "criterion_value": format_rational(value),
    }
    out.write(dumps(certificate("destabilize", setup, inputs, result.to_json())))
    return EXIT_INCONCLUSIVE if isinstance(result, NotFound) else EXIT_OK


def cmd_adiabatic(args, out):
    setup, D = _setup_and_divisor(args)
    if args.kappa is None and args.fibre_genus is None and "fibration" in setup.sections:
        data = FibrationData.from_setup(setup)
    else:
        if args.fibre_genus is None or args.fibre_degree is None:
            raise UsageError("adiabatic needs --fibre-genus and --fibre-degree (or a fibration section)")
        s_b = fibre_average_scalar(args.fibre_genus, parse_rational(args.fibre_degree))
        kappa = parse_class(setup, args.kappa) if args.kappa else setup.zero
        ell = parse_class(setup, args.ell) if args.ell else setup.zero
        data = FibrationData(setup, args.fibre_dimension, s_b, kappa, ell)
    ref = parse_class(setup, args.reference) if args.reference else None
    result = adiabatic_obstruction(data, D, ref, _schedule(args.max_k))
    inputs = {
        "divisor": D.name,
        "fibre_dimension": data.fibre_dimension,
        "S_b": format_rational(data.S_b),
        "kappa": [format_rational(c) for c in data.kappa],
        "ell": [format_rational(c) for c in data.ell],
    }
    out.write(dumps(certificate("adiabatic", setup, inputs, result.to_json())))
    return EXIT_INCONCLUSIVE if isinstance(result.outcome, NotFound) else EXIT_OK


def _rational_list(text):
    return [parse_rational(t) for t in text.split(",") if t.strip()]


def cmd_bundle(args, out):
    setup = None
    if args.degrees:
        data = BundleData.split(_rational_list(args.degrees))
    elif args.sub:
        parts = [p.strip() for p in args.sub.split(",")]
        if len(parts) != 4:
            raise UsageError("--sub takes sub_degree,sub_rank,total_degree,total_rank")
        data = BundleData.from_sub(parts[0], int(parts[1]), parts[2], int(parts[3]))
    elif args.setup:
        setup = load_setup(args.setup)
        if "bundle" not in setup.sections:
            raise UsageError("setup has no bundle section")
        data = BundleData.from_json(setup.sections["bundle"])
    else:
        raise UsageError("bundle needs --degrees, --sub or --setup")
    verdict = bundle_obstruction(data)
    out.write(dumps(certificate("bundle", setup, data.to_json(), verdict.to_json())))
    return EXIT_OK


def cmd_slope_poly(args, out):
    setup, D = _setup_and_divisor(args)
    result = slope_data(setup, D).to_json()
    result["energy_pieces"] = energy_pieces(setup, D).to_json()
    out.write(dumps(certificate("slope-poly", setup, {"divisor": D.name}, result)))
    return EXIT_OK


def cmd_audit(args, out):
    setup, D = _setup_and_divisor(args)
    report = audit_printed(setup, D)
    out.write(dumps(certificate("audit", setup, {"divisor": D.name}, report.to_json())))
    return EXIT_OK


def cmd_sample(args, out):
    setup, D = _setup_and_divisor(args)
    rows = sample_table(setup, D, parse_rational(args.start), parse_rational(args.stop), args.steps)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    cols = ["lambda", "F", "Num", "Den", "mu"]
    header = []
    for c in cols:
        header += [c, f"{c}_decimal"]
    writer.writerow(header)
    for row in rows:
        line = []
        for c in cols:
            v = row[c]
            line += ["", ""] if v is None else [format_rational(v), decimal_string(v)]
        writer.writerow(line)
    out.write(buf.getvalue())
    return EXIT_OK


def cmd_corpus(args, out):
    params = {}
    for token in args.params:
        if "=" not in token:
            raise UsageError(f"corpus parameters are key=value, got {token!r}")
        k, v = token.split("=", 1)
        params[k] = v
    entry = build(args.name, **params)
    if "basis" in entry.document:
        entry.setup()  # validate before emitting
    out.write(dumps(entry.document))
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kslope", description="Exact twisted slope stability checks.")
    p.add_argument("--json-errors", action="store_true", help="print errors as a JSON document")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_setup(sp, divisor=True):
        sp.add_argument("--setup", required=True, help="setup document (JSON)")
        if divisor:
            sp.add_argument("--divisor", required=True)

    sp = sub.add_parser("check", help="sign of F on [0, lambda_max]")
    with_setup(sp)
    sp.add_argument("--lambda-max", required=True)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("seshadri", help="Seshadri constant enclosure (surfaces)")
    with_setup(sp)
    sp.add_argument("--tol", default=format_rational(DEFAULT_TOL))
    sp.set_defaults(func=cmd_seshadri)

    sp = sub.add_parser("destabilize", help="witness search along the degenerating family")
    with_setup(sp)
    sp.add_argument("--reference", help="reference Kähler class (name or coordinates)")
    sp.add_argument("--max-k", type=int, default=20)
    sp.set_defaults(func=cmd_destabilize)

    sp = sub.add_parser("adiabatic", help="obstruction for adiabatic classes over a surface")
    with_setup(sp)
    sp.add_argument("--fibre-genus", type=int)
    sp.add_argument("--fibre-degree")
    sp.add_argument("--fibre-dimension", type=int, default=1)
    sp.add_argument("--kappa")
    sp.add_argument("--ell")
    sp.add_argument("--reference")
    sp.add_argument("--max-k", type=int, default=20)
    sp.set_defaults(func=cmd_adiabatic)

    sp = sub.add_parser("bundle", help="Mumford slope comparison for projective bundles")
    sp.add_argument("--degrees", help="comma-separated degrees of split summands")
    sp.add_argument("--sub", help="sub_degree,sub_rank,total_degree,total_rank")
    sp.add_argument("--setup", help="setup document with a bundle section")
    sp.set_defaults(func=cmd_bundle)

    sp = sub.add_parser("slope-poly", help="exact slope polynomials")
    with_setup(sp)
    sp.set_defaults(func=cmd_slope_poly)

    sp = sub.add_parser("audit", help="compare the weighted-integral packaging")
    with_setup(sp)
    sp.set_defaults(func=cmd_audit)

    sp = sub.add_parser("sample", help="CSV samples of F, Num, Den, mu")
    with_setup(sp)
    sp.add_argument("--from", dest="start", required=True)
    sp.add_argument("--to", dest="stop", required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("corpus", help="emit a corpus setup document")
    sp.add_argument("name")
    sp.add_argument("params", nargs="*", help="key=value parameters")
    sp.set_defaults(func=cmd_corpus)
    return p


VALUE_FLAGS = {
    "--lambda-max", "--tol", "--degrees", "--sub", "--from", "--to",
    "--fibre-degree", "--kappa", "--ell", "--reference",
}


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--flag -1,0`` into ``--flag=-1,0`` so argparse does not read an option."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if tok in VALUE_FLAGS and nxt and nxt.startswith("-") and nxt[1:2] in set("0123456789."):
            out.append(f"{tok}={nxt}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    json_errors = "--json-errors" in argv
    try:
        args = make_parser().parse_args(argv)
        return args.func(args, out)
    except (KslopeError, OSError, ValueError) as exc:
        if json_errors:
            out.write(dumps({"error": type(exc).__name__, "message": str(exc)}))
        else:
            err.write(f"kslope: {type(exc).__name__}: {exc}\n")
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
