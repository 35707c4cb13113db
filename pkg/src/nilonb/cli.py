"""Command-line front end: nilonb validate | analyze | basis | verify | examples."""
from __future__ import annotations

import argparse
import logging
import sys

from .algebra import validate
from .builtins import DESCRIPTIONS, builtin_names
from .errors import NilError
from .pipeline import AnalysisRequest, StageError, analyze, dumps, load_source, render_text, run_verify

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_PIPELINE = 0, 1, 2, 3

log = logging.getLogger("nilonb")


def _parse_functional(text: str | None):
    if not text:
        return None
    out = {}
    for item in text.split(","):
        if "=" not in item:
            raise argparse.ArgumentTypeError(f"functional entry {item!r} needs LABEL=value")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _labels(text: str | None):
    if not text:
        return None
    return [s.strip() for s in text.split(",") if s.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nilonb", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, with_source=True):
        if with_source:
            sp.add_argument("source", help="builtin name (see 'examples') or path to algebra JSON")
        fmt = sp.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
        fmt.add_argument("--text", dest="fmt", action="store_const", const="text")
        sp.set_defaults(fmt="json")
        sp.add_argument("--out", help="write the report here instead of stdout")

    def request(sp):
        sp.add_argument("--lambda", dest="lam", default="1", help="central coordinate, e.g. 2/5")
        sp.add_argument("--functional", help="explicit functional LABEL=value,... (overrides --lambda)")
        sp.add_argument("--mode", choices=["quasi_lattice", "uniform"], default="quasi_lattice")
        sp.add_argument("--polarization", help="comma-separated labels spanning m")
        sp.add_argument("--gradation", help="name of the gradation to use ('default' for the JSON one)")
        sp.add_argument("--radius", type=int, default=2, help="index box radius R")
        sp.add_argument("--tol", type=float, default=1e-8)
        sp.add_argument("--scale", help="dilate the fundamental domain (test hook)")

    sp = sub.add_parser("validate", help="check antisymmetry, Jacobi and nilpotency")
    common(sp)
    sp = sub.add_parser("analyze", help="run the full construction and print the report")
    common(sp)
    request(sp)
    sp = sub.add_parser("basis", help="emit the family members")
    common(sp)
    request(sp)
    sp = sub.add_parser("verify", help="Gram matrix and Parseval probes")
    common(sp)
    request(sp)
    sp.add_argument("--entries", action="store_true", help="include Gram entries")
    sp = sub.add_parser("examples", help="list builtin algebras")
    common(sp, with_source=False)
    return p


def _request(args) -> AnalysisRequest:
    return AnalysisRequest(source=args.source, lam=args.lam, functional=_parse_functional(args.functional),
                           mode=args.mode, polarization=_labels(args.polarization),
                           gradation=args.gradation, radius=args.radius, tol=args.tol, scale=args.scale)


def _emit(args, obj):
    text = dumps(obj) if args.fmt == "json" else render_text(obj)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def cmd_validate(args) -> int:
    alg = load_source(args.source)
    rep = validate(alg)
    _emit(args, {"algebra": alg.meta.get("name", args.source), "validation": rep.to_json()})
    return EXIT_OK if rep.passed else EXIT_VERIFY


def cmd_analyze(args) -> int:
    report, _ = analyze(_request(args))
    _emit(args, report)
    return EXIT_OK


def cmd_basis(args) -> int:
    report, ctx = analyze(_request(args))
    out = {"algebra": report["algebra"], "normalization": report["normalization"],
           "family": ctx.family.to_json(with_members=True),
           "representation": report["representation"]}
    _emit(args, out)
    return EXIT_OK


def cmd_verify(args) -> int:
    report, _, passed = run_verify(_request(args), entries=args.entries)
    _emit(args, report)
    return EXIT_OK if passed else EXIT_VERIFY


def cmd_examples(args) -> int:
    out = {"builtins": [{"name": n, "description": DESCRIPTIONS.get(n, "")} for n in builtin_names()]}
    if args.fmt == "text":
        sys.stdout.write("\n".join(f"{b['name']}: {b['description']}" for b in out["builtins"]) + "\n")
        return EXIT_OK
    _emit(args, out)
    return EXIT_OK


COMMANDS = {"validate": cmd_validate, "analyze": cmd_analyze, "basis": cmd_basis,
            "verify": cmd_verify, "examples": cmd_examples}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except StageError as exc:
        err = exc.to_dict()
        sys.stderr.write(dumps({"error": err}) + "\n")
        if exc.error.input_error or exc.stage == "load":
            return EXIT_INPUT
        return EXIT_PIPELINE
    except NilError as exc:
        sys.stderr.write(dumps({"error": exc.to_dict()}) + "\n")
        return EXIT_INPUT if exc.input_error else EXIT_PIPELINE
    except (OSError, ValueError) as exc:
        sys.stderr.write(dumps({"error": {"error": type(exc).__name__, "message": str(exc)}}) + "\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
