"""Command-line interface.

Exit codes: 0 success, 1 computation failure or mismatch, 2 usage error
(bad arguments, unreadable or inexact input).  The separatrix crossing
budget defaults to 10000 and can be overridden by --budget or the
VEECH_KIT_BUDGET environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import render, report, serialize
from .cylinders import DEFAULT_BUDGET, decompose, parabolic_for_direction
from .errors import RequiresExactRational, SchemaError, VeechKitError
from .hyperbolic import domain_geodesics, domain_vertices, lattice_certificate
from .surface import unfold_triangle
from .veech import build_generators, verify_membership

_USAGE_ERRORS = (SchemaError, RequiresExactRational)


def _default_budget() -> int:
    env = os.environ.get("VEECH_KIT_BUDGET")
    if env:
        try:
            value = int(env)
            if value > 0:
                return value
        except ValueError:
            pass
        raise SchemaError(f"VEECH_KIT_BUDGET={env!r} is not a positive integer")
    return DEFAULT_BUDGET


def _load_surface(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from None
    return serialize.surface_loads(text)


def _write(path, text: str) -> None:
    if path in (None, "-"):
        print(text)
    else:
        Path(path).write_text(text + ("\n" if not text.endswith("\n") else ""))


def _cmd_unfold(args) -> int:
    parts = args.angles.split(",")
    if len(parts) != 3:
        raise SchemaError("--angles expects three comma-separated integers, e.g. 1,4,7")
    try:
        p1, p2, p3 = (int(p) for p in parts)
    except ValueError:
        raise SchemaError(f"--angles {args.angles!r} is not three integers") from None
    s = unfold_triangle(p1, p2, p3, args.denominator)
    _write(args.output, serialize.surface_dumps(s))
    return 0


def _cmd_decompose(args) -> int:
    s = _load_surface(args.surface)
    direction = serialize.direction_from_text(args.direction, s.field_d)
    dec = decompose(s, direction, args.budget)
    _write(args.output, json.dumps(serialize.decomposition_to_dict(dec), indent=2))
    return 0


def _cmd_parabolic(args) -> int:
    s = _load_surface(args.surface)
    direction = serialize.direction_from_text(args.direction, s.field_d)
    mat = parabolic_for_direction(s, direction, args.budget)
    _write(args.output, json.dumps(serialize.matrix_to_obj(mat), indent=2))
    return 0


def _cmd_verify(args) -> int:
    s = _load_surface(args.surface)
    text = args.matrix
    if Path(text).is_file():
        text = Path(text).read_text()
    mat = serialize.matrix_from_obj(text, s.field_d)
    member = verify_membership(s, mat)
    print("member" if member else "not a member")
    return 0 if member else 1


def _cmd_domain_check(args) -> int:
    s = unfold_triangle(1, 4, 7, 12)
    gen = build_generators(s, args.budget)
    vertices = domain_vertices(gen)
    for name in "ABCDE":
        print(f"{name} = {vertices[name]}")
    from .hyperbolic import incidence_check

    ok = incidence_check(gen, vertices)
    print("incidence:", "pass" if ok else "fail")
    return 0 if ok else 1


def _cmd_certificate(args) -> int:
    s = _load_surface(args.surface)
    cert = lattice_certificate(s, args.budget)
    _write(args.output, json.dumps(cert.as_dict(), indent=2))
    return 0 if cert.confirmed else 1


def _cmd_render(args) -> int:
    if args.domain:
        s = unfold_triangle(1, 4, 7, 12)
        gen = build_generators(s, args.budget)
        svg = render.render_domain_svg(domain_geodesics(gen), domain_vertices(gen))
    else:
        if not args.surface:
            raise SchemaError("render needs -s FILE or --domain")
        svg = render.render_surface_svg(_load_surface(args.surface))
    _write(args.output, svg)
    return 0


def _cmd_report(args) -> int:
    rep = report.run_report(args.budget)
    outdir = Path(args.output) if args.output else Path.cwd()
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "report.json").write_text(rep.to_json() + "\n")
    (outdir / "report.txt").write_text(rep.to_text() + "\n")
    print(rep.to_text())
    print(f"written: {outdir / 'report.json'}, {outdir / 'report.txt'}")
    return 0 if rep.all_match else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="veechkit",
        description="Exact cylinder decompositions and lattice certificates "
        "for unfolded rational triangles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_budget(p):
        p.add_argument("--budget", type=int, default=None,
                       help="max crossings per separatrix trace")

    p = sub.add_parser("unfold", help="unfold a rational triangle to a surface file")
    p.add_argument("--angles", required=True, help="three numerators, e.g. 1,4,7")
    p.add_argument("--denominator", type=int, required=True, help="common denominator n")
    p.add_argument("-o", "--output", default=None, help="output path (default stdout)")
    p.set_defaults(func=_cmd_unfold)

    p = sub.add_parser("decompose", help="cylinder decomposition in a direction")
    p.add_argument("-s", "--surface", required=True)
    p.add_argument("--direction", required=True, help='exact "x,y", e.g. "1,2-sqrt(3)"')
    add_budget(p)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("parabolic", help="primitive parabolic fixing a direction")
    p.add_argument("-s", "--surface", required=True)
    p.add_argument("--direction", required=True)
    add_budget(p)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_parabolic)

    p = sub.add_parser("verify", help="check a matrix for affine-automorphism membership")
    p.add_argument("-s", "--surface", required=True)
    p.add_argument("--matrix", required=True, help="JSON file or inline [[a,b],[c,d]]")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("domain-check", help="rebuild and verify the domain pentagon")
    add_budget(p)
    p.set_defaults(func=_cmd_domain_check)

    p = sub.add_parser("certificate", help="run the lattice certificate on a surface")
    p.add_argument("-s", "--surface", required=True)
    add_budget(p)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_certificate)

    p = sub.add_parser("render", help="SVG of a surface or the domain pentagon")
    p.add_argument("-s", "--surface", default=None)
    p.add_argument("--domain", action="store_true", help="render the domain instead")
    add_budget(p)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("report", help="reproduce and diff every derived quantity")
    add_budget(p)
    p.add_argument("-o", "--output", default=None, help="output directory")
    p.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if hasattr(args, "budget") and args.budget is None:
            args.budget = _default_budget()
        elif hasattr(args, "budget") and args.budget <= 0:
            raise SchemaError("--budget must be positive")
        return args.func(args)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VeechKitError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
