"""``ctl`` command line.

Exit codes: 0 success, 1 verification failure or golden diff, 2 malformed
input or unknown class, 3 path enumeration did not terminate, 4 theorem
hypothesis violated, 5 inconclusive within the given caps.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .cotorsion import CERTIFIED, FAILED, certify_pair, left_orth, right_orth, theorem_check
from .errors import CapExceeded, HypothesisViolated, Inconclusive, MalformedInput, NonTerminating, CTLError
from .pathalg import path_basis
from .report import render
from .repcat import global_dimension
from .repcat.krull import DEFAULT_ENUM_CAP, DEFAULT_SEED
from .workspace import Workspace

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_NONTERM, EXIT_HYPOTHESIS, EXIT_INCONCLUSIVE = 0, 1, 2, 3, 4, 5


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("workspace")
    g.add_argument("--fixtures", type=Path, default=None,
                   help="fixture root (default: $CTL_FIXTURES or the bundled square example)")
    g.add_argument("--algebra", type=Path, default=None, help="algebra JSON (default: <fixtures>/algebra.json)")
    g.add_argument("--catalog", type=Path, default=None, help="module directory (default: <fixtures>/modules)")
    g.add_argument("--char", type=int, default=None, help="override the field characteristic")
    g.add_argument("--cap-enum", type=int, default=DEFAULT_ENUM_CAP, help="cap on enumerated elements/classes")
    g.add_argument("--cap-mult", type=int, default=None, help="multiplicity bound in approximation searches")
    g.add_argument("--closure-terms", type=int, default=4, help="summand bound for Smd closures")
    g.add_argument("--seed", type=int, default=DEFAULT_SEED)
    g.add_argument("--out", type=Path, default=None, help="write the report here instead of stdout")
    g.add_argument("--format", choices=("json", "md"), default="json")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="ctl", description="Cotorsion pairs over bound quiver algebras.")
    parser.add_argument("--version", action="version", version=f"ctl {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("check-algebra", parents=[common], help="path basis and dimensions")
    p = sub.add_parser("ext-table", parents=[common], help="Ext^n between all catalog members")
    p.add_argument("--degree", type=int, default=1)
    p = sub.add_parser("orth", parents=[common], help="right or left Ext^1-orthogonal of a class")
    p.add_argument("cls")
    p.add_argument("--side", choices=("right", "left"), default="right")
    p = sub.add_parser("verify-pair", parents=[common], help="certify a cotorsion pair")
    p.add_argument("x")
    p.add_argument("y")
    p.add_argument("--complete", action="store_true")
    p.add_argument("--hereditary", action="store_true")
    p = sub.add_parser("theorem", parents=[common], help="intersection theorem for two pairs")
    p.add_argument("pair1", help="class X (paired with X^⊥) or X:Y")
    p.add_argument("pair2")
    p.add_argument("--variant", choices=("i", "ii"), default="ii")
    p.add_argument("--no-witnesses", action="store_true", help="omit conflation matrices from the report")
    sub.add_parser("reproduce-paper", parents=[common], help="rerun the bundled example and diff against golden values")
    p = sub.add_parser("write-fixtures", parents=[common], help="write the bundled example fixtures to a directory")
    p.add_argument("dest", type=Path)
    return parser


def _workspace(args) -> Workspace:
    kw = {}
    if args.fixtures is not None:
        kw["root"] = args.fixtures
    return Workspace(algebra_path=args.algebra, catalog_dir=args.catalog, characteristic=args.char,
                     cap_enum=args.cap_enum, cap_mult=args.cap_mult, closure_terms=args.closure_terms,
                     seed=args.seed, **kw)


def cmd_check_algebra(ws: Workspace, args) -> tuple[dict, int]:
    alg = ws.algebra
    basis = path_basis(alg)
    try:
        gl = global_dimension(alg)
    except CTLError as exc:
        gl = None
        note = str(exc)
    else:
        note = None
    data = {
        "characteristic": alg.p,
        "vertices": list(alg.quiver.vertices),
        "arrows": [a.name for a in alg.quiver.arrows],
        "path_basis_dim": basis.dimension,
        "certificate_length": basis.certificate_length,
        "path_basis": basis.labels(),
        "projective_dims": {v: list(m.dims) for v, m in zip(alg.quiver.vertices, alg._projectives)},
        "injective_dims": {v: list(m.dims) for v, m in zip(alg.quiver.vertices, alg._injectives)},
        "gldim": gl,
        "summary": f"dim {basis.dimension}, gldim {gl if gl is not None else 'infinite'}",
    }
    if note:
        data["gldim_note"] = note
    return data, EXIT_OK


def cmd_ext_table(ws: Workspace, args) -> tuple[dict, int]:
    cat = ws.catalog
    return {"degree": args.degree, "characteristic": cat.alg.p, "order": cat.names,
            "table": cat.ext_table(args.degree)}, EXIT_OK


def cmd_orth(ws: Workspace, args) -> tuple[dict, int]:
    c = ws.module_class(args.cls)
    res = right_orth(c) if args.side == "right" else left_orth(c)
    return {"class": c.to_json(), "side": args.side, "members": list(res.members)}, EXIT_OK


def cmd_verify_pair(ws: Workspace, args) -> tuple[dict, int]:
    x, y = ws.module_class(args.x), ws.module_class(args.y)
    pair = certify_pair(x, y, complete=args.complete, hereditary=args.hereditary, bounds=ws.bounds)
    data = pair.to_json()
    if not pair.is_pair or pair.is_hereditary is False:
        return data, EXIT_FAIL
    if pair.completeness is not None and pair.completeness.status != CERTIFIED:
        return data, EXIT_FAIL if pair.completeness.status == FAILED else EXIT_INCONCLUSIVE
    return data, EXIT_OK


def cmd_theorem(ws: Workspace, args) -> tuple[dict, int]:
    p1, p2 = ws.pair(args.pair1), ws.pair(args.pair2)
    report = theorem_check(args.variant, p1, p2, ws.bounds)
    data = report.to_json(witnesses=not args.no_witnesses)
    if report.status == CERTIFIED:
        return data, EXIT_OK
    return data, EXIT_FAIL if report.status == FAILED else EXIT_INCONCLUSIVE


def cmd_reproduce_paper(ws: Workspace, args) -> tuple[dict, int]:
    from .reproduce import reproduce
    data = reproduce(ws)
    return data, EXIT_OK if data["ok"] else EXIT_FAIL


def cmd_write_fixtures(ws: Workspace, args) -> tuple[dict, int]:
    from .example import write_fixtures
    write_fixtures(args.dest, args.char or 2)
    return {"written": str(args.dest)}, EXIT_OK


COMMANDS = {
    "check-algebra": cmd_check_algebra,
    "ext-table": cmd_ext_table,
    "orth": cmd_orth,
    "verify-pair": cmd_verify_pair,
    "theorem": cmd_theorem,
    "reproduce-paper": cmd_reproduce_paper,
    "write-fixtures": cmd_write_fixtures,
}


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        ws = _workspace(args)
        data, code = COMMANDS[args.command](ws, args)
    except MalformedInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NonTerminating as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONTERM
    except HypothesisViolated as exc:
        print(f"hypothesis violated: {exc}", file=sys.stderr)
        _emit(render({"status": "HypothesisViolated", "message": str(exc), "witnesses": list(exc.witnesses)},
                     args.format, args.command), args.out)
        return EXIT_HYPOTHESIS
    except (Inconclusive, CapExceeded) as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except CTLError as exc:
        # shape, vertex and algebra errors all come from bad input files
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    _emit(render(data, args.format, args.command), args.out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
