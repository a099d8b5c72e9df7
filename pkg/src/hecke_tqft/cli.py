"""Command-line front end.

Exit codes: 1 bad input, 2 unsupported type or guard exceeded, 3 pipeline
disagreement, 4 reference corpus failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .center import central_decomposition, closed_form_table
from .coxeter import build
from .errors import (
    HeckeError,
    OddExponent,
    PipelineDisagreement,
    UnsupportedError,
    ValidationError,
)
from .hecke import algebra
from .laurent import analyze, to_q_view
from .surfaces import METHODS, CiliatedSurface, invariant, surface_from_json

__all__ = ["main", "build_parser"]

EXIT_VALIDATION = 1
EXIT_UNSUPPORTED = 2
EXIT_DISAGREEMENT = 3
EXIT_CORPUS = 4


def _render(p, var: str):
    """(printed text, json payload) of a polynomial in v, shown in q when possible."""
    if var == "v":
        shown = p
    else:
        try:
            shown = to_q_view(p)
        except OddExponent:
            if var == "q":
                raise ValidationError("the value has odd powers of v; use --var v")
            shown = p
    return shown.to_text(), shown.to_json()


def _emit(text, payload, fmt, extra=None):
    if fmt == "json":
        data = {"value": text, "poly": payload}
        if extra:
            data.update(extra)
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)


def _surface(args):
    if args.surface:
        try:
            with open(args.surface) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read {args.surface}: {exc}") from exc
        if args.type:
            data.setdefault("type", args.type)
        return surface_from_json(data)
    if not args.type:
        raise ValidationError("--type is required")
    system = build(args.type)
    try:
        surface = CiliatedSurface(args.genus, args.punctures)
    except ValidationError:
        if args.method in ("state-sum", "polygon"):
            raise
        # no triangulation exists, but the trace and Schur formulas still apply
        surface = CiliatedSurface.formal(args.genus, args.punctures)
    return system, surface


def cmd_invariant(args):
    system, surface = _surface(args)
    value = invariant(surface, system, args.method)
    text, payload = _render(value, args.var)
    _emit(text, payload, args.format, {"method": args.method, "type": str(system.type)})
    return 0


def cmd_schur(args):
    if args.method == "closed":
        rows = closed_form_table(args.type)
    else:
        decomp = central_decomposition(build(args.type))
        rows = list(zip(decomp.labels, decomp.schur))
    table = []
    for lab, s in rows:
        a = analyze(s)
        table.append({"label": lab.name, "dim": lab.dim, "schur": s.to_text(), **a.as_dict()})
    if args.format == "json":
        print(json.dumps(table, sort_keys=True))
    else:
        for r in table:
            flags = " ".join(f"{k}={'yes' if r[k] else 'no'}" for k in ("positive", "symmetric", "log_concave"))
            print(f"{r['label']}\tdim={r['dim']}\t{r['schur']}\t{flags}")
    return 0


def cmd_structure_constants(args):
    alg = algebra(build(args.type))
    c = alg.structure_constant(args.x, args.y, args.z)
    _emit(c.to_text(), c.to_json(), args.format)
    return 0


def cmd_kl(args):
    """b_w in standard coordinates, or the single polynomial h_{z,w} with --z."""
    alg = algebra(build(args.type))
    if args.z is not None:
        p = alg.kl_polynomial(args.z, args.w)
        _emit(p.to_text(), p.to_json(), args.format)
        return 0
    b = alg.b(args.w)
    if args.format == "json":
        print(json.dumps(b.to_json(), sort_keys=True))
    else:
        system = alg.system
        for w in sorted(b.coords, key=lambda u: (system.lengths[u], u)):
            print(f"{system.word_str(w) or 'e'}\t{b.coords[w].to_text()}")
    return 0


def cmd_verify(args):
    from .corpus import run_corpus

    if not args.paper_corpus:
        raise ValidationError("nothing to verify; pass --paper-corpus")
    results = run_corpus()
    failed = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        line = f"{status}  {r.entry.name}  [{','.join(r.methods)}]  {r.value}"
        if r.detail:
            line += f"  ({r.detail})"
        print(line)
        failed += not r.passed
    print(f"{len(results) - failed}/{len(results)} entries passed")
    return EXIT_CORPUS if failed else 0


def build_parser():
    parser = argparse.ArgumentParser(prog="hecke-tqft", description="Hecke algebra surface invariants")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariant", help="invariant of a punctured or bordered surface")
    p.add_argument("--type", help="Coxeter type such as A2, B3, G2, I2(5)")
    p.add_argument("--genus", type=int, default=0)
    p.add_argument("--punctures", type=int, default=0)
    p.add_argument("--surface", help="surface description in JSON")
    p.add_argument("--method", choices=METHODS + ("all",), default="trace")
    p.add_argument("--var", choices=("auto", "q", "v"), default="auto")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_invariant)

    p = sub.add_parser("schur", help="Schur elements with positivity diagnostics")
    p.add_argument("--type", required=True)
    p.add_argument("--method", choices=("closed", "generic"), default="closed")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_schur)

    p = sub.add_parser("structure-constants", help="c_xyz = tr(h_x h_y h_z)")
    p.add_argument("--type", required=True)
    p.add_argument("--x", required=True, help="word in the generators, e.g. 121; e for the identity")
    p.add_argument("--y", required=True)
    p.add_argument("--z", required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_structure_constants)

    p = sub.add_parser("kl", help="Kazhdan-Lusztig basis element b_w")
    p.add_argument("--type", required=True)
    p.add_argument("--w", required=True, help="word of w")
    p.add_argument("--z", help="print only the coefficient of h_z")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_kl)

    p = sub.add_parser("verify", help="run the reference corpus")
    p.add_argument("--paper-corpus", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PipelineDisagreement as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISAGREEMENT
    except UnsupportedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except HeckeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
