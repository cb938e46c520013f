"""Command-line front end.

Fans are read from FanDocument JSON files (schema version 1) or taken
from the built-in catalog with ``catalog:NAME``::

    {"schema": 1, "lattice_dim": 2,
     "rays": [[1, 0], [0, 1], [-1, 1], [0, -1]],
     "max_cones": [[0], [1], [2], [3]],
     "class_basis": [[1, -1, 1, 0], [0, 1, 0, 1]],
     "weights": [{"cone": [0], "w": "1"}, ...],
     "pullback_matrix": [[...], ...]}

Rationals are written as strings ``"p/q"`` or ``"n"``; integers are
accepted on input.  Exit codes: 0 ok, 1 failed verification, 2 parse
error, 3 validation error, 4 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import catalog, chow, nefbounds
from . import cone as _cone
from .cone import PolyCone
from .divclass import ClassSpace, DivisorError, class_space
from .exactlin import dot, format_rational, parse_rational, solve_rational
from .fan import Fan, FanError, build_fan

SCHEMA_VERSION = 1

EXIT_OK, EXIT_FAILED, EXIT_PARSE, EXIT_VALIDATION, EXIT_INTERNAL = 0, 1, 2, 3, 4


class ParseError(ValueError):
    pass


class ValidationError(ValueError):
    pass


# -- documents ---------------------------------------------------------------


@dataclass
class FanDocument:
    fan: Fan
    class_basis: list | None = None
    weights: dict | None = None
    pullback_matrix: list | None = None


def _rational_matrix(rows: Any, what: str) -> list[list[Fraction]]:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError(f"{what} must be a list of rows")
    try:
        return [[parse_rational(x) for x in r] for r in rows]
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{what}: {exc}") from None


def _int_list(v: Any, what: str) -> list[int]:
    if not isinstance(v, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in v):
        raise ParseError(f"{what} must be a list of integers")
    return v


def parse_weights(raw: Any) -> dict:
    if isinstance(raw, dict):
        raw = raw.get("weights")
    if not isinstance(raw, list):
        raise ParseError("weights must be a list of {cone, w} objects")
    out = {}
    for k, item in enumerate(raw):
        if not isinstance(item, dict) or "cone" not in item or "w" not in item:
            raise ParseError(f"weight entry {k} needs 'cone' and 'w'")
        c = tuple(sorted(_int_list(item["cone"], f"weight entry {k} cone")))
        try:
            out[c] = parse_rational(item["w"])
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"weight entry {k}: {exc}") from None
    return out


def parse_document(data: Any, validate: bool = True) -> FanDocument:
    if not isinstance(data, dict):
        raise ParseError("fan document must be a JSON object")
    if data.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
        raise ParseError(f"unsupported schema version {data.get('schema')!r}")
    for key in ("rays", "max_cones"):
        if key not in data:
            raise ParseError(f"missing field '{key}'")
    rays = [_int_list(r, f"ray {i}") for i, r in enumerate(data["rays"])]
    cones = [_int_list(c, f"cone {i}") for i, c in enumerate(data["max_cones"])]
    n = data.get("lattice_dim")
    if n is not None and (not isinstance(n, int) or isinstance(n, bool)):
        raise ParseError("lattice_dim must be an integer")
    try:
        fan = build_fan(rays, cones, lattice_dim=n, validate=validate)
    except FanError as exc:
        raise ValidationError(str(exc)) from None
    doc = FanDocument(fan)
    if data.get("class_basis") is not None:
        doc.class_basis = _rational_matrix(data["class_basis"], "class_basis")
    if data.get("weights") is not None:
        doc.weights = parse_weights(data["weights"])
    if data.get("pullback_matrix") is not None:
        doc.pullback_matrix = _rational_matrix(data["pullback_matrix"], "pullback_matrix")
    return doc


def _rat(x) -> str:
    return format_rational(Fraction(x))


def document_json(doc: FanDocument) -> dict:
    fan = doc.fan
    out: dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "lattice_dim": fan.lattice_dim,
        "rays": [list(r) for r in fan.rays],
        "max_cones": [list(c) for c in fan.max_cones],
    }
    if doc.class_basis is not None:
        out["class_basis"] = [[_rat(x) for x in row] for row in doc.class_basis]
    if doc.weights is not None:
        out["weights"] = [{"cone": list(c), "w": _rat(w)} for c, w in sorted(doc.weights.items())]
    if doc.pullback_matrix is not None:
        out["pullback_matrix"] = [[_rat(x) for x in row] for row in doc.pullback_matrix]
    return out


def entry_document(e: catalog.CatalogEntry) -> FanDocument:
    return FanDocument(
        e.fan,
        [list(r) for r in e.class_matrix] if e.class_matrix is not None else None,
        dict(e.weights) if e.weights is not None else None,
        [list(r) for r in e.pullback] if e.pullback is not None else None,
    )


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def cone_json(c: PolyCone) -> dict:
    def rows(vs):
        return [[_rat(x) for x in v] for v in vs]

    return {
        "ambient_dim": c.ambient_dim,
        "generators": rows(c.generators),
        "lineality": rows(c.lineality),
        "facets": rows(c.facets),
        "equations": rows(c.equations),
    }


def _read_json(path: str, what: str) -> Any:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {what} {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what} {path} is not valid JSON: line {exc.lineno}: {exc.msg}") from None


def _catalog_name(name: str, chirality: str | None) -> str:
    if chirality == "B" and name == "nonregular":
        return "nonregular-B"
    return name


def load_document(source: str, chirality: str | None = None) -> FanDocument:
    if source.startswith("catalog:"):
        name = _catalog_name(source[len("catalog:"):], chirality)
        try:
            return entry_document(catalog.entry(name))
        except KeyError:
            raise ParseError(f"unknown catalog entry {name!r}") from None
    return parse_document(_read_json(source, "fan document"))


# -- shared setup ------------------------------------------------------------


@dataclass
class Context:
    doc: FanDocument
    cs: ClassSpace
    weights: dict | None
    pullback: list | None
    jobs: int


def _context(args) -> Context:
    doc = load_document(args.fan, getattr(args, "chirality", None))
    cs = class_space(doc.fan)
    if args.paper_basis:
        if doc.class_basis is None:
            raise ValidationError("--paper-basis given but the document has no class_basis")
        try:
            cs = cs.with_basis(doc.class_basis)
        except DivisorError as exc:
            raise ValidationError(f"class_basis: {exc}") from None
    weights = doc.weights
    if getattr(args, "weights", None):
        weights = parse_weights(_read_json(args.weights, "weights file"))
    pullback = None
    if getattr(args, "pullback", None):
        if args.pullback == "document":
            if doc.pullback_matrix is None:
                raise ValidationError("--pullback given but the document has no pullback_matrix")
            pullback = doc.pullback_matrix
        else:
            raw = _read_json(args.pullback, "pullback file")
            if isinstance(raw, dict):
                raw = raw.get("pullback_matrix")
            pullback = _rational_matrix(raw, "pullback matrix")
        bad = [k for k, row in enumerate(pullback) if len(row) != cs.nrays]
        if bad:
            raise ValidationError(f"pullback row {bad[0]} has the wrong length (expected {cs.nrays})")
    return Context(doc, cs, weights, pullback, args.jobs)


def _descend_pullback(ctx: Context):
    try:
        return ctx.cs.descend_map(ctx.pullback)
    except DivisorError:
        for k, row in enumerate(ctx.pullback):
            if solve_rational([list(r) for r in zip(*ctx.cs.matrix)], list(row)) is None:
                raise ValidationError(f"pullback row {k} does not vanish on principal divisors") from None
        raise


def _weights_checked(ctx: Context) -> dict:
    if ctx.weights is None:
        raise ValidationError("kind fw needs weights (--weights FILE or a document with weights)")
    try:
        chow.validate_weights(chow.chow_presentation(ctx.doc.fan), ctx.weights)
    except chow.InvalidWeights as exc:
        raise ValidationError(str(exc)) from None
    return ctx.weights


def compute_cone(ctx: Context, kind: str) -> PolyCone:
    fan, cs = ctx.doc.fan, ctx.cs
    try:
        if kind == "g":
            c = nefbounds.g_cone(fan, cs, ctx.jobs)
        elif kind == "gcirc":
            c = nefbounds.gcirc_cone(fan, cs, ctx.jobs)
        elif kind == "l":
            c = nefbounds.l_cone(fan, cs, ctx.jobs)
        elif kind == "f":
            c = nefbounds.f_cone(fan, cs, ctx.jobs)
        elif kind == "fw":
            c = chow.fw_cone(fan, _weights_checked(ctx), cs)
        else:
            raise ParseError(f"unknown cone kind {kind!r}")
    except nefbounds.NotPureError as exc:
        raise ValidationError(str(exc)) from None
    if ctx.pullback is not None:
        c = _cone.image(_descend_pullback(ctx), c)
    return c


# -- commands ----------------------------------------------------------------


def cmd_cone(args) -> int:
    ctx = _context(args)
    print(dumps(cone_json(compute_cone(ctx, args.kind))))
    return EXIT_OK


def _fmt_vec(v) -> str:
    return "(" + ",".join(_rat(x) for x in v) + ")"


def cmd_compare(args) -> int:
    ctx = _context(args)
    fan = ctx.doc.fan
    weights = None
    if ctx.weights is not None and fan.is_pure():
        weights = _weights_checked(ctx)
    pullback = None
    if ctx.pullback is not None:
        _descend_pullback(ctx)
        pullback = ctx.pullback
    rep = nefbounds.containment_report(fan, ctx.cs, weights, pullback, ctx.jobs)
    if args.json:
        out = {
            "cones": {k: cone_json(v) for k, v in rep.cones.items()},
            "verdicts": [
                {
                    "a": a,
                    "b": b,
                    "verdict": v.verdict,
                    "witness_a": [_rat(x) for x in v.witness_a] if v.witness_a else None,
                    "witness_b": [_rat(x) for x in v.witness_b] if v.witness_b else None,
                }
                for (a, b), v in rep.verdicts.items()
            ],
            "nef_certified": rep.nef_certified,
        }
        print(dumps(out))
        return EXIT_OK
    print(f"{'cone':<6} {'dim':>3} {'gens':>5} {'facets':>6}")
    for k, c in rep.cones.items():
        print(f"{k:<6} {c.dim:>3} {len(c.generators):>5} {len(c.facets):>6}")
    for (a, b), v in rep.verdicts.items():
        line = f"{a} vs {b}: {v.verdict}"
        if v.witness_a is not None:
            line += f"  in {a} only: {_fmt_vec(v.witness_a)}"
        if v.witness_b is not None:
            line += f"  in {b} only: {_fmt_vec(v.witness_b)}"
        print(line)
    if rep.nef_certified:
        print("NEF_CERTIFIED")
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.all:
        targets = catalog.names()
    elif args.name:
        targets = [_catalog_name(args.name, args.chirality)]
    else:
        raise ParseError("give an entry name or --all")
    known = set(catalog.names())
    for t in targets:
        if t not in known and not t.startswith("kleinschmidt-s"):
            raise ParseError(f"unknown catalog entry {t!r}")
    failed = 0
    for t in targets:
        results = catalog.run_checks(t, args.jobs)
        total = sum(r.seconds for r in results)
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            extra = f"  [{r.detail}]" if r.detail else ""
            print(f"{status} {r.entry:<24} {r.check}  {r.seconds:.2f}s{extra}")
            failed += not r.passed
        print(f"-- {t}: {sum(r.passed for r in results)}/{len(results)} passed in {total:.2f}s")
    return EXIT_FAILED if failed else EXIT_OK


def cmd_catalog(args) -> int:
    if args.action == "list":
        for name in catalog.names():
            if name == "kleinschmidt":
                print("kleinschmidt-s<S>-a<a1,a2,...>  Kleinschmidt variety")
                continue
            print(f"{name:<16} {catalog.entry(name).description}")
        return EXIT_OK
    if not args.name:
        raise ParseError("catalog dump needs an entry name")
    name = _catalog_name(args.name, args.chirality)
    try:
        e = catalog.entry(name)
    except KeyError:
        raise ParseError(f"unknown catalog entry {name!r}") from None
    print(dumps(document_json(entry_document(e))))
    return EXIT_OK


def parse_plane(text: str, rank: int) -> list[list[Fraction]]:
    try:
        pts = [[parse_rational(x) for x in part.replace(",", " ").split()] for part in text.split(";")]
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"--plane: {exc}") from None
    if len(pts) != 3 or any(len(p) != rank for p in pts):
        raise ParseError(f"--plane needs three points of length {rank} separated by ';'")
    return pts


def slice_polygon(c: PolyCone, plane: Sequence[Sequence]) -> list[tuple[list[Fraction], list[Fraction]]]:
    """Vertices of the cone cut by the affine plane through three points.

    The cone is first restricted to the linear span of the points.  Each
    vertex is returned as ``(chart, point)`` where ``point = p0 + s (p1 - p0)
    + t (p2 - p0)`` and ``chart = [s, t]``.  Vertices are in boundary order.
    """
    p0, p1, p2 = ([Fraction(x) for x in p] for p in plane)
    span = _cone.positive_hull([], [p0, p1, p2], n=len(p0))
    if span.dim != 3:
        raise ValidationError("--plane points must be affinely independent and span a plane missing the origin")
    cut = _cone.intersect([c, span])
    if cut.lineality:
        raise ValidationError("cut cone contains a line, slice is unbounded")
    cols = [list(x) for x in zip(p0, p1, p2)]
    coords = [solve_rational(cols, list(g)) for g in cut.generators]
    if all(sum(lam) <= 0 for lam in coords):
        return []
    verts = []
    for g, lam in zip(cut.generators, coords):
        total = sum(lam)
        if total <= 0:
            raise ValidationError(f"generator {_fmt_vec(g)} does not meet the plane, slice is unbounded")
        lam = [x / total for x in lam]
        verts.append(([lam[1], lam[2]], [x / total for x in g]))
    if len(verts) <= 2:
        return verts
    # walk the boundary: consecutive vertices share a facet of the cut cone
    tight = [{k for k, f in enumerate(cut.facets) if dot(f, g) == 0} for g in cut.generators]
    order = [0]
    used = {0}
    while len(order) < len(verts):
        last = order[-1]
        nxt = next(j for j in range(len(verts)) if j not in used and tight[last] & tight[j])
        order.append(nxt)
        used.add(nxt)
    return [verts[k] for k in order]


def cmd_slice(args) -> int:
    ctx = _context(args)
    c = compute_cone(ctx, args.kind)
    n = c.ambient_dim
    if args.plane:
        plane = parse_plane(args.plane, n)
    elif n == 3:
        plane = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    else:
        raise ParseError(f"cone lives in dimension {n}; give --plane with three points")
    verts = slice_polygon(c, plane)
    if not verts:
        print("warning: plane misses the cone", file=sys.stderr)
    print(",".join(["s", "t"] + [f"x{i + 1}" for i in range(n)]))
    for chart, point in verts:
        print(",".join(_rat(x) for x in chart + point))
    return EXIT_OK


# -- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toricnef", description="Nef cone bounds for toric varieties of fans.")
    sub = p.add_subparsers(dest="command", required=True)

    def fan_options(sp, weights=True):
        sp.add_argument("fan", help="fan document path, '-' for stdin, or catalog:NAME")
        sp.add_argument("--paper-basis", action="store_true", help="use the document's class_basis coordinates")
        sp.add_argument("--chirality", choices=["A", "B"], help="triangulation of catalog:nonregular")
        sp.add_argument("--pullback", nargs="?", const="document", metavar="FILE",
                        help="map cones by a ray-level matrix (no FILE: the document's pullback_matrix)")
        sp.add_argument("--jobs", type=int, default=1)
        if weights:
            sp.add_argument("--weights", metavar="FILE", help="JSON list of {cone, w}")

    sp = sub.add_parser("cone", help="compute one cone as JSON")
    sp.add_argument("kind", choices=["g", "gcirc", "l", "f", "fw"])
    fan_options(sp)
    sp.set_defaults(func=cmd_cone)

    sp = sub.add_parser("compare", help="containment chain report")
    fan_options(sp)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("verify", help="run the catalog regression checks")
    sp.add_argument("name", nargs="?")
    sp.add_argument("--all", action="store_true")
    sp.add_argument("--chirality", choices=["A", "B"])
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("slice", help="CSV of a planar cross-section of a cone")
    sp.add_argument("kind", choices=["g", "gcirc", "l", "f", "fw"])
    fan_options(sp)
    sp.add_argument("--plane", help="three points 'a b c; d e f; g h i' in class coordinates")
    sp.set_defaults(func=cmd_slice)

    sp = sub.add_parser("catalog", help="list catalog entries or dump one as a fan document")
    sp.add_argument("action", choices=["list", "dump"])
    sp.add_argument("name", nargs="?")
    sp.add_argument("--chirality", choices=["A", "B"])
    sp.set_defaults(func=cmd_catalog)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, FanError, DivisorError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
