"""Command-line driver: parse group/cocycle/G-set specs, run computations,
emit one JSON report per invocation.

Exit codes: 0 all requested checks passed, 1 a check failed (the witness is
in the report), 2 malformed input or schema violation.  Reports go to stdout
or to --output (resolved against QELLIPTIC_OUTPUT_DIR when relative);
human-readable summaries go to stderr at verbosity >= 1.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction
from importlib import resources

import jsonschema

from . import groups as gr
from .cochains import Cochain3, check_cocycle3, check_normalized, cochain3_from_json, \
    cochain3_to_json, cochain2_to_json, qz_str, transgress, value_order
from .chern import chern_character, check_image_preservation, kernel_c, verify_willerton_line
from .devoto import invariant_rank_pt
from .errors import QellipticError, ValidationError
from .groups import SL2_S, SL2_T
from .qell import (
    QEllClass,
    build_structure,
    free_translation,
    generator_class,
    gset_from_json,
    point,
    rank_report,
    trivial_gset,
)
from .reps import central_extension, character_table, extension_element_order
from .verify import PARTS, verify_all

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2

_SCHEMA_CACHE: dict[str, dict] = {}


def _load_schema(name: str) -> dict:
    if name not in _SCHEMA_CACHE:
        text = resources.files("qelliptic.schemas").joinpath(f"{name}.schema.json").read_text()
        _SCHEMA_CACHE[name] = json.loads(text)
    return _SCHEMA_CACHE[name]


def schema_validate(document, schema_name: str) -> tuple[bool, list[str]]:
    """Strict validation: unknown keys are rejected by the shipped schemas."""
    schema = _load_schema(schema_name)
    validator = jsonschema.Draft202012Validator(schema)
    diagnostics = []
    for error in sorted(validator.iter_errors(document), key=lambda e: list(e.absolute_path)):
        path = "/".join(str(p) for p in error.absolute_path) or "<root>"
        diagnostics.append(f"{path}: {error.message}")
    return not diagnostics, diagnostics


def _load_doc(raw: str):
    raw = raw.strip()
    if raw.startswith(("{", "[")):
        return json.loads(raw)
    if os.path.exists(raw):
        with open(raw, "r", encoding="utf-8") as fh:
            return json.load(fh)
    raise ValidationError(f"{raw!r} is neither inline JSON nor an existing file")


def parse_group(raw: str) -> gr.FiniteGroup:
    if raw.startswith("builtin:"):
        return gr.builtin(raw.split(":", 1)[1])
    doc = _load_doc(raw)
    ok, diagnostics = schema_validate(doc, "group")
    if not ok:
        raise ValidationError("group spec: " + "; ".join(diagnostics))
    return gr.build_group(doc)


def parse_cocycle(raw: str | None, G: gr.FiniteGroup) -> Cochain3 | None:
    if raw is None or raw == "none":
        return None
    if raw == "zero":
        return cochain3_from_json({"family": "zero"}, G)
    if raw.startswith("cyclic:"):
        _, n, k = raw.split(":")
        return cochain3_from_json({"family": "cyclic", "n": int(n), "k": int(k)}, G)
    doc = _load_doc(raw)
    ok, diagnostics = schema_validate(doc, "cocycle")
    if not ok:
        raise ValidationError("cocycle spec: " + "; ".join(diagnostics))
    return cochain3_from_json(doc, G)


def parse_space(raw: str | None, G: gr.FiniteGroup):
    if raw is None or raw == "pt":
        return point(G)
    if raw == "free":
        return free_translation(G)
    if raw.startswith("trivial:"):
        return trivial_gset(G, int(raw.split(":", 1)[1]))
    doc = _load_doc(raw)
    ok, diagnostics = schema_validate(doc, "gset")
    if not ok:
        raise ValidationError("G-set spec: " + "; ".join(diagnostics))
    return gset_from_json(doc, G)


def _emit(report: dict, args) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    output = getattr(args, "output", None)
    if output:
        base = os.environ.get("QELLIPTIC_OUTPUT_DIR")
        if base and not os.path.isabs(output):
            output = os.path.join(base, output)
        directory = os.path.dirname(output) or "."
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(text)
            os.replace(tmp, output)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    else:
        sys.stdout.write(text)


def _summary(args, message: str) -> None:
    if getattr(args, "verbosity", 1) >= 1:
        print(message, file=sys.stderr)


# ---------------------------------------------------------------------------
# subcommands


def cmd_group_info(args) -> int:
    G = parse_group(args.group)
    classes = gr.conjugacy_classes(G)
    pairs = gr.commuting_pairs(G)
    orbits = gr.pair_orbits(G, args.acting)
    report = {
        "command": "group-info",
        "name": G.name,
        "order": G.order,
        "abelian": G.is_abelian,
        "identity": G.identity,
        "classes": [{"representative": rep, "size": len(members)} for rep, members in classes],
        "element_orders": [gr.element_order(G, g) for g in G.elements()],
        "commuting_pairs": len(pairs),
        "pair_orbits": {
            "acting": args.acting,
            "count": len(orbits),
            "representatives": [list(o.representative) for o in orbits],
        },
    }
    _summary(args, f"{G.name}: order {G.order}, {len(classes)} classes, "
                   f"{len(pairs)} commuting pairs, {len(orbits)} orbits")
    _emit(report, args)
    return EXIT_OK


def cmd_cocycle_check(args) -> int:
    G = parse_group(args.group)
    try:
        alpha = parse_cocycle(args.cocycle, G)
    except QellipticError as exc:
        # constructor-verified families signal malformed input, not a failed check
        if args.cocycle.startswith(("cyclic:", "zero")):
            raise
        alpha = None
        report = {"command": "cocycle-check", "ok": False, "error": str(exc)}
        _emit(report, args)
        return EXIT_CHECK_FAILED
    if alpha is None:
        raise ValidationError("cocycle-check needs a cocycle")
    ok, witness = check_cocycle3(alpha)
    normalized = check_normalized(alpha)
    report = {
        "command": "cocycle-check",
        "ok": ok and normalized,
        "cocycle": ok,
        "normalized": normalized,
        "witness": list(witness) if witness else None,
        "value_order": value_order(alpha),
    }
    _summary(args, f"cocycle: {'ok' if report['ok'] else 'FAILED'}")
    _emit(report, args)
    return EXIT_OK if report["ok"] else EXIT_CHECK_FAILED


def cmd_transgress(args) -> int:
    G = parse_group(args.group)
    alpha = parse_cocycle(args.cocycle, G)
    if alpha is None:
        raise ValidationError("transgress needs a cocycle")
    elements = [int(args.element)] if args.element is not None else list(G.elements())
    thetas = []
    for g in elements:
        theta = transgress(alpha, g)
        thetas.append({
            "element": g,
            "centralizer": list(theta.carrier.elements),
            "value_order": value_order(theta),
            "theta": cochain2_to_json(theta),
        })
    report = {"command": "transgress", "ok": True, "transgressions": thetas}
    _summary(args, f"transgressed at {len(elements)} element(s)")
    _emit(report, args)
    return EXIT_OK


def cmd_extension(args) -> int:
    G = parse_group(args.group)
    alpha = parse_cocycle(args.cocycle, G)
    if alpha is None:
        raise ValidationError("extension needs a cocycle")
    g = int(args.element)
    theta = transgress(alpha, g)
    E = central_extension(theta.carrier.group, theta)
    g_loc = theta.carrier.to_local(g)
    order_0g = extension_element_order(E, 0, g_loc)
    bound = value_order(theta) * gr.element_order(G, g)
    report = {
        "command": "extension",
        "ok": bound % order_0g == 0,
        "element": g,
        "theta_order": value_order(theta),
        "element_order": gr.element_order(G, g),
        "extension_order": E.order,
        "order_of_lift": order_0g,
        "divides_bound": bound % order_0g == 0,
        "abelian": E.total.is_abelian,
    }
    _summary(args, f"extension of C_G({g}) by Z/{E.n}: order {E.order}, "
                   f"ord(0,g) = {order_0g}")
    _emit(report, args)
    return EXIT_OK if report["ok"] else EXIT_CHECK_FAILED


def cmd_qell(args) -> int:
    G = parse_group(args.group)
    alpha = parse_cocycle(args.cocycle, G)
    X = parse_space(args.space, G)
    structure = build_structure(G, X, alpha)
    report = {
        "command": "qell",
        "ok": True,
        "rank": rank_report(structure),
        "basis": [
            {"sigma": b.sigma, "orbit": b.orbit, "irrep": b.irrep, "q_shift": b.q_shift}
            for b in structure.basis()
        ],
    }
    _summary(args, f"total rank {report['rank']['total']} over Z[q^+-]")
    _emit(report, args)
    return EXIT_OK


def cmd_devoto_rank(args) -> int:
    G = parse_group(args.group)
    alpha = parse_cocycle(args.cocycle, G)
    ranks, total = invariant_rank_pt(G, alpha)
    report = {
        "command": "devoto-rank",
        "ok": True,
        "total": total,
        "orbits": [
            {"representative": list(o.representative), "size": len(o.members), "rank": r}
            for o, r in ranks
        ],
    }
    _summary(args, f"invariant rank over a point: {total}")
    _emit(report, args)
    return EXIT_OK


def cmd_chern(args) -> int:
    G = parse_group(args.group)
    alpha = parse_cocycle(args.cocycle, G)
    X = parse_space(args.space, G)
    structure = build_structure(G, X, alpha)
    if args.cls:
        doc = _load_doc(args.cls)
        ok, diagnostics = schema_validate(doc, "class")
        if not ok:
            raise ValidationError("class spec: " + "; ".join(diagnostics))
        cls = QEllClass.from_json(doc, structure)
    else:
        cls = QEllClass(structure, {b: 1 for b in structure.basis()})
    result = chern_character(cls)

    kernel_ok = True
    for sigma in structure.class_reps:
        kernel_ok = kernel_ok and kernel_c(structure, sigma).ok
    willerton_ok = True
    if alpha is not None:
        for (g, h) in gr.commuting_pairs(G):
            ok, _ = verify_willerton_line(alpha, g, h)
            willerton_ok = willerton_ok and ok
    sl2 = {}
    for name, A in (("S", SL2_S), ("T", SL2_T)):
        sl2[name] = check_image_preservation(cls, A).ok

    checks = {"kernel": kernel_ok, "willerton": willerton_ok, "sl2": sl2}
    all_ok = kernel_ok and willerton_ok and all(sl2.values())
    report = {
        "command": "chern",
        "ok": all_ok,
        "input": cls.to_json(),
        "output": result.to_json(),
        "checks": checks,
    }
    _summary(args, f"chern character over {G.name}: checks "
                   f"{'pass' if all_ok else 'FAIL'}")
    _emit(report, args)
    return EXIT_OK if all_ok else EXIT_CHECK_FAILED


def cmd_verify(args) -> int:
    if args.target == "all":
        report = verify_all(seed=args.seed)
    elif args.target == "sl2":
        G = parse_group(args.group)
        alpha = parse_cocycle(args.cocycle, G)
        structure = build_structure(G, point(G), alpha)
        failures = []
        checked = 0
        for b in structure.basis():
            c = generator_class(structure, b)
            for name, A in (("S", SL2_S), ("T", SL2_T)):
                rep = check_image_preservation(c, A)
                checked += 1
                if not rep.ok:
                    failures.append({"basis": b.__dict__ | {}, "matrix": name,
                                     "detail": rep.to_json()})
        report = {"ok": not failures, "checked": checked, "failures": failures}
    elif args.target in PARTS:
        report = {"ok": True, "parts": {args.target: PARTS[args.target](seed=args.seed)}}
        report["ok"] = report["parts"][args.target]["ok"]
    else:
        raise ValidationError(f"unknown verify target {args.target!r}")
    report = {"command": "verify", "target": args.target, "seed": args.seed, **report}
    _summary(args, f"verify {args.target}: {'pass' if report['ok'] else 'FAIL'}")
    _emit(report, args)
    return EXIT_OK if report["ok"] else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qelliptic",
        description="Exact quasi-elliptic cohomology computations and checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, space=False, cocycle=False, group=True):
        if group:
            p.add_argument("--group", required=True,
                           help="builtin:NAME, a JSON file path, or inline JSON")
        if cocycle:
            p.add_argument("--cocycle", default=None,
                           help="zero, cyclic:N:K, a JSON file path, or inline JSON")
        if space:
            p.add_argument("--space", default="pt",
                           help="pt, free, trivial:N, a JSON file path, or inline JSON")
        p.add_argument("--output", default=None, help="write the JSON report to this path")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
        p.add_argument("--verbosity", type=int, default=1)

    p = sub.add_parser("group-info", help="orders, classes, commuting pairs, orbits")
    common(p)
    p.add_argument("--acting", choices=["conjugation", "conjugation-and-sl2"],
                   default="conjugation")
    p.set_defaults(fn=cmd_group_info)

    p = sub.add_parser("cocycle-check", help="verify the degree-3 cocycle identity")
    common(p, cocycle=True)
    p.set_defaults(fn=cmd_cocycle_check)

    p = sub.add_parser("transgress", help="transgress a 3-cocycle to centralizers")
    common(p, cocycle=True)
    p.add_argument("--element", default=None, help="single element (default: all)")
    p.set_defaults(fn=cmd_transgress)

    p = sub.add_parser("extension", help="central extension data at one element")
    common(p, cocycle=True)
    p.add_argument("--element", required=True)
    p.set_defaults(fn=cmd_extension)

    p = sub.add_parser("qell", help="sector basis and ranks of a finite G-set")
    common(p, space=True, cocycle=True)
    p.set_defaults(fn=cmd_qell)

    p = sub.add_parser("devoto-rank", help="invariant rank over a point")
    common(p, cocycle=True)
    p.set_defaults(fn=cmd_devoto_rank)

    p = sub.add_parser("chern", help="character pipeline with its checks")
    common(p, space=True, cocycle=True)
    p.add_argument("--class", dest="cls", default=None,
                   help="class terms as JSON (default: sum of all basis generators)")
    p.set_defaults(fn=cmd_chern)

    p = sub.add_parser("verify", help="run a verification battery")
    p.add_argument("target", choices=["all", "sl2", *PARTS.keys()])
    p.add_argument("--group", default=None)
    p.add_argument("--cocycle", default=None)
    p.add_argument("--output", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verbosity", type=int, default=1)
    p.set_defaults(fn=cmd_verify)

    return parser


def run(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT_ERROR if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except (QellipticError, json.JSONDecodeError, KeyError, OSError) as exc:
        error_doc = {"command": args.command, "error": f"{type(exc).__name__}: {exc}"}
        sys.stdout.write(json.dumps(error_doc, indent=2, sort_keys=True) + "\n")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
