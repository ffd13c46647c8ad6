"""Command-line front end.

Exit codes: 0 success, 1 verification failed, 2 input error, 3 internal
invariant breach.  Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import analyzers
from .abelian import NotWellDefined
from .graph import GraphError, coloring_number, free_product
from .ktheory import k_edge_colored
from .report import analysis_report, dumps, ktheory_report, verify_report
from .staralg import verify_homomorphism, verify_mutually_inverse
from .syntax import ParseFailure, emit_graph, parse_genmap, parse_graph

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class InputError(Exception):
    pass


def _styled(text: str, code: str) -> str:
    if os.environ.get("ECG_COLOR") == "0" or not sys.stdout.isatty():
        return text
    return f"\033[{code}m{text}\033[0m"


def _good(text):
    return _styled(text, "32")


def _bad(text):
    return _styled(text, "31")


def load_graph(path: str):
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    try:
        return parse_graph(text, str(p))
    except ParseFailure as exc:
        raise InputError(str(exc)) from None


def load_map(path: str, source, target):
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    try:
        return parse_genmap(text, source, target, str(p))
    except ParseFailure as exc:
        raise InputError(str(exc)) from None


def _group(desc: dict) -> str:
    parts = [f"Z/{d}" for d in desc["torsion"]]
    if desc["rank"]:
        parts.append("Z" if desc["rank"] == 1 else f"Z^{desc['rank']}")
    return " + ".join(parts) if parts else "0"


def _ktheory_lines(block: dict) -> list[str]:
    lines = [f"  K0: {_group(block['k0'])}", f"  K1: {_group(block['k1'])}"]
    for v, c in block["vertex_classes"].items():
        lines.append(f"    [p({v})] = ({', '.join(map(str, c))})")
    return lines


def _format_analysis(g, rep: dict) -> str:
    lines = [f"graph {rep['graph']}", f"  coloring number: {rep['coloring_number']}"]
    table = analyzers.in_degree_table(g)
    degrees = " ".join(f"{v}@{c}={n}" for (v, c), n in table.items()) or "(no edges)"
    lines.append(f"  row finite: {'yes' if rep['row_finite'] else 'no'} ({degrees})")
    simple = rep["simplicity_necessary"]
    if simple["pass"]:
        lines.append(f"  simplicity: {_good('necessary conditions hold (not sufficient)')}")
    else:
        lines.append(f"  simplicity: {_bad('not simple')} {simple['witness']}")
    exact = rep["exactness"]
    if exact["verdict"] == "not_exact":
        lines.append(f"  exactness: {_bad('not exact')} {exact['witness']}")
    else:
        lines.append("  exactness: unknown (no obstruction found)")
    nuc = rep["nuclearity"]
    lines.append(f"  nuclearity: {nuc['verdict']} ({nuc['reason']})")
    lines += _ktheory_lines(rep["k_theory"])
    return "\n".join(lines) + "\n"


def cmd_analyze(args) -> int:
    target = Path(args.path)
    paths = sorted(target.glob("*.ecg")) if target.is_dir() else [target]
    reports, status = [], EXIT_OK
    for path in paths:
        try:
            g = load_graph(str(path))
        except InputError as exc:
            print(exc, file=sys.stderr)
            status = EXIT_INPUT
            continue
        reports.append((g, analysis_report(g)))
    if args.json:
        payload = [r for _, r in reports]
        sys.stdout.write(dumps(payload if target.is_dir() else (payload[0] if payload else None)))
    else:
        sys.stdout.write("\n".join(_format_analysis(g, r) for g, r in reports))
    return status


def cmd_ktheory(args) -> int:
    g = load_graph(args.path)
    rep = ktheory_report(g, k_edge_colored(g))
    if args.json:
        sys.stdout.write(dumps(rep))
    else:
        sys.stdout.write("\n".join([f"graph {g.name}"] + _ktheory_lines(rep)) + "\n")
    return EXIT_OK


def cmd_color_number(args) -> int:
    g = load_graph(args.path)
    n = coloring_number(g)
    sys.stdout.write(dumps({"graph": g.name, "coloring_number": n}) if args.json else f"{n}\n")
    return EXIT_OK


def _format_checks(title: str, report, notes=()) -> list[str]:
    lines = [title, *(f"  {n}" for n in notes)]
    for c in report:
        mark = {"holds": _good("holds"), "fails": _bad("FAILS"), "unproved": "unproved"}[c.status]
        lines.append(f"  {mark:<8} {c.id}: {c.description}")
        if c.status != "holds":
            lines.append(f"           residual: {c.residual}")
    return lines


def cmd_verify_hom(args) -> int:
    source, target = load_graph(args.source), load_graph(args.target)
    m = load_map(args.map, source, target)
    rep = verify_homomorphism(m)
    inv = inv_rep = comp = None
    if args.inverse:
        inv = load_map(args.inverse, target, source)
        inv_rep = verify_homomorphism(inv)
        comp = verify_mutually_inverse(m, inv)
    ok = rep.all_hold and (inv is None or (inv_rep.all_hold and comp.all_hold))
    if args.json:
        sys.stdout.write(dumps(verify_report(m, rep, inv, inv_rep, comp)))
    else:
        zeros = [f"image of {k} reduces to 0" for k, v in m.reduced_images().items() if v.is_zero]
        lines = _format_checks(f"map {m.name}: {source.name} -> {target.name}", rep, zeros)
        if inv is not None:
            lines += _format_checks(f"map {inv.name}: {target.name} -> {source.name}", inv_rep)
            lines += _format_checks("mutually inverse", comp)
        lines.append("all relations hold" if ok else "verification failed")
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_free_product(args) -> int:
    graphs = [load_graph(p) for p in args.paths]
    shared = [v for v in (args.share or "").split(",") if v]
    try:
        g = free_product(graphs, shared, name=args.name)
    except GraphError as exc:
        raise InputError(str(exc)) from None
    sys.stdout.write(emit_graph(g))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ecg", description="Edge-colored directed graphs and their C*-algebra data."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="coloring, simplicity, exactness, nuclearity, K-theory")
    p.add_argument("path", help=".ecg file or a directory of them")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("ktheory", help="K0 and K1 with vertex classes")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_ktheory)

    p = sub.add_parser("verify-hom", help="check a generator map against the relations")
    p.add_argument("source", help="source graph (.ecg)")
    p.add_argument("target", help="target graph (.ecg)")
    p.add_argument("--map", required=True, help="generator map source -> target (.hom)")
    p.add_argument("--inverse", help="candidate inverse map target -> source (.hom)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify_hom)

    p = sub.add_parser("free-product", help="glue graphs along shared vertices")
    p.add_argument("paths", nargs="+")
    p.add_argument("--share", default="", help="comma-separated shared vertex ids")
    p.add_argument("--name", default=None)
    p.set_defaults(func=cmd_free_product)

    p = sub.add_parser("color-number", help="the coloring number")
    p.add_argument("path")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_color_number)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT
    except (AssertionError, NotWellDefined) as exc:
        print(f"internal invariant breach: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
