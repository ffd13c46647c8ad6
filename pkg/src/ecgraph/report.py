"""JSON-ready reports with a fixed key order."""

from __future__ import annotations

import json

from .analyzers import (
    is_row_finite,
    nonexact_witnesses,
    nuclearity_heuristic,
    simplicity_necessary,
)
from .graph import EdgeColoredGraph, coloring_number
from .ktheory import KPair, k_edge_colored
from .staralg import GeneratorMap, VerifyReport


def k_theory_block(k: KPair) -> dict:
    return k.report()


def analysis_report(g: EdgeColoredGraph, k: KPair | None = None) -> dict:
    simple = simplicity_necessary(g)
    exact = nonexact_witnesses(g)
    nuclear = nuclearity_heuristic(g)
    if k is None:
        k = k_edge_colored(g)
    return {
        "graph": g.name,
        "coloring_number": coloring_number(g),
        "row_finite": is_row_finite(g).outcome == "pass",
        "simplicity_necessary": {"pass": simple.outcome == "pass", "witness": simple.witness},
        "exactness": {"verdict": exact.outcome, "witness": exact.witness},
        "nuclearity": {"verdict": nuclear.outcome, "reason": nuclear.reason},
        "k_theory": k_theory_block(k),
    }


def ktheory_report(g: EdgeColoredGraph, k: KPair | None = None) -> dict:
    if k is None:
        k = k_edge_colored(g)
    return {"graph": g.name, **k_theory_block(k)}


def verify_report(
    m: GeneratorMap,
    report: VerifyReport,
    inverse: GeneratorMap | None = None,
    inverse_report: VerifyReport | None = None,
    composition: VerifyReport | None = None,
) -> dict:
    images = m.reduced_images()
    out = {
        "map": m.name,
        "holds": report.all_hold,
        "images": {k: str(v) for k, v in images.items()},
        "zero_images": [k for k, v in images.items() if v.is_zero],
        "relations": report.to_json(),
    }
    if inverse is not None:
        out["inverse"] = {
            "map": inverse.name,
            "holds": inverse_report.all_hold,
            "relations": inverse_report.to_json(),
        }
        out["mutually_inverse"] = {
            "holds": composition.all_hold,
            "relations": composition.to_json(),
        }
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


REPORT_SCHEMA = {
    "type": "object",
    "required": [
        "graph", "coloring_number", "row_finite", "simplicity_necessary",
        "exactness", "nuclearity", "k_theory",
    ],
    "additionalProperties": False,
    "properties": {
        "graph": {"type": "string"},
        "coloring_number": {"type": "integer", "minimum": 0},
        "row_finite": {"type": "boolean"},
        "simplicity_necessary": {
            "type": "object",
            "required": ["pass", "witness"],
            "properties": {"pass": {"type": "boolean"}},
        },
        "exactness": {
            "type": "object",
            "required": ["verdict", "witness"],
            "properties": {"verdict": {"enum": ["not_exact", "unknown"]}},
        },
        "nuclearity": {
            "type": "object",
            "required": ["verdict", "reason"],
            "properties": {"verdict": {"enum": ["nuclear", "unknown"]}},
        },
        "k_theory": {"$ref": "#/$defs/k_theory"},
    },
    "$defs": {
        "group": {
            "type": "object",
            "required": ["rank", "torsion"],
            "additionalProperties": False,
            "properties": {
                "rank": {"type": "integer", "minimum": 0},
                "torsion": {"type": "array", "items": {"type": "integer", "minimum": 2}},
            },
        },
        "k_theory": {
            "type": "object",
            "required": ["k0", "k1", "vertex_classes"],
            "properties": {
                "k0": {"$ref": "#/$defs/group"},
                "k1": {"$ref": "#/$defs/group"},
                "vertex_classes": {
                    "type": "object",
                    "additionalProperties": {"type": "array", "items": {"type": "integer"}},
                },
            },
        },
    },
}
