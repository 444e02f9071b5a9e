"""JSON and DOT serialisation of models and solve reports."""
from __future__ import annotations

import json
from typing import Mapping

from .algebra import Cause, hasse_edges, render_value, value_from_json, value_to_json
from .semantics import Interpretation


def model_to_json(m: Mapping) -> dict:
    return {a: value_to_json(m[a]) for a in sorted(m) if m[a].causes}


def model_from_json(data: Mapping) -> Interpretation:
    if not isinstance(data, Mapping):
        raise ValueError("a model must be a JSON object")
    return Interpretation({a: value_from_json(v) for a, v in data.items()})


def load_model(text: str) -> Interpretation:
    return model_from_json(json.loads(text))


def report_to_json(report) -> dict:
    return {
        "method": report.method,
        "complete": report.complete,
        "models": [model_to_json(m) for m in report.models],
        "stats": dict(report.stats),
    }


def model_to_text(m: Mapping) -> str:
    return "\n".join(f"{a} = {render_value(m[a])}" for a in sorted(m) if m[a].causes)


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def cause_to_dot(g: Cause, prefix: str) -> list[str]:
    """Cluster body for one cause, drawn as its transitive reduction."""
    lines = []
    for v in sorted(g.vertices):
        lines.append(f"    {_quote(prefix + v)} [label={_quote(v)}];")
    for a, b in hasse_edges(g):
        lines.append(f"    {_quote(prefix + a)} -> {_quote(prefix + b)};")
    return lines


def value_to_dot(atom: str, m: Mapping) -> str:
    value = m[atom]
    lines = [f"digraph {_quote(atom)} {{", "  rankdir=LR;"]
    for i, g in enumerate(value.sorted_causes()):
        lines.append(f"  subgraph {_quote(f'cluster_{i}')} {{")
        lines.append(f"    label={_quote(f'{atom} cause {i + 1}')};")
        lines += cause_to_dot(g, f"c{i}:")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
