"""JSON interchange and Graphviz DOT export.

Graphs are written as ``{"n": n, "q": q, "edges": [[u, v, c], ...]}`` with
u < v and edges sorted, so equal graphs always serialize to equal bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .errors import PreconditionError
from .graph import ColoredGraph, build_graph
from .templates import Template
from .tilings import Tiling

PALETTE = ("#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4",
           "#f032e6", "#bfef45", "#469990", "#9a6324", "#800000", "#000075")


def graph_to_dict(g: ColoredGraph) -> dict[str, Any]:
    return {"n": g.n, "q": g.q, "edges": [[u, v, c] for u, v, c in g.edges()]}


def graph_from_dict(d: dict[str, Any]) -> ColoredGraph:
    try:
        n, q, edges = int(d["n"]), int(d["q"]), d["edges"]
    except (KeyError, TypeError, ValueError) as e:
        raise PreconditionError(f"malformed graph JSON: {e}") from None
    for e in edges:
        if len(e) != 3:
            raise PreconditionError(f"edge {e} must be [u, v, c]")
    return build_graph(n, q, edges)


def dumps(obj: Any) -> str:
    """Deterministic compact JSON (sorted keys, Fractions as "num/den")."""
    return json.dumps(to_jsonable(obj), sort_keys=True, separators=(",", ":"))


def graph_to_json(g: ColoredGraph) -> str:
    return dumps(graph_to_dict(g))


def graph_from_json(text: str) -> ColoredGraph:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise PreconditionError(f"invalid JSON: {e}") from None
    if not isinstance(d, dict):
        raise PreconditionError("graph JSON must be an object")
    return graph_from_dict(d)


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, ColoredGraph):
        return graph_to_dict(obj)
    if isinstance(obj, Tiling):
        return [list(b) for b in obj.blocks]
    if isinstance(obj, Template):
        return {"center": list(obj.center), "cycle": list(obj.cycle)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return [to_jsonable(x) for x in sorted(obj)]
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    if hasattr(obj, "__dataclass_fields__"):
        return {k: to_jsonable(getattr(obj, k)) for k in obj.__dataclass_fields__}
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        raise PreconditionError("floats are not serialized; use Fraction")
    return str(obj)


def edge_color(c: int) -> str:
    return PALETTE[(c - 1) % len(PALETTE)]


def export_dot(g: ColoredGraph, parts: Sequence[Sequence[int]] | None = None,
               tiling: Tiling | None = None, template: Template | None = None,
               name: str = "G") -> str:
    """DOT text; parts become clusters, tiling edges bold, template dashed."""
    bold = {e for e in tiling.edges()} if tiling is not None else set()
    hi_v: set[int] = set()
    hi_e: set[tuple[int, int]] = set()
    if template is not None:
        cyc = template.cycle
        hi_v = set(template.vertices)
        hi_e = {tuple(sorted((cyc[i], cyc[(i + 1) % len(cyc)]))) for i in range(len(cyc))}
        hi_e |= {tuple(sorted((z, w))) for z in template.center for w in cyc}
    lines = [f"graph {name} {{", "  node [shape=circle];"]
    placed: set[int] = set()
    for i, part in enumerate(parts or []):
        lines.append(f"  subgraph cluster_{i} {{")
        lines.append(f'    label="V{i + 1}";')
        for v in part:
            lines.append(f"    {_node(v, hi_v)}")
            placed.add(v)
        lines.append("  }")
    for v in range(g.n):
        if v not in placed:
            lines.append(f"  {_node(v, hi_v)}")
    for u, v, c in g.edges():
        attrs = [f'color="{edge_color(c)}"', f'label="{c}"']
        if (u, v) in bold:
            attrs.append("penwidth=3")
        if (u, v) in hi_e:
            attrs.append("style=dashed")
        lines.append(f"  {u} -- {v} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _node(v: int, hi: Iterable[int]) -> str:
    return f"{v} [style=filled, fillcolor=yellow];" if v in hi else f"{v};"
