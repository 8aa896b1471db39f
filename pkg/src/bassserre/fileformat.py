"""Reading and writing graph-of-groups documents.

The format is TOML with a fixed schema::

    [graph]
    vertices = ["v1", "v2"]
    edges = [{ name = "e", source = "v1", target = "v2" }]

    [group.v1]                     # one section per cell
    table = [[0, 1], [1, 0]]
    labels = ["1", "a"]            # optional

    [group.v2]                     # or a permutation group
    degree = 2
    perm_gens = ["(0 1)"]
    names = { b = "(0 1)" }        # optional aliases used as labels

    [boundary.e]                   # images of the edge-group elements
    into_source = [0]              # indices or labels
    into_target = ["1"]

    [basepoint]
    vertex = "v1"

    [tree]                         # optional; computed when absent
    edges = ["e"]
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Any

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .finite_groups import (
    FiniteGroup,
    NotAGroup,
    format_cycles,
    group_from_permutations,
    group_from_table,
    parse_cycles,
)
from .graph_of_groups import GraphOfGroups, make_graph_of_groups

NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


class ParseError(ValueError):
    pass


class SchemaError(ValueError):
    pass


def _section(doc: dict, key: str) -> dict:
    val = doc.get(key)
    if not isinstance(val, dict):
        raise SchemaError(f"missing section [{key}]")
    return val


def _parse_group(cell: str, spec: Any) -> FiniteGroup:
    if not isinstance(spec, dict):
        raise SchemaError(f"missing section [group.{cell}]")
    try:
        if "table" in spec:
            return group_from_table(spec["table"], spec.get("labels"), name=cell)
        if "perm_gens" in spec:
            if "degree" not in spec:
                raise SchemaError(f"[group.{cell}] missing field 'degree'")
            degree = int(spec["degree"])
            g = group_from_permutations(degree, list(spec["perm_gens"]), name=cell)
            names = spec.get("names", {})
            if names:
                labels = list(g.labels)
                for alias, cyc in names.items():
                    perm = format_cycles(parse_cycles(cyc, degree))
                    if perm not in g.labels:
                        raise SchemaError(f"[group.{cell}] name {alias!r}: {cyc} not in group")
                    labels[g.labels.index(perm)] = alias
                g = group_from_table([list(r) for r in g.mult], labels, name=cell)
            return g
    except NotAGroup as exc:
        raise SchemaError(f"[group.{cell}] {exc}") from exc
    except ValueError as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"[group.{cell}] {exc}") from exc
    raise SchemaError(f"[group.{cell}] needs 'table' or 'perm_gens'")


def _element(group: FiniteGroup, value: Any, where: str) -> int:
    if isinstance(value, bool):
        raise SchemaError(f"{where}: bad element {value!r}")
    if isinstance(value, int):
        return value
    try:
        return group.index_of(str(value))
    except KeyError:
        raise SchemaError(f"{where}: unknown element {value!r}") from None


def loads(text: str, name: str = "") -> GraphOfGroups:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(str(exc)) from exc
    graph = _section(doc, "graph")
    vertices = graph.get("vertices")
    if not vertices:
        raise SchemaError("[graph] missing field 'vertices' (no vertices)")
    vertices = [str(v) for v in vertices]
    edges: dict[str, tuple[str, str]] = {}
    for item in graph.get("edges", []):
        if not isinstance(item, dict) or "name" not in item:
            raise SchemaError("[graph] edge entry missing field 'name'")
        e = str(item["name"])
        for key in ("source", "target"):
            if key not in item:
                raise SchemaError(f"edge {e!r} missing field {key!r}")
            if item[key] not in vertices:
                raise SchemaError(f"edge {e!r} references unknown vertex {item[key]!r}")
        edges[e] = (str(item["source"]), str(item["target"]))
    cells = vertices + list(edges)
    for c in cells:
        if not NAME.match(c):
            raise SchemaError(f"bad cell name {c!r}")
    if len(set(cells)) != len(cells):
        raise SchemaError("cell names are not unique")
    group_specs = doc.get("group", {})
    groups = {c: _parse_group(c, group_specs.get(c)) for c in cells}
    boundaries = {}
    bspecs = doc.get("boundary", {})
    for e, (s, t) in edges.items():
        spec = bspecs.get(e)
        if not isinstance(spec, dict):
            raise SchemaError(f"missing section [boundary.{e}]")
        maps = []
        for key, v in (("into_source", s), ("into_target", t)):
            if key not in spec:
                raise SchemaError(f"[boundary.{e}] missing field {key!r}")
            maps.append([_element(groups[v], x, f"[boundary.{e}].{key}") for x in spec[key]])
        boundaries[e] = (maps[0], maps[1])
    base = _section(doc, "basepoint").get("vertex")
    if base is None:
        raise SchemaError("[basepoint] missing field 'vertex'")
    tree = doc.get("tree", {}).get("edges") if "tree" in doc else None
    return make_graph_of_groups(vertices, edges, groups, boundaries, base=str(base),
                                tree=tree, name=name)


def load(path: str | Path) -> GraphOfGroups:
    path = Path(path)
    return loads(path.read_text(encoding="utf-8"), name=path.stem)


def _str(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _ints(xs) -> str:
    return "[" + ", ".join(str(x) for x in xs) + "]"


def dumps(g: GraphOfGroups) -> str:
    lines = ["[graph]",
             "vertices = [" + ", ".join(_str(v) for v in g.vertices) + "]",
             "edges = ["]
    for e in g.edges:
        lines.append(f"  {{ name = {_str(e)}, source = {_str(g.source[e])}, "
                     f"target = {_str(g.target[e])} }},")
    lines.append("]")
    for c in g.cells:
        grp = g.groups[c]
        lines += ["", f"[group.{c}]",
                  "table = [" + ", ".join(_ints(r) for r in grp.mult) + "]"]
        if grp.labels:
            lines.append("labels = [" + ", ".join(_str(x) for x in grp.labels) + "]")
    for e in g.edges:
        lines += ["", f"[boundary.{e}]",
                  f"into_source = {_ints(g.bd0[e])}",
                  f"into_target = {_ints(g.bd1[e])}"]
    lines += ["", "[basepoint]", f"vertex = {_str(g.base)}",
              "", "[tree]", "edges = [" + ", ".join(_str(e) for e in sorted(g.tree)) + "]", ""]
    return "\n".join(lines)
