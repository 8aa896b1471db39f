"""Finite graphs of finite groups: data model, validation and reduction."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from .finite_groups import FiniteGroup


class InvalidInput(ValueError):
    def __init__(self, violations: list["Violation"]):
        self.violations = violations
        super().__init__("; ".join(v.message for v in violations))


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    witness: tuple = ()


@dataclass(frozen=True, eq=True)
class GraphOfGroups:
    """A connected finite graph with a finite group on every cell.

    ``source``/``target`` are the incidence maps d0/d1 on edges (on vertices
    they are the identity). ``bd0[e]`` and ``bd1[e]`` list, for each element of
    the edge group, its image in the source and target vertex group.
    """
    vertices: tuple[str, ...]
    edges: tuple[str, ...]
    source: Mapping[str, str]
    target: Mapping[str, str]
    groups: Mapping[str, FiniteGroup]
    bd0: Mapping[str, tuple[int, ...]]
    bd1: Mapping[str, tuple[int, ...]]
    tree: frozenset[str]
    base: str
    name: str = field(default="", compare=False)

    __hash__ = None  # type: ignore[assignment]

    @property
    def cells(self) -> tuple[str, ...]:
        return self.vertices + self.edges

    def is_vertex(self, cell: str) -> bool:
        return cell in self.vertices

    def d0(self, cell: str) -> str:
        return cell if cell in self.vertices else self.source[cell]

    def d1(self, cell: str) -> str:
        return cell if cell in self.vertices else self.target[cell]

    def is_loop(self, e: str) -> bool:
        return self.source[e] == self.target[e]

    def boundary(self, e: str, side: int) -> tuple[int, ...]:
        return self.bd0[e] if side == 0 else self.bd1[e]

    def edge_image(self, e: str, side: int) -> frozenset[int]:
        return frozenset(self.boundary(e, side))

    def tree_paths(self) -> dict[str, tuple[tuple[str, int], ...]]:
        """Edge-end sequence of the spanning-tree path from the base to every vertex."""
        paths: dict[str, tuple[tuple[str, int], ...]] = {self.base: ()}
        frontier = [self.base]
        while frontier:
            nxt = []
            for v in frontier:
                for e in sorted(self.tree):
                    for sign, here, there in ((1, self.source[e], self.target[e]),
                                              (-1, self.target[e], self.source[e])):
                        if here == v and there not in paths:
                            paths[there] = paths[v] + ((e, sign),)
                            nxt.append(there)
            frontier = nxt
        return paths

    def with_tree(self, tree: Iterable[str]) -> "GraphOfGroups":
        return replace(self, tree=frozenset(tree))


def spanning_tree(vertices: Iterable[str], edges: Iterable[str], source: Mapping[str, str],
                  target: Mapping[str, str], prefer: Iterable[str] = ()) -> frozenset[str]:
    """Spanning forest by Kruskal order: preferred edges first, then by name."""
    parent = {v: v for v in vertices}

    def find(v: str) -> str:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    edges = sorted(edges)
    prefer = [e for e in sorted(prefer) if e in edges]
    chosen = set()
    for e in prefer + [e for e in edges if e not in prefer]:
        a, b = find(source[e]), find(target[e])
        if a != b:
            parent[a] = b
            chosen.add(e)
    return frozenset(chosen)


def make_graph_of_groups(vertices: Iterable[str], edges: Mapping[str, tuple[str, str]],
                         groups: Mapping[str, FiniteGroup],
                         boundaries: Mapping[str, tuple[Iterable[int], Iterable[int]]],
                         base: Optional[str] = None, tree: Optional[Iterable[str]] = None,
                         name: str = "") -> GraphOfGroups:
    vertices = tuple(vertices)
    names = tuple(sorted(edges))
    source = {e: edges[e][0] for e in names}
    target = {e: edges[e][1] for e in names}
    if tree is None:
        tree = spanning_tree([v for v in vertices], names, source, target) \
            if all(source[e] in vertices and target[e] in vertices for e in names) else ()
    return GraphOfGroups(
        vertices=vertices,
        edges=names,
        source=source,
        target=target,
        groups=dict(groups),
        bd0={e: tuple(boundaries[e][0]) for e in names},
        bd1={e: tuple(boundaries[e][1]) for e in names},
        tree=frozenset(tree),
        base=base if base is not None else (vertices[0] if vertices else ""),
        name=name,
    )


def validate(g: GraphOfGroups) -> list[Violation]:
    """Every violated invariant with a witness; empty means valid."""
    out: list[Violation] = []
    if not g.vertices:
        out.append(Violation("graph", "no vertices"))
        return out
    seen: set[str] = set()
    for c in g.cells:
        if c in seen:
            out.append(Violation("graph", f"duplicate cell name {c!r}", (c,)))
        seen.add(c)
    for c in g.cells:
        if c not in g.groups:
            out.append(Violation("group", f"cell {c!r} has no group", (c,)))
    for e in g.edges:
        for end, v in (("source", g.source.get(e)), ("target", g.target.get(e))):
            if v not in g.vertices:
                out.append(Violation("graph", f"edge {e!r} {end} {v!r} is not a vertex", (e,)))
    if out:
        return out
    for e in g.edges:
        ge = g.groups[e]
        for side, v in ((0, g.source[e]), (1, g.target[e])):
            gv = g.groups[v]
            images = g.boundary(e, side)
            label = f"bd{side}({e})"
            if len(images) != ge.order:
                out.append(Violation("boundary", f"{label} has {len(images)} images for a group "
                                     f"of order {ge.order}", (e, side)))
                continue
            bad = [x for x in images if not 0 <= x < gv.order]
            if bad:
                out.append(Violation("boundary", f"{label} image {bad[0]} outside group of {v!r}",
                                     (e, side)))
                continue
            hom_fail = next(((a, b) for a in range(ge.order) for b in range(ge.order)
                             if images[ge.mult[a][b]] != gv.mult[images[a]][images[b]]), None)
            if hom_fail is not None:
                out.append(Violation("boundary", f"{label} is not a homomorphism at {hom_fail}",
                                     (e, side) + hom_fail))
            first: dict[int, int] = {}
            for x, y in enumerate(images):
                if y in first:
                    out.append(Violation("boundary", f"{label} not injective: elements "
                                         f"{first[y]} and {x} both map to {y}",
                                         (e, side, first[y], x)))
                    break
                first[y] = x
    if g.base not in g.vertices:
        out.append(Violation("basepoint", f"base {g.base!r} is not a vertex", (g.base,)))
    reach = _component(g, g.vertices[0], g.edges)
    if len(reach) != len(g.vertices):
        missing = sorted(set(g.vertices) - reach)
        out.append(Violation("graph", f"graph is disconnected: {missing[0]!r} unreachable",
                             (missing[0],)))
    unknown = sorted(set(g.tree) - set(g.edges))
    if unknown:
        out.append(Violation("tree", f"tree edge {unknown[0]!r} is not an edge", (unknown[0],)))
    else:
        tree_reach = _component(g, g.base if g.base in g.vertices else g.vertices[0],
                                sorted(g.tree))
        if len(tree_reach) != len(g.vertices):
            missing = sorted(set(g.vertices) - tree_reach)
            out.append(Violation("tree", f"tree not spanning: misses {missing[0]!r}",
                                 (missing[0],)))
        if len(g.tree) > len(g.vertices) - 1:
            out.append(Violation("tree", "tree has a cycle", tuple(sorted(g.tree))))
    return out


def _component(g: GraphOfGroups, start: str, edges: Iterable[str]) -> set[str]:
    edges = list(edges)
    reach = {start}
    changed = True
    while changed:
        changed = False
        for e in edges:
            a, b = g.source[e], g.target[e]
            if (a in reach) != (b in reach):
                reach |= {a, b}
                changed = True
    return reach


def ensure_valid(g: GraphOfGroups) -> None:
    violations = validate(g)
    if violations:
        raise InvalidInput(violations)


def fictitious_edges(g: GraphOfGroups) -> list[str]:
    """Non-loop edges whose boundary map onto some endpoint group is onto."""
    return [e for e in sorted(g.edges) if not g.is_loop(e)
            and (g.groups[e].order == g.groups[g.source[e]].order
                 or g.groups[e].order == g.groups[g.target[e]].order)]


def is_reduced(g: GraphOfGroups) -> bool:
    ensure_valid(g)
    return not fictitious_edges(g)


def contract_edge(g: GraphOfGroups, e: str) -> GraphOfGroups:
    """Collapse a fictitious edge, folding the absorbed vertex group into the other end."""
    src, dst = g.source[e], g.target[e]
    ge = g.groups[e]
    if ge.order == g.groups[dst].order:
        keep, drop, onto, into = src, dst, g.bd1[e], g.bd0[e]
    else:
        keep, drop, onto, into = dst, src, g.bd0[e], g.bd1[e]
    # embedding of the dropped vertex group into the kept one: into o onto^-1
    fold = [0] * g.groups[drop].order
    for x in range(ge.order):
        fold[onto[x]] = into[x]
    edges = [f for f in g.edges if f != e]
    source = {f: (keep if g.source[f] == drop else g.source[f]) for f in edges}
    target = {f: (keep if g.target[f] == drop else g.target[f]) for f in edges}
    bd0 = {f: (tuple(fold[y] for y in g.bd0[f]) if g.source[f] == drop else g.bd0[f])
           for f in edges}
    bd1 = {f: (tuple(fold[y] for y in g.bd1[f]) if g.target[f] == drop else g.bd1[f])
           for f in edges}
    vertices = tuple(v for v in g.vertices if v != drop)
    groups = {c: grp for c, grp in g.groups.items() if c not in (drop, e)}
    tree = spanning_tree(vertices, edges, source, target, prefer=g.tree - {e})
    return GraphOfGroups(vertices, tuple(edges), source, target, groups, bd0, bd1, tree,
                         keep if g.base == drop else g.base, g.name)


def reduce(g: GraphOfGroups) -> GraphOfGroups:
    """Contract fictitious edges (lexicographically first each pass) until reduced."""
    ensure_valid(g)
    while True:
        fict = fictitious_edges(g)
        if not fict:
            return g
        g = contract_edge(g, fict[0])


def euler_characteristic(g: GraphOfGroups) -> Fraction:
    return (sum((Fraction(1, g.groups[v].order) for v in g.vertices), Fraction(0))
            - sum((Fraction(1, g.groups[e].order) for e in g.edges), Fraction(0)))


@dataclass(frozen=True)
class GoGMorphism:
    """A morphism of graphs of groups: a cell map plus a homomorphism per cell."""
    source: GraphOfGroups
    target: GraphOfGroups
    graph_map: Mapping[str, str]
    group_maps: Mapping[str, tuple[int, ...]]

    __hash__ = None  # type: ignore[assignment]

    def check(self) -> list[Violation]:
        s, t = self.source, self.target
        out = []
        for c in s.cells:
            m = self.graph_map.get(c)
            if m is None or m not in t.cells or s.is_vertex(c) != t.is_vertex(m):
                out.append(Violation("morphism", f"cell {c!r} maps to {m!r}", (c,)))
                continue
            gs, gt, f = s.groups[c], t.groups[m], self.group_maps[c]
            if any(f[gs.mult[a][b]] != gt.mult[f[a]][f[b]]
                   for a in range(gs.order) for b in range(gs.order)):
                out.append(Violation("morphism", f"map on {c!r} is not a homomorphism", (c,)))
        if out:
            return out
        for e in s.edges:
            m = self.graph_map[e]
            for side, end in ((0, s.source[e]), (1, s.target[e])):
                if self.graph_map[end] != (t.source[m] if side == 0 else t.target[m]):
                    out.append(Violation("morphism", f"d{side} does not commute at {e!r}", (e,)))
                    continue
                lhs = [self.group_maps[end][y] for y in s.boundary(e, side)]
                rhs = [t.boundary(m, side)[self.group_maps[e][x]]
                       for x in range(s.groups[e].order)]
                if lhs != rhs:
                    x = next(i for i in range(len(lhs)) if lhs[i] != rhs[i])
                    out.append(Violation("morphism", f"bd{side} does not commute at {e!r}, "
                                         f"element {x}", (e, side, x)))
        return out
