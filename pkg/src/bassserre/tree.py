"""The standard tree: cosets of vertex and edge groups in the fundamental group.

A tree vertex is a coset ``g G(v)`` and a tree edge a coset ``g G(e)``, where the
cell groups are embedded at the base through the spanning-tree paths (edge
groups through their source boundary map). Cosets are named by the least
normal form they contain under ``PathWord.sort_key``.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Union

from .errors import BudgetExceeded, FiniteGroupInput
from .subgroups import MembershipOracle, classify_subgroup
from .words import PathGroup, PathWord


@dataclass(frozen=True, order=True)
class TreeVertex:
    rep: PathWord
    cell: str


@dataclass(frozen=True, order=True)
class TreeEdge:
    rep: PathWord
    cell: str


TreeCell = Union[TreeVertex, TreeEdge]


def _key(x: TreeCell) -> tuple:
    return (x.rep.sort_key(), x.cell)


@dataclass
class TreePatch:
    """A finite connected piece of the tree.

    ``edges`` maps every edge to its (d0, d1) endpoints; ``frontier`` holds the
    vertices whose neighbourhoods were not expanded.
    """
    vertices: list[TreeVertex]
    edges: dict[TreeEdge, tuple[TreeVertex, TreeVertex]]
    frontier: set[TreeVertex] = field(default_factory=set)

    @property
    def length(self) -> int:
        return len(self.edges)

    def is_tree(self) -> bool:
        """Connected and acyclic, checked with union-find."""
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for a, b in self.edges.values():
            if a not in parent or b not in parent:
                return False
            ra, rb = find(a), find(b)
            if ra == rb:
                return False
            parent[ra] = rb
        return len({find(v) for v in self.vertices}) == 1 if self.vertices else True


class StandardTree:
    def __init__(self, P: PathGroup):
        self.P = P
        self.gog = P.gog
        self._neighbors: dict[TreeVertex, list] = {}
        self._cell_groups = {c: tuple(P.embed_cell(c, x) for x in range(self.gog.groups[c].order))
                             for c in self.gog.cells}
        self._letters = {(e, s): P.edge_element(e, s) for e in self.gog.edges for s in (1, -1)}

    def cell_group(self, cell: str) -> tuple[PathWord, ...]:
        """The cell group embedded at the base."""
        return self._cell_groups[cell]

    def stable_letter(self, e: str, sign: int = 1) -> PathWord:
        return self._letters[(e, sign)]

    def canonical(self, w: PathWord, cell: str) -> TreeCell:
        P = self.P
        best = min((P.reduce(P.multiply(w, s)) for s in self.cell_group(cell)),
                   key=PathWord.sort_key)
        return TreeVertex(best, cell) if self.gog.is_vertex(cell) else TreeEdge(best, cell)

    def base_vertex(self) -> TreeVertex:
        return TreeVertex(self.P.identity(), self.gog.base)

    def act(self, g: PathWord, x: TreeCell) -> TreeCell:
        return self.canonical(self.P.multiply(g, x.rep), x.cell)

    def endpoints(self, x: TreeEdge) -> tuple[TreeVertex, TreeVertex]:
        e = x.cell
        d0 = self.canonical(x.rep, self.gog.source[e])
        d1 = self.canonical(self.P.multiply(x.rep, self.stable_letter(e)), self.gog.target[e])
        return d0, d1  # type: ignore[return-value]

    def neighbors(self, x: TreeVertex) -> list[tuple[TreeEdge, TreeVertex]]:
        """One edge per incident edge end of Gamma and coset of its boundary image."""
        if x in self._neighbors:
            return self._neighbors[x]
        P, g, v = self.P, x.rep, x.cell
        out = []
        for e in self.gog.edges:
            for sign, at in ((1, self.gog.source[e]), (-1, self.gog.target[e])):
                if at != v:
                    continue
                reps = sorted({t for t, _ in P.end_data((e, sign)).split})
                for t in reps:
                    h = P.multiply(g, P.embed(v, t))
                    if sign == -1:
                        h = P.multiply(h, self.stable_letter(e, -1))
                    edge = self.canonical(h, e)
                    d0, d1 = self.endpoints(edge)  # type: ignore[arg-type]
                    out.append((edge, d1 if sign == 1 else d0))
        out.sort(key=lambda p: (_key(p[0]), _key(p[1])))
        self._neighbors[x] = out
        return out

    def index_degree(self, cell: str) -> int:
        """Sum over incident edge ends of [G(v) : bd G(e)]."""
        total = 0
        for e in self.gog.edges:
            for side, at in ((0, self.gog.source[e]), (1, self.gog.target[e])):
                if at == cell:
                    total += self.gog.groups[cell].order // self.gog.groups[e].order
        return total

    def ball(self, center: TreeVertex, radius: int) -> TreePatch:
        seen = {center: 0}
        order = [center]
        edges: dict[TreeEdge, tuple[TreeVertex, TreeVertex]] = {}
        i = 0
        while i < len(order):
            x = order[i]
            i += 1
            if seen[x] == radius:
                continue
            for edge, y in self.neighbors(x):
                if edge not in edges:
                    edges[edge] = self.endpoints(edge)
                if y not in seen:
                    seen[y] = seen[x] + 1
                    order.append(y)
        frontier = {v for v, d in seen.items() if d == radius}
        return TreePatch(order, edges, frontier)

    def geodesic(self, x: TreeVertex, y: TreeVertex, budget: int = 64) -> TreePatch:
        """The reduced path from ``x`` to ``y`` by bidirectional breadth-first search."""
        if x == y:
            return TreePatch([x], {})
        parents = [{x: None}, {y: None}]
        frontiers = [[x], [y]]
        radius = 0
        while radius < budget:
            side = 0 if len(frontiers[0]) <= len(frontiers[1]) else 1
            nxt = []
            for v in frontiers[side]:
                for edge, w in self.neighbors(v):
                    if w in parents[side]:
                        continue
                    parents[side][w] = (v, edge)
                    nxt.append(w)
                    if w in parents[1 - side]:
                        return self._join(parents, w)
            frontiers[side] = nxt
            radius += 1
        raise BudgetExceeded(f"no path within explored radius {radius}", state=radius)

    def _join(self, parents, meet: TreeVertex) -> TreePatch:
        """Path x ... meet ... y from the two parent maps."""
        seq, edges = [meet], []
        cur = meet
        while parents[0][cur] is not None:
            cur, e = parents[0][cur]
            seq.insert(0, cur)
            edges.insert(0, e)
        cur = meet
        while parents[1][cur] is not None:
            cur, e = parents[1][cur]
            seq.append(cur)
            edges.append(e)
        return TreePatch(seq, {e: self.endpoints(e) for e in edges})

    def stabilizer(self, x: TreeCell) -> list[PathWord]:
        P = self.P
        inv = P.invert(x.rep)
        out = {P.reduce(P.product([x.rep, s, inv])) for s in self.cell_group(x.cell)}
        return sorted(out, key=PathWord.sort_key)


# -- module-level convenience ----------------------------------------------------

def canonical_coset(P: PathGroup, w: PathWord, cell: str) -> TreeCell:
    return StandardTree(P).canonical(w, cell)


# -- minimal invariant subtree ---------------------------------------------------

@dataclass(frozen=True)
class OrbitGraph:
    """The quotient graph H \\ D of the minimal H-invariant subtree D."""
    vertices: tuple[TreeVertex, ...]
    edges: tuple[tuple[TreeEdge, int, int, int], ...]   # edge, d0 orbit, d1 orbit, |stabilizer in H|
    vertex_stabilizers: tuple[int, ...]
    segment_cells: int

    def summary(self) -> str:
        return f"{len(self.vertices)} vertices, {len(self.edges)} edges"


def minimal_invariant_subtree(P: PathGroup, generators: Sequence[PathWord],
                              max_order: int = 24, budget: int = 8,
                              geodesic_budget: int = 64) -> OrbitGraph:
    """Orbit graph of the minimal subtree of an infinite f.g. subgroup H.

    D is the H-translate of L, the union of the geodesics from the base vertex
    to its images under the generators, so H\\D is L modulo the H-action. Two
    cells of L lie in one orbit iff some ``r_y s r_x^-1`` (s in the cell group)
    belongs to H; membership is decided by the generator ball or refuted in a
    finite quotient.
    """
    spec = classify_subgroup(P, generators)
    if not spec.is_infinite:
        raise FiniteGroupInput("the subgroup is finite (or not known to be infinite); "
                               "its minimal subtree is not defined here")
    tree = StandardTree(P)
    oracle = MembershipOracle(P, spec, max_order=max_order, budget=budget)
    v0 = tree.base_vertex()
    vertices: dict[TreeVertex, None] = {v0: None}
    edges: dict[TreeEdge, tuple[TreeVertex, TreeVertex]] = {}
    for h in spec.generators:
        seg = tree.geodesic(v0, tree.act(h, v0), geodesic_budget)  # type: ignore[arg-type]
        for v in seg.vertices:
            vertices.setdefault(v, None)
        edges.update(seg.edges)

    def same_orbit(x: TreeCell, y: TreeCell) -> bool:
        if x.cell != y.cell:
            return False
        inv = P.invert(x.rep)
        return any(oracle.member(P.reduce(P.product([y.rep, s, inv])))
                   for s in tree.cell_group(x.cell))

    def orbits(cells: list) -> list[list]:
        classes: list[list] = []
        for c in sorted(cells, key=_key):
            for cl in classes:
                if same_orbit(cl[0], c):
                    cl.append(c)
                    break
            else:
                classes.append([c])
        return classes

    def stab_size(x: TreeCell) -> int:
        inv = P.invert(x.rep)
        return sum(1 for s in tree.cell_group(x.cell)
                   if oracle.member(P.reduce(P.product([x.rep, s, inv]))))

    vclasses = orbits(list(vertices))
    index = {v: i for i, cl in enumerate(vclasses) for v in cl}
    eclasses = orbits(list(edges))
    out_edges = []
    for cl in eclasses:
        e = cl[0]
        d0, d1 = edges[e]
        out_edges.append((e, index[d0], index[d1], stab_size(e)))
    return OrbitGraph(tuple(cl[0] for cl in vclasses), tuple(out_edges),
                      tuple(stab_size(cl[0]) for cl in vclasses),
                      len(vertices) + len(edges))
