"""Finite quotients of the fundamental group and the tower of quotient graphs of groups.

A quotient is a homomorphism ``psi`` from the path group onto a finite group
that kills the spanning-tree edges: one homomorphism per vertex group plus an
image for every edge letter, subject to ``psi(e) psi(bd1 x) psi(e)^-1 = psi(bd0 x)``.
Restricted to closed words at the base this is a homomorphism of the
fundamental group.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .catalog import catalog as default_catalog
from .errors import BudgetExceeded, MissingMorphism, NotVertexFaithful
from .finite_groups import FiniteGroup, group_from_table, homomorphisms
from .graph_of_groups import (
    GoGMorphism,
    GraphOfGroups,
    ensure_valid,
    euler_characteristic,
    is_reduced,
    make_graph_of_groups,
)
from .words import PathGroup, PathWord


@dataclass(frozen=True)
class FiniteQuotient:
    target: FiniteGroup
    vertex_maps: dict[str, tuple[int, ...]]
    edge_images: dict[str, int]
    vertex_faithful: bool
    surjective: bool
    kernel_rank: Optional[int] = None
    key: tuple = field(default=(), compare=False)

    __hash__ = None  # type: ignore[assignment]

    @property
    def order(self) -> int:
        return self.target.order

    def images(self, gog: GraphOfGroups) -> dict[str, int]:
        """Image of every presentation generator (``v.label`` and edge names)."""
        out = {}
        for v in gog.vertices:
            grp = gog.groups[v]
            for x in range(grp.order):
                if x != grp.identity:
                    out[f"{v}.{grp.label(x)}"] = self.vertex_maps[v][x]
        out.update(self.edge_images)
        return out

    def evaluate(self, gog: GraphOfGroups, w: PathWord) -> int:
        t = self.target
        acc = t.identity
        v = w.start
        for i, g in enumerate(w.groups):
            acc = t.mult[acc][self.vertex_maps[v][g]]
            if i < len(w.edges):
                e, s = w.edges[i]
                q = self.edge_images[e]
                acc = t.mult[acc][q if s == 1 else t.inv[q]]
                v = gog.target[e] if s == 1 else gog.source[e]
        return acc

    def describe(self, gog: GraphOfGroups) -> str:
        t = self.target
        parts = [f"{k}->{t.label(v)}" for k, v in self.generator_images(gog)]
        return f"{t.name or 'Q'}[{t.order}] " + ", ".join(parts)

    def generator_images(self, gog: GraphOfGroups) -> list[tuple[str, int]]:
        """Images of the vertex-group generating sets and the non-tree edge letters."""
        out = []
        for v in gog.vertices:
            grp = gog.groups[v]
            for x in grp.generating_set():
                out.append((f"{v}.{grp.label(x)}", self.vertex_maps[v][x]))
        for e in gog.edges:
            if e not in gog.tree:
                out.append((e, self.edge_images[e]))
        return out


def _generator_images(gog: GraphOfGroups, vmaps, emaps) -> list[int]:
    out = []
    for v in gog.vertices:
        for x in gog.groups[v].generating_set():
            out.append(vmaps[v][x])
    for e in gog.edges:
        if e not in gog.tree:
            out.append(emaps[e])
    return out


def kernel_key(target: FiniteGroup, gens: Sequence[int]) -> Optional[tuple]:
    """Labelled right Cayley graph of ``<gens>``; equal keys iff equal kernels.

    Returns None when the generators do not generate ``target``.
    """
    label = {target.identity: 0}
    order = [target.identity]
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        for s in gens:
            y = target.mult[x][s]
            if y not in label:
                label[y] = len(order)
                order.append(y)
    if len(order) != target.order:
        return None
    return (target.order,) + tuple(tuple(label[target.mult[x][s]] for x in order) for s in gens)


def _vertex_order(gog: GraphOfGroups) -> list[str]:
    seen = [gog.base]
    i = 0
    while i < len(seen):
        v = seen[i]
        i += 1
        for e in gog.edges:
            for a, b in ((gog.source[e], gog.target[e]), (gog.target[e], gog.source[e])):
                if a == v and b not in seen:
                    seen.append(b)
    return seen


def homs_into(gog: GraphOfGroups, target: FiniteGroup, max_homs: Optional[int] = None
              ) -> Iterator[tuple[dict, dict]]:
    """All (vertex maps, edge images) satisfying the edge relations, tree edges trivial."""
    order = _vertex_order(gog)
    vhoms = {v: list(homomorphisms(gog.groups[v], target)) for v in gog.vertices}
    placed_after: list[list[str]] = []
    done: set[str] = set()
    placed: set[str] = set()
    for v in order:
        done.add(v)
        now = [e for e in gog.edges
               if e not in placed and gog.source[e] in done and gog.target[e] in done]
        placed.update(now)
        placed_after.append(now)
    gens = {e: gog.groups[e].generating_set() for e in gog.edges}
    t = target
    count = [0]

    def edge_ok(e, vm, q) -> bool:
        f0, f1 = vm[gog.source[e]], vm[gog.target[e]]
        qi = t.inv[q]
        for x in gens[e]:
            lhs = t.mult[t.mult[q][f1[gog.bd1[e][x]]]][qi]
            if lhs != f0[gog.bd0[e][x]]:
                return False
        return True

    def assign_edges(es: list[str], vm, em) -> Iterator[dict]:
        if not es:
            yield em
            return
        e, rest = es[0], es[1:]
        choices = [t.identity] if e in gog.tree else range(t.order)
        for q in choices:
            if edge_ok(e, vm, q):
                em[e] = q
                yield from assign_edges(rest, vm, em)
                del em[e]

    def rec(i: int, vm: dict, em: dict) -> Iterator[tuple[dict, dict]]:
        if i == len(order):
            count[0] += 1
            if max_homs is not None and count[0] > max_homs:
                raise BudgetExceeded(f"more than {max_homs} homomorphisms into {t.name}",
                                     state=count[0])
            yield dict(vm), dict(em)
            return
        v = order[i]
        for f in vhoms[v]:
            vm[v] = f
            for em2 in assign_edges(placed_after[i], vm, em):
                yield from rec(i + 1, vm, em2)
            del vm[v]

    yield from rec(0, {}, {})


def _quotients_into(gog: GraphOfGroups, target: FiniteGroup, surjective_only: bool,
                    dedupe: bool, max_homs: Optional[int]) -> list[FiniteQuotient]:
    chi = euler_characteristic(gog)
    out, seen = [], set()
    for vm, em in homs_into(gog, target, max_homs):
        gens = _generator_images(gog, vm, em)
        key = kernel_key(target, gens)
        surj = key is not None
        if surjective_only and not surj:
            continue
        if dedupe and surj:
            if key in seen:
                continue
            seen.add(key)
        faithful = all(len(set(vm[v])) == gog.groups[v].order for v in gog.vertices)
        rank = None
        if faithful and surj:
            r = 1 - target.order * chi
            rank = int(r) if Fraction(r).denominator == 1 else None
        out.append(FiniteQuotient(target, vm, em, faithful, surj, rank, key or ()))
    return out


def _worker(args):
    return _quotients_into(*args)


def enumerate_quotients(gog: GraphOfGroups, catalog: Optional[Iterable[FiniteGroup]] = None,
                        max_order: int = 24, group_class: str = "all",
                        surjective_only: bool = True, dedupe: bool = True,
                        vertex_faithful_only: bool = False, max_homs: Optional[int] = None,
                        jobs: int = 1) -> list[FiniteQuotient]:
    """Quotients onto catalog groups, in catalog order.

    With ``dedupe`` two surjections with the same kernel (that is, differing by
    an automorphism of the target) are reported once.
    """
    ensure_valid(gog)
    groups = list(catalog) if catalog is not None else default_catalog(max_order, group_class)
    tasks = [(gog, q, surjective_only, dedupe, max_homs) for q in groups]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_worker, tasks))
    else:
        results = [_worker(t) for t in tasks]
    out = [q for r in results for q in r]
    if vertex_faithful_only:
        out = [q for q in out if q.vertex_faithful]
    return out


def relators_hold(gog: GraphOfGroups, q: FiniteQuotient) -> bool:
    """Independent re-check of every presentation relator."""
    from .words import to_presentation
    t = q.target
    img = q.images(gog)
    for rel in to_presentation(gog).relators:
        acc = t.identity
        for sym, k in rel:
            y = img[sym] if k == 1 else t.inv[img[sym]]
            acc = t.mult[acc][y]
        if acc != t.identity:
            return False
    return True


def kernel_rank(gog: GraphOfGroups, q: FiniteQuotient) -> int:
    """Rank of the (free) kernel of a vertex-faithful surjection: 1 - |Q| chi."""
    if not q.vertex_faithful:
        raise NotVertexFaithful("kernel is not free: some vertex group does not embed")
    if not q.surjective:
        raise NotVertexFaithful("quotient map is not surjective onto its target")
    r = 1 - q.order * euler_characteristic(gog)
    if r.denominator != 1:
        raise ValueError(f"non-integral rank {r}")
    return int(r)


# -- vectorised evaluation ----------------------------------------------------

class QuotientBank:
    """Many quotients of one graph of groups stacked into numpy tables."""

    def __init__(self, gog: GraphOfGroups, quotients: Sequence[FiniteQuotient]):
        self.gog = gog
        self.quotients = list(quotients)
        n = len(self.quotients)
        size = max((q.order for q in self.quotients), default=1)
        self.mult = np.zeros((n, size, size), dtype=np.int16)
        for i, q in enumerate(self.quotients):
            self.mult[i, :q.order, :q.order] = np.asarray(q.target.mult, dtype=np.int16)
        self.identity = np.array([q.target.identity for q in self.quotients], dtype=np.int16)
        self.vmaps = {v: np.array([q.vertex_maps[v] for q in self.quotients], dtype=np.int16)
                      .reshape(n, gog.groups[v].order) for v in gog.vertices}
        self.emaps = {}
        for e in gog.edges:
            fwd = [q.edge_images[e] for q in self.quotients]
            bwd = [q.target.inv[x] for q, x in zip(self.quotients, fwd)]
            self.emaps[(e, 1)] = np.array(fwd, dtype=np.int16)
            self.emaps[(e, -1)] = np.array(bwd, dtype=np.int16)
        self._rows = np.arange(n)

    def evaluate(self, w: PathWord) -> np.ndarray:
        acc = self.identity.copy()
        v = w.start
        rows = self._rows
        for i, g in enumerate(w.groups):
            acc = self.mult[rows, acc, self.vmaps[v][:, g]]
            if i < len(w.edges):
                end = w.edges[i]
                acc = self.mult[rows, acc, self.emaps[end]]
                v = self.gog.target[end[0]] if end[1] == 1 else self.gog.source[end[0]]
        return acc


# -- quotient graphs of groups ------------------------------------------------

@dataclass(frozen=True)
class QuotientGoG:
    base: GraphOfGroups
    quotient: FiniteQuotient
    class_of: dict[str, str]              # cell of the base graph -> class name
    classes: dict[str, tuple[str, ...]]   # class name -> member cells
    elements: dict[str, tuple[int, ...]]  # class name -> its group as target elements
    gog_U: GraphOfGroups
    projection: GoGMorphism

    __hash__ = None  # type: ignore[assignment]

    def index_in(self, cls: str, y: int) -> int:
        return self.elements[cls].index(y)

    def describe(self) -> str:
        vs = " ".join("{" + ",".join(self.classes[c]) + "}" for c in self.gog_U.vertices)
        es = " ".join("{" + ",".join(self.classes[c]) + "}" for c in self.gog_U.edges)
        return f"vertices {vs or '-'} edges {es or '-'}"


def _subgroup_as_group(target: FiniteGroup, elems: tuple[int, ...], name: str) -> FiniteGroup:
    pos = {y: i for i, y in enumerate(elems)}
    table = [[pos[target.mult[a][b]] for b in elems] for a in elems]
    labels = [target.label(y) for y in elems]
    if len(set(labels)) != len(labels):
        labels = None
    return group_from_table(table, labels, name=name)


def quotient_gog(gog: GraphOfGroups, q: FiniteQuotient) -> QuotientGoG:
    """The finite graph of groups induced by a quotient.

    Vertices are identified when their image subgroups coincide. Edges are
    identified when their endpoint classes, their image subgroups and the
    images of their stable letters all coincide.
    """
    t = q.target
    img: dict[str, tuple[int, ...]] = {}
    for v in gog.vertices:
        img[v] = tuple(sorted(set(q.vertex_maps[v])))
    for e in gog.edges:
        f0 = q.vertex_maps[gog.source[e]]
        img[e] = tuple(sorted({f0[y] for y in gog.bd0[e]}))

    class_of: dict[str, str] = {}
    classes: dict[str, list[str]] = {}
    vkey: dict[tuple, str] = {}
    for v in gog.vertices:
        name = vkey.setdefault(img[v], v)
        class_of[v] = name
        classes.setdefault(name, []).append(v)
    ekey: dict[tuple, str] = {}
    for e in gog.edges:
        k = (class_of[gog.source[e]], class_of[gog.target[e]], img[e], q.edge_images[e])
        name = ekey.setdefault(k, e)
        class_of[e] = name
        classes.setdefault(name, []).append(e)

    vnames = [c for c in classes if c in gog.vertices]
    enames = [c for c in classes if c in gog.edges]
    groups = {c: _subgroup_as_group(t, img[c], c) for c in vnames + enames}
    edges = {e: (class_of[gog.source[e]], class_of[gog.target[e]]) for e in enames}
    boundaries = {}
    for e in enames:
        s, d = edges[e]
        qe = q.edge_images[e]
        into0 = [img[s].index(y) for y in img[e]]
        into1 = [img[d].index(t.mult[t.mult[t.inv[qe]][y]][qe]) for y in img[e]]
        boundaries[e] = (into0, into1)
    prefer_tree = [e for e in enames if e in gog.tree]
    tree = _tree_from(vnames, edges, prefer_tree)
    gog_u = make_graph_of_groups(vnames, edges, groups, boundaries, base=class_of[gog.base],
                                 tree=tree, name=f"{gog.name}/{t.name}")
    group_maps = {}
    for c in gog.cells:
        cls = class_of[c]
        if c in gog.vertices:
            group_maps[c] = tuple(img[cls].index(q.vertex_maps[c][x])
                                  for x in range(gog.groups[c].order))
        else:
            f0 = q.vertex_maps[gog.source[c]]
            group_maps[c] = tuple(img[cls].index(f0[gog.bd0[c][x]])
                                  for x in range(gog.groups[c].order))
    proj = GoGMorphism(gog, gog_u, dict(class_of), group_maps)
    return QuotientGoG(gog, q, class_of, {k: tuple(v) for k, v in classes.items()},
                       {c: img[c] for c in vnames + enames}, gog_u, proj)


def _tree_from(vertices, edges, prefer) -> list[str]:
    from .graph_of_groups import spanning_tree
    src = {e: st[0] for e, st in edges.items()}
    tgt = {e: st[1] for e, st in edges.items()}
    return sorted(spanning_tree(vertices, list(edges), src, tgt, prefer))


def stage_reduced(stage: QuotientGoG) -> bool:
    return is_reduced(stage.gog_U)


# -- connecting morphisms and towers -------------------------------------------

@dataclass(frozen=True)
class TowerMorphism:
    finer: QuotientGoG
    coarser: QuotientGoG
    phi: tuple[int, ...]                     # target_V -> target_U
    alpha: GoGMorphism                       # gog_V -> gog_U
    beta_groups: dict[str, tuple[int, ...]]  # per vertex class of gog_V
    beta_edges: dict[str, str]

    __hash__ = None  # type: ignore[assignment]

    def beta(self, w: PathWord) -> PathWord:
        """Induced map on path words of the finer stage."""
        start = self.alpha.graph_map[w.start]
        vs = [w.start]
        g = self.finer.gog_U
        for e, s in w.edges:
            vs.append(g.target[e] if s == 1 else g.source[e])
        groups = tuple(self.beta_groups[v][x] for v, x in zip(vs, w.groups))
        edges = tuple((self.beta_edges[e], s) for e, s in w.edges)
        return PathWord(start, groups, edges)


def _generator_list(gog: GraphOfGroups, q: FiniteQuotient) -> list[int]:
    return _generator_images(gog, q.vertex_maps, q.edge_images)


def connecting(finer: QuotientGoG, coarser: QuotientGoG) -> Optional[TowerMorphism]:
    """The morphism finer -> coarser if ker(finer) <= ker(coarser), else None."""
    gog = finer.base
    qv, qu = finer.quotient, coarser.quotient
    if not qv.surjective or qu.order == 0 or qv.order % qu.order != 0:
        return None
    gv, gu = _generator_list(gog, qv), _generator_list(gog, qu)
    tv, tu = qv.target, qu.target
    phi: list[Optional[int]] = [None] * tv.order
    phi[tv.identity] = tu.identity
    queue = [tv.identity]
    i = 0
    while i < len(queue):
        x = queue[i]
        i += 1
        for sv, su in zip(gv, gu):
            y = tv.mult[x][sv]
            fy = tu.mult[phi[x]][su]
            if phi[y] is None:
                phi[y] = fy
                queue.append(y)
            elif phi[y] != fy:
                return None
    ph = tuple(phi)  # type: ignore[arg-type]
    graph_map: dict[str, str] = {}
    for cls, members in finer.classes.items():
        images = {coarser.class_of[m] for m in members}
        if len(images) != 1:
            return None
        graph_map[cls] = images.pop()
    group_maps = {}
    for cls in finer.classes:
        target_cls = graph_map[cls]
        group_maps[cls] = tuple(coarser.index_in(target_cls, ph[y])
                                for y in finer.elements[cls])
    alpha = GoGMorphism(finer.gog_U, coarser.gog_U, graph_map, group_maps)
    beta_groups = {v: group_maps[v] for v in finer.gog_U.vertices}
    beta_edges = {e: graph_map[e] for e in finer.gog_U.edges}
    return TowerMorphism(finer, coarser, ph, alpha, beta_groups, beta_edges)


@dataclass
class Tower:
    base: GraphOfGroups
    stages: list[QuotientGoG]
    _cache: dict = field(default_factory=dict, repr=False)

    def morphism(self, i: int, j: int) -> Optional[TowerMorphism]:
        if (i, j) not in self._cache:
            self._cache[(i, j)] = connecting(self.stages[i], self.stages[j])
        return self._cache[(i, j)]

    def require(self, i: int, j: int) -> TowerMorphism:
        m = self.morphism(i, j)
        if m is None:
            raise MissingMorphism(f"no connecting morphism from stage {i} to stage {j}")
        return m

    def squares(self) -> Iterator[tuple[int, int, int, int]]:
        """All (Y, U, Z, W) with the four morphisms Y->U->W and Y->Z->W present."""
        n = len(self.stages)
        for y in range(n):
            below = [j for j in range(n) if self.morphism(y, j) is not None]
            for u in below:
                for z in below:
                    if z < u:
                        continue
                    for w in below:
                        if self.morphism(u, w) is not None and self.morphism(z, w) is not None:
                            yield (y, u, z, w)

    def format(self) -> str:
        lines = [f"stages: {len(self.stages)}"]
        for i, st in enumerate(self.stages):
            q = st.quotient
            lines.append(f"stage {i}: {q.describe(self.base)}; "
                         f"faithful={'yes' if q.vertex_faithful else 'no'}; {st.describe()}")
        for i in range(len(self.stages)):
            for j in range(len(self.stages)):
                if i != j and self.morphism(i, j) is not None:
                    m = self.morphism(i, j)
                    cells = ", ".join(f"{a}->{b}" for a, b in sorted(m.alpha.graph_map.items()))
                    lines.append(f"morphism {i}->{j}: {cells}")
        return "\n".join(lines)


def stage_order_key(q: FiniteQuotient) -> tuple:
    return (not q.vertex_faithful, q.order)


def build_tower(gog: GraphOfGroups, max_order: int = 24, group_class: str = "all",
                catalog: Optional[Iterable[FiniteGroup]] = None,
                vertex_faithful_only: bool = False, jobs: int = 1) -> Tower:
    """Stages ordered vertex-faithful first, then by target order (stable in catalog order)."""
    qs = enumerate_quotients(gog, catalog, max_order=max_order, group_class=group_class,
                             vertex_faithful_only=vertex_faithful_only, jobs=jobs)
    qs.sort(key=stage_order_key)
    return Tower(gog, [quotient_gog(gog, q) for q in qs])


@dataclass(frozen=True)
class SquareCheck:
    ok: bool
    witness: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_square(tower: Tower, y: int, u: int, z: int, w: int) -> SquareCheck:
    """Compare alpha_UW . alpha_YU with alpha_ZW . alpha_YZ (and the betas) on
    every cell, every cell-group element and every fundamental-group generator."""
    yu, uw = tower.require(y, u), tower.require(u, w)
    yz, zw = tower.require(y, z), tower.require(z, w)
    src = tower.stages[y].gog_U
    for c in src.cells:
        a = uw.alpha.graph_map[yu.alpha.graph_map[c]]
        b = zw.alpha.graph_map[yz.alpha.graph_map[c]]
        if a != b:
            return SquareCheck(False, f"cell {c}: {a} vs {b}")
        for x in range(src.groups[c].order):
            fa = uw.alpha.group_maps[yu.alpha.graph_map[c]][yu.alpha.group_maps[c][x]]
            fb = zw.alpha.group_maps[yz.alpha.graph_map[c]][yz.alpha.group_maps[c][x]]
            if fa != fb:
                return SquareCheck(False, f"cell {c} element {src.groups[c].label(x)}")
    pw = PathGroup(tower.stages[w].gog_U)
    for name, gen in PathGroup(src).generators():
        a = pw.reduce(uw.beta(yu.beta(gen)))
        b = pw.reduce(zw.beta(yz.beta(gen)))
        if a != b:
            return SquareCheck(False, f"generator {name}")
    return SquareCheck(True)


def separate_cells(tower: Tower, m: str, m2: str) -> Optional[int]:
    """Index of the first stage whose classes distinguish two distinct cells."""
    if m == m2:
        raise ValueError("cells must be distinct")
    for i, st in enumerate(tower.stages):
        if st.class_of[m] != st.class_of[m2]:
            return i
    return None


def trivial_quotient(gog: GraphOfGroups) -> FiniteQuotient:
    t = group_from_table([[0]], ["1"], name="C1")
    vm = {v: (0,) * gog.groups[v].order for v in gog.vertices}
    em = {e: 0 for e in gog.edges}
    faithful = all(gog.groups[v].order == 1 for v in gog.vertices)
    rank = kernel_rank_value(gog, 1) if faithful else None
    return FiniteQuotient(t, vm, em, faithful, True, rank, kernel_key(t, []) or ())


def kernel_rank_value(gog: GraphOfGroups, index: int) -> Optional[int]:
    r = 1 - index * euler_characteristic(gog)
    return int(r) if r.denominator == 1 else None


def quotient_by_images(gog: GraphOfGroups, target: FiniteGroup,
                       vertex_images: dict[str, Sequence[int]],
                       edge_images: Optional[dict[str, int]] = None) -> FiniteQuotient:
    """Build a quotient from images of each vertex group's generating set."""
    from .finite_groups import extend_to_hom
    vm = {}
    for v in gog.vertices:
        grp = gog.groups[v]
        f = extend_to_hom(grp, target, grp.generating_set(), list(vertex_images.get(v, ())))
        if f is None:
            raise ValueError(f"images for {v!r} do not define a homomorphism")
        vm[v] = f
    em = {e: target.identity for e in gog.edges}
    em.update(edge_images or {})
    t = target
    for e in gog.edges:
        if e in gog.tree and em[e] != t.identity:
            raise ValueError(f"tree edge {e!r} must map to the identity")
        f0, f1, qe = vm[gog.source[e]], vm[gog.target[e]], em[e]
        for x in range(gog.groups[e].order):
            if t.mult[t.mult[qe][f1[gog.bd1[e][x]]]][t.inv[qe]] != f0[gog.bd0[e][x]]:
                raise ValueError(f"images violate the relation of edge {e!r}")
    gens = _generator_images(gog, vm, em)
    key = kernel_key(target, gens)
    faithful = all(len(set(vm[v])) == gog.groups[v].order for v in gog.vertices)
    rank = kernel_rank_value(gog, target.order) if faithful and key else None
    return FiniteQuotient(target, vm, em, faithful, key is not None, rank, key or ())


__all__ = [
    "FiniteQuotient", "QuotientBank", "QuotientGoG", "Tower", "TowerMorphism", "SquareCheck",
    "build_tower", "check_square", "connecting", "enumerate_quotients", "homs_into",
    "kernel_key", "kernel_rank", "quotient_gog", "relators_hold", "separate_cells",
    "stage_reduced", "trivial_quotient", "quotient_by_images"
]
