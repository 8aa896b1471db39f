"""Path words in F(G, Gamma) and normal forms for the fundamental group.

A path word ``g0 (e1, s1) g1 ... (en, sn) gn`` walks the graph from ``start``;
``s = +1`` traverses an edge from its source to its target and ``s = -1``
goes backwards. ``gi`` is an element of the group at the i-th vertex of the
walk. Elements of the fundamental group at the base vertex are closed words
at the base.

Normal forms: pinches ``(e, s) h (e, -s)`` with ``h`` in the boundary image
are cancelled, then every syllable except the last is replaced by its
left-coset transversal representative, pushing the remainder through the
following edge. Transversals are fixed once per edge end: the identity for
the image subgroup itself, the lowest element index for every other coset.
"""

from __future__ import annotations

import math
import random
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass
from typing import Optional, Union

from .graph_of_groups import GraphOfGroups, ensure_valid

INFINITE = math.inf

EdgeEnd = tuple[str, int]


class EndpointMismatch(ValueError):
    pass


class WordSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class PathWord:
    start: str
    groups: tuple[int, ...]
    edges: tuple[EdgeEnd, ...] = ()

    @property
    def length(self) -> int:
        return len(self.edges)

    def sort_key(self) -> tuple:
        """(edge length, syllables) ordering used for canonical choices."""
        syll: list = [self.groups[0]]
        for (e, s), g in zip(self.edges, self.groups[1:]):
            syll += [(e, -s), g]
        return (len(self.edges), tuple(syll))


# Normal forms are PathWords produced by ``PathGroup.reduce``.
NormalForm = PathWord


@dataclass(frozen=True)
class _End:
    src: str              # vertex the edge end leaves from
    dst: str              # vertex it arrives at
    src_map: tuple[int, ...]  # boundary map into the source-side vertex group
    dst_map: tuple[int, ...]
    preimage: dict[int, int]  # image element at the source side -> edge element
    split: tuple[tuple[int, int], ...]  # g -> (transversal rep t, x) with g = t * src_map[x]


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[tuple[tuple[str, int], ...], ...]

    def format(self) -> str:
        def word(r):
            return " ".join(s if k == 1 else f"{s}^{k}" for s, k in r) or "1"
        return "< " + ", ".join(self.generators) + " | " + ", ".join(word(r) for r in self.relators) + " >"


class PathGroup:
    """Arithmetic in the path group of a graph of groups.

    All operations are pure; the instance only caches per-edge-end data.
    """

    def __init__(self, gog: GraphOfGroups):
        ensure_valid(gog)
        self.gog = gog
        self.base = gog.base
        self._ends: dict[EdgeEnd, _End] = {}
        for e in gog.edges:
            for s in (1, -1):
                src = gog.source[e] if s == 1 else gog.target[e]
                dst = gog.target[e] if s == 1 else gog.source[e]
                src_map = gog.bd0[e] if s == 1 else gog.bd1[e]
                dst_map = gog.bd1[e] if s == 1 else gog.bd0[e]
                self._ends[(e, s)] = self._make_end(src, dst, src_map, dst_map)
        self._tree_paths = gog.tree_paths()

    def _make_end(self, src: str, dst: str, src_map, dst_map) -> _End:
        g = self.gog.groups[src]
        image = sorted(set(src_map))
        preimage = {y: x for x, y in enumerate(src_map)}
        split: list[tuple[int, int]] = []
        for a in range(g.order):
            coset = [g.mult[a][h] for h in image]
            t = g.identity if g.identity in coset else min(coset)
            split.append((t, preimage[g.mult[g.inv[t]][a]]))
        return _End(src, dst, tuple(src_map), tuple(dst_map), preimage, tuple(split))

    # -- basic words ---------------------------------------------------------

    def end_data(self, end: EdgeEnd) -> _End:
        return self._ends[end]

    def identity(self, vertex: Optional[str] = None) -> PathWord:
        v = vertex or self.base
        return PathWord(v, (self.gog.groups[v].identity,))

    def letter(self, vertex: str, element: int) -> PathWord:
        return PathWord(vertex, (element,))

    def vertices_of(self, w: PathWord) -> list[str]:
        vs = [w.start]
        for end in w.edges:
            vs.append(self._ends[end].dst)
        return vs

    def end_vertex(self, w: PathWord) -> str:
        return self._ends[w.edges[-1]].dst if w.edges else w.start

    def is_closed(self, w: PathWord, at: Optional[str] = None) -> bool:
        v = at or self.base
        return w.start == v and self.end_vertex(w) == v

    def check(self, w: PathWord) -> None:
        """Raise TypeError unless ``w`` is a well-typed path word."""
        if not isinstance(w, PathWord):
            raise TypeError(f"not a PathWord: {w!r}")
        if w.start not in self.gog.vertices:
            raise TypeError(f"unknown start vertex {w.start!r}")
        if len(w.groups) != len(w.edges) + 1:
            raise TypeError("syllable count does not alternate")
        v = w.start
        for i, end in enumerate(w.edges):
            if end not in self._ends:
                raise TypeError(f"unknown edge end {end!r}")
            if not 0 <= w.groups[i] < self.gog.groups[v].order:
                raise TypeError(f"syllable {i} not in the group at {v!r}")
            if self._ends[end].src != v:
                raise TypeError(f"edge {end[0]!r} does not leave {v!r}")
            v = self._ends[end].dst
        if not 0 <= w.groups[-1] < self.gog.groups[v].order:
            raise TypeError(f"last syllable not in the group at {v!r}")

    def multiply(self, a: PathWord, b: PathWord) -> PathWord:
        v = self.end_vertex(a)
        if v != b.start:
            raise EndpointMismatch(f"word ends at {v!r} but next starts at {b.start!r}")
        mid = self.gog.groups[v].mult[a.groups[-1]][b.groups[0]]
        return PathWord(a.start, a.groups[:-1] + (mid,) + b.groups[1:], a.edges + b.edges)

    def product(self, words: Iterable[PathWord], start: Optional[str] = None) -> PathWord:
        acc = None
        for w in words:
            acc = w if acc is None else self.multiply(acc, w)
        return acc if acc is not None else self.identity(start)

    def invert(self, a: PathWord) -> PathWord:
        vs = self.vertices_of(a)
        groups = tuple(self.gog.groups[v].inv[g] for v, g in zip(reversed(vs), reversed(a.groups)))
        edges = tuple((e, -s) for e, s in reversed(a.edges))
        return PathWord(vs[-1], groups, edges)

    def power(self, a: PathWord, n: int) -> PathWord:
        if n < 0:
            a, n = self.invert(a), -n
        return self.reduce(self.product([a] * n, start=a.start))

    def conjugate(self, g: PathWord, x: PathWord) -> PathWord:
        """``g x g^-1`` in normal form."""
        return self.reduce(self.product([g, x, self.invert(g)]))

    # -- normal forms --------------------------------------------------------

    def reduce(self, w: PathWord) -> PathWord:
        """Britton-reduced normal form with transversal syllables."""
        self.check(w)
        groups = self.gog.groups
        gs = [w.groups[0]]
        es: list[EdgeEnd] = []
        vs = [w.start]
        for end, g in zip(w.edges, w.groups[1:]):
            if es and es[-1] == (end[0], -end[1]):
                x = self._ends[end].preimage.get(gs[-1])
                if x is not None:
                    prev = self._ends[es[-1]]
                    es.pop()
                    gs.pop()
                    vs.pop()
                    grp = groups[vs[-1]]
                    gs[-1] = grp.mult[grp.mult[gs[-1]][prev.src_map[x]]][g]
                    continue
            es.append(end)
            gs.append(g)
            vs.append(self._ends[end].dst)
        for i, end in enumerate(es):
            data = self._ends[end]
            t, x = data.split[gs[i]]
            gs[i] = t
            grp = groups[data.dst]
            gs[i + 1] = grp.mult[data.dst_map[x]][gs[i + 1]]
        return PathWord(w.start, tuple(gs), tuple(es))

    britton_reduce = reduce

    def equal(self, a: PathWord, b: PathWord) -> bool:
        if a.start != b.start or self.end_vertex(a) != self.end_vertex(b):
            raise EndpointMismatch("words are not co-terminal")
        return self.reduce(a) == self.reduce(b)

    def is_identity(self, w: PathWord) -> bool:
        r = self.reduce(w)
        return not r.edges and r.groups[0] == self.gog.groups[r.start].identity

    def cyclic_reduce(self, w: PathWord) -> tuple[PathWord, PathWord]:
        """Return ``(c, u)`` with ``u = c^-1 w c`` cyclically reduced (closed at some vertex)."""
        if w.start != self.end_vertex(w):
            raise EndpointMismatch("cyclic reduction needs a closed word")
        conj = self.identity(w.start)
        w = self.reduce(w)
        while len(w.edges) >= 2:
            first, last = w.edges[0], w.edges[-1]
            if first != (last[0], -last[1]):
                break
            grp = self.gog.groups[w.start]
            seam = grp.mult[w.groups[-1]][w.groups[0]]
            if seam not in self._ends[first].preimage:
                break
            c = PathWord(w.start, (w.groups[0], self.gog.groups[self._ends[first].dst].identity),
                         (first,))
            conj = self.multiply(conj, c)
            w = self.reduce(self.product([self.invert(c), w, c]))
        return self.reduce(conj), w

    def order_of(self, w: PathWord) -> Union[int, float]:
        """Exact order of a closed word, or ``INFINITE`` for hyperbolic elements."""
        _, u = self.cyclic_reduce(w)
        if u.edges:
            return INFINITE
        grp = self.gog.groups[u.start]
        return grp.element_order(u.groups[0])

    # -- embeddings at the base ----------------------------------------------

    def tree_path(self, vertex: str) -> PathWord:
        ends = self._tree_paths[vertex]
        ids = tuple(self.gog.groups[v].identity
                    for v in [self.base] + [self._ends[x].dst for x in ends])
        return PathWord(self.base, ids, tuple(ends))

    def embed(self, vertex: str, element: int) -> PathWord:
        """The vertex-group element as a closed word at the base (conjugated along the tree)."""
        p = self.tree_path(vertex)
        return self.reduce(self.product([p, self.letter(vertex, element), self.invert(p)]))

    def embed_cell(self, cell: str, element: int) -> PathWord:
        """Edge-group elements embed through the source boundary map."""
        if self.gog.is_vertex(cell):
            return self.embed(cell, element)
        return self.embed(self.gog.source[cell], self.gog.bd0[cell][element])

    def edge_element(self, e: str, sign: int = 1) -> PathWord:
        """Stable letter ``t_e``: the loop base -> d0(e) -> d1(e) -> base along the tree."""
        src, dst = self.gog.source[e], self.gog.target[e]
        if sign == -1:
            src, dst = dst, src
        p, q = self.tree_path(src), self.tree_path(dst)
        mid = PathWord(src, (self.gog.groups[src].identity, self.gog.groups[dst].identity),
                       ((e, sign),))
        return self.reduce(self.product([p, mid, self.invert(q)]))

    def generators(self) -> list[tuple[str, PathWord]]:
        """Named generators of the fundamental group at the base.

        A generating set of every vertex group, then every non-tree edge letter.
        """
        out = []
        for v in self.gog.vertices:
            grp = self.gog.groups[v]
            for x in grp.generating_set():
                out.append((f"{v}.{grp.label(x)}", self.embed(v, x)))
        for e in self.gog.edges:
            if e not in self.gog.tree:
                out.append((e, self.edge_element(e)))
        return out

    # -- projections and lengths ---------------------------------------------

    def graph_projection(self, w: PathWord) -> tuple[EdgeEnd, ...]:
        """Image in the free group on the non-tree edges (tree edges and groups deleted)."""
        out: list[EdgeEnd] = []
        for e, s in w.edges:
            if e in self.gog.tree:
                continue
            if out and out[-1] == (e, -s):
                out.pop()
            else:
                out.append((e, s))
        return tuple(out)

    def syllable_length(self, w: PathWord) -> int:
        """Nontrivial vertex syllables plus non-tree edge letters of the normal form."""
        r = self.reduce(w)
        vs = self.vertices_of(r)
        n = sum(1 for v, g in zip(vs, r.groups) if g != self.gog.groups[v].identity)
        return n + sum(1 for e, _ in r.edges if e not in self.gog.tree)

    # -- text ----------------------------------------------------------------

    def format(self, w: PathWord) -> str:
        vs = self.vertices_of(w)
        out = []
        for i, g in enumerate(w.groups):
            grp = self.gog.groups[vs[i]]
            if g != grp.identity:
                out.append(f"{vs[i]}.{grp.label(g)}")
            if i < len(w.edges):
                e, s = w.edges[i]
                out.append(e if s == 1 else f"{e}^-1")
        return " ".join(out) or "1"

    def parse(self, text: str) -> PathWord:
        """Parse a word into a closed normal form at the base.

        Tokens are ``vertex.label`` (optionally ``^k``), edge names (optionally
        ``^k``) and ``1``. Each token is read as an element of the fundamental
        group at the base: vertex elements are conjugated along the spanning
        tree and an edge ``e`` means its stable letter (trivial for tree edges).
        For a word that already is a closed path at the base this gives the
        element the path itself represents.
        """
        parts: list[PathWord] = []
        for tok in text.replace(",", " ").split():
            if tok == "1":
                continue
            body, _, exp = tok.partition("^")
            try:
                k = int(exp) if exp else 1
            except ValueError:
                raise WordSyntaxError(f"bad exponent in {tok!r}") from None
            if "." in body:
                v, _, label = body.partition(".")
                if v not in self.gog.vertices:
                    raise WordSyntaxError(f"unknown vertex {v!r} in {tok!r}")
                try:
                    x = self.gog.groups[v].index_of(label)
                except KeyError:
                    raise WordSyntaxError(f"unknown element {label!r} of {v!r}") from None
                parts.append(self.power(self.embed(v, x), k))
            elif body in self.gog.edges:
                parts.append(self.power(self.edge_element(body), k))
            else:
                raise WordSyntaxError(f"unknown token {tok!r}")
        return self.reduce(self.product(parts, start=self.base))

    def parse_list(self, text: str) -> list[PathWord]:
        """Comma- or semicolon-separated words."""
        return [self.parse(chunk) for chunk in text.replace(";", ",").split(",") if chunk.strip()]

    # -- enumeration ---------------------------------------------------------

    def normal_forms(self, length: int, start: Optional[str] = None,
                     end: Optional[str] = None) -> Iterator[PathWord]:
        """All normal forms with exactly ``length`` edges from ``start`` (default base),
        in lexicographic syllable order; restricted to those ending at ``end`` if given."""
        start = start or self.base
        groups = self.gog.groups
        outgoing: dict[str, list[EdgeEnd]] = {v: [] for v in self.gog.vertices}
        for key in sorted(self._ends, key=lambda k: (k[0], -k[1])):
            outgoing[self._ends[key].src].append(key)
        dist = self._distances(end) if end is not None else None

        def reps(end_key: EdgeEnd) -> list[int]:
            return sorted({t for t, _ in self._ends[end_key].split})

        def rec(v: str, remaining: int, gs: list[int], es: list[EdgeEnd]) -> Iterator[PathWord]:
            if remaining == 0:
                if end is None or v == end:
                    for g in range(groups[v].order):
                        yield PathWord(start, tuple(gs + [g]), tuple(es))
                return
            for key in outgoing[v]:
                nxt = self._ends[key].dst
                if dist is not None and dist.get(nxt, math.inf) > remaining - 1:
                    continue
                for t in reps(key):
                    if es and es[-1] == (key[0], -key[1]) and t == groups[v].identity:
                        continue
                    yield from rec(nxt, remaining - 1, gs + [t], es + [key])

        yield from rec(start, length, [], [])

    def _distances(self, target: str) -> dict[str, int]:
        dist = {target: 0}
        frontier = [target]
        while frontier:
            nxt = []
            for v in frontier:
                for d in self._ends.values():
                    if d.dst == v and d.src not in dist:
                        dist[d.src] = dist[v] + 1
                        nxt.append(d.src)
            frontier = nxt
        return dist

    def elements_by_length(self, max_length: int) -> Iterator[PathWord]:
        """Closed normal forms at the base, by edge length then lexicographically."""
        for n in range(max_length + 1):
            yield from self.normal_forms(n, end=self.base)

    def random_word(self, rng: random.Random, max_edges: int) -> PathWord:
        """Random closed word at the base with at most ``max_edges`` edges (not reduced)."""
        dist = self._distances(self.base)
        outgoing: dict[str, list[EdgeEnd]] = {v: [] for v in self.gog.vertices}
        for key in sorted(self._ends, key=lambda k: (k[0], -k[1])):
            outgoing[self._ends[key].src].append(key)
        v = self.base
        gs = [rng.randrange(self.gog.groups[v].order)]
        es: list[EdgeEnd] = []
        budget = rng.randint(0, max_edges)
        while True:
            left = budget - len(es)
            options = [k for k in outgoing[v] if dist[self._ends[k].dst] <= left - 1]
            if not options or (v == self.base and rng.random() < 0.15):
                if v == self.base:
                    break
            if not options:
                break
            key = rng.choice(options)
            es.append(key)
            v = self._ends[key].dst
            gs.append(rng.randrange(self.gog.groups[v].order))
        return PathWord(self.base, tuple(gs), tuple(es))


def to_presentation(gog: GraphOfGroups) -> Presentation:
    """Presentation on all non-identity vertex elements and all edge letters."""
    ensure_valid(gog)
    gens: list[str] = []
    rels: list[tuple[tuple[str, int], ...]] = []

    def name(v: str, x: int) -> str:
        return f"{v}.{gog.groups[v].label(x)}"

    for v in gog.vertices:
        grp = gog.groups[v]
        nontriv = [x for x in range(grp.order) if x != grp.identity]
        gens += [name(v, x) for x in nontriv]
        for a in nontriv:
            for b in nontriv:
                ab = grp.mult[a][b]
                rel = [(name(v, a), 1), (name(v, b), 1)]
                if ab != grp.identity:
                    rel.append((name(v, ab), -1))
                rels.append(tuple(rel))
    gens += list(gog.edges)
    for e in gog.edges:
        if e in gog.tree:
            rels.append(((e, 1),))
        ge = gog.groups[e]
        src, dst = gog.source[e], gog.target[e]
        for x in ge.generating_set():
            rel = [(e, -1)]
            if gog.bd0[e][x] != gog.groups[src].identity:
                rel.append((name(src, gog.bd0[e][x]), 1))
            rel.append((e, 1))
            if gog.bd1[e][x] != gog.groups[dst].identity:
                rel.append((name(dst, gog.groups[dst].inv[gog.bd1[e][x]]), 1))
            rels.append(tuple(rel))
    return Presentation(tuple(gens), tuple(rels))


def format_free_word(word: Sequence[EdgeEnd]) -> str:
    return " ".join(e if s == 1 else f"{e}^-1" for e, s in word) or "1"
