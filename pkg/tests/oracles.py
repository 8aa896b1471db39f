"""Reference implementations used only by the tests.

They share no code with the package beyond the data model, so agreement with
the package is evidence rather than tautology.
"""

from __future__ import annotations

import itertools
from collections import deque

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form

from bassserre.graph_of_groups import GraphOfGroups
from bassserre.words import PathWord


# -- word problem: rewriting closure -----------------------------------------------

def _ends(g: GraphOfGroups):
    """(e, s) -> (src vertex, dst vertex, map into src, map into dst)."""
    out = {}
    for e in g.edges:
        out[(e, 1)] = (g.source[e], g.target[e], g.bd0[e], g.bd1[e])
        out[(e, -1)] = (g.target[e], g.source[e], g.bd1[e], g.bd0[e])
    return out


def _invert(g: GraphOfGroups, w: PathWord) -> PathWord:
    ends = _ends(g)
    vs = [w.start]
    for end in w.edges:
        vs.append(ends[end][1])
    groups = tuple(g.groups[v].inv[x] for v, x in zip(reversed(vs), reversed(w.groups)))
    edges = tuple((e, -s) for e, s in reversed(w.edges))
    return PathWord(vs[-1], groups, edges)


def _concat(g: GraphOfGroups, a: PathWord, b: PathWord) -> PathWord:
    ends = _ends(g)
    v = ends[a.edges[-1]][1] if a.edges else a.start
    assert v == b.start
    mid = g.groups[v].mult[a.groups[-1]][b.groups[0]]
    return PathWord(a.start, a.groups[:-1] + (mid,) + b.groups[1:], a.edges + b.edges)


def rewrite_is_identity(g: GraphOfGroups, w: PathWord, limit: int = 200_000) -> bool:
    """Explore every order of pinch cancellations ``(e,s) h (e,-s) -> x``.

    A closed word is trivial iff some fully cancelled (edge-free) descendant is
    the identity of its vertex group; words that keep an edge after all
    cancellations are reduced and hence nontrivial.
    """
    ends = _ends(g)
    seen = {w}
    stack = [w]
    while stack:
        cur = stack.pop()
        if not cur.edges:
            if cur.groups[0] == g.groups[cur.start].identity:
                return True
            continue
        vs = [cur.start]
        for end in cur.edges:
            vs.append(ends[end][1])
        for i in range(len(cur.edges) - 1):
            (e, s), nxt = cur.edges[i], cur.edges[i + 1]
            if nxt != (e, -s):
                continue
            src, dst, into_src, into_dst = ends[(e, s)]
            h = cur.groups[i + 1]
            if h not in into_dst:
                continue
            x = into_dst.index(h)
            grp = g.groups[vs[i]]
            merged = grp.mult[grp.mult[cur.groups[i]][into_src[x]]][cur.groups[i + 2]]
            new = PathWord(cur.start, cur.groups[:i] + (merged,) + cur.groups[i + 3:],
                           cur.edges[:i] + cur.edges[i + 2:])
            if new not in seen:
                seen.add(new)
                stack.append(new)
                if len(seen) > limit:
                    raise RuntimeError("rewriting oracle limit reached")
    return False


def rewrite_equal(g: GraphOfGroups, a: PathWord, b: PathWord) -> bool:
    return rewrite_is_identity(g, _concat(g, a, _invert(g, b)))


# -- presentations and homomorphisms ----------------------------------------------

def presentation(g: GraphOfGroups):
    """Generators (vertex, element) for non-identity elements plus ('edge', e);
    relators as lists of (generator, +-1). Built directly from the tables."""
    gens = []
    rels = []
    for v in g.vertices:
        grp = g.groups[v]
        gens += [(v, x) for x in range(grp.order) if x != grp.identity]
        for a in range(grp.order):
            for b in range(grp.order):
                if grp.identity in (a, b):
                    continue
                c = grp.mult[a][b]
                rel = [((v, a), 1), ((v, b), 1)]
                if c != grp.identity:
                    rel.append(((v, c), -1))
                rels.append(rel)
    gens += [("edge", e) for e in g.edges]
    for e in g.edges:
        if e in g.tree:
            rels.append([(("edge", e), 1)])
        ge = g.groups[e]
        s, t = g.source[e], g.target[e]
        for x in range(ge.order):
            if x == ge.identity:
                continue
            rel = [(("edge", e), -1)]
            if g.bd0[e][x] != g.groups[s].identity:
                rel.append(((s, g.bd0[e][x]), 1))
            rel.append((("edge", e), 1))
            if g.bd1[e][x] != g.groups[t].identity:
                rel.append(((t, g.bd1[e][x]), -1))
            rels.append(rel)
    return gens, rels


def count_homs(g: GraphOfGroups, target) -> int:
    """Brute force over images of a small generating set, checking every relator."""
    gens, rels = presentation(g)
    # Images of vertex elements are determined by images of all of them; brute force
    # over a generating subset and extend by the multiplication relators.
    basis = []
    for v in g.vertices:
        grp = g.groups[v]
        basis += [(v, x) for x in grp.generating_set()]
    basis += [("edge", e) for e in g.edges]
    count = 0
    for imgs in itertools.product(range(target.order), repeat=len(basis)):
        img = dict(zip(basis, imgs))
        ok = True
        for v in g.vertices:
            grp = g.groups[v]
            gset = grp.generating_set()
            val = {grp.identity: target.identity}
            queue = deque([grp.identity])
            while queue and ok:
                a = queue.popleft()
                for s in gset:
                    b = grp.mult[a][s]
                    y = target.mult[val[a]][img[(v, s)]]
                    if b not in val:
                        val[b] = y
                        queue.append(b)
                    elif val[b] != y:
                        ok = False
                        break
            if not ok:
                break
            for x, y in val.items():
                if x != grp.identity:
                    img[(v, x)] = y
        if not ok:
            continue
        if all(_eval(target, img, r) == target.identity for r in rels):
            count += 1
    return count


def _eval(target, img, rel):
    acc = target.identity
    for sym, k in rel:
        y = img[sym] if k == 1 else target.inv[img[sym]]
        acc = target.mult[acc][y]
    return acc


# -- Reidemeister-Schreier ------------------------------------------------------------

def schreier_kernel_rank(g: GraphOfGroups, target, images: dict) -> tuple[int, list[int]]:
    """Rank and torsion of the abelianised kernel of a surjection onto ``target``.

    ``images`` maps presentation generators (as produced by :func:`presentation`)
    to target elements. Cosets are the target elements; the Schreier transversal
    comes from a breadth-first spanning tree of the coset graph.
    """
    gens, rels = presentation(g)
    n = target.order
    parent = {target.identity: None}
    queue = deque([target.identity])
    while queue:
        c = queue.popleft()
        for s in gens:
            d = target.mult[c][images[s]]
            if d not in parent:
                parent[d] = (c, s)
                queue.append(d)
    assert len(parent) == n, "images do not generate the target"
    tree = {(c, s) for d, p in parent.items() if p is not None for c, s in [p]}
    schreier = [(c, s) for c in range(n) for s in gens if (c, s) not in tree]
    col = {x: i for i, x in enumerate(schreier)}
    rows = []
    for c in range(n):
        for rel in rels:
            row = [0] * len(schreier)
            cur = c
            for s, k in rel:
                if k == 1:
                    key, cur = (cur, s), target.mult[cur][images[s]]
                else:
                    cur = target.mult[cur][target.inv[images[s]]]
                    key = (cur, s)
                if key in col:
                    row[col[key]] += k
            assert cur == c, "relator does not map to the identity"
            rows.append(row)
    if not rows or not schreier:
        return len(schreier), []
    m = Matrix(rows)
    snf = smith_normal_form(m)
    diag = [abs(snf[i, i]) for i in range(min(snf.shape)) if snf[i, i] != 0]
    rank = len(schreier) - len(diag)
    torsion = [int(d) for d in diag if d != 1]
    return rank, torsion


def quotient_images(g: GraphOfGroups, q) -> dict:
    out = {}
    for v in g.vertices:
        for x in range(g.groups[v].order):
            if x != g.groups[v].identity:
                out[(v, x)] = q.vertex_maps[v][x]
    for e in g.edges:
        out[("edge", e)] = q.edge_images[e]
    return out


# -- free groups ------------------------------------------------------------------------

def free_reduce(word):
    out = []
    for x in word:
        if out and out[-1] == (x[0], -x[1]):
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def free_commute(a, b) -> bool:
    return free_reduce(a + b) == free_reduce(b + a)
