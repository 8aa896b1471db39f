"""Finite groups as dense multiplication tables.

Elements are the integers ``0 .. order-1``; multiplication is a table lookup.
Every search in this module (conjugacy, normalizers, centralizers,
homomorphisms) is exhaustive, which is fine for the desk-scale groups that
appear as vertex groups and as quotient targets.
"""

from __future__ import annotations

import random
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from typing import Optional

AXIOM_EXHAUSTIVE_LIMIT = 64
AXIOM_RANDOM_TRIPLES = 10_000
DEFAULT_CLOSURE_BOUND = 10_000


class NotAGroup(ValueError):
    """A multiplication table that fails one of the group axioms."""


class BoundExceeded(RuntimeError):
    pass


class ParentMismatch(ValueError):
    pass


@dataclass(frozen=True)
class FiniteGroup:
    order: int
    mult: tuple[tuple[int, ...], ...]
    identity: int
    inv: tuple[int, ...]
    labels: tuple[str, ...] = ()
    name: str = field(default="", compare=False)

    def mul(self, a: int, b: int) -> int:
        return self.mult[a][b]

    def product(self, elements: Iterable[int]) -> int:
        acc = self.identity
        for x in elements:
            acc = self.mult[acc][x]
        return acc

    def power(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv[a], -n
        acc = self.identity
        for _ in range(n):
            acc = self.mult[acc][a]
        return acc

    def conj(self, g: int, x: int) -> int:
        """Return ``g x g^-1``."""
        return self.mult[self.mult[g][x]][self.inv[g]]

    def element_order(self, a: int) -> int:
        n, x = 1, a
        while x != self.identity:
            x = self.mult[x][a]
            n += 1
        return n

    def elements(self) -> range:
        return range(self.order)

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels else str(a)

    def index_of(self, label: str) -> int:
        if label.startswith("#") and label[1:].isdigit():
            idx = int(label[1:])
            if idx < self.order:
                return idx
        if label in self.labels:
            return self.labels.index(label)
        if label == "1":
            return self.identity
        raise KeyError(label)

    def is_abelian(self) -> bool:
        return all(self.mult[a][b] == self.mult[b][a]
                   for a in range(self.order) for b in range(a + 1, self.order))

    def closure(self, gens: Iterable[int]) -> tuple[int, ...]:
        """Sorted elements of the subgroup generated by ``gens``."""
        gens = sorted(set(gens))
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = self.mult[x][s]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return tuple(sorted(seen))

    def generating_set(self, within: Optional[Sequence[int]] = None) -> tuple[int, ...]:
        """Small generating set, chosen greedily by lowest index not yet covered."""
        pool = sorted(within) if within is not None else list(range(self.order))
        target = len(pool)
        gens: list[int] = []
        span = {self.identity}
        for x in pool:
            if len(span) == target:
                break
            if x not in span:
                gens.append(x)
                span = set(self.closure(gens))
        return tuple(gens)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name or 'order ' + str(self.order)})"


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    elements: tuple[int, ...]
    _members: frozenset[int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_members", frozenset(self.elements))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self._members

    def conjugate(self, g: int) -> "Subgroup":
        return Subgroup(self.parent, tuple(sorted(self.parent.conj(g, x) for x in self.elements)))

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, elements={list(self.elements)})"


@dataclass(frozen=True)
class ElementHom:
    source: FiniteGroup
    target: FiniteGroup
    image: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.image[x]

    def is_injective(self) -> bool:
        return len(set(self.image)) == len(self.image)

    def is_homomorphism(self) -> bool:
        s, t = self.source, self.target
        if self.image[s.identity] != t.identity:
            return False
        return all(self.image[s.mult[a][b]] == t.mult[self.image[a]][self.image[b]]
                   for a in range(s.order) for b in range(s.order))

    def image_subgroup(self) -> Subgroup:
        return Subgroup(self.target, tuple(sorted(set(self.image))))

    def compose(self, after: "ElementHom") -> "ElementHom":
        """``after o self``."""
        return ElementHom(self.source, after.target, tuple(after.image[x] for x in self.image))


# -- construction ------------------------------------------------------------

def group_from_table(table: Sequence[Sequence[int]], labels: Optional[Sequence[str]] = None,
                     name: str = "", seed: int = 0) -> FiniteGroup:
    n = len(table)
    if n == 0:
        raise NotAGroup("empty table")
    for i, row in enumerate(table):
        if len(row) != n:
            raise NotAGroup(f"table not square: row {i} has length {len(row)}, expected {n}")
        for j, x in enumerate(row):
            if not isinstance(x, int) or not 0 <= x < n:
                raise NotAGroup(f"entry ({i},{j}) = {x!r} out of range")
    mult = tuple(tuple(int(x) for x in row) for row in table)
    full = set(range(n))
    for i in range(n):
        if set(mult[i]) != full:
            raise NotAGroup(f"cancellation: row {i} is not a permutation")
        if {mult[j][i] for j in range(n)} != full:
            raise NotAGroup(f"cancellation: column {i} is not a permutation")
    identity = next((e for e in range(n)
                     if all(mult[e][x] == x and mult[x][e] == x for x in range(n))), None)
    if identity is None:
        raise NotAGroup("identity: no two-sided identity element")
    inv = []
    for a in range(n):
        b = mult[a].index(identity)
        if mult[b][a] != identity:
            raise NotAGroup(f"inverse: left and right inverses of {a} differ")
        inv.append(b)
    if n <= AXIOM_EXHAUSTIVE_LIMIT:
        triples: Iterable[tuple[int, int, int]] = (
            (a, b, c) for a in range(n) for b in range(n) for c in range(n))
    else:
        rng = random.Random(seed)
        triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n))
                   for _ in range(AXIOM_RANDOM_TRIPLES))
    for a, b, c in triples:
        if mult[mult[a][b]][c] != mult[a][mult[b][c]]:
            raise NotAGroup(f"associativity fails on ({a}, {b}, {c})")
    if labels is not None:
        labels = tuple(str(x) for x in labels)
        if len(labels) != n:
            raise NotAGroup(f"expected {n} labels, got {len(labels)}")
        if len(set(labels)) != n:
            raise NotAGroup("labels are not distinct")
    return FiniteGroup(n, mult, identity, tuple(inv), tuple(labels or ()), name)


def parse_cycles(text: str, degree: int) -> tuple[int, ...]:
    """Parse cycle notation such as ``(0 1 2)(3 4)`` into an image tuple."""
    perm = list(range(degree))
    text = text.strip()
    if text in ("", "()", "1"):
        return tuple(perm)
    for chunk in text.replace(")", ")|").split("|"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if not (chunk.startswith("(") and chunk.endswith(")")):
            raise ValueError(f"bad cycle syntax: {text!r}")
        pts = [int(p) for p in chunk[1:-1].replace(",", " ").split()]
        for i, p in enumerate(pts):
            if not 0 <= p < degree:
                raise ValueError(f"point {p} outside 0..{degree - 1}")
            perm[p] = pts[(i + 1) % len(pts)]
    if sorted(perm) != list(range(degree)):
        raise ValueError(f"not a permutation: {text!r}")
    return tuple(perm)


def format_cycles(perm: Sequence[int]) -> str:
    seen = set()
    out = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            seen.add(j)
            cyc.append(j)
            j = perm[j]
        out.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(out) or "()"


def group_from_permutations(degree: int, generators: Sequence[Sequence[int] | str],
                            bound: int = DEFAULT_CLOSURE_BOUND, name: str = "") -> FiniteGroup:
    """Close a set of permutations of ``0..degree-1`` under composition.

    ``(p*q)(i) = q(p(i))``: apply ``p`` first. The identity is element 0 and
    the rest are numbered in breadth-first discovery order.
    """
    gens = []
    for g in generators:
        p = parse_cycles(g, degree) if isinstance(g, str) else tuple(g)
        if sorted(p) != list(range(degree)):
            raise ValueError(f"not a permutation of 0..{degree - 1}: {g!r}")
        gens.append(p)
    ident = tuple(range(degree))
    elems = [ident]
    index = {ident: 0}
    i = 0
    while i < len(elems):
        x = elems[i]
        for g in gens:
            y = tuple(g[x[k]] for k in range(degree))
            if y not in index:
                if len(elems) >= bound:
                    raise BoundExceeded(f"closure exceeds {bound} elements")
                index[y] = len(elems)
                elems.append(y)
        i += 1
    n = len(elems)
    table = [[index[tuple(q[p[k]] for k in range(degree))] for q in elems] for p in elems]
    return group_from_table(table, [format_cycles(p) for p in elems], name=name)


def cyclic_group(n: int) -> FiniteGroup:
    return group_from_table([[(a + b) % n for b in range(n)] for a in range(n)], name=f"C{n}")


def direct_product(g: FiniteGroup, h: FiniteGroup, name: str = "") -> FiniteGroup:
    """Elements ``(a, b)`` are numbered ``a * |h| + b``."""
    m = h.order
    table = [[g.mult[a1][a2] * m + h.mult[b1][b2]
              for a2 in range(g.order) for b2 in range(m)]
             for a1 in range(g.order) for b1 in range(m)]
    return group_from_table(table, name=name or f"{g.name}x{h.name}")


def semidirect_product(n: FiniteGroup, h: FiniteGroup, action: Sequence[Sequence[int]],
                       name: str = "") -> FiniteGroup:
    """``N x| H`` where ``action[y]`` is the automorphism of N induced by ``y``.

    ``(a, x)(b, y) = (a * action[x](b), x y)``.
    """
    m = h.order
    table = [[n.mult[a][action[x][b]] * m + h.mult[x][y]
              for b in range(n.order) for y in range(m)]
             for a in range(n.order) for x in range(m)]
    return group_from_table(table, name=name)


def metacyclic_group(m: int, k: int, s: int, r: int, name: str = "") -> FiniteGroup:
    """``<x, y | x^m, y^k = x^s, y x y^-1 = x^r>`` with elements ``x^a y^b``."""
    def mul(p: tuple[int, int], q: tuple[int, int]) -> tuple[int, int]:
        a, b = p
        c, d = q
        e = (a + c * pow(r, b, m)) % m
        f = b + d
        if f >= k:
            e, f = (e + s) % m, f - k
        return e, f
    elems = [(a, b) for a in range(m) for b in range(k)]
    index = {p: i for i, p in enumerate(elems)}
    return group_from_table([[index[mul(p, q)] for q in elems] for p in elems], name=name)


def matrix_group(generators: Sequence[Sequence[Sequence[int]]], modulus: int,
                 name: str = "", bound: int = DEFAULT_CLOSURE_BOUND) -> FiniteGroup:
    """Closure of square integer matrices under multiplication mod ``modulus``."""
    dim = len(generators[0])

    def matmul(a, b):
        return tuple(tuple(sum(a[i][t] * b[t][j] for t in range(dim)) % modulus
                           for j in range(dim)) for i in range(dim))

    gens = [tuple(tuple(x % modulus for x in row) for row in g) for g in generators]
    ident = tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim))
    elems = [ident]
    index = {ident: 0}
    i = 0
    while i < len(elems):
        for g in gens:
            y = matmul(elems[i], g)
            if y not in index:
                if len(elems) >= bound:
                    raise BoundExceeded(f"closure exceeds {bound} elements")
                index[y] = len(elems)
                elems.append(y)
        i += 1
    return group_from_table([[index[matmul(a, b)] for b in elems] for a in elems], name=name)


# -- subgroups and searches ---------------------------------------------------

def make_subgroup(g: FiniteGroup, elements: Iterable[int]) -> Subgroup:
    elems = tuple(sorted(set(elements)))
    if g.identity not in elems:
        raise ValueError("subset does not contain the identity")
    members = set(elems)
    for a in elems:
        if g.inv[a] not in members:
            raise ValueError(f"subset not closed under inverse at {a}")
        for b in elems:
            if g.mult[a][b] not in members:
                raise ValueError(f"subset not closed under product at ({a}, {b})")
    if g.order % len(elems):
        raise ValueError("subset order does not divide the group order")
    return Subgroup(g, elems)


def generated_subgroup(g: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    return Subgroup(g, g.closure(gens))


def whole(g: FiniteGroup) -> Subgroup:
    return Subgroup(g, tuple(range(g.order)))


def _check_parent(g: FiniteGroup, *subgroups: Subgroup) -> None:
    for h in subgroups:
        if h.parent is not g and h.parent != g:
            raise ParentMismatch("subgroup belongs to a different group")


def are_conjugate_subgroups(g: FiniteGroup, h1: Subgroup, h2: Subgroup) -> Optional[int]:
    """Lowest-index ``x`` with ``x H1 x^-1 = H2``, or None."""
    _check_parent(g, h1, h2)
    if h1.order != h2.order:
        return None
    target = set(h2.elements)
    for x in range(g.order):
        if all(g.conj(x, h) in target for h in h1.elements):
            return x
    return None


def normalizer(g: FiniteGroup, h: Subgroup) -> Subgroup:
    _check_parent(g, h)
    members = set(h.elements)
    return Subgroup(g, tuple(x for x in range(g.order)
                             if all(g.conj(x, y) in members for y in h.elements)))


def centralizer(g: FiniteGroup, s: Iterable[int]) -> Subgroup:
    if isinstance(s, Subgroup):
        _check_parent(g, s)
        s = s.elements
    s = list(s)
    for x in s:
        if not 0 <= x < g.order:
            raise ParentMismatch(f"element {x} is not in the group")
    return Subgroup(g, tuple(x for x in range(g.order)
                             if all(g.mult[x][y] == g.mult[y][x] for y in s)))


def extend_to_hom(src: FiniteGroup, dst: FiniteGroup, gens: Sequence[int],
                  images: Sequence[int]) -> Optional[tuple[int, ...]]:
    """Extend generator images to a homomorphism, or None if inconsistent.

    Walks the right Cayley graph of ``src`` so every relation ``f(x s) = f(x) f(s)``
    for generators ``s`` is checked, which is enough for ``f`` to be a homomorphism
    once ``gens`` generate ``src``.
    """
    img: list[Optional[int]] = [None] * src.order
    img[src.identity] = dst.identity
    queue = [src.identity]
    i = 0
    while i < len(queue):
        x = queue[i]
        i += 1
        fx = img[x]
        for s, fs in zip(gens, images):
            y = src.mult[x][s]
            fy = dst.mult[fx][fs]
            if img[y] is None:
                img[y] = fy
                queue.append(y)
            elif img[y] != fy:
                return None
    if len(queue) != src.order:
        return None
    return tuple(img)  # type: ignore[arg-type]


def homomorphisms(src: FiniteGroup, dst: FiniteGroup,
                  gens: Optional[Sequence[int]] = None) -> Iterator[tuple[int, ...]]:
    """All homomorphisms ``src -> dst`` as image tuples, in lexicographic order of
    generator images."""
    gens = tuple(gens) if gens is not None else src.generating_set()
    orders = [src.element_order(s) for s in gens]
    cands = [[y for y in range(dst.order) if o % dst.element_order(y) == 0] for o in orders]

    def rec(i: int, chosen: list[int]) -> Iterator[tuple[int, ...]]:
        if i == len(gens):
            f = extend_to_hom(src, dst, gens, chosen)
            if f is not None:
                yield f
            return
        for y in cands[i]:
            chosen.append(y)
            yield from rec(i + 1, chosen)
            chosen.pop()

    yield from rec(0, [])


def _fingerprint(g: FiniteGroup) -> tuple:
    orders = sorted(g.element_order(x) for x in range(g.order))
    center = len(centralizer(g, range(g.order)).elements)
    comm = g.closure({g.mult[g.mult[a][b]][g.mult[g.inv[a]][g.inv[b]]]
                      for a in range(g.order) for b in range(g.order)})
    squares = len({g.mult[a][a] for a in range(g.order)})
    return (g.order, tuple(orders), center, len(comm), squares)


def find_isomorphism(g: FiniteGroup, h: FiniteGroup) -> Optional[ElementHom]:
    if g.order != h.order or _fingerprint(g) != _fingerprint(h):
        return None
    gens = g.generating_set()
    for img in homomorphisms(g, h, gens):
        if len(set(img)) == g.order:
            return ElementHom(g, h, img)
    return None


def check_axioms(g: FiniteGroup, seed: int = 0) -> None:
    """Re-run the axiom checks on a constructed group (raises NotAGroup)."""
    group_from_table([list(r) for r in g.mult], g.labels or None, seed=seed)


def is_solvable(g: FiniteGroup) -> bool:
    current = tuple(range(g.order))
    while len(current) > 1:
        comm = g.closure({g.mult[g.mult[a][b]][g.mult[g.inv[a]][g.inv[b]]]
                          for a in current for b in current})
        if len(comm) == len(current):
            return False
        current = comm
    return True
