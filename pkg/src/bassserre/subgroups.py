"""Finitely generated subgroups of the fundamental group: finiteness and membership."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import BudgetExceeded
from .finite_groups import Subgroup, make_subgroup
from .quotients import FiniteQuotient, enumerate_quotients, stage_order_key
from .words import INFINITE, PathGroup, PathWord


@dataclass(frozen=True)
class Finite:
    elements: tuple[PathWord, ...]


@dataclass(frozen=True)
class Infinite:
    witness: PathWord


@dataclass(frozen=True)
class Unknown:
    reason: str


Finiteness = Union[Finite, Infinite, Unknown]


@dataclass(frozen=True)
class SubgroupSpec:
    generators: tuple[PathWord, ...]
    finiteness: Finiteness

    @property
    def is_finite(self) -> bool:
        return isinstance(self.finiteness, Finite)

    @property
    def is_infinite(self) -> bool:
        return isinstance(self.finiteness, Infinite)


def classify_subgroup(P: PathGroup, gens: Sequence[PathWord], bound: int = 10_000) -> SubgroupSpec:
    """Decide finiteness of ``<gens>``.

    If every generator and every product of two generators is elliptic the
    generators have a common fixed vertex in the standard tree (Serre), so the
    subgroup sits inside a finite vertex stabilizer and its closure is
    enumerated. Otherwise the first hyperbolic product is the witness.
    """
    gs = tuple(P.reduce(g) for g in gens)
    for g in gs:
        if not P.is_closed(g):
            raise ValueError("subgroup generators must be closed at the base")
    for i, g in enumerate(gs):
        if P.order_of(g) == INFINITE:
            return SubgroupSpec(gs, Infinite(g))
    for i in range(len(gs)):
        for j in range(i + 1, len(gs)):
            w = P.reduce(P.multiply(gs[i], gs[j]))
            if P.order_of(w) == INFINITE:
                return SubgroupSpec(gs, Infinite(w))
    ident = P.identity()
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gs:
                y = P.reduce(P.multiply(x, g))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > bound:
                        return SubgroupSpec(gs, Unknown(f"closure exceeds {bound} elements"))
        frontier = nxt
    return SubgroupSpec(gs, Finite(tuple(sorted(seen, key=PathWord.sort_key))))


class _Ball:
    """Breadth-first ball in H over its generators and their inverses."""

    def __init__(self, P: PathGroup, gens: tuple[PathWord, ...]):
        self.P = P
        letters = list(gens) + [P.reduce(P.invert(g)) for g in gens]
        self.letters = list(dict.fromkeys(letters))
        ident = P.identity()
        self.seen = {ident}
        self.frontier = [ident]
        self.radius = 0

    def grow_to(self, radius: int, max_size: int) -> None:
        P = self.P
        while self.radius < radius and self.frontier:
            nxt = []
            for x in self.frontier:
                for g in self.letters:
                    y = P.reduce(P.multiply(x, g))
                    if y not in self.seen:
                        self.seen.add(y)
                        nxt.append(y)
            self.frontier = nxt
            self.radius += 1
            if len(self.seen) > max_size:
                break


def _balls(P: PathGroup) -> dict:
    cache = getattr(P, "_subgroup_balls", None)
    if cache is None:
        cache = {}
        P._subgroup_balls = cache  # type: ignore[attr-defined]
    return cache


def membership_semitest(P: PathGroup, w: PathWord, H: SubgroupSpec, budget: int,
                        max_size: int = 200_000) -> Optional[bool]:
    """True if ``w`` is in H; for infinite H None means "not found within ``budget``
    generator letters". For finite H the answer is exact."""
    w = P.reduce(w)
    if isinstance(H.finiteness, Finite):
        return w in set(H.finiteness.elements)
    cache = _balls(P)
    ball = cache.get(H.generators)
    if ball is None:
        ball = cache[H.generators] = _Ball(P, H.generators)
    if w in ball.seen:
        return True
    ball.grow_to(budget, max_size)
    return True if w in ball.seen else None


@dataclass
class MembershipOracle:
    """Decides membership in H: positive answers from the generator ball, negative
    answers from a finite quotient whose image of H misses the element."""
    P: PathGroup
    H: SubgroupSpec
    max_order: int = 24
    budget: int = 8
    _quotients: Optional[list] = field(default=None, repr=False)

    def quotients(self) -> list[tuple[FiniteQuotient, Subgroup]]:
        if self._quotients is None:
            qs = enumerate_quotients(self.P.gog, max_order=self.max_order)
            qs.sort(key=stage_order_key)
            self._quotients = [(q, self.image(q)) for q in qs]
        return self._quotients

    def image(self, q: FiniteQuotient) -> Subgroup:
        t = q.target
        gens = [q.evaluate(self.P.gog, g) for g in self.H.generators]
        return make_subgroup(t, t.closure(gens))

    def certificate(self, w: PathWord) -> Optional[FiniteQuotient]:
        """A quotient in which ``w`` maps outside the image of H."""
        for q, img in self.quotients():
            if q.evaluate(self.P.gog, w) not in img:
                return q
        return None

    def member(self, w: PathWord) -> bool:
        if membership_semitest(self.P, w, self.H, self.budget):
            return True
        if isinstance(self.H.finiteness, Finite):
            return False
        if self.certificate(w) is not None:
            return False
        raise BudgetExceeded(f"membership of {self.P.format(w)} undecided", state=self.budget)
