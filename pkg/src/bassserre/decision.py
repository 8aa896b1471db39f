"""Subgroup conjugacy, normalizer chains and the centralizer/root check.

``decide_conjugacy`` alternates two searches. Lane A enumerates candidate
conjugators ``r`` and tries to prove ``r H1 r^-1 = H2``; lane B walks the
vertex-faithful finite quotients looking for one in which the images of H1
and H2 are not conjugate. Whichever certifies first wins.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from typing import Optional

from .errors import BudgetExceeded, PreconditionFailed
from .finite_groups import (
    FiniteGroup,
    Subgroup,
    are_conjugate_subgroups,
    centralizer,
    make_subgroup,
    normalizer,
)
from .quotients import FiniteQuotient, Tower, enumerate_quotients, stage_order_key
from .subgroups import (
    Finite,
    Infinite,
    SubgroupSpec,
    classify_subgroup,
    membership_semitest,
)
from .words import INFINITE, PathGroup, PathWord

__all__ = [
    "ConjugacyVerdict", "ConjugacyState", "NormalizerReport", "CentralizerReport",
    "classify_subgroup", "membership_semitest", "decide_conjugacy", "normalizer_chain",
    "centralizer_root_check", "image_subgroup",
]


def image_subgroup(P: PathGroup, q: FiniteQuotient, gens: Sequence[PathWord]) -> Subgroup:
    t = q.target
    return make_subgroup(t, t.closure(q.evaluate(P.gog, g) for g in gens))


@dataclass(frozen=True)
class ConjugacyVerdict:
    conjugate: bool
    witness: Optional[PathWord] = None        # r with r H1 r^-1 = H2
    quotient: Optional[FiniteQuotient] = None  # certificate for non-conjugacy
    reason: str = ""
    lane: str = ""
    steps: int = 0

    @property
    def kind(self) -> str:
        return "Conjugate" if self.conjugate else "NotConjugate"


@dataclass
class ConjugacyState:
    """Progress of both lanes; pass back as ``resume`` to continue a search."""
    lane_a: int = 0
    lane_b: int = 0
    lane_b_exhausted: bool = False

    @property
    def steps(self) -> int:
        return self.lane_a + self.lane_b


def _spec(P: PathGroup, H) -> SubgroupSpec:
    return H if isinstance(H, SubgroupSpec) else classify_subgroup(P, H)


def conjugates_onto(P: PathGroup, r: PathWord, H1: SubgroupSpec, H2: SubgroupSpec,
                    budget: int) -> bool:
    """True only when ``r H1 r^-1 = H2`` is proved (exactly for finite subgroups,
    by two-sided membership in generator balls otherwise)."""
    rinv = P.invert(r)
    if isinstance(H1.finiteness, Finite) and isinstance(H2.finiteness, Finite):
        image = {P.reduce(P.product([r, h, rinv])) for h in H1.finiteness.elements}
        return image == set(H2.finiteness.elements)
    for h in H1.generators:
        if not membership_semitest(P, P.product([r, h, rinv]), H2, budget):
            return False
    for k in H2.generators:
        if not membership_semitest(P, P.product([rinv, k, r]), H1, budget):
            return False
    return True


def _lane_a(P: PathGroup, H1: SubgroupSpec, H2: SubgroupSpec) -> Iterator[Optional[PathWord]]:
    """Level k tests closed normal forms with at most k edges using ball radius k + 1.

    For two finite subgroups the test is exact, so each level only adds the
    candidates with exactly k edges.
    """
    exact = isinstance(H1.finiteness, Finite) and isinstance(H2.finiteness, Finite)
    level = 0
    while True:
        cands = P.normal_forms(level, end=P.base) if exact else P.elements_by_length(level)
        for r in cands:
            yield r if conjugates_onto(P, r, H1, H2, level + 1) else None
        level += 1


def _lane_b(P: PathGroup, H1: SubgroupSpec, H2: SubgroupSpec, stages: Sequence[FiniteQuotient]
            ) -> Iterator[Optional[FiniteQuotient]]:
    for q in stages:
        a = image_subgroup(P, q, H1.generators)
        b = image_subgroup(P, q, H2.generators)
        yield q if are_conjugate_subgroups(q.target, a, b) is None else None


def _faithful_stages(P: PathGroup, tower: Optional[Tower], max_order: int) -> list[FiniteQuotient]:
    if tower is not None:
        return [st.quotient for st in tower.stages if st.quotient.vertex_faithful]
    qs = enumerate_quotients(P.gog, max_order=max_order, vertex_faithful_only=True)
    qs.sort(key=stage_order_key)
    return qs


def decide_conjugacy(P: PathGroup, H1, H2, tower: Optional[Tower] = None, budget: int = 20_000,
                     max_order: int = 24, resume: Optional[ConjugacyState] = None
                     ) -> ConjugacyVerdict:
    """Round-robin: one lane A candidate, then one lane B stage, until a lane certifies.

    Raises BudgetExceeded (with a ConjugacyState) after ``budget`` steps in total.
    """
    H1, H2 = _spec(P, H1), _spec(P, H2)
    if isinstance(H1.finiteness, Finite) != isinstance(H2.finiteness, Finite) and \
            (isinstance(H1.finiteness, Infinite) or isinstance(H2.finiteness, Infinite)):
        return ConjugacyVerdict(False, reason="one subgroup is finite and the other infinite",
                                lane="classify")
    state = ConjugacyState() if resume is None else ConjugacyState(**vars(resume))
    lane_a = _lane_a(P, H1, H2)
    lane_b = _lane_b(P, H1, H2, _faithful_stages(P, tower, max_order))
    for _ in range(state.lane_a):
        next(lane_a, None)
    for _ in range(state.lane_b):
        next(lane_b, None)
    a_done = False
    while state.steps < budget:
        if not a_done:
            r = next(lane_a, StopIteration)
            if r is StopIteration:
                a_done = True
            else:
                state.lane_a += 1
                if r is not None:
                    return _verified_conjugate(P, r, H1, H2, state)
        if not state.lane_b_exhausted:
            q = next(lane_b, StopIteration)
            if q is StopIteration:
                state.lane_b_exhausted = True
            else:
                state.lane_b += 1
                if q is not None:
                    return _verified_not_conjugate(P, q, H1, H2, state)
        if a_done and state.lane_b_exhausted:
            break
    raise BudgetExceeded("conjugacy undecided within budget", state=state)


def _verified_conjugate(P, r, H1, H2, state) -> ConjugacyVerdict:
    if not conjugates_onto(P, r, H1, H2, budget=64):
        raise AssertionError("conjugacy witness failed re-verification")
    return ConjugacyVerdict(True, witness=r, reason="r H1 r^-1 = H2", lane="A",
                            steps=state.steps)


def _verified_not_conjugate(P, q, H1, H2, state) -> ConjugacyVerdict:
    a = image_subgroup(P, q, H1.generators)
    b = image_subgroup(P, q, H2.generators)
    if are_conjugate_subgroups(q.target, a, b) is not None:
        raise AssertionError("non-conjugacy certificate failed re-verification")
    return ConjugacyVerdict(False, quotient=q, lane="B", steps=state.steps,
                            reason=f"images of orders {a.order} and {b.order} "
                                   f"are not conjugate in {q.target.name}")


# -- normalizers ------------------------------------------------------------------

@dataclass
class NormalizerReport:
    reference: int
    chain: list[tuple[int, frozenset[int]]]
    stabilized_at: Optional[int]
    discovered: list[tuple[PathWord, int]] = field(default_factory=list)

    def final(self) -> Optional[frozenset[int]]:
        return self.chain[-1][1] if self.chain else None


def normalizer_chain(P: PathGroup, H, tower: Tower, reference: int,
                     finer: Optional[Sequence[int]] = None, word_budget: int = 2
                     ) -> NormalizerReport:
    """Projections to the reference stage of the stage normalizers of the image of H.

    ``finer`` lists the stages to use (default: every stage with a morphism to the
    reference, in tower order, the reference itself included). Entries are
    running intersections, so the chain descends; it is stabilized at the
    first entry equal to its predecessor.
    """
    H = _spec(P, H)
    if finer is None:
        finer = [i for i in range(len(tower.stages))
                 if i == reference or tower.morphism(i, reference) is not None]
    U = tower.stages[reference].quotient
    chain: list[tuple[int, frozenset[int]]] = []
    current: Optional[frozenset[int]] = None
    stabilized = None
    for i in finer:
        qv = tower.stages[i].quotient
        if i == reference:
            phi = tuple(range(U.order))
        else:
            phi = tower.require(i, reference).phi
        n = normalizer(qv.target, image_subgroup(P, qv, H.generators))
        projected = frozenset(phi[x] for x in n.elements)
        entry = projected if current is None else current & projected
        if current is not None and entry == current and stabilized is None:
            stabilized = i
        current = entry
        chain.append((i, entry))
    discovered = []
    for r in P.elements_by_length(word_budget):
        if conjugates_onto(P, r, H, H, budget=word_budget + 2):
            discovered.append((r, U.evaluate(P.gog, r)))
    return NormalizerReport(reference, chain, stabilized, discovered)


# -- centralizers and roots -----------------------------------------------------------

@dataclass
class CentralizerReport:
    n: int
    kernel_stage: Optional[FiniteQuotient]
    words_checked: int
    commuting_with_power: int
    counterexamples: list[PathWord]
    stage_centralizers: list[tuple[str, int, int]]

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def word_ball(P: PathGroup, length: int) -> list[PathWord]:
    """Distinct elements given by words of at most ``length`` generator letters."""
    letters = []
    for _, g in P.generators():
        letters.append(g)
        letters.append(P.reduce(P.invert(g)))
    letters = list(dict.fromkeys(letters))
    ident = P.identity()
    seen = {ident}
    order = [ident]
    frontier = [ident]
    for _ in range(length):
        nxt = []
        for x in frontier:
            for g in letters:
                y = P.reduce(P.multiply(x, g))
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    nxt.append(y)
        frontier = nxt
    return order


def centralizer_root_check(P: PathGroup, x: PathWord, n: int, tower: Optional[Tower] = None,
                           length: int = 6, max_order: int = 24, stages: int = 5
                           ) -> CentralizerReport:
    """Check that every word commuting with x^n commutes with x.

    x must have infinite order and lie in the (free) kernel of some
    vertex-faithful quotient.
    """
    if n < 1:
        raise PreconditionFailed("n must be positive")
    x = P.reduce(x)
    if P.order_of(x) != INFINITE:
        raise PreconditionFailed("x is elliptic (finite order)")
    faithful = _faithful_stages(P, tower, max_order)
    kernel_stage = next((q for q in faithful
                         if q.evaluate(P.gog, x) == q.target.identity), None)
    if kernel_stage is None:
        raise PreconditionFailed("x is not in the kernel of any vertex-faithful quotient")
    per_stage = []
    for q in faithful[:stages]:
        t: FiniteGroup = q.target
        y = q.evaluate(P.gog, x)
        per_stage.append((q.describe(P.gog), centralizer(t, [y]).order,
                          centralizer(t, [t.power(y, n)]).order))
    if n == 1:
        return CentralizerReport(n, kernel_stage, 0, 0, [], per_stage)
    xn = P.power(x, n)
    checked, commuting, bad = 0, 0, []
    for w in word_ball(P, length):
        checked += 1
        if P.equal(P.multiply(w, xn), P.multiply(xn, w)):
            commuting += 1
            if not P.equal(P.multiply(w, x), P.multiply(x, w)):
                bad.append(w)
    return CentralizerReport(n, kernel_stage, checked, commuting, bad, per_stage)
