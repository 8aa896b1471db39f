import random
from dataclasses import replace

import numpy as np
import pytest
from conftest import FIXTURES, gog
from oracles import count_homs, quotient_images, schreier_kernel_rank

from bassserre.catalog import all_groups, catalog
from bassserre.errors import MissingMorphism, NotVertexFaithful
from bassserre.finite_groups import cyclic_group, direct_product, group_from_permutations
from bassserre.graph_of_groups import is_reduced
from bassserre.quotients import (
    QuotientBank,
    Tower,
    build_tower,
    check_square,
    connecting,
    enumerate_quotients,
    homs_into,
    kernel_rank,
    quotient_by_images,
    quotient_gog,
    relators_hold,
    separate_cells,
    stage_reduced,
    trivial_quotient,
)


def named(name):
    return next(g for g in all_groups() if g.name == name)


@pytest.fixture(scope="module")
def dinf_tower():
    return build_tower(gog("dinf"), max_order=24)


def test_dinf_into_c2_counts():
    g = gog("dinf")
    homs = list(homs_into(g, cyclic_group(2)))
    assert len(homs) == 4
    faithful = [h for h in homs if all(len(set(h[0][v])) == 2 for v in g.vertices)]
    assert len(faithful) == 1


def test_dinf_klein_quotient_faithful():
    g = gog("dinf")
    k = direct_product(cyclic_group(2), cyclic_group(2))
    q = quotient_by_images(g, k, {"v1": [1], "v2": [2]})
    assert q.vertex_faithful and q.surjective
    assert relators_hold(g, q)


@pytest.mark.parametrize("name", FIXTURES)
def test_hom_counts_match_brute_force(name):
    g = gog(name)
    for target in catalog(4):
        assert len(list(homs_into(g, target))) == count_homs(g, target)


def test_trivial_quotient():
    for name in FIXTURES:
        g = gog(name)
        q = trivial_quotient(g)
        assert relators_hold(g, q)
        assert q.vertex_faithful == (name == "f2")
    qs = enumerate_quotients(gog("dinf"), catalog=[named("C1")])
    assert len(qs) == 1


def test_psl2z_onto_s3():
    g = gog("psl2z")
    s3 = group_from_permutations(3, ["(0 1)", "(0 1 2)"])
    q = quotient_by_images(g, s3, {"v1": [s3.index_of("(0 1)")],
                                   "v2": [s3.index_of("(0 1 2)")]})
    assert q.vertex_faithful and q.surjective
    assert relators_hold(g, q)
    assert kernel_rank(g, q) == 2


@pytest.mark.parametrize("name", FIXTURES)
def test_enumerated_quotients_satisfy_relators(name):
    g = gog(name)
    for q in enumerate_quotients(g, max_order=8):
        assert relators_hold(g, q)


@pytest.mark.parametrize("name", ["dinf", "psl2z", "hnn", "chain"])
def test_kernel_rank_matches_schreier(name):
    g = gog(name)
    qs = enumerate_quotients(g, max_order=16, vertex_faithful_only=True)
    assert qs
    for q in qs:
        rank, torsion = schreier_kernel_rank(g, q.target, quotient_images(g, q))
        assert rank == kernel_rank(g, q) == q.kernel_rank
        assert torsion == []   # the kernel is free


def test_kernel_rank_values():
    d, f = gog("dinf"), gog("f2")
    k = direct_product(cyclic_group(2), cyclic_group(2))
    assert kernel_rank(d, quotient_by_images(d, k, {"v1": [1], "v2": [2]})) == 1
    assert kernel_rank(f, trivial_quotient(f)) == 2
    with pytest.raises(NotVertexFaithful):
        kernel_rank(d, trivial_quotient(d))


def test_quotient_graphs_dinf():
    g = gog("dinf")
    k = direct_product(cyclic_group(2), cyclic_group(2))
    st = quotient_gog(g, quotient_by_images(g, k, {"v1": [1], "v2": [2]}))
    assert len(st.gog_U.vertices) == 2 and len(st.gog_U.edges) == 1
    assert stage_reduced(st)
    triv = quotient_gog(g, trivial_quotient(g))
    assert len(triv.gog_U.vertices) == 1 and len(triv.gog_U.edges) == 1
    e = triv.gog_U.edges[0]
    assert triv.gog_U.source[e] == triv.gog_U.target[e]
    assert stage_reduced(triv)


def test_projection_is_morphism(dinf_tower):
    for st in dinf_tower.stages:
        assert st.projection.check() == []


def test_connecting_examples():
    g = gog("dinf")
    k = direct_product(cyclic_group(2), cyclic_group(2))
    c2 = cyclic_group(2)
    fine = quotient_gog(g, quotient_by_images(g, k, {"v1": [1], "v2": [2]}))
    diag = quotient_gog(g, quotient_by_images(g, c2, {"v1": [1], "v2": [1]}))
    m = connecting(fine, diag)
    assert m is not None
    assert [m.phi[x] for x in range(4)] == [0, 1, 1, 0]
    assert connecting(diag, fine) is None
    same = connecting(fine, fine)
    assert same.phi == (0, 1, 2, 3)
    left = quotient_gog(g, quotient_by_images(g, c2, {"v1": [1], "v2": [0]}))
    right = quotient_gog(g, quotient_by_images(g, c2, {"v1": [0], "v2": [1]}))
    assert connecting(left, right) is None and connecting(right, left) is None


def test_alpha_respects_classes(dinf_tower):
    T = dinf_tower
    for i in range(len(T.stages)):
        for j in range(len(T.stages)):
            m = T.morphism(i, j)
            if m is None:
                continue
            assert m.alpha.check() == []
            for c, cls in T.stages[i].class_of.items():
                assert m.alpha.graph_map[cls] == T.stages[j].class_of[c]


def test_all_squares_commute(dinf_tower):
    squares = list(dinf_tower.squares())
    assert squares
    for sq in squares:
        assert check_square(dinf_tower, *sq)


def test_degenerate_square(dinf_tower):
    assert check_square(dinf_tower, 1, 1, 1, 1)


def test_corrupted_beta_fails(dinf_tower):
    # swap the images of one vertex group in a leg ending at a faithful stage
    caught = 0
    for y, u, z, w in dinf_tower.squares():
        if u == z or u == w or not dinf_tower.stages[w].quotient.vertex_faithful:
            continue
        T = Tower(dinf_tower.base, dinf_tower.stages)
        good = T.require(y, u)
        v = next(iter(good.beta_groups))
        bad = replace(good, beta_groups={**good.beta_groups,
                                         v: tuple(reversed(good.beta_groups[v]))})
        T._cache[(y, u)] = bad
        result = check_square(T, y, u, z, w)
        assert not result
        assert result.witness.startswith("generator")
        caught += 1
    assert caught > 0


def test_missing_morphism(dinf_tower):
    n = len(dinf_tower.stages)
    i, j = next((i, j) for i in range(n) for j in range(n) if dinf_tower.morphism(i, j) is None)
    with pytest.raises(MissingMorphism):
        check_square(dinf_tower, i, j, i, j)


def test_separate_cells(dinf_tower):
    i = separate_cells(dinf_tower, "v1", "v2")
    assert dinf_tower.stages[i].quotient.target.name == "C2xC2"
    with pytest.raises(ValueError):
        separate_cells(dinf_tower, "v1", "v1")
    g = gog("dinf")
    only_trivial = Tower(g, [quotient_gog(g, trivial_quotient(g))])
    assert separate_cells(only_trivial, "v1", "v2") is None


def test_corrupted_stage_not_reduced():
    g = gog("dinf")
    st = quotient_gog(g, trivial_quotient(g))
    # an edge group as large as its endpoint group, between distinct vertices
    c2 = cyclic_group(2)
    from bassserre.graph_of_groups import make_graph_of_groups
    bad_gog = make_graph_of_groups(["p", "q"], {"e": ("p", "q")},
                                   {"p": c2, "q": cyclic_group(4), "e": c2},
                                   {"e": ([0, 1], [0, 2])}, base="p")
    assert not stage_reduced(replace(st, gog_U=bad_gog))


@pytest.mark.parametrize("name", ["dinf", "psl2z", "hnn", "chain"])
def test_faithful_stages_reduced(name):
    g = gog(name)
    assert is_reduced(g)
    for q in enumerate_quotients(g, max_order=12, vertex_faithful_only=True):
        assert stage_reduced(quotient_gog(g, q))


def test_tower_order_and_format(dinf_tower):
    flags = [st.quotient.vertex_faithful for st in dinf_tower.stages]
    assert flags == sorted(flags, reverse=True)
    text = dinf_tower.format()
    assert text.splitlines()[0] == f"stages: {len(dinf_tower.stages)}"
    assert text == build_tower(gog("dinf"), max_order=24).format()


def test_quotient_bank_agrees_with_evaluate(groups):
    P = groups["psl2z"]
    qs = enumerate_quotients(P.gog, max_order=12)
    bank = QuotientBank(P.gog, qs)
    rng = random.Random(5)
    for _ in range(50):
        w = P.random_word(rng, 6)
        assert np.array_equal(bank.evaluate(w), [q.evaluate(P.gog, w) for q in qs])
        assert np.array_equal(bank.evaluate(w), bank.evaluate(P.reduce(w)))
