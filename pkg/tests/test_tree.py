import random
import time

import pytest
from conftest import FIXTURES

from bassserre.errors import BudgetExceeded, FiniteGroupInput
from bassserre.tree import (
    StandardTree,
    TreeVertex,
    canonical_coset,
    minimal_invariant_subtree,
)


@pytest.fixture(scope="module")
def trees(groups):
    return {n: StandardTree(P) for n, P in groups.items()}


def test_canonical_cosets_dinf(groups):
    P = groups["dinf"]
    assert canonical_coset(P, P.identity(), "v1") == TreeVertex(P.identity(), "v1")
    assert canonical_coset(P, P.parse("v1.a"), "v1") == TreeVertex(P.identity(), "v1")
    b = P.parse("v2.b")
    assert canonical_coset(P, b, "v1") == TreeVertex(b, "v1")
    assert canonical_coset(P, b, "v1") != canonical_coset(P, P.identity(), "v1")


@pytest.mark.parametrize("name", FIXTURES)
def test_degrees_match_index_formula(trees, name):
    T = trees[name]
    patch = T.ball(T.base_vertex(), 3)
    for v in patch.vertices:
        assert len(T.neighbors(v)) == T.index_degree(v.cell)


def test_degree_values(trees):
    assert {v: trees["psl2z"].index_degree(v) for v in ("v1", "v2")} == {"v1": 2, "v2": 3}
    assert trees["dinf"].index_degree("v1") == trees["dinf"].index_degree("v2") == 2
    assert trees["f2"].index_degree("v") == 4


@pytest.mark.parametrize("name", FIXTURES)
def test_balls_are_trees(trees, name):
    T = trees[name]
    for r in range(4):
        assert T.ball(T.base_vertex(), r).is_tree()


def test_psl2z_ball_count(trees):
    T = trees["psl2z"]
    assert len(T.ball(T.base_vertex(), 2).vertices) == 7


def test_geodesics(groups, trees):
    T, P = trees["dinf"], groups["dinf"]
    x = T.base_vertex()
    assert T.geodesic(x, x).length == 0
    y = T.act(P.parse("v2.b"), x)
    path = T.geodesic(x, y)
    assert path.length == 2
    assert [v.cell for v in path.vertices] == ["v1", "v2", "v1"]
    assert path.is_tree()


def test_geodesic_budget(groups, trees):
    T, P = trees["dinf"], groups["dinf"]
    far = T.act(P.parse("v1.a v2.b v1.a v2.b v1.a v2.b"), T.base_vertex())
    with pytest.raises(BudgetExceeded) as info:
        T.geodesic(T.base_vertex(), far, budget=3)
    assert info.value.state == 3


def test_geodesic_length_matches_ball_distance(trees):
    T = trees["psl2z"]
    ball = T.ball(T.base_vertex(), 4)
    far = [v for v in ball.frontier][:5]
    for v in far:
        assert T.geodesic(T.base_vertex(), v).length == 4


def test_stabilizers(groups, trees):
    P, T = groups["dinf"], trees["dinf"]
    base = T.stabilizer(T.base_vertex())
    assert sorted(base, key=lambda w: w.sort_key()) == sorted(T.cell_group("v1"),
                                                              key=lambda w: w.sort_key())
    y = T.act(P.parse("v2.b"), T.base_vertex())
    assert set(T.stabilizer(y)) == {P.identity(), P.parse("v2.b v1.a v2.b")}
    F = trees["f2"]
    assert F.stabilizer(F.act(groups["f2"].parse("x y"), F.base_vertex())) == [groups["f2"].identity()]


@pytest.mark.parametrize("name", FIXTURES)
def test_stabilizer_equivariance(groups, trees, name):
    P, T = groups[name], trees[name]
    rng = random.Random(3)
    cells = T.ball(T.base_vertex(), 2).vertices
    for _ in range(10):
        g = P.reduce(P.random_word(rng, 4))
        x = rng.choice(cells)
        lhs = set(T.stabilizer(T.act(g, x)))
        rhs = {P.conjugate(g, s) for s in T.stabilizer(x)}
        assert lhs == rhs


@pytest.mark.parametrize("name", ["dinf", "psl2z", "chain"])
def test_geodesic_stabilizer_chain(groups, trees, name):
    # an element fixing both ends of a geodesic fixes every cell in between
    P, T = groups[name], trees[name]
    ball = T.ball(T.base_vertex(), 3)
    for y in list(ball.frontier)[:6]:
        path = T.geodesic(T.base_vertex(), y)
        common = set(T.stabilizer(T.base_vertex())) & set(T.stabilizer(y))
        for g in common:
            for v in path.vertices:
                assert T.act(g, v) == v


def test_minimal_subtree_translation(groups):
    P = groups["dinf"]
    t0 = time.perf_counter()
    q = minimal_invariant_subtree(P, [P.parse("v1.a v2.b")])
    assert time.perf_counter() - t0 < 5
    assert len(q.vertices) == 2 and len(q.edges) == 2
    assert q.vertex_stabilizers == (1, 1)


def test_minimal_subtree_whole_group(groups):
    P = groups["dinf"]
    q = minimal_invariant_subtree(P, [P.parse("v1.a"), P.parse("v2.b")])
    assert q.summary() == "2 vertices, 1 edges"
    assert q.vertex_stabilizers == (2, 2)


def test_minimal_subtree_rejects_finite(groups):
    P = groups["dinf"]
    with pytest.raises(FiniteGroupInput):
        minimal_invariant_subtree(P, [P.parse("v1.a")])
