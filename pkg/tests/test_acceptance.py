"""The ten acceptance criteria, one test each.

Every test records a single ``criterion N: PASS|FAIL ...`` line, printed in the
terminal summary (or to stdout when this file is run as a script).
"""

import random
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE_LINES, FIXTURES, fixture_path  # noqa: E402
from oracles import quotient_images, rewrite_equal, schreier_kernel_rank  # noqa: E402

from bassserre.catalog import all_groups  # noqa: E402
from bassserre.decision import (  # noqa: E402
    centralizer_root_check,
    conjugates_onto,
    decide_conjugacy,
    image_subgroup,
    normalizer_chain,
)
from bassserre.fileformat import load  # noqa: E402
from bassserre.finite_groups import (  # noqa: E402
    are_conjugate_subgroups,
    cyclic_group,
    direct_product,
    group_from_permutations,
)
from bassserre.graph_of_groups import is_reduced  # noqa: E402
from bassserre.quotients import (  # noqa: E402
    QuotientBank,
    build_tower,
    check_square,
    enumerate_quotients,
    kernel_rank,
    quotient_by_images,
    quotient_gog,
    separate_cells,
    stage_reduced,
    trivial_quotient,
)
from bassserre.subgroups import classify_subgroup  # noqa: E402
from bassserre.tree import StandardTree, minimal_invariant_subtree  # noqa: E402
from bassserre.words import PathGroup, PathWord  # noqa: E402

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

SEED = 20240611


def record(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def group(name):
    return PathGroup(load(fixture_path(name)))


def named(name):
    return next(g for g in all_groups() if g.name == name)


# -- 1. normal forms ---------------------------------------------------------------

def _related(P, w, rng):
    """A word equal to ``w``: push an edge-group element across an edge, or
    insert a pinch ``(e,s) dst(x) (e,-s)`` in place of ``src(x)``."""
    g = P.gog
    gs, es = list(w.groups), list(w.edges)
    if es and (len(es) > 6 or rng.random() < 0.5):
        i = rng.randrange(len(es))
        d = P.end_data(es[i])
        x = rng.randrange(g.groups[es[i][0]].order)
        src, dst = g.groups[d.src], g.groups[d.dst]
        gs[i] = src.mult[gs[i]][d.src_map[x]]
        gs[i + 1] = dst.mult[dst.inv[d.dst_map[x]]][gs[i + 1]]
        return PathWord(w.start, tuple(gs), tuple(es))
    i = rng.randrange(len(gs))
    v = P.vertices_of(w)[i]
    end = rng.choice([(e, s) for e in g.edges for s in (1, -1) if P.end_data((e, s)).src == v])
    d = P.end_data(end)
    x = rng.randrange(g.groups[end[0]].order)
    grp = g.groups[v]
    # g_i = (g_i src(x)^-1) (e,s) dst(x) (e,-s) 1
    gs[i:i + 1] = [grp.mult[gs[i]][grp.inv[d.src_map[x]]], d.dst_map[x], grp.identity]
    es[i:i] = [end, (end[0], -end[1])]
    return PathWord(w.start, tuple(gs), tuple(es))


def test_criterion_1_normal_forms():
    t0 = time.perf_counter()
    rng = random.Random(SEED)
    pairs = 10_000
    bad = []
    stats = []
    for name in FIXTURES:
        P = group(name)
        qs = enumerate_quotients(P.gog, max_order=24, vertex_faithful_only=True)
        bank = QuotientBank(P.gog, qs)
        equal_pairs = 0
        for k in range(pairs):
            a = P.random_word(rng, 8)
            b = _related(P, a, rng) if k % 2 else P.random_word(rng, 8)
            assert len(a.edges) <= 8 and len(b.edges) <= 8
            eq = P.equal(a, b)
            equal_pairs += eq
            if eq != rewrite_equal(P.gog, a, b):
                bad.append((name, "oracle", a, b))
            agree = bool(np.array_equal(bank.evaluate(a), bank.evaluate(b)))
            if eq != agree:
                bad.append((name, "quotients", a, b))
        stats.append(f"{name}:{equal_pairs}eq/{len(qs)}q")
    dt = time.perf_counter() - t0
    record(1, not bad and dt < 60,
           f"{pairs} pairs per fixture, {len(bad)} disagreements, {dt:.1f}s ({' '.join(stats)})")


# -- 2. tree balls ------------------------------------------------------------------

def test_criterion_2_tree_balls():
    t0 = time.perf_counter()
    ok = True
    details = []
    expected = {"dinf": {"v1": 2, "v2": 2}, "psl2z": {"v1": 2, "v2": 3}}
    for name, degrees in expected.items():
        T = StandardTree(group(name))
        ball = T.ball(T.base_vertex(), 6)
        tree = ball.is_tree()
        interior = [v for v in ball.vertices if v not in ball.frontier]
        deg_ok = all(len(T.neighbors(v)) == degrees[v.cell] == T.index_degree(v.cell)
                     for v in interior)
        # inside the ball every interior vertex sees all of its neighbours
        incident = {v: 0 for v in ball.vertices}
        for d0, d1 in ball.edges.values():
            incident[d0] += 1
            incident[d1] += 1
        deg_ok &= all(incident[v] == degrees[v.cell] for v in interior)
        ok &= tree and deg_ok
        details.append(f"{name} {len(ball.vertices)}v/{len(ball.edges)}e tree={tree} "
                       f"degrees={deg_ok}")
    dt = time.perf_counter() - t0
    record(2, ok and dt < 10, f"{'; '.join(details)}; {dt:.2f}s")


# -- 3. quotient graphs ------------------------------------------------------------

def test_criterion_3_quotient_graphs():
    P = group("dinf")
    g = P.gog
    k = direct_product(cyclic_group(2), cyclic_group(2))
    st = quotient_gog(g, quotient_by_images(g, k, {"v1": [1], "v2": [2]}))
    gu = st.gog_U
    iso = (len(gu.vertices) == 2 and len(gu.edges) == 1
           and gu.source[gu.edges[0]] != gu.target[gu.edges[0]]
           and st.class_of["v1"] != st.class_of["v2"])
    triv = quotient_gog(g, trivial_quotient(g)).gog_U
    loop = (len(triv.vertices) == 1 and len(triv.edges) == 1
            and triv.source[triv.edges[0]] == triv.target[triv.edges[0]])
    tower = build_tower(g, max_order=24)
    squares = list(tower.squares())
    failed = [sq for sq in squares if not check_square(tower, *sq)]
    record(3, iso and loop and squares and not failed,
           f"C2xC2 stage isomorphic={iso}, trivial stage one loop={loop}, "
           f"{len(squares) - len(failed)}/{len(squares)} squares commute")


# -- 4. kernel rank -----------------------------------------------------------------

def test_criterion_4_kernel_rank():
    d, p, f = load(fixture_path("dinf")), load(fixture_path("psl2z")), load(fixture_path("f2"))
    k = direct_product(cyclic_group(2), cyclic_group(2))
    s3 = group_from_permutations(3, ["(0 1)", "(0 1 2)"])
    cases = [
        ("dinf/C2xC2", d, quotient_by_images(d, k, {"v1": [1], "v2": [2]}), 1),
        ("psl2z/S3", p, quotient_by_images(p, s3, {"v1": [s3.index_of("(0 1)")],
                                                    "v2": [s3.index_of("(0 1 2)")]}), 2),
        ("f2/trivial", f, trivial_quotient(f), 2),
    ]
    ok = True
    parts = []
    for label, g, q, want in cases:
        formula = kernel_rank(g, q)
        rs, torsion = schreier_kernel_rank(g, q.target, quotient_images(g, q))
        ok &= formula == rs == want and not torsion
        parts.append(f"{label} formula={formula} schreier={rs}")
    record(4, ok, ", ".join(parts))


# -- 5 and 6. separation and stage reducedness -------------------------------------------

def _reduced_fixtures():
    return [n for n in FIXTURES if is_reduced(load(fixture_path(n)))]


def test_criterion_5_separation():
    missing = []
    total = 0
    for name in _reduced_fixtures():
        g = load(fixture_path(name))
        tower = build_tower(g, max_order=24)
        cells = list(g.cells)
        for i, m in enumerate(cells):
            for m2 in cells[i + 1:]:
                total += 1
                if separate_cells(tower, m, m2) is None:
                    missing.append((name, m, m2))
    record(5, not missing and total > 0,
           f"{total - len(missing)}/{total} cell pairs separated over "
           f"{len(_reduced_fixtures())} reduced fixtures")


def test_criterion_6_stage_reducedness():
    checked, bad = 0, []
    for name in _reduced_fixtures():
        g = load(fixture_path(name))
        for q in enumerate_quotients(g, max_order=24, vertex_faithful_only=True):
            checked += 1
            if not stage_reduced(quotient_gog(g, q)):
                bad.append((name, q.describe(g)))
    record(6, not bad and checked > 0, f"{checked - len(bad)}/{checked} vertex-faithful "
                                       f"stages reduced")


# -- 7. minimal subtree ----------------------------------------------------------------

def test_criterion_7_minimal_subtree():
    P = group("dinf")
    t0 = time.perf_counter()
    q = minimal_invariant_subtree(P, [P.parse("v1.a v2.b")])
    dt = time.perf_counter() - t0
    record(7, len(q.vertices) == 2 and len(q.edges) == 2 and dt < 5,
           f"<ab> in dinf: {q.summary()}, {dt:.2f}s")


# -- 8. conjugacy corpus -----------------------------------------------------------------

def _reverify(P, verdict, h1, h2):
    if verdict.conjugate:
        r = verdict.witness
        H1, H2 = classify_subgroup(P, h1), classify_subgroup(P, h2)
        return conjugates_onto(P, r, H1, H2, budget=8)
    t = verdict.quotient.target
    return are_conjugate_subgroups(t, image_subgroup(P, verdict.quotient, h1),
                                   image_subgroup(P, verdict.quotient, h2)) is None


def test_criterion_8_conjugacy_corpus():
    path = Path(str(fixture_path("dinf"))).with_name("corpus.toml")
    facts = [f for f in tomllib.loads(path.read_text())["fact"] if f["kind"] == "conjugacy"]
    required = {("dinf", "v1.a", "v2.b v1.a v2.b", "Conjugate"),
                ("dinf", "v1.a", "v2.b", "NotConjugate")}
    present = {(f["fixture"], f["h1"], f["h2"], f["expect"]) for f in facts}
    wrong, slow = [], []
    cache = {}
    for f in facts:
        P = cache.setdefault(f["fixture"], group(f["fixture"]))
        h1, h2 = P.parse_list(f["h1"]), P.parse_list(f["h2"])
        t0 = time.perf_counter()
        v = decide_conjugacy(P, h1, h2)
        good = v.kind == f["expect"] and _reverify(P, v, h1, h2)
        dt = time.perf_counter() - t0
        if not good:
            wrong.append(f)
        if dt >= 5:
            slow.append((f, dt))
    ok = len(facts) >= 10 and required <= present and not wrong and not slow
    record(8, ok, f"{len(facts) - len(wrong)}/{len(facts)} annotated pairs verified, "
                  f"{len(slow)} over 5s")


# -- 9. normalizer chains ------------------------------------------------------------------

def test_criterion_9_normalizer_chains():
    P = group("dinf")
    tower = build_tower(P.gog, max_order=16)
    ref = next(i for i, s in enumerate(tower.stages) if s.quotient.target.name == "C2xC2")
    dihedral = [i for i, s in enumerate(tower.stages)
                if s.quotient.vertex_faithful and s.quotient.order <= 16
                and (s.quotient.target.name.startswith("D") or i == ref)
                and (i == ref or tower.morphism(i, ref) is not None)]
    U = tower.stages[ref].quotient
    a = P.parse("v1.a")
    ab2 = P.parse("v1.a v2.b v1.a v2.b")
    expected = {
        "<a>": ([a], frozenset({U.target.identity, U.evaluate(P.gog, a)})),
        "<(ab)^2>": ([ab2], frozenset(range(U.order))),
    }
    ok = True
    parts = []
    for label, (gens, want) in expected.items():
        rep = normalizer_chain(P, gens, tower, ref, dihedral)
        ok &= rep.stabilized_at is not None and rep.final() == want
        parts.append(f"{label} final size {len(rep.final())} (want {len(want)}), "
                     f"stabilized at stage {rep.stabilized_at}")
    names = ",".join(tower.stages[i].quotient.target.name for i in dihedral)
    record(9, ok, f"stages [{names}]; " + "; ".join(parts))


# -- 10. centralizer/root ---------------------------------------------------------------------

def test_criterion_10_centralizer_root():
    d, f = group("dinf"), group("f2")
    r1 = centralizer_root_check(d, d.parse("v1.a v2.b"), 2, length=6)
    r2 = centralizer_root_check(f, f.parse("x y"), 3, length=6)
    bad = len(r1.counterexamples) + len(r2.counterexamples)
    record(10, bad == 0, f"dinf x=ab n=2: {r1.words_checked} words; f2 x=xy n=3: "
                         f"{r2.words_checked} words; {bad} counterexamples")


if __name__ == "__main__":
    failures = 0
    tests = [(int(name.split("_")[2]), fn) for name, fn in globals().items()
             if name.startswith("test_criterion_")]
    for _, fn in sorted(tests):
        try:
            fn()
        except AssertionError:
            failures += 1
    sys.exit(1 if failures else 0)
