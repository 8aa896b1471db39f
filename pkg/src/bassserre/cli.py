"""Command-line interface.

Every command prints a line-oriented report of ``key: value`` lines, starting
with the command name and a sha256 digest of the input document and the
arguments that affect the outcome. Exit codes: 0 definite outcome, 1 input
error or negative validation, 2 usage error, 3 undecided within budget.
"""

from __future__ import annotations

import argparse
import hashlib
import random
import sys
import time
from fractions import Fraction
from importlib.resources import files
from pathlib import Path
from typing import Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import graph_of_groups as gg
from .catalog import catalog, class_predicate
from .decision import (
    centralizer_root_check,
    decide_conjugacy,
    normalizer_chain,
)
from .errors import BudgetExceeded, FiniteGroupInput, MissingMorphism, PreconditionFailed
from .fileformat import ParseError, SchemaError, dumps, load
from .quotients import (
    QuotientBank,
    build_tower,
    check_square,
    enumerate_quotients,
    separate_cells,
    stage_reduced,
)
from .subgroups import classify_subgroup
from .tree import StandardTree
from .words import INFINITE, EndpointMismatch, PathGroup, WordSyntaxError, format_free_word

EXIT_OK, EXIT_INPUT, EXIT_USAGE, EXIT_UNDECIDED = 0, 1, 2, 3


class InputError(Exception):
    pass


class Report:
    def __init__(self, command: str, digest: str):
        self.lines = [f"command: {command}", f"digest: {digest}"]

    def add(self, key: str, value) -> None:
        self.lines.append(f"{key}: {value}")

    def emit(self, out) -> None:
        out.write("\n".join(self.lines) + "\n")


def _digest(args: argparse.Namespace) -> str:
    h = hashlib.sha256()
    path = getattr(args, "input", None)
    if path:
        h.update(Path(path).read_bytes())
    for k in sorted(vars(args)):
        if k in ("func", "input", "timings", "jobs", "output"):
            continue
        h.update(f"{k}={getattr(args, k)!r};".encode())
    return h.hexdigest()


def _load(args) -> gg.GraphOfGroups:
    return load(args.input)


def _fmt_order(n) -> str:
    return "inf" if n == INFINITE else str(n)


def _words(P: PathGroup, text: str):
    return P.parse_list(text)


# -- commands ------------------------------------------------------------------------

def cmd_validate(args, rep: Report) -> int:
    g = _load(args)
    violations = gg.validate(g)
    rep.add("graph", f"{len(g.vertices)} vertices, {len(g.edges)} edges")
    rep.add("outcome", "valid" if not violations else "invalid")
    for v in violations:
        rep.add("violation", f"{v.kind}: {v.message}")
    if not violations:
        rep.add("reduced", "yes" if gg.is_reduced(g) else "no")
        rep.add("euler_characteristic", gg.euler_characteristic(g))
    return EXIT_OK if not violations else EXIT_INPUT


def cmd_reduce(args, rep: Report) -> int:
    g = _load(args)
    gg.ensure_valid(g)
    steps = []
    cur = g
    while True:
        fict = gg.fictitious_edges(cur)
        if not fict:
            break
        steps.append(fict[0])
        cur = gg.contract_edge(cur, fict[0])
    rep.add("contracted", " ".join(steps) if steps else "-")
    rep.add("vertices", " ".join(f"{v}:{cur.groups[v].order}" for v in cur.vertices))
    rep.add("edges", " ".join(cur.edges) if cur.edges else "-")
    rep.add("euler_characteristic", f"{gg.euler_characteristic(g)} -> "
                                    f"{gg.euler_characteristic(cur)}")
    rep.add("outcome", "reduced")
    if args.output:
        Path(args.output).write_text(dumps(cur), encoding="utf-8")
        rep.add("written", args.output)
    return EXIT_OK


def cmd_nf(args, rep: Report) -> int:
    P = PathGroup(_load(args))
    w = P.parse(args.word)
    rep.add("normal_form", P.format(w))
    rep.add("edge_length", w.length)
    rep.add("order", _fmt_order(P.order_of(w)))
    rep.add("graph_projection", format_free_word(P.graph_projection(w)))
    if args.other is not None:
        rep.add("equal", "yes" if P.equal(w, P.parse(args.other)) else "no")
    rep.add("outcome", "ok")
    return EXIT_OK


def cmd_tree(args, rep: Report) -> int:
    P = PathGroup(_load(args))
    T = StandardTree(P)
    center = T.base_vertex() if args.word is None else T.act(P.parse(args.word), T.base_vertex())
    patch = T.ball(center, args.depth)  # type: ignore[arg-type]
    rep.add("center", f"{P.format(center.rep)} @ {center.cell}")
    rep.add("radius", args.depth)
    rep.add("vertices", len(patch.vertices))
    rep.add("edges", len(patch.edges))
    rep.add("is_tree", "yes" if patch.is_tree() else "no")
    ok = all(len(T.neighbors(v)) == T.index_degree(v.cell) for v in patch.vertices)
    rep.add("degrees_match_index", "yes" if ok else "no")
    if args.list:
        for v in patch.vertices:
            rep.add("vertex", f"{P.format(v.rep)} @ {v.cell} degree {T.index_degree(v.cell)}")
        for e, (a, b) in patch.edges.items():
            rep.add("edge", f"{P.format(e.rep)} @ {e.cell}: "
                            f"{P.format(a.rep)} @ {a.cell} -> {P.format(b.rep)} @ {b.cell}")
    rep.add("outcome", "ok")
    return EXIT_OK


def cmd_quotients(args, rep: Report) -> int:
    g = _load(args)
    qs = enumerate_quotients(g, max_order=args.max_order, group_class=args.group_class,
                             vertex_faithful_only=args.faithful_only, jobs=args.jobs)
    rep.add("count", len(qs))
    rep.add("vertex_faithful", sum(1 for q in qs if q.vertex_faithful))
    for i, q in enumerate(qs):
        rank = "-" if q.kernel_rank is None else q.kernel_rank
        rep.add(f"quotient {i}", f"{q.describe(g)}; faithful={'yes' if q.vertex_faithful else 'no'}"
                                 f"; kernel_rank={rank}")
    rep.add("outcome", "ok")
    return EXIT_OK


def cmd_tower(args, rep: Report) -> int:
    g = _load(args)
    tower = build_tower(g, max_order=args.max_order, group_class=args.group_class,
                        jobs=args.jobs)
    if args.action == "build":
        for line in tower.format().splitlines():
            key, _, val = line.partition(": ")
            rep.add(key, val)
        rep.add("outcome", "ok")
        return EXIT_OK
    squares = list(tower.squares())
    failed = [(s, r.witness) for s in squares for r in [check_square(tower, *s)] if not r]
    rep.add("squares", len(squares))
    rep.add("squares_failed", len(failed))
    for s, why in failed:
        rep.add("square_failure", f"{s}: {why}")
    faithful = [i for i, st in enumerate(tower.stages) if st.quotient.vertex_faithful]
    unreduced = [i for i in faithful if not stage_reduced(tower.stages[i])]
    rep.add("faithful_stages", len(faithful))
    rep.add("unreduced_faithful_stages", " ".join(map(str, unreduced)) or "-")
    cells = g.cells
    missing = []
    for i, a in enumerate(cells):
        for b in cells[i + 1:]:
            s = separate_cells(tower, a, b)
            if s is None:
                missing.append(f"{a}/{b}")
            else:
                rep.add("separated", f"{a} {b} at stage {s}")
    rep.add("unseparated", " ".join(missing) or "-")
    ok = not failed and not unreduced and (gg.is_reduced(g) is False or not missing)
    rep.add("outcome", "pass" if ok else "fail")
    return EXIT_OK if ok else EXIT_INPUT


def _faithful_tower(g, args):
    return build_tower(g, max_order=args.max_order, group_class=args.group_class,
                       vertex_faithful_only=True, jobs=args.jobs)


def cmd_conjsep(args, rep: Report) -> int:
    P = PathGroup(_load(args))
    H1 = classify_subgroup(P, _words(P, args.h1))
    H2 = classify_subgroup(P, _words(P, args.h2))
    if args.group_class != "all" and not args.assume_closed and not (H1.is_finite and H2.is_finite):
        raise InputError("closedness in the chosen class topology is not automatic; "
                         "pass --assume-closed to assert it")
    tower = _faithful_tower(P.gog, args) if args.group_class != "all" else None
    rep.add("h1", f"{type(H1.finiteness).__name__}")
    rep.add("h2", f"{type(H2.finiteness).__name__}")
    try:
        v = decide_conjugacy(P, H1, H2, tower=tower, budget=args.budget,
                             max_order=args.max_order)
    except BudgetExceeded as exc:
        st = exc.state
        rep.add("outcome", "Undecided")
        rep.add("state", f"lane_a={st.lane_a} lane_b={st.lane_b}")
        return EXIT_UNDECIDED
    rep.add("outcome", v.kind)
    rep.add("lane", v.lane)
    rep.add("steps", v.steps)
    if v.witness is not None:
        rep.add("witness", P.format(v.witness))
    if v.quotient is not None:
        rep.add("certificate", v.quotient.describe(P.gog))
    rep.add("reason", v.reason)
    return EXIT_OK


def cmd_normalizer(args, rep: Report) -> int:
    P = PathGroup(_load(args))
    tower = _faithful_tower(P.gog, args)
    if not 0 <= args.ref_stage < len(tower.stages):
        raise InputError(f"no stage {args.ref_stage} (tower has {len(tower.stages)})")
    H = classify_subgroup(P, _words(P, args.h))
    r = normalizer_chain(P, H, tower, args.ref_stage, word_budget=args.depth)
    U = tower.stages[args.ref_stage].quotient
    t = U.target
    rep.add("reference", U.describe(P.gog))
    for i, entry in r.chain:
        rep.add(f"stage {i}", f"{tower.stages[i].quotient.target.name}: "
                              f"{{{', '.join(t.label(x) for x in sorted(entry))}}}")
    rep.add("stabilized_at", "-" if r.stabilized_at is None else r.stabilized_at)
    for w, y in r.discovered:
        rep.add("normalizes", f"{P.format(w)} -> {t.label(y)}")
    rep.add("outcome", "stabilized" if r.stabilized_at is not None else "open")
    return EXIT_OK


def cmd_centralizer(args, rep: Report) -> int:
    P = PathGroup(_load(args))
    x = P.parse(args.word)
    r = centralizer_root_check(P, x, args.power, length=args.depth, max_order=args.max_order)
    rep.add("kernel_stage", r.kernel_stage.describe(P.gog) if r.kernel_stage else "-")
    rep.add("words_checked", r.words_checked)
    rep.add("commuting_with_power", r.commuting_with_power)
    rep.add("counterexamples", len(r.counterexamples))
    for w in r.counterexamples:
        rep.add("counterexample", P.format(w))
    for desc, c1, cn in r.stage_centralizers:
        rep.add("stage", f"{desc}; |C(x)|={c1} |C(x^n)|={cn}")
    rep.add("outcome", "pass" if r.ok else "fail")
    return EXIT_OK if r.ok else EXIT_INPUT


# -- corpus ------------------------------------------------------------------------------

def fixture_path(name: str) -> Path:
    return Path(str(files("bassserre") / "fixtures" / f"{name}.gog"))


def _check_fact(fact: dict, P: PathGroup, seed: int) -> tuple[bool, str]:
    kind = fact["kind"]
    g = P.gog
    expect = str(fact["expect"])
    if kind == "euler":
        got = str(gg.euler_characteristic(g))
        return got == str(Fraction(expect)), got
    if kind == "order":
        got = _fmt_order(P.order_of(P.parse(fact["word"])))
        return got == expect, got
    if kind == "equal":
        got = "true" if P.equal(P.parse(fact["word"]), P.parse(fact["other"])) else "false"
        return got == expect, got
    if kind == "kernel_rank":
        target = next(t for t in catalog() if t.name == fact["target"])
        qs = [q for q in enumerate_quotients(g, [target]) if q.vertex_faithful]
        got = " ".join(sorted({str(q.kernel_rank) for q in qs})) or "none"
        return got == expect, got
    if kind == "degree":
        T = StandardTree(P)
        got = " ".join(f"{v}={T.index_degree(v)}" for v in g.vertices)
        ball = T.ball(T.base_vertex(), 3)
        ok = all(len(T.neighbors(v)) == T.index_degree(v.cell) for v in ball.vertices)
        return ok and got == expect, got
    if kind == "conjugacy":
        v = decide_conjugacy(P, P.parse_list(fact["h1"]), P.parse_list(fact["h2"]))
        return v.kind == expect, v.kind
    raise InputError(f"unknown fact kind {kind!r}")


def cmd_corpus(args, rep: Report) -> int:
    path = Path(args.corpus) if args.corpus else Path(str(files("bassserre") / "fixtures"
                                                         / "corpus.toml"))
    facts = tomllib.loads(path.read_text(encoding="utf-8")).get("fact", [])
    groups: dict[str, PathGroup] = {}
    failures = 0
    for i, fact in enumerate(facts):
        name = fact["fixture"]
        if name not in groups:
            groups[name] = PathGroup(load(fixture_path(name)))
        ok, got = _check_fact(fact, groups[name], args.seed)
        failures += not ok
        rep.add(f"fact {i}", f"{name} {fact['kind']} {'ok' if ok else 'FAIL'} ({got})")
    rng = random.Random(args.seed)
    for name in sorted(groups):
        P = groups[name]
        bank = QuotientBank(P.gog, enumerate_quotients(P.gog, max_order=12,
                                                       vertex_faithful_only=True))
        bad = 0
        for _ in range(100):
            a, b = P.random_word(rng, 6), P.random_word(rng, 6)
            if P.equal(a, b) and (bank.evaluate(a) != bank.evaluate(b)).any():
                bad += 1
        failures += bad
        rep.add(f"spot_check {name}", f"{bad} disagreements")
    rep.add("facts", len(facts))
    rep.add("failures", failures)
    rep.add("outcome", "pass" if failures == 0 else "fail")
    return EXIT_OK if failures == 0 else EXIT_INPUT


# -- parser ------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="graph-of-groups document")
    common.add_argument("--max-order", type=int, default=24)
    common.add_argument("--class", dest="group_class", default="all",
                        help="quotient class: all, solvable, abelian or p=<prime>")
    common.add_argument("--budget", type=int, default=20_000)
    common.add_argument("--depth", type=int, default=3)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--timings", action="store_true",
                        help="append wall-clock time (makes output non-reproducible)")

    p = argparse.ArgumentParser(prog="bassserre", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common])
    s.set_defaults(func=cmd_validate, needs_input=True)
    s = sub.add_parser("reduce", parents=[common])
    s.add_argument("--output")
    s.set_defaults(func=cmd_reduce, needs_input=True)
    s = sub.add_parser("nf", parents=[common])
    s.add_argument("--word", required=True)
    s.add_argument("--other")
    s.set_defaults(func=cmd_nf, needs_input=True)
    s = sub.add_parser("tree", parents=[common])
    s.add_argument("--word", help="center the ball at word . base vertex")
    s.add_argument("--list", action="store_true", help="print every cell")
    s.set_defaults(func=cmd_tree, needs_input=True)
    s = sub.add_parser("quotients", parents=[common])
    s.add_argument("action", choices=["enum"])
    s.add_argument("--faithful-only", action="store_true")
    s.set_defaults(func=cmd_quotients, needs_input=True)
    s = sub.add_parser("tower", parents=[common])
    s.add_argument("action", choices=["build", "check"])
    s.set_defaults(func=cmd_tower, needs_input=True)
    s = sub.add_parser("conjsep", parents=[common])
    s.add_argument("--h1", required=True)
    s.add_argument("--h2", required=True)
    s.add_argument("--assume-closed", action="store_true")
    s.set_defaults(func=cmd_conjsep, needs_input=True)
    s = sub.add_parser("normalizer", parents=[common])
    s.add_argument("--h", required=True)
    s.add_argument("--ref-stage", type=int, default=0)
    s.set_defaults(func=cmd_normalizer, needs_input=True)
    s = sub.add_parser("centralizer", parents=[common])
    s.add_argument("--word", required=True)
    s.add_argument("--power", type=int, default=2)
    s.set_defaults(func=cmd_centralizer, needs_input=True)
    s = sub.add_parser("corpus", parents=[common])
    s.add_argument("action", choices=["verify"])
    s.add_argument("--corpus", help="annotation file (default: shipped corpus)")
    s.set_defaults(func=cmd_corpus, needs_input=False)
    return p


def main(argv: Optional[list[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    if args.needs_input and not args.input:
        parser.print_usage(sys.stderr)
        sys.stderr.write("error: --input is required\n")
        return EXIT_USAGE
    if args.max_order < 1 or args.max_order > 24:
        sys.stderr.write("error: --max-order must be between 1 and 24\n")
        return EXIT_USAGE
    try:
        class_predicate(args.group_class)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    start = time.perf_counter()
    try:
        rep = Report(args.command, _digest(args))
        code = args.func(args, rep)
    except (ParseError, SchemaError, gg.InvalidInput, WordSyntaxError, EndpointMismatch,
            PreconditionFailed, FiniteGroupInput, MissingMorphism, InputError,
            FileNotFoundError) as exc:
        rep = Report(args.command, "-")
        rep.add("outcome", "error")
        rep.add("error", f"{type(exc).__name__}: {exc}")
        rep.emit(out)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        rep.add("outcome", "Undecided")
        rep.add("error", str(exc))
        rep.emit(out)
        return EXIT_UNDECIDED
    if args.timings:
        rep.add("seconds", f"{time.perf_counter() - start:.3f}")
    rep.emit(out)
    return code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
