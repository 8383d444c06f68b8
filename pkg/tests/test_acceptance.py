"""One test per acceptance criterion, each recorded as a PASS/FAIL line in
the terminal summary.  The heavy searches run once per module."""

import itertools
import random
import time

import pytest

from conftest import criterion
from oracles import band_partition, brute_sfn
from semispace.cli import main
from semispace.compiler import (ALPHA, EQUAL, HPP_PREFIX, INCONCLUSIVE, MISMATCH, P, compile_H,
                                compile_P, config_word, embedding_check, src)
from semispace.corpus import build_table_m0, corpus, presentation
from semispace.machine import a_length, configs_matching, inverse_name
from semispace.pipeline.certify import PASS, build_pipeline, certify_pipeline
from semispace.pipeline.onetape import yl
from semispace.search import EXACT, derivation_witness, space_between, space_profile
from semispace.trapezium import (ALPHA_K, A_K, OMEGA_K, Q, LetterKinds, build_trapezium,
                                 cap_cell_violations, compare_types, is_divisible,
                                 omega_band_violations, time_separate, trace_bands,
                                 trapezium_to_derivation, type_key, type_vector)
from semispace.words import (FORWARD, MONOID, Derivation, Step, one_step_successors,
                             parse_presentation, words_up_to)

IDEM = presentation("idempotent")
FREE = presentation("free")


@pytest.fixture(scope="module")
def idem_pipeline():
    return build_pipeline(build_table_m0(IDEM, 6), monoid=False)


@pytest.fixture(scope="module")
def toy_pipeline():
    return build_pipeline(build_table_m0(IDEM, 2), monoid=False)


@pytest.fixture(scope="module")
def idem_h(idem_pipeline):
    return compile_H(idem_pipeline.m5, IDEM.letters)


@pytest.fixture(scope="module")
def certified():
    return {p.name: certify_pipeline(p, 3, 40) for p in (IDEM, FREE)}


@pytest.fixture(scope="module")
def embedding(idem_h):
    return embedding_check(IDEM, idem_h, 3, 10, 8, machine_bound=40, keep_witnesses=True)


def test_criterion_01_derivation_engine():
    with criterion(1, "derivation engine: symmetric, bounded below, witnesses replay"):
        t0 = time.time()
        pairs = 0
        for p in corpus().values():
            ws = list(words_up_to(p.alphabet, 4, nonempty=p.kind != MONOID))
            for i, u in enumerate(ws):
                for v in ws[i:]:
                    s = space_between(p, u, v, 10)
                    assert s == space_between(p, v, u, 10), (p.name, u, v)
                    if s is None:
                        continue
                    assert s >= max(len(u), len(v))
                    d = derivation_witness(p, u, v, 10)
                    assert d.replay(p) and (d.start, d.end) == (u, v) and d.space == s
                    pairs += 1
        assert pairs > 0 and time.time() - t0 < 60


def test_criterion_02_space_functions():
    with criterion(2, "space functions: s(n) = n for n <= 6, free monoid and a^2 = a"):
        t0 = time.time()
        for p in (FREE, IDEM):
            prof = space_profile(p, 6, 10)
            assert prof.status == EXACT
            for n in range(1, 7):
                assert prof.values[n] == n == brute_sfn(p, n, 10), (p.name, n)
        assert time.time() - t0 < 60


def _spread_applications(m, limit):
    """Up to ``limit`` (command, config) pairs, round-robin over an evenly
    spaced subset of the commands.  Each command gets a few squares beyond
    its own pattern, as few as reach the limit: enumeration is exponential
    in the extra squares on large alphabets."""
    stride = max(1, len(m.commands) // limit)
    cmds0 = list(m.commands[::stride])

    def base(c):
        return sum(len(p.left) + len(p.right) for p in c.parts)

    for extra in range(1, 9):
        cmds = list(cmds0)
        gens = [configs_matching(m, c, base(c) + extra) for c in cmds]
        out = []
        while gens and len(out) < limit:
            keep_g, keep_c = [], []
            for c, g in zip(cmds, gens):
                w = next(g, None)
                if w is None:
                    continue
                out.append((c, w))
                keep_g.append(g)
                keep_c.append(c)
                if len(out) == limit:
                    break
            gens, cmds = keep_g, keep_c
        if len(out) == limit:
            break
    return out


def _computations(m, w, depth):
    """Every computation of length <= depth from ``w``, as (configs, names)."""
    stack = [([w], [])]
    while stack:
        configs, names = stack.pop()
        yield configs, names
        if len(names) == depth:
            continue
        for c, r in m.successors(configs[-1]):
            stack.append((configs + [r], names + [c.name]))


def test_criterion_03_machine_semantics(idem_pipeline, toy_pipeline):
    with criterion(3, "machine semantics: inversion round-trip, reduced histories keep space"):
        for m in idem_pipeline.machines():
            apps = _spread_applications(m, 1000)
            assert len(apps) == 1000, (m.name, len(apps))
            for c, w in apps:
                r = c.apply(w)
                assert r is not None and c.inverse().apply(r) == w, (m.name, c.name)
        checked = 0
        for m in (toy_pipeline.m3, toy_pipeline.m4, toy_pipeline.m5):
            for u in words_up_to(m.input_letters, 2):
                for configs, names in _computations(m, m.input_config(u), 6):
                    space = max(a_length(c) for c in configs)
                    for i in range(len(names) - 1):
                        if names[i + 1] != inverse_name(names[i]):
                            continue
                        assert configs[i + 2] == configs[i]
                        cut = configs[:i + 1] + configs[i + 3:]
                        assert max(a_length(c) for c in cut) <= space
                        checked += 1
        assert checked > 0


def test_criterion_04_pipeline_certification(certified):
    with criterion(4, "pipeline certification on a^2 = a and the free monoid, n <= 3, bound 40"):
        for name, rep in certified.items():
            assert not rep.inconclusive, (name, [c.line() for c in rep.inconclusive])
            assert not rep.failed, (name, [c.line() for c in rep.failed])
            for check in ("m5.input-equivalence", "m5.left-right-disjoint",
                          "m5.input-witness-constant", "m5.alpha-free-runs-bounded",
                          "m5.omega-free-runs-bounded", "m5.start-state-alpha-free",
                          "m5.input-endpoints"):
                assert rep.check(check).status == PASS, (name, check)


def test_criterion_05_space_relations(certified):
    with criterion(5, "space relations: S <= S', S'2 <= max(S1, n)"):
        for name, rep in certified.items():
            for m, s in rep.S.items():
                sp = rep.S_prime[m]
                for n in range(4):
                    assert s[n] <= sp[n], (name, m, n)
            for n in range(4):
                assert rep.S_prime["M2"][n] <= max(rep.S["M1"][n], n), (name, n)
            assert rep.check("space.S-below-S'").status == PASS
            assert rep.check("space.padding-within-M1").status == PASS


def test_criterion_06_embedding(embedding):
    with criterion(6, "embedding: equality in S matches H on |u|, |v| <= 3, witness space"):
        assert embedding.count(MISMATCH) == 0 and embedding.count(INCONCLUSIVE) == 0
        assert len(embedding.cells) == 6
        for c in embedding.cells:
            assert c.s_equal == c.h_equal and c.status == EQUAL
            assert c.witness_space <= embedding.bound_by_n[max(len(c.u), len(c.v))] + 3
        assert embedding.space_ok


def _p_derivation(rng, fp, m5, length):
    pres = fp.presentation
    left = rng.choice([(), (src("a"),), (ALPHA, P, src("a")), (P,), (src("a"), src("a"))])
    cfg = m5.input_config((yl("a"),) * rng.randint(0, 2))
    right = [HPP_PREFIX + x for x in config_word(cfg)]
    left = list(left)
    w = []
    while left or right:
        side = left if not right or (left and rng.random() < 0.5) else right
        w.append(side.pop(0))
    words, steps = [tuple(w)], []
    for _ in range(length):
        succ = one_step_successors(words[-1], pres, 14)
        if not succ:
            break
        v, s = rng.choice(succ)
        words.append(v)
        steps.append(s)
    return Derivation(words, steps)


def test_criterion_07_free_product_projection(idem_h, idem_pipeline):
    with criterion(7, "free-product projection of 200 P-derivations"):
        t0 = time.time()
        fp = compile_P(idem_h)
        rng = random.Random(7)
        nontrivial = 0
        for _ in range(200):
            d = _p_derivation(rng, fp, idem_pipeline.m5, rng.randint(0, 8))
            assert d.replay(fp.presentation)
            for side, part in (("left", fp.left), ("right", fp.right)):
                pd = fp.project_derivation(d, side)
                assert pd.replay(part)
                assert (pd.start, pd.end) == (fp.project(d.start, side), fp.project(d.end, side))
            nontrivial += bool(d.steps)
        assert nontrivial > 100 and time.time() - t0 < 60


MARKED = parse_presentation("monoid\nletters: A p a b z\nA p = 1\np a = b p\np = z\n", name="marked")
MARKED_KINDS = LetterKinds({"A": ALPHA_K, "p": Q, "z": Q, "a": A_K, "b": A_K}, sources={"a"})
TWO_SWAPS = parse_presentation("monoid\nletters: a b c d\na b = b a\nc d = d c\n", name="swaps")
SWAP_KINDS = LetterKinds({x: A_K for x in "abcd"})


def _random_derivation(rng, p, length):
    lo = 0 if p.kind == MONOID else 1
    words = [tuple(rng.choice(p.letters) for _ in range(rng.randint(lo, 4)))]
    steps = []
    for _ in range(length):
        succ = one_step_successors(words[-1], p, 6)
        if not succ or rng.random() < 0.15:
            words.append(words[-1])
            steps.append(Step(None, FORWARD, 0))
            continue
        v, s = rng.choice(succ)
        words.append(v)
        steps.append(s)
    return Derivation(words, steps)


def test_criterion_08_trapezium_structure(embedding, idem_h):
    with criterion(8, "trapezia: round trip, band partition, detectors, time separation"):
        rng = random.Random(8)
        pool = [(MARKED, MARKED_KINDS), (TWO_SWAPS, SWAP_KINDS)] + \
            [(p, LetterKinds({x: A_K for x in p.letters})) for p in corpus().values()]
        divisible = 0
        for i in range(1000):
            p, kinds = pool[i % len(pool)]
            d = _random_derivation(rng, p, rng.randint(0, 8))
            t = build_trapezium(d, p)
            assert trapezium_to_derivation(t) == d
            bands = trace_bands(t, kinds)
            for K in (Q, ALPHA_K, OMEGA_K, A_K):
                mine = [b for b in bands if b.kind == K]
                assert sorted(sorted(b.crossings) for b in mine) == band_partition(t, kinds, K)
            path = is_divisible(t)
            if path is not None:
                s = time_separate(t, path)
                assert (s.bottom, s.top, s.height) == (t.bottom, t.top, t.height)
                assert trapezium_to_derivation(s).replay(p)
                assert type_vector(s, kinds) == type_vector(t, kinds)
                divisible += 1
        assert divisible > 0
        assert len(embedding.witnesses) == 6
        for d in embedding.witnesses.values():
            t = build_trapezium(d, idem_h.presentation)
            assert cap_cell_violations(t) == [] and omega_band_violations(t) == []


def test_criterion_09_type_order():
    with criterion(9, "compare_types is a strict total order on k <= 2, entries <= 2"):
        t0 = time.time()
        triples = list(itertools.product(range(3), repeat=3))
        vectors = [(a, b) for a in triples for b in triples]
        # sort once, then every pairwise comparison must agree with the positions;
        # agreement with an integer order gives transitivity for all triples at once
        order = sorted(vectors, key=type_key)
        pos = {v: i for i, v in enumerate(order)}
        for a in vectors:
            assert compare_types(a, a) == 0
            for b in vectors:
                c = compare_types(a, b)
                if a != b:
                    assert c != 0 and c == -compare_types(b, a)
                assert c == (pos[a] > pos[b]) - (pos[a] < pos[b])
        small = [v for v in vectors if max(max(x) for x in v) <= 1]
        for a, b, c in itertools.product(small, repeat=3):
            if compare_types(a, b) < 0 and compare_types(b, c) < 0:
                assert compare_types(a, c) < 0
        assert time.time() - t0 < 10


CLI_RUNS = [
    ["validate", "--corpus", "idempotent"],
    ["derive", "--corpus", "bicyclic", "bcbc", "1"],
    ["space", "--corpus", "commutative", "ab", "ba"],
    ["sfn", "--corpus", "free", "--n", "3"],
    ["simulate", "--corpus", "idempotent", "--input", "aa'"],
    ["pipeline", "--corpus", "idempotent", "--through", "m3", "--m0-bound", "2"],
    ["compile", "--corpus", "idempotent", "--m0-bound", "2", "--emit", "hprime"],
    ["embed-check", "--corpus", "idempotent", "--m0-bound", "2", "--n", "1", "--max", "4", "--max-h", "4"],
    ["trapezium", "--corpus", "idempotent", "--m0-bound", "2", "a", "a"],
    ["render", "--corpus", "idempotent", "--m0-bound", "2", "a", "a"],
]


def test_criterion_10_determinism(tmp_path, capsys):
    with criterion(10, "determinism: CLI reports byte-identical across runs"):
        for k, argv in enumerate(CLI_RUNS):
            outs = []
            for run in ("first", "second"):
                d = tmp_path / f"{k}-{run}"
                code = main(argv + ["--out", str(d)])
                text = capsys.readouterr().out
                files = {f.name: f.read_bytes() for f in sorted(d.iterdir())}
                outs.append((code, text, files))
            assert outs[0] == outs[1], argv
            assert outs[0][0] in (0, 2), (argv, outs[0][1])
