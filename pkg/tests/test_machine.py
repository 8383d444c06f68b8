import pytest
from hypothesis import given, settings, strategies as st

from semispace.corpus import build_table_m0, m0_inputs, presentation, prime
from semispace.machine import (ACCEPTED, EQUIVALENCE, HALTED, REJECTED, STUCK, Command, Computation,
                               Machine, MachineError, NondeterministicChoice, Part, Tape, TapeSpec,
                               a_length, accepts, computation_between, configs_matching,
                               format_machine, generalized_space, inverse_name, is_reachable,
                               is_symmetric, parse_machine, reachable_pairs, replay, run,
                               space_complexity, symmetrize, validate_machine)
from semispace.pipeline.certify import build_pipeline

ERASER_TEXT = """\
machine eraser
flavor: recognizing
tapes: 1
tape 1 letters: a b
tape 1 states: q f
input: a b
start: q
accept: f
command erase.a: a q -> q
command erase.b: b q -> q
command done: α_1 q ω_1 -> α_1 f ω_1
"""

ERASER = parse_machine(ERASER_TEXT)
IDEM = presentation("idempotent")


@pytest.fixture(scope="module")
def toy():
    m0 = build_table_m0(IDEM, 4)
    return build_pipeline(m0, monoid=False, through="m3")


def cfg(*tapes):
    return tuple(Tape(tuple(u), q, tuple(v)) for u, q, v in tapes)


class TestApplyCommand:
    def test_pad_appends_one_star(self, toy):
        m2 = toy.m2
        w = m2.input_config(("a",))
        out = m2.by_name["pad"].apply(w)
        assert len(out[-1].left) == 1
        assert a_length(out) == a_length(w) + 1
        assert out[:-1] == w[:-1]

    def test_anchored_empty_part_needs_empty_tape(self):
        p = Part((), "q", (), (), "q", (), True, True)
        assert p.apply(Tape(("a",), "q", ())) is None
        assert p.apply(Tape((), "q", ())) == Tape((), "q", ())

    def test_identity_command(self):
        c = Command("id", (Part((), "q", (), (), "q", ()),))
        w = cfg(("ab", "q", "b"))
        assert c.apply(w) == w

    def test_wrong_state(self):
        assert ERASER.by_name["erase.a"].apply(cfg(("a", "f", ""))) is None


class TestEnabled:
    def test_stage_one_enables_pad_and_begin(self, toy):
        m2 = toy.m2
        names = {c.name for c, _ in m2.successors(m2.input_config(("a", "a")))}
        assert names == {"pad", "begin"}


class TestRun:
    def test_accept_configuration_runs_zero_steps(self):
        w = cfg(("", "f", ""))
        comp = run(ERASER, w, 10, 10)
        assert comp.stop == ACCEPTED and len(comp) == 0

    def test_eraser(self):
        comp = run(ERASER, ERASER.input_config(("a", "a")), 10, 100)
        assert comp.history == ["erase.a", "erase.a", "done"]
        assert comp.stop == ACCEPTED and comp.space == 2 and replay(ERASER, comp)

    def test_deterministic(self):
        u = ("a", "b", "a")
        c1 = run(ERASER, ERASER.input_config(u), 10, 100)
        c2 = run(ERASER, ERASER.input_config(u), 10, 100)
        assert c1.configs == c2.configs and c1.history == c2.history

    def test_nondeterminism_is_reported(self, toy):
        with pytest.raises(NondeterministicChoice):
            run(toy.m2, toy.m2.input_config(("a",)), 10, 100)

    def test_m2_stage_one_history(self, toy):
        m2 = toy.m2
        w = m2.input_config(("a",))
        target = m2.by_name["begin"].apply(m2.by_name["pad"].apply(m2.by_name["pad"].apply(w)))
        comp = computation_between(m2, w, target, 12, least_space=False)
        assert comp.history == ["pad", "pad", "begin"]

    def test_step_bound(self):
        comp = run(ERASER, ERASER.input_config(("a", "a", "a")), 10, 1)
        assert comp.stop == "step-bound" and len(comp) == 1


class TestAccepts:
    EMPTY = Machine(tapes=(TapeSpec(("a",), ("s", "f")),), input_letters=("a",), start=("s",),
                    accept=("f",), commands=())

    def test_empty_machine_on_empty_input(self):
        assert accepts(self.EMPTY, (), 4) == REJECTED

    def test_empty_machine_on_letters_gets_stuck(self):
        assert accepts(self.EMPTY, ("a",), 4) == STUCK

    def test_table_recognizer(self):
        m0 = build_table_m0(IDEM, 4)
        assert accepts(m0, ("a", prime("a")), 10) == ACCEPTED
        assert accepts(m0, ("a", "a", prime("a")), 10) == ACCEPTED
        assert accepts(m0, ("a",), 10) == REJECTED

    def test_table_recognizer_against_classes(self):
        # in the idempotent semigroup every two nonempty words over one letter are equal
        m0 = build_table_m0(IDEM, 4)
        for w in m0_inputs(IDEM, 4):
            k = sum(1 for x in w if x == "a")
            expected = ACCEPTED if k >= 1 and len(w) - k >= 1 else REJECTED
            assert accepts(m0, w, 10) == expected, w


class TestReachability:
    def test_pairs_contain_the_diagonal(self):
        w = ERASER.input_config(("a", "b"))
        pairs = reachable_pairs(ERASER, 2, 4, domain=[w])
        assert pairs[(w, w)] == 2

    def test_symmetric_machine_gives_symmetric_pairs(self, toy):
        m3 = toy.m3
        seeds = [m3.input_config(u) for u in [("a",), ("a", "a")]]
        pairs = reachable_pairs(m3, 12, 12, domain=seeds)
        for (x, y), s in pairs.items():
            if x in seeds and y in seeds:
                assert pairs[(y, x)] == s

    def test_m1_start_with_data_on_work_tape_is_unreachable(self, toy):
        m1 = toy.m1
        w = m1.input_config(("a",))
        t2 = m1.tapes[1]
        bad = (w[0], Tape((t2.letters[0],), w[1].state, ())) + w[2:]
        assert not is_reachable(m1, bad, 8, inputs=[(), ("a",), ("a", "a")])
        assert is_reachable(m1, w, 8, inputs=[("a",)])


class TestSpace:
    def test_eraser(self):
        t = space_complexity(ERASER, 4, 10)
        assert t.values == {n: n for n in range(5)}

    def test_S_below_S_prime(self, toy):
        inputs = [(), ("a",), ("a", "a")]
        for m in (toy.m1, toy.m2):
            s = space_complexity(m, 2, 12, inputs=inputs)
            sp = generalized_space(m, 2, 12)
            assert all(s[n] <= sp[n] for n in range(3)), m.name

    def test_padding_stays_within_m1(self, toy):
        inputs = [(), ("a",), ("a", "a")]
        s1 = space_complexity(toy.m1, 2, 12, inputs=inputs)
        sp2 = generalized_space(toy.m2, 2, 12)
        assert all(sp2[n] <= max(s1[n], n) for n in range(3))


class TestText:
    def test_round_trip(self, toy):
        for m in (ERASER, toy.m1, toy.m2):
            assert parse_machine(format_machine(m)) == m

    def test_validation(self):
        assert validate_machine(ERASER) == []
        bad = ERASER.replace(commands=ERASER.commands + (Command("x", (Part(("z",), "q", (), (), "q", ()),)),))
        assert any("not a letter" in p for p in validate_machine(bad))

    def test_parse_error(self):
        with pytest.raises(MachineError):
            parse_machine(ERASER_TEXT.replace("a q -> q", "a b -> q"))

    def test_symmetrize(self):
        s = symmetrize(ERASER)
        assert is_symmetric(s) and s.flavor == EQUIVALENCE
        assert inverse_name(inverse_name("done")) == "done"


# properties -------------------------------------------------------------------

def _applications(m, n):
    out = []
    for c in m.commands:
        out += [(c, w) for w in configs_matching(m, c, n)]
    return out


@pytest.fixture(scope="module")
def applications(toy):
    return {m.name: _applications(m, 3) for m in (ERASER, toy.m1, toy.m2, toy.m3)}


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_inverse_commands_undo(applications, data):
    name = data.draw(st.sampled_from(sorted(applications)))
    c, w = data.draw(st.sampled_from(applications[name]))
    w2 = c.apply(w)
    assert w2 is not None and c.inverse().apply(w2) == w
    assert c.inverse().inverse() == c


def reduce_history(m, comp):
    """Cancel adjacent command/inverse pairs."""
    configs, names = [comp.configs[0]], []
    for name, nxt in zip(comp.history, comp.configs[1:]):
        if names and names[-1] == inverse_name(name):
            names.pop()
            configs.pop()
        else:
            names.append(name)
            configs.append(nxt)
    return Computation(configs, names)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_reduced_computations_replay_and_stay_within_space(toy, data):
    m3 = toy.m3
    w = m3.input_config(tuple(data.draw(st.lists(st.just("a"), max_size=2))))
    configs, names = [w], []
    for _ in range(data.draw(st.integers(0, 6))):
        succ = m3.successors(configs[-1])
        if not succ:
            break
        c, nxt = data.draw(st.sampled_from(succ))
        configs.append(nxt)
        names.append(c.name)
    comp = Computation(configs, names)
    assert replay(m3, comp)
    red = reduce_history(m3, comp)
    assert replay(m3, red) and red.end == comp.end and red.space <= comp.space
    assert all(red.history[i] != inverse_name(red.history[i + 1]) for i in range(len(red.history) - 1))


def test_halted_runs_cannot_continue():
    comp = run(ERASER, cfg(("a", "f", "")), 10, 10)
    assert comp.stop == HALTED
