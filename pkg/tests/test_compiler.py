import pytest
from hypothesis import given, settings, strategies as st

from semispace.compiler import (ALPHA, EQUAL, HPP_PREFIX, OMEGA, P, SEPARATED, AlphabetClash, GeneratorClash,
                                compile_H, compile_Hprime, compile_P, config_word,
                                embedding_check, entry_derivation, free_product, input_computation,
                                phi, phi_witness, psi, rename, src, st as state_letter,
                                word_config)
from semispace.corpus import build_table_m0, presentation
from semispace.machine import Tape
from semispace.pipeline.certify import build_pipeline
from semispace.pipeline.onetape import START, yl
from semispace.words import (Derivation, format_presentation, parse_presentation,
                             one_step_successors, validate_presentation)

IDEM = presentation("idempotent")


@pytest.fixture(scope="module")
def m5():
    return build_pipeline(build_table_m0(IDEM, 4), monoid=False).m5


@pytest.fixture(scope="module")
def h(m5):
    return compile_H(m5, IDEM.letters)


class TestH:
    def test_blocks(self, h, m5):
        assert len(h.machine_block) == len(m5.commands)
        assert len(h.presentation.relations) == len(m5.commands) + len(IDEM.letters) + 2
        aux = [h.provenance[i] for i in h.aux_block]
        assert aux == ["aux:pa=a", "aux:alpha-p", "aux:p-start"]

    def test_aux_relations(self, h):
        pres = h.presentation
        assert pres.relation(h.aux_index("aux:pa=a")) == ((P, src("a")), (yl("a"), P))
        assert pres.relation(h.aux_index("aux:alpha-p")) == ((ALPHA, P), ())
        assert pres.relation(h.aux_index("aux:p-start")) == ((P,), (state_letter(START), OMEGA))

    def test_valid_monoid(self, h):
        assert validate_presentation(h.presentation) == []

    def test_clash(self, m5):
        with pytest.raises(AlphabetClash):
            compile_H(m5, ("b",))


class TestHprime:
    def test_no_empty_sides(self, m5):
        hp = compile_Hprime(m5)
        assert all(r.lhs and r.rhs for r in hp.relations)
        assert len(hp.relations) == len(m5.commands)

    def test_relation_is_backward_command(self, m5, h):
        # V -> V' is the backward use of V' = V
        w = m5.input_config((yl("a"),))
        (c, r), *_ = m5.successors(w)
        word = config_word(w)
        nxt = {v for v, s in one_step_successors(word, h.presentation)
               if s.rel == h.command_relation[c.name]}
        assert config_word(r) in nxt


class TestFreeProduct:
    def test_split_and_projection(self, h):
        fp = compile_P(h)
        assert fp.split == len(h.presentation.relations)
        assert fp.side_of(0) == "left" and fp.side_of(fp.split) == "right"
        mixed = (src("a"), fp.right.letters[0], ALPHA)
        assert fp.project(mixed, "left") == (src("a"), ALPHA)
        assert fp.project(mixed, "right") == (fp.right.letters[0],)

    def test_clash(self, m5):
        hp = compile_Hprime(m5)
        with pytest.raises(GeneratorClash):
            free_product(hp, hp)
        assert set(rename(hp).letters).isdisjoint(hp.letters)

    def test_text_is_stable(self, h):
        fp = compile_P(h)
        text = format_presentation(fp.presentation)
        again = parse_presentation(text)
        assert again.relations == fp.presentation.relations
        assert format_presentation(again) == text


class TestWordMaps:
    def test_phi(self):
        assert phi(()) == () and phi("ab") == (src("a"), src("b"))

    def test_psi(self):
        w = (ALPHA, yl("a"), P, src("b"))
        assert psi(w, "ab") == ("a", "b")

    def test_config_words(self, m5):
        w = (Tape((yl("a"),), START, ()),)
        assert config_word(w) == (ALPHA, yl("a"), state_letter(START), OMEGA)
        assert word_config(config_word(w), m5.states) == w
        assert word_config((ALPHA, OMEGA), m5.states) is None

    def test_entry_derivation(self, h):
        d = entry_derivation(h, ("a",))
        assert d.replay(h.presentation)
        assert d.start == (src("a"),)
        assert d.end == (ALPHA, yl("a"), state_letter(START), OMEGA)

    def test_psi_is_constant_along_aux_steps(self, h):
        d = entry_derivation(h, ("a", "a"))
        assert {psi(w, "a") for w in d.words} == {("a", "a")}


class TestWitnesses:
    def test_phi_witness(self, h, m5):
        comp = input_computation(m5, ("a",), ("a", "a"), 24)
        assert comp is not None
        d = phi_witness(h, ("a",), ("a", "a"), comp)
        assert d.replay(h.presentation) and d.start == phi("a") and d.end == phi("aa")

    def test_embedding(self, h):
        rep = embedding_check(IDEM, h, 2, 6, 6, machine_bound=24)
        assert rep.count(EQUAL) == 3 and not rep.mismatches and rep.space_ok
        assert "[embedding]" in rep.render()


def test_separated_words_in_free_source():
    free = presentation("free")
    m5 = build_pipeline(build_table_m0(free, 2), monoid=True).m5
    h = compile_H(m5, free.letters)
    rep = embedding_check(free, h, 1, 4, 4, machine_bound=20)
    assert rep.count(SEPARATED) == 1 and rep.count(EQUAL) == 2


@pytest.fixture(scope="module")
def fp(h):
    return compile_P(h)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_projection_of_p_derivations_replays(fp, m5, data):
    pres = fp.presentation
    # interleave a word of H with a configuration word of the renamed copy
    left = list(data.draw(st.sampled_from([(src("a"),), (ALPHA, P, src("a")), (P,), ()])))
    right = [HPP_PREFIX + x for x in config_word(m5.input_config((yl("a"),) * data.draw(st.integers(0, 2))))]
    w = []
    while left or right:
        side = left if not right or (left and data.draw(st.booleans())) else right
        w.append(side.pop(0))
    w = tuple(w)
    words, steps = [w], []
    for _ in range(data.draw(st.integers(0, 8))):
        succ = one_step_successors(words[-1], pres, 10)
        if not succ:
            break
        v, s = data.draw(st.sampled_from(succ))
        words.append(v)
        steps.append(s)
    d = Derivation(words, steps)
    for side, part in (("left", fp.left), ("right", fp.right)):
        pd = fp.project_derivation(d, side)
        assert pd.replay(part)
        assert pd.start == fp.project(d.start, side) and pd.end == fp.project(d.end, side)
