import pytest
from hypothesis import given, settings, strategies as st

from semispace.corpus import corpus
from semispace.words import (BACKWARD, FORWARD, MONOID, SEMIGROUP, Alphabet, BadIndex, Derivation,
                             NoMatch, Presentation, PresentationError, Relation, Step,
                             apply_relation, format_derivation, format_presentation, format_word,
                             one_step_successors, parse_derivation, parse_presentation,
                             shortlex_compare, shortlex_successor, tokenize, validate_presentation,
                             words_up_to)

COMM = parse_presentation("monoid\nletters: a b\na b = b a\n")
BICYCLIC = parse_presentation("monoid\nletters: b c\nb c = 1\n")
IDEM = parse_presentation("semigroup\nletters: a\na a = a\n")


def w(s):
    return tuple(s)


class TestApplyRelation:
    def test_swap(self):
        assert apply_relation(w("ab"), COMM, 0, FORWARD, 0) == w("ba")

    def test_monoid_deletion(self):
        assert apply_relation(w("bcbc"), BICYCLIC, 0, FORWARD, 0) == w("bc")

    def test_insertion_at_end(self):
        p = parse_presentation("monoid\nletters: a b c\nb c = 1\n")
        assert apply_relation(w("a"), p, 0, BACKWARD, 1) == w("abc")

    def test_no_match(self):
        with pytest.raises(NoMatch):
            apply_relation(w("ba"), COMM, 0, FORWARD, 0)

    def test_bad_index(self):
        with pytest.raises(BadIndex):
            apply_relation(w("ab"), COMM, 3, FORWARD, 0)
        with pytest.raises(BadIndex):
            apply_relation(w("ab"), COMM, 0, FORWARD, 7)


class TestSuccessors:
    def test_swap(self):
        assert [v for v, _ in one_step_successors(w("ab"), COMM, 5)] == [w("ba")]

    def test_empty_word_only_insertion_fits(self):
        assert [v for v, _ in one_step_successors((), BICYCLIC, 2)] == [w("bc")]

    def test_bound_excludes_growth(self):
        # every (relation, direction, position) triple
        expected = set()
        for d in (FORWARD, BACKWARD):
            for pos in range(4):
                try:
                    v = apply_relation(w("aaa"), IDEM, 0, d, pos)
                except (NoMatch, BadIndex):
                    continue
                if len(v) <= 3:
                    expected.add(v)
        assert {v for v, _ in one_step_successors(w("aaa"), IDEM, 3)} == expected == {w("aa")}

    def test_order_is_position_major(self):
        succ = one_step_successors(w("abab"), COMM, 4)
        assert [s.pos for _, s in succ] == sorted(s.pos for _, s in succ)


class TestValidate:
    def test_trivial_relation(self):
        p = Presentation(MONOID, Alphabet("a"), (Relation(w("a"), w("a")),))
        assert any("trivial" in x for x in validate_presentation(p))

    def test_empty_side_in_semigroup(self):
        p = Presentation(SEMIGROUP, Alphabet("a"), (Relation(w("a"), ()),))
        assert any("empty" in x for x in validate_presentation(p))

    def test_ok(self):
        assert validate_presentation(COMM) == []

    def test_parser_rejects_unknown_letters(self):
        with pytest.raises(PresentationError):
            parse_presentation("monoid\nletters: a\na = b\n")


class TestShortlex:
    A = Alphabet("ab")

    def test_length_dominates(self):
        assert shortlex_compare(w("b"), w("aa"), self.A) < 0

    def test_lexicographic(self):
        assert shortlex_compare(w("ab"), w("ba"), self.A) < 0

    def test_equal(self):
        assert shortlex_compare((), (), self.A) == 0

    def test_successors(self):
        assert shortlex_successor((), 2, self.A) == w("a")
        assert shortlex_successor(w("b"), 2, self.A) == w("aa")
        assert shortlex_successor(w("bb"), 2, self.A) is None

    def test_successor_walk_visits_everything_once(self):
        seen, u = [], ()
        while u is not None:
            seen.append(u)
            u = shortlex_successor(u, 3, self.A)
        assert seen == list(words_up_to(self.A, 3))
        assert len(set(seen)) == 1 + 2 + 4 + 8


class TestText:
    def test_presentation_round_trip(self):
        for p in corpus().values():
            assert parse_presentation(format_presentation(p)).relations == p.relations

    def test_empty_word_prints_as_one(self):
        assert format_word(()) == "1"
        assert tokenize("1", COMM.alphabet) == ()

    def test_multi_char_tokens(self):
        a = Alphabet(["src:a", "yl:a"])
        assert tokenize("src:a yl:a", a) == ("src:a", "yl:a")
        assert format_word(("src:a", "yl:a"), a) == "src:a yl:a"

    def test_derivation_round_trip(self):
        d = Derivation([w("ab"), w("ba"), w("ba")], [Step(0, FORWARD, 0), Step(None, FORWARD, 0)])
        text = format_derivation(d, COMM.alphabet)
        assert parse_derivation(text, COMM.alphabet) == d
        assert text.splitlines()[1] == "ba  # 0+ @0"


# properties ------------------------------------------------------------------

PRESENTATIONS = list(corpus().values())


@st.composite
def word_and_presentation(draw):
    p = draw(st.sampled_from(PRESENTATIONS))
    letters = st.sampled_from(list(p.letters))
    lo = 0 if p.kind == MONOID else 1
    return p, tuple(draw(st.lists(letters, min_size=lo, max_size=6)))


@settings(max_examples=200, deadline=None)
@given(word_and_presentation())
def test_steps_are_reversible(pw):
    p, u = pw
    flip = {FORWARD: BACKWARD, BACKWARD: FORWARD}
    for v, s in one_step_successors(u, p, 8):
        assert apply_relation(v, p, s.rel, flip[s.direction], s.pos) == u


@settings(max_examples=200, deadline=None)
@given(word_and_presentation())
def test_successor_graph_is_symmetric(pw):
    p, u = pw
    for v, _ in one_step_successors(u, p, 7):
        assert u in {x for x, _ in one_step_successors(v, p, 7)}


@settings(max_examples=200, deadline=None)
@given(word_and_presentation())
def test_semigroup_steps_never_empty_the_word(pw):
    p, u = pw
    if p.kind == SEMIGROUP:
        assert all(v for v, _ in one_step_successors(u, p, 8))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.sampled_from("ab"), max_size=4), st.lists(st.sampled_from("ab"), max_size=4),
       st.lists(st.sampled_from("ab"), max_size=4))
def test_shortlex_is_a_total_order(u, v, x):
    A = Alphabet("ab")
    u, v, x = tuple(u), tuple(v), tuple(x)
    assert (shortlex_compare(u, v, A) == 0) == (u == v)
    assert shortlex_compare(u, v, A) == -shortlex_compare(v, u, A)
    if shortlex_compare(u, v, A) < 0 and shortlex_compare(v, x, A) < 0:
        assert shortlex_compare(u, x, A) < 0
