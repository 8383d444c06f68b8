"""Words, presentations and single derivation steps.

A word is a tuple of letter tokens; the empty tuple is the empty word,
written ``1`` in text.  Presentations keep their relations in a fixed
order so that relation indices are stable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Sequence

Word = tuple

FORWARD = "forward"
BACKWARD = "backward"

MONOID = "monoid"
SEMIGROUP = "semigroup"

RESERVED_TOKENS = frozenset({"1", "=", "->", ";", "|"})


class PresentationError(ValueError):
    """Raised for malformed presentation text or ill-formed data."""


class NoMatch(ValueError):
    """The requested relation side does not occur at the position."""


class BadIndex(IndexError):
    """A relation index outside the presentation."""


class Alphabet:
    """An ordered, duplicate-free set of letter tokens."""

    __slots__ = ("letters", "_index")

    def __init__(self, letters: Iterable[str]):
        letters = tuple(letters)
        if not letters:
            raise PresentationError("alphabet must be nonempty")
        index = {}
        for i, a in enumerate(letters):
            if not isinstance(a, str) or not a or any(c.isspace() for c in a):
                raise PresentationError(f"bad letter token {a!r}")
            if a in RESERVED_TOKENS:
                raise PresentationError(f"letter token {a!r} is reserved")
            if a in index:
                raise PresentationError(f"duplicate letter {a!r}")
            index[a] = i
        self.letters = letters
        self._index = index

    def __contains__(self, a):
        return a in self._index

    def __iter__(self):
        return iter(self.letters)

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        return f"Alphabet({' '.join(self.letters)})"

    def index(self, a: str) -> int:
        return self._index[a]

    def check(self, w: Sequence[str]) -> None:
        for a in w:
            if a not in self._index:
                raise PresentationError(f"letter {a!r} not in alphabet")


class Relation(NamedTuple):
    lhs: Word
    rhs: Word


class Step(NamedTuple):
    """One application of relation ``rel`` at ``pos``.

    ``forward`` replaces an occurrence of the lhs by the rhs, ``backward``
    the other way round.  A step with ``rel`` None is a trivial transition.
    """

    rel: int | None
    direction: str
    pos: int

    def key(self):
        return (self.pos, -1 if self.rel is None else self.rel,
                0 if self.direction == FORWARD else 1)


def sides(rel: Relation, direction: str) -> tuple[Word, Word]:
    """Return (replaced, replacement) for a relation used in a direction."""
    if direction == FORWARD:
        return rel.lhs, rel.rhs
    if direction == BACKWARD:
        return rel.rhs, rel.lhs
    raise ValueError(f"bad direction {direction!r}")


@dataclass(frozen=True)
class Presentation:
    kind: str
    alphabet: Alphabet
    relations: tuple = ()
    name: str = ""
    tags: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.kind not in (MONOID, SEMIGROUP):
            raise PresentationError(f"kind must be monoid or semigroup, not {self.kind!r}")
        rels = tuple(Relation(tuple(r[0]), tuple(r[1])) for r in self.relations)
        object.__setattr__(self, "relations", rels)

    @property
    def letters(self):
        return self.alphabet.letters

    def relation(self, i: int) -> Relation:
        if not isinstance(i, int) or i < 0 or i >= len(self.relations):
            raise BadIndex(f"relation index {i} out of range")
        return self.relations[i]

    @cached_property
    def _successor_index(self):
        # per letter: (rel, direction, side, other) sorted by (rel, direction);
        # insertions of an empty side are merged into every list
        by_first: dict[str, list] = {}
        inserts = []
        seen = set()
        for i, r in enumerate(self.relations):
            if r.lhs == r.rhs:
                continue
            for d in (FORWARD, BACKWARD):
                side, other = sides(r, d)
                if (side, other) in seen:
                    continue
                seen.add((side, other))
                entry = (i, d, side, other)
                if side:
                    by_first.setdefault(side[0], []).append(entry)
                else:
                    inserts.append(entry)
        merged = {a: sorted(lst + inserts, key=_entry_key) for a, lst in by_first.items()}
        return merged, inserts


def _entry_key(e):
    return (e[0], 0 if e[1] == FORWARD else 1)


def apply_relation(w: Word, p: Presentation, i: int, direction: str, pos: int) -> Word:
    """Apply relation ``i`` of ``p`` to ``w`` at ``pos``."""
    side, other = sides(p.relation(i), direction)
    if not isinstance(pos, int) or pos < 0 or pos > len(w):
        raise BadIndex(f"position {pos} out of range for a word of length {len(w)}")
    if pos + len(side) > len(w) or tuple(w[pos:pos + len(side)]) != side:
        raise NoMatch(f"relation {i} ({direction}) does not match at position {pos}")
    return tuple(w[:pos]) + other + tuple(w[pos + len(side):])


def one_step_successors(w: Word, p: Presentation, bound: int | None = None) -> list[tuple[Word, Step]]:
    """All words one step from ``w`` with length at most ``bound``.

    Results are ordered position-major, then by relation index and
    direction; a word reachable in several ways is listed once, with its
    first step.
    """
    w = tuple(w)
    merged, inserts = p._successor_index
    n = len(w)
    out = []
    seen = set()
    for pos in range(n + 1):
        cands = merged.get(w[pos], inserts) if pos < n else inserts
        for i, d, side, other in cands:
            m = len(side)
            if m and w[pos:pos + m] != side:
                continue
            if bound is not None and n - m + len(other) > bound:
                continue
            v = w[:pos] + other + w[pos + m:]
            if v == w or v in seen:
                continue
            seen.add(v)
            out.append((v, Step(i, d, pos)))
    return out


def neighbours(w: Word, p: Presentation, bound: int | None = None) -> Iterator[Word]:
    """Successor words only, without step records (hot path)."""
    merged, inserts = p._successor_index
    n = len(w)
    for pos in range(n + 1):
        cands = merged.get(w[pos], inserts) if pos < n else inserts
        for _, _, side, other in cands:
            m = len(side)
            if m and w[pos:pos + m] != side:
                continue
            if bound is not None and n - m + len(other) > bound:
                continue
            yield w[:pos] + other + w[pos + m:]


def validate_presentation(p: Presentation) -> list[str]:
    """Return a list of violations; an empty list means well formed."""
    problems = []
    for i, r in enumerate(p.relations):
        for side in r:
            for a in side:
                if a not in p.alphabet:
                    problems.append(f"relation {i}: unknown letter {a!r}")
        if r.lhs == r.rhs:
            problems.append(f"relation {i}: trivial relation")
        if p.kind == SEMIGROUP and (not r.lhs or not r.rhs):
            problems.append(f"relation {i}: empty side in a semigroup presentation")
    return problems


def shortlex_compare(u: Sequence[str], v: Sequence[str], alphabet: Alphabet) -> int:
    """-1, 0 or 1 as ``u`` is less than, equal to or greater than ``v``."""
    alphabet.check(u)
    alphabet.check(v)
    if len(u) != len(v):
        return -1 if len(u) < len(v) else 1
    for a, b in zip(u, v):
        if a != b:
            return -1 if alphabet.index(a) < alphabet.index(b) else 1
    return 0


def shortlex_key(alphabet: Alphabet):
    return lambda w: (len(w), tuple(alphabet.index(a) for a in w))


def shortlex_successor(u: Sequence[str], max_len: int, alphabet: Alphabet) -> Word | None:
    """The next word after ``u`` in shortlex order, or None past ``max_len``."""
    alphabet.check(u)
    letters = alphabet.letters
    w = list(u)
    i = len(w) - 1
    while i >= 0:
        j = alphabet.index(w[i])
        if j + 1 < len(letters):
            w[i] = letters[j + 1]
            return tuple(w)
        w[i] = letters[0]
        i -= 1
    if len(w) + 1 > max_len:
        return None
    return (letters[0],) * (len(w) + 1)


def words_up_to(alphabet: Alphabet | Sequence[str], n: int, nonempty: bool = False) -> Iterator[Word]:
    """All words of length at most ``n`` in shortlex order."""
    letters = tuple(alphabet)
    frontier = [()]
    if not nonempty:
        yield ()
    for _ in range(n):
        nxt = []
        for w in frontier:
            for a in letters:
                v = w + (a,)
                nxt.append(v)
                yield v
        frontier = nxt


@dataclass
class Derivation:
    """Words w_0 .. w_t with the step leading from each word to the next."""

    words: list
    steps: list

    def __post_init__(self):
        if len(self.words) != len(self.steps) + 1:
            raise ValueError("a derivation has one more word than steps")

    @property
    def start(self):
        return self.words[0]

    @property
    def end(self):
        return self.words[-1]

    @property
    def space(self) -> int:
        return max(len(w) for w in self.words)

    def __len__(self):
        return len(self.steps)

    def replay(self, p: Presentation) -> bool:
        """True when every step really produces the next word."""
        for w, s, v in zip(self.words, self.steps, self.words[1:]):
            if s.rel is None:
                if w != v:
                    return False
                continue
            try:
                if apply_relation(w, p, s.rel, s.direction, s.pos) != v:
                    return False
            except (NoMatch, BadIndex):
                return False
        return True

    def reversed(self) -> "Derivation":
        flip = {FORWARD: BACKWARD, BACKWARD: FORWARD}
        steps = [Step(s.rel, flip[s.direction], s.pos) for s in reversed(self.steps)]
        return Derivation(list(reversed(self.words)), steps)


# text format -----------------------------------------------------------

def tokenize(text: str, alphabet: Alphabet) -> Word:
    """Read a word: ``1`` is empty, whitespace separates tokens, otherwise
    letters are matched greedily by longest token."""
    text = text.strip()
    if text in ("", "1"):
        return ()
    if any(c.isspace() for c in text):
        w = tuple(text.split())
        alphabet.check(w)
        return w
    longest = max(len(a) for a in alphabet)
    out = []
    i = 0
    while i < len(text):
        for k in range(min(longest, len(text) - i), 0, -1):
            if text[i:i + k] in alphabet:
                out.append(text[i:i + k])
                i += k
                break
        else:
            raise PresentationError(f"cannot read {text[i:]!r} with letters {' '.join(alphabet)}")
    return tuple(out)


def format_word(w: Sequence[str], alphabet: Alphabet | None = None) -> str:
    """Inverse of :func:`tokenize`; letters are run together only when that
    cannot be misread."""
    if not w:
        return "1"
    short = alphabet.letters if alphabet is not None else w
    if all(len(a) == 1 for a in short):
        return "".join(w)
    return " ".join(w)


def parse_presentation(text: str, name: str = "") -> Presentation:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] not in (MONOID, SEMIGROUP):
        raise PresentationError("first line must be 'monoid' or 'semigroup'")
    kind = lines[0]
    if len(lines) < 2 or not lines[1].startswith("letters:"):
        raise PresentationError("second line must be 'letters: ...'")
    alphabet = Alphabet(lines[1][len("letters:"):].split())
    rels = []
    for ln in lines[2:]:
        if ln.count("=") != 1:
            raise PresentationError(f"relation line needs exactly one '=': {ln!r}")
        lhs, rhs = ln.split("=")
        rels.append(Relation(tokenize(lhs, alphabet), tokenize(rhs, alphabet)))
    p = Presentation(kind, alphabet, tuple(rels), name=name)
    problems = validate_presentation(p)
    if problems:
        raise PresentationError("; ".join(problems))
    return p


def format_presentation(p: Presentation) -> str:
    out = [p.kind, "letters: " + " ".join(p.letters)]
    for r in p.relations:
        out.append(f"{format_word(r.lhs, p.alphabet)} = {format_word(r.rhs, p.alphabet)}")
    return "\n".join(out) + "\n"


def format_derivation(d: Derivation, alphabet: Alphabet | None = None) -> str:
    """One word per line; every word after the first is annotated with the
    step that produced it: ``# <relation><+|-> @<position>``."""
    out = [format_word(d.words[0], alphabet)]
    for w, s in zip(d.words[1:], d.steps):
        tag = "-" if s.rel is None else f"{s.rel}{'+' if s.direction == FORWARD else '-'}"
        out.append(f"{format_word(w, alphabet)}  # {tag} @{s.pos}")
    return "\n".join(out) + "\n"


def parse_derivation(text: str, alphabet: Alphabet) -> Derivation:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise PresentationError("empty derivation")
    words, steps = [], []
    for i, ln in enumerate(lines):
        body, sep, note = ln.partition("#")
        words.append(tokenize(body, alphabet))
        if i == 0:
            if sep:
                raise PresentationError("the first word of a derivation carries no step")
            continue
        bits = note.split()
        if len(bits) != 2 or not bits[1].startswith("@"):
            raise PresentationError(f"cannot read step annotation {note.strip()!r}")
        tag, pos = bits[0], bits[1][1:]
        try:
            pos = int(pos)
            if tag == "-":
                steps.append(Step(None, FORWARD, pos))
            elif tag[-1] in "+-":
                steps.append(Step(int(tag[:-1]), FORWARD if tag[-1] == "+" else BACKWARD, pos))
            else:
                raise ValueError(tag)
        except ValueError:
            raise PresentationError(f"cannot read step annotation {note.strip()!r}") from None
    return Derivation(words, steps)
