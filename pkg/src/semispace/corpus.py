"""Small presentations used as fixtures, and the table recognizer.

The table recognizer stands in for a machine deciding the word problem.
It accepts ``u v'`` (``v'`` a primed copy of ``v``) exactly when the
pair was found equal by bounded derivation search, for every pair up to
a fixed total length.
"""

from __future__ import annotations

from .machine import Command, Machine, Part, RECOGNIZING, TapeSpec
from .search import DEFAULT_NODE_CAP, MinimaxSweep, BudgetExceeded
from .words import MONOID, Presentation, neighbours, parse_presentation, words_up_to

CORPUS_TEXT = {
    "free": "monoid\nletters: a\n",
    "idempotent": "semigroup\nletters: a\na a = a\n",
    "cyclic": "semigroup\nletters: a\na a a a = a a\n",
    "commutative": "monoid\nletters: a b\na b = b a\n",
    "bicyclic": "monoid\nletters: b c\nb c = 1\n",
}


def corpus() -> dict:
    return {name: parse_presentation(text, name=name) for name, text in CORPUS_TEXT.items()}


def presentation(name: str) -> Presentation:
    return parse_presentation(CORPUS_TEXT[name], name=name)


class InconclusiveTable(RuntimeError):
    """Equality of some pair in range could not be settled."""


def prime(a: str) -> str:
    return a + "'"


def equality_classes(p: Presentation, n_max: int, L: int, node_cap: int = DEFAULT_NODE_CAP) -> dict:
    """Map each word of length <= n_max to a class id; words share an id
    when a derivation within length L connects them."""
    words = list(words_up_to(p.alphabet, n_max, nonempty=p.kind != MONOID))
    sweep = MinimaxSweep(words, lambda w: neighbours(w, p, L), len, L, node_cap).run()
    if not sweep.complete:
        raise InconclusiveTable(f"node cap reached classifying words up to length {n_max}")
    roots = {}
    classes = {}
    for w in words:
        r = sweep.find(w)
        classes[w] = roots.setdefault(r, len(roots))
    return classes


def build_table_m0(p: Presentation, n_max: int, L: int | None = None,
                   node_cap: int = DEFAULT_NODE_CAP) -> Machine:
    """One-tape recognizer for {u v' : u = v, |u| + |v| <= n_max}.

    The machine erases its tape from the right end, tracking in its state
    the suffix read so far.  On a well formed input in range it halts with
    an empty tape in ``z.acc`` or ``z.rej``; on anything else it gets stuck
    with letters left.  Nothing is ever written, so running it backwards
    never invents words.
    """
    if L is None:
        L = max(2 * n_max, n_max + 4)
    try:
        classes = equality_classes(p, n_max, L, node_cap)
    except BudgetExceeded as e:
        raise InconclusiveTable(str(e)) from e
    A = list(p.letters)
    primed = [prime(a) for a in A]
    clash = set(A) & set(primed)
    if clash:
        raise ValueError(f"primed letters clash with the alphabet: {sorted(clash)}")
    letters = tuple(A + primed)
    minimum = 0 if p.kind == MONOID else 1

    def accepted(word):
        k = 0
        while k < len(word) and word[k] in A:
            k += 1
        u, v = word[:k], tuple(a[:-1] for a in word[k:])
        if any(b not in A for b in v) or any(a not in A for a in word[:k]):
            return False
        if len(u) < minimum or len(v) < minimum:
            return False
        return u in classes and v in classes and classes[u] == classes[v]

    # valid suffixes of words in A* A'* of length <= n_max
    suffixes = [()]
    frontier = [()]
    for _ in range(n_max):
        nxt = []
        for s in frontier:
            for x in letters:
                if x in A or not s or s[0] in primed:
                    nxt.append((x,) + s)
        suffixes += nxt
        frontier = nxt
    valid = set(suffixes)
    names = {s: f"z{i}" for i, s in enumerate(suffixes)}
    acc, rej = "z.acc", "z.rej"
    cmds = []
    for s in suffixes:
        q = names[s]
        for x in letters:
            t = (x,) + s
            if t in valid:
                cmds.append(Command(f"read.{q}.{x}", (Part((x,), q, (), (), names[t], (), False, True),)))
        end = acc if accepted(s) else rej
        cmds.append(Command(f"end.{q}", (Part((), q, (), (), end, (), True, True),)))
    states = tuple(names[s] for s in suffixes) + (acc, rej)
    return Machine(tapes=(TapeSpec(letters, states),), input_letters=letters,
                   start=(names[()],), accept=(acc,), commands=tuple(cmds),
                   flavor=RECOGNIZING, reject=((rej,),), name="M0")


def m0_inputs(p: Presentation, n: int) -> list:
    """Words u v' with |u| + |v| <= n."""
    A = list(p.letters)
    out = []
    for total in range(n + 1):
        for i in range(total + 1):
            for u in words_up_to(A, i):
                if len(u) != i:
                    continue
                for v in words_up_to(A, total - i):
                    if len(v) == total - i:
                        out.append(u + tuple(prime(a) for a in v))
    return out
