"""Bounded search for a least-type derivation between two words."""

from __future__ import annotations

from ..search import BudgetExceeded
from ..words import Derivation, Presentation, one_step_successors
from .bands import LetterKinds, compare_types, type_vector
from .grid import build_trapezium


def least_type_derivation(p: Presentation, w, w2, space_bound: int, length_bound: int,
                          kinds: LetterKinds | None = None, node_cap: int = 200_000):
    """Enumerate simple derivations w -> w2 within the budgets and return
    (derivation, type vector) of the least type found, or None.

    Raises BudgetExceeded once more than ``node_cap`` words were expanded.
    Ties keep the first derivation in enumeration order, which is
    deterministic."""
    kinds = kinds or LetterKinds()
    w, w2 = tuple(w), tuple(w2)
    best = None
    expanded = 0
    words, steps = [w], []
    on_path = {w}

    def visit():
        nonlocal best, expanded
        cur = words[-1]
        if cur == w2:
            d = Derivation(list(words), list(steps))
            tv = type_vector(build_trapezium(d, p), kinds)
            if best is None or compare_types(tv, best[1]) < 0:
                best = (d, tv)
            return
        if len(steps) >= length_bound:
            return
        expanded += 1
        if expanded > node_cap:
            raise BudgetExceeded(expanded, "least-type search ran out of nodes")
        for nxt, step in one_step_successors(cur, p, space_bound):
            if nxt in on_path:
                continue
            on_path.add(nxt)
            words.append(nxt)
            steps.append(step)
            visit()
            steps.pop()
            words.pop()
            on_path.discard(nxt)

    if len(w) <= space_bound:
        visit()
    return best
