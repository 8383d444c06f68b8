"""Bounded searches for derivations and their space.

Every search carries a space bound L: words (or configurations) longer
than L are never visited, so "not connected" always means "not connected
within L".  A node cap guards memory; hitting it raises
:class:`BudgetExceeded` or marks a result as a lower bound.

The two workhorses are generic over a neighbour function and a size
function so the machine model reuses them:

* :func:`bottleneck_search` grows the set of nodes reachable from one
  source in order of the least possible maximum size along the path.
* :class:`MinimaxSweep` admits nodes level by level from many sources at
  once and records, in a union-find, the level at which two sources first
  become connected.  On a symmetric graph that level is exactly the least
  space of a path between them.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping

from .words import (MONOID, Derivation, Presentation, neighbours,
                    one_step_successors, words_up_to)

DEFAULT_NODE_CAP = 5_000_000

EXACT = "exact"
LOWER_BOUND = "lower-bound"


class BudgetExceeded(RuntimeError):
    """The node cap was reached before the search could finish."""

    def __init__(self, nodes: int, message: str = ""):
        super().__init__(message or f"node cap reached after {nodes} nodes")
        self.nodes = nodes


class EmptyTestRange(ValueError):
    """compare_functions was given tables too short for any constant."""


# generic searches -------------------------------------------------------

@dataclass
class Bottleneck:
    """Least maximum size of a path from the source to each settled node."""

    source: Hashable
    cost: dict
    parent: dict
    pruned: bool = False

    def path_to(self, target) -> list:
        if target not in self.cost:
            raise KeyError(target)
        path = [target]
        while path[-1] != self.source:
            path.append(self.parent[path[-1]][0])
        return path[::-1]

    def edges_to(self, target) -> list:
        """The labels stored with each parent link, source first."""
        labels = []
        x = target
        while x != self.source:
            prev, label = self.parent[x]
            labels.append(label)
            x = prev
        return labels[::-1]


def bottleneck_search(source, successors: Callable, size: Callable, budget: int,
                      node_cap: int = DEFAULT_NODE_CAP, targets=None) -> Bottleneck:
    """Bucketed minimax search.

    ``successors(x)`` yields ``(y, label)`` pairs; the graph may be
    directed.  When every node of ``targets`` is settled the search stops
    early.
    """
    s0 = size(source)
    result = Bottleneck(source, {}, {})
    if s0 > budget:
        return result
    best = {source: s0}
    buckets = [[] for _ in range(budget + 1)]
    buckets[s0].append(source)
    settled = result.cost
    remaining = set(targets) if targets is not None else None
    for level in range(s0, budget + 1):
        stack = buckets[level]
        while stack:
            x = stack.pop()
            if x in settled:
                continue
            settled[x] = level
            if remaining is not None:
                remaining.discard(x)
                if not remaining:
                    return result
            for y, label in successors(x):
                if y in settled:
                    continue
                sy = size(y)
                if sy > budget:
                    result.pruned = True
                    continue
                c = level if sy < level else sy
                old = best.get(y)
                if old is None or c < old:
                    if old is None and len(best) >= node_cap:
                        raise BudgetExceeded(len(best))
                    best[y] = c
                    result.parent[y] = (x, label)
                    buckets[c].append(y)
    return result


def bounded_bfs(source, successors: Callable, size: Callable, budget: int,
                target=None, node_cap: int = DEFAULT_NODE_CAP):
    """Breadth-first search restricted to nodes of size at most ``budget``.

    Returns ``(parent, pruned)`` where parent maps each reached node to
    ``(previous node, label)``; the source maps to None.  Successors are
    expanded in the order given, so the first path found to a node is the
    shortest one whose label sequence is least in that order.
    """
    parent = {source: None}
    if size(source) > budget:
        return {}, True
    pruned = False
    queue = deque([source])
    while queue:
        x = queue.popleft()
        if x == target:
            break
        for y, label in successors(x):
            if y in parent:
                continue
            if size(y) > budget:
                pruned = True
                continue
            if len(parent) >= node_cap:
                raise BudgetExceeded(len(parent))
            parent[y] = (x, label)
            queue.append(y)
    return parent, pruned


def trace(parent: Mapping, target) -> tuple[list, list]:
    nodes, labels = [target], []
    while parent[nodes[-1]] is not None:
        prev, label = parent[nodes[-1]]
        nodes.append(prev)
        labels.append(label)
    return nodes[::-1], labels[::-1]


class MinimaxSweep:
    """Level-by-level union-find over a symmetric graph.

    After :meth:`run`, ``events`` lists ``(level, a, b)`` for every merge of
    two components that both contain sources, where ``a`` and ``b`` are the
    smallest source sizes on either side.  With ``track_pairs`` the exact
    merge level of every pair of source indices is kept in ``pair_level``.
    """

    def __init__(self, sources: Iterable, neighbours_of: Callable, size: Callable,
                 budget: int, node_cap: int = DEFAULT_NODE_CAP, track_pairs: bool = False):
        self.sources = list(dict.fromkeys(sources))
        self.neighbours_of = neighbours_of
        self.size = size
        self.budget = budget
        self.node_cap = node_cap
        self.track_pairs = track_pairs
        self.parent: dict = {}
        self.level_of: dict = {}
        self.events: list = []
        self.pair_level: dict = {}
        self.pruned = False
        self.complete = False
        self._min: dict = {}
        self._members: dict = {}
        self._rank: dict = {}

    def find(self, x):
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def connected(self, x, y) -> bool:
        return x in self.parent and y in self.parent and self.find(x) == self.find(y)

    def _union(self, x, y, level):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return
        if self._rank[rx] < self._rank[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        if self._rank[rx] == self._rank[ry]:
            self._rank[rx] += 1
        mx, my = self._min.get(rx), self._min.get(ry)
        if mx is not None and my is not None:
            self.events.append((level, mx, my))
            if self.track_pairs:
                for i in self._members[rx]:
                    for j in self._members[ry]:
                        self.pair_level[(i, j) if i < j else (j, i)] = level
        if my is not None:
            self._min[rx] = my if mx is None or my < mx else mx
            if self.track_pairs:
                self._members.setdefault(rx, []).extend(self._members.pop(ry))
        self._min.pop(ry, None)

    def run(self) -> "MinimaxSweep":
        size, budget = self.size, self.budget
        index = {s: i for i, s in enumerate(self.sources)}
        seen = set()
        buckets = [[] for _ in range(budget + 1)]
        for s in self.sources:
            k = size(s)
            if k <= budget:
                seen.add(s)
                buckets[k].append(s)
        parent, level_of, rank = self.parent, self.level_of, self._rank
        try:
            for level in range(budget + 1):
                stack = buckets[level]
                while stack:
                    x = stack.pop()
                    if x in parent:
                        continue
                    parent[x] = x
                    rank[x] = 0
                    level_of[x] = level
                    i = index.get(x)
                    if i is not None:
                        self._min[x] = size(x)
                        if self.track_pairs:
                            self._members[x] = [i]
                    for y in self.neighbours_of(x):
                        if y in parent:
                            self._union(x, y, level)
                            continue
                        if y in seen:
                            continue
                        k = size(y)
                        if k > budget:
                            self.pruned = True
                            continue
                        if len(seen) >= self.node_cap:
                            raise BudgetExceeded(len(seen))
                        seen.add(y)
                        buckets[k if k > level else level].append(y)
        except BudgetExceeded:
            self.complete = False
            return self
        self.complete = True
        return self

    def profile(self, n_max: int, baseline: Callable[[int], int] = lambda n: n) -> dict:
        """max(baseline(n), merge levels whose pairs fit under n) for each n."""
        out = {}
        for n in range(n_max + 1):
            v = baseline(n)
            for level, a, b in self.events:
                if a <= n and b <= n and level > v:
                    v = level
            out[n] = v
        return out


# presentations -----------------------------------------------------------

def _word_neighbours(p: Presentation, bound: int):
    return lambda w: neighbours(w, p, bound)


def _word_successors(p: Presentation, bound: int):
    return lambda w: one_step_successors(w, p, bound)


def equal_within(p: Presentation, w, w2, L: int, node_cap: int = DEFAULT_NODE_CAP) -> bool:
    """True when some derivation w -> w2 never exceeds length L."""
    w, w2 = tuple(w), tuple(w2)
    if max(len(w), len(w2)) > L:
        return False
    parent, _ = bounded_bfs(w, lambda x: ((y, None) for y in neighbours(x, p, L)),
                            len, L, target=w2, node_cap=node_cap)
    return w2 in parent


def space_between(p: Presentation, w, w2, L: int, node_cap: int = DEFAULT_NODE_CAP) -> int | None:
    """Least space of a derivation between two words, None when there is
    none within L."""
    w, w2 = tuple(w), tuple(w2)
    if max(len(w), len(w2)) > L:
        return None
    res = bottleneck_search(w, lambda x: ((y, None) for y in neighbours(x, p, L)),
                            len, L, node_cap=node_cap, targets=[w2])
    return res.cost.get(w2)


def derivation_witness(p: Presentation, w, w2, L: int,
                       node_cap: int = DEFAULT_NODE_CAP) -> Derivation | None:
    """A derivation of least space, and among those of least length, whose
    step sequence is least in (position, relation, direction) order."""
    w, w2 = tuple(w), tuple(w2)
    s = space_between(p, w, w2, L, node_cap)
    if s is None:
        return None
    parent, _ = bounded_bfs(w, _word_successors(p, s), len, s, target=w2, node_cap=node_cap)
    words, steps = trace(parent, w2)
    return Derivation(words, steps)


def sources_up_to(p: Presentation, n: int) -> list:
    return list(words_up_to(p.alphabet, n, nonempty=p.kind != MONOID))


@dataclass
class SpaceProfile:
    presentation: Presentation
    L: int
    values: dict = field(default_factory=dict)
    status: str = EXACT

    def rows(self):
        return [(n, self.values[n], self.status) for n in sorted(self.values)]


def space_profile(p: Presentation, n_max: int, L: int,
                  node_cap: int = DEFAULT_NODE_CAP) -> SpaceProfile:
    """s(1) .. s(n_max), each relative to the bound L."""
    sweep = MinimaxSweep(sources_up_to(p, n_max), _word_neighbours(p, L), len, L,
                         node_cap=node_cap).run()
    prof = sweep.profile(n_max)
    status = EXACT if sweep.complete else LOWER_BOUND
    return SpaceProfile(p, L, {n: prof[n] for n in range(1, n_max + 1)}, status)


def space_function(p: Presentation, n: int, L: int,
                   node_cap: int = DEFAULT_NODE_CAP) -> tuple[int, str]:
    """s(n) with status ``exact`` (every pair decided within L) or
    ``lower-bound`` (the node cap cut the search short)."""
    prof = space_profile(p, n, L, node_cap)
    return prof.values[n], prof.status


# function order ------------------------------------------------------------

@dataclass
class EquivalenceWitness:
    """Outcome of comparing two tabulated functions.

    ``c_fg`` is the least c with f(n) <= c g(cn) + cn on the tested range,
    or None; likewise ``c_gf``.
    """

    direction: str
    c_fg: int | None
    c_gf: int | None
    sample: tuple

    def describe(self) -> str:
        parts = [self.direction]
        if self.c_fg is not None:
            parts.append(f"f<=g with c={self.c_fg}")
        if self.c_gf is not None:
            parts.append(f"g<=f with c={self.c_gf}")
        return "; ".join(parts)


def _least_constant(f: Mapping, g: Mapping, c_max: int):
    nf, ng = max(f), max(g)
    for c in range(1, c_max + 1):
        top = min(nf, ng // c)
        if top < 1:
            continue
        if all(f[n] <= c * g[c * n] + c * n for n in range(1, top + 1)):
            return c
    return None


def compare_functions(f: Mapping[int, int], g: Mapping[int, int], c_max: int) -> EquivalenceWitness:
    """Test f <= g and g <= f in the order f(n) <= c g(cn) + cn.

    For a given c only the n with n in both tables and cn in the other are
    tested, so a table must reach at least c_max for the test to mean
    anything.
    """
    for t in (f, g):
        if any(n not in t for n in range(1, max(t) + 1)):
            raise ValueError("tabulated functions must cover 1..N")
    if max(max(f), max(g)) < c_max:
        raise EmptyTestRange(f"tables end at {max(f)} and {max(g)}, below c_max={c_max}")
    c_fg = _least_constant(f, g, c_max)
    c_gf = _least_constant(g, f, c_max)
    if c_fg is not None and c_gf is not None:
        direction = "both"
    elif c_fg is not None:
        direction = "f<=g"
    elif c_gf is not None:
        direction = "g<=f"
    else:
        direction = "neither-on-sample"
    return EquivalenceWitness(direction, c_fg, c_gf, (1, max(max(f), max(g))))
