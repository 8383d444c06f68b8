"""Independent brute-force oracles the tests compare the library against.

The search oracles share nothing with the engine beyond single-step
rewriting: plain breadth-first search with a fixed length cap, rerun for
every cap.  The band oracle reads only the grid geometry of a trapezium.
"""

from collections import deque

from semispace.trapezium import A_K
from semispace.words import MONOID, one_step_successors, words_up_to


def component(p, w, cap):
    """All words reachable from ``w`` through words of length <= cap."""
    w = tuple(w)
    seen = {w}
    todo = deque([w])
    while todo:
        x = todo.popleft()
        for y, _ in one_step_successors(x, p, cap):
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


def brute_space(p, u, v, L):
    """Least cap in max(|u|,|v|)..L connecting u and v, else None."""
    u, v = tuple(u), tuple(v)
    for cap in range(max(len(u), len(v)), L + 1):
        if v in component(p, u, cap):
            return cap
    return None


def brute_sfn(p, n, L):
    words = list(words_up_to(p.alphabet, n, nonempty=p.kind != MONOID))
    best = 0
    for i, u in enumerate(words):
        for v in words[i:]:
            s = brute_space(p, u, v, L)
            if s is not None:
                best = max(best, s)
    return best


def band_partition(t, kinds, K):
    """Components of the K-edges joined through shared cells, computed from
    each cell's own edge lists.  Edges next to no eligible cell belong to
    no band."""
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for cell in t.cells():
        if K == A_K and t.is_relation_cell(cell):
            continue
        band = cell[0]
        edges = [(band, k) for k in t.bottom_edges(cell)] + [(band + 1, k) for k in t.top_edges(cell)]
        edges = [e for e in edges if kinds(t.words[e[0]][e[1]]) == K]
        for e in edges:
            parent.setdefault(e, e)
        for e in edges[1:]:
            parent[find(e)] = find(edges[0])
    groups = {}
    for e in parent:
        groups.setdefault(find(e), set()).add(e)
    return sorted(sorted(g) for g in groups.values())
