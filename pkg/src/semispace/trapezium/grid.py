"""Derivation trapezia as grids of cells.

Horizontal path ``t`` carries the word ``w_t``; band ``t`` sits between
paths ``t`` and ``t + 1``.  A band built from a relation step has one
relation cell and a trivial cell for every other letter; a trivial
transition has trivial cells only.  Cells are addressed ``(t, j)`` with
``j`` counting from the left.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..words import FORWARD, Derivation, Presentation, Step, format_word, sides


class InvalidDerivation(ValueError):
    pass


class MalformedGrid(ValueError):
    pass


class NotDivisible(ValueError):
    pass


@dataclass(frozen=True)
class BandShape:
    """Where the relation cell of a band sits: bottom span ``pos .. pos+m``,
    top span ``pos .. pos+m2``.  ``rel`` is None for a trivial band."""

    rel: int | None
    direction: str
    pos: int
    m: int
    m2: int

    @property
    def trivial(self) -> bool:
        return self.rel is None


@dataclass
class Trapezium:
    words: list
    shapes: list
    presentation: Presentation | None = None

    @property
    def height(self) -> int:
        return len(self.shapes)

    @property
    def bottom(self):
        return self.words[0]

    @property
    def top(self):
        return self.words[-1]

    # cells -----------------------------------------------------------------

    def cell_count(self, t: int) -> int:
        s = self.shapes[t]
        n = len(self.words[t])
        return n if s.trivial else n - s.m + 1

    def cells(self):
        for t in range(self.height):
            for j in range(self.cell_count(t)):
                yield (t, j)

    def is_relation_cell(self, cell) -> bool:
        t, j = cell
        s = self.shapes[t]
        return not s.trivial and j == s.pos

    def cell_relation(self, cell):
        return self.shapes[cell[0]].rel if self.is_relation_cell(cell) else None

    def bottom_edges(self, cell) -> range:
        t, j = cell
        s = self.shapes[t]
        if s.trivial or j < s.pos:
            return range(j, j + 1)
        if j == s.pos:
            return range(s.pos, s.pos + s.m)
        return range(j - 1 + s.m, j + s.m)

    def top_edges(self, cell) -> range:
        t, j = cell
        s = self.shapes[t]
        if s.trivial or j < s.pos:
            return range(j, j + 1)
        if j == s.pos:
            return range(s.pos, s.pos + s.m2)
        return range(j - 1 + s.m2, j + s.m2)

    def cell_below_edge(self, t: int, k: int):
        """The cell of band ``t`` whose bottom contains edge ``k`` of path ``t``."""
        s = self.shapes[t]
        if s.trivial or k < s.pos:
            return (t, k)
        if k < s.pos + s.m:
            return (t, s.pos)
        return (t, k - s.m + 1)

    def cell_above_edge(self, t: int, k: int):
        """The cell of band ``t - 1`` whose top contains edge ``k`` of path ``t``."""
        s = self.shapes[t - 1]
        if s.trivial or k < s.pos:
            return (t - 1, k)
        if k < s.pos + s.m2:
            return (t - 1, s.pos)
        return (t - 1, k - s.m2 + 1)

    def vertical_edges(self, t: int):
        """(bottom vertex, top vertex) pairs of band ``t``, left to right."""
        s = self.shapes[t]
        n = len(self.words[t])
        if s.trivial:
            return [(k, k) for k in range(n + 1)]
        out = [(k, k) for k in range(s.pos + 1)]
        if s.m == 0:
            out.append((s.pos, s.pos + s.m2))
        elif s.m2 == 0:
            out.append((s.pos + s.m, s.pos))
        else:
            out.append((s.pos + s.m, s.pos + s.m2))
        out += [(k, k - s.m + s.m2) for k in range(s.pos + s.m + 1, n + 1)]
        return out

    def dump(self) -> str:
        """One line per band: ``bottom | top | cell-span | relation-id``."""
        lines = []
        for t, s in enumerate(self.shapes):
            span = "-" if s.trivial else f"{s.pos}:{s.pos + s.m}->{s.pos}:{s.pos + s.m2}"
            rid = "-" if s.trivial else f"{s.rel}{'+' if s.direction == FORWARD else '-'}"
            lines.append(f"{format_word(self.words[t])} | {format_word(self.words[t + 1])} | "
                         f"{span} | {rid}")
        return "\n".join(lines) + ("\n" if lines else "")


def build_trapezium(d: Derivation, p: Presentation) -> Trapezium:
    if not d.replay(p):
        raise InvalidDerivation("derivation does not replay over the presentation")
    shapes = []
    for s in d.steps:
        if s.rel is None:
            shapes.append(BandShape(None, FORWARD, 0, 0, 0))
            continue
        side, other = sides(p.relation(s.rel), s.direction)
        shapes.append(BandShape(s.rel, s.direction, s.pos, len(side), len(other)))
    return Trapezium([tuple(w) for w in d.words], shapes, p)


def trapezium_to_derivation(t: Trapezium) -> Derivation:
    if len(t.words) != len(t.shapes) + 1:
        raise MalformedGrid("a trapezium has one more path than bands")
    steps = []
    for i, s in enumerate(t.shapes):
        w, v = t.words[i], t.words[i + 1]
        if s.trivial:
            if w != v:
                raise MalformedGrid(f"trivial band {i} changes its label")
            steps.append(Step(None, FORWARD, 0))
            continue
        if w[:s.pos] != v[:s.pos] or w[s.pos + s.m:] != v[s.pos + s.m2:]:
            raise MalformedGrid(f"trivial cells of band {i} disagree")
        if t.presentation is not None:
            side, other = sides(t.presentation.relation(s.rel), s.direction)
            if tuple(w[s.pos:s.pos + s.m]) != side or tuple(v[s.pos:s.pos + s.m2]) != other:
                raise MalformedGrid(f"relation cell of band {i} does not match relation {s.rel}")
        steps.append(Step(s.rel, s.direction, s.pos))
    return Derivation(list(t.words), steps)


# vertical paths ------------------------------------------------------------

def is_divisible(t: Trapezium):
    """A vertical path from bottom to top other than the two sides, as the
    list of its vertices on paths 0 .. height, or None."""
    T = t.height
    # state: (vertex, still on the left side, still on the right side)
    layer = {}
    for v in range(len(t.words[0]) + 1):
        layer[(v, v == 0, v == len(t.words[0]))] = None
    parents = [layer]
    for i in range(T):
        n_top = len(t.words[i + 1])
        nxt = {}
        edges = {}
        for a, b in t.vertical_edges(i):
            edges.setdefault(a, []).append(b)
        for (v, on_l, on_r) in sorted(layer):
            for b in edges.get(v, ()):
                key = (b, on_l and b == 0, on_r and b == n_top)
                if key not in nxt:
                    nxt[key] = (v, on_l, on_r)
        layer = nxt
        parents.append(layer)
    finals = sorted(k for k in layer if not k[1] and not k[2])
    if not finals:
        return None
    # prefer a path that ends away from the sides
    finals.sort(key=lambda k: (k[0] in (0, len(t.words[-1])), k[0]))
    key = finals[0]
    path = [key[0]]
    for i in range(T, 0, -1):
        key = parents[i][key]
        path.append(key[0])
    return path[::-1]


def _side_of_band(t: Trapezium, i: int, path) -> str | None:
    s = t.shapes[i]
    if s.trivial:
        return None
    lo, hi = path[i], path[i + 1]
    if lo <= s.pos and hi <= s.pos:
        return "right"
    if lo >= s.pos + s.m and hi >= s.pos + s.m2:
        return "left"
    raise NotDivisible(f"path crosses the relation cell of band {i}")


def time_separate(t: Trapezium, path, left_first: bool = True) -> Trapezium:
    """Reorder the steps so one side's nontrivial steps all come first."""
    if path is None or len(path) != t.height + 1:
        raise NotDivisible("no dividing path")
    sides_ = [_side_of_band(t, i, path) for i in range(t.height)]
    x0 = t.words[0][:path[0]]
    y0 = t.words[0][path[0]:]
    left_steps = [(i, t.shapes[i]) for i in range(t.height) if sides_[i] == "left"]
    right_steps = [(i, t.shapes[i]) for i in range(t.height) if sides_[i] == "right"]
    trivial = [t.shapes[i] for i in range(t.height) if sides_[i] is None]
    words = [tuple(t.words[0])]
    shapes = []
    order = (("left", left_steps), ("right", right_steps))
    if not left_first:
        order = order[::-1]
    x, y = tuple(x0), tuple(y0)
    for side, steps in order:
        for i, s in steps:
            nxt = t.words[i + 1]
            if side == "left":
                x = tuple(nxt[:path[i + 1]])
                shapes.append(s)
            else:
                y = tuple(nxt[path[i + 1]:])
                shapes.append(BandShape(s.rel, s.direction, s.pos - path[i] + len(x), s.m, s.m2))
            words.append(x + y)
    for s in trivial:
        shapes.append(s)
        words.append(words[-1])
    if words[-1] != tuple(t.words[-1]):
        raise MalformedGrid("separated derivation ends elsewhere")
    return Trapezium(words, shapes, t.presentation)
