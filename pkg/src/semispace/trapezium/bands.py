"""Bands, figures, thick lenses and type vectors of a trapezium."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cmp_to_key

from .grid import Trapezium

Q, ALPHA_K, OMEGA_K, A_K = "q", "alpha", "omega", "a"
KINDS = (Q, ALPHA_K, OMEGA_K, A_K)


def namespace_kind(letter: str):
    """Letter kinds for words over the compiled monoid H."""
    if letter.startswith("st:") or letter == "px:p":
        return Q
    if letter == "mk:alpha":
        return ALPHA_K
    if letter == "mk:omega":
        return OMEGA_K
    if letter.startswith(("src:", "yl:", "yr:")):
        return A_K
    return None


class LetterKinds:
    """Maps letters to band kinds; a dict for arbitrary presentations or the
    H namespaces by default."""

    def __init__(self, mapping=None, sources=None):
        self.mapping = dict(mapping) if mapping is not None else None
        self.sources = frozenset(sources) if sources is not None else None

    def __call__(self, letter):
        if self.mapping is None:
            return namespace_kind(letter)
        return self.mapping.get(letter)

    def is_source(self, letter) -> bool:
        if self.sources is not None:
            return letter in self.sources
        if self.mapping is None:
            return letter.startswith("src:")
        return self(letter) == A_K

    def cap_cell(self, rel) -> bool:
        """Relations with an empty side next to an alpha and a q letter."""
        for side, other in ((rel.lhs, rel.rhs), (rel.rhs, rel.lhs)):
            if not side and any(self(x) == ALPHA_K for x in other) \
                    and any(self(x) == Q for x in other):
                return True
        return False

    def omega_cell(self, rel) -> bool:
        """Relations that create or remove an omega letter."""
        count = lambda w: sum(1 for x in w if self(x) == OMEGA_K)
        return count(rel.lhs) != count(rel.rhs)


@dataclass(frozen=True)
class Endpoint:
    kind: str            # "bottom", "top" or "cell"
    cell: tuple | None = None


@dataclass
class Band:
    kind: str
    cells: list                  # bottom to top
    crossings: list              # (path, edge) for each K-edge the band crosses
    start: Endpoint
    end: Endpoint
    branching: bool = False

    @property
    def first(self):
        return self.cells[0]

    @property
    def last(self):
        return self.cells[-1]

    @property
    def through(self) -> bool:
        return self.start.kind == "bottom" and self.end.kind == "top"

    def edge_on(self, path: int):
        for t, k in self.crossings:
            if t == path:
                return k
        return None


class _DSU:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        self.parent[self.find(a)] = self.find(b)


def trace_bands(t: Trapezium, kinds: LetterKinds | None = None, only=None) -> list:
    """All maximal bands, ordered by kind, then by first cell."""
    kinds = kinds or LetterKinds()
    wanted = tuple(only) if only else KINDS
    out = []
    for K in wanted:
        dsu = _DSU()
        links = {}
        crossings = {}
        for path, w in enumerate(t.words):
            for k, x in enumerate(w):
                if kinds(x) != K:
                    continue
                below = t.cell_above_edge(path, k) if path > 0 else None
                above = t.cell_below_edge(path, k) if path < t.height else None
                if K == A_K:
                    if below is not None and t.is_relation_cell(below):
                        below = None
                    if above is not None and t.is_relation_cell(above):
                        above = None
                for c in (below, above):
                    if c is not None:
                        dsu.add(c)
                        crossings.setdefault(c, []).append((path, k))
                if below is not None and above is not None:
                    dsu.union(below, above)
                    links.setdefault(("up", below), []).append(above)
                    links.setdefault(("down", above), []).append(below)
        groups = {}
        for c in dsu.parent:
            groups.setdefault(dsu.find(c), []).append(c)
        for cells in groups.values():
            cells.sort()
            first, last = cells[0], cells[-1]
            branching = any(len(links.get((d, c), ())) > 1 for c in cells for d in ("up", "down"))
            seen = set()
            cross = []
            for c in cells:
                for e in crossings[c]:
                    if e not in seen:
                        seen.add(e)
                        cross.append(e)
            cross.sort()
            start = _endpoint(t, first, cross, K, bottom=True)
            end = _endpoint(t, last, cross, K, bottom=False)
            out.append(Band(K, cells, cross, start, end, branching))
    out.sort(key=lambda b: (KINDS.index(b.kind), b.first))
    return out


def _endpoint(t: Trapezium, cell, cross, K, bottom: bool) -> Endpoint:
    band = cell[0]
    path = band if bottom else band + 1
    edges = [k for (p, k) in cross if p == path]
    if not edges:
        return Endpoint("cell", cell)
    if bottom and path == 0:
        return Endpoint("bottom")
    if not bottom and path == t.height:
        return Endpoint("top")
    # an a-band stopped by a relation cell next to it
    k = edges[0]
    other = t.cell_above_edge(path, k) if bottom else t.cell_below_edge(path, k)
    return Endpoint("cell", other)


# figures -------------------------------------------------------------------

THROUGH, LENS, CUP, CAP = "through", "lens", "cup", "cap"


@dataclass
class Figure:
    kind: str
    q_band: Band | None
    alpha_band: Band | None = None
    q_type: int = 0


@dataclass
class Figures:
    figures: list
    anomalies: list
    bands: list

    def of_kind(self, kind):
        return [f for f in self.figures if f.kind == kind]


def band_type(t: Trapezium, band: Band, kinds: LetterKinds) -> int:
    p = t.presentation
    return sum(1 for c in band.cells
               if t.is_relation_cell(c) and kinds.omega_cell(p.relation(t.cell_relation(c))))


def _is_cap_cell(t: Trapezium, cell, kinds) -> bool:
    r = t.cell_relation(cell)
    return r is not None and kinds.cap_cell(t.presentation.relation(r))


def classify_figures(t: Trapezium, kinds: LetterKinds | None = None, bands=None) -> Figures:
    kinds = kinds or LetterKinds()
    if bands is None:
        bands = trace_bands(t, kinds, only=(Q, ALPHA_K))
    qs = [b for b in bands if b.kind == Q]
    alphas = [b for b in bands if b.kind == ALPHA_K]
    by_first = {}
    by_last = {}
    for b in alphas:
        by_first[b.first] = b
        by_last[b.last] = b
    figures, anomalies = [], []
    used = set()
    for c in qs:
        typ = band_type(t, c, kinds)
        if c.branching:
            anomalies.append(("branching q-band", c.first))
            continue
        if c.through:
            figures.append(Figure(THROUGH, c, None, typ))
            continue
        partner = None
        kind = None
        if c.start.kind == "cell" and _is_cap_cell(t, c.first, kinds):
            b = by_first.get(c.first)
            if b is not None and b.last == c.last and c.end.kind == "cell":
                partner, kind = b, LENS
            elif b is not None and b.end.kind == "top" and c.end.kind == "top":
                partner, kind = b, CUP
        elif c.end.kind == "cell" and _is_cap_cell(t, c.last, kinds):
            b = by_last.get(c.last)
            if b is not None and b.start.kind == "bottom" and c.start.kind == "bottom":
                partner, kind = b, CAP
        if partner is None:
            anomalies.append(("unpaired q-band", c.first))
            continue
        used.add(id(partner))
        figures.append(Figure(kind, c, partner, typ))
    for b in alphas:
        if id(b) in used:
            continue
        if b.through:
            figures.append(Figure(THROUGH, None, b, 0))
        else:
            anomalies.append(("unpaired alpha-band", b.first))
    return Figures(figures, anomalies, bands)


def cap_cell_violations(t: Trapezium, kinds: LetterKinds | None = None, bands=None) -> list:
    """Cap cells whose alpha- and q-band do not close up together."""
    kinds = kinds or LetterKinds()
    if bands is None:
        bands = trace_bands(t, kinds, only=(Q, ALPHA_K))
    start_at, end_at = {}, {}
    for b in bands:
        if b.kind in (Q, ALPHA_K):
            start_at[(b.kind, b.first)] = b
            end_at[(b.kind, b.last)] = b
    out = []
    for cell in t.cells():
        if not _is_cap_cell(t, cell, kinds):
            continue
        for table, other_end, far in ((start_at, "end", "top"), (end_at, "start", "bottom")):
            a, q = table.get((ALPHA_K, cell)), table.get((Q, cell))
            if a is None or q is None:
                continue
            ea, eq = getattr(a, other_end), getattr(q, other_end)
            ok = (ea.kind == eq.kind == far) or (
                ea.kind == eq.kind == "cell" and ea.cell == eq.cell and _is_cap_cell(t, ea.cell, kinds))
            if not ok:
                out.append(cell)
    return out


def omega_band_violations(t: Trapezium, kinds: LetterKinds | None = None, bands=None) -> list:
    """Omega-bands whose first and last cells lie on different q-bands."""
    kinds = kinds or LetterKinds()
    if bands is None:
        bands = trace_bands(t, kinds, only=(Q, OMEGA_K))
    q_of = {}
    for b in bands:
        if b.kind == Q:
            for c in b.cells:
                q_of[c] = id(b)
    out = []
    for d in bands:
        if d.kind != OMEGA_K:
            continue
        a, z = q_of.get(d.first), q_of.get(d.last)
        if a is not None and z is not None and a != z:
            out.append(d.first)
    return out


# thick lenses --------------------------------------------------------------

@dataclass(frozen=True)
class BoundaryViolation:
    """An outer boundary edge of a thick lens carrying a letter outside A."""

    path: int
    edge: int
    letter: str


@dataclass
class ThickLens:
    lens: Figure
    omega_bands: list
    q1_cells: list
    boundary_edges: list = field(default_factory=list)
    flags: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    region: dict = field(default_factory=dict)

    @property
    def boundary_ok(self) -> bool:
        return not self.violations

    @property
    def machine_bands(self) -> range:
        """Bands strictly between the two omega cells; empty for type 0."""
        if len(self.q1_cells) < 2:
            return range(0)
        return range(self.q1_cells[0][0] + 1, self.q1_cells[-1][0])

    @property
    def augmented_bands(self) -> range:
        if len(self.q1_cells) < 2:
            return range(0)
        return range(self.q1_cells[0][0], self.q1_cells[-1][0] + 1)


def _region(t: Trapezium, lens: Figure, omegas) -> dict:
    """Cells enclosed by the thick lens, per band: (leftmost, rightmost)."""
    members = {}
    for b in [lens.alpha_band, lens.q_band] + list(omegas):
        for c in b.cells:
            lo, hi = members.get(c[0], (c[1], c[1]))
            members[c[0]] = (min(lo, c[1]), max(hi, c[1]))
    return members


def thick_lens(t: Trapezium, lens: Figure, kinds: LetterKinds | None = None,
               bands=None) -> ThickLens:
    kinds = kinds or LetterKinds()
    if lens.kind != LENS:
        raise ValueError("a thick lens is built on a lens")
    if bands is None:
        bands = trace_bands(t, kinds, only=(OMEGA_K,))
    on_q = set(lens.q_band.cells)
    omegas, flags = [], []
    for d in bands:
        if d.kind != OMEGA_K:
            continue
        hits = (d.first in on_q, d.last in on_q)
        if all(hits):
            omegas.append(d)
        elif any(hits):
            flags.append(f"omega-band from {d.first} leaves the lens")
    q1 = sorted(c for c in lens.q_band.cells
                if t.is_relation_cell(c) and kinds.omega_cell(t.presentation.relation(t.cell_relation(c))))
    if not q1:
        flags.append("type 0 lens: empty machine part")
    region = _region(t, lens, omegas)
    edges = []
    for band, (lo, hi) in sorted(region.items()):
        for j in range(lo, hi + 1):
            cell = (band, j)
            for path, side, ks in ((band, "bottom", t.bottom_edges(cell)),
                                   (band + 1, "top", t.top_edges(cell))):
                nb = band - 1 if side == "bottom" else band + 1
                for k in ks:
                    if 0 <= nb < t.height:
                        other = t.cell_above_edge(path, k) if side == "bottom" else t.cell_below_edge(path, k)
                        span = region.get(nb)
                        if span and span[0] <= other[1] <= span[1]:
                            continue
                    edges.append((path, k, t.words[path][k]))
    bad = [BoundaryViolation(*e) for e in edges if not kinds.is_source(e[2])]
    tl = ThickLens(lens, omegas, q1, edges, flags, bad, region)
    if bad:
        flags.append(f"outer boundary carries {len(bad)} letters outside A")
    return tl


def machine_part_labels(t: Trapezium, tl: ThickLens):
    """Bottom and top labels of the machine part, from the alpha edge to
    the omega edge inclusive; None for a type-0 lens."""
    if len(tl.q1_cells) < 2 or not tl.omega_bands:
        return None
    lo = tl.q1_cells[0][0] + 1
    hi = tl.q1_cells[-1][0]
    out = []
    for path in (lo, hi):
        a = tl.lens.alpha_band.edge_on(path)
        z = None
        for d in tl.omega_bands:
            z = d.edge_on(path)
            if z is not None:
                break
        if a is None or z is None:
            return None
        out.append(tuple(t.words[path][a:z + 1]))
    return tuple(out)


def generated_region(t: Trapezium, lenses, kinds: LetterKinds | None = None):
    """Close the cells of the given thick lenses under two rules: a cell
    across a boundary edge labeled by a source letter joins, and a thick
    lens touching the region joins whole.  Returns (cells, note); the
    result is the least fixed point, which need not be the intended
    region in pathological grids."""
    kinds = kinds or LetterKinds()
    lens_cells = []
    for tl in lenses:
        cells = set()
        for band, (lo, hi) in tl.region.items():
            cells.update((band, j) for j in range(lo, hi + 1))
        lens_cells.append(cells)
    region = set(lens_cells[0]) if lens_cells else set()
    changed = True
    while changed:
        changed = False
        for cells in lens_cells[1:]:
            if not cells <= region and _touches(t, region, cells):
                region |= cells
                changed = True
        grow = set()
        for cell in region:
            band = cell[0]
            for k in t.bottom_edges(cell):
                if band > 0 and kinds.is_source(t.words[band][k]):
                    grow.add(t.cell_above_edge(band, k))
            for k in t.top_edges(cell):
                if band + 1 < t.height and kinds.is_source(t.words[band + 1][k]):
                    grow.add(t.cell_below_edge(band + 1, k))
        grow -= region
        if grow:
            region |= grow
            changed = True
    return region, "least fixed point of the closure rules"


def _touches(t: Trapezium, region, cells) -> bool:
    for cell in cells:
        band = cell[0]
        for k in t.bottom_edges(cell):
            if band > 0 and t.cell_above_edge(band, k) in region:
                return True
        for k in t.top_edges(cell):
            if band + 1 < t.height and t.cell_below_edge(band + 1, k) in region:
                return True
    return False


# type vectors --------------------------------------------------------------

@dataclass(frozen=True)
class TypeVector:
    """Triples (through, cup-or-cap, lens) indexed by q-band type."""

    triples: tuple

    def __post_init__(self):
        tr = [tuple(x) for x in self.triples]
        while tr and tr[-1] == (0, 0, 0):
            tr.pop()
        object.__setattr__(self, "triples", tuple(tr))

    def __str__(self):
        return " ".join(f"{i}:{a},{b},{c}" for i, (a, b, c) in enumerate(self.triples)) or "0"


def compare_types(a, b) -> int:
    """-1, 0 or 1: the highest type index where the triples differ decides,
    then the triples are compared left to right."""
    ta = a.triples if isinstance(a, TypeVector) else TypeVector(a).triples
    tb = b.triples if isinstance(b, TypeVector) else TypeVector(b).triples
    n = max(len(ta), len(tb))
    for i in range(n - 1, -1, -1):
        x = ta[i] if i < len(ta) else (0, 0, 0)
        y = tb[i] if i < len(tb) else (0, 0, 0)
        if x != y:
            return -1 if x < y else 1
    return 0


type_key = cmp_to_key(compare_types)


def type_vector(t: Trapezium, kinds: LetterKinds | None = None, figures: Figures | None = None):
    kinds = kinds or LetterKinds()
    figures = figures or classify_figures(t, kinds)
    counts = {}
    for f in figures.figures:
        if f.q_band is None:
            continue
        slot = {THROUGH: 0, CUP: 1, CAP: 1, LENS: 2}[f.kind]
        row = counts.setdefault(f.q_type, [0, 0, 0])
        row[slot] += 1
    top = max(counts, default=-1)
    return TypeVector(tuple(tuple(counts.get(i, (0, 0, 0))) for i in range(top + 1)))


def weighted_length(w, c: int, kinds: LetterKinds | None = None) -> int:
    kinds = kinds or LetterKinds()
    return sum(c if kinds(x) in (Q, ALPHA_K) else 1 for x in w)
