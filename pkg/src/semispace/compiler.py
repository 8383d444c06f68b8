"""Monoid presentations compiled from the one-tape doubled machine.

Generators are namespaced by origin so the disjoint-union structure is
visible in every token: ``src:a`` for the source letters, ``yl:x`` and
``yr:x`` for the left and right tape letters (already named so by the
machine), ``st:q`` for states, ``mk:alpha`` / ``mk:omega`` for the
endmarkers and ``px:p`` for the extra generator.

The machine block holds one relation ``V' = V`` per command ``V -> V'``;
applying a command to a configuration word is the backward use of its
relation.  The auxiliary block adds ``p a = a_l p`` for every source
letter, ``alpha p = 1`` and ``p = q1 omega``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import equality_classes
from .machine import Machine, Tape, a_length
from .pipeline.onetape import yl
from .pipeline.packed import PackedMachine
from .search import DEFAULT_NODE_CAP, BudgetExceeded, bottleneck_search, bounded_bfs
from .words import (BACKWARD, FORWARD, MONOID, Alphabet, Derivation, Presentation, Relation,
                    Step, apply_relation, format_word, neighbours, words_up_to)

ALPHA = "mk:alpha"
OMEGA = "mk:omega"
P = "px:p"
HPP_PREFIX = "h2:"


class AlphabetClash(ValueError):
    """Source letters collide with machine letters."""


class GeneratorClash(ValueError):
    """The factors of a free product share generators."""


def src(a: str) -> str:
    return "src:" + a


def st(q: str) -> str:
    return "st:" + q


def side_word(left, state, right, anchor_left, anchor_right) -> tuple:
    w = (ALPHA,) if anchor_left else ()
    w += tuple(left) + (st(state),) + tuple(right)
    return w + ((OMEGA,) if anchor_right else ())


def config_word(config) -> tuple:
    """``alpha u q v omega`` for a one-tape configuration."""
    (t,) = config
    return (ALPHA, *t.left, st(t.state), *t.right, OMEGA)


def word_config(w, states) -> tuple | None:
    """Inverse of :func:`config_word` for words of that exact shape."""
    if len(w) < 3 or w[0] != ALPHA or w[-1] != OMEGA:
        return None
    qs = [i for i, x in enumerate(w) if x.startswith("st:")]
    if len(qs) != 1 or w[qs[0]][3:] not in states:
        return None
    i = qs[0]
    inner = w[1:-1]
    if ALPHA in inner or OMEGA in inner:
        return None
    return (Tape(tuple(w[1:i]), w[i][3:], tuple(w[i + 1:-1])),)


@dataclass
class CompiledH:
    presentation: Presentation
    provenance: tuple
    machine: Machine
    source_letters: tuple
    command_relation: dict = field(default_factory=dict)

    @property
    def machine_block(self) -> range:
        return range(len(self.machine.commands))

    @property
    def aux_block(self) -> range:
        return range(len(self.machine.commands), len(self.presentation.relations))

    def aux_index(self, tag: str) -> int:
        return self.provenance.index(tag)

    @property
    def start_state(self) -> str:
        return self.machine.start[0]


def _machine_relations(m5: Machine):
    rels, prov = [], []
    for c in m5.commands:
        (p,) = c.parts
        v = side_word(p.left, p.state, p.right, p.anchor_left, p.anchor_right)
        v2 = side_word(p.new_left, p.new_state, p.new_right, p.anchor_left, p.anchor_right)
        rels.append(Relation(v2, v))
        prov.append(c.name)
    return rels, prov


def _machine_generators(m5: Machine) -> list:
    (t,) = m5.tapes
    return list(t.letters) + [st(q) for q in t.states] + [ALPHA, OMEGA]


def compile_H(m5: Machine, A) -> CompiledH:
    """The monoid H: machine block, then the auxiliary block."""
    if m5.k != 1:
        raise ValueError("H is compiled from a one-tape machine")
    A = tuple(A)
    gens = _machine_generators(m5)
    source = [src(a) for a in A]
    if set(source) & set(gens) or set(a for a in A) & set(m5.tapes[0].letters):
        raise AlphabetClash("source letters collide with machine letters")
    missing = [a for a in A if yl(a) not in m5.input_letters]
    if missing:
        raise AlphabetClash(f"no left copy of {missing} among the machine's input letters")
    rels, prov = _machine_relations(m5)
    for a in A:
        rels.append(Relation((P, src(a)), (yl(a), P)))
        prov.append(f"aux:pa={a}")
    rels.append(Relation((ALPHA, P), ()))
    prov.append("aux:alpha-p")
    rels.append(Relation((P,), (st(m5.start[0]), OMEGA)))
    prov.append("aux:p-start")
    pres = Presentation(MONOID, Alphabet(source + gens + [P]), tuple(rels), name="H",
                        tags=tuple(prov))
    cmd_rel = {c.name: i for i, c in enumerate(m5.commands)}
    return CompiledH(pres, tuple(prov), m5, A, cmd_rel)


def compile_Hprime(m5: Machine) -> Presentation:
    """Machine relations only, over the machine generators."""
    rels, prov = _machine_relations(m5)
    return Presentation(MONOID, Alphabet(_machine_generators(m5)), tuple(rels), name="H'",
                        tags=tuple(prov))


def rename(p: Presentation, prefix: str = HPP_PREFIX, name: str | None = None) -> Presentation:
    f = lambda w: tuple(prefix + x for x in w)
    rels = tuple(Relation(f(r.lhs), f(r.rhs)) for r in p.relations)
    return Presentation(p.kind, Alphabet(f(p.letters)), rels, name=name or prefix + p.name,
                        tags=p.tags)


@dataclass
class FreeProduct:
    presentation: Presentation
    left: Presentation
    right: Presentation

    @property
    def split(self) -> int:
        return len(self.left.relations)

    def side_of(self, rel: int) -> str:
        return "left" if rel < self.split else "right"

    def project(self, w, side: str) -> tuple:
        keep = self.left.alphabet if side == "left" else self.right.alphabet
        return tuple(x for x in w if x in keep)

    def project_derivation(self, d: Derivation, side: str) -> Derivation:
        """Delete the other factor's letters and the steps that touch them."""
        keep = self.left.alphabet if side == "left" else self.right.alphabet
        offset = 0 if side == "left" else self.split
        words = [self.project(d.words[0], side)]
        steps = []
        for w, s in zip(d.words, d.steps):
            if s.rel is None or self.side_of(s.rel) != side:
                continue
            pos = sum(1 for x in w[:s.pos] if x in keep)
            steps.append(Step(s.rel - offset, s.direction, pos))
        for w, s in zip(d.words[1:], d.steps):
            if s.rel is not None and self.side_of(s.rel) == side:
                words.append(self.project(w, side))
        return Derivation(words, steps)


def free_product(h: Presentation, hpp: Presentation) -> FreeProduct:
    clash = set(h.letters) & set(hpp.letters)
    if clash:
        raise GeneratorClash(f"shared generators: {sorted(clash)[:5]}")
    pres = Presentation(MONOID, Alphabet(h.letters + hpp.letters), h.relations + hpp.relations,
                        name=f"{h.name}*{hpp.name}", tags=tuple(h.tags) + tuple(hpp.tags))
    return FreeProduct(pres, h, hpp)


def compile_P(compiled: CompiledH) -> FreeProduct:
    return free_product(compiled.presentation, rename(compile_Hprime(compiled.machine)))


# word maps --------------------------------------------------------------------

def phi(u) -> tuple:
    return tuple(src(a) for a in u)


def psi(w, A) -> tuple:
    """Keep source letters and their left copies, read both as source letters."""
    back = {src(a): a for a in A}
    back.update({yl(a): a for a in A})
    return tuple(back[x] for x in w if x in back)


# witnesses ----------------------------------------------------------------------

def input_computation(m5: Machine, u, v, space_bound: int, node_cap: int = DEFAULT_NODE_CAP,
                      packer: PackedMachine | None = None):
    """A least-space M5 computation between the input configurations of
    ``u`` and ``v`` (source words), as (configs, command names), or None."""
    pm = packer or PackedMachine(m5)
    a = pm.pack(m5.input_config(tuple(map(yl, u))))
    b = pm.pack(m5.input_config(tuple(map(yl, v))))
    res = bottleneck_search(a, lambda x: ((y, None) for y in pm.neighbours(x)), pm.size,
                            space_bound, node_cap=node_cap, targets=[b])
    if b not in res.cost:
        return None
    configs = [pm.unpack(x) for x in res.path_to(b)]
    names = []
    for c, nxt in zip(configs, configs[1:]):
        names.append(next(cmd.name for cmd, r in m5.successors(c) if r == nxt))
    return configs, names


def entry_derivation(h: CompiledH, u) -> Derivation:
    """u -> alpha p u -> alpha u_l p -> alpha u_l q1 omega."""
    pres = h.presentation
    w = phi(u)
    words, steps = [w], []

    def go(rel, direction, pos):
        nonlocal w
        w = apply_relation(w, pres, rel, direction, pos)
        words.append(w)
        steps.append(Step(rel, direction, pos))

    go(h.aux_index("aux:alpha-p"), BACKWARD, 0)
    for i, a in enumerate(u):
        go(h.aux_index(f"aux:pa={a}"), FORWARD, 1 + i)
    go(h.aux_index("aux:p-start"), FORWARD, 1 + len(u))
    return Derivation(words, steps)


def machine_derivation(h: CompiledH, configs, names) -> Derivation:
    """The configuration words of an M5 computation, one relation per step."""
    words = [config_word(configs[0])]
    steps = []
    for c, name, nxt in zip(configs, names, configs[1:]):
        cmd = h.machine.by_name[name]
        p = cmd.parts[0]
        pos = 0 if p.anchor_left else 1 + len(c[0].left) - len(p.left)
        steps.append(Step(h.command_relation[name], BACKWARD, pos))
        words.append(config_word(nxt))
    return Derivation(words, steps)


def concat(*ds: Derivation) -> Derivation:
    words, steps = list(ds[0].words), list(ds[0].steps)
    for d in ds[1:]:
        if d.words[0] != words[-1]:
            raise ValueError("derivations do not meet")
        words += d.words[1:]
        steps += d.steps
    return Derivation(words, steps)


def phi_witness(h: CompiledH, u, v, computation) -> Derivation:
    """H-derivation phi(u) -> phi(v) built around an M5 computation."""
    configs, names = computation
    return concat(entry_derivation(h, u), machine_derivation(h, configs, names),
                  entry_derivation(h, v).reversed())


# embedding check -----------------------------------------------------------

EQUAL = "equal"
SEPARATED = "separated"
MISMATCH = "mismatch"
INCONCLUSIVE = "inconclusive"


@dataclass
class EmbeddingCell:
    u: tuple
    v: tuple
    status: str
    s_equal: bool
    h_equal: bool | None
    witness_space: int | None = None
    machine_space: int | None = None
    how: str = ""


@dataclass
class EmbeddingReport:
    cells: list
    budget_S: int
    budget_H: int
    machine_bound: int
    space_ok: bool = True
    bound_by_n: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    def count(self, status: str) -> int:
        return sum(1 for c in self.cells if c.status == status)

    @property
    def mismatches(self) -> list:
        return [c for c in self.cells if c.status == MISMATCH]

    @property
    def inconclusive(self) -> list:
        return [c for c in self.cells if c.status == INCONCLUSIVE]

    def render(self) -> str:
        out = ["[embedding]", f"budget S: {self.budget_S}", f"budget H: {self.budget_H}",
               f"machine space bound: {self.machine_bound}"]
        for st_ in (EQUAL, SEPARATED, MISMATCH, INCONCLUSIVE):
            out.append(f"{st_}: {self.count(st_)}")
        out.append(f"witness space within S'5(n)+3: {'yes' if self.space_ok else 'no'}")
        out.append("")
        out.append("[cells]")
        for c in self.cells:
            extra = ""
            if c.witness_space is not None:
                extra = f" space={c.witness_space} machine={c.machine_space}"
            out.append(f"{format_word(c.u)} | {format_word(c.v)} | {c.status}{extra} {c.how}".rstrip())
        return "\n".join(out) + "\n"


def h_search(h: CompiledH, u, v, L_H: int, node_cap: int):
    """Bounded search in H; True, False (not within L_H) or None (cap)."""
    a, b = phi(u), phi(v)
    if max(len(a), len(b)) > L_H:
        return False
    pres = h.presentation
    try:
        parent, _ = bounded_bfs(a, lambda x: ((y, None) for y in neighbours(x, pres, L_H)),
                                len, L_H, target=b, node_cap=node_cap)
    except BudgetExceeded:
        return None
    return b in parent


def embedding_check(p_S: Presentation, h: CompiledH, n_max: int, L: int, L_H: int,
                    machine_bound: int = 40, node_cap: int = DEFAULT_NODE_CAP,
                    keep_witnesses: bool = False) -> EmbeddingReport:
    """Compare equality in S with equality of the images in H on all
    pairs of words up to ``n_max`` (nonempty for semigroups)."""
    classes = equality_classes(p_S, n_max, L, node_cap)
    words = list(words_up_to(p_S.alphabet, n_max, nonempty=p_S.kind != MONOID))
    pm = PackedMachine(h.machine)
    cells = []
    witnesses = {}
    for i, u in enumerate(words):
        for v in words[i:]:
            eq = classes[u] == classes[v]
            if eq:
                comp = input_computation(h.machine, u, v, machine_bound, node_cap, pm)
                if comp is not None:
                    d = phi_witness(h, u, v, comp)
                    if not d.replay(h.presentation) or d.start != phi(u) or d.end != phi(v):
                        raise AssertionError(f"constructed witness does not replay for {u}, {v}")
                    mspace = max(a_length(c) for c in comp[0])
                    cells.append(EmbeddingCell(u, v, EQUAL, True, True, d.space, mspace,
                                               "constructed"))
                    if keep_witnesses:
                        witnesses[(u, v)] = d
                    continue
                found = h_search(h, u, v, L_H, node_cap)
                status = EQUAL if found else INCONCLUSIVE
                cells.append(EmbeddingCell(u, v, status, True, found, how="searched"))
            else:
                found = h_search(h, u, v, L_H, node_cap)
                status = {True: MISMATCH, False: SEPARATED, None: INCONCLUSIVE}[found]
                cells.append(EmbeddingCell(u, v, status, False, found, how="searched"))
    # the least-space machine computations give a lower bound for S'5(n)
    bound = {}
    for n in range(n_max + 1):
        vals = [c.machine_space for c in cells
                if c.machine_space is not None and max(len(c.u), len(c.v)) <= n]
        bound[n] = max(vals + [n])
    ok = all(c.witness_space <= bound[max(len(c.u), len(c.v))] + 3
             for c in cells if c.witness_space is not None)
    return EmbeddingReport(cells, L, L_H, machine_bound, ok, bound, witnesses)
