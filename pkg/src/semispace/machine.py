"""Multi-tape Turing machines in the command formalism.

A configuration has one tape per index, each ``alpha_i U_i omega_i`` with
``U_i = u q v``.  The endmarkers are implicit: a :class:`Tape` stores the
letters left of the head, the state letter and the letters right of it.
A command has one :class:`Part` per tape; a part rewrites a suffix of
``u`` and a prefix of ``v`` and may insist that the suffix is all of
``u`` (anchored at alpha) or that the prefix is all of ``v`` (anchored at
omega).

Text format, one item per line::

    machine <name>
    flavor: recognizing | input-output | equivalence
    tapes: 2
    tape 1 letters: a b
    tape 1 states: q0 q1
    ...
    input: a b
    start: q0 r0
    accept: q1 r0
    reject: q2 r0            (optional, repeatable)
    command <name>: a q0 -> q1 b ; α_2 r0 ω_2 -> α_2 r0 ω_2

Parts are listed in tape order; ``α_j`` and ``ω_j`` mark anchors.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .search import (DEFAULT_NODE_CAP, EXACT, LOWER_BOUND, BudgetExceeded,
                     MinimaxSweep, bottleneck_search, bounded_bfs, trace)
from .words import words_up_to

RECOGNIZING = "recognizing"
INPUT_OUTPUT = "input-output"
EQUIVALENCE = "equivalence"
FLAVORS = (RECOGNIZING, INPUT_OUTPUT, EQUIVALENCE)

INVERSE_SUFFIX = "^-1"


class MachineError(ValueError):
    """Malformed machine text or an ill-formed machine."""


class NondeterministicChoice(RuntimeError):
    """A deterministic run found more than one applicable command."""

    def __init__(self, config, names):
        super().__init__(f"commands {', '.join(names)} all apply")
        self.config = config
        self.names = names


class Tape(NamedTuple):
    left: tuple
    state: str
    right: tuple


class Part(NamedTuple):
    left: tuple
    state: str
    right: tuple
    new_left: tuple
    new_state: str
    new_right: tuple
    anchor_left: bool = False
    anchor_right: bool = False

    def inverse(self) -> "Part":
        return Part(self.new_left, self.new_state, self.new_right,
                    self.left, self.state, self.right,
                    self.anchor_left, self.anchor_right)

    def apply(self, tape: Tape) -> Tape | None:
        u, q, v = tape
        if q != self.state:
            return None
        L, R = self.left, self.right
        nl, nr = len(L), len(R)
        if self.anchor_left:
            if u != L:
                return None
        elif nl and u[len(u) - nl:] != L:
            return None
        if self.anchor_right:
            if v != R:
                return None
        elif nr and v[:nr] != R:
            return None
        if len(u) < nl or len(v) < nr:
            return None
        return Tape(u[:len(u) - nl] + self.new_left, self.new_state, self.new_right + v[nr:])

    @property
    def growth(self) -> int:
        return len(self.new_left) + len(self.new_right) - len(self.left) - len(self.right)


def free(state, new_state, left=(), right=(), new_left=(), new_right=(),
         anchor_left=False, anchor_right=False) -> Part:
    """Keyword-friendly Part constructor."""
    return Part(tuple(left), state, tuple(right), tuple(new_left), new_state,
                tuple(new_right), anchor_left, anchor_right)


def inverse_name(name: str) -> str:
    if name.endswith(INVERSE_SUFFIX):
        return name[:-len(INVERSE_SUFFIX)]
    return name + INVERSE_SUFFIX


def is_negative(name: str) -> bool:
    return name.endswith(INVERSE_SUFFIX)


@dataclass(frozen=True)
class Command:
    name: str
    parts: tuple

    def inverse(self) -> "Command":
        return Command(inverse_name(self.name), tuple(p.inverse() for p in self.parts))

    @property
    def lhs_vector(self):
        return tuple(p.state for p in self.parts)

    @property
    def rhs_vector(self):
        return tuple(p.new_state for p in self.parts)

    @property
    def growth(self) -> int:
        return sum(p.growth for p in self.parts)

    def apply(self, config):
        out = []
        for part, tape in zip(self.parts, config):
            t = part.apply(tape)
            if t is None:
                return None
            out.append(t)
        return tuple(out)


class TapeSpec(NamedTuple):
    letters: tuple
    states: tuple


def a_length(config) -> int:
    """Number of tape letters, ignoring state letters and endmarkers."""
    return sum(len(t.left) + len(t.right) for t in config)


def render_config(config) -> str:
    out = []
    for i, t in enumerate(config, 1):
        out.append(" ".join([f"α_{i}", *t.left, t.state, *t.right, f"ω_{i}"]))
    return "  ".join(out)


@dataclass(frozen=True)
class Machine:
    tapes: tuple
    input_letters: tuple
    start: tuple
    accept: tuple
    commands: tuple
    flavor: str = RECOGNIZING
    reject: tuple = ()
    name: str = "M"

    @property
    def k(self) -> int:
        return len(self.tapes)

    @cached_property
    def by_name(self) -> dict:
        return {c.name: c for c in self.commands}

    @cached_property
    def _index(self):
        # state vector -> (free commands, by last left letter, by first right letter)
        table = {}
        for i, c in enumerate(self.commands):
            slot = table.setdefault(c.lhs_vector, ([], {}, {}))
            p = c.parts[0]
            if p.left:
                slot[1].setdefault(p.left[-1], []).append(i)
            elif p.right:
                slot[2].setdefault(p.right[0], []).append(i)
            else:
                slot[0].append(i)
        return table

    def candidates(self, config) -> list:
        slot = self._index.get(tuple(t.state for t in config))
        if slot is None:
            return []
        t0 = config[0]
        idx = list(slot[0])
        if t0.left:
            idx += slot[1].get(t0.left[-1], ())
        if t0.right:
            idx += slot[2].get(t0.right[0], ())
        idx.sort()
        return [self.commands[i] for i in idx]

    def successors(self, config) -> list:
        """``(command, new config)`` for every applicable command, in
        declaration order."""
        out = []
        for c in self.candidates(config):
            r = c.apply(config)
            if r is not None:
                out.append((c, r))
        return out

    def neighbours(self, config):
        for c in self.candidates(config):
            r = c.apply(config)
            if r is not None:
                yield r

    @cached_property
    def letters(self) -> frozenset:
        return frozenset(a for t in self.tapes for a in t.letters)

    @cached_property
    def states(self) -> frozenset:
        return frozenset(q for t in self.tapes for q in t.states)

    def input_config(self, u: Sequence[str]):
        tapes = [Tape(tuple(u), self.start[0], ())]
        tapes += [Tape((), q, ()) for q in self.start[1:]]
        return tuple(tapes)

    def is_accept(self, config) -> bool:
        if tuple(t.state for t in config) != self.accept:
            return False
        rest = config[1:] if self.flavor == INPUT_OUTPUT else config
        if self.flavor == INPUT_OUTPUT and config[0].right:
            return False
        return all(not t.left and not t.right for t in rest)

    def output_of(self, config):
        return config[0].left

    def replace(self, **kw) -> "Machine":
        fields = dict(tapes=self.tapes, input_letters=self.input_letters, start=self.start,
                      accept=self.accept, commands=self.commands, flavor=self.flavor,
                      reject=self.reject, name=self.name)
        fields.update(kw)
        return Machine(**fields)


def validate_machine(m: Machine) -> list[str]:
    problems = []
    if m.flavor not in FLAVORS:
        problems.append(f"unknown flavor {m.flavor!r}")
    seen_letters, seen_states = {}, {}
    for j, t in enumerate(m.tapes, 1):
        for a in t.letters:
            if a in seen_letters:
                problems.append(f"letter {a} on tapes {seen_letters[a]} and {j}")
            seen_letters[a] = j
        for q in t.states:
            if q in seen_states:
                problems.append(f"state {q} on tapes {seen_states[q]} and {j}")
            seen_states[q] = j
            if q in seen_letters:
                problems.append(f"token {q} is both a letter and a state")
        if not t.states:
            problems.append(f"tape {j} has no states")
    for a in m.input_letters:
        if a not in m.tapes[0].letters:
            problems.append(f"input letter {a} not on tape 1")
    for label, vec in [("start", m.start), ("accept", m.accept)] + [("reject", r) for r in m.reject]:
        if len(vec) != m.k:
            problems.append(f"{label} vector has length {len(vec)}, expected {m.k}")
            continue
        for j, q in enumerate(vec):
            if q not in m.tapes[j].states:
                problems.append(f"{label} state {q} not a state of tape {j + 1}")
    names = set()
    tape_sets = [TapeSpec(frozenset(t.letters), frozenset(t.states)) for t in m.tapes]
    for c in m.commands:
        if c.name in names:
            problems.append(f"duplicate command name {c.name}")
        names.add(c.name)
        if len(c.parts) != m.k:
            problems.append(f"command {c.name} has {len(c.parts)} parts for {m.k} tapes")
            continue
        for j, (p, t) in enumerate(zip(c.parts, tape_sets), 1):
            for q in (p.state, p.new_state):
                if q not in t.states:
                    problems.append(f"command {c.name}: {q} is not a state of tape {j}")
            for a in p.left + p.right + p.new_left + p.new_right:
                if a not in t.letters:
                    problems.append(f"command {c.name}: {a} is not a letter of tape {j}")
    return problems


def is_symmetric(m: Machine) -> bool:
    names = m.by_name
    return all(inverse_name(c.name) in names and names[inverse_name(c.name)] == c.inverse()
               for c in m.commands)


def symmetrize(m: Machine) -> Machine:
    """Add the inverse of every command; the result is an equivalence
    machine whose positive commands are those of ``m``."""
    cmds = list(m.commands) + [c.inverse() for c in m.commands]
    return m.replace(commands=tuple(cmds), flavor=EQUIVALENCE, name=m.name + "sym")


# running -------------------------------------------------------------------

@dataclass
class Computation:
    configs: list
    history: list
    stop: str = ""

    @property
    def space(self) -> int:
        return max(a_length(c) for c in self.configs)

    @property
    def start(self):
        return self.configs[0]

    @property
    def end(self):
        return self.configs[-1]

    def __len__(self):
        return len(self.history)


ACCEPTED = "accepted"
REJECTED = "rejected"
STUCK = "stuck"
BOUND_HIT = "bound-hit"
HALTED = "halted"
SPACE_BOUND = "space-bound"
STEP_BOUND = "step-bound"


def run(m: Machine, config, space_bound: int, step_bound: int) -> Computation:
    """Deterministic run; ``stop`` says why it ended (accepted, halted,
    space-bound, step-bound)."""
    comp = Computation([config], [])
    while True:
        if m.is_accept(config):
            comp.stop = ACCEPTED
            return comp
        succ = m.successors(config)
        if not succ:
            comp.stop = HALTED
            return comp
        if len(succ) > 1:
            raise NondeterministicChoice(config, [c.name for c, _ in succ])
        if len(comp.history) >= step_bound:
            comp.stop = STEP_BOUND
            return comp
        cmd, nxt = succ[0]
        if a_length(nxt) > space_bound:
            comp.stop = SPACE_BOUND
            return comp
        comp.history.append(cmd.name)
        comp.configs.append(nxt)
        config = nxt


def replay(m: Machine, comp: Computation) -> bool:
    c = comp.configs[0]
    for name, nxt in zip(comp.history, comp.configs[1:]):
        cmd = m.by_name.get(name)
        if cmd is None or cmd.apply(c) != nxt:
            return False
        c = nxt
    return len(comp.history) + 1 == len(comp.configs)


def _successor_pairs(m: Machine):
    return lambda c: ((r, cmd.name) for cmd, r in m.successors(c))


def accepts(m: Machine, u, space_bound: int, step_bound: int = 10 ** 6,
            node_cap: int = DEFAULT_NODE_CAP) -> str:
    """accepted, rejected, stuck or bound-hit for the input word ``u``."""
    w = m.input_config(tuple(u))
    try:
        comp = run(m, w, space_bound, step_bound)
    except NondeterministicChoice:
        parent, pruned = bounded_bfs(w, _successor_pairs(m), a_length, space_bound,
                                     node_cap=node_cap)
        if any(m.is_accept(c) for c in parent):
            return ACCEPTED
        return BOUND_HIT if pruned else REJECTED
    if comp.stop == ACCEPTED:
        return ACCEPTED
    if comp.stop == HALTED:
        return REJECTED if a_length(comp.end) == 0 else STUCK
    return BOUND_HIT


def computation_between(m: Machine, w, w2, space_bound: int, node_cap: int = DEFAULT_NODE_CAP,
                        least_space: bool = True) -> Computation | None:
    """A computation w -> w2 (least space, then shortest) within the bound."""
    succ = _successor_pairs(m)
    bound = space_bound
    if least_space:
        res = bottleneck_search(w, succ, a_length, space_bound, node_cap, targets=[w2])
        if w2 not in res.cost:
            return None
        bound = res.cost[w2]
    parent, _ = bounded_bfs(w, succ, a_length, bound, target=w2, node_cap=node_cap)
    if w2 not in parent:
        return None
    configs, names = trace(parent, w2)
    return Computation(configs, names)


def is_reachable(m: Machine, config, space_bound: int, inputs: Iterable | None = None,
                 node_cap: int = DEFAULT_NODE_CAP) -> bool:
    """Whether ``config`` is reachable from some input configuration within
    the bound.  ``inputs`` defaults to every word up to the config's size."""
    if inputs is None:
        inputs = words_up_to(m.input_letters, max(a_length(config), 0))
    for u in inputs:
        parent, _ = bounded_bfs(m.input_config(u), _successor_pairs(m), a_length, space_bound,
                                target=config, node_cap=node_cap)
        if config in parent:
            return True
    return False


# space -----------------------------------------------------------------------

@dataclass
class SpaceTable:
    """Values of S or S' at n = 0 .. n_max, with an exactness status."""

    label: str
    values: dict
    status: str = EXACT
    note: str = ""

    def __getitem__(self, n):
        return self.values[n]


def _input_words(m: Machine, n: int, inputs=None):
    if inputs is not None:
        return [tuple(u) for u in inputs if len(u) <= n]
    return list(words_up_to(m.input_letters, n))


def space_complexity(m: Machine, n_max: int, space_bound: int, inputs=None,
                     node_cap: int = DEFAULT_NODE_CAP, step_bound: int = 10 ** 6) -> SpaceTable:
    """S(0..n_max) following the machine's flavor.

    recognizing: the space of the run on w(u), |u| <= n.
    input-output: least space of a computation from w(u) to an output
    configuration whose output has length <= n.
    equivalence: least space of a computation between connected inputs
    w(u), w(v) with |u|, |v| <= n.
    """
    words = _input_words(m, n_max, inputs)
    status = EXACT
    values = {n: 0 for n in range(n_max + 1)}
    if m.flavor == EQUIVALENCE:
        cfgs = [m.input_config(u) for u in words]
        sweep = MinimaxSweep(cfgs, m.neighbours, a_length, space_bound, node_cap).run()
        status = EXACT if sweep.complete else LOWER_BOUND
        prof = sweep.profile(n_max, baseline=lambda n: max([len(u) for u in words if len(u) <= n], default=0))
        return SpaceTable(f"S[{m.name}]", prof, status)
    per_word = {}
    for u in words:
        w = m.input_config(u)
        try:
            comp = run(m, w, space_bound, step_bound)
            if comp.stop in (ACCEPTED, HALTED):
                if m.flavor == INPUT_OUTPUT and comp.stop != ACCEPTED:
                    continue
                per_word[u] = (comp.space, len(m.output_of(comp.end)) if m.flavor == INPUT_OUTPUT else 0)
            else:
                status = LOWER_BOUND
        except NondeterministicChoice:
            try:
                res = bottleneck_search(w, _successor_pairs(m), a_length, space_bound, node_cap)
            except BudgetExceeded:
                status = LOWER_BOUND
                continue
            best = None
            for c, cost in res.cost.items():
                if m.is_accept(c):
                    out_len = len(m.output_of(c)) if m.flavor == INPUT_OUTPUT else 0
                    key = (cost, out_len)
                    if best is None or key < best:
                        best = key
            if best is None:
                if res.pruned:
                    status = LOWER_BOUND
                continue
            per_word[u] = best
    for n in range(n_max + 1):
        vals = [s for u, (s, out_len) in per_word.items() if len(u) <= n and out_len <= n]
        values[n] = max(vals, default=0)
    return SpaceTable(f"S[{m.name}]", values, status)


def _tape_fillings(letters, anchor_left, anchor_right, budget):
    """(count, prefix, suffix) extensions for one tape within the budget."""
    out = []
    lefts = [()] if anchor_left else list(words_up_to(letters, budget))
    rights = [()] if anchor_right else list(words_up_to(letters, budget))
    for x in lefts:
        for z in rights:
            if len(x) + len(z) <= budget:
                out.append((len(x) + len(z), x, z))
    return out


def configs_matching(m: Machine, cmd: Command, n: int):
    """Every configuration of a-length <= n to which ``cmd`` applies."""
    base = sum(len(p.left) + len(p.right) for p in cmd.parts)
    if base > n:
        return
    budget = n - base
    options = [_tape_fillings(t.letters, p.anchor_left, p.anchor_right, budget)
               for p, t in zip(cmd.parts, m.tapes)]

    def rec(j, left):
        if j == len(options):
            yield ()
            return
        p = cmd.parts[j]
        for cnt, x, z in options[j]:
            if cnt > left:
                continue
            tape = Tape(x + p.left, p.state, p.right + z)
            for rest in rec(j + 1, left - cnt):
                yield (tape,) + rest

    yield from rec(0, budget)


def seed_domain(m: Machine, n: int) -> list:
    """All non-isolated configurations of a-length <= n (every computation
    of positive length starts at one of them)."""
    seen = {}
    for cmd in m.commands:
        for c in configs_matching(m, cmd, n):
            seen.setdefault(c, None)
    return list(seen)


def generalized_space(m: Machine, n_max: int, space_bound: int, domain=None,
                      node_cap: int = DEFAULT_NODE_CAP) -> SpaceTable:
    """S'(0..n_max): the least space of computations between any two
    configurations of a-length <= n.

    With the default domain every non-isolated configuration is a seed and
    the value is exact relative to the bound.  A caller-supplied domain
    gives a lower bound.
    """
    status = EXACT
    if domain is None:
        seeds = seed_domain(m, n_max)
    else:
        seeds = [c for c in domain if a_length(c) <= n_max]
        status = LOWER_BOUND
    if m.flavor == EQUIVALENCE or is_symmetric(m):
        sweep = MinimaxSweep(seeds, m.neighbours, a_length, space_bound, node_cap).run()
        if not sweep.complete:
            status = LOWER_BOUND
        return SpaceTable(f"S'[{m.name}]", sweep.profile(n_max), status)
    values = {n: n for n in range(n_max + 1)}
    succ = _successor_pairs(m)
    for s in seeds:
        try:
            res = bottleneck_search(s, succ, a_length, space_bound, node_cap)
        except BudgetExceeded:
            status = LOWER_BOUND
            continue
        a0 = a_length(s)
        for c, cost in res.cost.items():
            k = max(a0, a_length(c))
            if k <= n_max:
                for n in range(k, n_max + 1):
                    if cost > values[n]:
                        values[n] = cost
    return SpaceTable(f"S'[{m.name}]", values, status)


def reachable_pairs(m: Machine, n: int, space_bound: int, domain=None,
                    node_cap: int = DEFAULT_NODE_CAP) -> dict:
    """Least space for every ordered pair (w0, wt) of configurations of
    a-length <= n with a computation w0 -> wt inside the bound."""
    seeds = seed_domain(m, n) if domain is None else list(domain)
    pairs = {}
    succ = _successor_pairs(m)
    for s in seeds:
        res = bottleneck_search(s, succ, a_length, space_bound, node_cap)
        for c, cost in res.cost.items():
            if a_length(c) <= n:
                pairs[(s, c)] = cost
    return pairs


# text format ------------------------------------------------------------------

def _fmt_part(p: Part, j: int) -> str:
    a, w = f"α_{j}", f"ω_{j}"

    def side(left, q, right):
        toks = ([a] if p.anchor_left else []) + list(left) + [q] + list(right) + ([w] if p.anchor_right else [])
        return " ".join(toks)

    return f"{side(p.left, p.state, p.right)} -> {side(p.new_left, p.new_state, p.new_right)}"


def format_machine(m: Machine) -> str:
    out = [f"machine {m.name}", f"flavor: {m.flavor}", f"tapes: {m.k}"]
    for j, t in enumerate(m.tapes, 1):
        out.append(f"tape {j} letters: {' '.join(t.letters)}".rstrip())
        out.append(f"tape {j} states: {' '.join(t.states)}")
    out.append(f"input: {' '.join(m.input_letters)}".rstrip())
    out.append(f"start: {' '.join(m.start)}")
    out.append(f"accept: {' '.join(m.accept)}")
    for r in m.reject:
        out.append(f"reject: {' '.join(r)}")
    for c in m.commands:
        parts = " ; ".join(_fmt_part(p, j) for j, p in enumerate(c.parts, 1))
        out.append(f"command {c.name}: {parts}")
    return "\n".join(out) + "\n"


def _parse_side(tokens, j, states):
    a, w = f"α_{j}", f"ω_{j}"
    anchor_left = bool(tokens) and tokens[0] == a
    anchor_right = bool(tokens) and tokens[-1] == w
    body = tokens[1 if anchor_left else 0:len(tokens) - 1 if anchor_right else len(tokens)]
    qs = [i for i, t in enumerate(body) if t in states]
    if len(qs) != 1:
        raise MachineError(f"tape {j}: expected exactly one state letter in {' '.join(tokens)!r}")
    i = qs[0]
    return tuple(body[:i]), body[i], tuple(body[i + 1:]), anchor_left, anchor_right


def parse_machine(text: str) -> Machine:
    lines = [ln.rstrip("\n") for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or not lines[0].startswith("machine"):
        raise MachineError("first line must be 'machine <name>'")
    name = lines[0][len("machine"):].strip() or "M"
    header = {}
    tape_letters, tape_states = {}, {}
    rejects, commands = [], []
    for ln in lines[1:]:
        if ln.startswith("command "):
            head, _, body = ln[len("command "):].partition(" ")
            if not head.endswith(":") or len(head) < 2:
                raise MachineError(f"cannot read command line {ln!r}")
            commands.append((head[:-1], body.strip()))
            continue
        key, sep, rest = ln.partition(":")
        if not sep:
            raise MachineError(f"cannot read line {ln!r}")
        key, rest = key.strip(), rest.strip()
        if key.startswith("tape "):
            bits = key.split()
            if len(bits) != 3 or bits[2] not in ("letters", "states"):
                raise MachineError(f"cannot read line {ln!r}")
            j = int(bits[1])
            (tape_letters if bits[2] == "letters" else tape_states)[j] = tuple(rest.split())
        elif key == "reject":
            rejects.append(tuple(rest.split()))
        elif key in ("flavor", "tapes", "input", "start", "accept"):
            header[key] = rest
        else:
            raise MachineError(f"unknown key {key!r}")
    try:
        k = int(header["tapes"])
    except (KeyError, ValueError):
        raise MachineError("missing or bad 'tapes:' line") from None
    tapes = tuple(TapeSpec(tape_letters.get(j, ()), tape_states.get(j, ())) for j in range(1, k + 1))
    cmds = []
    for cname, body in commands:
        chunks = [c.strip() for c in body.split(";")]
        if len(chunks) != k:
            raise MachineError(f"command {cname}: {len(chunks)} parts for {k} tapes")
        parts = []
        for j, chunk in enumerate(chunks, 1):
            if chunk.count("->") != 1:
                raise MachineError(f"command {cname}: part {j} needs one '->'")
            lhs, rhs = chunk.split("->")
            states = set(tapes[j - 1].states)
            L, q, R, al, ar = _parse_side(lhs.split(), j, states)
            L2, q2, R2, al2, ar2 = _parse_side(rhs.split(), j, states)
            if (al, ar) != (al2, ar2):
                raise MachineError(f"command {cname}: anchors differ between sides of part {j}")
            parts.append(Part(L, q, R, L2, q2, R2, al, ar))
        cmds.append(Command(cname, tuple(parts)))
    m = Machine(tapes=tapes, input_letters=tuple(header.get("input", "").split()),
                start=tuple(header.get("start", "").split()),
                accept=tuple(header.get("accept", "").split()),
                commands=tuple(cmds), flavor=header.get("flavor", RECOGNIZING),
                reject=tuple(rejects), name=name)
    problems = validate_machine(m)
    if problems:
        raise MachineError("; ".join(problems[:5]))
    return m
