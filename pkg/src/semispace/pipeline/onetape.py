"""One-tape simulation of the closure machine, and the doubled alphabet.

A configuration of the k-tape machine is laid out on one tape as::

    α  α:1 u_1 q_1 v_1 ω:1  α:2 ... ω:k  <vector>  ω

where the endmarkers of the simulated tapes and its state letters are
ordinary tape letters and the head state names the state vector.  One
simulated command is a block of small steps: memorize the command at the
right end, walk left through the tapes rewriting each part, turn at the
left end, walk back, and forget the command.  Every intermediate state
is indexed by the command, so inside a block at most one positive and at
most one negative command applies.

In the doubled machine a tape letter left of the head is written with
``yl:`` and one right of it with ``yr:``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..machine import (EQUIVALENCE, Command, Machine, Part, Tape, TapeSpec, is_negative,
                       symmetrize)

START = "m4:start"
PRE_L = "m4:pre.L"
PRE_R = "m4:pre.R"


def alpha_mark(j):
    return f"α:{j}"


def omega_mark(j):
    return f"ω:{j}"


@dataclass
class OneTape:
    machine: Machine
    source: Machine
    vectors: dict = field(default_factory=dict)

    def vector_state(self, vec):
        return self.vectors[tuple(vec)]

    def encode(self, config):
        """The configuration with a vector-state head standing for ``config``."""
        flat = []
        for j, t in enumerate(config, 1):
            flat += [alpha_mark(j), *t.left, t.state, *t.right, omega_mark(j)]
        return (Tape(tuple(flat), self.vectors[tuple(t.state for t in config)], ()),)

    def decode(self, config4):
        """Inverse of :meth:`encode`; None for any other configuration."""
        (t,) = config4
        names = {v: k for k, v in self.vectors.items()}
        if t.right or t.state not in names:
            return None
        vec = names[t.state]
        word = t.left
        tapes = []
        i = 0
        for j, spec in enumerate(self.source.tapes, 1):
            if i >= len(word) or word[i] != alpha_mark(j):
                return None
            try:
                end = word.index(omega_mark(j), i)
            except ValueError:
                return None
            seg = word[i + 1:end]
            qs = [x for x, a in enumerate(seg) if a in spec.states]
            if len(qs) != 1 or any(a not in spec.letters for x, a in enumerate(seg) if x != qs[0]):
                return None
            q = qs[0]
            tapes.append(Tape(tuple(seg[:q]), seg[q], tuple(seg[q + 1:])))
            i = end + 1
        if i != len(word) or tuple(tp.state for tp in tapes) != vec:
            return None
        return tuple(tapes)


def _step_left(x, state, new_state):
    return Part((x,), state, (), (), new_state, (x,), False, False)


def _step_right(x, state, new_state):
    return Part((), state, (x,), (x,), new_state, (), False, False)


def build_m4(m3: Machine) -> OneTape:
    k = m3.k
    positive = [c for c in m3.commands if not is_negative(c.name)]
    vectors = {}
    for vec in [m3.start] + [v for c in positive for v in (c.lhs_vector, c.rhs_vector)]:
        vectors.setdefault(tuple(vec), f"m4:v{len(vectors)}")
    letters = []
    for j, t in enumerate(m3.tapes, 1):
        letters += [alpha_mark(j), *t.letters, *t.states, omega_mark(j)]
    Y = {j: list(t.letters) for j, t in enumerate(m3.tapes, 1)}
    A = list(m3.input_letters)

    cmds = []
    states = [START, PRE_L, PRE_R] + list(vectors.values())

    def add(name, part):
        cmds.append(Command(name, (part,)))

    add("pre.mark", Part((), START, (), (), PRE_L, (), False, True))
    for a in A:
        add(f"pre.left.{a}", _step_left(a, PRE_L, PRE_L))
    add("pre.turn", Part((), PRE_L, (), (alpha_mark(1),), PRE_R, (), True, False))
    for a in A:
        add(f"pre.right.{a}", _step_right(a, PRE_R, PRE_R))
    tail = [m3.start[0], omega_mark(1)]
    for j in range(2, k + 1):
        tail += [alpha_mark(j), m3.start[j - 1], omega_mark(j)]
    add("pre.lay", Part((), PRE_R, (), tuple(tail), vectors[tuple(m3.start)], (), False, True))

    for c in positive:
        n = c.name
        out = {i: f"{n}#{i}o" for i in range(k + 1)}
        inn = {i: f"{n}#{i}i" for i in range(1, k + 1)}
        ret = f"{n}#r"
        states += [out[k]]
        add(f"{n}#mem", Part((), vectors[c.lhs_vector], (), (), out[k], (), False, True))
        for i in range(k, 0, -1):
            p = c.parts[i - 1]
            if i < k:
                for y in Y[i + 1] + [alpha_mark(i + 1)]:
                    add(f"{n}#{i}o.{y}", _step_left(y, out[i], out[i]))
            add(f"{n}#{i}o.enter", Part((omega_mark(i),), out[i], (), (), inn[i], (omega_mark(i),),
                                        False, False))
            for y in Y[i]:
                add(f"{n}#{i}i.{y}", _step_left(y, inn[i], inn[i]))
            al = (alpha_mark(i),) if p.anchor_left else ()
            om = (omega_mark(i),) if p.anchor_right else ()
            add(f"{n}#{i}i.rw", Part(al + p.left + (p.state,), inn[i], p.right + om,
                                     al + p.new_left, out[i - 1], (p.new_state,) + p.new_right + om,
                                     False, False))
            states += [inn[i], out[i - 1]]
        for y in Y[1] + [alpha_mark(1)]:
            add(f"{n}#0o.{y}", _step_left(y, out[0], out[0]))
        add(f"{n}#turn", Part((), out[0], (), (), ret, (), True, False))
        for y in letters:
            add(f"{n}#r.{y}", _step_right(y, ret, ret))
        add(f"{n}#forget", Part((), ret, (), (), vectors[c.rhs_vector], (), False, True))
        states.append(ret)

    spec = TapeSpec(tuple(letters), tuple(dict.fromkeys(states)))
    base = Machine(tapes=(spec,), input_letters=tuple(A), start=(START,), accept=(START,),
                   commands=tuple(cmds), flavor=EQUIVALENCE, name="M4")
    m4 = symmetrize(base).replace(name="M4")
    return OneTape(m4, m3, vectors)


# doubled alphabet -------------------------------------------------------------

def yl(x):
    return f"yl:{x}"


def yr(x):
    return f"yr:{x}"


def double_part(p: Part) -> Part:
    return Part(tuple(map(yl, p.left)), p.state, tuple(map(yr, p.right)),
                tuple(map(yl, p.new_left)), p.new_state, tuple(map(yr, p.new_right)),
                p.anchor_left, p.anchor_right)


def build_m5(m4: Machine) -> Machine:
    """Rename every letter by its side of the head."""
    if m4.k != 1:
        raise ValueError("doubling applies to one-tape machines")
    (t,) = m4.tapes
    letters = tuple(map(yl, t.letters)) + tuple(map(yr, t.letters))
    cmds = tuple(Command(c.name, (double_part(c.parts[0]),)) for c in m4.commands)
    return m4.replace(tapes=(TapeSpec(letters, t.states),),
                      input_letters=tuple(map(yl, m4.input_letters)), commands=cmds, name="M5")


def double_config(config):
    (t,) = config
    return (Tape(tuple(map(yl, t.left)), t.state, tuple(map(yr, t.right))),)


def undouble_config(config):
    (t,) = config
    return (Tape(tuple(x[3:] for x in t.left), t.state, tuple(x[3:] for x in t.right)),)
