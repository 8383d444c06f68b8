"""A tiny assembler for multi-tape command machines.

Control flow lives in a *control label*; on tape ``t`` the label ``c`` is
the state letter ``c@t``, so a whole state vector is named by one label.
Each command moves from one label to another and gives a part for every
tape it touches; the remaining tapes get the context-free part
``c@t -> d@t``.

The macros below cover what the input-output wrapper needs: walking a
head across a tape, copying, erasing and counting.  Each one expects
heads at agreed ends and leaves them there again.
"""

from __future__ import annotations

from typing import NamedTuple

from ..machine import Command, Machine, Part, TapeSpec


class Spec(NamedTuple):
    left: tuple = ()
    right: tuple = ()
    new_left: tuple = ()
    new_right: tuple = ()
    anchors: str = ""


def spec(left=(), right=(), new_left=(), new_right=(), anchors=""):
    return Spec(tuple(left), tuple(right), tuple(new_left), tuple(new_right), anchors)


class Assembler:
    def __init__(self, tapes, letters):
        self.tapes = list(tapes)
        self.letters = {t: list(letters[t]) for t in self.tapes}
        self.states = {t: [] for t in self.tapes}
        self.commands = []
        self._names = set()

    def state(self, ctrl, tape):
        return f"{ctrl}@{tape}"

    def add_state(self, tape, q):
        if q not in self.states[tape]:
            self.states[tape].append(q)

    def raw(self, name, parts):
        """Emit a command from explicit per-tape parts (dict tape -> Part)."""
        if name in self._names:
            raise ValueError(f"duplicate command {name}")
        self._names.add(name)
        row = []
        for t in self.tapes:
            p = parts[t]
            self.add_state(t, p.state)
            self.add_state(t, p.new_state)
            row.append(p)
        self.commands.append(Command(name, tuple(row)))

    def emit(self, name, src, dst, **specs):
        parts = {}
        for t in self.tapes:
            s = specs.get(t, Spec())
            parts[t] = Part(s.left, self.state(src, t), s.right, s.new_left, self.state(dst, t),
                            s.new_right, "L" in s.anchors, "R" in s.anchors)
        self.raw(name, parts)

    def vector(self, ctrl):
        return tuple(self.state(ctrl, t) for t in self.tapes)

    def build(self, input_letters, start, accept, reject=(), flavor="input-output", name="M"):
        tapes = tuple(TapeSpec(tuple(self.letters[t]), tuple(self.states[t])) for t in self.tapes)
        return Machine(tapes=tapes, input_letters=tuple(input_letters), start=tuple(start),
                       accept=tuple(accept), commands=tuple(self.commands), flavor=flavor,
                       reject=tuple(reject), name=name)


EMPTY = "LR"


def walk_right(asm, prefix, entry, exit, tape, letters):
    """Move the head of ``tape`` from anywhere to its right end."""
    for x in letters:
        asm.emit(f"{prefix}.{x}", entry, entry, **{tape: spec(right=[x], new_left=[x])})
    asm.emit(f"{prefix}.end", entry, exit, **{tape: spec(anchors="R")})


def walk_left(asm, prefix, entry, exit, tape, letters):
    """Move the head of ``tape`` from anywhere to its left end."""
    for x in letters:
        asm.emit(f"{prefix}.{x}", entry, entry, **{tape: spec(left=[x], new_right=[x])})
    asm.emit(f"{prefix}.end", entry, exit, **{tape: spec(anchors="L")})


def copy_onto(asm, prefix, entry, exit, src, dst, mapping):
    """Append the contents of ``src`` (head at left) to the right end of
    ``dst`` through ``mapping``, then return the head of ``src`` left."""
    back = f"{prefix}.back"
    for x, y in mapping.items():
        asm.emit(f"{prefix}.{x}", entry, entry,
                 **{src: spec(right=[x], new_left=[x]), dst: spec(new_left=[y], anchors="R")})
    asm.emit(f"{prefix}.end", entry, back, **{src: spec(anchors="R")})
    walk_left(asm, back, back, exit, src, list(mapping))


def erase_from_left(asm, prefix, entry, exit, tape, letters):
    """Erase ``tape`` whose head sits at the left end."""
    for x in letters:
        asm.emit(f"{prefix}.{x}", entry, entry, **{tape: spec(right=[x], anchors="L")})
    asm.emit(f"{prefix}.end", entry, exit, **{tape: spec(anchors=EMPTY)})
