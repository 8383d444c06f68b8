"""The multi-tape passes: input-output wrapper, padded machine, closure.

M1 turns a recognizer of ``u v'`` into a machine that prints the
shortlex-least word equal to its input.  M2 adds a tape of ``*`` squares
so that every command of M1 keeps the total number of tape letters
fixed.  M3 adds the inverse of every command.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..machine import (INPUT_OUTPUT, Command, Machine, Part, TapeSpec,
                       symmetrize)
from .assembler import EMPTY, Assembler, spec


class MalformedM0(ValueError):
    """The recognizer does not fit the wrapper's conventions."""


def split_alphabet(m0: Machine):
    """A and A' from the recognizer's input letters (primed copy = trailing ')."""
    A = [a for a in m0.input_letters if not a.endswith("'")]
    primed = [a for a in m0.input_letters if a.endswith("'")]
    if not A or sorted(a + "'" for a in A) != sorted(primed):
        raise MalformedM0("input letters must be A together with the primed copy A'")
    return A, [a + "'" for a in A]


@dataclass
class M1Layout:
    """Tape names of the wrapper, in tape order."""

    io: str
    work: list
    T: str = "T"
    V: str = "V"

    @property
    def tapes(self):
        return [self.io, *self.work, self.T, self.V]


def build_m1(m0: Machine, monoid: bool = True) -> Machine:
    """Input-output machine printing the least v with u v' accepted by m0.

    Tapes: the input tape (shared with m0's first tape), m0's other tapes,
    T holding u and V holding the candidate v.  A first sweep (phase ``B``)
    runs m0 on every pair u v' with |v| <= |u| and ignores the answers; a
    second sweep (phase ``A``) stops at the first accepted candidate, erases
    T and prints V.

    Every command pins the heads it does not move to their resting ends,
    so apart from m0's halting, the ignored answers and the erasure of T,
    no two commands lead into the same configuration.  Run backwards under
    the closure, a wrong guess then dies within a few steps.
    """
    if m0.flavor != "recognizing":
        raise MalformedM0("the recognizer must have flavor 'recognizing'")
    if not m0.reject:
        raise MalformedM0("the recognizer must declare its reject state vectors")
    A, Ap = split_alphabet(m0)
    lay = M1Layout("io", [f"w{j}" for j in range(2, m0.k + 1)])
    letters = {lay.io: list(m0.tapes[0].letters)}
    for j, t in enumerate(lay.work, 1):
        letters[t] = [f"m0:{x}" for x in m0.tapes[j].letters]
    letters[lay.T] = [f"T:{a}" for a in A]
    letters[lay.V] = [f"V:{a}" for a in A]
    asm = Assembler(lay.tapes, letters)
    io, T, V = lay.io, lay.T, lay.V
    Tx = {a: f"T:{a}" for a in A}
    Vx = {a: f"V:{a}" for a in A}
    first, last = Vx[A[0]], Vx[A[-1]]
    v0 = [] if monoid else [first]

    def rest(io_at=EMPTY, **moving):
        """Resting anchors for every tape, overridden for the moving ones."""
        s = {io: spec(anchors=io_at), T: spec(anchors="L"), V: spec(anchors="L")}
        s.update({t: spec(anchors=EMPTY) for t in lay.work})
        s.update(moving)
        return s

    def rightward(x):
        return spec(right=[x], new_left=[x])

    def leftward(x):
        return spec(left=[x], new_right=[x])

    def walk(name, src, dst, tape, step, end, **fixed):
        for x in letters[tape]:
            asm.emit(f"{name}.{x}", src, src, **rest(**fixed, **{tape: step(x)}))
        asm.emit(f"{name}.end", src, dst, **rest(**fixed, **{tape: spec(anchors=end)}))

    # the only command touching the start states
    asm.emit("start", "in", "move", **rest("R", **{T: spec(anchors=EMPTY), V: spec(anchors=EMPTY)}))
    for a in A:
        asm.emit(f"move.{a}", "move", "move",
                 **rest("R", **{io: spec(left=[a], anchors="R"), T: spec(new_right=[Tx[a]], anchors="L"),
                                V: spec(anchors=EMPTY)}))
    asm.emit("move.end", "move", "B.cT", **rest(**{V: spec(new_right=v0, anchors=EMPTY)}))

    at_end = {T: spec(anchors="R"), V: spec(anchors="R")}
    for X in "BA":
        # write u v' on the input tape; m0 starts right after the last
        # copied letter, both heads still at their right ends, so that a
        # backwards step at once checks the copy
        for a in A:
            asm.emit(f"{X}.cT.{Tx[a]}", f"{X}.cT", f"{X}.cT",
                     **rest("R", **{T: rightward(Tx[a]), io: spec(new_left=[a], anchors="R")}))
        asm.emit(f"{X}.cT.end", f"{X}.cT", f"{X}.cV", **rest("R", **{T: spec(anchors="R")}))
        for a, p in zip(A, Ap):
            asm.emit(f"{X}.cV.{Vx[a]}", f"{X}.cV", f"{X}.cV",
                     **rest("R", **{T: spec(anchors="R"), V: rightward(Vx[a]),
                                    io: spec(new_left=[p], anchors="R")}))
        asm.emit(f"{X}.cV.end", f"{X}.cV", f"{X}.run", **rest("R", **at_end))

        # m0 leaves both heads at their left ends; move V's back
        yes, no = ("B.back", "B.back") if X == "B" else ("A.hit", "A.no")
        _embed(asm, m0, lay, X, rest, entry=f"{X}.run", on_accept=yes, on_reject=no)
        walk(no, no, f"{X}.inc", V, rightward, "R")

        # next candidate in shortlex order, V's head at its right end;
        # growing needs a letter to grow from, except from the empty word
        for i, a in enumerate(A[:-1]):
            asm.emit(f"{X}.inc.{a}", f"{X}.inc", f"{X}.inc.rew",
                     **rest(**{V: spec(left=[Vx[a]], new_right=[Vx[A[i + 1]]])}))
        asm.emit(f"{X}.inc.carry", f"{X}.inc", f"{X}.inc", **rest(**{V: spec(left=[last], new_right=[first])}))
        asm.emit(f"{X}.inc.grow", f"{X}.inc", f"{X}.cmp",
                 **rest(**{V: spec(right=[first], new_right=[first, first], anchors="L")}))
        if monoid:
            asm.emit(f"{X}.inc.grow0", f"{X}.inc", f"{X}.cmp", **rest(**{V: spec(new_right=[first], anchors=EMPTY)}))
        if len(A) > 1:
            walk(f"{X}.inc.rew", f"{X}.inc.rew", f"{X}.cmp", V, leftward, "L")

        # compare |V| with |T| and undo the comparison walk
        for a in A:
            for b in A:
                asm.emit(f"{X}.cmp.{a}.{b}", f"{X}.cmp", f"{X}.cmp",
                         **rest(**{T: rightward(Tx[a]), V: rightward(Vx[b])}))
                asm.emit(f"{X}.ok.{a}.{b}", f"{X}.ok", f"{X}.ok",
                         **rest(**{T: leftward(Tx[a]), V: leftward(Vx[b])}))
        asm.emit(f"{X}.cmp.eq", f"{X}.cmp", f"{X}.ok", **rest(**at_end))
        for a in A:
            asm.emit(f"{X}.cmp.short.{a}", f"{X}.cmp", f"{X}.ok",
                     **rest(**{T: spec(right=[Tx[a]], new_right=[Tx[a]]), V: spec(anchors="R")}))
        asm.emit(f"{X}.ok.end", f"{X}.ok", f"{X}.cT", **rest())

    # the first sweep ends at the candidate first^(|u|+1); shrink it back to
    # the least candidate against T (phase A never runs out: u is a hit)
    for b in A:
        asm.emit(f"B.cmp.long.{b}", "B.cmp", "B.done",
                 **rest(**{T: spec(anchors="R"), V: spec(right=[Vx[b]], new_right=[Vx[b]])}))
    for a in A:
        for b in A:
            asm.emit(f"B.done.{a}.{b}", "B.done", "B.done", **rest(**{T: leftward(Tx[a]), V: leftward(Vx[b])}))
    asm.emit("B.done.end", "B.done", "reset", **rest())
    for a in A:
        asm.emit(f"reset.{a}", "reset", "reset",
                 **rest(**{T: rightward(Tx[a]), V: spec(right=[first], anchors="L")}))
    asm.emit("reset.end", "reset", "A.rew",
             **rest(**{T: spec(anchors="R"), V: spec(right=[first], new_right=v0, anchors=EMPTY)}))
    walk("A.rew", "A.rew", "A.cT", T, leftward, "L")

    # the hit: erase T, move v onto the input tape and accept
    for a in A:
        asm.emit(f"A.hit.{a}", "A.hit", "A.hit", **rest(**{T: spec(right=[Tx[a]], anchors="L")}))
    asm.emit("A.hit.end", "A.hit", "out", **rest(**{T: spec(anchors=EMPTY)}))
    gone = {T: spec(anchors=EMPTY)}
    for a in A:
        asm.emit(f"out.{a}", "out", "out", **rest("R", **gone, **{V: spec(right=[Vx[a]], anchors="L"),
                                                               io: spec(new_left=[a], anchors="R")}))
    asm.emit("accept", "out", "acc", **rest("R", **gone, **{V: spec(anchors=EMPTY)}))
    return asm.build(A, asm.vector("in"), asm.vector("acc"), flavor=INPUT_OUTPUT, name="M1")


def right_eraser(m0: Machine) -> bool:
    """Whether every command of a one-tape m0 erases the last letter or
    decides on the empty tape, as the table recognizer does."""
    if m0.k != 1:
        return False
    for c in m0.commands:
        (p,) = c.parts
        erase = len(p.left) == 1 and p.anchor_right and not (p.right or p.new_left or p.new_right)
        decide = p.anchor_left and p.anchor_right and not (p.left or p.right or p.new_left or p.new_right)
        if not (erase and not p.anchor_left) and not decide:
            return False
    return True


def _embed(asm, m0, lay, phase, rest, entry, on_accept, on_reject):
    """Copy m0's commands under renamed states, from the configuration
    with u v' on the input tape and the heads of T and V at their right
    ends, to one with both heads at their left ends.

    If m0 only erases letters from the right, its heads on T and V move
    left in step and every erased letter must match the letter passed on
    T or V.  Nothing changes on a genuine run, but running backwards m0
    can then only restore the word it was given.  Otherwise the wrapper's
    tapes are held still and rewound after m0 halts.
    """
    mtapes = [lay.io] + lay.work
    T, V = lay.T, lay.V
    hold = {t: f"{phase}.m0@{t}" if t in (T, V) else None for t in lay.tapes}
    lockstep = right_eraser(m0)
    A = {x[2:]: x for x in asm.letters[T]}

    def q(s):
        return f"m0:{s}"

    def letters(j, w):
        return tuple(w) if j == 0 else tuple(f"m0:{x}" for x in w)

    def parts_of(src, dst, specs, m0_parts):
        parts = {}
        for t in lay.tapes:
            if t in m0_parts:
                parts[t] = m0_parts[t]
            else:
                s = specs[t]
                parts[t] = Part(s.left, src[t], s.right, s.new_left, dst[t], s.new_right,
                                "L" in s.anchors, "R" in s.anchors)
        return parts

    def m0_part(j, p):
        return Part(letters(j, p.left), q(p.state), letters(j, p.right), letters(j, p.new_left),
                    q(p.new_state), letters(j, p.new_right), p.anchor_left, p.anchor_right)

    ctl = {t: asm.state(entry, t) for t in lay.tapes}
    enter = {}
    for j, t in enumerate(mtapes):
        enter[t] = Part((), ctl[t], (), (), q(m0.start[j]), (), j != 0, True)
    asm.raw(f"{phase}.m0.enter", parts_of(ctl, hold, rest(T=spec(anchors="R"), V=spec(anchors="R")), enter))

    for c in m0.commands:
        m0p = {t: m0_part(j, p) for j, (t, p) in enumerate(zip(mtapes, c.parts))}
        if not lockstep:
            asm.raw(f"{phase}.m0.{c.name}",
                    parts_of(hold, hold, rest(T=spec(anchors="R"), V=spec(anchors="R")), m0p))
            continue
        (p,) = c.parts
        if not p.left:
            asm.raw(f"{phase}.m0.{c.name}", parts_of(hold, hold, rest(), m0p))
        elif p.left[0] in A:
            x = A[p.left[0]]
            asm.raw(f"{phase}.m0.{c.name}", parts_of(hold, hold, rest(
                T=spec(left=[x], new_right=[x]), V=spec(anchors="L")), m0p))
        elif p.left[0].endswith("'") and p.left[0][:-1] in A:
            x = "V:" + p.left[0][:-1]
            asm.raw(f"{phase}.m0.{c.name}", parts_of(hold, hold, rest(
                T=spec(anchors="R"), V=spec(left=[x], new_right=[x])), m0p))

    exits = [("yes", m0.accept, on_accept)] + [(f"no{i}", r, on_reject) for i, r in enumerate(m0.reject)]
    for label, vec, target in exits:
        m0p = {t: Part((), q(vec[j]), (), (), asm.state(target if lockstep else f"{target}.rew", t), (),
                       True, True) for j, t in enumerate(mtapes)}
        dst = {t: asm.state(target if lockstep else f"{target}.rew", t) for t in lay.tapes}
        held = rest() if lockstep else rest(T=spec(anchors="R"), V=spec(anchors="R"))
        asm.raw(f"{phase}.m0.{label}", parts_of(hold, dst, held, m0p))
    if not lockstep:
        for target in dict.fromkeys([on_accept, on_reject]):
            rew, mid = f"{target}.rew", f"{target}.rew2"
            for x in asm.letters[T]:
                asm.emit(f"{rew}.{x}", rew, rew, **rest(T=spec(left=[x], new_right=[x]), V=spec(anchors="R")))
            asm.emit(f"{rew}.end", rew, mid, **rest(V=spec(anchors="R")))
            for x in asm.letters[V]:
                asm.emit(f"{mid}.{x}", mid, mid, **rest(V=spec(left=[x], new_right=[x])))
            asm.emit(f"{mid}.end", mid, target, **rest())


# padding --------------------------------------------------------------------

STAR = "*"


def build_m2(m1: Machine) -> Machine:
    """Add a star tape so that every simulated command keeps the total
    number of tape letters unchanged.

    Stage 1 stacks stars onto the new tape, the connecting command moves
    into m1's start states, stage 2 runs m1 while trading squares with the
    star tape, and after m1 accepts, stage 3 erases the stars one by one.
    """
    if m1.flavor != INPUT_OUTPUT:
        raise MalformedM0("the padded machine is built from an input-output machine")
    k = m1.k
    s1 = [f"pad@{j}" for j in range(k + 1)]
    run_s = "run@S"
    s3 = [f"drain@{j}" for j in range(k + 1)]
    tapes = []
    for j, t in enumerate(m1.tapes):
        tapes.append(TapeSpec(t.letters, (s1[j],) + t.states + (s3[j],)))
    tapes.append(TapeSpec((STAR,), (s1[k], run_s, s3[k])))

    def others(src, dst, j0=1):
        return [Part((), src[j], (), (), dst[j], (), True, True) for j in range(j0, k)]

    cmds = []
    # stage 1: pad
    cmds.append(Command("pad", tuple(
        [Part((), s1[0], (), (), s1[0], (), False, True)] + others(s1, s1)
        + [Part((), s1[k], (), (STAR,), s1[k], (), False, True)])))
    # connecting command into m1's start states
    cmds.append(Command("begin", tuple(
        [Part((), s1[0], (), (), m1.start[0], (), False, True)] + others(s1, m1.start)
        + [Part((), s1[k], (), (), run_s, (), False, True)])))
    # stage 2: m1 with compensating star moves
    for c in m1.commands:
        g = c.growth
        if g > 0:
            star = Part((STAR,) * g, run_s, (), (), run_s, (), False, True)
        else:
            star = Part((), run_s, (), (STAR,) * (-g), run_s, (), False, True)
        cmds.append(Command(c.name, c.parts + (star,)))
    # connecting command out of m1's accept states
    cmds.append(Command("finish", tuple(
        [Part((), m1.accept[0], (), (), s3[0], (), False, True)] + others(m1.accept, s3)
        + [Part((), run_s, (), (), s3[k], (), False, True)])))
    # stage 3: drain the stars
    cmds.append(Command("drain", tuple(
        [Part((), s3[0], (), (), s3[0], (), False, True)] + others(s3, s3)
        + [Part((STAR,), s3[k], (), (), s3[k], (), False, True)])))
    return Machine(tapes=tuple(tapes), input_letters=m1.input_letters, start=tuple(s1),
                   accept=tuple(s3), commands=tuple(cmds), flavor=INPUT_OUTPUT, name="M2")


STAGE_CONNECTORS = ("begin", "finish")


def build_m3(m2: Machine) -> Machine:
    """The symmetric closure: every command of m2 together with its inverse."""
    m3 = symmetrize(m2)
    return m3.replace(name="M3")
