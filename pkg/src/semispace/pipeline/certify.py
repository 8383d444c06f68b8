"""Run the passes on a recognizer and check the compiled machines.

A :class:`PipelineReport` holds the machine sizes, measured space tables
and a list of named checks.  Each check either passes, fails with a
counterexample, or is inconclusive because a search hit its node cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..corpus import build_table_m0, equality_classes, m0_inputs
from ..machine import (Machine, SpaceTable, Tape, a_length, generalized_space,
                       is_negative, inverse_name, render_config, run, space_complexity)
from ..search import (DEFAULT_NODE_CAP, EXACT, LOWER_BOUND, MinimaxSweep,
                      compare_functions)
from ..words import MONOID, Presentation, format_word, words_up_to
from .onetape import START, OneTape, build_m4, build_m5, yl
from .packed import PackedMachine
from .passes import STAGE_CONNECTORS, build_m1, build_m2, build_m3

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"


@dataclass
class Check:
    name: str
    status: str
    detail: str = ""
    counterexample: str = ""

    def line(self) -> str:
        s = f"{self.name}: {self.status}"
        if self.detail:
            s += f" ({self.detail})"
        if self.counterexample:
            s += f" counterexample: {self.counterexample}"
        return s


def _check(name, ok, detail="", counterexample=""):
    return Check(name, PASS if ok else FAIL, detail, "" if ok else counterexample)


@dataclass
class Pipeline:
    m0: Machine
    m1: Machine
    m2: Machine
    m3: Machine
    one_tape: OneTape
    m5: Machine
    monoid: bool

    @property
    def m4(self) -> Machine | None:
        return self.one_tape.machine if self.one_tape is not None else None

    def machines(self) -> list:
        ms = [self.m0, self.m1, self.m2, self.m3, self.m4, self.m5]
        return [m for m in ms if m is not None]

    def input_word(self, name: str, u) -> tuple:
        """The input of machine ``name`` standing for the source word ``u``."""
        return tuple(map(yl, u)) if name == "M5" else tuple(u)


def build_pipeline(m0: Machine, monoid: bool = True, through: str = "m5") -> Pipeline:
    m1 = build_m1(m0, monoid=monoid)
    m2 = build_m2(m1)
    m3 = build_m3(m2)
    if through in ("m1", "m2", "m3"):
        return Pipeline(m0, m1, m2, m3, None, None, monoid)
    ot = build_m4(m3)
    m5 = build_m5(ot.machine) if through == "m5" else None
    return Pipeline(m0, m1, m2, m3, ot, m5, monoid)


def machine_size(m: Machine) -> dict:
    return {"tapes": m.k, "letters": sum(len(t.letters) for t in m.tapes),
            "states": sum(len(t.states) for t in m.tapes), "commands": len(m.commands)}


@dataclass
class PipelineReport:
    source: str
    n_max: int
    space_bound: int
    m0_bound: int
    sizes: dict = field(default_factory=dict)
    S: dict = field(default_factory=dict)
    S_prime: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.status == PASS for c in self.checks)

    @property
    def inconclusive(self) -> list:
        return [c for c in self.checks if c.status == INCONCLUSIVE]

    @property
    def failed(self) -> list:
        return [c for c in self.checks if c.status == FAIL]

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def render(self) -> str:
        out = ["[pipeline]", f"source: {self.source}", f"n_max: {self.n_max}",
               f"space_bound: {self.space_bound}",
               f"recognizer table valid for |u|+|v| <= {self.m0_bound}", "", "[sizes]"]
        for name, s in self.sizes.items():
            out.append(f"{name}: tapes={s['tapes']} letters={s['letters']} states={s['states']} "
                       f"commands={s['commands']}")
        out += ["", "[space]"]
        for name in self.sizes:
            for label, tables in (("S", self.S), ("S'", self.S_prime)):
                t = tables.get(name)
                if t is None:
                    continue
                vals = " ".join(f"{n}:{v}" for n, v in sorted(t.values.items()))
                out.append(f"{label}[{name}] {vals} ({t.status})")
        out += ["", "[checks]"]
        out += [c.line() for c in self.checks]
        if self.notes:
            out += ["", "[notes]"] + self.notes
        return "\n".join(out) + "\n"


# sweeps ---------------------------------------------------------------------

def source_words(p: Presentation, n: int) -> list:
    return list(words_up_to(p.alphabet, n, nonempty=p.kind != MONOID))


@dataclass
class InputSweep:
    """Level sweep of a one-tape machine from the input configurations."""

    machine: Machine
    packer: PackedMachine
    sweep: MinimaxSweep
    words: list
    sources: list

    def connected(self, i: int, j: int) -> bool:
        return i == j or self.sweep.connected(self.sources[i], self.sources[j])

    def level(self, i: int, j: int):
        if i == j:
            return len(self.words[i])
        return self.sweep.pair_level.get((min(i, j), max(i, j)))

    def profile(self, n_max: int) -> dict:
        def base(n):
            return max([len(u) for u in self.words if len(u) <= n], default=0)
        return self.sweep.profile(n_max, baseline=base)


def input_sweep(m: Machine, inputs: list, words: list, space_bound: int,
                node_cap: int = DEFAULT_NODE_CAP) -> InputSweep:
    pm = PackedMachine(m)
    sources = [pm.pack(m.input_config(u)) for u in inputs]
    sw = MinimaxSweep(sources, pm.neighbours, pm.size, space_bound, node_cap,
                      track_pairs=True).run()
    return InputSweep(m, pm, sw, list(words), sources)


# individual checks -------------------------------------------------------------

def check_input_equivalence(sw: InputSweep, classes: dict, label: str) -> Check:
    """Input configurations connected exactly when the words are equal."""
    name = f"{label}.input-equivalence"
    words = sw.words
    missing = []
    for i, u in enumerate(words):
        for j in range(i, len(words)):
            v = words[j]
            equal = classes[u] == classes[v]
            linked = sw.connected(i, j)
            if linked and not equal:
                return Check(name, FAIL, "", f"{format_word(u)} ~ {format_word(v)} but unequal")
            if equal and not linked:
                missing.append((u, v))
    if missing:
        u, v = missing[0]
        status = INCONCLUSIVE if not sw.sweep.complete else FAIL
        return Check(name, status, f"{len(missing)} equal pairs not connected",
                     f"{format_word(u)} / {format_word(v)}")
    detail = f"{len(words)} words, {len(sw.sweep.parent)} configurations"
    if not sw.sweep.complete:
        return Check(name, INCONCLUSIVE, detail + ", node cap reached")
    return Check(name, PASS, detail)


def check_left_right_disjoint(m5: Machine, A) -> Check:
    (t,) = m5.tapes
    left = {x for x in t.letters if x.startswith("yl:")}
    right = {x for x in t.letters if x.startswith("yr:")}
    bad = left & right
    if bad or left | right != set(t.letters):
        return Check("m5.left-right-disjoint", FAIL, "", f"letters {sorted(bad)[:3]}")
    for c in m5.commands:
        p = c.parts[0]
        if not set(p.left + p.new_left) <= left or not set(p.right + p.new_right) <= right:
            return Check("m5.left-right-disjoint", FAIL, "", f"command {c.name}")
    if set(m5.input_letters) != {yl(a) for a in A}:
        return Check("m5.left-right-disjoint", FAIL, "", "input letters are not the left copy of A")
    return Check("m5.left-right-disjoint", PASS, f"{len(left)} left, {len(right)} right letters")


def check_witness_constant(sw: InputSweep) -> tuple[Check, int | None]:
    """Every configuration reached shares a component with an input whose
    size exceeds its own by at most the measured constant."""
    name = "m5.input-witness-constant"
    s = sw.sweep
    if not s.complete:
        return Check(name, INCONCLUSIVE, "node cap reached"), None
    size = sw.packer.size
    worst, at = 0, None
    for x in s.parent:
        r = s.find(x)
        d = s._min[r] - size(x)
        if d > worst:
            worst, at = d, x
    c = max(worst, 1)
    detail = f"c={c} over {len(s.parent)} configurations"
    if at is not None:
        detail += f", attained at a-length {size(at)}"
    return Check(name, PASS, detail), c


def check_input_endpoints(sw: InputSweep) -> Check:
    """A reached configuration with the start state at the right end holds
    only input letters."""
    name = "m5.input-endpoints"
    pm = sw.packer
    q = pm.code[START]
    allowed = {pm.code[a] for a in sw.machine.input_letters}
    count = 0
    for x in sw.sweep.parent:
        if x[:2] != q:
            continue
        n = int.from_bytes(x[2:4], "big")
        if 4 + 2 * n != len(x):
            continue
        count += 1
        if any(x[i:i + 2] not in allowed for i in range(4, len(x), 2)):
            return Check(name, FAIL, "", render_config(pm.unpack(x)))
    status = PASS if sw.sweep.complete else INCONCLUSIVE
    return Check(name, status, f"{count} start-state configurations")


def _involves_alpha(c) -> bool:
    return c.parts[0].anchor_left


def _involves_omega(c) -> bool:
    return c.parts[0].anchor_right


def longest_reduced(m: Machine, w0, allowed, cap: int) -> int | None:
    """Length of the longest reduced computation from ``w0`` using only
    commands satisfying ``allowed``; None past ``cap`` steps."""
    best = 0
    stack = [(w0, None, 0)]
    while stack:
        w, last, t = stack.pop()
        if t > best:
            best = t
            if best > cap:
                return None
        for c, r in m.successors(w):
            if not allowed(c) or (last is not None and c.name == inverse_name(last)):
                continue
            stack.append((r, c.name, t + 1))
    return best


def check_bounded_runs(m5: Machine, samples: list, label: str, avoid, cap: int = 10_000) -> Check:
    """Reduced computations avoiding one endmarker stay linear in the
    starting length."""
    name = f"m5.{label}-free-runs-bounded"
    worst_t, worst_ratio = 0, 0.0
    for w in samples:
        t = longest_reduced(m5, w, lambda c: not avoid(c), cap)
        if t is None:
            return Check(name, FAIL, f"longer than {cap} steps", render_config(w))
        worst_t = max(worst_t, t)
        worst_ratio = max(worst_ratio, t / (a_length(w) + 1))
    return Check(name, PASS, f"{len(samples)} starts, longest {worst_t} steps, "
                             f"at most {worst_ratio:.1f} per square")


def check_start_state_runs(m5: Machine, words: list) -> Check:
    """From ``U q1 omega`` without touching alpha: length is kept, only input
    letters are read on the left, and no nonempty reduced computation comes
    back to a start-state configuration."""
    name = "m5.start-state-alpha-free"
    A_l = set(m5.input_letters)
    (t,) = m5.tapes
    forbidden = {x for x in t.letters if x.startswith("yl:")} - A_l
    for U in words:
        w0 = (Tape(tuple(U), START, ()),)
        seen = {w0}
        stack = [w0]
        edges = 0
        while stack:
            w = stack.pop()
            for c, r in m5.successors(w):
                if _involves_alpha(c):
                    continue
                p = c.parts[0]
                if forbidden & set(p.left + p.new_left + p.right + p.new_right):
                    return Check(name, FAIL, "", f"command {c.name} from {format_word(U)}")
                if a_length(r) != a_length(w0):
                    return Check(name, FAIL, "", f"length changes at {render_config(r)}")
                if not is_negative(c.name):
                    edges += 1
                if r not in seen:
                    if r[0].state == START and not r[0].right:
                        return Check(name, FAIL, "", f"{format_word(U)} returns to {render_config(r)}")
                    seen.add(r)
                    stack.append(r)
        if edges != len(seen) - 1:
            return Check(name, FAIL, "reduced loop", format_word(U))
    return Check(name, PASS, f"{len(words)} start words")


def check_block_exclusivity(m: Machine, samples: list) -> Check:
    """At a configuration whose state belongs to a simulation block at most
    one positive and one negative command apply."""
    name = "m4.block-exclusivity"
    for w in samples:
        if "#" not in w[0].state:
            continue
        cmds = [c for c, _ in m.successors(w)]
        pos = sum(1 for c in cmds if not is_negative(c.name))
        if pos > 1 or len(cmds) - pos > 1:
            return Check(name, FAIL, "", render_config(w))
    return Check(name, PASS, f"{len(samples)} configurations")


def check_m1(m1: Machine, p: Presentation, classes: dict, n_max: int, space_bound: int) -> list:
    checks = []
    start = set(m1.start)
    in_rhs = [c.name for c in m1.commands if set(c.rhs_vector) & start]
    in_lhs = [c.name for c in m1.commands if set(c.lhs_vector) & start]
    checks.append(_check("m1.start-states-fresh", not in_rhs and len(in_lhs) == 1,
                         f"start states read by {in_lhs}", f"written by {in_rhs[:3]} read by {in_lhs[:3]}"))
    acc = [c.name for c in m1.commands if c.rhs_vector == m1.accept]
    checks.append(_check("m1.unique-accepting-command", len(acc) == 1, f"{acc}", f"{acc[:4]}"))
    key = {}
    for u in classes:
        key.setdefault(classes[u], []).append(u)
    order = p.alphabet
    wrong, undecided, runs = [], [], 0
    for u in source_words(p, n_max):
        try:
            comp = run(m1, m1.input_config(u), space_bound, 10 ** 6)
        except Exception as e:  # nondeterminism is a failure of the pass
            return checks + [Check("m1.least-output", FAIL, "", f"{format_word(u)}: {e}")]
        runs += 1
        if comp.stop != "accepted":
            undecided.append(u)
            continue
        out = m1.output_of(comp.end)
        least = min(key[classes[u]], key=lambda w: (len(w), [order.index(a) for a in w]))
        if out != least:
            wrong.append((u, out))
    if wrong:
        u, out = wrong[0]
        checks.append(Check("m1.least-output", FAIL, "", f"{format_word(u)} -> {format_word(out)}"))
    elif undecided:
        checks.append(Check("m1.least-output", INCONCLUSIVE, f"{len(undecided)} runs hit a bound"))
    else:
        checks.append(Check("m1.least-output", PASS, f"{runs} deterministic runs"))
    return checks


def check_m2(m1: Machine, m2: Machine) -> list:
    names = {c.name for c in m2.commands}
    connectors_ok = all(c in names and c + "^-1" not in names for c in STAGE_CONNECTORS)
    by_name = m2.by_name
    growth = [c for c in m1.commands if by_name[c.name].growth != 0]
    return [_check("m2.connectors-not-invertible", connectors_ok, ", ".join(STAGE_CONNECTORS),
                   "inverse present"),
            _check("m2.simulation-keeps-space", not growth, f"{len(m1.commands)} padded commands",
                   growth[0].name if growth else "")]


def check_m3(m3: Machine) -> Check:
    pos = {c.parts for c in m3.commands if not is_negative(c.name)}
    neg = [c for c in m3.commands if is_negative(c.name)]
    clash = [c.name for c in neg if c.parts in pos]
    return _check("m3.no-self-inverse", not clash and len(neg) * 2 == len(m3.commands),
                  f"{len(neg)} inverse pairs", ", ".join(clash[:3]))


# driver -------------------------------------------------------------------------

def certify_pipeline(p: Presentation, n_max: int, space_bound: int, m0: Machine | None = None,
                     L: int | None = None, node_cap: int = DEFAULT_NODE_CAP,
                     m0_bound: int | None = None, sample_size: int = 2000) -> PipelineReport:
    """Build M0 .. M5 for ``p`` and check them on words up to ``n_max``."""
    if m0_bound is None:
        m0_bound = 2 * n_max
    if L is None:
        L = max(2 * m0_bound, m0_bound + 4)
    if m0 is None:
        m0 = build_table_m0(p, m0_bound, L, node_cap)
    pl = build_pipeline(m0, monoid=p.kind == MONOID)
    rep = PipelineReport(p.name or "presentation", n_max, space_bound, m0_bound)
    for m in pl.machines():
        rep.sizes[m.name] = machine_size(m)
    classes = equality_classes(p, n_max, L, node_cap)
    words = source_words(p, n_max)

    # recognizer
    inputs0 = m0_inputs(p, m0_bound)
    rep.S["M0"] = space_complexity(pl.m0, m0_bound, space_bound, inputs=inputs0)
    rep.S_prime["M0"] = generalized_space(pl.m0, n_max, space_bound, node_cap=node_cap)

    rep.checks += check_m1(pl.m1, p, classes, n_max, space_bound)
    rep.checks += check_m2(pl.m1, pl.m2)
    rep.checks.append(check_m3(pl.m3))
    for m in (pl.m1, pl.m2, pl.m3):
        rep.S[m.name] = space_complexity(m, n_max, space_bound, inputs=words, node_cap=node_cap)
        rep.S_prime[m.name] = generalized_space(m, n_max, space_bound, node_cap=node_cap)

    # one-tape machines
    sweeps = {}
    for m in (pl.m4, pl.m5):
        sw = input_sweep(m, [pl.input_word(m.name, u) for u in words], words, space_bound, node_cap)
        status = EXACT if sw.sweep.complete else LOWER_BOUND
        prof = sw.profile(n_max)
        rep.S[m.name] = SpaceTable(f"S[{m.name}]", prof, status)
        # only input configurations seed the generalized measure here
        rep.S_prime[m.name] = SpaceTable(f"S'[{m.name}]", dict(prof), LOWER_BOUND,
                                         "input configurations as seeds")
        if m is pl.m4:
            rep.checks.append(check_input_equivalence(sw, classes, "m4"))
            order = list(sw.sweep.parent)[:sample_size]
            rep.checks.append(check_block_exclusivity(pl.m4, [sw.packer.unpack(x) for x in order]))
        else:
            rep.checks.append(check_input_equivalence(sw, classes, "m5"))
            c_check, _ = check_witness_constant(sw)
            rep.checks.append(c_check)
            rep.checks.append(check_input_endpoints(sw))
            order = [sw.packer.unpack(x) for x in list(sw.sweep.parent)[:sample_size]]
            sweeps["samples"] = order
        del sw

    rep.checks.append(check_left_right_disjoint(pl.m5, p.letters))
    samples = sweeps["samples"]
    rep.checks.append(check_bounded_runs(pl.m5, samples, "alpha", _involves_alpha))
    rep.checks.append(check_bounded_runs(pl.m5, samples, "omega", _involves_omega))
    (t5,) = pl.m5.tapes
    left_letters = [x for x in t5.letters if x.startswith("yl:")]
    starts = list(words_up_to(left_letters, 1)) + [pl.input_word("M5", u) for u in words]
    rep.checks.append(check_start_state_runs(pl.m5, list(dict.fromkeys(starts))))

    # space relations
    rep.checks += space_relation_checks(rep, n_max)
    return rep


def space_relation_checks(rep: PipelineReport, n_max: int) -> list:
    checks = []
    bad = []
    loose = []
    for name in rep.sizes:
        s, sp = rep.S.get(name), rep.S_prime.get(name)
        if s is None or sp is None:
            continue
        for n in range(n_max + 1):
            if n in s.values and n in sp.values and s[n] > sp[n]:
                (bad if sp.status == EXACT else loose).append(f"{name} n={n}: {s[n]} > {sp[n]}")
    if bad:
        checks.append(Check("space.S-below-S'", FAIL, "", bad[0]))
    elif loose:
        checks.append(Check("space.S-below-S'", INCONCLUSIVE, "lower-bound tables", loose[0]))
    else:
        checks.append(Check("space.S-below-S'", PASS, f"{len(rep.sizes)} machines, n <= {n_max}"))
    s1, sp2 = rep.S["M1"], rep.S_prime["M2"]
    over = [n for n in range(n_max + 1) if sp2[n] > max(s1[n], n)]
    checks.append(_check("space.padding-within-M1", not over, f"S'[M2] <= max(S[M1], n) on n <= {n_max}",
                         f"n={over[0]}" if over else ""))
    s4, s5 = rep.S_prime["M4"], rep.S_prime["M5"]
    diff = [n for n in range(n_max + 1) if s4[n] != s5[n]]
    checks.append(_check("m5.same-space-as-m4", not diff, "", f"n={diff[0]}" if diff else ""))
    f = {n: rep.S_prime["M5"][n] for n in range(1, n_max + 1)}
    g = {n: v for n, v in rep.S["M0"].values.items() if n >= 1}
    try:
        w = compare_functions(f, g, c_max=max(g))
    except Exception as e:
        checks.append(Check("space.M5-equivalent-M0", INCONCLUSIVE, str(e)))
    else:
        checks.append(Check("space.M5-equivalent-M0", PASS if w.direction == "both" else FAIL,
                            f"f=S'[M5], g=S[M0]: {w.describe()}"))
    return checks
