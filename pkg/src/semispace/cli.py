"""Command line front end.

Every subcommand prints a report with a fixed section order and, with
``--out DIR``, writes it there together with any figures.  Exit codes:
0 success, 1 a checked property failed, 2 a budget left the answer open,
3 the input could not be read.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
import traceback
from dataclasses import dataclass, field

from . import __version__
from .corpus import CORPUS_TEXT, InconclusiveTable, build_table_m0, presentation
from .machine import (ACCEPTED, REJECTED, STUCK, MachineError, NondeterministicChoice,
                      accepts, format_machine, parse_machine, render_config, run)
from .search import DEFAULT_NODE_CAP, EXACT, BudgetExceeded, derivation_witness, space_between, space_profile
from .words import (MONOID, PresentationError, format_derivation, format_presentation,
                    format_word, parse_derivation, parse_presentation, tokenize, validate_presentation)

OK, VIOLATION, OPEN, BAD_INPUT = 0, 1, 2, 3
STATUS_NAMES = {OK: "ok", VIOLATION: "violation", OPEN: "inconclusive", BAD_INPUT: "input-error"}


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass
class Report:
    command: str
    inputs: list = field(default_factory=list)
    budgets: list = field(default_factory=list)
    sections: list = field(default_factory=list)
    files: list = field(default_factory=list)
    code: int = OK

    def input(self, label: str, text: str):
        self.inputs.append(f"{label}: sha256={_digest(text)}")

    def budget(self, name: str, value):
        self.budgets.append(f"{name}: {value}")

    def section(self, title: str, body):
        lines = body.splitlines() if isinstance(body, str) else list(body)
        self.sections.append((title, lines))

    def worse(self, code: int):
        # a violation outranks an open budget
        if code == VIOLATION or (code == OPEN and self.code == OK):
            self.code = code

    def render(self) -> str:
        out = ["[run]", f"command: {self.command}", f"version: {__version__}", "", "[inputs]"]
        out += self.inputs or ["none"]
        out += ["", "[budgets]"] + (self.budgets or ["none"])
        for title, lines in self.sections:
            out += ["", f"[{title}]"] + lines
        if self.files:
            out += ["", "[files]"] + self.files
        out += ["", "[status]", f"status: {STATUS_NAMES[self.code]}", f"exit: {self.code}"]
        return "\n".join(out) + "\n"


class Outputs:
    def __init__(self, directory: str | None, report: Report):
        self.dir = directory
        self.report = report
        if directory:
            os.makedirs(directory, exist_ok=True)

    def path(self, name: str) -> str | None:
        return os.path.join(self.dir, name) if self.dir else None

    def text(self, name: str, text: str):
        p = self.path(name)
        if p:
            with open(p, "w") as f:
                f.write(text)
            self.report.files.append(f"{name}: sha256={_digest(text)}")

    def figure(self, name: str, draw):
        p = self.path(name)
        if p:
            draw(p)
            self.report.files.append(f"{name}: png")


# inputs ------------------------------------------------------------------------

def _read(path: str) -> str:
    try:
        with open(path) as f:
            return f.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def load_presentation(args, report: Report):
    if getattr(args, "presentation", None):
        text = _read(args.presentation)
        p = parse_presentation(text, name=os.path.basename(args.presentation))
    else:
        name = args.corpus or "idempotent"
        if name not in CORPUS_TEXT:
            raise InputError(f"unknown corpus entry {name!r}; known: {' '.join(sorted(CORPUS_TEXT))}")
        p = presentation(name)
    report.input(f"presentation {p.name}", format_presentation(p))
    return p


def _word(text: str, p) -> tuple:
    w = tokenize(text, p.alphabet)
    if p.kind != MONOID and not w:
        raise InputError("semigroup words are nonempty")
    return w


def _add_presentation_flags(sp):
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--presentation", metavar="FILE", help="presentation file")
    g.add_argument("--corpus", metavar="NAME", help=f"corpus entry: {', '.join(sorted(CORPUS_TEXT))}")


def _add_budgets(sp, space=None, steps=None):
    sp.add_argument("--budget-nodes", type=int, default=DEFAULT_NODE_CAP, metavar="N")
    if space is not None:
        sp.add_argument("--budget-space", type=int, default=space, metavar="N")
    if steps is not None:
        sp.add_argument("--budget-steps", type=int, default=steps, metavar="N")


def _positive(args, *names):
    for n in names:
        v = getattr(args, n, None)
        if v is not None and v <= 0:
            raise InputError(f"--{n.replace('_', '-')} must be positive")


# subcommands -----------------------------------------------------------------

def cmd_validate(args, rep: Report, out: Outputs):
    if args.machine:
        text = _read(args.machine)
        rep.input("machine", text)
        try:
            m = parse_machine(text)
        except MachineError as e:
            rep.section("problems", [str(e)])
            rep.worse(VIOLATION)
            return
        rep.section("machine", [f"name: {m.name}", f"flavor: {m.flavor}", f"tapes: {m.k}",
                                f"commands: {len(m.commands)}"])
        rep.section("problems", ["none"])
        return
    if args.presentation:
        text = _read(args.presentation)
        rep.input("presentation", text)
        try:
            p = parse_presentation(text, name=os.path.basename(args.presentation))
        except PresentationError as e:
            rep.section("problems", [str(e)])
            rep.worse(VIOLATION)
            return
    else:
        p = load_presentation(args, rep)
    problems = validate_presentation(p)
    rep.section("presentation", [f"kind: {p.kind}", f"letters: {' '.join(p.letters)}",
                                 f"relations: {len(p.relations)}"])
    rep.section("problems", problems or ["none"])
    if problems:
        rep.worse(VIOLATION)


def cmd_derive(args, rep: Report, out: Outputs):
    p = load_presentation(args, rep)
    _positive(args, "max")
    w, w2 = _word(args.word, p), _word(args.other, p)
    rep.budget("L", args.max)
    rep.budget("nodes", args.budget_nodes)
    d = derivation_witness(p, w, w2, args.max, args.budget_nodes)
    if d is None:
        rep.section("derivation", [f"no derivation within L={args.max}"])
        rep.worse(OPEN)
        return
    text = format_derivation(d, p.alphabet)
    rep.section("derivation", [f"length: {len(d)}", f"space: {d.space}"] + text.splitlines())
    out.text("derivation.txt", text)
    from .plots import plot_word_lengths
    out.figure("derivation.png", lambda path: plot_word_lengths([len(x) for x in d.words], path,
                                                                "derivation"))


def cmd_space(args, rep: Report, out: Outputs):
    p = load_presentation(args, rep)
    _positive(args, "max")
    w, w2 = _word(args.word, p), _word(args.other, p)
    rep.budget("L", args.max)
    rep.budget("nodes", args.budget_nodes)
    s = space_between(p, w, w2, args.max, args.budget_nodes)
    rep.section("space", [f"{format_word(w, p.alphabet)} | {format_word(w2, p.alphabet)} | "
                          f"{'none within L' if s is None else s}"])
    if s is None:
        rep.worse(OPEN)


def cmd_sfn(args, rep: Report, out: Outputs):
    p = load_presentation(args, rep)
    _positive(args, "n", "max")
    rep.budget("L", args.max)
    rep.budget("nodes", args.budget_nodes)
    prof = space_profile(p, args.n, args.max, args.budget_nodes)
    rep.section("space-function", [f"s({n}) = {v} ({st})" for n, v, st in prof.rows()])
    if prof.status != EXACT:
        rep.worse(OPEN)
    from .plots import plot_tables
    out.figure("sfn.png", lambda path: plot_tables({"s(n)": prof.values}, path, p.name))


def _machine_from(args, rep: Report):
    if args.machine:
        text = _read(args.machine)
        rep.input("machine", text)
        return parse_machine(text)
    p = load_presentation(args, rep)
    rep.budget("recognizer table bound", args.m0_bound)
    return build_table_m0(p, args.m0_bound, node_cap=args.budget_nodes)


def cmd_simulate(args, rep: Report, out: Outputs):
    m = _machine_from(args, rep)
    rep.budget("space", args.budget_space)
    rep.budget("steps", args.budget_steps)
    u = tuple(args.input.split()) if " " in args.input.strip() else None
    if u is None:
        letters = sorted(m.input_letters, key=len, reverse=True)
        u, rest = [], args.input.strip()
        if rest == "1":
            rest = ""
        while rest:
            hit = next((a for a in letters if rest.startswith(a)), None)
            if hit is None:
                raise InputError(f"cannot read input {args.input!r} over the machine's input letters")
            u.append(hit)
            rest = rest[len(hit):]
        u = tuple(u)
    bad = [a for a in u if a not in m.input_letters]
    if bad:
        raise InputError(f"letters {bad} are not input letters")
    outcome = accepts(m, u, args.budget_space, args.budget_steps, args.budget_nodes)
    lines = [f"machine: {m.name}", f"input: {' '.join(u) or '1'}", f"outcome: {outcome}"]
    try:
        comp = run(m, m.input_config(u), args.budget_space, args.budget_steps)
    except NondeterministicChoice as e:
        lines.append(f"nondeterministic at {render_config(e.config)}")
    else:
        lines += [f"steps: {len(comp)}", f"space: {comp.space}", f"stop: {comp.stop}"]
        shown = comp.configs[:args.show]
        lines += [f"{i}: {render_config(c)}" for i, c in enumerate(shown)]
        if len(comp.configs) > len(shown):
            lines.append(f"... {len(comp.configs) - len(shown)} more")
    rep.section("simulation", lines)
    if outcome not in (ACCEPTED, REJECTED, STUCK):
        rep.worse(OPEN)


def _space_figure(out: Outputs, tables: dict, name: str, title: str):
    from .plots import plot_tables
    out.figure(name, lambda path: plot_tables(tables, path, title))


def cmd_pipeline(args, rep: Report, out: Outputs):
    from .pipeline.certify import build_pipeline, certify_pipeline, machine_size

    p = load_presentation(args, rep)
    m0 = None
    if args.machine:
        text = _read(args.machine)
        rep.input("machine", text)
        m0 = parse_machine(text)
    if args.certify:
        n_max, bound = args.certify
        _positive(args, "budget_nodes")
        rep.budget("n_max", n_max)
        rep.budget("space", bound)
        rep.budget("nodes", args.budget_nodes)
        res = certify_pipeline(p, n_max, bound, m0=m0, node_cap=args.budget_nodes,
                               m0_bound=args.m0_bound)
        rep.section("certification", res.render())
        if res.failed:
            rep.worse(VIOLATION)
        elif res.inconclusive:
            rep.worse(OPEN)
        tables = {f"S[{k}]": dict(v.values) for k, v in res.S.items() if k != "M0"}
        _space_figure(out, tables, "space.png", p.name)
        return
    m0_bound = args.m0_bound or 6
    rep.budget("recognizer table bound", m0_bound)
    if m0 is None:
        m0 = build_table_m0(p, m0_bound, node_cap=args.budget_nodes)
    pl = build_pipeline(m0, monoid=p.kind == MONOID, through=args.through)
    lines = []
    for m in pl.machines():
        s = machine_size(m)
        lines.append(f"{m.name}: tapes={s['tapes']} letters={s['letters']} states={s['states']} "
                     f"commands={s['commands']}")
        if args.emit_machines:
            out.text(f"{m.name}.machine", format_machine(m))
        if m.name.lower() == args.through:
            break
    rep.section("sizes", lines)


def _compiled(args, rep: Report):
    from .compiler import compile_H
    from .pipeline.certify import build_pipeline

    p = load_presentation(args, rep)
    rep.budget("recognizer table bound", args.m0_bound)
    m0 = build_table_m0(p, args.m0_bound, node_cap=args.budget_nodes)
    pl = build_pipeline(m0, monoid=p.kind == MONOID)
    return p, compile_H(pl.m5, p.letters)


def _embedding(args, rep, out, p, h):
    from .compiler import embedding_check

    n, L, LH = args.n, args.max, args.max_h
    rep.budget("n_max", n)
    rep.budget("L", L)
    rep.budget("L_H", LH)
    rep.budget("space", args.budget_space)
    res = embedding_check(p, h, n, L, LH, machine_bound=args.budget_space, node_cap=args.budget_nodes)
    rep.section("embedding", res.render())
    if res.mismatches or not res.space_ok:
        rep.worse(VIOLATION)
    elif res.inconclusive:
        rep.worse(OPEN)


def cmd_compile(args, rep: Report, out: Outputs):
    from .compiler import compile_Hprime, compile_P

    p, h = _compiled(args, rep)
    if args.emit == "h":
        pres = h.presentation
    elif args.emit == "hprime":
        pres = compile_Hprime(h.machine)
    else:
        pres = compile_P(h).presentation
    text = format_presentation(pres)
    problems = validate_presentation(pres)
    rep.section("compiled", [f"emit: {args.emit}", f"generators: {len(pres.letters)}",
                             f"relations: {len(pres.relations)}", f"text sha256: {_digest(text)}",
                             f"problems: {len(problems)}"])
    if problems:
        rep.worse(VIOLATION)
    out.text(f"{args.emit}.presentation", text)
    if args.check_embedding:
        args.n, args.max = args.check_embedding
        _embedding(args, rep, out, p, h)


def cmd_embed_check(args, rep: Report, out: Outputs):
    p, h = _compiled(args, rep)
    _embedding(args, rep, out, p, h)


def _trapezium_input(args, rep: Report):
    """(trapezium, kinds) from a derivation file or a phi-witness."""
    from .trapezium import LetterKinds, build_trapezium

    if args.derivation:
        if not args.presentation:
            raise InputError("--derivation needs --presentation")
        p = load_presentation(args, rep)
        text = _read(args.derivation)
        rep.input("derivation", text)
        d = parse_derivation(text, p.alphabet)
        kinds = LetterKinds()
        if args.kinds:
            ktext = _read(args.kinds)
            rep.input("kinds", ktext)
            mapping, sources = {}, []
            for ln in ktext.splitlines():
                bits = ln.split()
                if not bits or bits[0].startswith("#"):
                    continue
                if len(bits) not in (2, 3) or bits[1] not in ("q", "alpha", "omega", "a"):
                    raise InputError(f"kinds line {ln!r}: expected '<letter> q|alpha|omega|a [source]'")
                mapping[bits[0]] = bits[1]
                if len(bits) == 3 and bits[2] == "source":
                    sources.append(bits[0])
            kinds = LetterKinds(mapping, sources or None)
        return build_trapezium(d, p), kinds
    from .compiler import input_computation, phi_witness

    if args.word is None or args.other is None:
        raise InputError("give two source words or --derivation")
    p, h = _compiled(args, rep)
    u, v = _word(args.word, p), _word(args.other, p)
    rep.budget("space", args.budget_space)
    comp = input_computation(h.machine, u, v, args.budget_space, args.budget_nodes)
    if comp is None:
        return None, None
    d = phi_witness(h, u, v, comp)
    return build_trapezium(d, h.presentation), LetterKinds()


def cmd_trapezium(args, rep: Report, out: Outputs):
    from .trapezium import (LENS, cap_cell_violations, classify_figures, is_divisible,
                            machine_part_labels, omega_band_violations, thick_lens, trace_bands,
                            type_vector, weighted_length)

    t, kinds = _trapezium_input(args, rep)
    if t is None:
        rep.section("trapezium", ["no machine computation connects the inputs within the budget"])
        rep.worse(OPEN)
        return
    bands = trace_bands(t, kinds)
    figs = classify_figures(t, kinds, bands=[b for b in bands if b.kind in ("q", "alpha")])
    counts = {}
    for b in bands:
        counts[b.kind] = counts.get(b.kind, 0) + 1
    v33 = cap_cell_violations(t, kinds, bands)
    v34 = omega_band_violations(t, kinds, bands)
    lines = [f"height: {t.height}", f"space: {max(len(w) for w in t.words)}",
             f"weighted space (c={args.weight}): "
             f"{max(weighted_length(w, args.weight, kinds) for w in t.words)}",
             "bands: " + " ".join(f"{k}={counts.get(k, 0)}" for k in ("q", "alpha", "omega", "a")),
             "figures: " + (" ".join(f"{f.kind}(type {f.q_type})" for f in figs.figures) or "none"),
             f"anomalies: {len(figs.anomalies)}",
             f"type vector: {type_vector(t, kinds, figs)}",
             f"cap-cell closure violations: {len(v33)}",
             f"omega-band violations: {len(v34)}"]
    for i, f in enumerate(figs.of_kind(LENS)):
        tl = thick_lens(t, f, kinds, bands)
        labels = machine_part_labels(t, tl)
        lines.append(f"thick lens {i}: omega-bands={len(tl.omega_bands)} "
                     f"machine bands={len(tl.machine_bands)} boundary={'ok' if tl.boundary_ok else 'bad'}")
        if labels:
            lines.append(f"  machine part bottom: {format_word(labels[0])}")
            lines.append(f"  machine part top: {format_word(labels[1])}")
        lines += [f"  flag: {x}" for x in tl.flags]
    path = is_divisible(t)
    lines.append(f"divisible: {'no' if path is None else 'yes ' + ' '.join(map(str, path))}")
    rep.section("trapezium", lines)
    if v33 or v34 or figs.anomalies:
        rep.worse(VIOLATION)
    out.text("trapezium.dump", t.dump())


def cmd_render(args, rep: Report, out: Outputs):
    from .trapezium import render_dot, render_png, render_svg

    t, kinds = _trapezium_input(args, rep)
    if t is None:
        rep.section("render", ["no machine computation connects the inputs within the budget"])
        rep.worse(OPEN)
        return
    text = render_svg(t, kinds) if args.format == "svg" else render_dot(t, kinds)
    rep.section("render", [f"format: {args.format}", f"height: {t.height}",
                           f"sha256: {_digest(text)}"])
    out.text(f"trapezium.{args.format}", text)
    out.figure("trapezium.png", lambda path: render_png(t, path, kinds))


# parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="semispace", description="Space functions of semigroup presentations.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, func, help_, **kw):
        sp = sub.add_parser(name, help=help_, **kw)
        sp.add_argument("--out", metavar="DIR", help="write the report and figures here")
        sp.set_defaults(func=func)
        return sp

    sp = add("validate", cmd_validate, "check a presentation or machine file")
    _add_presentation_flags(sp)
    sp.add_argument("--machine", metavar="FILE")

    for name in ("derive", "witness"):
        sp = add(name, cmd_derive, "least-space derivation between two words")
        _add_presentation_flags(sp)
        sp.add_argument("word")
        sp.add_argument("other")
        sp.add_argument("--max", type=int, default=10, metavar="L")
        _add_budgets(sp)

    sp = add("space", cmd_space, "least space of a derivation between two words")
    _add_presentation_flags(sp)
    sp.add_argument("word")
    sp.add_argument("other")
    sp.add_argument("--max", type=int, default=10, metavar="L")
    _add_budgets(sp)

    sp = add("sfn", cmd_sfn, "space function s(1..n)")
    _add_presentation_flags(sp)
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--max", type=int, default=10, metavar="L")
    _add_budgets(sp)

    sp = add("simulate", cmd_simulate, "run a machine on an input word")
    _add_presentation_flags(sp)
    sp.add_argument("--machine", metavar="FILE")
    sp.add_argument("--input", required=True, metavar="WORD")
    sp.add_argument("--m0-bound", type=int, default=4, metavar="N")
    sp.add_argument("--show", type=int, default=50, metavar="N", help="configurations to list")
    _add_budgets(sp, space=40, steps=10 ** 5)

    sp = add("pipeline", cmd_pipeline, "build the machine pipeline, optionally certify it")
    _add_presentation_flags(sp)
    sp.add_argument("--through", choices=["m1", "m2", "m3", "m4", "m5"], default="m5")
    sp.add_argument("--certify", type=int, nargs=2, metavar=("N_MAX", "BOUND"))
    sp.add_argument("--m0-bound", type=int, default=None, metavar="N")
    sp.add_argument("--machine", metavar="FILE", help="recognizer to start from instead of the table")
    sp.add_argument("--emit-machines", action="store_true")
    _add_budgets(sp)

    for name, func, help_ in (("compile", cmd_compile, "compile the monoid presentations"),
                              ("embed-check", cmd_embed_check, "compare equality in S and H")):
        sp = add(name, func, help_)
        _add_presentation_flags(sp)
        if name == "compile":
            sp.add_argument("--emit", choices=["h", "hprime", "p"], default="h")
            sp.add_argument("--check-embedding", type=int, nargs=2, metavar=("N_MAX", "L"))
        sp.add_argument("--m0-bound", type=int, default=6, metavar="N")
        sp.add_argument("--n", type=int, default=3)
        sp.add_argument("--max", type=int, default=10, metavar="L")
        sp.add_argument("--max-h", type=int, default=6, metavar="L_H")
        _add_budgets(sp, space=40)

    for name, func, help_ in (("trapezium", cmd_trapezium, "bands and figures of a trapezium"),
                              ("render", cmd_render, "draw a trapezium")):
        sp = add(name, func, help_)
        _add_presentation_flags(sp)
        sp.add_argument("word", nargs="?")
        sp.add_argument("other", nargs="?")
        sp.add_argument("--derivation", metavar="FILE")
        sp.add_argument("--kinds", metavar="FILE", help="letter kinds for a derivation file")
        sp.add_argument("--m0-bound", type=int, default=6, metavar="N")
        if name == "trapezium":
            sp.add_argument("--weight", type=int, default=3, metavar="C")
        else:
            sp.add_argument("--format", choices=["svg", "dot"], default="svg")
        _add_budgets(sp, space=40)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    rep = None
    try:
        args = ap.parse_args(argv)
        if not getattr(args, "func", None):
            ap.print_help()
            return BAD_INPUT
        _positive(args, "budget_nodes", "budget_space", "budget_steps")
        rep = Report(args.command)
        out = Outputs(args.out, rep)
        try:
            args.func(args, rep, out)
        except (BudgetExceeded, InconclusiveTable) as e:
            rep.section("budget", [str(e)])
            rep.worse(OPEN)
    except (InputError, PresentationError, MachineError) as e:
        print(f"error: {e}", file=sys.stderr)
        return BAD_INPUT
    except Exception:
        # keep exit code 1 for property violations only
        traceback.print_exc()
        return BAD_INPUT
    text = rep.render()
    sys.stdout.write(text)
    out.text(f"{args.command}.report", text)
    return rep.code


if __name__ == "__main__":
    sys.exit(main())
