"""Execution engine for transfinite register machine programs.

Successor steps follow the instruction set directly. At a limit stage
the machine state is the componentwise liminf of its history; the
engine reaches limit stages by certifying a repeating segment of recent
history and jumping across the induced limit in one move. Certification
replays the candidate segment symbolically with a fresh repetition
variable and requires every branch decision to be identical for all
repetitions, so one certified segment stands for the whole tail it
replaces. Nested limits reuse the same machinery: a previously
certified limit inside a candidate segment is re-verified with the
outer repetition variable still live.

A register that reaches the machine bound resets to zero on ITRM
machines and crashes wITRM machines, at successor steps and at limits
alike.

Reported halting times follow the convention that a bare HALT halts at
time 0; in general the report is the predecessor of the first time
whose configuration is halted.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .forms import (
    Form,
    ZERO_FORM,
    eq_verdict,
    form_add_ordinal,
    form_add_var,
    form_const,
    form_delta,
    form_drop_var,
    form_is_const,
    form_liminf,
    form_value,
    form_vars,
    min_form,
    order_verdict,
)
from .lang import (
    And,
    Condition,
    Copy,
    EqReg,
    EqZero,
    Halt,
    Inc,
    JumpIf,
    Not,
    Or,
    Oracle,
    Program,
    TrueCond,
    Zero,
    print_program,
)
from .ordinal import (
    Comparison,
    OMEGA,
    ONE,
    Ordinal,
    ZERO,
    add,
    compare,
    divmod_left,
    format_ordinal,
    from_int,
    left_subtract,
    mul,
    ord_min,
)

__all__ = [
    "Budgets",
    "Configuration",
    "CrashDuringInterval",
    "Crashed",
    "Diverges",
    "Exhausted",
    "ExhaustedError",
    "Halted",
    "LimitEvent",
    "MachineSpec",
    "NoOracle",
    "PeriodCertificate",
    "SegmentSummary",
    "Trace",
    "UNTIL_HALT_OR_LOOP",
    "detect_strong_loop",
    "halted",
    "halting_time",
    "initial_configuration",
    "occurrence_time",
    "occurrences",
    "program_hash",
    "run",
    "run_for",
    "step",
    "trace_to_json",
    "verify_certificate",
    "verify_loop_witness",
]


class NoOracle(Exception):
    """An ORACLE instruction was executed without an oracle configured."""


class ExhaustedError(Exception):
    def __init__(self, which: str):
        super().__init__(f"budget exhausted: {which}")
        self.which = which


class CrashDuringInterval(Exception):
    def __init__(self, time: Ordinal, register: int):
        super().__init__(f"register R{register} crashed at time {time}")
        self.time = time
        self.register = register


class _CrashSignal(Exception):
    def __init__(self, register: int):
        self.register = register


class _CrashAtLimit(Exception):
    def __init__(self, register: int):
        self.register = register


class _Reject(Exception):
    """Candidate period rejected; hit hints how many repetitions until
    the offending comparison flips (suppression only, no soundness role)."""

    def __init__(self, hit: int | None = None):
        self.hit = hit


@dataclass(frozen=True)
class Budgets:
    max_successor_steps: int = 200_000
    max_limit_events: int = 512
    max_period_search_window: int = 128


@dataclass(frozen=True)
class MachineSpec:
    bound: Ordinal
    variant: str = "ITRM"
    oracle: object | None = None
    budgets: Budgets = field(default_factory=Budgets)

    def __post_init__(self):
        if self.variant not in ("ITRM", "wITRM"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if compare(self.bound, OMEGA) is Comparison.LESS:
            raise ValueError("machine bound must be at least w")


@dataclass(frozen=True)
class Configuration:
    line: int
    regs: tuple[Ordinal, ...]


@dataclass(frozen=True)
class HitSummary:
    components: tuple[bool, ...]  # line first, then each register
    count: Ordinal


@dataclass(frozen=True)
class SegmentSummary:
    start_time: Ordinal
    length: Ordinal
    end_config: Configuration
    min_config: Configuration
    hits: tuple[HitSummary, ...]


@dataclass(frozen=True)
class LimitEvent:
    time: Ordinal
    kinds: tuple[str, ...]  # "AttainedLiminf" | "ProperLimit" per register
    pre: Configuration  # configuration opening the certified segment
    post: Configuration
    certificate: int


@dataclass(frozen=True)
class PeriodCertificate:
    base_time: Ordinal
    base_config: Configuration
    period_length: Ordinal
    growth: tuple[Ordinal | None, ...]
    control_path: tuple[tuple[int, bool | None], ...]
    verification: str


@dataclass(frozen=True)
class Trace:
    bound: Ordinal
    variant: str
    program: Program
    segments: tuple[SegmentSummary, ...]
    limit_events: tuple[LimitEvent, ...]
    certificates: tuple[PeriodCertificate, ...]


@dataclass(frozen=True)
class Halted:
    time: Ordinal
    final: Configuration


@dataclass(frozen=True)
class Diverges:
    witness: tuple[Ordinal, Ordinal]
    kind: str  # "StrongLoop" | "LimitLoop"


@dataclass(frozen=True)
class Crashed:
    time: Ordinal
    register: int


@dataclass(frozen=True)
class Exhausted:
    which: str  # "steps" | "limit_events"


class _Until:
    def __repr__(self):
        return "UNTIL_HALT_OR_LOOP"


UNTIL_HALT_OR_LOOP = _Until()


# -- concrete semantics -------------------------------------------------------


def halted(program: Program, config: Configuration) -> bool:
    return config.line >= len(program.instructions) or isinstance(
        program.instructions[config.line], Halt
    )


def _eval_cond(cond: Condition, regs: tuple[Ordinal, ...]) -> bool:
    if isinstance(cond, TrueCond):
        return True
    if isinstance(cond, EqZero):
        return regs[cond.i].is_zero
    if isinstance(cond, EqReg):
        return regs[cond.i] == regs[cond.j]
    if isinstance(cond, Not):
        return not _eval_cond(cond.inner, regs)
    if isinstance(cond, And):
        return _eval_cond(cond.left, regs) and _eval_cond(cond.right, regs)
    if isinstance(cond, Or):
        return _eval_cond(cond.left, regs) or _eval_cond(cond.right, regs)
    raise TypeError(f"unknown condition {cond!r}")


def step(spec: MachineSpec, program: Program, config: Configuration) -> Configuration:
    """One successor step. Halted configurations are absorbing. Raises
    NoOracle on an unconfigured ORACLE and _CrashSignal via run paths
    when a wITRM register reaches the bound."""
    if halted(program, config):
        return config
    instr = program.instructions[config.line]
    line = config.line
    regs = list(config.regs)
    if isinstance(instr, Zero):
        regs[instr.reg] = ZERO
        line += 1
    elif isinstance(instr, Inc):
        v = regs[instr.reg].successor()
        if v == spec.bound:
            if spec.variant == "wITRM":
                raise _CrashSignal(instr.reg)
            v = ZERO
        regs[instr.reg] = v
        line += 1
    elif isinstance(instr, Copy):
        regs[instr.dst] = regs[instr.src]
        line += 1
    elif isinstance(instr, JumpIf):
        line = instr.target if _eval_cond(instr.cond, regs) else line + 1
    elif isinstance(instr, Oracle):
        if spec.oracle is None:
            raise NoOracle(f"line {line}: ORACLE with no oracle configured")
        regs[instr.reg] = ONE if spec.oracle.eval(regs[instr.reg]) else ZERO
        line += 1
    else:
        raise TypeError(f"unknown instruction {instr!r}")
    return Configuration(line, tuple(regs))


def initial_configuration(
    program: Program, inputs: tuple[Ordinal, ...], bound: Ordinal
) -> Configuration:
    width = max(program.register_count, len(inputs))
    regs = list(inputs) + [ZERO] * (width - len(inputs))
    for i, v in enumerate(regs):
        if compare(v, bound) is not Comparison.LESS:
            raise ValueError(f"input R{i}={v} not below bound {bound}")
    return Configuration(0, tuple(regs))


def _match_concrete(
    config: Configuration, template: Configuration
) -> tuple[bool, tuple[bool, ...]]:
    comps = (config.line == template.line,) + tuple(
        config.regs[r] == template.regs[r] for r in range(len(template.regs))
    )
    return all(comps), comps


# -- history items -------------------------------------------------------------


@dataclass(frozen=True)
class _StepItem:
    start_time: Ordinal
    config: Configuration


@dataclass(frozen=True)
class _LimitItem:
    start_time: Ordinal
    config: Configuration
    post: Configuration
    length: Ordinal  # period_length * w
    period: tuple
    period_length: Ordinal
    growth: tuple[Ordinal | None, ...]
    min_config: Configuration
    hits: tuple[HitSummary, ...]
    creps: tuple[Ordinal, ...]  # per-template count of one repetition
    cert_index: int


@dataclass(frozen=True)
class _BlockItem:
    """Summary of finitely many repetitions skipped by run_for."""

    start_time: Ordinal
    config: Configuration
    length: Ordinal
    min_config: Configuration
    hits: tuple[HitSummary, ...]


@dataclass(frozen=True)
class _SpanItem:
    """A constant stretch of an absorbing (halted) configuration."""

    start_time: Ordinal
    config: Configuration
    length: Ordinal


# -- symbolic replay ------------------------------------------------------------


@dataclass(frozen=True)
class _Pos:
    line: int
    regs: tuple[Form, ...]
    min_line: int
    min_regs: tuple[Form, ...]
    counts: tuple[Ordinal, ...]
    comps: tuple[tuple[bool, ...], ...]


@dataclass
class _LimitResult:
    state: tuple[int, tuple[Form, ...]]
    positions: list
    path: list
    growth: tuple[Ordinal | None, ...]
    kinds: tuple[str, ...]
    var: int
    pos: _Pos
    creps: tuple[Ordinal, ...]
    transcript: str


class _Replay:
    def __init__(
        self,
        spec: MachineSpec,
        program: Program,
        watch: tuple,
        trust_items: bool = False,
    ):
        self.spec = spec
        self.program = program
        self.watch = watch
        # trust_items may only be set when every _LimitItem handed to
        # replay was committed in the same run with the same watch tuple;
        # the seek helpers pass a different watch and must re-derive.
        self.trust_items = trust_items
        self.depth = 0
        self.next_var = 0

    def fresh(self) -> int:
        v = self.next_var
        self.next_var += 1
        return v

    def cond(self, cond: Condition, regs) -> tuple[bool | None, int | None]:
        if isinstance(cond, TrueCond):
            return True, None
        if isinstance(cond, EqZero):
            v, hit = eq_verdict(regs[cond.i], ZERO_FORM)
            return {"always": True, "never": False, "varies": None}[v], hit
        if isinstance(cond, EqReg):
            v, hit = eq_verdict(regs[cond.i], regs[cond.j])
            return {"always": True, "never": False, "varies": None}[v], hit
        if isinstance(cond, Not):
            b, hit = self.cond(cond.inner, regs)
            return (None if b is None else not b), hit
        if isinstance(cond, And):
            a, ha = self.cond(cond.left, regs)
            b, hb = self.cond(cond.right, regs)
            if a is False or b is False:
                return False, None
            if a is None or b is None:
                return None, _first_hit(ha, hb)
            return True, None
        if isinstance(cond, Or):
            a, ha = self.cond(cond.left, regs)
            b, hb = self.cond(cond.right, regs)
            if a is True or b is True:
                return True, None
            if a is None or b is None:
                return None, _first_hit(ha, hb)
            return False, None
        raise TypeError(f"unknown condition {cond!r}")

    def match_templates(
        self, line: int, regs: tuple[Form, ...]
    ) -> tuple[tuple[Ordinal, ...], tuple[tuple[bool, ...], ...]]:
        counts = []
        comps_all = []
        for tpl in self.watch:
            comps = [line == tpl.line]
            full = comps[0]
            for r in range(len(tpl.regs)):
                v, hit = eq_verdict(regs[r], form_const(tpl.regs[r]))
                if v == "varies":
                    raise _Reject(hit)
                ok = v == "always"
                comps.append(ok)
                full = full and ok
            counts.append(ONE if full else ZERO)
            comps_all.append(tuple(comps))
        return tuple(counts), tuple(comps_all)

    def sym_step(self, state, positions, path):
        line, regs = state
        instr = self.program.instructions[line]
        if positions is not None:
            counts, comps = self.match_templates(line, regs)
            positions.append(_Pos(line, regs, line, regs, counts, comps))
        regs = list(regs)
        branch: bool | None = None
        if isinstance(instr, Zero):
            regs[instr.reg] = ZERO_FORM
            nline = line + 1
        elif isinstance(instr, Inc):
            f = form_add_ordinal(regs[instr.reg], ONE)
            v, hit = eq_verdict(f, form_const(self.spec.bound))
            if v == "varies":
                raise _Reject(hit)
            if v == "always":
                if self.spec.variant == "wITRM":
                    raise _Reject(None)  # repetition zero ran clean; unreachable
                f = ZERO_FORM
            regs[instr.reg] = f
            nline = line + 1
        elif isinstance(instr, Copy):
            regs[instr.dst] = regs[instr.src]
            nline = line + 1
        elif isinstance(instr, JumpIf):
            b, hit = self.cond(instr.cond, regs)
            if b is None:
                raise _Reject(hit)
            branch = b
            nline = instr.target if b else line + 1
        elif isinstance(instr, Oracle):
            if self.spec.oracle is None:
                raise NoOracle(f"line {line}: ORACLE with no oracle configured")
            f = regs[instr.reg]
            if form_is_const(f):
                ans = bool(self.spec.oracle.eval(form_value(f)))
            else:
                ans = self.query_family(f)
                if ans is None:
                    raise _Reject(None)
            regs[instr.reg] = form_const(ONE) if ans else ZERO_FORM
            nline = line + 1
        elif isinstance(instr, Halt):
            raise _Reject(None)  # halted configurations never sit inside a period
        else:
            raise TypeError(f"unknown instruction {instr!r}")
        if path is not None:
            path.append((line, branch))
        return (nline, tuple(regs))

    def query_family(self, f: Form) -> bool | None:
        ask = getattr(self.spec.oracle, "decide_family", None)
        if ask is None:
            return None
        base = ZERO
        delta = None
        tail = ZERO
        for p in f.parts:
            if isinstance(p, Ordinal):
                if delta is None:
                    base = add(base, p)
                else:
                    tail = add(tail, p)
            else:
                if delta is not None:
                    return None  # more than one variable
                delta = p.delta
        if delta is None:
            return None
        return ask(base, delta, tail)

    def replay(self, items, state, collect: bool):
        positions = [] if collect else None
        path = [] if collect else None
        for it in items:
            if isinstance(it, _StepItem):
                state = self.sym_step(state, positions, path)
            elif isinstance(it, _LimitItem):
                if self.trust_items and self._entry_matches(state, it.config):
                    # constant entry identical to the recorded one: the
                    # derivation is deterministic, so reuse the committed
                    # summary instead of re-deriving the nested limit
                    if positions is not None:
                        positions.append(
                            _Pos(
                                it.config.line,
                                state[1],
                                it.min_config.line,
                                tuple(form_const(v) for v in it.min_config.regs),
                                tuple(h.count for h in it.hits),
                                tuple(h.components for h in it.hits),
                            )
                        )
                    state = (
                        it.post.line,
                        tuple(form_const(v) for v in it.post.regs),
                    )
                    continue
                res = self.sym_limit(it.period, state)
                if positions is not None:
                    positions.append(res.pos)
                    path.extend(res.path)
                state = res.state
            else:
                raise _Reject(None)  # summarized blocks cannot be replayed
        return state, positions, path

    @staticmethod
    def _entry_matches(state, config: Configuration) -> bool:
        line, regs = state
        if line != config.line:
            return False
        return all(
            form_is_const(f) and form_value(f) == v
            for f, v in zip(regs, config.regs)
        )

    def sym_limit(self, period, state) -> _LimitResult:
        if self.depth >= 6:
            raise _Reject(None)
        self.depth += 1
        try:
            return self._sym_limit(period, state)
        finally:
            self.depth -= 1

    def _sym_limit(self, period, state) -> _LimitResult:
        line0, regs0 = state
        nregs = len(regs0)
        end1, _, _ = self.replay(period, state, collect=False)
        if end1[0] != line0:
            raise _Reject(None)
        deltas: list[Ordinal | None] = []
        for r in range(nregs):
            d = form_delta(regs0[r], end1[1][r])
            if d is None:
                raise _Reject(None)
            deltas.append(None if d.is_zero else d)
        var = self.fresh()
        grown = tuple(
            form_add_var(regs0[r], var, deltas[r]) if deltas[r] else regs0[r]
            for r in range(nregs)
        )
        end2, positions, path = self.replay(period, (line0, grown), collect=True)
        if end2[0] != line0:
            raise _Reject(None)
        for r in range(nregs):
            expected = (
                form_add_ordinal(grown[r], deltas[r]) if deltas[r] else grown[r]
            )
            if end2[1][r] != expected:
                raise _Reject(None)
        # liminf per register over the induced tail: min over position
        # streams of the per-repetition liminf (interval minima stand in
        # for the whole stretch a nested limit covers)
        limit_regs: list[Form] = []
        kinds: list[str] = []
        resets: list[int] = []
        for r in range(nregs):
            cands = [form_liminf(p.min_regs[r], var) for p in positions]
            value = min_form(cands)
            if value is None:
                raise _Reject(None)
            attained = any(
                var not in form_vars(positions[i].min_regs[r])
                and order_verdict(cands[i], value) is Comparison.EQUAL
                for i in range(len(positions))
            )
            v, hit = eq_verdict(value, form_const(self.spec.bound))
            if v == "varies":
                raise _Reject(hit)
            if v == "always":
                if self.spec.variant == "wITRM":
                    if self.depth == 1:
                        raise _CrashAtLimit(r)
                    raise _Reject(None)
                value = ZERO_FORM
                resets.append(r)
                attained = False
            kinds.append("AttainedLiminf" if attained else "ProperLimit")
            limit_regs.append(value)
        line_limit = min(p.min_line for p in positions)
        # this segment as a single position of an enclosing period
        min_regs_item = []
        for r in range(nregs):
            m = min_form([form_drop_var(p.min_regs[r], var) for p in positions])
            if m is None:
                raise _Reject(None)
            min_regs_item.append(m)
        creps = []
        counts_item = []
        comps_item = []
        for ti in range(len(self.watch)):
            crep = ZERO
            comp = tuple([False] * (1 + len(self.watch[ti].regs)))
            for p in positions:
                crep = add(crep, p.counts[ti])
                comp = tuple(a or b for a, b in zip(comp, p.comps[ti]))
            creps.append(crep)
            counts_item.append(mul(crep, OMEGA) if not crep.is_zero else ZERO)
            comps_item.append(comp)
        pos = _Pos(
            line0,
            regs0,
            min(line_limit, line0),
            tuple(min_regs_item),
            tuple(counts_item),
            tuple(comps_item),
        )
        branches = sum(1 for _, b in path if b is not None)
        transcript = (
            f"replayed {len(path)} instructions, {branches} uniform branches; "
            f"growth {[format_ordinal(d) if d else '-' for d in deltas]}; "
            f"line liminf {line_limit}"
            + (f"; resets {sorted(resets)}" if resets else "")
        )
        return _LimitResult(
            state=(line_limit, tuple(limit_regs)),
            positions=positions,
            path=path,
            growth=tuple(deltas),
            kinds=tuple(kinds),
            var=var,
            pos=pos,
            creps=tuple(creps),
            transcript=transcript,
        )


def _first_hit(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


# -- the run loop ---------------------------------------------------------------


class _Run:
    def __init__(
        self,
        spec: MachineSpec,
        program: Program,
        config: Configuration,
        start_time: Ordinal,
        watch: tuple,
        detect_loops: bool,
    ):
        self.spec = spec
        self.program = program
        self.watch = watch
        self.config = config
        self.t = start_time
        self.items: list = []
        self.steps = 0
        self.limits = 0
        self.detect = detect_loops
        self.seen: dict[Configuration, Ordinal] = (
            {config: start_time} if detect_loops else {}
        )
        self.suppress: dict[tuple[int, int], int] = {}
        self.events: list[LimitEvent] = []
        self.certs: list[PeriodCertificate] = []

    def advance(self, target: Ordinal | None):
        """Run until an outcome (target None) or until time target,
        returning None when the target is reached."""
        spec, program = self.spec, self.program
        while True:
            if target is not None and self.t == target:
                return None
            if halted(program, self.config):
                if target is None:
                    return Halted(time=_report_time(self.t), final=self.config)
                span = left_subtract(self.t, target)
                self.items.append(_SpanItem(self.t, self.config, span))
                self.t = target
                return None
            act = self._try_extrapolate(target)
            if act is not None:
                if act == "committed":
                    continue
                return act
            if self.steps >= spec.budgets.max_successor_steps:
                return Exhausted("steps")
            try:
                nxt = step(spec, program, self.config)
            except _CrashSignal as cs:
                return Crashed(time=self.t.successor(), register=cs.register)
            self.items.append(_StepItem(self.t, self.config))
            self.t = self.t.successor()
            self.steps += 1
            self.config = nxt
            if self.detect:
                dv = self._loop_check()
                if dv is not None:
                    return dv

    def _loop_check(self):
        prev = self.seen.get(self.config)
        if prev is not None:
            ok, crossed_limit = self._min_since(prev)
            if ok:
                kind = "LimitLoop" if crossed_limit else "StrongLoop"
                return Diverges(witness=(prev, self.t), kind=kind)
        self.seen[self.config] = self.t
        return None

    def _min_since(self, since: Ordinal) -> tuple[bool, bool]:
        """Componentwise, is every configuration in [since, now) at or
        above the current one? Conservative: a summarized item whose
        interval merely contains `since` is checked in full."""
        c = self.config
        crossed = False
        for it in reversed(self.items):
            m = it.config if isinstance(it, (_StepItem, _SpanItem)) else it.min_config
            if isinstance(it, _LimitItem):
                crossed = True
            if m.line < c.line:
                return False, crossed
            for r in range(len(c.regs)):
                if compare(m.regs[r], c.regs[r]) is Comparison.LESS:
                    return False, crossed
            if compare(it.start_time, since) is not Comparison.GREATER:
                break
        return True, crossed

    def _try_extrapolate(self, target: Ordinal | None):
        n = len(self.items)
        if n < 2:
            return None
        line = self.config.line
        budgets = self.spec.budgets
        for w in range(1, min(n, budgets.max_period_search_window) + 1):
            j = n - w
            it = self.items[j]
            if not isinstance(it, (_StepItem, _LimitItem)):
                break  # a summarized block ends the searchable history
            if it.config.line != line:
                continue
            key = (line, w)
            until = self.suppress.get(key)
            if until is not None and self.steps < until:
                continue
            base = it.config
            if any(
                compare(base.regs[r], self.config.regs[r]) is Comparison.GREATER
                for r in range(len(base.regs))
            ):
                continue
            base_time = it.start_time
            plen = left_subtract(base_time, self.t)
            period = tuple(self.items[j:])
            rep = _Replay(self.spec, self.program, self.watch, trust_items=True)
            state0 = (base.line, tuple(form_const(v) for v in base.regs))
            try:
                res = rep.sym_limit(period, state0)
            except _Reject as rej:
                per_rep = sum(1 for x in period if isinstance(x, _StepItem)) or 1
                reps = rej.hit if rej.hit is not None else 2
                self.suppress[key] = self.steps + max(w, reps * per_rep)
                continue
            except _CrashAtLimit as cr:
                lam = add(base_time, mul(plen, OMEGA))
                return Crashed(time=lam, register=cr.register)
            lam = add(base_time, mul(plen, OMEGA))
            if target is not None and compare(lam, target) is Comparison.GREATER:
                committed = self._jump_within(
                    res, base, base_time, plen, target
                )
                if committed:
                    return "committed"
                self.suppress[key] = self.steps + max(4, w)
                continue
            if self.limits >= budgets.max_limit_events:
                return Exhausted("limit_events")
            return self._commit(res, base, base_time, plen, lam, period, j)
        return None

    def _jump_within(self, res, base, base_time, plen, target) -> bool:
        """The full limit overshoots run_for's cut; skip whole
        repetitions instead, landing strictly before the limit."""
        needed = left_subtract(base_time, target)
        q, _rem = divmod_left(needed, plen)
        if compare(q, ONE) is not Comparison.GREATER:
            return False
        growth = res.growth
        cfg = Configuration(
            base.line,
            tuple(
                add(base.regs[r], mul(growth[r], q)) if growth[r] else base.regs[r]
                for r in range(len(base.regs))
            ),
        )
        tq = add(base_time, mul(plen, q))
        qm1 = left_subtract(ONE, q)
        env = {res.var: ONE}
        min_regs = tuple(
            min(
                (form_value(p.min_regs[r], env) for p in res.positions),
                key=_ord_key,
            )
            for r in range(len(base.regs))
        )
        min_line = min(p.min_line for p in res.positions)
        hits = tuple(
            HitSummary(res.pos.comps[ti], mul(res.creps[ti], qm1))
            for ti in range(len(self.watch))
        )
        self.items.append(
            _BlockItem(
                start_time=self.t,
                config=self.config,
                length=left_subtract(self.t, tq),
                min_config=Configuration(min_line, min_regs),
                hits=hits,
            )
        )
        self.t = tq
        self.config = cfg
        return True

    def _commit(self, res, base, base_time, plen, lam, period, j):
        line_post, reg_forms = res.state
        post = Configuration(line_post, tuple(form_value(f) for f in reg_forms))
        env0: dict[int, Ordinal] = {}
        min_regs = tuple(
            min(
                (form_value(p.min_regs[r], env0) for p in res.positions),
                key=_ord_key,
            )
            for r in range(len(base.regs))
        )
        min_line = min(p.min_line for p in res.positions)
        cert_index = len(self.certs)
        self.certs.append(
            PeriodCertificate(
                base_time=base_time,
                base_config=base,
                period_length=plen,
                growth=res.growth,
                control_path=tuple(res.path),
                verification=res.transcript,
            )
        )
        hits = tuple(
            HitSummary(res.pos.comps[ti], res.pos.counts[ti])
            for ti in range(len(self.watch))
        )
        item = _LimitItem(
            start_time=base_time,
            config=base,
            post=post,
            length=left_subtract(base_time, lam),
            period=period,
            period_length=plen,
            growth=res.growth,
            min_config=Configuration(min_line, min_regs),
            hits=hits,
            creps=res.creps,
            cert_index=cert_index,
        )
        del self.items[j:]
        self.items.append(item)
        self.events.append(
            LimitEvent(
                time=lam,
                kinds=res.kinds,
                pre=base,
                post=post,
                certificate=cert_index,
            )
        )
        self.limits += 1
        self.t = lam
        self.config = post
        if self.detect:
            dv = self._loop_check()
            if dv is not None:
                return dv
        return "committed"


def _ord_key(x: Ordinal):
    return _OrdKey(x)


class _OrdKey:
    __slots__ = ("x",)

    def __init__(self, x: Ordinal):
        self.x = x

    def __lt__(self, other):
        return compare(self.x, other.x) is Comparison.LESS


def _report_time(t: Ordinal) -> Ordinal:
    """Reported halting time: predecessor of the first halted stage,
    0 for a program that is halted before doing anything. The first
    halted stage is never a limit, because a liminf line is attained
    cofinally below the limit and halted configurations are absorbing."""
    if t.is_zero:
        return ZERO
    return t.predecessor()


# -- trace assembly --------------------------------------------------------------


def _config_min(a: Configuration, b: Configuration) -> Configuration:
    return Configuration(
        min(a.line, b.line),
        tuple(ord_min(x, y) for x, y in zip(a.regs, b.regs)),
    )


def _steps_summary(
    buf: list, end_config: Configuration, watch: tuple
) -> SegmentSummary:
    mc = buf[0].config
    for it in buf[1:]:
        mc = _config_min(mc, it.config)
    hits = []
    for tpl in watch:
        count = 0
        comps = tuple([False] * (1 + len(tpl.regs)))
        for it in buf:
            full, c = _match_concrete(it.config, tpl)
            count += 1 if full else 0
            comps = tuple(a or b for a, b in zip(comps, c))
        hits.append(HitSummary(comps, from_int(count)))
    return SegmentSummary(
        start_time=buf[0].start_time,
        length=from_int(len(buf)),
        end_config=end_config,
        min_config=mc,
        hits=tuple(hits),
    )


def _span_summary(it: _SpanItem, watch: tuple) -> SegmentSummary:
    hits = []
    for tpl in watch:
        full, comps = _match_concrete(it.config, tpl)
        hits.append(HitSummary(comps, it.length if full else ZERO))
    return SegmentSummary(it.start_time, it.length, it.config, it.config, tuple(hits))


def _assemble_segments(
    items: list, final_config: Configuration, watch: tuple
) -> tuple[SegmentSummary, ...]:
    segments: list[SegmentSummary] = []
    buf: list = []
    for it in items:
        if isinstance(it, _StepItem):
            buf.append(it)
            continue
        if buf:
            segments.append(_steps_summary(buf, it.config, watch))
            buf = []
        if isinstance(it, _SpanItem):
            segments.append(_span_summary(it, watch))
        elif isinstance(it, _LimitItem):
            segments.append(
                SegmentSummary(
                    start_time=it.start_time,
                    length=it.length,
                    end_config=it.post,
                    min_config=it.min_config,
                    hits=it.hits,
                )
            )
        else:
            raise AssertionError("summarized block in a full-run history")
    if buf:
        segments.append(_steps_summary(buf, final_config, watch))
    return tuple(segments)


# -- public operations -----------------------------------------------------------


def run(
    spec: MachineSpec,
    program: Program,
    inputs: tuple[Ordinal, ...] = (),
    watch: tuple[Configuration, ...] = (),
):
    """Execute from the initial configuration until the run resolves.

    Returns (outcome, trace) where outcome is Halted, Diverges, Crashed
    or Exhausted. Reported halting times are per the note in the module
    docstring; Diverges witnesses (i, x) satisfy config(i) = config(x)
    with the in-between minimum condition."""
    config = initial_configuration(program, tuple(inputs), spec.bound)
    watch = _check_watch(watch, len(config.regs))
    r = _Run(spec, program, config, ZERO, watch, detect_loops=True)
    outcome = r.advance(None)
    trace = Trace(
        bound=spec.bound,
        variant=spec.variant,
        program=program,
        segments=_assemble_segments(r.items, r.config, watch),
        limit_events=tuple(r.events),
        certificates=tuple(r.certs),
    )
    return outcome, trace


def run_for(
    spec: MachineSpec,
    program: Program,
    config: Configuration,
    length: Ordinal,
    start_time: Ordinal = ZERO,
    watch: tuple[Configuration, ...] = (),
) -> SegmentSummary:
    """Advance exactly `length` stages from `config`, summarizing the
    interval. Raises ExhaustedError when budgets run out before the cut
    and CrashDuringInterval when a wITRM register crashes inside it."""
    watch = _check_watch(watch, len(config.regs))
    if length.is_zero:
        empty = tuple(
            HitSummary(tuple([False] * (1 + len(t.regs))), ZERO) for t in watch
        )
        return SegmentSummary(start_time, ZERO, config, config, empty)
    target = add(start_time, length)
    r = _Run(spec, program, config, start_time, watch, detect_loops=False)
    out = r.advance(target)
    if isinstance(out, Crashed):
        raise CrashDuringInterval(out.time, out.register)
    if isinstance(out, Exhausted):
        raise ExhaustedError(out.which)
    assert out is None
    mc = r.items[0].config if isinstance(r.items[0], (_StepItem, _SpanItem)) else None
    min_config = None
    hits = [
        [tuple([False] * (1 + len(t.regs))), ZERO] for t in watch
    ]
    for it in r.items:
        m = it.config if isinstance(it, (_StepItem, _SpanItem)) else it.min_config
        min_config = m if min_config is None else _config_min(min_config, m)
        if isinstance(it, _StepItem):
            for ti, tpl in enumerate(watch):
                full, comps = _match_concrete(it.config, tpl)
                if full:
                    hits[ti][1] = add(hits[ti][1], ONE)
                hits[ti][0] = tuple(a or b for a, b in zip(hits[ti][0], comps))
        elif isinstance(it, _SpanItem):
            for ti, tpl in enumerate(watch):
                full, comps = _match_concrete(it.config, tpl)
                if full:
                    hits[ti][1] = add(hits[ti][1], it.length)
                hits[ti][0] = tuple(a or b for a, b in zip(hits[ti][0], comps))
        else:
            for ti in range(len(watch)):
                hits[ti][1] = add(hits[ti][1], it.hits[ti].count)
                hits[ti][0] = tuple(
                    a or b for a, b in zip(hits[ti][0], it.hits[ti].components)
                )
    if min_config is None:
        min_config = r.config
    return SegmentSummary(
        start_time=start_time,
        length=length,
        end_config=r.config,
        min_config=min_config,
        hits=tuple(HitSummary(c, n) for c, n in hits),
    )


def _check_watch(watch, width: int) -> tuple:
    watch = tuple(watch)
    for t in watch:
        if len(t.regs) != width:
            raise ValueError(
                f"watch template has {len(t.regs)} registers, run has {width}"
            )
    return watch


def halting_time(
    spec: MachineSpec, program: Program, inputs: tuple[Ordinal, ...] = ()
):
    """(reported halting time | None, outcome). None carries its reason
    in the outcome: divergence, crash, or exhausted budgets."""
    outcome, _ = run(spec, program, inputs)
    if isinstance(outcome, Halted):
        return outcome.time, outcome
    return None, outcome


def occurrences(
    spec: MachineSpec,
    program: Program,
    inputs: tuple[Ordinal, ...],
    target: Configuration,
    horizon=UNTIL_HALT_OR_LOOP,
) -> Ordinal:
    """How often the exact configuration `target` occurs, counted in
    time order, up to `horizon` (an ordinal) or until the run resolves.
    Raises ExhaustedError if budgets run out first."""
    if isinstance(horizon, Ordinal):
        config = initial_configuration(program, tuple(inputs), spec.bound)
        summary = run_for(spec, program, config, horizon, watch=(target,))
        return summary.hits[0].count
    outcome, trace = run(spec, program, inputs, watch=(target,))
    if isinstance(outcome, Exhausted):
        raise ExhaustedError(outcome.which)
    total = ZERO
    for seg in trace.segments:
        total = add(total, seg.hits[0].count)
    if isinstance(outcome, Halted):
        full, _ = _match_concrete(outcome.final, target)
        if full:
            total = add(total, ONE)
    return total


def occurrence_time(
    spec: MachineSpec,
    program: Program,
    inputs: tuple[Ordinal, ...],
    target: Configuration,
    index: Ordinal,
) -> Ordinal | None:
    """The time of the index-th occurrence (0-based, in time order) of
    `target`, or None if the run resolves with fewer occurrences."""
    config = initial_configuration(program, tuple(inputs), spec.bound)
    watch = _check_watch((target,), len(config.regs))
    r = _Run(spec, program, config, ZERO, watch, detect_loops=True)
    outcome = r.advance(None)
    found, remaining = _seek(spec, program, r.items, target, index)
    if found is not None:
        return found
    if isinstance(outcome, Halted):
        full, _ = _match_concrete(outcome.final, target)
        if full and remaining.is_zero:
            return r.t
    return None


def _seek(spec, program, items, target, index):
    """Walk history items consuming occurrence counts until the index-th
    match is located; returns (time | None, remaining index)."""
    for it in items:
        if isinstance(it, _StepItem):
            full, _ = _match_concrete(it.config, target)
            if full:
                if index.is_zero:
                    return it.start_time, ZERO
                index = left_subtract(ONE, index)
        elif isinstance(it, _SpanItem):
            full, _ = _match_concrete(it.config, target)
            if full:
                if compare(index, it.length) is Comparison.LESS:
                    return add(it.start_time, index), ZERO
                index = left_subtract(it.length, index)
        elif isinstance(it, _BlockItem):
            raise ValueError("occurrence_time over summarized blocks")
        else:
            count = it.hits[0].count
            if compare(index, count) is Comparison.LESS:
                return _seek_in_limit(spec, program, it, target, index)
            index = left_subtract(count, index)
    return None, index


def _seek_in_limit(spec, program, item: _LimitItem, target, index):
    crep = item.creps[0]
    q, rem = divmod_left(index, crep)
    rep = _Replay(spec, program, (target,))
    state0 = (item.config.line, tuple(form_const(v) for v in item.config.regs))
    res = rep.sym_limit(item.period, state0)
    env = {res.var: q}
    cfg = Configuration(
        item.config.line,
        tuple(form_value(f, env) for f in res.positions[0].regs),
    )
    t0 = add(item.start_time, mul(item.period_length, q))
    return _seek_in_rep(spec, program, item.period, cfg, t0, target, rem)


def _seek_in_rep(spec, program, period, config, t0, target, index):
    t = t0
    for it in period:
        if isinstance(it, _StepItem):
            full, _ = _match_concrete(config, target)
            if full:
                if index.is_zero:
                    return t, ZERO
                index = left_subtract(ONE, index)
            config = step(spec, program, config)
            t = t.successor()
        elif isinstance(it, _LimitItem):
            rep = _Replay(spec, program, (target,))
            state0 = (config.line, tuple(form_const(v) for v in config.regs))
            res = rep.sym_limit(it.period, state0)
            crep = ZERO
            for p in res.positions:
                crep = add(crep, p.counts[0])
            total = mul(crep, OMEGA) if not crep.is_zero else ZERO
            if compare(index, total) is Comparison.LESS:
                q, rem = divmod_left(index, crep)
                env = {res.var: q}
                cfg_q = Configuration(
                    config.line,
                    tuple(form_value(f, env) for f in res.positions[0].regs),
                )
                tq = add(t, mul(it.period_length, q))
                return _seek_in_rep(spec, program, it.period, cfg_q, tq, target, rem)
            index = left_subtract(total, index)
            lp, lr = res.state
            config = Configuration(lp, tuple(form_value(f) for f in lr))
            t = add(t, it.length)
        else:
            raise ValueError("unexpected item inside a period")
    raise AssertionError("index not consumed inside repetition")


def detect_strong_loop(configs) -> tuple[int, int] | None:
    """Scan a concrete configuration sequence (indexed by time) for the
    first pair i < x with config(i) = config(x) and every configuration
    in between componentwise at or above config(i)."""
    seen: dict[Configuration, list[int]] = {}
    for x, c in enumerate(configs):
        for i in seen.get(c, ()):
            ok = True
            for k in range(i, x):
                m = configs[k]
                if m.line < c.line or any(
                    compare(m.regs[r], c.regs[r]) is Comparison.LESS
                    for r in range(len(c.regs))
                ):
                    ok = False
                    break
            if ok:
                return i, x
        seen.setdefault(c, []).append(x)
    return None


def verify_certificate(
    spec: MachineSpec, program: Program, cert: PeriodCertificate
) -> tuple[bool, str]:
    """Replay one period concretely from the certified base, then again
    with growing registers shifted by one delta; both must follow the
    recorded control path shape and land exactly one delta further, and
    the two interval minima must be one delta apart as well."""
    growth = cert.growth
    if len(growth) != len(cert.base_config.regs):
        return False, "growth width mismatch"

    def shifted(cfg: Configuration, times: int) -> Configuration:
        return Configuration(
            cfg.line,
            tuple(
                add(cfg.regs[r], mul(growth[r], from_int(times)))
                if growth[r]
                else cfg.regs[r]
                for r in range(len(cfg.regs))
            ),
        )

    try:
        for shift in (0, 1):
            start = shifted(cert.base_config, shift)
            summary = run_for(spec, program, start, cert.period_length)
            expect_end = shifted(cert.base_config, shift + 1)
            if summary.end_config != expect_end:
                return False, (
                    f"replay {shift}: period ends at {summary.end_config}, "
                    f"expected {expect_end}"
                )
            if shift == 0:
                min0 = summary.min_config
            else:
                want = Configuration(
                    min0.line,
                    tuple(
                        add(min0.regs[r], growth[r]) if growth[r] else min0.regs[r]
                        for r in range(len(min0.regs))
                    ),
                )
                if summary.min_config != want:
                    return False, "interval minima do not track the growth"
        if cert.period_length.is_finite and cert.period_length.as_int() <= 10_000:
            cfg = cert.base_config
            for k, (line, branch) in enumerate(cert.control_path):
                if cfg.line != line:
                    return False, f"control path diverges at entry {k}"
                instr = program.instructions[cfg.line]
                if isinstance(instr, JumpIf):
                    taken = _eval_cond(instr.cond, cfg.regs)
                    if branch is None or taken != branch:
                        return False, f"branch outcome differs at entry {k}"
                cfg = step(spec, program, cfg)
    except (ExhaustedError, CrashDuringInterval, _CrashSignal, NoOracle) as e:
        return False, f"replay failed: {e}"
    return True, "period re-executed plainly and delta-shifted; minima consistent"


def verify_loop_witness(
    spec: MachineSpec,
    program: Program,
    inputs: tuple[Ordinal, ...],
    witness: tuple[Ordinal, Ordinal],
) -> bool:
    """Independent check of a Diverges witness (i, x): running to i and
    then for x-i stages returns to the same configuration without ever
    dropping below it."""
    i, x = witness
    config = initial_configuration(program, tuple(inputs), spec.bound)
    first = run_for(spec, program, config, i)
    again = run_for(spec, program, first.end_config, left_subtract(i, x), start_time=i)
    if again.end_config != first.end_config:
        return False
    a = first.end_config
    m = again.min_config
    if m.line < a.line:
        return False
    return all(
        compare(m.regs[r], a.regs[r]) is not Comparison.LESS
        for r in range(len(a.regs))
    )


def program_hash(program: Program) -> str:
    return hashlib.sha256(print_program(program).encode("utf-8")).hexdigest()


# -- trace serialization -----------------------------------------------------------


def _config_json(c: Configuration) -> dict:
    return {"line": c.line, "registers": [format_ordinal(r) for r in c.regs]}


def trace_to_json(outcome, trace: Trace) -> dict:
    """Stable JSON form of a finished run; field names and ordinal
    rendering are pinned by docs/trace_schema.md."""
    if isinstance(outcome, Halted):
        out = {
            "tag": "halted",
            "time": format_ordinal(outcome.time),
            "output": format_ordinal(outcome.final.regs[0]),
            "final": _config_json(outcome.final),
        }
    elif isinstance(outcome, Diverges):
        out = {
            "tag": "diverges",
            "witness": [format_ordinal(outcome.witness[0]), format_ordinal(outcome.witness[1])],
            "kind": "strong" if outcome.kind == "StrongLoop" else "limit",
        }
    elif isinstance(outcome, Crashed):
        out = {
            "tag": "crashed",
            "time": format_ordinal(outcome.time),
            "register": outcome.register,
        }
    else:
        out = {"tag": "exhausted", "which": outcome.which}
    return {
        "bound": format_ordinal(trace.bound),
        "variant": trace.variant,
        "program_hash": program_hash(trace.program),
        "outcome": out,
        "segments": [
            {
                "start_time": format_ordinal(s.start_time),
                "length": format_ordinal(s.length),
                "end_config": _config_json(s.end_config),
                "min_config": _config_json(s.min_config),
                "hits": [
                    {"components": list(h.components), "count": format_ordinal(h.count)}
                    for h in s.hits
                ],
            }
            for s in trace.segments
        ],
        "limit_events": [
            {
                "time": format_ordinal(e.time),
                "register_kinds": list(e.kinds),
                "pre": _config_json(e.pre),
                "post": _config_json(e.post),
                "certificate": e.certificate,
            }
            for e in trace.limit_events
        ],
        "certificates": [
            {
                "base_time": format_ordinal(c.base_time),
                "base_config": _config_json(c.base_config),
                "period_length": format_ordinal(c.period_length),
                "growth": [format_ordinal(g) if g else None for g in c.growth],
                "control_path": [[line, branch] for line, branch in c.control_path],
                "verification": c.verification,
            }
            for c in trace.certificates
        ],
    }
