"""Program generators: clocks, flags, speedups, searches, reductions.

Everything here emits plain lang.Program values to be run by
itrm.engine. Two conventions hold throughout. Register 0 is the output
register and never gets used as scratch. Every busy loop keeps its head
at the lowest line of the loop, so the control liminf at a limit time
lands back on the head, where the exit test sits.

The common building block is the wait gadget. Level one holds a pair
(A, B) armed to (0, 1) and swaps it through a scratch cell T forever;
a swap pass moves each value through every register, so at the first
limit time all three settle to liminf 0, the head comparison A = B
finally holds and the exit jump fires. Level e wraps level e-1 and
re-arms it once per pass, which multiplies the wait by another factor
of w: armed at the head at time v, the exit jump of level e is taken
at v + w^e and control sits one line past the gadget at v + w^e + 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from .engine import (
    Budgets,
    Configuration,
    MachineSpec,
    halted,
    halting_time,
    initial_configuration,
    occurrence_time,
    occurrences,
    run_for,
)
from .lang import (
    And,
    Asm,
    Condition,
    Copy,
    EqReg,
    EqZero,
    Halt,
    Inc,
    Instruction,
    JumpIf,
    Not,
    Or,
    Oracle,
    Program,
    TRUE,
    TrueCond,
    Zero,
    print_program,
    shift_targets,
)
from .oracles import SearchOracle
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
    mul,
    pair,
    power,
    tuple_code,
    unpair,
)

__all__ = [
    "ClockSpec",
    "CodeHandle",
    "NotClockable",
    "OutOfRange",
    "ReductionPlan",
    "SearchPlan",
    "SpeedupResult",
    "clock_cnf",
    "clock_cnf_spec",
    "clock_power",
    "clock_power_spec",
    "code_from_clock",
    "dfs_wellfounded",
    "flag",
    "host_wellfounded",
    "nested_flags",
    "nested_flags_watch",
    "order_type",
    "quantifier_search",
    "reduce_alpha_times_k",
    "render_generated",
    "singularize_continuous",
    "speedup",
    "verify_clock",
]


class OutOfRange(ValueError):
    """A requested parameter lies outside what the generator covers."""


class NotClockable(ValueError):
    """The run offers no finite recurrence count to hang a clock on."""


def _lt(a: Ordinal, b: Ordinal) -> bool:
    return compare(a, b) is Comparison.LESS


def _noop() -> Instruction:
    return Copy(0, 0)


def _all(conds: list[Condition]) -> Condition:
    if not conds:
        return TRUE
    return reduce(And, conds)


def _any(conds: list[Condition]) -> Condition:
    if not conds:
        return Not(TRUE)
    return reduce(Or, conds)


# -- wait gadgets ----------------------------------------------------------------


def _wait_regs(level: int, base: int) -> tuple[int, int, int]:
    a = base + 3 * (level - 1)
    return a, a + 1, a + 2


def _wait_fragment(
    level: int, base: int, start: int, count_reg: int | None = None
) -> list[Instruction]:
    """Busy-wait for w**level steps. Entry contract: the level's pair is
    armed (A = 0, B = 1) when control first reaches `start`. On exit all
    wait registers are 0 again and control sits one line past the
    fragment. With count_reg set, that register is incremented once per
    innermost pass, so it climbs to exactly w**level by the exit."""
    a, b, t = _wait_regs(level, base)
    if level == 1:
        body: list[Instruction] = [Copy(a, t), Copy(b, a), Copy(t, b), Zero(t)]
        if count_reg is not None:
            body.insert(0, Inc(count_reg))
        n = len(body) + 2
        return [JumpIf(EqReg(a, b), start + n), *body, JumpIf(TRUE, start)]
    inner = _wait_fragment(level - 1, base, start + 2, count_reg)
    n = len(inner)
    _, b_inner, _ = _wait_regs(level - 1, base)
    return [
        JumpIf(EqReg(a, b), start + n + 7),
        Inc(b_inner),
        *inner,
        Copy(a, t),
        Copy(b, a),
        Copy(t, b),
        Zero(t),
        JumpIf(TRUE, start),
    ]


def _wait_sequence(
    exponents: list[int], base: int, start: int, count_reg: int | None = None
) -> list[Instruction]:
    """Arm-and-wait once per exponent, in the order given. From entry at
    time v the exit lands one past the sequence at v + total + 1 where
    total is the ordinal sum of the w**e."""
    out: list[Instruction] = []
    for e in exponents:
        _, b, _ = _wait_regs(e, base)
        out.append(Inc(b))
        out.extend(_wait_fragment(e, base, start + len(out), count_reg))
    return out


def _cnf_exponents(gamma: Ordinal) -> tuple[list[int], int]:
    """Finite exponents of gamma < w^w, coefficient-expanded descending,
    plus the finite part."""
    waits: list[int] = []
    fin = 0
    for exp, coeff in gamma.terms:
        if not exp.is_finite:
            raise OutOfRange(f"{format_ordinal(gamma)} is not below w^w")
        e = exp.as_int()
        if e == 0:
            fin = coeff
        else:
            waits.extend([e] * coeff)
    return waits, fin


def flag(base: int = 1, start: int = 0) -> list[Instruction]:
    """Fragment that arms a level-one wait and runs it: dropped in at
    line `start`, it delays control by exactly w steps, then continues
    one line past with the three wait registers back to 0."""
    _, b, _ = _wait_regs(1, base)
    return [Inc(b), *_wait_fragment(1, base, start + 1)]


def nested_flags(k: int) -> Program:
    """Halt after exactly w^k steps: the stage reaching the HALT line is
    w^k + 1, so the reported halting time is w^k. Works at any bound and
    on both variants, since no register ever passes 1."""
    if k < 1:
        raise OutOfRange("nesting depth must be at least 1")
    _, b_k, _ = _wait_regs(k, 1)
    instrs = [Inc(b_k), *_wait_fragment(k, 1, 1), Halt()]
    return Program(tuple(instrs), register_count=3 * k + 1)


def nested_flags_watch(k: int) -> Configuration:
    """The innermost head configuration of nested_flags(k), armed at
    every level; it recurs at least w^k times before the halt."""
    regs = [ZERO] * (3 * k + 1)
    for j in range(1, k + 1):
        _, b, _ = _wait_regs(j, 1)
        regs[b] = ONE
    head = 1 + 2 * (k - 1)
    return Configuration(head, tuple(regs))


# -- exact clocks ----------------------------------------------------------------


def clock_cnf(gamma: Ordinal, bound: Ordinal = OMEGA) -> Program:
    """A program halting at exactly gamma (any gamma < w^w): one armed
    wait per CNF term, then the finite tail as noops. Bound-agnostic and
    variant-agnostic; `bound` is only validated."""
    if compare(bound, OMEGA) is Comparison.LESS:
        raise OutOfRange("machine bound must be at least w")
    waits, fin = _cnf_exponents(gamma)
    if gamma.is_zero:
        return Program((Halt(),))
    if not waits:
        # finite gamma: the stage reaching HALT must be gamma + 1
        return Program(tuple([_noop()] * (fin + 1) + [Halt()]))
    instrs = _wait_sequence(waits, 1, 0)
    instrs.extend([_noop()] * fin)
    instrs.append(Halt())
    return Program(tuple(instrs), register_count=3 * waits[0] + 1)


def clock_power(alpha: Ordinal, n: int) -> Program:
    """A program halting at exactly alpha^n when run at bound alpha on
    the resetting variant. Level j >= 2 loops level j-1 behind a counter
    that only returns to 0 when its liminf reaches the bound, so each
    level multiplies the run length by alpha. On the weak variant the
    counter overflow crashes the run instead."""
    if n < 1:
        raise OutOfRange("the exponent must be at least 1")
    if not alpha.is_limit:
        raise OutOfRange("the base must be a limit ordinal")
    waits, _ = _cnf_exponents(alpha)
    top = waits[0]

    def level(j: int, start: int) -> list[Instruction]:
        if j == 1:
            return _wait_sequence(waits, 1, start)
        cnt = 3 * top + (j - 1)
        inner = level(j - 1, start + 2)
        m = len(inner)
        return [
            Inc(cnt),
            JumpIf(EqZero(cnt), start + m + 4),
            *inner,
            Inc(cnt),
            JumpIf(TRUE, start + 1),
        ]

    instrs = level(n, 0)
    instrs.append(Halt())
    return Program(tuple(instrs), register_count=3 * top + n)


@dataclass(frozen=True)
class ClockSpec:
    """A generated program together with the halting value it claims."""

    program: Program
    target: Ordinal
    bound: Ordinal
    variant: str = "ITRM"
    inputs: tuple[Ordinal, ...] = ()


def clock_cnf_spec(gamma: Ordinal, bound: Ordinal = OMEGA) -> ClockSpec:
    return ClockSpec(clock_cnf(gamma, bound), gamma, bound)


def clock_power_spec(alpha: Ordinal, n: int) -> ClockSpec:
    return ClockSpec(clock_power(alpha, n), power(alpha, from_int(n)), alpha)


def verify_clock(clock: ClockSpec, budgets: Budgets | None = None) -> bool:
    """Run the claimed clock and compare the reported halting time."""
    spec = MachineSpec(
        clock.bound, clock.variant, budgets=budgets or Budgets()
    )
    t, _ = halting_time(spec, clock.program, clock.inputs)
    return t == clock.target


# -- speedup ---------------------------------------------------------------------


@dataclass(frozen=True)
class SpeedupResult:
    """A rebuilt program that halts at exactly `target` when started on
    `params`: the original inputs padded to the register width, followed
    by a frozen snapshot of the run at the limit part of the target."""

    program: Program
    params: tuple[Ordinal, ...]
    target: Ordinal


def speedup(
    spec: MachineSpec,
    program: Program,
    inputs: tuple[Ordinal, ...],
    iota: Ordinal,
) -> SpeedupResult:
    """Re-clock a long computation to halt at exactly iota.

    With iota = lam + m (lam its limit part), the run of `program` is
    advanced to stage lam; the configuration there, c, must already have
    occurred only finitely often, say g times. The rebuilt program is
    g + 1 copies of the original, each with a check line spliced in
    front of c's instruction that compares the live registers against a
    snapshot of c held in read-only parameter registers. A full match
    advances to the next copy, so the final copy's check fires at the
    g+1-th sighting. That sighting happens exactly at stage lam: the
    check lines at most double the step cost, and a limit absorbs any
    finite dilation. The finite tail m is padded with noops.
    """
    inputs = tuple(inputs)
    q, fin = divmod_left(iota, OMEGA)
    m = fin.as_int()
    lam = mul(OMEGA, q)
    if lam.is_zero:
        if iota.is_zero:
            return SpeedupResult(Program((Halt(),)), (), iota)
        return SpeedupResult(
            Program(tuple([_noop()] * (m + 1) + [Halt()])), (), iota
        )
    init = initial_configuration(program, inputs, spec.bound)
    seg = run_for(spec, program, init, lam)
    cstar = seg.end_config
    if halted(program, cstar):
        raise NotClockable("the run halts before the limit part of the target")
    gamma = occurrences(spec, program, inputs, cstar, horizon=lam)
    if not gamma.is_finite:
        raise NotClockable("the snapshot recurs unboundedly below the limit part")
    g = gamma.as_int()
    w = len(cstar.regs)
    p = len(program.instructions)
    cl = cstar.line
    match = _all([EqReg(i, w + i) for i in range(w)])
    stride = p + 1
    halt_abs = (g + 1) * stride + m

    def off(line: int) -> int:
        return line + 1 if line > cl else line

    def retarget(ins: Instruction, base: int) -> Instruction:
        if not isinstance(ins, JumpIf):
            return ins
        if ins.target >= p:
            # halting by running off the end must not enter the next copy
            return JumpIf(ins.cond, halt_abs)
        return JumpIf(ins.cond, base + off(ins.target))

    instrs: list[Instruction] = []
    for c in range(g + 1):
        base = c * stride
        fire = (c + 1) * stride + (cl + 1 if c < g else 0)
        for line, ins in enumerate(program.instructions):
            if line == cl:
                instrs.append(JumpIf(match, fire))
            instrs.append(retarget(ins, base))
    instrs.extend([_noop()] * m)
    instrs.append(Halt())
    params = inputs + (ZERO,) * (w - len(inputs)) + cstar.regs
    combined = Program(tuple(instrs), register_count=2 * w)
    return SpeedupResult(combined, params, iota)


# -- run codes and their order type ----------------------------------------------


class CodeHandle:
    """Ordinal codes for the stages of a halting run.

    Stage tau is coded as pair(c, i) where c codes the configuration at
    tau (line and registers, left-nested) and i says how many earlier
    stages show the same configuration. The coded relation holds between
    two stage codes exactly when the first stage precedes the second;
    codes that decode to no stage below the halting time relate to
    nothing."""

    def __init__(
        self,
        spec: MachineSpec,
        program: Program,
        inputs: tuple[Ordinal, ...],
        halt: Ordinal,
    ):
        self.spec = spec
        self.program = program
        self.inputs = tuple(inputs)
        self.halt = halt
        self.width = max(program.register_count, len(self.inputs))
        self._time_cache: dict[Ordinal, Ordinal | None] = {}

    def config_at(self, tau: Ordinal) -> Configuration:
        init = initial_configuration(self.program, self.inputs, self.spec.bound)
        return run_for(self.spec, self.program, init, tau).end_config

    def code_of(self, tau: Ordinal) -> Ordinal:
        cfg = self.config_at(tau)
        idx = occurrences(
            self.spec, self.program, self.inputs, cfg, horizon=tau
        )
        cc = tuple_code([from_int(cfg.line)] + list(cfg.regs))
        return pair(cc, idx)

    def _decode_config(self, cc: Ordinal) -> Configuration | None:
        parts: list[Ordinal] = []
        for _ in range(self.width):
            cc, last = unpair(cc)
            parts.append(last)
        parts.append(cc)
        parts.reverse()
        line = parts[0]
        if not line.is_finite or line.as_int() > len(self.program.instructions):
            return None
        regs = parts[1:]
        if any(not _lt(r, self.spec.bound) for r in regs):
            return None
        return Configuration(line.as_int(), tuple(regs))

    def time_of(self, code: Ordinal) -> Ordinal | None:
        if code in self._time_cache:
            return self._time_cache[code]
        cc, idx = unpair(code)
        cfg = self._decode_config(cc)
        t = None
        if cfg is not None:
            t = occurrence_time(
                self.spec, self.program, self.inputs, cfg, idx
            )
            if t is not None and not _lt(t, self.halt):
                t = None
        self._time_cache[code] = t
        return t

    def membership(self, code: Ordinal) -> bool:
        """code = pair(u, v): does stage u precede stage v?"""
        u, v = unpair(code)
        tu = self.time_of(u)
        if tu is None:
            return False
        tv = self.time_of(v)
        return tv is not None and _lt(tu, tv)

    def field_segments(self) -> list[tuple[Ordinal, Ordinal]]:
        """(start, length) blocks partitioning the stages [0, halt)."""
        segs: list[tuple[Ordinal, Ordinal]] = []
        start = ZERO
        for exp, coeff in self.halt.terms:
            block = power(OMEGA, exp)
            for _ in range(coeff):
                segs.append((start, block))
                start = add(start, block)
        return segs


def code_from_clock(
    spec: MachineSpec, program: Program, inputs: tuple[Ordinal, ...] = ()
) -> CodeHandle:
    """Run the program to completion and expose its stage order as a
    coded relation."""
    t, outcome = halting_time(spec, program, tuple(inputs))
    if t is None:
        raise ValueError(f"the run does not halt ({type(outcome).__name__})")
    return CodeHandle(spec, program, tuple(inputs), t)


def _segment_offsets(length: Ordinal) -> list[Ordinal]:
    offs = [ZERO]
    if _lt(ONE, length):
        offs.append(ONE)
    if length.is_limit and length != OMEGA:
        # interior limit stages of the block
        lead = length.terms[0][0]
        interior = power(OMEGA, lead.predecessor()) if not lead.is_limit else OMEGA
        for cand in (interior, mul(interior, from_int(2))):
            if _lt(cand, length):
                offs.append(cand)
    return offs


def order_type(
    handle: CodeHandle, field_segments: list[tuple[Ordinal, Ordinal]] | None = None
) -> Ordinal:
    """The order type of the coded stage relation, computed by summing
    the field segments and spot-checking the order against membership
    queries on sampled stages. Raises ValueError when a check fails."""
    segs = field_segments if field_segments is not None else handle.field_segments()
    total = ZERO
    samples: list[Ordinal] = []
    for start, length in segs:
        for o in _segment_offsets(length):
            samples.append(add(start, o))
        total = add(total, length)
    codes = [handle.code_of(t) for t in samples]
    for i in range(len(codes) - 1):
        u, v = codes[i], codes[i + 1]
        if not handle.membership(pair(u, v)):
            raise ValueError(f"stage {samples[i]} does not precede its successor")
        if handle.membership(pair(v, u)):
            raise ValueError(f"coded order is not antisymmetric at stage {samples[i]}")
    if codes:
        first, last = codes[0], codes[-1]
        if len(codes) > 1 and not handle.membership(pair(first, last)):
            raise ValueError("coded order is not transitive across segments")
        if handle.membership(pair(first, first)):
            raise ValueError("coded order is not irreflexive")
        # a code whose configuration part names no reachable line decodes
        # to no stage, so it must relate to nothing
        bad_line = from_int(len(handle.program.instructions) + 7)
        bad_cfg = tuple_code([bad_line] + [ZERO] * handle.width)
        garbage = pair(pair(bad_cfg, ZERO), first)
        if handle.membership(garbage):
            raise ValueError("an off-run code relates to a stage")
        if handle.membership(pair(first, pair(bad_cfg, ZERO))):
            raise ValueError("a stage relates to an off-run code")
    if total != handle.halt:
        raise ValueError(
            f"segments sum to {format_ordinal(total)}, "
            f"run has {format_ordinal(handle.halt)} stages"
        )
    return total


# -- well-order checking ----------------------------------------------------------


def host_wellfounded(relation, delta) -> tuple[bool, list[Ordinal] | None]:
    """Decide on the host whether a relation is a well-order on its
    field inside [0, delta), delta finite.

    `relation` is either an object with holds(a, b) or a plain callable.
    Returns (True, None) for a strict linear order on the field. For a
    cycle the witness is a descending chain: consecutive entries w[i+1]
    R w[i], looping back to its start, which certifies arbitrarily long
    descents. Linearity failures without a cycle return (False, None).
    """
    if isinstance(delta, Ordinal):
        if not delta.is_finite:
            raise OutOfRange("the host check needs a finite domain")
        d = delta.as_int()
    else:
        d = int(delta)
    rel = relation.holds if hasattr(relation, "holds") else relation
    els = [from_int(i) for i in range(d)]
    edges = [[bool(rel(els[a], els[b])) for b in range(d)] for a in range(d)]

    color = [0] * d  # 0 fresh, 1 on stack, 2 done
    parent: dict[int, int] = {}

    def cycle_from(v0: int) -> list[int] | None:
        stack = [(v0, 0)]
        color[v0] = 1
        while stack:
            v, nxt = stack[-1]
            advanced = False
            for b in range(nxt, d):
                if not edges[v][b]:
                    continue
                stack[-1] = (v, b + 1)
                if color[b] == 1:
                    # unwind the explicit stack back to b
                    nodes = [s for s, _ in stack]
                    return nodes[nodes.index(b):]
                if color[b] == 0:
                    color[b] = 1
                    stack.append((b, 0))
                    advanced = True
                    break
            if not advanced:
                color[v] = 2
                stack.pop()
        return None

    for v in range(d):
        if color[v] == 0:
            cyc = cycle_from(v)
            if cyc is not None:
                # descend against the edge direction, closing the loop
                witness = [els[cyc[0]]] + [els[x] for x in reversed(cyc)]
                return False, witness
    field = sorted(
        {a for a in range(d) if any(edges[a]) or any(e[a] for e in edges)}
    )
    for i, a in enumerate(field):
        for b in field[i + 1:]:
            if not edges[a][b] and not edges[b][a]:
                return False, None
    # an acyclic total strict relation on a finite field is transitive,
    # hence a finite linear order, hence a well-order
    return True, None


def _dfs_finite(d: int) -> Program:
    out, c, q = 0, 1, 2

    def bit(a: int, b: int) -> int:
        return 3 + a * d + b

    asm = Asm()
    rank = 0
    coded = sorted(
        (pair(from_int(a), from_int(b)).as_int(), a, b)
        for a in range(d)
        for b in range(d)
    )
    for r, a, b in coded:
        for _ in range(r - rank):
            asm.emit(Inc(c))
        rank = r
        asm.emit(Copy(c, q), Oracle(q), Copy(q, bit(a, b)))
    for x in range(d):
        asm.jump(Not(EqZero(bit(x, x))), "bad")
    for x in range(d):
        for y in range(x + 1, d):
            asm.jump(
                And(Not(EqZero(bit(x, y))), Not(EqZero(bit(y, x)))), "bad"
            )
    infield = [
        _any(
            [Not(EqZero(bit(x, u))) for u in range(d) if u != x]
            + [Not(EqZero(bit(u, x))) for u in range(d) if u != x]
        )
        for x in range(d)
    ]
    for x in range(d):
        for y in range(x + 1, d):
            asm.jump(
                _all(
                    [infield[x], infield[y], EqZero(bit(x, y)), EqZero(bit(y, x))]
                ),
                "bad",
            )
    for x in range(d):
        for y in range(d):
            for z in range(d):
                asm.jump(
                    _all(
                        [
                            Not(EqZero(bit(x, y))),
                            Not(EqZero(bit(y, z))),
                            EqZero(bit(x, z)),
                        ]
                    ),
                    "bad",
                )
    asm.emit(Inc(out))
    asm.emit(Halt())
    asm.mark("bad")
    asm.emit(Halt())
    return Program(tuple(asm.fragment()), register_count=3 + d * d)


def _emit_pair_scan(asm: Asm, tag: str, x: int, y: int, scratch: tuple[int, ...]) -> None:
    """Compute the code of the pair (x, y) into scratch[0] by walking
    the pair enumeration with a rank counter; same state machine as the
    stack macros, with fixups for the two liminf states that are not
    already scan states."""
    rr, aa, bb, mm, ff = scratch
    asm.emit(Zero(rr), Zero(aa), Zero(bb), Zero(mm), Zero(ff))
    asm.mark(f"{tag}s")
    asm.jump(
        And(EqZero(ff), And(Not(EqReg(bb, mm)), Not(EqReg(aa, mm)))), f"{tag}fa"
    )
    asm.jump(And(EqZero(ff), EqReg(aa, mm)), f"{tag}fb")
    asm.mark(f"{tag}c")
    asm.jump(And(EqReg(aa, x), EqReg(bb, y)), f"{tag}done")
    asm.jump(EqZero(ff), f"{tag}s1")
    asm.jump(EqReg(bb, mm), f"{tag}nb")
    asm.emit(Inc(bb), Inc(rr))
    asm.jump(TRUE, f"{tag}s")
    asm.mark(f"{tag}s1")
    asm.emit(Inc(aa), Inc(rr))
    asm.jump(TRUE, f"{tag}s")
    asm.mark(f"{tag}nb")
    asm.emit(Inc(mm), Copy(mm, bb), Zero(aa), Zero(ff), Inc(rr))
    asm.jump(TRUE, f"{tag}s")
    asm.mark(f"{tag}fa")
    asm.emit(Copy(mm, bb))
    asm.jump(TRUE, f"{tag}c")
    asm.mark(f"{tag}fb")
    asm.emit(Zero(bb), Inc(ff))
    asm.jump(TRUE, f"{tag}c")
    asm.mark(f"{tag}done")


def _dfs_transfinite(delta: Ordinal) -> Program:
    """The general checker for an infinite domain: manufacture delta in
    a register, sweep the axioms with counters tested against it, then
    probe greedy descents. Sound for the failures it can witness; the
    sweeps take on the order of delta^4 stages."""
    out = 0
    dp, x, y, z, u, q = 1, 2, 3, 4, 5, 6
    bxy, byx, byz, bxz = 7, 8, 9, 10
    fx, fy = 11, 12
    cur, w_, s = 13, 14, 15
    scratch = (16, 17, 18, 19, 20)
    wait_base = 21
    waits, fin = _cnf_exponents(delta)
    prologue = _wait_sequence(waits, wait_base, 0, count_reg=dp)
    prologue.extend([Inc(dp)] * fin)

    asm = Asm()

    def query(tag: str, a: int, b: int, into: int | None = None) -> None:
        _emit_pair_scan(asm, tag, a, b, scratch)
        asm.emit(Copy(scratch[0], q), Oracle(q))
        if into is not None:
            asm.emit(Copy(q, into))

    # irreflexivity sweep
    asm.mark("h1")
    asm.jump(EqReg(x, dp), "p2")
    query("i", x, x)
    asm.jump(Not(EqZero(q)), "bad")
    asm.emit(Inc(x))
    asm.jump(TRUE, "h1")
    # antisymmetry and totality sweep
    asm.mark("p2")
    asm.emit(Zero(x))
    asm.mark("h2x")
    asm.jump(EqReg(x, dp), "p3")
    asm.emit(Zero(y))
    asm.mark("h2y")
    asm.jump(EqReg(y, dp), "h2xn")
    query("a", x, y, bxy)
    query("b", y, x, byx)
    asm.jump(And(Not(EqZero(bxy)), Not(EqZero(byx))), "bad")
    asm.jump(Or(Not(EqZero(bxy)), Not(EqZero(byx))), "h2yn")
    asm.jump(EqReg(x, y), "h2yn")
    asm.emit(Zero(fx), Zero(u))
    asm.mark("h2fx")
    asm.jump(EqReg(u, dp), "h2fy0")
    query("c", x, u)
    asm.jump(Not(EqZero(q)), "h2fx1")
    query("d", u, x)
    asm.jump(Not(EqZero(q)), "h2fx1")
    asm.emit(Inc(u))
    asm.jump(TRUE, "h2fx")
    asm.mark("h2fx1")
    asm.emit(Inc(fx))
    asm.mark("h2fy0")
    asm.emit(Zero(fy), Zero(u))
    asm.mark("h2fy")
    asm.jump(EqReg(u, dp), "h2tot")
    query("e", y, u)
    asm.jump(Not(EqZero(q)), "h2fy1")
    query("f", u, y)
    asm.jump(Not(EqZero(q)), "h2fy1")
    asm.emit(Inc(u))
    asm.jump(TRUE, "h2fy")
    asm.mark("h2fy1")
    asm.emit(Inc(fy))
    asm.mark("h2tot")
    asm.jump(And(Not(EqZero(fx)), Not(EqZero(fy))), "bad")
    asm.mark("h2yn")
    asm.emit(Inc(y))
    asm.jump(TRUE, "h2y")
    asm.mark("h2xn")
    asm.emit(Inc(x))
    asm.jump(TRUE, "h2x")
    # transitivity sweep
    asm.mark("p3")
    asm.emit(Zero(x))
    asm.mark("h3x")
    asm.jump(EqReg(x, dp), "p4")
    asm.emit(Zero(y))
    asm.mark("h3y")
    asm.jump(EqReg(y, dp), "h3xn")
    asm.emit(Zero(z))
    asm.mark("h3z")
    asm.jump(EqReg(z, dp), "h3yn")
    query("g", x, y, bxy)
    query("h", y, z, byz)
    query("k", x, z, bxz)
    asm.jump(
        And(And(Not(EqZero(bxy)), Not(EqZero(byz))), EqZero(bxz)), "bad"
    )
    asm.emit(Inc(z))
    asm.jump(TRUE, "h3z")
    asm.mark("h3yn")
    asm.emit(Inc(y))
    asm.jump(TRUE, "h3y")
    asm.mark("h3xn")
    asm.emit(Inc(x))
    asm.jump(TRUE, "h3x")
    # greedy descent probe from every start
    asm.mark("p4")
    asm.emit(Zero(s))
    asm.mark("h4s")
    asm.jump(EqReg(s, dp), "good")
    asm.emit(Copy(s, cur), Zero(w_), Zero(u))
    asm.mark("h4u")
    asm.jump(EqReg(u, dp), "h4sn")
    query("m", u, cur)
    asm.jump(Not(EqZero(q)), "h4step")
    asm.emit(Inc(u))
    asm.jump(TRUE, "h4u")
    asm.mark("h4step")
    asm.emit(Copy(u, cur), Inc(w_), Zero(u))
    asm.jump(EqReg(w_, dp), "bad")
    asm.jump(TRUE, "h4u")
    asm.mark("h4sn")
    asm.emit(Inc(s))
    asm.jump(TRUE, "h4s")
    asm.mark("good")
    asm.emit(Inc(out), Halt())
    asm.mark("bad")
    asm.emit(Halt())

    body = shift_targets(asm.fragment(), len(prologue))
    top = waits[0] if waits else 1
    return Program(
        tuple(prologue) + tuple(body),
        register_count=wait_base + 3 * top,
    )


def dfs_wellfounded(bound: Ordinal, delta: Ordinal) -> Program:
    """A machine program deciding whether the oracle relation, read as
    pair codes over [0, delta), is a well-order on its field; output 1
    in R0 for yes. For finite delta the relation is loaded into bit
    registers and the order axioms checked outright, which is complete:
    a finite strict linear order is a well-order, and any axiom failure
    is found by the scan. For infinite delta the sweeps and the descent
    probe run transfinitely against a manufactured copy of delta."""
    if compare(bound, OMEGA) is Comparison.LESS:
        raise OutOfRange("machine bound must be at least w")
    if not _lt(delta, bound):
        raise OutOfRange("the domain must sit below the machine bound")
    if delta.is_finite:
        d = delta.as_int()
        if d == 0:
            return Program((Inc(0), Halt()))
        return _dfs_finite(d)
    return _dfs_transfinite(delta)


# -- bounded quantifier search -----------------------------------------------------


@dataclass(frozen=True)
class SearchPlan:
    """A generated search program with the oracle adapter and machine
    bound it must be run with."""

    program: Program
    oracle: SearchOracle
    machine_bound: Ordinal
    quantifiers: str


def quantifier_search(prefix: str, matrix, bound: Ordinal) -> SearchPlan:
    """Decide a quantified sentence Q0 x0 .. Q(L-1) x(L-1) M(x) with all
    variables below `bound`, L <= 3, writing 1 to R0 iff it holds.

    The variables are packed into one register q, innermost in the
    lowest digit; q only ever gets incremented, so at a limit its
    liminf is exactly the digit rollover. Each rollover of digit m is
    detected by a swapped pair settling to equality, and the innermost
    rollover hands the finished block to the oracle, which folds the
    last quantifier; the outer quantifiers are aggregated in flags. A
    deciding event for the outermost sweep ends the run early, and a
    full sweep of x0 ends it at q's own rollover to 0 at bound**L.
    Needs the resetting variant for that final rollover.
    """
    L = len(prefix)
    if not 1 <= L <= 3:
        raise OutOfRange("the prefix must have one to three quantifiers")
    if any(c not in "EA" for c in prefix):
        raise ValueError("the prefix is a string over E (exists) and A (forall)")
    if not bound.is_limit:
        raise OutOfRange("the variable bound must be a limit")
    if getattr(matrix, "arity_min", 1) > L:
        raise ValueError("the matrix needs more variables than the prefix binds")
    oracle = SearchOracle(matrix, prefix, bound)
    machine_bound = power(bound, from_int(L))

    out, q, g, sc = 0, 1, 2, 3
    s_flag = [4 + j for j in range(max(L - 1, 0))]
    pair_base = 4 + max(L - 1, 0)

    def pa(m2: int) -> int:
        return pair_base + 3 * (m2 - 1)

    asm = Asm()
    for m2 in range(1, L):
        asm.emit(Inc(pa(m2) + 1))
    asm.mark("head")
    asm.jump(And(EqZero(q), Not(EqZero(g))), "top")
    for m2 in range(L - 1, 0, -1):
        asm.jump(EqReg(pa(m2), pa(m2) + 1), f"b{m2}")
    asm.jump(Not(EqZero(g)), "go")
    asm.emit(Inc(g))
    asm.mark("go")
    if L == 1:
        asm.emit(Copy(q, sc), Oracle(sc))
        event = Not(EqZero(sc)) if prefix[0] == "E" else EqZero(sc)
        asm.jump(event, "early")
    else:
        a1 = pa(1)
        asm.emit(Copy(a1, a1 + 2), Copy(a1 + 1, a1), Copy(a1 + 2, a1 + 1), Zero(a1 + 2))
    asm.emit(Inc(q))
    asm.jump(TRUE, "head")

    def swap(m2: int) -> None:
        a = pa(m2)
        asm.emit(Copy(a, a + 2), Copy(a + 1, a), Copy(a + 2, a + 1), Zero(a + 2))

    for m2 in range(1, L):
        asm.mark(f"b{m2}")
        feeds = L - m2 - 1  # the sweep level this boundary's verdict feeds
        if m2 == 1:
            asm.emit(Copy(q, sc), Oracle(sc))
            want_true = prefix[feeds] == "E"
            event = Not(EqZero(sc)) if want_true else EqZero(sc)
        else:
            j = L - m2  # the sweep level whose pass just finished
            same = (prefix[j - 1] == "E") == (prefix[j] == "E")
            event = Not(EqZero(s_flag[j])) if same else EqZero(s_flag[j])
        asm.jump(event, f"e{m2}")
        asm.mark(f"r{m2}")
        if m2 >= 2:
            asm.emit(Zero(s_flag[L - m2]))
        for p2 in range(1, m2 + 1):
            asm.emit(Inc(pa(p2) + 1))
        if m2 + 1 <= L - 1:
            swap(m2 + 1)
        asm.jump(TRUE, "head")
        asm.mark(f"e{m2}")
        if feeds == 0:
            asm.jump(TRUE, "early")
        else:
            # saturate: a flag rewritten at every inner boundary would show
            # a transient 0 cofinally below the enclosing limit and its
            # liminf there would lose the record
            asm.jump(Not(EqZero(s_flag[feeds])), f"r{m2}")
            asm.emit(Inc(s_flag[feeds]))
            asm.jump(TRUE, f"r{m2}")

    asm.mark("top")
    # the sweep ran dry: no witness for E, no counterexample for A
    if prefix[0] == "A":
        asm.emit(Inc(out))
    asm.emit(Halt())
    asm.mark("early")
    if prefix[0] == "E":
        asm.emit(Inc(out))
    asm.emit(Halt())

    program = Program(tuple(asm.fragment()))
    return SearchPlan(program, oracle, machine_bound, prefix)


# -- register-count reduction -------------------------------------------------------


@dataclass(frozen=True)
class ReductionPlan:
    """A program transformed from bound alpha*k to bound alpha + 1.

    Each original register becomes k component registers spelling its
    value alpha*i + rho as i copies of alpha, then rho, then zeros; a
    dedicated register holds alpha itself, manufactured by the prologue.
    Every block starts by repairing the one liminf the components get
    wrong: a register whose original liminf reached alpha*k shows all
    components at alpha and is reset (resetting variant) or deliberately
    crashed (weak variant). Times dilate by a bounded factor, which
    limits absorb, so outcome and decoded output are preserved.
    """

    program: Program
    bound: Ordinal
    alpha: Ordinal
    k: int
    width: int

    def encode_value(self, v: Ordinal) -> tuple[Ordinal, ...]:
        i, rho = divmod_left(v, self.alpha)
        if not i.is_finite or i.as_int() >= self.k:
            raise ValueError(f"{format_ordinal(v)} is not below alpha*k")
        n = i.as_int()
        return (self.alpha,) * n + (rho,) + (ZERO,) * (self.k - 1 - n)

    def encode_inputs(self, inputs: tuple[Ordinal, ...]) -> tuple[Ordinal, ...]:
        vals = list(inputs) + [ZERO] * (self.width - len(inputs))
        flat: list[Ordinal] = []
        for v in vals:
            flat.extend(self.encode_value(v))
        return tuple(flat)

    def decode_value(self, comps: tuple[Ordinal, ...]) -> Ordinal:
        n = 0
        while n < self.k and comps[n] == self.alpha:
            n += 1
        rho = comps[n] if n < self.k else ZERO
        return add(mul(self.alpha, from_int(n)), rho)

    def decode_output(self, regs: tuple[Ordinal, ...]) -> Ordinal:
        return self.decode_value(regs[: self.k])


def reduce_alpha_times_k(
    program: Program, k: int, alpha: Ordinal, variant: str = "ITRM"
) -> ReductionPlan:
    """Rebuild a program meant for bound alpha*k so it runs at bound
    alpha + 1 on k times the registers. Oracle instructions are not
    supported, since component codes differ from the original values."""
    if k < 2:
        raise OutOfRange("k must be at least 2")
    if not alpha.is_limit:
        raise OutOfRange("alpha must be a limit ordinal")
    if variant not in ("ITRM", "wITRM"):
        raise ValueError(f"unknown variant {variant!r}")
    if any(isinstance(ins, Oracle) for ins in program.instructions):
        raise ValueError("oracle instructions do not survive the reduction")
    waits, _ = _cnf_exponents(alpha)
    w = program.register_count
    areg = k * w
    wait_base = areg + 1
    top = waits[0]

    def comp(r: int, j: int) -> int:
        return k * r + j

    def cond_tr(cond: Condition) -> Condition:
        if isinstance(cond, TrueCond):
            return cond
        if isinstance(cond, EqZero):
            return _all([EqZero(comp(cond.i, j)) for j in range(k)])
        if isinstance(cond, EqReg):
            return _all([EqReg(comp(cond.i, j), comp(cond.j, j)) for j in range(k)])
        if isinstance(cond, Not):
            return Not(cond_tr(cond.inner))
        if isinstance(cond, And):
            return And(cond_tr(cond.left), cond_tr(cond.right))
        if isinstance(cond, Or):
            return Or(cond_tr(cond.left), cond_tr(cond.right))
        raise TypeError(f"unknown condition {cond!r}")

    fix_len = (k + 2) if variant == "ITRM" else 3

    def body_len(ins: Instruction) -> int:
        if isinstance(ins, Zero) or isinstance(ins, Copy):
            return k
        if isinstance(ins, Inc):
            return 3 * k + 1
        return 1  # JumpIf, Halt

    prologue = _wait_sequence(waits, wait_base, 0, count_reg=areg)
    starts: list[int] = []
    pos = len(prologue)
    for ins in program.instructions:
        starts.append(pos)
        pos += w * fix_len + body_len(ins)
    starts.append(pos)  # a jump past the end stays a halt

    instrs: list[Instruction] = list(prologue)
    for ins in program.instructions:
        for r in range(w):
            here = len(instrs)
            all_alpha = _all([EqReg(comp(r, j), areg) for j in range(k)])
            if variant == "ITRM":
                instrs.append(JumpIf(all_alpha, here + 2))
                instrs.append(JumpIf(TRUE, here + 2 + k))
                instrs.extend(Zero(comp(r, j)) for j in range(k))
            else:
                instrs.append(JumpIf(all_alpha, here + 2))
                instrs.append(JumpIf(TRUE, here + 3))
                instrs.append(Inc(areg))  # drives the register to the bound
        if isinstance(ins, Zero):
            instrs.extend(Zero(comp(ins.reg, j)) for j in range(k))
        elif isinstance(ins, Copy):
            instrs.extend(Copy(comp(ins.src, j), comp(ins.dst, j)) for j in range(k))
        elif isinstance(ins, Inc):
            here = len(instrs)
            end = here + 3 * k + 1
            for j in range(k):
                instrs.append(
                    JumpIf(Not(EqReg(comp(ins.reg, j), areg)), here + k + 1 + 2 * j)
                )
            instrs.append(JumpIf(TRUE, end))  # all components at alpha: unreachable
            for j in range(k):
                instrs.append(Inc(comp(ins.reg, j)))
                instrs.append(JumpIf(TRUE, end))
        elif isinstance(ins, JumpIf):
            instrs.append(JumpIf(cond_tr(ins.cond), starts[ins.target]))
        elif isinstance(ins, Halt):
            instrs.append(Halt())
        else:
            raise TypeError(f"unknown instruction {ins!r}")
    out = Program(tuple(instrs), register_count=wait_base + 3 * top)
    return ReductionPlan(out, add(alpha, ONE), alpha, k, w)


# -- singularization ----------------------------------------------------------------


def _shift_cond(cond: Condition, off: int) -> Condition:
    if isinstance(cond, TrueCond):
        return cond
    if isinstance(cond, EqZero):
        return EqZero(cond.i + off)
    if isinstance(cond, EqReg):
        return EqReg(cond.i + off, cond.j + off)
    if isinstance(cond, Not):
        return Not(_shift_cond(cond.inner, off))
    if isinstance(cond, And):
        return And(_shift_cond(cond.left, off), _shift_cond(cond.right, off))
    if isinstance(cond, Or):
        return Or(_shift_cond(cond.left, off), _shift_cond(cond.right, off))
    raise TypeError(f"unknown condition {cond!r}")


def singularize_continuous(program: Program, beta: Ordinal) -> Program:
    """From a program computing an increasing cofinal f on inputs below
    beta, build one computing g(n) = sup of f over the first n inputs:
    an omega-length table of ordinals cofinal in the original bound.
    The inner program is inlined and rerun for each finite argument; the
    running supremum is maintained by counting a scratch register up to
    the smaller of the old supremum and the new value, which works at
    limits because the count-up's own liminf lands on the compare."""
    if not beta.is_limit:
        raise OutOfRange("the domain must be a limit ordinal")
    n_reg, c_reg, sup, c2 = 0, 1, 2, 3
    off = 4
    w = program.register_count
    p = len(program.instructions)
    inline_base = w + 2
    after = inline_base + p

    instrs: list[Instruction] = [JumpIf(EqReg(c_reg, n_reg), after + 9)]
    instrs.extend(Zero(off + r) for r in range(w))
    instrs.append(Copy(c_reg, off))
    for ins in program.instructions:
        if isinstance(ins, Halt):
            instrs.append(JumpIf(TRUE, after))
        elif isinstance(ins, Zero):
            instrs.append(Zero(ins.reg + off))
        elif isinstance(ins, Inc):
            instrs.append(Inc(ins.reg + off))
        elif isinstance(ins, Copy):
            instrs.append(Copy(ins.src + off, ins.dst + off))
        elif isinstance(ins, Oracle):
            instrs.append(Oracle(ins.reg + off))
        elif isinstance(ins, JumpIf):
            instrs.append(JumpIf(_shift_cond(ins.cond, off), inline_base + ins.target))
        else:
            raise TypeError(f"unknown instruction {ins!r}")
    assert len(instrs) == after
    instrs.extend(
        [
            Zero(c2),
            JumpIf(And(EqReg(c2, sup), EqReg(c2, off)), after + 7),
            JumpIf(EqReg(c2, sup), after + 6),
            JumpIf(EqReg(c2, off), after + 7),
            Inc(c2),
            JumpIf(TRUE, after + 1),
            Copy(off, sup),
            Inc(c_reg),
            JumpIf(TRUE, 0),
            Copy(sup, n_reg),
            Halt(),
        ]
    )
    return Program(tuple(instrs), register_count=off + w)


# -- serialization -------------------------------------------------------------------


def render_generated(
    program: Program, kind: str, params: dict[str, object], contract: str
) -> str:
    """Canonical program text with a comment header naming the generator,
    its parameters, and what the output promises. Reparses to the same
    program."""
    shown = ", ".join(f"{k}={v}" for k, v in params.items())
    lines = [f"# {kind}({shown})" if shown else f"# {kind}", f"# {contract}"]
    lines.append(print_program(program))
    return "\n".join(lines) + "\n"
