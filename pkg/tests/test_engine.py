"""Engine behavior against the naive sampling stepper and hand-frozen runs.

Expected values comments like "naive: ..." were produced by the support
module's independent stepper (integer registers, suffix-minima liminf
sampling) and frozen here.
"""

from __future__ import annotations

import random

import pytest

from itrm.engine import (
    Budgets,
    Configuration,
    Crashed,
    CrashDuringInterval,
    Diverges,
    Exhausted,
    ExhaustedError,
    Halted,
    MachineSpec,
    NoOracle,
    UNTIL_HALT_OR_LOOP,
    detect_strong_loop,
    halting_time,
    initial_configuration,
    occurrence_time,
    occurrences,
    run,
    run_for,
    trace_to_json,
    verify_certificate,
    verify_loop_witness,
)
from itrm.lang import (
    Copy,
    Halt,
    Inc,
    JumpIf,
    Program,
    TrueCond,
    Zero,
    parse,
    shift_targets,
    stack_pop,
    stack_push,
)
from itrm.ordinal import OMEGA, ONE, ZERO, add, from_int, parse_ordinal

from support import naive_step, naive_trajectory

W = OMEGA


def o(text: str):
    return parse_ordinal(text)


COUNT = parse(
    """
    0: INC R2
    1: INC R1
    2: JUMP (R1=0 & !(R2=0)) 5
    3: INC R1
    4: JUMP TRUE 2
    5: COPY R1 R1
    6: HALT
    """
)

FLAG = parse(
    """
    0: INC R0
    1: JUMP (R0=0) 4
    2: INC R0
    3: JUMP TRUE 1
    4: HALT
    """
)

INC_FOREVER = parse("0: INC R0\n1: JUMP TRUE 0")

ITRM = MachineSpec(bound=W, variant="ITRM")
WITRM = MachineSpec(bound=W, variant="wITRM")


def cfg(line, *regs):
    return Configuration(line, tuple(from_int(r) for r in regs))


# -- halting across the first limit ---------------------------------------------


def test_bare_halt_reports_time_zero():
    outcome, _ = run(ITRM, parse("0: HALT"))
    assert isinstance(outcome, Halted)
    assert outcome.time == ZERO
    assert outcome.final.regs == (ZERO,)


def test_count_halts_at_w_plus_1():
    # naive: ('halted', 1, 2, (6, (0, 0, 1))), so first halted stage is
    # w+2 and the reported time its predecessor
    outcome, trace = run(ITRM, COUNT)
    assert isinstance(outcome, Halted)
    assert outcome.time == o("w+1")
    assert outcome.final == cfg(6, 0, 0, 1)
    assert len(trace.limit_events) == 1
    ev = trace.limit_events[0]
    assert ev.time == W
    assert ev.kinds[1] == "ProperLimit"  # R1 climbed and reset
    assert ev.kinds[2] == "AttainedLiminf"  # R2 sat at 1
    assert ev.post.line == 2


def test_count_crashes_witrm():
    # naive: ('crashed', 1, 1)
    outcome, _ = run(WITRM, COUNT)
    assert outcome == Crashed(time=W, register=1)


def test_flag_halts_exactly_at_w():
    # naive: ('halted', 1, 1, (4, (0,)))
    t, outcome = halting_time(ITRM, FLAG)
    assert t == W
    assert outcome.final == cfg(4, 0)


def test_flag_crashes_witrm_at_w():
    outcome, _ = run(WITRM, FLAG)
    assert outcome == Crashed(time=W, register=0)


def test_successor_overflow_at_bound_above_w():
    prog = parse("0: INC R0\n1: HALT")
    spec = MachineSpec(bound=o("w+1"), variant="ITRM")
    outcome, _ = run(spec, prog, inputs=(W,))
    assert isinstance(outcome, Halted)
    assert outcome.final.regs[0] == ZERO
    outcome, _ = run(MachineSpec(bound=o("w+1"), variant="wITRM"), prog, inputs=(W,))
    assert outcome == Crashed(time=ONE, register=0)


def test_inputs_validated_against_bound():
    with pytest.raises(ValueError):
        run(ITRM, FLAG, inputs=(W,))


# -- divergence witnesses ---------------------------------------------------------


def test_trivial_strong_loop():
    outcome, _ = run(ITRM, parse("0: JUMP TRUE 0"))
    assert outcome == Diverges(witness=(ZERO, ONE), kind="StrongLoop")


def test_two_line_strong_loop_witness_gap_two():
    prog = parse("0: INC R0\n1: JUMP TRUE 2\n2: JUMP TRUE 1")
    outcome, _ = run(ITRM, prog)
    assert outcome == Diverges(witness=(ONE, from_int(3)), kind="StrongLoop")


def test_inc_forever_is_a_limit_loop():
    # naive limit state: (0, (0,)), equal to the initial configuration
    outcome, _ = run(ITRM, INC_FOREVER)
    assert isinstance(outcome, Diverges)
    assert outcome.kind == "LimitLoop"
    assert outcome.witness == (ZERO, W)


def test_loop_witnesses_verify_and_mutations_fail():
    for prog in (parse("0: JUMP TRUE 0"), INC_FOREVER):
        outcome, _ = run(ITRM, prog)
        assert verify_loop_witness(ITRM, prog, (), outcome.witness)
    assert not verify_loop_witness(ITRM, INC_FOREVER, (), (ONE, W))


def test_detect_strong_loop_on_concrete_sequences():
    traj = [(s[0], tuple(from_int(v) for v in s[1])) for s in naive_trajectory(INC_FOREVER, (), 20)]
    configs = [Configuration(l, r) for l, r in traj]
    assert detect_strong_loop(configs) is None  # R0 strictly climbs
    prog = parse("0: JUMP TRUE 0")
    seq = [Configuration(0, (ZERO,)), Configuration(0, (ZERO,))]
    assert detect_strong_loop(seq) == (0, 1)


# -- run_for: finite cuts, limit cuts, composition --------------------------------


@pytest.mark.parametrize("steps", [0, 1, 2, 3, 5, 9, 17, 40])
def test_run_for_matches_naive_stepping(steps):
    traj = naive_trajectory(COUNT, (), steps)
    want = traj[min(steps, len(traj) - 1)]
    start = initial_configuration(COUNT, (), W)
    summary = run_for(ITRM, COUNT, start, from_int(steps))
    got = (summary.end_config.line, tuple(v.as_int() for v in summary.end_config.regs))
    assert got == want
    lo_line = min(s[0] for s in traj[:-1]) if steps else 0
    if steps:
        assert summary.min_config.line == lo_line


def test_run_for_to_the_first_limit():
    start = initial_configuration(COUNT, (), W)
    summary = run_for(ITRM, COUNT, start, W)
    assert summary.end_config == cfg(2, 0, 0, 1)
    assert summary.min_config == cfg(0, 0, 0, 0)
    assert summary.length == W


def test_run_for_composes_across_limits():
    start = initial_configuration(INC_FOREVER, (), W)
    s1 = run_for(ITRM, INC_FOREVER, start, W)
    s2 = run_for(ITRM, INC_FOREVER, s1.end_config, W, start_time=W)
    s12 = run_for(ITRM, INC_FOREVER, start, o("w*2"))
    assert s1.end_config == cfg(0, 0)
    assert s2.end_config == s12.end_config == cfg(0, 0)


def test_run_for_absorbs_halted_spans():
    prog = parse("0: HALT")
    start = initial_configuration(prog, (), W)
    summary = run_for(ITRM, prog, start, o("w^(2)+3"))
    assert summary.end_config == start
    assert summary.length == o("w^(2)+3")


def test_run_for_crash_inside_interval():
    with pytest.raises(CrashDuringInterval) as e:
        run_for(WITRM, COUNT, initial_configuration(COUNT, (), W), o("w+1"))
    assert e.value.time == W
    assert e.value.register == 1


def test_run_for_partial_advance_jumps_repetitions():
    # a finite cut inside a long climb exercises the block fast-forward
    start = initial_configuration(INC_FOREVER, (), W)
    summary = run_for(ITRM, INC_FOREVER, start, from_int(20_001))
    assert summary.end_config.regs[0].as_int() in (10_000, 10_001)
    assert summary.min_config == cfg(0, 0)


# -- occurrence accounting ---------------------------------------------------------


def test_occurrences_of_halting_configuration():
    target = cfg(6, 0, 0, 1)
    assert occurrences(ITRM, COUNT, (), target) == ONE


def test_occurrences_with_certification_interference():
    # the watched value sits mid-climb; certification must wait it out
    target = cfg(0, 5)
    assert occurrences(ITRM, INC_FOREVER, (), target, UNTIL_HALT_OR_LOOP) == ONE


def test_occurrences_across_two_limits():
    target = cfg(0, 0)
    n = occurrences(ITRM, INC_FOREVER, (), target, horizon=o("w*2"))
    assert n == from_int(2)  # once at 0, once at w


def test_occurrence_times_frozen_from_naive_stepper():
    # naive: (3,(0,3,1)) at 9, (3,(0,6,1)) at 18, INC_FOREVER (0,(5,)) at 10
    assert occurrence_time(ITRM, COUNT, (), cfg(3, 0, 3, 1), ZERO) == from_int(9)
    assert occurrence_time(ITRM, COUNT, (), cfg(3, 0, 6, 1), ZERO) == from_int(18)
    assert occurrence_time(ITRM, INC_FOREVER, (), cfg(0, 5), ZERO) == from_int(10)
    assert occurrence_time(ITRM, INC_FOREVER, (), cfg(0, 5), ONE) is None


def test_occurrence_time_of_the_halting_configuration():
    # the halting configuration first appears at stage w+2, one past the
    # reported halting time
    t = occurrence_time(ITRM, COUNT, (), cfg(6, 0, 0, 1), ZERO)
    assert t == o("w+2")


# -- budgets ------------------------------------------------------------------------


def test_step_budget_exhausts_honestly():
    tight = MachineSpec(bound=W, budgets=Budgets(max_successor_steps=3))
    outcome, _ = run(tight, COUNT)
    assert outcome == Exhausted(which="steps")


def test_limit_budget_exhausts_honestly():
    tight = MachineSpec(bound=W, budgets=Budgets(max_limit_events=0))
    outcome, _ = run(tight, COUNT)
    assert outcome == Exhausted(which="limit_events")


def test_raising_budgets_only_resolves_more():
    small = MachineSpec(bound=W, budgets=Budgets(max_successor_steps=3))
    big = MachineSpec(bound=W)
    a, _ = run(small, COUNT)
    b, _ = run(big, COUNT)
    assert isinstance(a, Exhausted) and isinstance(b, Halted)


def test_occurrences_raise_when_budget_blocks():
    tight = MachineSpec(bound=W, budgets=Budgets(max_successor_steps=3))
    with pytest.raises(ExhaustedError):
        occurrences(tight, COUNT, (), cfg(6, 0, 0, 1))


# -- certificates --------------------------------------------------------------------


def test_certificates_verify_and_mutations_are_rejected():
    outcome, trace = run(ITRM, COUNT)
    assert trace.certificates
    cert = trace.certificates[0]
    ok, why = verify_certificate(ITRM, COUNT, cert)
    assert ok, why

    import dataclasses

    worse = dataclasses.replace(cert, period_length=add(cert.period_length, ONE))
    assert not verify_certificate(ITRM, COUNT, worse)[0]
    # shifting the base along the loop's own growth stays a true period,
    # so corrupt it with a state where the exit guard fires instead
    broken = dataclasses.replace(
        cert, base_config=Configuration(2, (ZERO, ZERO, ONE))
    )
    assert not verify_certificate(ITRM, COUNT, broken)[0]
    if any(g is not None for g in cert.growth):
        grown = dataclasses.replace(
            cert,
            growth=tuple(add(g, g) if g else None for g in cert.growth),
        )
        assert not verify_certificate(ITRM, COUNT, grown)[0]
    if cert.control_path:
        line0, branch0 = cert.control_path[0]
        flipped = dataclasses.replace(
            cert,
            control_path=((line0 + 1, branch0),) + cert.control_path[1:],
        )
        assert not verify_certificate(ITRM, COUNT, flipped)[0]


# -- determinism and traces ------------------------------------------------------------


def test_runs_are_deterministic():
    a = trace_to_json(*run(ITRM, COUNT))
    b = trace_to_json(*run(ITRM, COUNT))
    assert a == b


def test_trace_segments_tile_the_run():
    for prog in (COUNT, FLAG, INC_FOREVER):
        _, trace = run(ITRM, prog)
        t = ZERO
        for seg in trace.segments:
            assert seg.start_time == t
            t = add(t, seg.length)


def test_trace_json_shape():
    outcome, trace = run(ITRM, COUNT)
    doc = trace_to_json(outcome, trace)
    assert doc["outcome"]["tag"] == "halted"
    assert doc["outcome"]["time"] == "w+1"
    assert doc["outcome"]["output"] == "0"
    assert doc["variant"] == "ITRM"
    assert len(doc["program_hash"]) == 64
    assert doc["limit_events"][0]["time"] == "w"
    outcome, trace = run(ITRM, INC_FOREVER)
    doc = trace_to_json(outcome, trace)
    assert doc["outcome"] == {"tag": "diverges", "witness": ["0", "w"], "kind": "limit"}


# -- oracle plumbing -------------------------------------------------------------------


def test_unconfigured_oracle_raises():
    with pytest.raises(NoOracle):
        run(ITRM, parse("0: ORACLE R0\n1: HALT"))


class _EvenOracle:
    def eval(self, x):
        return x.is_finite and x.as_int() % 2 == 0


def test_simple_oracle_call():
    spec = MachineSpec(bound=W, oracle=_EvenOracle())
    outcome, _ = run(spec, parse("0: ORACLE R0\n1: HALT"), inputs=(from_int(4),))
    assert outcome.final.regs[0] == ONE
    outcome, _ = run(spec, parse("0: ORACLE R0\n1: HALT"), inputs=(from_int(5),))
    assert outcome.final.regs[0] == ZERO


# -- condition evaluation cross-check ---------------------------------------------------


def test_branching_agrees_with_naive_stepper():
    rng = random.Random(20240817)
    from itrm.lang import And, EqReg, EqZero, Instruction, Not, Or, TrueCond

    def rand_cond(depth):
        k = rng.randrange(6 if depth else 3)
        if k == 0:
            return TrueCond()
        if k == 1:
            return EqZero(rng.randrange(3))
        if k == 2:
            return EqReg(rng.randrange(3), rng.randrange(3))
        if k == 3:
            return Not(rand_cond(depth - 1))
        if k == 4:
            return And(rand_cond(depth - 1), rand_cond(depth - 1))
        return Or(rand_cond(depth - 1), rand_cond(depth - 1))

    for _ in range(200):
        cond = rand_cond(2)
        prog = Program(
            (JumpIf(cond, 2), Halt(), Halt()), register_count=3
        )
        regs = tuple(rng.randrange(3) for _ in range(3))
        start = Configuration(0, tuple(from_int(v) for v in regs))
        summary = run_for(ITRM, prog, start, ONE)
        naive = naive_step(prog, (0, regs))
        assert summary.end_config.line == naive[0]


# -- random program cross-check ----------------------------------------------------------


def test_random_programs_match_naive_stepper_at_finite_cuts():
    rng = random.Random(99173)
    from itrm.lang import And, EqReg, EqZero, Inc as I, Not, Or, Zero as Z

    def rand_cond():
        k = rng.randrange(4)
        if k == 0:
            return TrueCond()
        if k == 1:
            return EqZero(rng.randrange(2))
        if k == 2:
            return EqReg(rng.randrange(2), rng.randrange(2))
        return Not(EqZero(rng.randrange(2)))

    for trial in range(150):
        n = rng.randrange(3, 7)
        instrs = []
        for _ in range(n):
            k = rng.randrange(5)
            if k == 0:
                instrs.append(Z(rng.randrange(2)))
            elif k <= 2:
                instrs.append(I(rng.randrange(2)))
            elif k == 3:
                instrs.append(Copy(rng.randrange(2), rng.randrange(2)))
            else:
                instrs.append(JumpIf(rand_cond(), rng.randrange(n + 1)))
        prog = Program(tuple(instrs), register_count=2)
        horizon = rng.randrange(1, 60)
        traj = naive_trajectory(prog, (), horizon)
        want = traj[min(horizon, len(traj) - 1)]
        start = initial_configuration(prog, (), W)
        summary = run_for(ITRM, prog, start, from_int(horizon))
        got = (summary.end_config.line, tuple(v.as_int() for v in summary.end_config.regs))
        assert got == want, f"trial {trial}: {prog}"


# -- stack macros under execution -----------------------------------------------------------


def test_stack_macros_round_trip_under_the_engine():
    # stack in R0, depth in R7, staged values in R1, pop lands in R8;
    # pushed values must stay below the bottom value, so 3 then 2
    instrs: list = [Inc(1), Inc(1), Inc(1)]
    instrs += shift_targets(stack_push(0, 7, 1, (2, 3, 4, 5, 6)), len(instrs))
    instrs += [Zero(1), Inc(1), Inc(1)]
    instrs += shift_targets(stack_push(0, 7, 1, (2, 3, 4, 5, 6)), len(instrs))
    instrs += shift_targets(stack_pop(0, 7, 8, (2, 3, 4, 5, 6)), len(instrs))
    instrs.append(Halt())
    prog = Program(tuple(instrs), register_count=9)
    outcome, _ = run(ITRM, prog)
    assert isinstance(outcome, Halted)
    assert outcome.final.regs[8].as_int() == 2
    assert outcome.final.regs[0].as_int() == 3  # bottom value remains
    assert outcome.final.regs[7].as_int() == 1
