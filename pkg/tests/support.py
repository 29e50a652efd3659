"""Independent oracles used by the test suite.

Everything here is deliberately written against different representations
than the library (integer triples, sorted enumerations, a naive stepper) so
that agreement is a genuine cross-check rather than a tautology.
"""

from __future__ import annotations

import random

from itrm.ordinal import Ordinal, ZERO, ONE, OMEGA, add, from_int, mul, omega_power

# -- naive order-type arithmetic below w^3 -----------------------------------
#
# An ordinal below w^3 is a triple (a, b, c) standing for w^2*a + w*b + c.
# Operations return None when a result would reach w^3.

Triple = tuple[int, int, int]


def to_triple(x: Ordinal) -> Triple | None:
    a = b = c = 0
    for e, coeff in x.terms:
        if e.finite == 0:
            c = coeff
        elif e.finite == 1:
            b = coeff
        elif e.finite == 2:
            a = coeff
        else:
            return None
    return (a, b, c)


def from_triple(t: Triple) -> Ordinal:
    a, b, c = t
    out = ZERO
    if a:
        out = add(out, omega_power(2, a))
    if b:
        out = add(out, omega_power(1, b))
    if c:
        out = add(out, from_int(c))
    return out


def triple_add(x: Triple, y: Triple) -> Triple:
    (a1, b1, c1), (a2, b2, c2) = x, y
    if a2 > 0:
        return (a1 + a2, b2, c2)
    if b2 > 0:
        return (a1, b1 + b2, c2)
    return (a1, b1, c1 + c2)


def triple_mul(x: Triple, y: Triple) -> Triple | None:
    (a1, b1, c1) = x
    if x == (0, 0, 0) or y == (0, 0, 0):
        return (0, 0, 0)
    out = (0, 0, 0)
    a2, b2, c2 = y
    if a2 > 0:
        # x * w^2: only a finite x stays below w^3
        if a1 > 0 or b1 > 0:
            return None
        out = triple_add(out, (a2, 0, 0))
    if b2 > 0:
        if a1 > 0:
            return None
        part = (b2, 0, 0) if b1 > 0 else (0, b2, 0)
        out = triple_add(out, part)
    if c2 > 0:
        if a1 > 0:
            part = (a1 * c2, b1, c1)
        elif b1 > 0:
            part = (0, b1 * c2, c1)
        else:
            part = (0, 0, c1 * c2)
        out = triple_add(out, part)
    return out


def random_triple(rng: random.Random) -> Triple:
    shape = rng.randrange(4)
    a = rng.randrange(0, 6) if shape == 3 else 0
    b = rng.randrange(0, 8) if shape >= 2 else 0
    c = rng.randrange(0, 12)
    return (a, b, c)


# -- brute-force pairing rank oracle ------------------------------------------


def rank_table(max_value: int) -> dict[tuple[int, int], int]:
    """Rank of every pair of naturals with both components <= max_value,
    under the (max, a, b) lexicographic order. The table is downward closed:
    it covers exactly the first (max_value+1)^2 ranks."""
    pairs = [(a, b) for a in range(max_value + 1) for b in range(max_value + 1)]
    pairs.sort(key=lambda p: (max(p), p[0], p[1]))
    return {p: i for i, p in enumerate(pairs)}


# -- random CNF ordinals -------------------------------------------------------


def random_ordinal(rng: random.Random, depth: int = 2, max_nat: int = 7) -> Ordinal:
    if depth == 0 or rng.random() < 0.35:
        return from_int(rng.randrange(0, max_nat))
    exps = set()
    for _ in range(rng.randrange(1, 4)):
        exps.add(random_ordinal(rng, depth - 1, max_nat))
    out = ZERO
    for e in sorted(exps, reverse=True):
        out = add(out, omega_power(e, rng.randrange(1, 5)))
    return out


# -- naive machine stepper (finite registers, bound w) ---------------------------
#
# Registers are plain ints and the bound is w, which INC can never reach,
# so successor overflow cannot happen here. Limit stages are evaluated by
# sampling: run a long block, take componentwise suffix minima over the
# recorded window, and accept a liminf only when it plateaus well before
# the window ends. A component whose suffix minima keep climbing is
# unbounded, so it resets (ITRM) or crashes (wITRM) at the limit.

from itrm.lang import (
    And,
    Copy,
    EqReg,
    EqZero,
    Halt,
    Inc,
    JumpIf,
    Not,
    Or,
    Program,
    TrueCond,
    Zero,
)

NaiveState = tuple[int, tuple[int, ...]]


def naive_cond(cond, regs) -> bool:
    if isinstance(cond, TrueCond):
        return True
    if isinstance(cond, EqZero):
        return regs[cond.i] == 0
    if isinstance(cond, EqReg):
        return regs[cond.i] == regs[cond.j]
    if isinstance(cond, Not):
        return not naive_cond(cond.inner, regs)
    if isinstance(cond, And):
        return naive_cond(cond.left, regs) and naive_cond(cond.right, regs)
    if isinstance(cond, Or):
        return naive_cond(cond.left, regs) or naive_cond(cond.right, regs)
    raise TypeError(f"not a condition: {cond!r}")


def naive_halted(program: Program, state: NaiveState) -> bool:
    line, _ = state
    return line >= len(program.instructions) or isinstance(
        program.instructions[line], Halt
    )


def naive_step(program: Program, state: NaiveState) -> NaiveState:
    line, regs = state
    ins = program.instructions[line]
    regs = list(regs)
    if isinstance(ins, Zero):
        regs[ins.reg] = 0
        line += 1
    elif isinstance(ins, Inc):
        regs[ins.reg] += 1
        line += 1
    elif isinstance(ins, Copy):
        regs[ins.dst] = regs[ins.src]
        line += 1
    elif isinstance(ins, JumpIf):
        line = ins.target if naive_cond(ins.cond, regs) else line + 1
    else:
        raise ValueError("naive stepper handles ZERO/INC/COPY/JUMP only")
    return (line, tuple(regs))


def naive_initial(program: Program, inputs=()) -> NaiveState:
    width = max(program.register_count, len(inputs))
    return (0, tuple(list(inputs) + [0] * (width - len(inputs))))


def naive_trajectory(program: Program, inputs, steps: int) -> list[NaiveState]:
    """Configurations at times 0..steps inclusive; a halted configuration
    repeats forever, so the list is truncated there."""
    state = naive_initial(program, inputs)
    out = [state]
    for _ in range(steps):
        if naive_halted(program, state):
            break
        state = naive_step(program, state)
        out.append(state)
    return out


def sampled_liminf(values: list[int]) -> int | None:
    """liminf of an integer sequence assumed to settle into its recurring
    pattern within the window; None when the suffix minima keep climbing,
    meaning the true liminf is w."""
    n = len(values)
    sm = [0] * n
    m = values[-1]
    for i in range(n - 1, -1, -1):
        m = min(m, values[i])
        sm[i] = m
    plateau = sm[n // 2]
    if all(sm[i] == plateau for i in range(n // 4, n // 2 + 1)):
        return plateau
    return None


def naive_limit(program: Program, state: NaiveState, variant="ITRM", window=4096):
    """Advance from `state` to the next limit stage by sampling, or to a
    halt if that comes first. Returns ("halted", steps, trajectory),
    ("crashed", register), or ("limit", state_at_limit)."""
    traj = [state]
    for _ in range(window):
        if naive_halted(program, state):
            return ("halted", len(traj) - 1, traj)
        state = naive_step(program, state)
        traj.append(state)
    lim_line = sampled_liminf([s[0] for s in traj])
    assert lim_line is not None, "line numbers are bounded by program length"
    regs = []
    for r in range(len(traj[0][1])):
        v = sampled_liminf([s[1][r] for s in traj])
        if v is None:
            if variant == "wITRM":
                return ("crashed", r)
            v = 0
        regs.append(v)
    return ("limit", (lim_line, tuple(regs)))


def naive_run(program: Program, inputs=(), variant="ITRM", max_limits=8, window=4096):
    """Follow a run across successive limit stages. Returns
    ("halted", limits_crossed, steps_after_last_limit, final_state),
    ("crashed", limits_crossed, register), or ("no_resolution", state)."""
    state = naive_initial(program, inputs)
    for k in range(max_limits + 1):
        res = naive_limit(program, state, variant, window)
        if res[0] == "halted":
            return ("halted", k, res[1], res[2][-1])
        if res[0] == "crashed":
            return ("crashed", k + 1, res[1])
        state = res[1]
    return ("no_resolution", state)
