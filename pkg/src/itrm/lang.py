"""Assembly language for transfinite register machine programs.

Programs are finite lists of instructions over registers R0, R1, ...
The instruction set is deliberately small: ZERO, INC, COPY, conditional
JUMP over Boolean combinations of register equalities, ORACLE, HALT.
There is no decrement; loops that need one count upward instead.

This module owns syntax only. Execution lives in itrm.engine.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

__all__ = [
    "And",
    "Asm",
    "Condition",
    "Copy",
    "Diagnostic",
    "EqReg",
    "EqZero",
    "Halt",
    "Inc",
    "Instruction",
    "JumpIf",
    "Not",
    "Or",
    "Oracle",
    "ParseError",
    "Program",
    "RegisterClash",
    "TRUE",
    "TrueCond",
    "ValidationError",
    "Zero",
    "condition_registers",
    "format_condition",
    "format_instruction",
    "instruction_registers",
    "parse",
    "print_program",
    "registers_used",
    "shift_targets",
    "stack_peek",
    "stack_pop",
    "stack_push",
    "validate",
]


class ParseError(ValueError):
    """Raised on malformed program text. Coordinates are 1-based."""

    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


class ValidationError(ValueError):
    """Raised by parse for structurally bad targets or indices."""

    def __init__(self, kind: str, message: str, line: int | None = None):
        self.kind = kind
        self.message = message
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{kind}: {message}{where}")


class RegisterClash(ValueError):
    """Raised when a macro is handed overlapping register assignments."""


# -- conditions ---------------------------------------------------------------


class Condition:
    __slots__ = ()


@dataclass(frozen=True)
class TrueCond(Condition):
    pass


@dataclass(frozen=True)
class EqReg(Condition):
    i: int
    j: int


@dataclass(frozen=True)
class EqZero(Condition):
    i: int


@dataclass(frozen=True)
class Not(Condition):
    inner: Condition


@dataclass(frozen=True)
class And(Condition):
    left: Condition
    right: Condition


@dataclass(frozen=True)
class Or(Condition):
    left: Condition
    right: Condition


TRUE = TrueCond()


def condition_registers(cond: Condition) -> set[int]:
    if isinstance(cond, EqReg):
        return {cond.i, cond.j}
    if isinstance(cond, EqZero):
        return {cond.i}
    if isinstance(cond, Not):
        return condition_registers(cond.inner)
    if isinstance(cond, (And, Or)):
        return condition_registers(cond.left) | condition_registers(cond.right)
    return set()


# -- instructions -------------------------------------------------------------


class Instruction:
    __slots__ = ()


@dataclass(frozen=True)
class Zero(Instruction):
    reg: int


@dataclass(frozen=True)
class Inc(Instruction):
    reg: int


@dataclass(frozen=True)
class Copy(Instruction):
    """dst := src."""

    src: int
    dst: int


@dataclass(frozen=True)
class JumpIf(Instruction):
    cond: Condition
    target: int


@dataclass(frozen=True)
class Oracle(Instruction):
    reg: int


@dataclass(frozen=True)
class Halt(Instruction):
    pass


def instruction_registers(instr: Instruction) -> set[int]:
    if isinstance(instr, (Zero, Inc, Oracle)):
        return {instr.reg}
    if isinstance(instr, Copy):
        return {instr.src, instr.dst}
    if isinstance(instr, JumpIf):
        return condition_registers(instr.cond)
    return set()


@dataclass(frozen=True)
class Program:
    """A validated-on-demand instruction sequence.

    register_count defaults to one past the highest register index
    mentioned (at least 1). labels and source_lines are diagnostic
    metadata and do not take part in equality.
    """

    instructions: tuple[Instruction, ...]
    register_count: int | None = None
    labels: dict[str, int] = field(default_factory=dict, compare=False, repr=False)
    source_lines: tuple[int, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "instructions", tuple(self.instructions))
        if not self.instructions:
            raise ValueError("a program needs at least one instruction")
        if self.register_count is None:
            used: set[int] = set()
            for ins in self.instructions:
                used |= instruction_registers(ins)
            object.__setattr__(self, "register_count", max(used, default=0) + 1)

    def __len__(self) -> int:
        return len(self.instructions)

    def __str__(self) -> str:
        return print_program(self)


def registers_used(p: Program) -> int:
    """Number of distinct registers the instructions mention."""
    used: set[int] = set()
    for ins in p.instructions:
        used |= instruction_registers(ins)
    return len(used)


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    line: int
    message: str


def validate(p: Program) -> list[Diagnostic]:
    """Structural checks. Empty result means the program is well formed."""
    diags: list[Diagnostic] = []
    n = len(p.instructions)
    if p.register_count is None or p.register_count < 1:
        diags.append(Diagnostic("BadRegisterCount", 0, "register_count must be >= 1"))
        return diags
    for i, ins in enumerate(p.instructions):
        for r in sorted(instruction_registers(ins)):
            if r < 0 or r >= p.register_count:
                diags.append(
                    Diagnostic(
                        "BadRegisterIndex",
                        i,
                        f"register R{r} outside declared count {p.register_count}",
                    )
                )
        if isinstance(ins, JumpIf) and not (0 <= ins.target < n):
            diags.append(
                Diagnostic(
                    "BadJumpTarget", i, f"jump to line {ins.target} in a {n}-line program"
                )
            )
    return diags


# -- printing -----------------------------------------------------------------

# precedence levels: | = 0, & = 1, ! = 2, atoms = 3
def _prec(cond: Condition) -> int:
    if isinstance(cond, Or):
        return 0
    if isinstance(cond, And):
        return 1
    if isinstance(cond, Not):
        return 2
    return 3


def _fmt_cond(cond: Condition, min_prec: int) -> str:
    p = _prec(cond)
    if isinstance(cond, TrueCond):
        s = "TRUE"
    elif isinstance(cond, EqReg):
        s = f"R{cond.i}=R{cond.j}"
    elif isinstance(cond, EqZero):
        s = f"R{cond.i}=0"
    elif isinstance(cond, Not):
        s = "!" + _fmt_cond(cond.inner, 2)
    elif isinstance(cond, And):
        s = _fmt_cond(cond.left, 1) + " & " + _fmt_cond(cond.right, 2)
    elif isinstance(cond, Or):
        s = _fmt_cond(cond.left, 0) + " | " + _fmt_cond(cond.right, 1)
    else:
        raise TypeError(f"not a condition: {cond!r}")
    if p < min_prec:
        return "(" + s + ")"
    return s


def format_condition(cond: Condition) -> str:
    """Canonical text with minimal parentheses (! binds over & over |)."""
    return _fmt_cond(cond, 0)


def format_instruction(instr: Instruction) -> str:
    if isinstance(instr, Zero):
        return f"ZERO R{instr.reg}"
    if isinstance(instr, Inc):
        return f"INC R{instr.reg}"
    if isinstance(instr, Copy):
        return f"COPY R{instr.src} R{instr.dst}"
    if isinstance(instr, JumpIf):
        return f"JUMP {format_condition(instr.cond)} {instr.target}"
    if isinstance(instr, Oracle):
        return f"ORACLE R{instr.reg}"
    if isinstance(instr, Halt):
        return "HALT"
    raise TypeError(f"not an instruction: {instr!r}")


def print_program(p: Program) -> str:
    """Canonical text: line-number prefixes, numeric jump targets."""
    return "\n".join(f"{i}: {format_instruction(ins)}" for i, ins in enumerate(p.instructions))


# -- parsing ------------------------------------------------------------------

_KEYWORDS = {"ZERO", "INC", "COPY", "JUMP", "ORACLE", "HALT", "TRUE"}
_REGISTER = re.compile(r"R\d+\Z")
_TOKEN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|\d+|[:=!&|()]")


@dataclass(frozen=True)
class _Tok:
    text: str
    col: int


def _lex(line: str, line_no: int) -> list[_Tok]:
    out: list[_Tok] = []
    pos = 0
    while pos < len(line):
        ch = line[pos]
        if ch == "#":
            break
        if ch.isspace():
            pos += 1
            continue
        m = _TOKEN.match(line, pos)
        if not m:
            raise ParseError(line_no, pos + 1, f"unexpected character {ch!r}")
        out.append(_Tok(m.group(), pos + 1))
        pos = m.end()
    return out


class _LineParser:
    def __init__(self, tokens: list[_Tok], line_no: int):
        self.tokens = tokens
        self.line_no = line_no
        self.pos = 0

    def error(self, message: str) -> ParseError:
        col = self.tokens[self.pos].col if self.pos < len(self.tokens) else (
            self.tokens[-1].col + len(self.tokens[-1].text) if self.tokens else 1
        )
        return ParseError(self.line_no, col, message)

    def peek(self) -> str | None:
        return self.tokens[self.pos].text if self.pos < len(self.tokens) else None

    def take(self) -> str:
        if self.pos >= len(self.tokens):
            raise self.error("unexpected end of line")
        t = self.tokens[self.pos].text
        self.pos += 1
        return t

    def expect(self, text: str) -> None:
        got = self.take()
        if got != text:
            self.pos -= 1
            raise self.error(f"expected {text!r}, got {got!r}")

    def register(self) -> int:
        t = self.take()
        if not _REGISTER.match(t):
            self.pos -= 1
            raise self.error(f"expected a register, got {t!r}")
        return int(t[1:])

    # conditions, lowest precedence first
    def cond(self) -> Condition:
        left = self.cond_and()
        while self.peek() == "|":
            self.take()
            left = Or(left, self.cond_and())
        return left

    def cond_and(self) -> Condition:
        left = self.cond_not()
        while self.peek() == "&":
            self.take()
            left = And(left, self.cond_not())
        return left

    def cond_not(self) -> Condition:
        if self.peek() == "!":
            self.take()
            return Not(self.cond_not())
        return self.cond_atom()

    def cond_atom(self) -> Condition:
        t = self.peek()
        if t == "(":
            self.take()
            inner = self.cond()
            self.expect(")")
            return inner
        if t == "TRUE":
            self.take()
            return TRUE
        i = self.register()
        self.expect("=")
        rhs = self.take()
        if rhs == "0":
            return EqZero(i)
        if _REGISTER.match(rhs):
            return EqReg(i, int(rhs[1:]))
        self.pos -= 1
        raise self.error(f"expected a register or 0 after '=', got {rhs!r}")

    def instruction(self) -> tuple:
        """Returns (Instruction,) or ("jump", cond, target_token)."""
        op = self.take()
        if op == "ZERO":
            return (Zero(self.register()),)
        if op == "INC":
            return (Inc(self.register()),)
        if op == "COPY":
            return (Copy(self.register(), self.register()),)
        if op == "ORACLE":
            return (Oracle(self.register()),)
        if op == "HALT":
            return (Halt(),)
        if op == "JUMP":
            cond = self.cond()
            target = self.take()
            return ("jump", cond, target)
        self.pos -= 1
        raise self.error(f"unknown instruction {op!r}")

    def end(self) -> None:
        if self.pos < len(self.tokens):
            raise self.error(f"trailing input {self.tokens[self.pos].text!r}")


def parse(text: str) -> Program:
    """Parse assembly text. One instruction per line; '#' starts a comment.

    Numeric labels are position annotations and must match the 0-based
    instruction index. Symbolic labels name the line for jump targets.
    """
    pending: list[tuple] = []
    labels: dict[str, int] = {}
    source_lines: list[int] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        tokens = _lex(raw, line_no)
        if not tokens:
            continue
        lp = _LineParser(tokens, line_no)
        if len(tokens) >= 2 and tokens[1].text == ":":
            head = tokens[0].text
            if head.isdigit():
                if int(head) != len(pending):
                    raise ParseError(
                        line_no,
                        tokens[0].col,
                        f"line annotation {head} does not match position {len(pending)}",
                    )
            elif (
                not re.match(r"[A-Za-z_]\w*\Z", head)
                or head in _KEYWORDS
                or _REGISTER.match(head)
            ):
                raise ParseError(line_no, tokens[0].col, f"bad label {head!r}")
            else:
                if head in labels:
                    raise ValidationError(
                        "DuplicateLabel", f"label {head!r} defined twice", line_no
                    )
                labels[head] = len(pending)
            lp.pos = 2
        parsed = lp.instruction()
        lp.end()
        pending.append(parsed)
        source_lines.append(line_no)

    if not pending:
        raise ParseError(1, 1, "no instructions found")

    instructions: list[Instruction] = []
    for idx, item in enumerate(pending):
        if item[0] == "jump":
            _, cond, target_tok = item
            if target_tok.isdigit():
                target = int(target_tok)
            elif target_tok in labels:
                target = labels[target_tok]
            else:
                raise ValidationError(
                    "UnknownLabel", f"jump to undefined label {target_tok!r}", source_lines[idx]
                )
            if not (0 <= target < len(pending)):
                raise ValidationError(
                    "BadJumpTarget",
                    f"jump to line {target} in a {len(pending)}-line program",
                    source_lines[idx],
                )
            instructions.append(JumpIf(cond, target))
        else:
            instructions.append(item[0])
    return Program(tuple(instructions), labels=labels, source_lines=tuple(source_lines))


# -- fragment assembly for generated code --------------------------------------


def shift_targets(instrs: Iterable[Instruction], delta: int) -> list[Instruction]:
    """Shift every jump target by delta (for splicing fragments)."""
    out = []
    for ins in instrs:
        if isinstance(ins, JumpIf):
            out.append(JumpIf(ins.cond, ins.target + delta))
        else:
            out.append(ins)
    return out


@dataclass(frozen=True)
class _PendingJump:
    cond: Condition
    mark: str


class Asm:
    """Accumulates a fragment with named marks, resolving jumps at the end.

    Targets are relative to the fragment start. A mark placed after the
    final item points one past the end: the spliced fragment then falls
    through to whatever the caller appends.
    """

    def __init__(self) -> None:
        self._items: list = []
        self._marks: dict[str, int] = {}

    def mark(self, name: str) -> None:
        if name in self._marks:
            raise ValueError(f"duplicate mark {name!r}")
        self._marks[name] = len(self._items)

    def emit(self, *instrs: Instruction) -> None:
        self._items.extend(instrs)

    def jump(self, cond: Condition, mark: str) -> None:
        self._items.append(_PendingJump(cond, mark))

    def fragment(self) -> list[Instruction]:
        out: list[Instruction] = []
        for item in self._items:
            if isinstance(item, _PendingJump):
                if item.mark not in self._marks:
                    raise ValueError(f"undefined mark {item.mark!r}")
                out.append(JumpIf(item.cond, self._marks[item.mark]))
            else:
                out.append(item)
        return out


# -- stack macros ---------------------------------------------------------------
#
# A stack x1..xk (x1 at the bottom) is kept as a single ordinal code:
# the code of [x] is x, and pushing v onto code s yields pair(s, v),
# matching tuple_code's left nesting. pair enumerates pairs ordered by
# (max, first, second), so both pair and unpair are computed by scanning
# that enumeration with a rank counter until the wanted entry is hit.
#
# Scan state: rank r, current pair (a, b), block m = max(a, b), phase
# flag f (0 while a runs below m with b = m, 1 while b runs with a = m).
# Every state change is an INC/ZERO/COPY, so at a limit time the
# registers hold liminfs and control re-enters at the lowest loop line.
# The only liminf states that are not already correct scan states are
# the block-start limit (a=0, b=0, f=0 with m now a limit: b must be m)
# and the phase boundary (a=m with f=0: b must restart at 0); both are
# repaired before the match check runs.
#
# Callers must keep every pushed value strictly below the value at the
# stack bottom; behavior outside that contract is deterministic but not
# meaningful (documented, never checked). Scans cost on the order of
# pair(s, v) machine steps.


def _check_distinct(named: dict[str, int], scratch: Sequence[int], need: int) -> None:
    if len(scratch) < need:
        raise RegisterClash(f"need {need} scratch registers, got {len(scratch)}")
    regs = list(named.values()) + list(scratch[:need])
    if any(r < 0 for r in regs):
        raise RegisterClash("register indices must be nonnegative")
    if len(set(regs)) != len(regs):
        names = list(named) + [f"scratch{i}" for i in range(need)]
        raise RegisterClash(f"registers must be pairwise distinct: {dict(zip(names, regs))}")


def _emit_scan(asm: Asm, found: Condition, r: int, a: int, b: int, m: int, f: int) -> None:
    asm.emit(Zero(r), Zero(a), Zero(b), Zero(m), Zero(f))
    asm.mark("scan")
    asm.jump(And(EqZero(f), And(Not(EqReg(b, m)), Not(EqReg(a, m)))), "fixA")
    asm.jump(And(EqZero(f), EqReg(a, m)), "fixB")
    asm.mark("chk")
    asm.jump(found, "found")
    asm.jump(EqZero(f), "step1")
    asm.jump(EqReg(b, m), "nextblock")
    asm.emit(Inc(b), Inc(r))
    asm.jump(TRUE, "scan")
    asm.mark("step1")
    asm.emit(Inc(a), Inc(r))
    asm.jump(TRUE, "scan")
    asm.mark("nextblock")
    asm.emit(Inc(m), Copy(m, b), Zero(a), Zero(f), Inc(r))
    asm.jump(TRUE, "scan")
    asm.mark("fixA")
    asm.emit(Copy(m, b))
    asm.jump(TRUE, "chk")
    asm.mark("fixB")
    asm.emit(Zero(b), Inc(f))
    asm.jump(TRUE, "chk")
    asm.mark("found")


def stack_push(
    stack_reg: int, depth_reg: int, value_reg: int, scratch: Sequence[int]
) -> list[Instruction]:
    """Emit code for: push value_reg; stack_reg := pair(stack_reg, value)."""
    _check_distinct(
        {"stack": stack_reg, "depth": depth_reg, "value": value_reg}, scratch, 5
    )
    r, a, b, m, f = scratch[:5]
    asm = Asm()
    asm.jump(EqZero(depth_reg), "empty")
    _emit_scan(asm, And(EqReg(a, stack_reg), EqReg(b, value_reg)), r, a, b, m, f)
    asm.emit(Copy(r, stack_reg), Inc(depth_reg))
    asm.jump(TRUE, "end")
    asm.mark("empty")
    asm.emit(Copy(value_reg, stack_reg), Inc(depth_reg))
    asm.mark("end")
    return asm.fragment()


def stack_pop(
    stack_reg: int, depth_reg: int, out_reg: int, scratch: Sequence[int]
) -> list[Instruction]:
    """Emit code for: pop the top into out_reg. Pop of an empty stack
    writes 0 to out_reg and changes nothing else."""
    _check_distinct({"stack": stack_reg, "depth": depth_reg, "out": out_reg}, scratch, 5)
    r, a, b, m, f = scratch[:5]
    asm = Asm()
    asm.emit(Zero(f), Inc(f))
    asm.jump(EqReg(depth_reg, f), "singleton")
    asm.jump(EqZero(depth_reg), "underflow")
    _emit_scan(asm, EqReg(r, stack_reg), r, a, b, m, f)
    asm.emit(Copy(a, stack_reg), Copy(b, out_reg))
    # depth := depth - 1, by counting up to it (depth is finite in use)
    asm.emit(Zero(r), Zero(m), Inc(m))
    asm.mark("dec")
    asm.jump(EqReg(m, depth_reg), "decdone")
    asm.emit(Inc(r), Inc(m))
    asm.jump(TRUE, "dec")
    asm.mark("decdone")
    asm.emit(Copy(r, depth_reg))
    asm.jump(TRUE, "end")
    asm.mark("singleton")
    asm.emit(Copy(stack_reg, out_reg), Zero(stack_reg), Zero(depth_reg))
    asm.jump(TRUE, "end")
    asm.mark("underflow")
    asm.emit(Zero(out_reg))
    asm.mark("end")
    return asm.fragment()


def stack_peek(
    stack_reg: int, depth_reg: int, out_reg: int, scratch: Sequence[int]
) -> list[Instruction]:
    """Emit code for: copy the top of the stack into out_reg."""
    _check_distinct({"stack": stack_reg, "depth": depth_reg, "out": out_reg}, scratch, 5)
    r, a, b, m, f = scratch[:5]
    asm = Asm()
    asm.emit(Zero(f), Inc(f))
    asm.jump(EqReg(depth_reg, f), "singleton")
    asm.jump(EqZero(depth_reg), "empty")
    _emit_scan(asm, EqReg(r, stack_reg), r, a, b, m, f)
    asm.emit(Copy(b, out_reg))
    asm.jump(TRUE, "end")
    asm.mark("singleton")
    asm.emit(Copy(stack_reg, out_reg))
    asm.jump(TRUE, "end")
    asm.mark("empty")
    asm.emit(Zero(out_reg))
    asm.mark("end")
    return asm.fragment()
