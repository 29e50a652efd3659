import random

import pytest

from itrm.lang import (
    And,
    Asm,
    Copy,
    Diagnostic,
    EqReg,
    EqZero,
    Halt,
    Inc,
    JumpIf,
    Not,
    Or,
    Oracle,
    ParseError,
    Program,
    RegisterClash,
    TRUE,
    ValidationError,
    Zero,
    format_condition,
    parse,
    print_program,
    registers_used,
    shift_targets,
    stack_peek,
    stack_pop,
    stack_push,
    validate,
)

COUNT_TEXT = """\
0: INC R2
1: JUMP (R1=0 & !(R2=0)) 4
2: INC R1
3: JUMP TRUE 1
4: HALT
"""


def test_parse_halt():
    assert parse("0: HALT") == Program((Halt(),))
    assert parse("HALT").register_count == 1


def test_parse_self_loop():
    p = parse("loop: JUMP TRUE loop")
    assert p.instructions == (JumpIf(TRUE, 0),)
    assert p.labels == {"loop": 0}


def test_parse_count_golden():
    p = parse(COUNT_TEXT)
    assert p.instructions == (
        Inc(2),
        JumpIf(And(EqZero(1), Not(EqZero(2))), 4),
        Inc(1),
        JumpIf(TRUE, 1),
        Halt(),
    )
    assert registers_used(p) == 2
    assert p.register_count == 3


def test_count_roundtrip():
    p = parse(COUNT_TEXT)
    text = print_program(p)
    assert parse(text) == p
    assert print_program(parse(text)) == text


def test_parse_tolerates_layout():
    p = parse("  INC   R1   # bump\n\n# nothing\n top: JUMP R1=R1|TRUE top\n")
    assert p.instructions == (Inc(1), JumpIf(Or(EqReg(1, 1), TRUE), 1))


def test_condition_precedence():
    p = parse("JUMP R1=0 & R2=0 | R3=0 0")
    assert p.instructions[0].cond == Or(And(EqZero(1), EqZero(2)), EqZero(3))
    p = parse("JUMP !R1=0 & R2=R3 0")
    assert p.instructions[0].cond == And(Not(EqZero(1)), EqReg(2, 3))
    p = parse("JUMP !(R1=0 & R2=0) 0")
    assert p.instructions[0].cond == Not(And(EqZero(1), EqZero(2)))
    p = parse("JUMP !!R1=0 0")
    assert p.instructions[0].cond == Not(Not(EqZero(1)))


def test_minimal_parens():
    cond = parse("JUMP (R1=R2 & !(R3=0)) | R4=R4 0").instructions[0].cond
    assert format_condition(cond) == "R1=R2 & !R3=0 | R4=R4"
    # right-nested trees keep the parens they need
    nested = Or(EqZero(1), Or(EqZero(2), EqZero(3)))
    assert format_condition(nested) == "R1=0 | (R2=0 | R3=0)"
    assert _reparse(format_condition(nested)) == nested
    left = And(And(EqZero(1), EqZero(2)), EqZero(3))
    assert format_condition(left) == "R1=0 & R2=0 & R3=0"
    assert format_condition(Not(TRUE)) == "!TRUE"


def _reparse(cond_text):
    return parse(f"JUMP {cond_text} 0").instructions[0].cond


def test_parse_errors():
    for bad in [
        "FOO R1",
        "INC",
        "INC R1 R2",
        "INC 5",
        "JUMP R1=5 0",
        "JUMP TRUE",
        "0: HALT\n5: HALT",
        "TRUE: HALT",
        "R1: HALT",
        "INC R1 @",
        "",
        "# just a comment",
    ]:
        with pytest.raises(ParseError):
            parse(bad)


def test_parse_validation_errors():
    with pytest.raises(ValidationError) as e:
        parse("JUMP TRUE 9")
    assert e.value.kind == "BadJumpTarget"
    with pytest.raises(ValidationError) as e:
        parse("JUMP TRUE nowhere")
    assert e.value.kind == "UnknownLabel"
    with pytest.raises(ValidationError) as e:
        parse("x: HALT\nx: HALT")
    assert e.value.kind == "DuplicateLabel"


def test_parse_error_coordinates():
    with pytest.raises(ParseError) as e:
        parse("INC R1\nINC @5")
    assert e.value.line == 2
    assert e.value.column == 5


def test_validate_diagnostics():
    p = Program((Inc(0), JumpIf(TRUE, 99), Halt()))
    kinds = [d.kind for d in validate(p)]
    assert kinds == ["BadJumpTarget"]
    p = Program((Inc(5),), register_count=2)
    kinds = [d.kind for d in validate(p)]
    assert kinds == ["BadRegisterIndex"]
    assert validate(parse(COUNT_TEXT)) == []


def test_program_requires_instructions():
    with pytest.raises(ValueError):
        Program(())


def _random_condition(rng, depth=3):
    if depth == 0 or rng.random() < 0.4:
        k = rng.randrange(3)
        if k == 0:
            return TRUE
        if k == 1:
            return EqZero(rng.randrange(6))
        return EqReg(rng.randrange(6), rng.randrange(6))
    k = rng.randrange(3)
    if k == 0:
        return Not(_random_condition(rng, depth - 1))
    if k == 1:
        return And(_random_condition(rng, depth - 1), _random_condition(rng, depth - 1))
    return Or(_random_condition(rng, depth - 1), _random_condition(rng, depth - 1))


def _random_program(rng):
    n = rng.randrange(1, 12)
    out = []
    for _ in range(n):
        k = rng.randrange(6)
        if k == 0:
            out.append(Zero(rng.randrange(6)))
        elif k == 1:
            out.append(Inc(rng.randrange(6)))
        elif k == 2:
            out.append(Copy(rng.randrange(6), rng.randrange(6)))
        elif k == 3:
            out.append(JumpIf(_random_condition(rng), rng.randrange(n)))
        elif k == 4:
            out.append(Oracle(rng.randrange(6)))
        else:
            out.append(Halt())
    return Program(tuple(out))


def test_print_parse_identity_on_random_programs():
    rng = random.Random(7)
    for _ in range(1000):
        p = _random_program(rng)
        text = print_program(p)
        assert parse(text) == p
        assert print_program(parse(text)) == text


def test_shift_targets():
    frag = [JumpIf(TRUE, 0), Inc(1), JumpIf(EqZero(0), 2)]
    shifted = shift_targets(frag, 10)
    assert shifted == [JumpIf(TRUE, 10), Inc(1), JumpIf(EqZero(0), 12)]


def test_asm_marks():
    asm = Asm()
    asm.jump(TRUE, "end")
    asm.mark("mid")
    asm.emit(Inc(0))
    asm.jump(TRUE, "mid")
    asm.mark("end")
    assert asm.fragment() == [JumpIf(TRUE, 3), Inc(0), JumpIf(TRUE, 1)]
    bad = Asm()
    bad.jump(TRUE, "nowhere")
    with pytest.raises(ValueError):
        bad.fragment()
    dup = Asm()
    dup.mark("x")
    with pytest.raises(ValueError):
        dup.mark("x")


def _wrap(frag):
    return Program(tuple(frag) + (Halt(),))


def test_stack_macros_validate():
    scratch = (10, 11, 12, 13, 14)
    for frag in [
        stack_push(0, 1, 2, scratch),
        stack_pop(0, 1, 2, scratch),
        stack_peek(0, 1, 2, scratch),
    ]:
        assert validate(_wrap(frag)) == []


def test_stack_macro_register_clash():
    with pytest.raises(RegisterClash):
        stack_push(0, 1, 2, (0, 11, 12, 13, 14))
    with pytest.raises(RegisterClash):
        stack_pop(0, 1, 2, (10, 11, 12, 13))
    with pytest.raises(RegisterClash):
        stack_peek(0, 1, 1, (10, 11, 12, 13, 14))
    with pytest.raises(RegisterClash):
        stack_push(0, 1, 2, (10, 10, 12, 13, 14))
