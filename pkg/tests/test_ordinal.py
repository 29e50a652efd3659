import random

import pytest
from hypothesis import given, settings, strategies as st

from itrm.ordinal import (
    Affine,
    Const,
    OMEGA,
    ONE,
    OmegaSequence,
    Ordinal,
    RepresentationOverflow,
    TWO,
    Underflow,
    ZERO,
    add,
    closed_under_addition,
    closed_under_pairing,
    compare,
    Comparison,
    divmod_left,
    format_ordinal,
    from_int,
    left_subtract,
    liminf_omega,
    mul,
    omega_power,
    pair,
    pair_count_below,
    parse_ordinal,
    power,
    sup_omega,
    tuple_code,
    unpair,
)
from itrm.ordinal import _S, _S_power, _T

from support import (
    from_triple,
    random_ordinal,
    random_triple,
    rank_table,
    to_triple,
    triple_add,
    triple_mul,
)

w = OMEGA


def o(text):
    return parse_ordinal(text)


def _ordinals(max_depth=2):
    base = st.integers(min_value=0, max_value=6).map(from_int)
    return st.recursive(
        base,
        lambda children: st.lists(
            st.tuples(children, st.integers(min_value=1, max_value=4)),
            min_size=1,
            max_size=3,
        ).map(_build_cnf),
        max_leaves=6,
    )


def _build_cnf(pairs):
    out = ZERO
    for e, c in sorted(pairs, key=lambda p: p[0], reverse=True):
        out = add(out, omega_power(e, c))
    return out


# -- comparison and basic arithmetic -----------------------------------------


def test_compare_basics():
    assert compare(ZERO, ZERO) is Comparison.EQUAL
    assert compare(w, add(w, ONE)) is Comparison.LESS
    assert compare(o("w^(2)"), o("w*5+3")) is Comparison.GREATER


def test_arithmetic_anchors():
    assert add(ONE, w) == w
    assert add(w, ONE) == o("w+1")
    assert mul(o("w+1"), TWO) == o("w*2+1")
    assert power(TWO, w) == w
    assert power(w, w) == o("w^(w)")
    assert power(add(w, ONE), TWO) == o("w^(2)+w+1")
    assert power(TWO, o("w+3")) == o("w*8")
    assert power(ZERO, ZERO) == ONE
    assert power(ZERO, o("w")) == ZERO


def test_triple_oracle_agreement():
    rng = random.Random(101)
    for _ in range(1500):
        x, y = random_triple(rng), random_triple(rng)
        a, b = from_triple(x), from_triple(y)
        assert (compare(a, b) is Comparison.LESS) == (x < y)
        assert to_triple(add(a, b)) == triple_add(x, y)
        expected = triple_mul(x, y)
        if expected is not None:
            assert to_triple(mul(a, b)) == expected


def test_left_subtract():
    assert left_subtract(ONE, w) == w
    assert left_subtract(w, o("w*2+3")) == o("w+3")
    with pytest.raises(Underflow):
        left_subtract(o("w*2"), w)


def test_divmod_left_reconstruction():
    rng = random.Random(5)
    for _ in range(500):
        d = random_ordinal(rng)
        if d.is_zero:
            d = ONE
        q = random_ordinal(rng)
        r = random_ordinal(rng)
        if not (r < d):
            _, r = divmod_left(r, d)
        qq, rr = divmod_left(add(mul(d, q), r), d)
        assert (qq, rr) == (q, r)


def test_successor_limit_predicates():
    assert not ZERO.is_limit and not ZERO.is_successor
    assert o("w*2").is_limit
    assert o("w^(2)+w+1").is_successor
    assert o("w^(2)+w").successor() == o("w^(2)+w+1")
    assert o("w+1").predecessor() == w
    with pytest.raises(ValueError):
        w.predecessor()


@settings(max_examples=200, deadline=None)
@given(_ordinals(), _ordinals(), _ordinals())
def test_arithmetic_laws(a, b, c):
    assert add(add(a, b), c) == add(a, add(b, c))
    assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))
    if b < c:
        assert add(a, b) < add(a, c)
    if a <= b:
        assert add(a, left_subtract(a, b)) == b


def test_identity_laws():
    rng = random.Random(17)
    for _ in range(200):
        a = random_ordinal(rng)
        assert add(a, ZERO) == a == add(ZERO, a)
        assert mul(a, ONE) == a == mul(ONE, a)
        assert power(a, ONE) == a
        assert power(a, ZERO) == ONE


def test_representation_guards():
    with pytest.raises(RepresentationOverflow):
        x = w
        for _ in range(100):
            x = power(w, x)
    with pytest.raises(RepresentationOverflow):
        power(TWO, from_int(30_000))


# -- text format ---------------------------------------------------------------


def test_format_examples():
    for text in ["0", "5", "w", "w*2+3", "w^(w)+w^(2)*4+1"]:
        assert format_ordinal(parse_ordinal(text)) == text


def test_parse_canonicalizes():
    assert format_ordinal(parse_ordinal("w^(1)")) == "w"
    assert format_ordinal(parse_ordinal(" w*2 + 3 ")) == "w*2+3"


def test_parse_rejects_bad_text():
    for bad in ["", "x", "w^", "w^(w", "1+w", "5+5", "w*0", "0+1", "w**2"]:
        with pytest.raises(ValueError):
            parse_ordinal(bad)


@settings(max_examples=200, deadline=None)
@given(_ordinals())
def test_parse_print_roundtrip(a):
    assert parse_ordinal(format_ordinal(a)) == a


# -- pairing -------------------------------------------------------------------


def test_pair_anchors():
    assert pair(ZERO, ZERO) == ZERO
    assert pair(ONE, ONE) == from_int(3)
    assert unpair(pair(w, from_int(5))) == (w, from_int(5))
    assert pair_count_below(w) == w
    assert pair_count_below(o("w^(2)")) == o("w^(3)")
    assert pair_count_below(o("w+5")) == o("w*11+5")


def test_pair_matches_rank_enumeration():
    table = rank_table(20)
    for (a, b), rank in table.items():
        assert pair(from_int(a), from_int(b)) == from_int(rank)
        ua, ub = unpair(from_int(rank))
        assert (ua.finite, ub.finite) == (a, b)


def test_pair_block_structure_above_omega():
    # within the block of pairs whose maximum is m, ranks are
    # N(m) + a (for a < m, b = m) then N(m) + m + b (for a = m)
    for m in [w, o("w+3"), o("w*2"), o("w^(2)+1")]:
        base = pair(ZERO, m)
        assert base == pair_count_below(m)
        samples = [ZERO, ONE, from_int(3), w, o("w+1"), o("w*2")]
        for x in samples:
            if x < m:
                assert pair(x, m) == add(base, x)
        for b in samples:
            if b <= m:
                assert pair(m, b) == add(base, add(m, b))


@settings(max_examples=300, deadline=None)
@given(_ordinals(), _ordinals())
def test_pair_roundtrip(a, b):
    assert unpair(pair(a, b)) == (a, b)


@settings(max_examples=300, deadline=None)
@given(_ordinals())
def test_unpair_total_and_inverts(c):
    a, b = unpair(c)
    assert pair(a, b) == c


def test_pair_strictly_monotone():
    # pair orders pairs by (max, left, right), lexicographically
    rng = random.Random(23)

    def key(p):
        m = p[0] if p[0] >= p[1] else p[1]
        return (m, p[0], p[1])

    for _ in range(1000):
        p = (random_ordinal(rng), random_ordinal(rng))
        q = (random_ordinal(rng), random_ordinal(rng))
        kp, kq = key(p), key(q)
        assert (pair(*p) < pair(*q)) == _lex_less(kp, kq)
        assert (pair(*p) == pair(*q)) == (kp == kq)


def _lex_less(kp, kq):
    for x, y in zip(kp, kq):
        if x < y:
            return True
        if y < x:
            return False
    return False


def test_tuple_code():
    assert tuple_code([from_int(7)]) == from_int(7)
    assert tuple_code([ZERO, ZERO]) == ZERO
    assert tuple_code([ONE, ONE, ZERO]) == pair(from_int(3), ZERO)
    with pytest.raises(ValueError):
        tuple_code([])


# -- the block-sum closed forms behind pair ------------------------------------


def test_block_sums_match_literal_sums():
    rng = random.Random(31)
    for _ in range(300):
        b = random_ordinal(rng)
        n = rng.randrange(0, 25)
        literal = ZERO
        for k in range(n):
            literal = add(literal, _T(add(b, from_int(k))))
        assert _S(b, from_int(n)) == literal


def test_block_sum_power_recursion():
    # S(b, w^(f+1)) must equal the explicit omega-sum of its sub-blocks:
    # the first block plus a constant tail extrapolated by *w
    rng = random.Random(37)
    for _ in range(300):
        b = random_ordinal(rng)
        f = random_ordinal(rng, depth=1)
        if f.is_zero:
            f = ONE
        x1 = _S_power(b, f)
        x2 = _S_power(add(b, omega_power(f)), f)
        for j in (1, 2, 7):
            bj = add(b, mul(omega_power(f), from_int(j)))
            assert _S_power(bj, f) == x2
        assert _S_power(b, add(f, ONE)) == add(x1, mul(x2, w))


def test_block_sum_additive():
    rng = random.Random(41)
    for _ in range(500):
        b, mu, nu = (random_ordinal(rng) for _ in range(3))
        assert _S(b, add(mu, nu)) == add(_S(b, mu), _S(add(b, mu), nu))


# -- omega sequences -----------------------------------------------------------


def test_liminf_examples():
    assert liminf_omega(OmegaSequence((), (Const(ZERO), Const(ONE)))) == ZERO
    assert liminf_omega(OmegaSequence((), (Affine(ZERO, ONE),))) == w
    # a constant transfinite value interleaved with a growing finite branch:
    # the tail infima run through the finite branch, so the liminf is its
    # supremum w, not the constant
    mixed = OmegaSequence((), (Const(o("w*3")), Affine(from_int(5), TWO)))
    assert liminf_omega(mixed) == w
    assert sup_omega(mixed) == o("w*3")


def test_liminf_ignores_prefix():
    s1 = OmegaSequence((o("w^(5)"), ZERO), (Const(ONE), Const(TWO)))
    s2 = OmegaSequence((), (Const(ONE), Const(TWO)))
    assert liminf_omega(s1) == liminf_omega(s2) == ONE
    assert sup_omega(s1) == o("w^(5)")


def test_liminf_matches_tail_infima_sampling():
    rng = random.Random(43)
    for _ in range(200):
        terms = []
        for _ in range(rng.randrange(1, 4)):
            if rng.random() < 0.5:
                terms.append(Const(random_ordinal(rng)))
            else:
                delta = random_ordinal(rng, depth=1)
                if delta.is_zero:
                    delta = ONE
                terms.append(Affine(random_ordinal(rng), delta))
        s = OmegaSequence((), tuple(terms))
        expansion = s.expand(400)
        # the tail-infimum at a deep cut either equals the liminf already or
        # is still strictly below it and climbing through an affine branch
        tail = expansion[300:]
        inf_tail = tail[0]
        for v in tail[1:]:
            if v < inf_tail:
                inf_tail = v
        lim = liminf_omega(s)
        assert inf_tail <= lim
        if inf_tail < lim:
            assert any(isinstance(t, Affine) for t in s.period)


def test_omega_sequence_validation():
    with pytest.raises(ValueError):
        OmegaSequence((), ())
    with pytest.raises(ValueError):
        Affine(ZERO, ZERO)


def test_sequence_values():
    s = OmegaSequence((from_int(9),), (Const(ZERO), Affine(ONE, TWO)))
    assert s.value_at(0) == from_int(9)
    assert s.value_at(1) == ZERO
    assert s.value_at(2) == ONE
    assert s.value_at(3) == ZERO
    assert s.value_at(4) == from_int(3)
    assert s.expand(5) == [from_int(9), ZERO, ONE, ZERO, from_int(3)]


def test_closure_predicates():
    assert closed_under_addition(w)
    assert closed_under_addition(o("w^(w)"))
    assert not closed_under_addition(o("w*2"))
    assert closed_under_pairing(w)
    assert closed_under_pairing(o("w^(w)"))
    assert not closed_under_pairing(o("w*2"))
    assert not closed_under_pairing(o("w^(2)"))
