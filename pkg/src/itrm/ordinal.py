"""Cantor normal form ordinal arithmetic below epsilon_0.

An ordinal is a finite sum w^e1*c1 + ... + w^ek*ck with strictly decreasing
ordinal exponents and positive integer coefficients; the empty sum is 0. All
values are immutable and every operation is pure, so concurrent use needs no
coordination.

The canonical string grammar, used verbatim by the CLI and trace files:

    ordinal := "0" | term ("+" term)*
    term    := nat | "w" | "w*" nat | "w^(" ordinal ")" | "w^(" ordinal ")*" nat

Terms appear in strictly decreasing exponent order, "*1" is omitted, and an
exponent of 1 prints as plain "w". Examples: "0", "5", "w", "w*2+3",
"w^(w)+w^(2)*4+1".
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence, Union


class RepresentationOverflow(Exception):
    """A result left the supported representation range (resource guard)."""


class Underflow(Exception):
    """left_subtract(a, b) was called with a > b."""


class OrdinalParseError(ValueError):
    """Text does not conform to the canonical ordinal grammar."""


class Comparison(Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


LESS = Comparison.LESS
EQUAL = Comparison.EQUAL
GREATER = Comparison.GREATER

# Resource guards, not mathematical limits: +, * and ^ below epsilon_0 never
# overflow a finite CNF, but iterated towers can grow without bound. The
# coefficient room is deliberately deep: nested pair codes of machine
# configurations are finite but double exponentially in the tuple width.
_MAX_COEFF = 10**6000
_MAX_TERMS = 4096
_MAX_DEPTH = 48

_FINITE_CACHE: dict[int, "Ordinal"] = {}


class Ordinal:
    """An ordinal below epsilon_0 in Cantor normal form."""

    __slots__ = ("terms", "_finite", "_depth", "_hash")

    terms: tuple[tuple["Ordinal", int], ...]

    def __init__(self, terms: Iterable[tuple["Ordinal", int]] = ()):
        terms = tuple(terms)
        prev = None
        depth = 0
        for exp, coeff in terms:
            if not isinstance(exp, Ordinal) or not isinstance(coeff, int):
                raise TypeError("terms must be (Ordinal, int) pairs")
            if coeff < 1:
                raise ValueError("coefficients must be >= 1")
            if coeff > _MAX_COEFF:
                raise RepresentationOverflow(f"coefficient {coeff} too large")
            if prev is not None and _cmp(exp, prev) != -1:
                raise ValueError("exponents must be strictly decreasing")
            prev = exp
            depth = max(depth, exp._depth + 1)
        if len(terms) > _MAX_TERMS:
            raise RepresentationOverflow("too many CNF terms")
        if depth > _MAX_DEPTH:
            raise RepresentationOverflow("CNF nesting too deep")
        object.__setattr__(self, "terms", terms)
        if not terms:
            fin: int | None = 0
        elif len(terms) == 1 and not terms[0][0].terms:
            fin = terms[0][1]
        else:
            fin = None
        object.__setattr__(self, "_finite", fin)
        object.__setattr__(self, "_depth", depth)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # immutable
        raise AttributeError("Ordinal is immutable")

    # -- structure ---------------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self._finite is not None

    @property
    def finite(self) -> int | None:
        """The integer value if this ordinal is finite, else None."""
        return self._finite

    def as_int(self) -> int:
        if self._finite is None:
            raise ValueError(f"{self} is not finite")
        return self._finite

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and bool(self.terms[-1][0].terms)

    @property
    def is_successor(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].terms

    @property
    def leading_exponent(self) -> "Ordinal":
        if not self.terms:
            raise ValueError("0 has no leading exponent")
        return self.terms[0][0]

    def split_limit_finite(self) -> tuple["Ordinal", int]:
        """Write self as L + n with L a limit ordinal (or 0) and n finite."""
        if not self.terms or self.terms[-1][0].terms:
            return self, 0
        return _ord(self.terms[:-1]), self.terms[-1][1]

    def peel_last_power(self) -> tuple["Ordinal", "Ordinal"]:
        """Write a limit ordinal as K + w^h, peeling one copy of the last term."""
        if not self.is_limit:
            raise ValueError("peel_last_power requires a limit ordinal")
        h, c = self.terms[-1]
        if c == 1:
            return _ord(self.terms[:-1]), h
        return _ord(self.terms[:-1] + ((h, c - 1),)), h

    def successor(self) -> "Ordinal":
        return add(self, ONE)

    def predecessor(self) -> "Ordinal":
        if not self.is_successor:
            raise ValueError(f"{self} is not a successor")
        e, c = self.terms[-1]
        if c == 1:
            return _ord(self.terms[:-1])
        return _ord(self.terms[:-1] + ((e, c - 1),))

    # -- order -------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if isinstance(other, int):
            return self._finite == other
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(tuple((hash(e), c) for e, c in self.terms))
            object.__setattr__(self, "_hash", h)
        return h

    def __lt__(self, other) -> bool:
        return _cmp(self, _coerce(other)) < 0

    def __le__(self, other) -> bool:
        return _cmp(self, _coerce(other)) <= 0

    def __gt__(self, other) -> bool:
        return _cmp(self, _coerce(other)) > 0

    def __ge__(self, other) -> bool:
        return _cmp(self, _coerce(other)) >= 0

    # -- arithmetic sugar ----------------------------------------------------

    def __add__(self, other) -> "Ordinal":
        return add(self, _coerce(other))

    def __radd__(self, other) -> "Ordinal":
        return add(_coerce(other), self)

    def __mul__(self, other) -> "Ordinal":
        return mul(self, _coerce(other))

    def __rmul__(self, other) -> "Ordinal":
        return mul(_coerce(other), self)

    def __pow__(self, other) -> "Ordinal":
        return power(self, _coerce(other))

    def __str__(self) -> str:
        return format_ordinal(self)

    def __repr__(self) -> str:
        return f"Ordinal({format_ordinal(self)!r})"

    def __bool__(self) -> bool:
        return bool(self.terms)


def _coerce(x: Union["Ordinal", int]) -> "Ordinal":
    if isinstance(x, Ordinal):
        return x
    if isinstance(x, int):
        return from_int(x)
    raise TypeError(f"cannot interpret {x!r} as an ordinal")


def _ord(terms: tuple[tuple[Ordinal, int], ...]) -> Ordinal:
    # Trusted internal constructor; still runs the cheap guards via __init__.
    if not terms:
        return ZERO
    if len(terms) == 1 and not terms[0][0].terms:
        return from_int(terms[0][1])
    return Ordinal(terms)


def from_int(n: int) -> Ordinal:
    if n < 0:
        raise ValueError("ordinals are non-negative")
    cached = _FINITE_CACHE.get(n)
    if cached is not None:
        return cached
    o = Ordinal(((ZERO, n),)) if n else Ordinal(())
    if n <= 4096:
        _FINITE_CACHE[n] = o
    return o


def omega_power(exp: Union[Ordinal, int], coeff: int = 1) -> Ordinal:
    """w^exp * coeff."""
    e = _coerce(exp)
    if coeff == 0:
        return ZERO
    return _ord(((e, coeff),))


def _cmp(a: Ordinal, b: Ordinal) -> int:
    if a is b:
        return 0
    fa, fb = a._finite, b._finite
    if fa is not None and fb is not None:
        return (fa > fb) - (fa < fb)
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = _cmp(ea, eb)
        if c:
            return c
        if ca != cb:
            return (ca > cb) - (ca < cb)
    la, lb = len(a.terms), len(b.terms)
    return (la > lb) - (la < lb)


def compare(a: Ordinal, b: Ordinal) -> Comparison:
    return Comparison(_cmp(a, b))


def ord_min(a: Ordinal, b: Ordinal) -> Ordinal:
    return a if _cmp(a, b) <= 0 else b


def ord_max(a: Ordinal, b: Ordinal) -> Ordinal:
    return a if _cmp(a, b) >= 0 else b


def add(a: Ordinal, b: Ordinal) -> Ordinal:
    if b._finite == 0:
        return a
    if a._finite == 0:
        return b
    fa, fb = a._finite, b._finite
    if fa is not None and fb is not None:
        return from_int(fa + fb)
    eb = b.terms[0][0]
    # terms of a with exponent > eb survive; an equal-exponent term merges
    i = len(a.terms)
    while i > 0 and _cmp(a.terms[i - 1][0], eb) < 0:
        i -= 1
    if i > 0 and _cmp(a.terms[i - 1][0], eb) == 0:
        merged = (eb, a.terms[i - 1][1] + b.terms[0][1])
        return _ord(a.terms[: i - 1] + (merged,) + b.terms[1:])
    return _ord(a.terms[:i] + b.terms)


def mul(a: Ordinal, b: Ordinal) -> Ordinal:
    if not a.terms or not b.terms:
        return ZERO
    fa, fb = a._finite, b._finite
    if fa is not None and fb is not None:
        return from_int(fa * fb)
    e1, c1 = a.terms[0]
    out = ZERO
    for f, d in b.terms:
        if not f.terms:
            part = _ord(((e1, c1 * d),) + a.terms[1:])
        else:
            part = _ord(((add(e1, f), d),))
        out = add(out, part)
    return out


def power(a: Ordinal, b: Ordinal) -> Ordinal:
    if not b.terms:
        return ONE
    if not a.terms:
        return ZERO
    if a._finite == 1:
        return ONE
    if b._finite == 1:
        return a
    if a._finite is not None:
        n = a._finite
        if b._finite is not None:
            return from_int(_guarded_int_pow(n, b._finite))
        # n^b = w^q * n^r where b = w*q + r with r finite
        limit, r = b.split_limit_finite()
        q_terms = tuple((left_subtract(ONE, e), c) for e, c in limit.terms)
        return mul(omega_power(_ord(q_terms)), from_int(_guarded_int_pow(n, r)))
    limit, m = b.split_limit_finite()
    out = omega_power(mul(a.terms[0][0], limit)) if limit.terms else ONE
    if m > 64:
        raise RepresentationOverflow("finite exponent too large for CNF power")
    for _ in range(m):
        out = mul(out, a)
    return out


def _guarded_int_pow(n: int, r: int) -> int:
    if r * max(n.bit_length(), 1) > 64:
        raise RepresentationOverflow(f"{n}^{r} exceeds the coefficient guard")
    return n**r


def left_subtract(a: Ordinal, b: Ordinal) -> Ordinal:
    """The unique c with a + c = b, for a <= b."""
    fa, fb = a._finite, b._finite
    if fa is not None and fb is not None:
        if fa > fb:
            raise Underflow(f"{a} > {b}")
        return from_int(fb - fa)
    i = 0
    while i < len(a.terms) and i < len(b.terms):
        (ea, ca), (eb, cb) = a.terms[i], b.terms[i]
        c = _cmp(ea, eb)
        if c > 0:
            raise Underflow(f"{a} > {b}")
        if c < 0:
            return _ord(b.terms[i:])
        if ca != cb:
            if ca > cb:
                raise Underflow(f"{a} > {b}")
            return _ord(((eb, cb - ca),) + b.terms[i + 1 :])
        i += 1
    if i < len(a.terms):
        raise Underflow(f"{a} > {b}")
    return _ord(b.terms[i:])


def divmod_left(dividend: Ordinal, divisor: Ordinal) -> tuple[Ordinal, Ordinal]:
    """(q, r) with dividend = divisor*q + r and r < divisor."""
    if not divisor.terms:
        raise ZeroDivisionError("ordinal division by zero")
    fa, fb = dividend._finite, divisor._finite
    if fb is not None:
        if fa is not None:
            return from_int(fa // fb), from_int(fa % fb)
        if fb == 1:
            return dividend, ZERO
    q = ZERO
    r = dividend
    e1, c1 = divisor.terms[0]
    while _cmp(r, divisor) >= 0:
        g1, h1 = r.terms[0]
        if _cmp(g1, e1) > 0:
            gamma = omega_power(left_subtract(e1, g1), h1)
            # divisor * gamma is the single term w^g1 * h1
            q = add(q, gamma)
            r = _ord(r.terms[1:])
        else:
            k = h1 // c1
            while k and _cmp(mul(divisor, from_int(k)), r) > 0:
                k -= 1
            if k == 0:
                break
            q = add(q, from_int(k))
            r = left_subtract(mul(divisor, from_int(k)), r)
    return q, r


# -- closure diagnostics ----------------------------------------------------


def closed_under_addition(a: Ordinal) -> bool:
    """True iff x+y < a whenever x, y < a."""
    return a <= ONE or (len(a.terms) == 1 and a.terms[0][1] == 1)


def closed_under_pairing(a: Ordinal) -> bool:
    """True iff pair(x, y) < a whenever x, y < a."""
    if a <= ONE:
        return True
    return _cmp(_S(ZERO, a), a) <= 0


def closed_under_omega_power(a: Ordinal) -> bool:
    """True iff w^x < a whenever x < a.

    Only 0 qualifies below epsilon_0: already a = 1 fails at x = 0, and the
    next fixed points of x -> w^x are the epsilon numbers.
    """
    return not a.terms


def closed_under_exponentiation(a: Ordinal) -> bool:
    """True iff x^y < a whenever x, y < a.

    Below epsilon_0 the only instances are 0 (vacuous), 2, and w; a = 1 fails
    at 0^0 = 1, and any a > w contains w with w^w unbounded in a's range.
    """
    return not a.terms or a == TWO or a == OMEGA


# -- Goedel pairing ----------------------------------------------------------
#
# Pairs are ranked by (max(a,b), a, b) lexicographically. With
# T(x) = x*2 + 1 (the length of the block of pairs whose maximum is x) and
# S(b, mu) = sum_{k<mu} T(b+k), the rank is
#
#     pair(a, b) = S(0, m) + (a if a < m else m + b),   m = max(a, b).
#
# S has the closed form S(b, w^e) = w^(max(g+e, D(e))) for b > 0 with leading
# exponent g, S(0, w^e) = w^D(e), where D(e) = (e-1)*2 + 1 for successor e and
# D(K + w^h) = K*2 + w^h for limit e peeled at its last power.


def _T(b: Ordinal) -> Ordinal:
    return add(mul(b, TWO), ONE)


def _D(e: Ordinal) -> Ordinal:
    if e.is_successor:
        return add(mul(e.predecessor(), TWO), ONE)
    k, h = e.peel_last_power()
    return add(mul(k, TWO), omega_power(h))


def _S_power(b: Ordinal, e: Ordinal) -> Ordinal:
    d = _D(e)
    if not b.terms:
        return omega_power(d)
    return omega_power(ord_max(add(b.leading_exponent, e), d))


def _finite_block_sum(b: Ordinal, c: int) -> Ordinal:
    # sum_{i<c} T(b+i)
    if c == 0:
        return ZERO
    limit, m = b.split_limit_finite()
    if not limit.terms:
        return from_int((m + c) * (m + c) - m * m)
    # for infinite b the first copy of the finite part is absorbed:
    # T(b+i) = limit*2 + (m+i) + 1, so the ordinal sum telescopes
    return add(mul(mul(limit, TWO), from_int(c)), from_int(m + c))


def _S(b: Ordinal, mu: Ordinal) -> Ordinal:
    total = ZERO
    cur = b
    for e, c in mu.terms:
        if not e.terms:
            total = add(total, _finite_block_sum(cur, c))
            cur = add(cur, from_int(c))
        else:
            block = omega_power(e)
            x1 = _S_power(cur, e)
            if c == 1:
                total = add(total, x1)
            else:
                x2 = _S_power(add(cur, block), e)
                total = add(total, add(x1, mul(x2, from_int(c - 1))))
            cur = add(cur, omega_power(e, c))
    return total


def _inv_D(limit_exp: Ordinal) -> Ordinal | None:
    """Max e >= 1 with D(e) <= limit_exp, or None."""
    p, n = limit_exp.split_limit_finite()
    if not p.terms:
        return from_int((n + 1) // 2) if n >= 1 else None
    p1, q1 = p.terms[0]
    rest = _ord(p.terms[1:])
    if q1 % 2 == 1:
        return omega_power(p1, (q1 + 1) // 2)
    half = omega_power(p1, q1 // 2)
    if n >= 1:
        return add(half, add(rest, from_int(n)))
    if rest.terms:
        return add(half, rest)
    return half


def _max_block_exp(cur: Ordinal, rem: Ordinal) -> Ordinal | None:
    """Max e >= 1 with _S_power(cur, e) <= rem, or None."""
    if rem.is_finite:
        return None
    lead = rem.leading_exponent
    e_d = _inv_D(lead)
    if e_d is None or not e_d.terms:
        return None
    if not cur.terms:
        return e_d
    g = cur.leading_exponent
    if _cmp(g, lead) > 0:
        return None
    e_g = left_subtract(g, lead)
    e = ord_min(e_g, e_d)
    return e if e.terms else None


def _inv_S(b: Ordinal, c: Ordinal) -> tuple[Ordinal, Ordinal]:
    """Greatest mu with S(b, mu) <= c, plus the residual c - S(b, mu)."""
    mu = ZERO
    cur = b
    rem = c
    prev_exp: Ordinal | None = None
    while True:
        e = _max_block_exp(cur, rem)
        if e is None:
            break
        if prev_exp is not None and _cmp(e, prev_exp) >= 0:
            raise AssertionError("pairing inversion: exponents must descend")
        prev_exp = e
        x1 = _S_power(cur, e)
        rem1 = left_subtract(x1, rem)
        x2 = _S_power(add(cur, omega_power(e)), e)
        q, r = divmod_left(rem1, x2)
        if q._finite is None:
            raise AssertionError("pairing inversion: block count must be finite")
        count = 1 + q._finite
        mu = add(mu, omega_power(e, count))
        cur = add(cur, omega_power(e, count))
        rem = r
    # finite blocks: greatest k with sum of k more T-blocks <= rem
    lo, hi = 0, 1
    while _cmp(_finite_block_sum(cur, hi), rem) <= 0:
        lo, hi = hi, hi * 2
    while lo < hi - 1:
        mid = (lo + hi) // 2
        if _cmp(_finite_block_sum(cur, mid), rem) <= 0:
            lo = mid
        else:
            hi = mid
    if lo:
        rem = left_subtract(_finite_block_sum(cur, lo), rem)
        mu = add(mu, from_int(lo))
        cur = add(cur, from_int(lo))
    return mu, rem


def pair(a: Ordinal, b: Ordinal) -> Ordinal:
    """Rank of (a, b) among all ordinal pairs ordered by (max, a, b)."""
    m = ord_max(a, b)
    offset = a if _cmp(a, m) < 0 else add(m, b)
    return add(_S(ZERO, m), offset)


def unpair(c: Ordinal) -> tuple[Ordinal, Ordinal]:
    """Inverse of pair."""
    m, rem = _inv_S(ZERO, c)
    if _cmp(rem, m) < 0:
        return rem, m
    return m, left_subtract(m, rem)


def tuple_code(xs: Sequence[Ordinal]) -> Ordinal:
    """Left-nested pairing: code([a]) = a, code(xs + [y]) = pair(code(xs), y)."""
    if not xs:
        raise ValueError("tuple_code needs at least one component")
    acc = xs[0]
    for x in xs[1:]:
        acc = pair(acc, x)
    return acc


def pair_count_below(m: Ordinal) -> Ordinal:
    """Order type of {(x, y) : max(x, y) < m}; the rank of the first max-m pair."""
    return _S(ZERO, m)


# -- omega-sequences ---------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: Ordinal


@dataclass(frozen=True)
class Affine:
    """Contributes base + delta*k on the k-th repetition of the period."""

    base: Ordinal
    delta: Ordinal

    def __post_init__(self):
        if not self.delta.terms:
            raise ValueError("Affine delta must be > 0")

    def at(self, k: int) -> Ordinal:
        return add(self.base, mul(self.delta, from_int(k)))


Term = Union[Const, Affine]


@dataclass(frozen=True)
class OmegaSequence:
    """An omega-length sequence: a finite prefix, then a repeated period.

    The k-th repetition of the period contributes, per term, either a fixed
    value (Const) or base + delta*k (Affine).
    """

    prefix: tuple[Ordinal, ...]
    period: tuple[Term, ...]

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be nonempty")

    def value_at(self, i: int) -> Ordinal:
        if i < len(self.prefix):
            return self.prefix[i]
        j = i - len(self.prefix)
        k, pos = divmod(j, len(self.period))
        t = self.period[pos]
        return t.value if isinstance(t, Const) else t.at(k)

    def expand(self, n: int) -> list[Ordinal]:
        return [self.value_at(i) for i in range(n)]


def liminf_omega(s: OmegaSequence) -> Ordinal:
    """sup over tails of infima. The prefix never matters.

    Each Const term is attained cofinally; each Affine term is strictly
    increasing with supremum base + delta*w, which is what its tail-infima
    converge to. The liminf of the interleaving is the least of these.
    """
    best: Ordinal | None = None
    for t in s.period:
        v = t.value if isinstance(t, Const) else add(t.base, mul(t.delta, OMEGA))
        best = v if best is None else ord_min(best, v)
    assert best is not None
    return best


def sup_omega(s: OmegaSequence) -> Ordinal:
    """Supremum of all described values."""
    best = ZERO
    for v in s.prefix:
        best = ord_max(best, v)
    for t in s.period:
        v = t.value if isinstance(t, Const) else add(t.base, mul(t.delta, OMEGA))
        best = ord_max(best, v)
    return best


# -- text --------------------------------------------------------------------


def format_ordinal(a: Ordinal) -> str:
    if not a.terms:
        return "0"
    parts = []
    for e, c in a.terms:
        if not e.terms:
            parts.append(str(c))
        elif e._finite == 1:
            parts.append("w" if c == 1 else f"w*{c}")
        else:
            base = f"w^({format_ordinal(e)})"
            parts.append(base if c == 1 else f"{base}*{c}")
    return "+".join(parts)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str) -> OrdinalParseError:
        return OrdinalParseError(f"at index {self.pos}: {message}")

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str):
        if self.peek() != ch:
            raise self.error(f"expected {ch!r}")
        self.pos += 1

    def nat(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise self.error("expected a number")
        return int(self.text[start : self.pos])

    def ordinal(self) -> Ordinal:
        terms = [self.term()]
        while self.peek() == "+":
            self.take("+")
            terms.append(self.term())
        out = ZERO
        prev: Ordinal | None = None
        for e, c in terms:
            if prev is not None and _cmp(e, prev) >= 0:
                raise self.error("terms must have strictly decreasing exponents")
            prev = e
            out = add(out, _ord(((e, c),)) if c else ZERO)
        return out

    def term(self) -> tuple[Ordinal, int]:
        ch = self.peek()
        if ch.isdigit():
            return ZERO, self.nat()
        if ch != "w":
            raise self.error("expected a term")
        self.take("w")
        exp = ONE
        if self.peek() == "^":
            self.take("^")
            self.take("(")
            exp = self.ordinal()
            self.take(")")
        coeff = 1
        if self.peek() == "*":
            self.take("*")
            coeff = self.nat()
            if coeff < 1:
                raise self.error("coefficient must be >= 1")
        return exp, coeff


def parse_ordinal(text: str) -> Ordinal:
    p = _Parser(text)
    if p.peek() == "0":
        p.take("0")
        p.skip_ws()
        if p.pos != len(text):
            raise p.error("trailing input after 0")
        return ZERO
    out = p.ordinal()
    p.skip_ws()
    if p.pos != len(text):
        raise p.error("trailing input")
    return out


ZERO = Ordinal(())
_FINITE_CACHE[0] = ZERO
ONE = from_int(1)
TWO = from_int(2)
OMEGA = omega_power(1)
omega = OMEGA
