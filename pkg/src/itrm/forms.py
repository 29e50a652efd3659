"""Symbolic register values used by period certification.

A Form stands for an ordinal-valued function of finitely many natural
variables K_0, K_1, ... (repetition counters, one per nested limit
being certified). It is an alternating sum

    c_0 + d_1*K_{v_1} + c_1 + d_2*K_{v_2} + ... + c_n

with ordinal constants c_i and positive ordinal coefficients d_i. Each
variable occurs at most once, and variables appear left to right in
nesting order (outermost first), because growth is only ever appended
on the right by the innermost live replay.

Comparison verdicts quantify over ALL assignments K >= 0, which is what
makes an extrapolation sound for every repetition at once. They are
computed exactly: for k >= 1 the identity d*k = w^e*(d1*k) + tail (e, d1
the leading exponent and coefficient of d) turns a form into a CNF-like
term list whose coefficients are linear polynomials in the variables,
and the comparison walks the two term lists lexicographically. The
k = 0 / k >= 1 split per variable removes the vanishing-term ambiguity.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .ordinal import (
    Comparison,
    OMEGA,
    Ordinal,
    Underflow,
    ZERO,
    add,
    compare,
    from_int,
    left_subtract,
    mul,
)

__all__ = [
    "Form",
    "VarTerm",
    "ZERO_FORM",
    "eq_verdict",
    "form_add_ordinal",
    "form_add_var",
    "form_const",
    "form_delta",
    "form_drop_var",
    "form_is_const",
    "form_liminf",
    "form_value",
    "form_vars",
    "min_form",
    "order_verdict",
]


@dataclass(frozen=True)
class VarTerm:
    var: int
    delta: Ordinal  # > 0


@dataclass(frozen=True)
class Form:
    parts: tuple = ()


ZERO_FORM = Form(())


def form_const(c: Ordinal) -> Form:
    return ZERO_FORM if c.is_zero else Form((c,))


def form_is_const(f: Form) -> bool:
    return all(not isinstance(p, VarTerm) for p in f.parts)


def form_value(f: Form, env: dict[int, Ordinal] | None = None) -> Ordinal:
    """Evaluate at a concrete assignment (missing variables read as 0)."""
    acc = ZERO
    for p in f.parts:
        if isinstance(p, VarTerm):
            k = env.get(p.var, ZERO) if env else ZERO
            acc = add(acc, mul(p.delta, k))
        else:
            acc = add(acc, p)
    return acc


def form_vars(f: Form) -> list[int]:
    return [p.var for p in f.parts if isinstance(p, VarTerm)]


def form_add_ordinal(f: Form, c: Ordinal) -> Form:
    """f + c. Variable terms entirely below c's leading exponent are
    absorbed for every assignment, so they are dropped outright."""
    if c.is_zero:
        return f
    parts = list(f.parts)
    while parts:
        last = parts[-1]
        if isinstance(last, VarTerm):
            if compare(last.delta.leading_exponent, c.leading_exponent) is Comparison.LESS:
                parts.pop()
                continue
            break
        # merging can raise the leading exponent, so deeper variable
        # terms must be rechecked against the merged constant
        parts.pop()
        c = add(last, c)
    parts.append(c)
    return Form(tuple(parts))


def form_add_var(f: Form, var: int, delta: Ordinal) -> Form:
    """f + delta*K_var; the new variable must be fresh and innermost."""
    if delta.is_zero:
        raise ValueError("growth coefficient must be positive")
    if var in form_vars(f):
        raise ValueError(f"variable {var} already present")
    return Form(f.parts + (VarTerm(var, delta),))


def form_liminf(f: Form, var: int) -> Form:
    """Pointwise liminf (= sup) as K_var -> w. Everything after the
    variable's term is swamped; the variable must be the innermost."""
    for i, p in enumerate(f.parts):
        if isinstance(p, VarTerm) and p.var == var:
            if any(isinstance(q, VarTerm) for q in f.parts[i + 1 :]):
                raise ValueError("liminf variable must be innermost")
            out = Form(f.parts[:i])
            return form_add_ordinal(out, mul(p.delta, OMEGA))
    return f


def form_drop_var(f: Form, var: int) -> Form:
    """Substitute K_var := 0."""
    out = ZERO_FORM
    for p in f.parts:
        if isinstance(p, VarTerm):
            if p.var == var:
                continue
            out = Form(out.parts + (p,))
        else:
            out = form_add_ordinal(out, p)
    return out


def form_delta(start: Form, end: Form) -> Ordinal | None:
    """The unique d with end = start + d by right addition, if the two
    forms differ by a trailing constant only. None when no such d."""
    if start == end:
        return ZERO
    s, e = start.parts, end.parts
    if form_is_const(start) and form_is_const(end):
        a = form_value(start)
        b = form_value(end)
        try:
            d = left_subtract(a, b)
        except Underflow:
            return None
        return d
    if len(e) == len(s) + 1 and e[:-1] == s and not isinstance(e[-1], VarTerm):
        return e[-1]
    if (
        len(e) == len(s)
        and len(s) >= 1
        and e[:-1] == s[:-1]
        and not isinstance(s[-1], VarTerm)
        and not isinstance(e[-1], VarTerm)
    ):
        try:
            d = left_subtract(s[-1], e[-1])
        except Underflow:
            return None
        # right addition must reproduce the tail exactly
        if add(s[-1], d) == e[-1]:
            return d
        return None
    return None


# -- comparison ----------------------------------------------------------------
#
# A gcnf is a list of (exponent, const, coeffs) in strictly decreasing
# exponent order: the value is the sum of w^exponent * (const +
# sum coeffs[v]*K'_v) where every active variable has been shifted by
# K = 1 + K', so const >= 1 throughout and terms never vanish.


def _lead_split(d: Ordinal) -> tuple[Ordinal, int, Ordinal]:
    e, c = d.terms[0]
    return e, c, Ordinal(d.terms[1:])


def _gcnf_add_term(terms: list, exp: Ordinal, n: int, var: int | None) -> None:
    while terms and compare(terms[-1][0], exp) is Comparison.LESS:
        terms.pop()
    if terms and terms[-1][0] == exp:
        _, const, coeffs = terms[-1]
        coeffs = dict(coeffs)
        if var is not None:
            coeffs[var] = coeffs.get(var, 0) + n
        terms[-1] = (exp, const + n, coeffs)
    else:
        coeffs = {var: n} if var is not None else {}
        terms.append((exp, n, coeffs))


def _gcnf_add_ordinal(terms: list, c: Ordinal) -> None:
    for exp, n in c.terms:
        _gcnf_add_term(terms, exp, n, None)


def _gcnf(f: Form, active: dict[int, bool]) -> list:
    terms: list = []
    for p in f.parts:
        if isinstance(p, VarTerm):
            if not active.get(p.var, False):
                continue
            exp, lead, tail = _lead_split(p.delta)
            _gcnf_add_term(terms, exp, lead, p.var)
            if not tail.is_zero:
                _gcnf_add_ordinal(terms, tail)
        else:
            _gcnf_add_ordinal(terms, p)
    return terms


def _cmp_gcnf(a: list, b: list) -> Comparison | None:
    i = j = 0
    while i < len(a) or j < len(b):
        if i >= len(a):
            return Comparison.LESS
        if j >= len(b):
            return Comparison.GREATER
        ea, ca, xa = a[i]
        eb, cb, xb = b[j]
        c = compare(ea, eb)
        if c is Comparison.GREATER:
            return Comparison.GREATER
        if c is Comparison.LESS:
            return Comparison.LESS
        dc = ca - cb
        keys = set(xa) | set(xb)
        dv = {v: xa.get(v, 0) - xb.get(v, 0) for v in keys}
        if dc == 0 and all(d == 0 for d in dv.values()):
            i += 1
            j += 1
            continue
        if dc > 0 and all(d >= 0 for d in dv.values()):
            return Comparison.GREATER
        if dc < 0 and all(d <= 0 for d in dv.values()):
            return Comparison.LESS
        return None
    return Comparison.EQUAL


def order_verdict(f: Form, g: Form) -> Comparison | None:
    """Comparison valid for every assignment K >= 0, or None."""
    if form_is_const(f) and form_is_const(g):
        return compare(form_value(f), form_value(g))
    vs = sorted(set(form_vars(f)) | set(form_vars(g)))
    if len(vs) > 6:
        return None
    verdict: Comparison | None = None
    for mask in product((False, True), repeat=len(vs)):
        active = dict(zip(vs, mask))
        v = _cmp_gcnf(_gcnf(f, active), _gcnf(g, active))
        if v is None:
            return None
        if verdict is None:
            verdict = v
        elif verdict is not v:
            return None
    return verdict


def eq_verdict(f: Form, g: Form) -> tuple[str, int | None]:
    """("always" | "never" | "varies", hit).

    hit is the single assignment index at which a monotone one-variable
    form meets a constant, when that can be pinned down; it feeds the
    retry suppression in the period search and has no soundness role.
    """
    v = order_verdict(f, g)
    if v is Comparison.EQUAL:
        return ("always", None)
    if v is not None:
        return ("never", None)
    fv, gv = form_vars(f), form_vars(g)
    if fv and gv:
        return ("varies", None)
    varying, constant = (f, g) if fv else (g, f)
    names = form_vars(varying)
    if len(names) != 1 or not form_is_const(constant):
        return ("varies", None)
    var = names[0]
    c = form_value(constant)
    # galloping search for the first k with varying(k) >= c; the form is
    # strictly increasing in its variable, so equality holds at most once
    lo, hi = 0, 1
    while compare(form_value(varying, {var: from_int(hi)}), c) is Comparison.LESS:
        lo, hi = hi, hi * 2
        if hi > 2**40:
            return ("varies", None)
    while lo < hi:
        mid = (lo + hi) // 2
        if compare(form_value(varying, {var: from_int(mid)}), c) is Comparison.LESS:
            lo = mid + 1
        else:
            hi = mid
    if form_value(varying, {var: from_int(lo)}) == c:
        return ("varies", lo)
    return ("never", None)


def min_form(forms: list[Form]) -> Form | None:
    """Least form under the all-assignments order, None if incomparable."""
    best = forms[0]
    for f in forms[1:]:
        v = order_verdict(f, best)
        if v is None:
            return None
        if v is Comparison.LESS:
            best = f
    return best
