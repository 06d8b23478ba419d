"""Exact real-root isolation for polynomials with rational coefficients.

Polynomials are plain lists of :class:`Fraction` coefficients, lowest degree
first.  Multiplicities come from Yun's square-free factorization; every
square-free factor is isolated with its own Sturm sequence, so bisection only
ever sees simple roots.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

Poly = list  # list[Fraction], low -> high


def trim(p: Sequence) -> Poly:
    out = list(p)
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(p: Sequence) -> int:
    return len(trim(p)) - 1


def to_fractions(p: Sequence) -> Poly:
    return [Fraction(c) for c in p]


def primitive(p: Sequence) -> Poly:
    """Scale by a positive rational so the coefficients are coprime integers."""
    p = trim(p)
    if not p:
        return []
    den = lcm(*(Fraction(c).denominator for c in p))
    ints = [int(Fraction(c) * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return [Fraction(c // g) for c in ints]


def evaluate(p: Sequence, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def sign_at(p: Sequence, x) -> int:
    v = evaluate(p, x)
    return (v > 0) - (v < 0)


def derivative(p: Sequence) -> Poly:
    return [k * c for k, c in enumerate(p)][1:]


def divmod_poly(a: Sequence, b: Sequence) -> tuple[Poly, Poly]:
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    db = len(b) - 1
    lead = b[-1]
    if len(rem) - 1 < db:
        return [], rem
    quot = [Fraction(0)] * (len(rem) - db)
    for k in range(len(rem) - 1 - db, -1, -1):
        coef = rem[k + db] / lead
        quot[k] = coef
        if coef:
            for j, bj in enumerate(b):
                rem[k + j] -= coef * bj
    return trim(quot), trim(rem[:db])


def gcd_poly(a: Sequence, b: Sequence) -> Poly:
    a, b = trim(a), trim(b)
    while b:
        _, r = divmod_poly(a, b)
        a, b = b, primitive(r)
    return primitive(a)


def square_free_factors(p: Sequence) -> list[tuple[Poly, int]]:
    """Yun's algorithm: ``p = c * prod f_i**i`` with each ``f_i`` square-free."""
    p = primitive(p)
    if len(p) <= 1:
        return []
    out = []
    dp = derivative(p)
    a = gcd_poly(p, dp)
    b, _ = divmod_poly(p, a)
    c, _ = divmod_poly(dp, a)
    d = [ci - bi for ci, bi in zip(_pad(c, len(b)), _pad(derivative(b), len(b)))]
    i = 1
    while degree(b) > 0:
        a = gcd_poly(b, d)
        if degree(a) > 0:
            out.append((a, i))
        b, _ = divmod_poly(b, a)
        c, _ = divmod_poly(d, a)
        d = [ci - bi for ci, bi in zip(_pad(c, len(b)), _pad(derivative(b), len(b)))]
        d = trim(d)
        i += 1
    return out


def _pad(p: Sequence, n: int) -> Poly:
    p = list(p)
    return p + [Fraction(0)] * (n - len(p))


def sturm_sequence(p: Sequence) -> list[Poly]:
    seq = [primitive(p), primitive(derivative(p))]
    while True:
        _, r = divmod_poly(seq[-2], seq[-1])
        if not r:
            break
        seq.append(primitive([-c for c in r]))
    return seq


def sign_changes(seq: Sequence[Poly], x) -> int:
    count, prev = 0, 0
    for q in seq:
        s = sign_at(q, x)
        if s == 0:
            continue
        if prev and s != prev:
            count += 1
        prev = s
    return count


def cauchy_bound(p: Sequence) -> Fraction:
    p = trim(p)
    lead = abs(p[-1])
    return 1 + max(abs(c) for c in p[:-1]) / lead if len(p) > 1 else Fraction(1)


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Smallest-denominator rational in the closed interval ``[lo, hi]`` (0 <= lo)."""
    if lo > hi:
        lo, hi = hi, lo
    fl = lo.numerator // lo.denominator
    if Fraction(fl) == lo:
        return Fraction(fl)
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    rest_lo, rest_hi = lo - fl, hi - fl
    # reciprocal swaps the interval ends
    return fl + 1 / simplest_between(1 / rest_hi, 1 / rest_lo)


def isolate_positive(f: Sequence, rel_width: float = 1e-12) -> list[tuple[Fraction, Fraction, bool]]:
    """Isolate and refine the positive roots of a square-free ``f``.

    Returns ``(lo, hi, exact)`` triples; when ``exact`` is true the root is
    rational and ``lo == hi`` equals it.
    """
    f = primitive(f)
    if degree(f) < 1:
        return []
    seq = sturm_sequence(f)
    bound = cauchy_bound(f)
    roots = []
    stack = [(Fraction(0), bound, sign_changes(seq, Fraction(0)), sign_changes(seq, bound))]
    while stack:
        a, b, va, vb = stack.pop()
        count = va - vb
        if count == 0:
            continue
        if count == 1:
            roots.append(_refine(f, a, b, rel_width))
            continue
        mid = _split_point(f, a, b)
        vm = sign_changes(seq, mid)
        stack.append((a, mid, va, vm))
        stack.append((mid, b, vm, vb))
    roots.sort(key=lambda r: r[0])
    return roots


def _split_point(f: Poly, a: Fraction, b: Fraction) -> Fraction:
    # a split point that is not itself a root keeps the Sturm counts clean
    for num, den in ((1, 2), (3, 7), (4, 7), (5, 11), (6, 11), (7, 13)):
        mid = a + (b - a) * num / den
        if sign_at(f, mid) != 0:
            return mid
    raise AssertionError("square-free polynomial vanished at six distinct split points")


def _refine(f: Poly, a: Fraction, b: Fraction, rel_width: float):
    # (a, b] holds exactly one simple root
    if degree(f) == 1:
        r = -f[0] / f[1]
        return (r, r, True)
    if sign_at(f, b) == 0:
        return (b, b, True)
    sa = sign_at(f, a)
    if sa == 0:
        # root at a itself would have been counted in the neighbouring interval
        a = a + (b - a) / 1024
        sa = sign_at(f, a)
    tol = Fraction(rel_width)
    probe = 16
    while b - a > tol * max(1, b):
        mid = (a + b) / 2
        sm = sign_at(f, mid)
        if sm == 0:
            return (mid, mid, True)
        if sm == sa:
            a = mid
        else:
            b = mid
        probe -= 1
        if probe == 0:
            probe = 16
            q = simplest_between(a, b)
            if q.denominator < 10**6 and sign_at(f, q) == 0:
                return (q, q, True)
    q = simplest_between(a, b)
    if sign_at(f, q) == 0:
        return (q, q, True)
    return (a, b, False)
