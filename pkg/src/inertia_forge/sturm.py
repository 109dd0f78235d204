"""Inertia oracle: characteristic polynomial + Sturm root counting.

Independent of the congruence-diagonalization route in linalg.  The matrix
is scaled to integers (positive scale, so eigenvalue signs survive), the
characteristic polynomial is computed by the Faddeev-LeVerrier recurrence
in exact integer arithmetic, and positive/negative root counts (with
multiplicity, via square-free decomposition) come from Sturm chains.

Integer polynomials are lists of coefficients, low order first, with no
trailing zeros.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .linalg import DimensionMismatch, Inertia, Mat, NotSymmetric

IntPoly = list[int]


def _trim(p: IntPoly) -> IntPoly:
    while p and p[-1] == 0:
        p.pop()
    return p


def _degree(p: IntPoly) -> int:
    return len(p) - 1


def _derivative(p: IntPoly) -> IntPoly:
    return _trim([i * c for i, c in enumerate(p)][1:])


def _content(p: IntPoly) -> int:
    g = 0
    for c in p:
        g = gcd(g, abs(c))
    return g or 1


def _primitive(p: IntPoly) -> IntPoly:
    """Divide by the (positive) content; preserves all signs."""
    g = _content(p)
    return [c // g for c in p]


def _pseudo_rem(a: IntPoly, b: IntPoly) -> IntPoly:
    """lc(b)^(deg a - deg b + 1) * a  mod  b, entirely over the integers."""
    r = a[:]
    lb = b[-1]
    db = _degree(b)
    steps = _degree(a) - db + 1
    for _ in range(steps):
        dr = _degree(r)
        if dr < db or not r:
            r = [c * lb for c in r]
            continue
        lead = r[-1]
        r = [c * lb for c in r[:-1]]
        shift = dr - db
        for i, c in enumerate(b[:-1]):
            r[shift + i] -= lead * c
        _trim(r)
    return _trim(r)


def _exact_div(a: IntPoly, b: IntPoly) -> IntPoly:
    """Quotient a/b for a known multiple; rational long division, checked."""
    r = [Fraction(c) for c in a]
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    db = _degree(b)
    lb = Fraction(b[-1])
    while len(r) - 1 >= db and any(x != 0 for x in r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < db:
            break
        f = r[-1] / lb
        shift = len(r) - 1 - db
        q[shift] = f
        for i, c in enumerate(b):
            r[shift + i] -= f * c
        r.pop()
    if any(x != 0 for x in r):
        raise ArithmeticError("inexact polynomial division")
    den = 1
    for x in q:
        den = den * x.denominator // gcd(den, x.denominator)
    return _trim([int(x * den) for x in q])


def _gcd_poly(a: IntPoly, b: IntPoly) -> IntPoly:
    """Primitive PRS gcd, normalized to positive leading coefficient."""
    a, b = _primitive(_trim(a[:])), _primitive(_trim(b[:]))
    if _degree(a) < _degree(b):
        a, b = b, a
    while b:
        r = _pseudo_rem(a, b)
        a, b = b, _primitive(r) if r else []
    if a and a[-1] < 0:
        a = [-c for c in a]
    return a


def _squarefree_decomposition(p: IntPoly) -> list[tuple[IntPoly, int]]:
    """[(f_i, i)] with p = prod f_i^i up to a constant, each f_i square-free."""
    if _degree(p) < 1:
        return []
    g = _gcd_poly(p, _derivative(p))
    c = _exact_div(p, g)
    out = []
    i = 1
    while _degree(c) > 0:
        y = _gcd_poly(g, c)
        f = _exact_div(c, y)
        if _degree(f) > 0:
            out.append((_primitive(f), i))
        c = y
        g = _exact_div(g, y)
        i += 1
    return out


def _sturm_chain(q: IntPoly) -> list[IntPoly]:
    """Sturm chain of a square-free polynomial, sign-faithful."""
    chain = [_primitive(q[:]), _primitive(_derivative(q))]
    while _degree(chain[-1]) > 0:
        a, b = chain[-2], chain[-1]
        mult = b[-1] ** (_degree(a) - _degree(b) + 1)
        r = _pseudo_rem(a, b)
        if not r:
            raise ArithmeticError("zero remainder in Sturm chain of a square-free polynomial")
        if mult < 0:
            r = [-c for c in r]
        chain.append(_primitive([-c for c in r]))
    return chain


def _variations(signs) -> int:
    seq = [s for s in signs if s != 0]
    return sum(1 for u, v in zip(seq, seq[1:]) if u * v < 0)


def _sign_at_zero(p: IntPoly) -> int:
    return 0 if not p else (1 if p[0] > 0 else -1 if p[0] < 0 else 0)


def _sign_at_pinf(p: IntPoly) -> int:
    return 1 if p[-1] > 0 else -1


def _sign_at_minf(p: IntPoly) -> int:
    s = _sign_at_pinf(p)
    return s if _degree(p) % 2 == 0 else -s


def _count_roots(q: IntPoly) -> tuple[int, int]:
    """(number of roots in (0, inf), number in (-inf, 0)) of square-free q."""
    if _degree(q) < 1:
        return (0, 0)
    chain = _sturm_chain(q)
    v_zero = _variations([_sign_at_zero(p) for p in chain])
    v_pinf = _variations([_sign_at_pinf(p) for p in chain])
    v_minf = _variations([_sign_at_minf(p) for p in chain])
    return (v_zero - v_pinf, v_minf - v_zero)


def _require_symmetric(a: Mat) -> int:
    n = len(a)
    if any(len(row) != n for row in a):
        raise DimensionMismatch("matrix must be square")
    for i in range(n):
        for j in range(i + 1, n):
            if a[i][j] != a[j][i]:
                raise NotSymmetric(f"entry ({i + 1},{j + 1}) != ({j + 1},{i + 1})")
    return n


def _integer_scaled(a: Mat) -> list[list[int]]:
    den = 1
    for row in a:
        for x in row:
            d = x.denominator
            den = den * d // gcd(den, d)
    return [[int(x.numerator * (den // x.denominator)) for x in row] for row in a]


def _charpoly_int(m: list[list[int]]) -> IntPoly:
    """det(lambda*I - M) for integer M; Faddeev-LeVerrier, exact divisions."""
    n = len(m)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    work = [[1 if i == j else 0 for j in range(n)] for i in range(n)]  # M_0 = I
    for k in range(1, n + 1):
        prod = [[sum(m[i][t] * work[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        tr = sum(prod[i][i] for i in range(n))
        if tr % k != 0:
            raise ArithmeticError("trace not divisible in Faddeev-LeVerrier step")
        c = -(tr // k)
        coeffs[n - k] = c
        for i in range(n):
            prod[i][i] += c
        work = prod
    return coeffs


def charpoly(a: Mat) -> tuple[Fraction, ...]:
    """Coefficients of det(lambda*I - A), constant term first."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise DimensionMismatch("matrix must be square")
    den = 1
    for row in a:
        for x in row:
            d = x.denominator
            den = den * d // gcd(den, d)
    scaled = _charpoly_int(_integer_scaled(a))
    # det(lambda I - A) = det(mu I - dA) / d^n at mu = d*lambda
    return tuple(Fraction(c, den ** (n - i)) for i, c in enumerate(scaled))


def inertia_sturm(a: Mat) -> Inertia:
    """Inertia from the characteristic polynomial and Sturm root counts."""
    n = _require_symmetric(a)
    if n == 0:
        return Inertia(0, 0, 0)
    coeffs = _charpoly_int(_integer_scaled(a))
    zero = 0
    while coeffs[zero] == 0:
        zero += 1
    reduced = coeffs[zero:]
    pos = neg = 0
    for factor, mult in _squarefree_decomposition(reduced):
        p_cnt, n_cnt = _count_roots(factor)
        pos += mult * p_cnt
        neg += mult * n_cnt
    if pos + neg + zero != n:
        raise ArithmeticError("root counts do not add up to the matrix dimension")
    return Inertia(pos, neg, zero)
