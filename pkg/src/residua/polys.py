"""Polynomials over F_p and the rational function field F_p(t).

A polynomial is a tuple of ints in [0, p), leading coefficient first,
which is the layout sympy's ``galoistools`` works with.  The zero
polynomial is the empty tuple.
"""

from __future__ import annotations

import re
from functools import lru_cache

from sympy.polys import galoistools as gf
from sympy.polys.domains import ZZ

ZERO: tuple = ()
ONE: tuple = (1,)
T: tuple = (1, 0)


def _tup(coeffs) -> tuple:
    return tuple(int(c) for c in coeffs)


def norm(f, p: int) -> tuple:
    return _tup(gf.gf_strip([c % p for c in f]))


def add(f, g, p):
    return _tup(gf.gf_add(list(f), list(g), p, ZZ))


def sub(f, g, p):
    return _tup(gf.gf_sub(list(f), list(g), p, ZZ))


def mul(f, g, p):
    return _tup(gf.gf_mul(list(f), list(g), p, ZZ))


def neg(f, p):
    return _tup(gf.gf_neg(list(f), p, ZZ))


def divmod_(f, g, p):
    q, r = gf.gf_div(list(f), list(g), p, ZZ)
    return _tup(q), _tup(r)


def rem(f, g, p):
    return _tup(gf.gf_rem(list(f), list(g), p, ZZ))


def quo(f, g, p):
    return _tup(gf.gf_quo(list(f), list(g), p, ZZ))


def monic(f, p) -> tuple[int, tuple]:
    """Split ``f`` into (leading coefficient, monic part)."""
    if not f:
        return 0, ZERO
    lc, m = gf.gf_monic(list(f), p, ZZ)
    return int(lc), _tup(m)


def gcd(f, g, p):
    return _tup(gf.gf_gcd(list(f), list(g), p, ZZ))


def xgcd(f, g, p):
    """Return (h, s, t) with s*f + t*g = h, h monic."""
    s, t, h = gf.gf_gcdex(list(f), list(g), p, ZZ)
    return _tup(h), _tup(s), _tup(t)


def power(f, e: int, p):
    return _tup(gf.gf_pow(list(f), e, p, ZZ))


def degree(f) -> int:
    return len(f) - 1


def const(c: int, p: int) -> tuple:
    c %= p
    return (c,) if c else ZERO


def multiplicity(f, s, p) -> int:
    """Largest e with s^e dividing the nonzero polynomial f."""
    e = 0
    while True:
        q, r = divmod_(f, s, p)
        if r:
            return e
        f, e = q, e + 1


@lru_cache(maxsize=64)
def is_irreducible(f: tuple, p: int) -> bool:
    return degree(f) >= 1 and bool(gf.gf_irreducible_p(list(f), p, ZZ))


MAX_FACTOR_DEGREE = 6


def factor(f, p) -> dict:
    """Monic irreducible factorization of a nonzero polynomial."""
    if degree(f) > MAX_FACTOR_DEGREE:
        raise ValueError(f"factorization limited to degree <= {MAX_FACTOR_DEGREE}")
    _, fs = gf.gf_factor(list(f), p, ZZ)
    return {_tup(g): e for g, e in fs}


def to_text(f) -> str:
    if not f:
        return "0"
    terms = []
    d = degree(f)
    for i, c in enumerate(f):
        if not c:
            continue
        e = d - i
        if e == 0:
            terms.append(str(c))
            continue
        mono = "t" if e == 1 else f"t^{e}"
        terms.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(terms)


def key_text(f) -> str:
    """Render a polynomial as a factor, bracketed when it is a sum."""
    s = to_text(f)
    return f"({s})" if "+" in s else s


_TERM = re.compile(r"^(?:(\d+)\*?)?(t(?:\^(\d+))?)?$")


def parse_poly(text: str, p: int) -> tuple:
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    coeffs: dict[int, int] = {}
    for sign, term in re.findall(r"([+-]?)([^+-]+)", s):
        m = _TERM.match(term)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise ValueError(f"bad polynomial term {term!r}")
        c = int(m.group(1)) if m.group(1) is not None else 1
        e = 0 if m.group(2) is None else int(m.group(3) or 1)
        if sign == "-":
            c = -c
        coeffs[e] = coeffs.get(e, 0) + c
    top = max(coeffs)
    return norm([coeffs.get(e, 0) for e in range(top, -1, -1)], p)


class RatFunc:
    """Element of F_p(t) in lowest terms with a monic denominator."""

    __slots__ = ("p", "num", "den", "_hash")

    def __init__(self, num, den=ONE, p: int = 2, *, reduced: bool = False):
        self.p = p
        if not reduced:
            num, den = norm(num, p), norm(den, p)
            if not den:
                raise ZeroDivisionError("zero denominator")
            if not num:
                den = ONE
            else:
                g = gcd(num, den, p)
                if g != ONE:
                    num, den = quo(num, g, p), quo(den, g, p)
                lc, den = monic(den, p)
                if lc != 1:
                    num = mul(num, const(pow(lc, -1, p), p), p)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def const(cls, c: int, p: int) -> "RatFunc":
        return cls(const(c, p), ONE, p, reduced=True)

    @property
    def numerator(self) -> tuple:
        return self.num

    @property
    def denominator(self) -> tuple:
        return self.den

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, int):
            return RatFunc.const(other, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.p
        if self.den == o.den:
            return RatFunc(add(self.num, o.num, p), self.den, p)
        return RatFunc(add(mul(self.num, o.den, p), mul(o.num, self.den, p), p),
                       mul(self.den, o.den, p), p)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(neg(self.num, self.p), self.den, self.p, reduced=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.p
        return RatFunc(mul(self.num, o.num, p), mul(self.den, o.den, p), p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.num:
            raise ZeroDivisionError("division by zero in F_p(t)")
        p = self.p
        return RatFunc(mul(self.num, o.den, p), mul(self.den, o.num, p), p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, int):
            other = RatFunc.const(other, self.p)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.p == other.p and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.num, self.den))
        return self._hash

    def __str__(self):
        if self.den == ONE:
            return to_text(self.num)
        n = to_text(self.num)
        if "+" in n:
            n = f"({n})"
        return f"{n}/{key_text(self.den)}"

    def __repr__(self):
        return f"RatFunc({self}, p={self.p})"


def parse_ratfunc(text: str, p: int) -> RatFunc:
    """Parse ``num`` or ``num/den``; either side may be bracketed."""
    s = text.replace(" ", "")
    depth = 0
    cut = -1
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0:
            cut = i
    parts = [s] if cut < 0 else [s[:cut], s[cut + 1:]]
    polys = []
    for part in parts:
        if part.startswith("(") and part.endswith(")"):
            part = part[1:-1]
        polys.append(parse_poly(part, p))
    return RatFunc(polys[0], polys[1] if len(polys) == 2 else ONE, p)
