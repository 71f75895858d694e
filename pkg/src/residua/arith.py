"""Integer helpers: bounded factorization and exact rationals."""

from __future__ import annotations

from functools import lru_cache

import gmpy2
from sympy import factorint, primerange

mpq = gmpy2.mpq
mpz = gmpy2.mpz

# Largest cofactor, after removing primes below _SMALL, that we agree to
# factor.  Raise it with ``set_factor_bound``.
_FACTOR_BOUND = 10**15
_SMALL = 10**4
_SMALL_PRIMES = tuple(primerange(2, _SMALL))


class FactorBoundError(ValueError):
    """Raised when an integer is too large for the configured factor bound."""


def set_factor_bound(bound: int) -> None:
    global _FACTOR_BOUND
    _FACTOR_BOUND = int(bound)
    factor_int.cache_clear()


def factor_bound() -> int:
    return _FACTOR_BOUND


@lru_cache(maxsize=1 << 16)
def factor_int(n: int) -> dict[int, int]:
    """Prime factorization of |n| for nonzero n."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor 0")
    out = {}
    rest = mpz(n)
    for p in _SMALL_PRIMES:
        if p * p > rest:
            break
        rest, e = gmpy2.remove(rest, p)
        if e:
            out[p] = int(e)
    if rest == 1:
        return out
    if gmpy2.is_prime(rest, 50):
        out[int(rest)] = 1
        return out
    rest = int(rest)
    if rest > _FACTOR_BOUND:
        raise FactorBoundError(f"{n} has a cofactor {rest} beyond the factor bound {_FACTOR_BOUND}")
    out.update({int(p): int(e) for p, e in factorint(rest).items()})
    return out


def q(x) -> "gmpy2.mpq":
    """Coerce ints, strings and fractions to an exact rational."""
    if isinstance(x, type(mpq())):
        return x
    if isinstance(x, str):
        return mpq(x.strip())
    return mpq(x)


def is_rational(x) -> bool:
    return isinstance(x, (int, type(mpq()), type(mpz())))


def qgcd(a, b):
    """Generator of the Z-module aZ + bZ inside Q (nonnegative)."""
    if not a:
        return abs(q(b))
    if not b:
        return abs(q(a))
    a, b = q(a), q(b)
    an, ad, bn, bd = a.numerator, a.denominator, b.numerator, b.denominator
    return mpq(gmpy2.gcd(an * bd, bn * ad), ad * bd)


def crt2(a, m, b, n):
    """Solve z = a mod m, z = b mod n for consistent integer data."""
    g, s, _ = gmpy2.gcdext(m, n)
    diff = b - a
    if diff % g:
        raise ValueError("inconsistent congruences")
    l = m // g * n
    z = (a + m * (diff // g * s % (n // g))) % l
    return z, l
