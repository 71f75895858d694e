"""Concrete Prüfer extensions A ⊆ B and their fractional ideals.

Every supported extension is a localization A = D_S of a Euclidean
domain D (ℤ or F_p[t]) inside its fraction field B, or a finite product
of such.  An invertible ideal is principal, so it is stored by a
canonical generator: a positive (resp. monic) element of B whose
numerator and denominator are supported on S.  ``to_lelem`` turns a
generator into its exponent vector in Λ = M*.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache, reduce

import gmpy2

from . import lgroup, polys
from .arith import crt2, factor_int, mpq, mpz
from .lgroup import LElem, LGroup
from .lmonoid import LMonElem, decompose, embed, lmon_ops, omega
from .report import Report

_MPQ = type(mpq())


class IntDomain:
    """ℤ with ℚ as fraction field."""

    name = "Z"
    zero = mpq(0)
    one = mpq(1)
    d_one = mpz(1)

    def __eq__(self, other):
        return isinstance(other, IntDomain)

    def __hash__(self):
        return hash("Z")

    def coerce(self, x):
        return x if isinstance(x, _MPQ) else mpq(x)

    def num(self, x):
        return x.numerator

    def den(self, x):
        return x.denominator

    def frac(self, n, d=1):
        return mpq(n, d)

    def gcd(self, a, b):
        return gmpy2.gcd(a, b)

    def lcm(self, a, b):
        return gmpy2.lcm(a, b)

    def normal(self, a):
        return abs(a)

    def mod(self, a, m):
        return a % m

    def is_unit(self, a):
        return a == 1 or a == -1

    def inv_mod(self, a, m):
        if m == 1:
            return mpz(0)
        return gmpy2.invert(a, m)

    def crt2(self, a, m, b, n):
        return crt2(a, m, b, n)

    def multiplicity(self, a, s):
        if not a:
            raise ValueError("multiplicity of zero")
        _, e = gmpy2.remove(a, s)
        return int(e)

    def strip(self, a, s):
        r, _ = gmpy2.remove(a, s)
        return r

    def factor(self, a):
        return factor_int(int(a))

    def key_elem(self, k):
        return mpz(k)

    def size(self, m) -> int:
        return int(m)

    def residues(self, m):
        return (mpz(i) for i in range(int(m)))

    def parse(self, text: str):
        return mpq(text.strip())

    def fmt(self, x) -> str:
        return str(x)

    def key_text(self, k) -> str:
        return str(k)

    def sym(self, a, m):
        """Symmetric residue in (-m/2, m/2]."""
        a %= m
        return a - m if 2 * a > m else a


class PolyDomain:
    """F_p[t] with F_p(t) as fraction field."""

    def __init__(self, p: int):
        if p < 2 or factor_int(p) != {p: 1}:
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}[t]"
        self.zero = polys.RatFunc.const(0, p)
        self.one = polys.RatFunc.const(1, p)
        self.d_one = polys.ONE

    def __eq__(self, other):
        return isinstance(other, PolyDomain) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def coerce(self, x):
        if isinstance(x, polys.RatFunc):
            return x
        if isinstance(x, int):
            return polys.RatFunc.const(x, self.p)
        if isinstance(x, tuple):
            return polys.RatFunc(x, polys.ONE, self.p)
        raise TypeError(f"cannot coerce {x!r} into F{self.p}(t)")

    def num(self, x):
        return x.num

    def den(self, x):
        return x.den

    def frac(self, n, d=polys.ONE):
        return polys.RatFunc(n, d, self.p)

    def gcd(self, a, b):
        return polys.gcd(a, b, self.p)

    def lcm(self, a, b):
        g = self.gcd(a, b)
        return polys.monic(polys.quo(polys.mul(a, b, self.p), g, self.p), self.p)[1]

    def normal(self, a):
        return polys.monic(a, self.p)[1]

    def mod(self, a, m):
        return polys.rem(a, m, self.p)

    def is_unit(self, a):
        return len(a) == 1

    def inv_mod(self, a, m):
        if len(m) == 1:
            return polys.ZERO
        h, s, _ = polys.xgcd(a, m, self.p)
        if h != polys.ONE:
            raise ValueError("not invertible")
        return polys.rem(s, m, self.p)

    def crt2(self, a, m, b, n):
        p = self.p
        g, s, _ = polys.xgcd(m, n, p)
        diff = polys.sub(b, a, p)
        k, r = polys.divmod_(diff, g, p)
        if r:
            raise ValueError("inconsistent congruences")
        n_g = polys.quo(n, g, p)
        l = polys.mul(polys.quo(m, g, p), n, p)
        t = polys.rem(polys.mul(k, s, p), n_g, p) if len(n_g) > 1 else polys.ZERO
        z = polys.rem(polys.add(a, polys.mul(m, t, p), p), l, p)
        return z, polys.monic(l, p)[1]

    def multiplicity(self, a, s):
        return polys.multiplicity(a, s, self.p)

    def strip(self, a, s):
        e = polys.multiplicity(a, s, self.p)
        return polys.quo(a, polys.power(s, e, self.p), self.p) if e else a

    def factor(self, a):
        return polys.factor(self.normal(a), self.p)

    def key_elem(self, k):
        return k

    def size(self, m) -> int:
        return self.p ** polys.degree(m)

    def residues(self, m):
        deg = polys.degree(m)
        for coeffs in itertools.product(range(self.p), repeat=deg):
            yield polys.norm(coeffs, self.p)

    def parse(self, text: str):
        return polys.parse_ratfunc(text, self.p)

    def fmt(self, x) -> str:
        return str(x)

    def key_text(self, k) -> str:
        return polys.key_text(k)

    def sym(self, a, m):
        return polys.rem(a, m, self.p)


class Ext:
    """Common surface of extension descriptors."""

    group: LGroup

    def in_A(self, x) -> bool:
        return self.contains(self.unit_ideal(), x)


class LocalExt(Ext):
    """A = D localized at the primes in S (all primes when S is None)."""

    def __init__(self, domain, S=None):
        self.domain = domain
        if S is not None:
            S = tuple(sorted(set(S), key=lambda s: (len(s), s) if isinstance(s, tuple) else (0, s)))
            for s in S:
                if isinstance(domain, IntDomain):
                    if factor_int(s) != {s: 1}:
                        raise ValueError(f"{s} is not prime")
                elif not (polys.is_irreducible(s, domain.p) and polys.monic(s, domain.p)[0] == 1):
                    raise ValueError(f"{polys.to_text(s)} is not monic irreducible")
        elif isinstance(domain, PolyDomain):
            raise ValueError("polynomial extensions need an explicit localizing set")
        self.S = S
        self._zinq = S is None and isinstance(domain, IntDomain)
        if S is None:
            self.group = lgroup.rationals()
        elif isinstance(domain, PolyDomain):
            self.group = lgroup.pointwise(S, "poly", domain.p)
        else:
            self.group = lgroup.pointwise(S, "rational")
        self._hash = hash((domain, S))

    def __eq__(self, other):
        return isinstance(other, LocalExt) and other.domain == self.domain and other.S == self.S

    def __hash__(self):
        return self._hash

    def __str__(self):
        d = self.domain
        if isinstance(d, IntDomain):
            if self.S is None:
                return "Z⊂Q"
            return "Zloc{" + ",".join(map(str, self.S)) + "}"
        return f"F{d.p}[t]loc{{" + ",".join(polys.to_text(s) for s in self.S) + "}"

    @property
    def locally_linear(self) -> bool:
        return self.S is not None and len(self.S) == 1

    # ring B
    def coerce(self, x):
        return self.domain.coerce(x)

    def zero(self):
        return self.domain.zero

    def one(self):
        return self.domain.one

    def add(self, x, y):
        return x + y

    def sub(self, x, y):
        return x - y

    def mul(self, x, y):
        return x * y

    def neg(self, x):
        return -x

    def div(self, x, y):
        return x / y

    def is_zero(self, x) -> bool:
        return not x

    def parse(self, text: str):
        return self.domain.parse(text)

    def fmt(self, x) -> str:
        return self.domain.fmt(x)

    # ideals
    def spart(self, a):
        """S-part of a nonzero element of D, normalized."""
        d = self.domain
        if self.S is None:
            return d.normal(a)
        out = d.d_one
        if isinstance(d, IntDomain):
            for s in self.S:
                e = d.multiplicity(a, s)
                if e:
                    out *= mpz(s) ** e
            return out
        for s in self.S:
            e = d.multiplicity(a, s)
            if e:
                out = polys.mul(out, polys.power(s, e, d.p), d.p)
        return out

    def unit_ideal(self):
        return self.domain.one

    def ideal(self, x):
        """Canonical generator of A·x (zero for x = 0)."""
        d = self.domain
        if not x:
            return d.zero
        if self.S is None and isinstance(d, IntDomain):
            return abs(x)
        return d.frac(self.spart(d.num(x)), self.spart(d.den(x)))

    def igcd(self, a, b):
        """Generator of A·a + A·b."""
        if not a:
            return self.ideal(b)
        if not b:
            return self.ideal(a)
        if self._zinq:
            ad, bd = a.denominator, b.denominator
            if ad == 1 and bd == 1:
                return mpq(gmpy2.gcd(a.numerator, b.numerator))
            return mpq(gmpy2.gcd(a.numerator * bd, b.numerator * ad), ad * bd)
        d = self.domain
        an, ad, bn, bd = d.num(a), d.den(a), d.num(b), d.den(b)
        if isinstance(d, IntDomain):
            g = mpq(gmpy2.gcd(an * bd, bn * ad), ad * bd)
            return g if self.S is None else self.ideal(g)
        p = d.p
        g = d.frac(d.gcd(polys.mul(an, bd, p), polys.mul(bn, ad, p)), polys.mul(ad, bd, p))
        return self.ideal(g)

    def ilcm(self, a, b):
        """Generator of A·a ∩ A·b for nonzero generators."""
        return self.ideal(a * b / self.igcd(a, b))

    def imul(self, a, b):
        return a * b

    def idiv(self, a, b):
        return a / b

    def is_integral_ideal(self, g) -> bool:
        return self.domain.is_unit(self.domain.den(g))

    def contains(self, g, x) -> bool:
        """x ∈ g·A."""
        if not x:
            return True
        d = self.domain
        r = x / g
        den = d.den(r)
        if self.S is None:
            return d.is_unit(den)
        return d.is_unit(self.spart(den))

    def _scale(self, *elems):
        """Common S-denominator L of the given elements (an element of D)."""
        d = self.domain
        if isinstance(d, IntDomain):
            L = mpz(1)
            for x in elems:
                L = gmpy2.lcm(L, x.denominator)
            return L if self.S is None else self.spart(L)
        L = polys.ONE
        for x in elems:
            L = d.lcm(L, x.den)
        return d.frac(self.spart(L))

    def _lower(self, x, L, M):
        """Image of x·L (an element of A) in D/M."""
        d = self.domain
        xl = x * L
        n, den = d.num(xl), d.den(xl)
        if d.is_unit(den):
            if isinstance(d, IntDomain):
                return n % M
            return d.mod(polys.mul(n, polys.const(pow(den[0], -1, d.p), d.p), d.p), M)
        if isinstance(d, IntDomain):
            return n * d.inv_mod(den, M) % M
        return d.mod(polys.mul(n, d.inv_mod(den, M), d.p), M)

    def reduce(self, x, g):
        """Canonical representative of x mod g·A."""
        d = self.domain
        if self._zinq:
            if x.denominator == 1 and g.denominator == 1:
                return mpq(x.numerator % g.numerator)
            L = gmpy2.lcm(x.denominator, g.denominator)
            M = g.numerator * (L // g.denominator)
            return mpq(x.numerator * (L // x.denominator) % M, L)
        L = self._scale(x, g)
        M = d.num(g * L)
        return d.frac(self._lower(x, L, M)) / L

    def crt(self, pairs):
        """z with z ≡ x mod g for every (x, g); data must be consistent."""
        d = self.domain
        L = self._scale(*(e for pair in pairs for e in pair))
        z, m = None, None
        for x, g in pairs:
            M = d.num(g * L)
            c = self._lower(x, L, M)
            if z is None:
                z, m = c, M
            else:
                z, m = d.crt2(z, m, c, M)
        return d.frac(z) / L

    def unit_inverse(self, u, g):
        """z ∈ A with u·z ≡ 1 mod g·A, for u ∈ A coprime to the integral g."""
        d = self.domain
        M = d.num(g)
        n, den = d.num(u), d.den(u)
        if isinstance(d, IntDomain):
            return mpq(den * d.inv_mod(n, M) % M if M != 1 else 0)
        return d.frac(d.mod(polys.mul(den, d.inv_mod(n, M), d.p), M))

    def to_lelem(self, g) -> LElem:
        return _to_lelem(self, g)

    def from_lelem(self, a: LElem):
        d = self.domain
        out = d.one
        for k, e in a.exps.items():
            out = out * d.coerce(d.key_elem(k)) ** e if isinstance(d, IntDomain) else \
                out * _rpow(d.frac(k), e)
        return out

    def residues(self, g):
        """Canonical representatives of A/gA for an integral generator g."""
        d = self.domain
        return (d.frac(r) for r in d.residues(d.num(g)))

    def quotient_size(self, g) -> int:
        return self.domain.size(self.domain.num(g))

    def sym(self, x, g):
        d = self.domain
        return d.frac(d.sym(d.num(x), d.num(g)))


def _rpow(x, e):
    if e >= 0:
        out = x
        for _ in range(e - 1):
            out = out * x
        return out if e else x / x
    return 1 / _rpow(x, -e)


@lru_cache(maxsize=1 << 16)
def _to_lelem(ext: LocalExt, g) -> LElem:
    d = ext.domain
    n, den = d.num(g), d.den(g)
    exps: dict = {}
    if ext.S is None:
        for k, e in d.factor(n).items():
            exps[k] = e
        for k, e in d.factor(den).items():
            exps[k] = exps.get(k, 0) - e
    else:
        for s in ext.S:
            e = (d.multiplicity(n, s) if len(n) else 0) if not isinstance(d, IntDomain) \
                else d.multiplicity(n, s)
            e -= d.multiplicity(den, s)
            if e:
                exps[s] = e
    return LElem(ext.group, {k: v for k, v in exps.items() if v})


class ProductExt(Ext):
    """Finite product of extensions; elements and generators are tuples."""

    def __init__(self, parts):
        flat = []
        for p in parts:
            flat.extend(p.parts if isinstance(p, ProductExt) else [p])
        self.parts = tuple(flat)
        self.group = lgroup.product(*(p.group for p in self.parts))
        self._hash = hash(self.parts)

    def __eq__(self, other):
        return isinstance(other, ProductExt) and other.parts == self.parts

    def __hash__(self):
        return self._hash

    def __str__(self):
        return "prod(" + ", ".join(map(str, self.parts)) + ")"

    @property
    def locally_linear(self) -> bool:
        return False

    def _each(self, name, *args):
        return tuple(getattr(p, name)(*a) for p, a in zip(self.parts, zip(*args)))

    def coerce(self, x):
        if not isinstance(x, tuple):
            return tuple(p.coerce(x) for p in self.parts)
        return self._each("coerce", x)

    def zero(self):
        return tuple(p.zero() for p in self.parts)

    def one(self):
        return tuple(p.one() for p in self.parts)

    def add(self, x, y):
        return self._each("add", x, y)

    def sub(self, x, y):
        return self._each("sub", x, y)

    def mul(self, x, y):
        return self._each("mul", x, y)

    def neg(self, x):
        return self._each("neg", x)

    def div(self, x, y):
        return self._each("div", x, y)

    def is_zero(self, x) -> bool:
        return all(p.is_zero(c) for p, c in zip(self.parts, x))

    def parse(self, text: str):
        s = text.strip()
        if not (s.startswith("(") and s.endswith(")")):
            return self.coerce(self.parts[0].parse(s)) if all(
                isinstance(p.domain, IntDomain) for p in self.parts) else _bad(s)
        chunks = s[1:-1].split("|")
        if len(chunks) != len(self.parts):
            raise ValueError("wrong number of components")
        return tuple(p.parse(c) for p, c in zip(self.parts, chunks))

    def fmt(self, x) -> str:
        return "(" + " | ".join(p.fmt(c) for p, c in zip(self.parts, x)) + ")"

    def unit_ideal(self):
        return self.one()

    def ideal(self, x):
        return self._each("ideal", x)

    def igcd(self, a, b):
        return self._each("igcd", a, b)

    def ilcm(self, a, b):
        return self._each("ilcm", a, b)

    def imul(self, a, b):
        return self._each("imul", a, b)

    def idiv(self, a, b):
        return self._each("idiv", a, b)

    def is_integral_ideal(self, g) -> bool:
        return all(p.is_integral_ideal(c) for p, c in zip(self.parts, g))

    def contains(self, g, x) -> bool:
        return all(p.contains(a, b) for p, a, b in zip(self.parts, g, x))

    def reduce(self, x, g):
        return self._each("reduce", x, g)

    def crt(self, pairs):
        return tuple(p.crt([(x[i], g[i]) for x, g in pairs]) for i, p in enumerate(self.parts))

    def unit_inverse(self, u, g):
        return self._each("unit_inverse", u, g)

    def to_lelem(self, g) -> LElem:
        return lgroup._glue(self.group, [p.to_lelem(c) for p, c in zip(self.parts, g)])

    def from_lelem(self, a: LElem):
        return tuple(p.from_lelem(c) for p, c in zip(self.parts, lgroup._split(a)))

    def residues(self, g):
        return itertools.product(*(p.residues(c) for p, c in zip(self.parts, g)))

    def quotient_size(self, g) -> int:
        out = 1
        for p, c in zip(self.parts, g):
            out *= p.quotient_size(c)
        return out

    def sym(self, x, g):
        return self._each("sym", x, g)


def _bad(s):
    raise ValueError(f"expected a product element like (a | b), got {s!r}")


# descriptors

def zinq() -> LocalExt:
    return LocalExt(IntDomain())


def zloc(*primes: int) -> LocalExt:
    return LocalExt(IntDomain(), primes)


def fptloc(p: int, *gens) -> LocalExt:
    dom = PolyDomain(p)
    return LocalExt(dom, [polys.parse_poly(g, p) if isinstance(g, str) else g for g in gens])


def prod(*parts) -> ProductExt:
    return ProductExt(parts)


def _top_split(s: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in s:
        if ch in "({[":
            depth += 1
        elif ch in ")}]":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [c.strip() for c in out]


_FPT = re.compile(r"^F(\d+)\[t\]loc\{(.*)\}$")


def parse_ext(text: str) -> Ext:
    """Parse "Z⊂Q", "Zloc{2,3}", "F3[t]loc{t,t+1}" or "prod(A, B)"."""
    s = text.strip()
    if s in ("Z⊂Q", "ZinQ", "Z<Q", "Z"):
        return zinq()
    if s.startswith("Zloc{") and s.endswith("}"):
        body = s[5:-1].strip()
        if not body:
            raise ValueError("empty localizing set")
        return zloc(*(int(v) for v in body.split(",")))
    m = _FPT.match(s.replace(" ", ""))
    if m:
        p = int(m.group(1))
        return fptloc(p, *_top_split(m.group(2)))
    if s.startswith("prod(") and s.endswith(")"):
        return prod(*(parse_ext(c) for c in _top_split(s[5:-1])))
    raise ValueError(f"unknown extension descriptor {text!r}")


# modules and valuations

class _Zero:
    """The zero submodule (not invertible)."""

    def __repr__(self):
        return "ZERO"

    __str__ = __repr__


ZERO = _Zero()


@dataclass(frozen=True)
class ModuleGens:
    ext: Ext
    gens: tuple

    def __post_init__(self):
        if not self.gens:
            raise ValueError("a module needs at least one generator")
        object.__setattr__(self, "gens", tuple(self.ext.coerce(g) for g in self.gens))


def module_reduce(m: ModuleGens):
    """The A-module generated by ``m.gens`` as an element of Λ, or ZERO."""
    ext = m.ext
    g = reduce(ext.igcd, m.gens, ext.zero())
    if ext.is_zero(g):
        return ZERO
    if isinstance(ext, ProductExt) and any(p.is_zero(c) for p, c in zip(ext.parts, g)):
        raise ValueError("module is zero in some factor, hence not invertible")
    return ext.to_lelem(g)


def pm_valuation(ext: Ext, x) -> LMonElem:
    """𝔴(x): the module A·x as an element of Λ̂ (ω in zero factors)."""
    x = ext.coerce(x)
    if isinstance(ext, ProductExt):
        default, exps = [], {}
        for i, (p, c) in enumerate(zip(ext.parts, x)):
            if p.is_zero(c):
                default.append(float("inf"))
                continue
            default.append(0)
            for k, e in p.to_lelem(p.ideal(c)).exps.items():
                exps[(i, k)] = e
        return LMonElem.make(ext.group, tuple(default), exps)
    if ext.is_zero(x):
        return omega(ext.group)
    return embed(ext.to_lelem(ext.ideal(x)))


def what_hat(m: ModuleGens) -> LMonElem:
    """Meet of the valuations of the generators."""
    return reduce(lambda f, g: lmon_ops("meet", f, g),
                  (pm_valuation(m.ext, g) for g in m.gens))


def p2_witness(ext: Ext, x):
    """y ∈ A with x·y ∈ A and x·(1 − x·y) ∈ A."""
    x = ext.coerce(x)
    if isinstance(ext, ProductExt):
        return tuple(p2_witness(p, c) for p, c in zip(ext.parts, x))
    if ext.in_A(x):
        return ext.zero()
    d = ext.domain
    ds = ext.spart(d.den(x))
    # x = n' / ds with n' = x * ds a unit at the primes of ds
    n_prime = x * d.frac(ds)
    k = ext.unit_inverse(n_prime, d.frac(ds))
    k = ext.sym(k, d.frac(ds))
    return k * d.frac(ds)


def check_p2(ext: Ext, x, y) -> bool:
    x, y = ext.coerce(x), ext.coerce(y)
    xy = ext.mul(x, y)
    return ext.in_A(y) and ext.in_A(xy) and ext.in_A(ext.mul(x, ext.sub(ext.one(), xy)))


def is_manis_report(ext: Ext, sample) -> Report:
    """Which basis coordinates occur in some 𝔴(x)₋ with x ∈ B∖A."""
    covered = set()
    used = 0
    for x in sample:
        x = ext.coerce(x)
        if ext.in_A(x):
            continue
        used += 1
        _, minus = decompose(pm_valuation(ext, x))
        covered.update(minus.exps)
    keys = ext.group.all_keys()
    full = keys is not None and covered >= set(keys)
    return Report("manis_coverage", full if keys is not None else bool(covered) or not used,
                  {"covered": sorted(covered, key=lambda k: (len(str(k)), str(k))), "nonintegral_samples": used,
                   "full": full})


def complement_closed(ext: Ext, sample):
    """First pair in B∖A whose product lies in A, or None."""
    outside = [ext.coerce(x) for x in sample if not ext.in_A(ext.coerce(x))]
    for x in outside:
        for y in outside:
            if ext.in_A(ext.mul(x, y)):
                return x, y
    return None
