"""Residue models: the disjoint union of the quotients B/α.

A payload is ``(rep, gen)``: ``gen`` is the canonical generator of the
invertible ideal α and ``rep`` the canonical representative of the
class in B/α.  Levels are ideal generators, so lattice operations are
gcd/lcm and products of generators; ``to_lelem`` factors on demand.
"""

from __future__ import annotations

import random

import gmpy2

from .arith import mpq
from .lgroup import LElem
from .prufer import Ext, IntDomain, LocalExt, ProductExt, parse_ext
from .qsring import DomainError, NotIncident, QsModel


class ResidueModel(QsModel):
    superrigid = True
    median_flag = True
    lff = True
    complete = True

    def __init__(self, ext: Ext, height: int = 20, max_exp: int = 3,
                 primes=(2, 3, 5, 7, 11, 13)):
        self.ext = ext
        self.group = ext.group
        self.locally_linear = ext.locally_linear
        self.name = f"res:{ext}"
        self.height = height
        self.max_exp = max_exp
        self.primes = primes
        self._one = ext.unit_ideal()
        self._zero = ext.zero()
        self._zinq = isinstance(ext, LocalExt) and ext._zinq

    def __eq__(self, other):
        return type(other) is type(self) and other.ext == self.ext

    def __hash__(self):
        return hash(("res", self.ext))

    # construction
    def canon(self, x, g):
        """Payload for x mod g·A, with g any nonzero element."""
        ext = self.ext
        g = ext.ideal(ext.coerce(g))
        if ext.is_zero(g) or (isinstance(ext, ProductExt) and any(
                p.is_zero(c) for p, c in zip(ext.parts, g))):
            raise DomainError("modulus must be an invertible ideal")
        return ext.reduce(ext.coerce(x), g), g

    # primitives
    def add(self, x, y):
        if self._zinq:
            return _zq_add(x, y)
        ext = self.ext
        g = ext.igcd(x[1], y[1])
        return ext.reduce(ext.add(x[0], y[0]), g), g

    def mul(self, x, y):
        if self._zinq:
            return _zq_mul(x, y)
        ext = self.ext
        (a, g), (b, h) = x, y
        mod = ext.igcd(ext.igcd(ext.imul(g, h), ext.mul(a, h)), ext.mul(b, g))
        return ext.reduce(ext.mul(a, b), mod), mod

    def neg(self, x):
        return self.ext.reduce(self.ext.neg(x[0]), x[1]), x[1]

    def qinv(self, x):
        """z/v mod α/v² with v = v(x) and z inverting x/v modulo α/v."""
        ext = self.ext
        a, g = x
        v = ext.igcd(g, a)
        gv = ext.idiv(g, v)
        z = ext.div(ext.unit_inverse(ext.div(a, v), gv), v)
        mod = ext.idiv(gv, v)
        return ext.reduce(z, mod), mod

    def eplus(self, x):
        return x[1]

    def v(self, x):
        return self.ext.igcd(x[1], x[0])

    def lattice(self, a):
        return self._zero, a

    def eps(self):
        return self._zero, self._one

    # levels
    def lat_mul(self, a, b):
        return self.ext.imul(a, b)

    def lat_div(self, a, b):
        return self.ext.idiv(a, b)

    def lat_meet(self, a, b):
        return self.ext.igcd(a, b)

    def lat_join(self, a, b):
        return self.ext.ilcm(a, b)

    def lat_leq(self, a, b) -> bool:
        return self.ext.contains(a, b)

    def lat_eps(self):
        return self._one

    def lat_pos(self, a):
        return self.ext.ilcm(a, self._one)

    def to_lelem(self, a) -> LElem:
        return self.ext.to_lelem(a)

    def from_lelem(self, a: LElem):
        return self.ext.from_lelem(a)

    def lat_fmt(self, a) -> str:
        return self._gen_text(a)

    # derived, specialised
    def meet(self, x, y):
        ext = self.ext
        g = ext.igcd(ext.igcd(x[1], y[1]), ext.sub(x[0], y[0]))
        return ext.reduce(x[0], g), g

    def leq(self, x, y) -> bool:
        ext = self.ext
        return ext.contains(x[1], y[1]) and ext.contains(x[1], ext.sub(x[0], y[0]))

    def ebullet(self, x):
        v = self.v(x)
        g = self.ext.idiv(x[1], v)
        return self.ext.reduce(self.ext.one(), g), g

    def join(self, x, y):
        ext = self.ext
        if not ext.contains(ext.igcd(x[1], y[1]), ext.sub(x[0], y[0])):
            raise NotIncident()
        g = ext.ilcm(x[1], y[1])
        return ext.reduce(ext.crt([x, y]), g), g

    def median(self, x, y, z):
        ext = self.ext
        gxy = ext.igcd(ext.igcd(x[1], y[1]), ext.sub(x[0], y[0]))
        gyz = ext.igcd(ext.igcd(y[1], z[1]), ext.sub(y[0], z[0]))
        gzx = ext.igcd(ext.igcd(z[1], x[1]), ext.sub(z[0], x[0]))
        g = ext.ilcm(ext.ilcm(gxy, gyz), gzx)
        rep = ext.crt([(x[0], gxy), (y[0], gyz), (z[0], gzx)])
        return ext.reduce(rep, g), g

    def one(self, a):
        return self.ext.reduce(self.ext.one(), a), a

    # text
    def _gen_text(self, g) -> str:
        ext = self.ext
        if isinstance(ext, ProductExt):
            return "(" + " | ".join(_brace(p, c) for p, c in zip(ext.parts, g)) + ")"
        return _brace(ext, g)

    def fmt(self, x) -> str:
        ext = self.ext
        if isinstance(ext, ProductExt):
            return "(" + " | ".join(f"{_brace(p, a)} mod {_brace(p, g)}"
                                    for p, a, g in zip(ext.parts, x[0], x[1])) + ")"
        return f"{_brace(ext, x[0])} mod {_brace(ext, x[1])}"

    def parse(self, text: str):
        """Parse ``x mod q`` or ``(x1 mod q1 | x2 mod q2)``."""
        s = text.strip()
        ext = self.ext
        if isinstance(ext, ProductExt):
            if not (s.startswith("(") and s.endswith(")")):
                raise ValueError(f"expected (x1 mod q1 | ...), got {text!r}")
            chunks = [c.strip() for c in s[1:-1].split("|")]
            if len(chunks) != len(ext.parts):
                raise ValueError("wrong number of components")
            pairs = [_split_mod(c, p) for p, c in zip(ext.parts, chunks)]
            return self.canon(tuple(a for a, _ in pairs), tuple(g for _, g in pairs))
        return self.canon(*_split_mod(s, ext))

    # sampling
    def sample_gen(self, rng: random.Random):
        return _sample_gen(self.ext, rng, self.max_exp, self.primes)

    def sample(self, rng: random.Random):
        ext = self.ext
        g = self.sample_gen(rng)
        return self.canon(_sample_rep(ext, rng, self.height, self.primes), g)


def _zq_add(x, y):
    (a, g), (b, h) = x, y
    if a.denominator == 1 and b.denominator == 1 and g.denominator == 1 and h.denominator == 1:
        m = gmpy2.gcd(g.numerator, h.numerator)
        return mpq((a.numerator + b.numerator) % m), mpq(m)
    return _ZQ.add_slow(x, y)


def _zq_mul(x, y):
    (a, g), (b, h) = x, y
    if a.denominator == 1 and b.denominator == 1 and g.denominator == 1 and h.denominator == 1:
        an, bn, gn, hn = a.numerator, b.numerator, g.numerator, h.numerator
        m = gmpy2.gcd(gmpy2.gcd(gn * hn, an * hn), bn * gn)
        return mpq(an * bn % m), mpq(m)
    return _ZQ.mul_slow(x, y)


def _brace(ext, x) -> str:
    s = ext.fmt(x)
    if isinstance(ext, LocalExt) and not isinstance(ext.domain, IntDomain) and \
            any(c in s for c in "+/*^"):
        return "{" + s + "}"
    return s


def _split_mod(text: str, ext):
    s = text.strip()
    depth = 0
    cut = -1
    for i, ch in enumerate(s):
        if ch in "({[":
            depth += 1
        elif ch in ")}]":
            depth -= 1
        elif depth == 0 and s.startswith("mod", i) and (i == 0 or s[i - 1] in " })"):
            cut = i
    if cut < 0:
        raise ValueError(f"expected 'x mod q', got {text!r}")
    return _elem(ext, s[:cut]), _elem(ext, s[cut + 3:])


def _elem(ext, text: str):
    s = text.strip()
    if s.startswith("{") and s.endswith("}"):
        s = s[1:-1]
    return ext.parse(s)


def _local_primes(ext: LocalExt, primes):
    return list(ext.S) if ext.S is not None else list(primes)


def _sample_gen(ext, rng, max_exp, primes):
    if isinstance(ext, ProductExt):
        return tuple(_sample_gen(p, rng, max_exp, primes) for p in ext.parts)
    d = ext.domain
    g = d.one
    for s in _local_primes(ext, primes):
        if rng.random() < 0.5:
            e = rng.randint(-max_exp, max_exp)
            g = g * d.coerce(d.key_elem(s)) ** e if isinstance(d, IntDomain) else \
                g * _fpow(d.frac(s), e)
    return g


def _fpow(x, e):
    out = x / x
    base = x if e >= 0 else 1 / x
    for _ in range(abs(e)):
        out = out * base
    return out


def _sample_rep(ext, rng, height, primes):
    if isinstance(ext, ProductExt):
        return tuple(_sample_rep(p, rng, height, primes) for p in ext.parts)
    d = ext.domain
    if isinstance(d, IntDomain):
        return mpq(rng.randint(-height, height), rng.randint(1, height))
    deg = rng.randint(0, 3)
    num = tuple(rng.randrange(d.p) for _ in range(deg + 1))
    den = (1,) + tuple(rng.randrange(d.p) for _ in range(rng.randint(0, 2)))
    return d.frac(num, den)


def build_model(ext) -> ResidueModel:
    if isinstance(ext, str):
        ext = parse_ext(ext)
    return ResidueModel(ext)


def canon(model: ResidueModel, x, alpha):
    """x mod α, with α given as a generator or an LElem."""
    if isinstance(alpha, LElem):
        alpha = model.from_lelem(alpha)
    return model.canon(x, alpha)


def coherent_family(model: ResidueModel, x, beta):
    """Lift x along its canonical representative: rep mod β."""
    if isinstance(beta, LElem):
        beta = model.from_lelem(beta)
    return model.canon(x[0], beta)


def dist_formula(model: ResidueModel, x, y):
    """αβ / (α ∧ β ∧ A(x − y))² as a level."""
    ext = model.ext
    g = ext.igcd(ext.igcd(x[1], y[1]), ext.sub(x[0], y[0]))
    return ext.idiv(ext.imul(x[1], y[1]), ext.imul(g, g))


class _ZinQSlow(ResidueModel):
    """General rational path used by the integer fast path."""

    def add_slow(self, x, y):
        ext = self.ext
        g = ext.igcd(x[1], y[1])
        return ext.reduce(x[0] + y[0], g), g

    def mul_slow(self, x, y):
        ext = self.ext
        (a, g), (b, h) = x, y
        mod = ext.igcd(ext.igcd(g * h, a * h), b * g)
        return ext.reduce(a * b, mod), mod


_ZQ = _ZinQSlow(LocalExt(IntDomain()))
