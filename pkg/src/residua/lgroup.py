"""Abelian l-groups written additively as exponent vectors.

The group law of an l-group is usually written multiplicatively
(ℚ₊ˣ with divisibility is the guiding example).  Here an element is the
finitely supported map  coordinate -> exponent, so the product is
exponent addition, meet is the componentwise minimum (gcd) and join the
maximum (lcm).  Inside these l-groups a binary "+" always means meet.

Three shapes are supported:

* ``pointwise``: componentwise order over a key set (all primes when
  the key set is ``None``);
* ``lex``: blocks of coordinates ordered lexicographically from the
  highest block down; every block but the lowest has one coordinate, so
  the order is a lattice;
* ``product``: a finite direct product, keys are ``(part, key)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import reduce

from . import polys
from .arith import factor_int, mpq, q as _q


class GroupMismatch(ValueError):
    """Operands live in different l-groups."""


@dataclass(frozen=True)
class LGroup:
    kind: str
    keys: tuple | None = None
    style: str = "vector"
    blocks: tuple = ()
    parts: tuple = ()
    prime: int = 0
    flat: bool = field(default=False, compare=False)

    def __post_init__(self):
        flat = self.kind == "pointwise" or (
            self.kind == "product" and all(p.kind == "pointwise" for p in self.parts))
        object.__setattr__(self, "flat", flat)

    @property
    def totally_ordered(self) -> bool:
        if self.kind == "pointwise":
            return self.keys is not None and len(self.keys) <= 1
        if self.kind == "lex":
            return len(self.blocks[0]) == 1
        return sum(not p.is_trivial for p in self.parts) <= 1 and all(
            p.totally_ordered for p in self.parts)

    @property
    def is_trivial(self) -> bool:
        if self.kind == "product":
            return all(p.is_trivial for p in self.parts)
        return self.keys is not None and not self.keys

    def all_keys(self) -> tuple | None:
        if self.kind == "product":
            out = []
            for i, part in enumerate(self.parts):
                ks = part.all_keys()
                if ks is None:
                    return None
                out.extend((i, k) for k in ks)
            return tuple(out)
        return self.keys

    def has_key(self, k) -> bool:
        if self.kind == "product":
            return (isinstance(k, tuple) and len(k) == 2 and isinstance(k[0], int)
                    and 0 <= k[0] < len(self.parts) and self.parts[k[0]].has_key(k[1]))
        if self.keys is None:
            return isinstance(k, int) and k > 1 and factor_int(k) == {k: 1}
        return k in self.keys

    def __str__(self):
        if self.kind == "product":
            return "prod(" + ", ".join(map(str, self.parts)) + ")"
        if self.kind == "lex":
            return "lex" + "".join(f"[{len(b)}]" for b in self.blocks)
        if self.keys is None:
            return "Q+"
        return f"Z^{len(self.keys)}"


def rationals() -> LGroup:
    """ℚ₊ˣ ordered by divisibility, coordinates indexed by primes."""
    return LGroup("pointwise", None, "rational")


def pointwise(keys, style: str = "vector", prime: int = 0) -> LGroup:
    return LGroup("pointwise", tuple(keys), style, prime=prime)


def zn(k: int) -> LGroup:
    """ℤ^k with the componentwise order."""
    return pointwise(range(k))


def trivial() -> LGroup:
    return pointwise(())


def lex(*sizes: int) -> LGroup:
    """Lexicographic group; ``sizes`` lists block sizes from lowest to highest."""
    if not sizes or any(s < 1 for s in sizes) or any(s != 1 for s in sizes[1:]):
        raise ValueError("only the lowest lex block may have more than one coordinate")
    blocks, i = [], 0
    for s in sizes:
        blocks.append(tuple(range(i, i + s)))
        i += s
    return LGroup("lex", tuple(range(i)), "vector", tuple(blocks))


def product(*groups: LGroup) -> LGroup:
    return LGroup("product", parts=tuple(groups))


class LElem:
    """Element of an l-group: finite map key -> nonzero exponent."""

    __slots__ = ("group", "exps", "_hash")

    def __init__(self, group: LGroup, exps: dict):
        self.group = group
        self.exps = exps
        self._hash = None

    @classmethod
    def make(cls, group: LGroup, mapping) -> "LElem":
        exps = {}
        for k, v in dict(mapping).items():
            v = int(v)
            if v:
                if not group.has_key(k):
                    raise KeyError(f"coordinate {k!r} not in {group}")
                exps[k] = v
        return cls(group, exps)

    @classmethod
    def eps(cls, group: LGroup) -> "LElem":
        return cls(group, {})

    @classmethod
    def vector(cls, group: LGroup, values) -> "LElem":
        keys = group.all_keys()
        values = list(values)
        if keys is None or len(keys) != len(values):
            raise ValueError(f"expected {0 if keys is None else len(keys)} coordinates")
        return cls(group, {k: int(v) for k, v in zip(keys, values) if v})

    @classmethod
    def from_rational(cls, group: LGroup, x) -> "LElem":
        """Exponent vector of a positive rational over prime coordinates."""
        x = _q(x)
        if x <= 0:
            raise ValueError("expected a positive rational")
        exps = dict(factor_int(int(x.numerator)))
        for p, e in factor_int(int(x.denominator)).items():
            exps[p] = -e
        return cls.make(group, exps)

    def __getitem__(self, k) -> int:
        return self.exps.get(k, 0)

    def __eq__(self, other):
        if not isinstance(other, LElem):
            return NotImplemented
        return self.exps == other.exps and (self.group is other.group or self.group == other.group)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.exps.items()))
        return self._hash

    def __bool__(self):
        # truthy iff not the neutral element
        return bool(self.exps)

    def _same(self, other: "LElem"):
        if self.group is not other.group and self.group != other.group:
            raise GroupMismatch(f"{self.group} vs {other.group}")

    # group structure
    def __mul__(self, other: "LElem") -> "LElem":
        self._same(other)
        out = dict(self.exps)
        for k, v in other.exps.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                del out[k]
        return LElem(self.group, out)

    def __invert__(self) -> "LElem":
        return LElem(self.group, {k: -v for k, v in self.exps.items()})

    def __truediv__(self, other: "LElem") -> "LElem":
        return self * ~other

    def __pow__(self, n: int) -> "LElem":
        if n == 0:
            return LElem(self.group, {})
        return LElem(self.group, {k: v * n for k, v in self.exps.items()})

    # lattice structure
    def __and__(self, other: "LElem") -> "LElem":
        return meet(self, other)

    def __or__(self, other: "LElem") -> "LElem":
        return join(self, other)

    def __le__(self, other: "LElem") -> bool:
        return leq(self, other)

    def __ge__(self, other: "LElem") -> bool:
        return leq(other, self)

    def __lt__(self, other: "LElem") -> bool:
        return self != other and leq(self, other)

    def __gt__(self, other: "LElem") -> bool:
        return self != other and leq(other, self)

    def is_pos(self) -> bool:
        """a >= ε."""
        if self.group.flat:
            return all(v > 0 for v in self.exps.values())
        return _pos_part(self) == self

    def __repr__(self):
        return f"LElem({format_lelem(self)})"

    def __str__(self):
        return format_lelem(self)


def _minmax(a: LElem, b: LElem, pick) -> LElem:
    out = {}
    ea, eb = a.exps, b.exps
    for k in ea.keys() | eb.keys():
        v = pick(ea.get(k, 0), eb.get(k, 0))
        if v:
            out[k] = v
    return LElem(a.group, out)


def _split(a: LElem) -> list[LElem]:
    parts = [dict() for _ in a.group.parts]
    for (i, k), v in a.exps.items():
        parts[i][k] = v
    return [LElem(g, e) for g, e in zip(a.group.parts, parts)]


def _glue(group: LGroup, parts) -> LElem:
    return LElem(group, {(i, k): v for i, part in enumerate(parts) for k, v in part.exps.items()})


def _pos_part(c: LElem) -> LElem:
    """c ∨ ε."""
    g = c.group
    if g.flat:
        return LElem(g, {k: v for k, v in c.exps.items() if v > 0})
    if g.kind == "product":
        return _glue(g, [_pos_part(p) for p in _split(c)])
    for block in reversed(g.blocks):
        vals = [c.exps.get(k, 0) for k in block]
        if any(vals):
            if len(block) == 1:
                return c if vals[0] > 0 else LElem(g, {})
            return LElem(g, {k: v for k, v in zip(block, vals) if v > 0})
    return c


def lattice_group_ops(op: str, a: LElem, b: LElem | None = None) -> LElem:
    """Dispatch ``mul``, ``inv``, ``meet`` or ``join``."""
    if op == "inv":
        return ~a
    if b is None:
        raise ValueError(f"{op} needs two operands")
    return {"mul": LElem.__mul__, "meet": meet, "join": join}[op](a, b)


def meet(a: LElem, b: LElem) -> LElem:
    a._same(b)
    if a.group.flat:
        return _minmax(a, b, min)
    return a / _pos_part(a / b)


def join(a: LElem, b: LElem) -> LElem:
    a._same(b)
    if a.group.flat:
        return _minmax(a, b, max)
    return b * _pos_part(a / b)


def leq(a: LElem, b: LElem) -> bool:
    a._same(b)
    if a.group.flat:
        ea, eb = a.exps, b.exps
        return all(ea.get(k, 0) <= eb.get(k, 0) for k in ea.keys() | eb.keys())
    return not _pos_part(a / b)


def parts(a: LElem) -> tuple[LElem, LElem, LElem]:
    """(a₊, a₋, |a|) with a₊ = a ∨ ε and a₋ = a⁻¹ ∨ ε."""
    plus = _pos_part(a)
    minus = _pos_part(~a)
    return plus, minus, plus * minus


def absval(a: LElem) -> LElem:
    if a.group.flat:
        return LElem(a.group, {k: abs(v) for k, v in a.exps.items()})
    return parts(a)[2]


def meet_all(items) -> LElem:
    return reduce(meet, items)


def join_all(items) -> LElem:
    return reduce(join, items)


@dataclass(frozen=True)
class ConvexCone:
    """Convex submonoid of Λ₊ cut out by a coordinate set.

    ``coords=None`` is the whole positive cone.  For lex groups the
    coordinates must be all keys or a subset of the lowest block.
    """

    group: LGroup
    coords: frozenset | None = None

    def __post_init__(self):
        if self.coords is None or self.group.kind != "lex":
            return
        if not (self.coords <= set(self.group.blocks[0])
                or self.coords >= set(self.group.keys)):
            raise ValueError("lex cones are lower block segments")


def cone(group: LGroup, coords=None) -> ConvexCone:
    return ConvexCone(group, None if coords is None else frozenset(coords))


def cone_member(c: ConvexCone, a: LElem) -> bool:
    """Is |a| in the cone (for a >= ε this is plain membership)."""
    if c.coords is None:
        return True
    return all(k in c.coords for k in absval(a).exps)


# text forms

def _key_text(group: LGroup, k) -> str:
    if group.style == "poly":
        return polys.key_text(k)
    return str(k)


def format_lelem(a: LElem) -> str:
    g = a.group
    if g.kind == "product":
        return "(" + " | ".join(format_lelem(p) for p in _split(a)) + ")"
    if g.style == "rational":
        x = mpq(1)
        for p, e in a.exps.items():
            x *= mpq(p) ** e
        return str(x)
    if g.style == "poly":
        if not a.exps:
            return "1"
        items = sorted(a.exps.items(), key=lambda kv: (len(kv[0]), kv[0]))
        return "*".join(_key_text(g, k) + ("" if e == 1 else f"^{e}") for k, e in items)
    return "(" + ",".join(str(a.exps.get(k, 0)) for k in g.keys) + ")"


_VEC = re.compile(r"^\(\s*-?\d+(\s*,\s*-?\d+)*\s*\)$|^\(\s*\)$")


def parse_lelem(group: LGroup, text: str) -> LElem:
    s = text.strip()
    if group.kind == "product":
        if not (s.startswith("(") and s.endswith(")")):
            raise ValueError(f"expected (a | b ...) for {group}")
        chunks = s[1:-1].split("|")
        if len(chunks) != len(group.parts):
            raise ValueError("wrong number of product components")
        return _glue(group, [parse_lelem(g, c) for g, c in zip(group.parts, chunks)])
    if group.style == "rational":
        return LElem.from_rational(group, s)
    if group.style == "poly":
        f = polys.parse_ratfunc(s, group.prime)
        exps = {}
        for side, sign in ((f.num, 1), (f.den, -1)):
            lc, m = polys.monic(side, group.prime)
            if lc != 1:
                raise ValueError("ideal generators are taken monic")
            for k in group.keys:
                e = polys.multiplicity(m, k, group.prime)
                if e:
                    exps[k] = exps.get(k, 0) + sign * e
                    m = polys.quo(m, polys.power(k, e, group.prime), group.prime)
            if m != polys.ONE:
                raise ValueError(f"{s} is not supported on the localizing set")
        return LElem.make(group, exps)
    if not _VEC.match(s):
        raise ValueError(f"expected a vector like (1,0) for {group}")
    inner = s[1:-1].strip()
    vals = [int(v) for v in inner.split(",")] if inner else []
    return LElem.vector(group, vals)
