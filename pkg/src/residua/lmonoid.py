"""The l-monoid extension Λ̂ of a pointwise l-group.

An element is an exponent map into ℤ ∪ {∞} stored as a default value
in {0, ∞} plus finitely many exceptions.  For a product group the
default is kept per factor, so a factor can be entirely ∞ (the zero
component of a product ring has valuation ω in that factor).

Operations are exponentwise: multiplication adds with ∞ absorbing,
meet takes the minimum and join the maximum.  Elements of Λ embed as
default 0 with integer exceptions; ω is default ∞ everywhere.
"""

from __future__ import annotations

import math
import re

from . import polys
from .arith import factor_int, mpq
from .lgroup import LElem, LGroup, GroupMismatch

INF = math.inf


class NotIdempotent(ValueError):
    """An operation required an element of the boolean algebra ∂Λ̂₊."""


def _check_group(group: LGroup):
    if not group.flat:
        raise ValueError(f"Λ̂ is only modelled for pointwise groups, not {group}")


def _nparts(group: LGroup) -> int:
    return len(group.parts) if group.kind == "product" else 1


class LMonElem:
    __slots__ = ("group", "default", "exc", "_hash")

    def __init__(self, group: LGroup, default: tuple, exc: dict):
        self.group = group
        self.default = default
        self.exc = exc
        self._hash = None

    @classmethod
    def make(cls, group: LGroup, default=0, exc=None) -> "LMonElem":
        _check_group(group)
        n = _nparts(group)
        if not isinstance(default, tuple):
            default = (default,) * n
        default = tuple(INF if d == INF else 0 for d in default)
        if len(default) != n:
            raise ValueError("one default per factor")
        out = {}
        for k, v in (exc or {}).items():
            v = INF if v == INF else int(v)
            if not group.has_key(k):
                raise KeyError(f"coordinate {k!r} not in {group}")
            if v != default[_part(group, k)]:
                out[k] = v
        return cls(group, default, out)

    def entry(self, k):
        return self.exc.get(k, self.default[_part(self.group, k)])

    def __eq__(self, other):
        if not isinstance(other, LMonElem):
            return NotImplemented
        return self.default == other.default and self.exc == other.exc \
            and self.group == other.group

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.default, frozenset(self.exc.items())))
        return self._hash

    def __mul__(self, other):
        return lmon_ops("mul", self, _lift(self.group, other))

    def __and__(self, other):
        return lmon_ops("meet", self, _lift(self.group, other))

    def __or__(self, other):
        return lmon_ops("join", self, _lift(self.group, other))

    def __le__(self, other):
        other = _lift(self.group, other)
        return lmon_ops("meet", self, other) == self

    def is_idempotent(self) -> bool:
        return all(v == INF or v == 0 for v in self.exc.values())

    def in_group(self) -> bool:
        """Is this element in the image of Λ?"""
        return all(d == 0 for d in self.default) and all(v != INF for v in self.exc.values())

    def to_lelem(self) -> LElem:
        if not self.in_group():
            raise ValueError(f"{self} is not in Λ")
        return LElem(self.group, dict(self.exc))

    def __repr__(self):
        return f"LMonElem({format_lmon(self)})"

    def __str__(self):
        return format_lmon(self)


def _part(group: LGroup, k) -> int:
    return k[0] if group.kind == "product" else 0


def _lift(group, x) -> LMonElem:
    if isinstance(x, LElem):
        return embed(x)
    if isinstance(x, LMonElem):
        if x.group != group:
            raise GroupMismatch(f"{x.group} vs {group}")
        return x
    raise TypeError(f"cannot combine Λ̂ element with {type(x).__name__}")


def embed(a: LElem) -> LMonElem:
    _check_group(a.group)
    return LMonElem(a.group, (0,) * _nparts(a.group), dict(a.exps))


def omega(group: LGroup) -> LMonElem:
    _check_group(group)
    return LMonElem(group, (INF,) * _nparts(group), {})


def eps(group: LGroup) -> LMonElem:
    _check_group(group)
    return LMonElem(group, (0,) * _nparts(group), {})


def _add(a, b):
    return INF if a == INF or b == INF else a + b


_RULES = {"mul": _add, "meet": min, "join": max}


def lmon_ops(op: str, f: LMonElem, g: LMonElem) -> LMonElem:
    """Exponentwise ``mul`` (∞ absorbing), ``meet`` (min) or ``join`` (max)."""
    if f.group != g.group:
        raise GroupMismatch(f"{f.group} vs {g.group}")
    rule = _RULES[op]
    default = tuple(rule(a, b) for a, b in zip(f.default, g.default))
    out = {}
    grp = f.group
    for k in f.exc.keys() | g.exc.keys():
        v = rule(f.entry(k), g.entry(k))
        if v != default[_part(grp, k)]:
            out[k] = v
    return LMonElem(grp, default, out)


def evaluate(f: LMonElem, a: LElem) -> LElem:
    """φ(α) = φ ∧ α for α >= ε; the result lies in Λ."""
    if not a.is_pos():
        raise ValueError(f"{a} is not in Λ₊")
    out = {}
    grp = f.group
    for k in f.exc.keys() | a.exps.keys():
        v = min(f.entry(k), a.exps.get(k, 0))
        if v:
            out[k] = v
    return LElem(grp, out)


def decompose(f: LMonElem) -> tuple[LMonElem, LElem]:
    """φ = φ₊ ∙ φ₋⁻¹ with φ₊ = φ ∨ ε and φ₋ = φ(ε)⁻¹ ∈ Λ₊."""
    plus = lmon_ops("join", f, eps(f.group))
    minus = ~evaluate(f, LElem.eps(f.group))
    return plus, minus


def _require_idempotent(t: LMonElem):
    if not all(d in (0, INF) for d in t.default) or not t.is_idempotent():
        raise NotIdempotent(f"{t} is not idempotent")


def complement(t: LMonElem) -> LMonElem:
    """¬θ: swap 0 and ∞ everywhere."""
    _require_idempotent(t)
    swap = {0: INF, INF: 0}
    return LMonElem(t.group, tuple(swap[d] for d in t.default),
                    {k: swap[v] for k, v in t.exc.items()})


def _kept(t: LMonElem, k) -> bool:
    return t.entry(k) == INF


def theta_action(t: LMonElem, g: LElem) -> LElem:
    """θ̃(γ): keep the coordinates where θ is ∞."""
    _require_idempotent(t)
    return LElem(g.group, {k: v for k, v in g.exps.items() if _kept(t, k)})


def bar_qinv(g: LElem, t: LMonElem) -> LMonElem:
    """Quasi-inverse γ⁻¹∙θ of γ∙θ in the regular submonoid Λ̄."""
    _require_idempotent(t)
    if theta_action(t, g):
        raise ValueError(f"{g} is not in the kernel of θ̃")
    return lmon_ops("mul", embed(~g), t)


def project(f: LMonElem, k):
    """Coordinate k of φ: an integer or ∞ (the totally ordered image)."""
    return f.entry(k)


def from_prime_powers(group: LGroup, mapping, default=0) -> LMonElem:
    return LMonElem.make(group, default, mapping)


# text forms

def _key_text(group: LGroup, k) -> str:
    if group.kind == "product":
        i, inner = k
        return f"[{i}]" + _key_text(group.parts[i], inner)
    if group.style == "poly":
        return polys.key_text(k)
    if group.style == "rational":
        return str(k)
    return f"e{k}"


def _sort_key(k):
    return (str(type(k)), k)


def format_lmon(f: LMonElem) -> str:
    grp = f.group
    if all(d == INF for d in f.default) and not f.exc:
        return "omega"
    bits = []
    if grp.kind == "product":
        marks = [str(i) for i, d in enumerate(f.default) if d == INF]
        if marks:
            bits.append("default[" + ",".join(marks) + "]=inf")
    elif f.default[0] == INF:
        bits.append("default=inf")
    for k in sorted(f.exc, key=_sort_key):
        v = f.exc[k]
        bits.append(_key_text(grp, k) + "^" + ("inf" if v == INF else str(v)))
    return "*".join(bits) if bits else "1"


_FACTOR = re.compile(r"^(.+)\^(-?\d+|inf)$")


def parse_lmon(group: LGroup, text: str) -> LMonElem:
    """Parse ``2^3*5^inf*7^-1``, ``omega``, ``1`` or ``default=inf*2^0``.

    Over prime-indexed groups a bare factor may be a positive rational,
    e.g. ``12`` or ``3/4``.
    """
    _check_group(group)
    s = text.replace(" ", "")
    if s == "omega":
        return omega(group)
    default = 0
    exc: dict = {}
    if s in ("", "1"):
        return eps(group)
    for tok in s.split("*"):
        if tok == "default=inf":
            default = INF
            continue
        if tok.startswith("default[") and tok.endswith("]=inf"):
            marks = {int(i) for i in tok[8:-5].split(",")}
            default = tuple(INF if i in marks else 0 for i in range(_nparts(group)))
            continue
        m = _FACTOR.match(tok)
        if m:
            key, e = _parse_key(group, m.group(1)), m.group(2)
            val = INF if e == "inf" else int(e)
            old = exc.get(key, 0)
            exc[key] = INF if INF in (old, val) else old + val
            continue
        if group.style != "rational":
            raise ValueError(f"bad Λ̂ factor {tok!r}")
        x = mpq(tok)
        for p, e in factor_int(int(x.numerator)).items():
            exc[p] = exc.get(p, 0) + e
        for p, e in factor_int(int(x.denominator)).items():
            exc[p] = exc.get(p, 0) - e
    return LMonElem.make(group, default, exc)


def _parse_key(group: LGroup, text: str):
    if group.style == "poly":
        t = text[1:-1] if text.startswith("(") and text.endswith(")") else text
        return polys.parse_poly(t, group.prime)
    if group.style == "rational":
        return int(text)
    if text.startswith("e"):
        return group.keys[int(text[1:])]
    return int(text)
