"""Directed commutative regular quasi-semirings.

A model supplies the five operations (+, ∙, −, ⁻¹, ε) on opaque
payloads plus the additive idempotents as a lattice of "levels"
(``lattice``/``eplus``).  Everything else (e•, v, meets, the order) is
derived here once, so every model is checked through the same code.

Level values are model-native for speed (rational generators in the
residue model, ``LElem`` elsewhere); ``to_lelem`` converts for display
and for cross-model comparisons.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import lgroup
from .lgroup import LElem, LGroup, absval, parts


class DomainError(ValueError):
    """An operation is undefined for its inputs."""


class NotIncident(DomainError):
    def __init__(self, msg: str = "not incident"):
        super().__init__(msg)


class NotMedian(DomainError):
    def __init__(self, msg: str = "no median in this model"):
        super().__init__(msg)


class Unsupported(DomainError):
    pass


class ModelMismatch(DomainError):
    pass


class QsModel:
    """Operations on payloads; subclasses fill in the primitive ones."""

    name = "model"
    directed = True
    superrigid = False
    median_flag = False
    lff = False
    locally_linear = False
    complete = False

    # primitives
    def add(self, x, y):
        raise NotImplementedError

    def mul(self, x, y):
        raise NotImplementedError

    def neg(self, x):
        raise NotImplementedError

    def qinv(self, x):
        raise NotImplementedError

    def eps(self):
        return self.lattice(self.lat_eps())

    def eplus(self, x):
        """e⁺(x) = x + (−x) as a level."""
        raise NotImplementedError

    def v(self, x):
        """v(x) = ε∙x as a level."""
        raise NotImplementedError

    def lattice(self, a):
        """The additive idempotent with level a."""
        raise NotImplementedError

    def fmt(self, x) -> str:
        raise NotImplementedError

    def sample(self, rng: random.Random):
        raise NotImplementedError

    def flags(self) -> dict:
        return {"directed": self.directed, "superrigid": self.superrigid,
                "median": self.median_flag, "lff": self.lff,
                "locally_linear": self.locally_linear, "complete": self.complete}

    # levels (default: LElem)
    def lat_mul(self, a, b):
        return a * b

    def lat_div(self, a, b):
        return a / b

    def lat_meet(self, a, b):
        return a & b

    def lat_join(self, a, b):
        return a | b

    def lat_leq(self, a, b) -> bool:
        return a <= b

    def lat_eps(self):
        return LElem.eps(self.group)

    def lat_pos(self, a):
        return a | self.lat_eps()

    def to_lelem(self, a) -> LElem:
        return a

    def from_lelem(self, a: LElem):
        return a

    def lat_fmt(self, a) -> str:
        return str(self.to_lelem(a))

    # derived
    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def ebullet(self, x):
        return self.mul(x, self.qinv(x))

    def meet(self, x, y):
        """x ∧ y = x + v(x − y)."""
        return self.add(x, self.lattice(self.v(self.sub(x, y))))

    def leq(self, x, y) -> bool:
        return self.meet(x, y) == x

    def def_leq(self, x, y) -> bool:
        """The defining order x ≤ y ⟺ y + e⁺(x) = x."""
        return self.add(y, self.lattice(self.eplus(x))) == x

    def in_eplus(self, x) -> bool:
        return x == self.lattice(self.eplus(x))

    def in_ebullet(self, x) -> bool:
        return x == self.ebullet(x)

    def truncate(self, x, a):
        """x + a for a level a."""
        return self.add(x, self.lattice(a))

    def join(self, x, y):
        raise Unsupported(f"{self.name} has no join operation")

    def median(self, x, y, z):
        if not self.median_flag:
            raise NotMedian()
        m = self.join(self.meet(x, y), self.meet(y, z))
        return self.join(m, self.meet(z, x))

    def one(self, a):
        raise Unsupported(f"{self.name} is not superrigid")

    def lattice_lelem(self, a: LElem):
        return self.lattice(self.from_lelem(a))

    def __str__(self):
        return self.name


# elements

@dataclass(frozen=True)
class QsElem:
    model: QsModel
    payload: object

    def _other(self, other):
        if not isinstance(other, QsElem):
            return NotImplemented
        if other.model is not self.model and other.model != self.model:
            raise ModelMismatch(f"{self.model} vs {other.model}")
        return other.payload

    def _wrap(self, p):
        return QsElem(self.model, p)

    def __add__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else self._wrap(self.model.add(self.payload, o))

    def __sub__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else self._wrap(self.model.sub(self.payload, o))

    def __mul__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else self._wrap(self.model.mul(self.payload, o))

    def __neg__(self):
        return self._wrap(self.model.neg(self.payload))

    def __invert__(self):
        return self._wrap(self.model.qinv(self.payload))

    def __and__(self, other):
        return self._wrap(self.model.meet(self.payload, self._other(other)))

    def __or__(self, other):
        return self._wrap(self.model.join(self.payload, self._other(other)))

    def __le__(self, other):
        return self.model.leq(self.payload, self._other(other))

    def __str__(self):
        return self.model.fmt(self.payload)

    def __repr__(self):
        return f"QsElem({self})"


def _pair(a: QsElem, b: QsElem):
    if a.model is not b.model and a.model != b.model:
        raise ModelMismatch(f"{a.model} vs {b.model}")
    return a.model, a.payload, b.payload


def qs_add(a: QsElem, b: QsElem) -> QsElem:
    m, x, y = _pair(a, b)
    return QsElem(m, m.add(x, y))


def qs_mul(a: QsElem, b: QsElem) -> QsElem:
    m, x, y = _pair(a, b)
    return QsElem(m, m.mul(x, y))


def qs_neg(a: QsElem) -> QsElem:
    return QsElem(a.model, a.model.neg(a.payload))


def qs_qinv(a: QsElem) -> QsElem:
    return QsElem(a.model, a.model.qinv(a.payload))


def derived(a: QsElem) -> tuple[LElem, QsElem, LElem]:
    """(e⁺(a), e•(a), v(a))."""
    m, x = a.model, a.payload
    return m.to_lelem(m.eplus(x)), QsElem(m, m.ebullet(x)), m.to_lelem(m.v(x))


def qs_meet(a: QsElem, b: QsElem) -> QsElem:
    m, x, y = _pair(a, b)
    return QsElem(m, m.meet(x, y))


def qs_leq(a: QsElem, b: QsElem) -> bool:
    m, x, y = _pair(a, b)
    return m.leq(x, y)


def qs_join(a: QsElem, b: QsElem) -> QsElem:
    m, x, y = _pair(a, b)
    return QsElem(m, m.join(x, y))


def one_alpha(model: QsModel, a: LElem) -> QsElem:
    return QsElem(model, model.one(model.from_lelem(a)))


def lattice_elem(model: QsModel, a: LElem) -> QsElem:
    return QsElem(model, model.lattice(model.from_lelem(a)))


# the model built from an l-group

def _vector_text(group: LGroup, a: LElem) -> str:
    return "(" + ",".join(str(a[k]) for k in group.all_keys()) + ")"


def _random_vector(group: LGroup, rng: random.Random, box: int) -> LElem:
    keys = group.all_keys()
    vals = [rng.randint(-box, box) if rng.random() < 0.6 else 0 for _ in keys]
    if group.kind == "lex":
        vals[-1] = rng.randint(-1, 1)
    return LElem.vector(group, vals)


class RLambda(QsModel):
    """Pairs (γ, δ) with δ ≥ ε and |γ| ∧ δ = ε."""

    superrigid = True
    median_flag = True
    lff = True
    complete = True

    def __init__(self, group: LGroup, box: int = 3):
        if group.all_keys() is None:
            raise ValueError("RLambda needs a finitely generated l-group")
        self.group = group
        self.box = box
        self.locally_linear = group.totally_ordered
        self._eps = LElem.eps(group)
        self.name = f"rlambda:{_group_name(group)}"

    def __eq__(self, other):
        return type(other) is type(self) and other.group == self.group

    def __hash__(self):
        return hash(("rlambda", self.group))

    def make(self, gamma: LElem, delta: LElem):
        if not delta >= self._eps:
            raise DomainError(f"{delta} is not positive")
        if absval(gamma) & delta != self._eps:
            raise DomainError(f"({gamma}, {delta}) is not orthogonal")
        return gamma, delta

    def add(self, x, y):
        (g, d), (h, e) = x, y
        r = g / h
        rp, rm, ra = parts(r)
        rho = ra & (rp * d) & (rm * e)
        return ((g * d) & (h * e)) / rho, rho

    def mul(self, x, y):
        return x[0] * y[0], x[1] & y[1]

    def neg(self, x):
        return x

    def qinv(self, x):
        return ~x[0], x[1]

    def eps(self):
        return self._eps, self._eps

    def eplus(self, x):
        return x[0] * x[1]

    def v(self, x):
        return x[0]

    def ebullet(self, x):
        return self._eps, x[1]

    def lattice(self, a):
        return a, self._eps

    def join(self, x, y):
        if self.add(x, y)[1] != self._eps:
            raise NotIncident()
        return x[0] | y[0], x[1] | y[1]

    def one(self, a):
        plus = a | self._eps
        base = (self._eps, plus)
        return base if plus == a else self.add(base, self.lattice(a))

    def fmt(self, x) -> str:
        return "[" + _vector_text(self.group, x[0]) + ";" + _vector_text(self.group, x[1]) + "]"

    def parse(self, text: str):
        s = text.replace(" ", "")
        if not (s.startswith("[(") and s.endswith(")]") and ");(" in s):
            raise ValueError(f"expected [(g..);(d..)], got {text!r}")
        g, d = s[2:-2].split(");(")
        return self.make(*(LElem.vector(self.group, [int(c) for c in part.split(",")])
                           for part in (g, d)))

    def sample(self, rng: random.Random):
        while True:
            g = _random_vector(self.group, rng, self.box)
            d = _random_vector(self.group, rng, self.box) | self._eps
            if rng.random() < 0.3:
                d = self._eps
            if absval(g) & d == self._eps:
                return g, d


def _group_name(group: LGroup) -> str:
    if group.kind == "pointwise" and group.style == "vector":
        n = len(group.keys)
        return "Z" if n == 1 else f"Z^{n}"
    if group.kind == "lex":
        return "lex(" + ",".join(str(len(b)) for b in group.blocks) + ")"
    return str(group)


def sample_level(model: QsModel, rng: random.Random):
    """A random level (element of Λ) of an LElem-valued model."""
    return _random_vector(model.group, rng, getattr(model, "box", 3))


# L(F, l) for F = F_p

class LFl(QsModel):
    """Points (n, x) with x ∈ F_p* and lattice points γ^m.

    For l = 0 only the points (0, x) occur.
    """

    locally_linear = True
    median_flag = True
    lff = True

    def __init__(self, p: int, l: int, box: int = 4):
        from .arith import factor_int
        if p < 2 or factor_int(p) != {p: 1}:
            raise ValueError(f"{p} is not prime")
        if l < 0:
            raise ValueError("level must be nonnegative")
        self.p, self.l, self.box = p, l, box
        self.group = lgroup.zn(1)
        self.name = f"lf:{p},{l}"

    def __eq__(self, other):
        return type(other) is type(self) and (other.p, other.l) == (self.p, self.l)

    def __hash__(self):
        return hash(("lf", self.p, self.l))

    def point(self, n: int, x: int):
        x %= self.p
        if not x:
            raise DomainError("point coordinate must be nonzero")
        if self.l == 0 and n != 0:
            raise DomainError("L(F,0) only has points (0, x)")
        return ("p", n, x)

    def gamma(self, m: int):
        return ("g", m)

    def add(self, a, b):
        l, p = self.l, self.p
        if a[0] == "g" and b[0] == "g":
            return ("g", min(a[1], b[1]))
        if a[0] == "g":
            a, b = b, a
        _, n, x = a
        if b[0] == "g":
            m = b[1]
            return a if m > l * n else b
        _, m, y = b
        if n == m:
            s = (x + y) % p
            return ("p", n, s) if s else ("g", l * n + 1)
        if l == 0:
            raise AssertionError("points differ only when l > 0")
        return a if n < m else b

    def mul(self, a, b):
        l = self.l
        if a[0] == "g" and b[0] == "g":
            return ("g", a[1] + b[1])
        if a[0] == "g":
            a, b = b, a
        if b[0] == "g":
            return ("g", l * a[1] + b[1])
        return ("p", a[1] + b[1], a[2] * b[2] % self.p)

    def neg(self, a):
        return a if a[0] == "g" else ("p", a[1], -a[2] % self.p)

    def qinv(self, a):
        if a[0] == "g":
            return ("g", -a[1])
        return ("p", -a[1], pow(a[2], -1, self.p))

    def _m(self, a: LElem) -> int:
        return a[0]

    def _lvl(self, m: int) -> LElem:
        return LElem(self.group, {0: m} if m else {})

    def eplus(self, a):
        return self._lvl(a[1] if a[0] == "g" else self.l * a[1] + 1)

    def v(self, a):
        return self._lvl(a[1] if a[0] == "g" else self.l * a[1])

    def lattice(self, a):
        return ("g", self._m(a))

    def join(self, x, y):
        if self.leq(x, y):
            return y
        if self.leq(y, x):
            return x
        raise NotIncident()

    def median(self, x, y, z):
        meets = [self.meet(x, y), self.meet(y, z), self.meet(z, x)]
        for m in meets:
            if all(self.leq(o, m) for o in meets):
                return m
        raise NotMedian("meets are not linearly ordered")

    def lat_fmt(self, a) -> str:
        return f"g^{self._m(a)}"

    def fmt(self, a) -> str:
        return f"g^{a[1]}" if a[0] == "g" else f"({a[1]},{a[2]})"

    def parse(self, text: str):
        s = text.replace(" ", "")
        if s.startswith("g^"):
            return ("g", int(s[2:]))
        if s.startswith("(") and s.endswith(")") and "," in s:
            n, x = s[1:-1].split(",")
            return self.point(int(n), int(x))
        raise ValueError(f"expected (n,x) or g^m, got {text!r}")

    def sample(self, rng: random.Random):
        if rng.random() < 0.3:
            return ("g", rng.randint(-self.box, self.box))
        n = 0 if self.l == 0 else rng.randint(-self.box, self.box)
        return ("p", n, rng.randint(1, self.p - 1))


# S_α substructures of RLambda over lexicographic groups

_FLAVORS = {"plain": 3, "median-only": 2}


class SAlpha(QsModel):
    """{(γ, δ) ∈ RLambda : δ < α}, computed in the ambient model.

    ``plain`` uses lex ℤ⁴ = (σ1, σ2, σ3 | α) and is not median;
    ``median-only`` uses lex ℤ³ = (σ1, σ2 | α) and is median but not lff.
    """

    superrigid = False

    def __init__(self, flavor: str = "plain"):
        if flavor not in _FLAVORS:
            raise ValueError(f"unknown flavor {flavor!r}")
        k = _FLAVORS[flavor]
        self.flavor = flavor
        self.group = lgroup.lex(k, 1)
        self.ambient = RLambda(self.group, box=2)
        self.alpha = LElem.vector(self.group, [0] * k + [1])
        self.sigmas = [LElem.vector(self.group, [int(i == j) for j in range(k)] + [0])
                       for i in range(k)]
        self.median_flag = flavor == "median-only"
        self.name = f"salpha:{flavor}"

    def __eq__(self, other):
        return type(other) is type(self) and other.flavor == self.flavor

    def __hash__(self):
        return hash(("salpha", self.flavor))

    def member(self, x) -> bool:
        d = x[1]
        return d <= self.alpha and d != self.alpha

    def _check(self, x, what: str):
        if not self.member(x):
            raise AssertionError(f"{what} left S_α: {self.ambient.fmt(x)}")
        return x

    def witnesses(self):
        """The pinned elements (ε, α σ_i⁻¹)."""
        eps = LElem.eps(self.group)
        return [(eps, self.alpha / s) for s in self.sigmas]

    def add(self, x, y):
        return self._check(self.ambient.add(x, y), "sum")

    def mul(self, x, y):
        return self._check(self.ambient.mul(x, y), "product")

    def neg(self, x):
        return x

    def qinv(self, x):
        return self.ambient.qinv(x)

    def eplus(self, x):
        return self.ambient.eplus(x)

    def v(self, x):
        return self.ambient.v(x)

    def ebullet(self, x):
        return self.ambient.ebullet(x)

    def lattice(self, a):
        return self.ambient.lattice(a)

    def join(self, x, y):
        z = self.ambient.join(x, y)
        if not self.member(z):
            raise NotIncident("not incident: ambient join leaves S_α")
        return z

    def median(self, x, y, z):
        m = self.ambient.median(x, y, z)
        if not self.member(m):
            raise NotMedian("ambient median leaves S_α")
        return m

    def fmt(self, x) -> str:
        return self.ambient.fmt(x)

    def parse(self, text: str):
        x = self.ambient.parse(text)
        if not self.member(x):
            raise DomainError(f"{text} is not in S_α")
        return x

    def sample(self, rng: random.Random):
        while True:
            x = self.ambient.sample(rng)
            if self.member(x):
                return x
