"""Independent reference computations on cosets x + qℤ of ℚ.

Everything here uses ``fractions.Fraction`` and plain enumeration; none
of it imports the package's arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction


def F(x) -> Fraction:
    """Fraction from an mpq, int, str or Fraction."""
    if isinstance(x, (int, Fraction, str)):
        return Fraction(x)
    return Fraction(int(x.numerator), int(x.denominator))


def rat_gcd(values) -> Fraction:
    """Positive generator of the subgroup of ℚ generated by ``values``."""
    vals = [F(v) for v in values if v != 0]
    if not vals:
        return Fraction(0)
    den = math.lcm(*(v.denominator for v in vals))
    return Fraction(math.gcd(*(int(v * den) for v in vals)), den)


def canon(x, q) -> tuple[Fraction, Fraction]:
    """Canonical representative in [0, q) of x + qℤ."""
    x, q = F(x), F(q)
    return x - q * math.floor(x / q), q


def hull(points, extra_moduli=()):
    """Smallest coset c + gℤ containing ``points`` and stable under ``extra_moduli``."""
    points = [F(p) for p in points]
    g = rat_gcd([p - points[0] for p in points] + [F(m) for m in extra_moduli])
    return canon(points[0], g)


def coset_add(x, y):
    """Hull of {a + b}: a ∈ x, b ∈ y."""
    (a, g), (b, h) = x, y
    return hull([a + b], [g, h])


def coset_mul(x, y, spread: int = 3):
    """Hull of {a b : a ∈ x, b ∈ y}, from a small grid of representatives."""
    (a, g), (b, h) = x, y
    pts = [(a + i * g) * (b + j * h) for i in range(-spread, spread + 1)
           for j in range(-spread, spread + 1)]
    return hull(pts)


def coset_meet(x, y):
    """Smallest coset containing both."""
    (a, g), (b, h) = x, y
    return hull([a, b], [g, h])


def coset_contains(outer, inner) -> bool:
    a, g = F(outer[0]), F(outer[1])
    b, h = F(inner[0]), F(inner[1])
    return (h / g).denominator == 1 and ((b - a) / g).denominator == 1


def coset_join(x, y, window: int = 2000):
    """The intersection x ∩ y, found by walking x; None when empty."""
    (a, g), (b, h) = x, y
    L = Fraction(math.lcm(g.numerator, h.numerator), math.gcd(g.denominator, h.denominator))
    for k in range(window):
        c = a + k * g
        if ((c - b) / h).denominator == 1:
            return canon(c, L)
    return None


def candidate_cosets(levels, dens=(1, 2, 3, 4, 6, 8, 9, 12)):
    """Cosets k/d + qℤ for q in ``levels`` (Fractions) and small d."""
    for q in levels:
        seen = set()
        for d in dens:
            step = Fraction(1, d)
            n = int(q / step) if (q / step).denominator == 1 else None
            if n is None:
                continue
            for k in range(n):
                c = canon(k * step, q)
                if c not in seen:
                    seen.add(c)
                    yield c


def inverse_by_search(x, mul, levels):
    """All z with x z x = x and z x z = z among candidate cosets."""
    out = []
    for z in candidate_cosets(levels):
        if mul(mul(x, z), x) == x and mul(mul(z, x), z) == z:
            out.append(z)
    return out


def crt_search(residues, moduli):
    """Smallest n ≥ 0 with n ≡ r_i (mod m_i), by walking; None if none."""
    M = math.lcm(*moduli)
    for n in range(M):
        if all((n - r) % m == 0 for r, m in zip(residues, moduli)):
            return n
    return None


class Ball:
    """a + tᵏ F_p[[t]] for a Laurent polynomial a, truncated below tᵏ.

    ``coeffs`` maps exponents (all < k) to nonzero residues mod p.
    """

    def __init__(self, p: int, coeffs: dict, k: int):
        self.p, self.k = p, k
        self.coeffs = {e: c % p for e, c in coeffs.items() if e < k and c % p}

    def key(self):
        return self.p, tuple(sorted(self.coeffs.items())), self.k

    def __eq__(self, other):
        return self.key() == other.key()

    def __repr__(self):
        return f"Ball({self.coeffs}, {self.k})"

    def val(self) -> int:
        """Valuation of the representative, capped at k."""
        return min(self.coeffs, default=self.k)

    def add(self, o):
        out = dict(self.coeffs)
        for e, c in o.coeffs.items():
            out[e] = out.get(e, 0) + c
        return Ball(self.p, out, min(self.k, o.k))

    def neg(self):
        return Ball(self.p, {e: -c for e, c in self.coeffs.items()}, self.k)

    def mul(self, o):
        k = min(self.k + o.k, self.k + o.val(), o.k + self.val())
        out = {}
        for e, c in self.coeffs.items():
            for f, d in o.coeffs.items():
                out[e + f] = out.get(e + f, 0) + c * d
        return Ball(self.p, out, k)

    def meet(self, o):
        diff = self.add(o.neg())
        return Ball(self.p, self.coeffs, min(self.k, o.k, diff.val()))

    def qinv(self):
        v = self.val()
        n = self.k - v
        unit = {e - v: c for e, c in self.coeffs.items()}
        inv = {}
        c0 = pow(unit[0], -1, self.p) if n > 0 else 1
        for i in range(max(n, 0)):
            s = sum(unit.get(i - j, 0) * inv.get(j, 0) for j in range(i))
            inv[i] = ((1 if i == 0 else 0) - s) * c0 % self.p
        return Ball(self.p, {e - v: c for e, c in inv.items()}, self.k - 2 * v)
