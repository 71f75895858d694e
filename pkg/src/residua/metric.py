"""Distances, cells and medians on a directed cr-qsring.

The ``*_p`` helpers act on raw payloads of a model and return
model-native levels; the public functions take ``QsElem`` values and
return ``LElem`` levels.
"""

from __future__ import annotations

import itertools

from .lgroup import LElem
from .prufer import IntDomain, LocalExt, ProductExt
from .qsring import DomainError, NotIncident, QsElem, QsModel, Unsupported, _pair


def lam_p(m: QsModel, x, y):
    """λ(x, y) = e⁺(x) / e⁺(x ∧ y)."""
    return m.lat_div(m.eplus(x), m.eplus(m.meet(x, y)))


def dist_p(m: QsModel, x, y):
    return m.lat_mul(lam_p(m, x, y), lam_p(m, y, x))


def gromov_p(m: QsModel, x, y, z):
    """(x, y)_z = e⁺(z) e⁺(x∧y) / (e⁺(x∧z) e⁺(y∧z))."""
    top = m.lat_mul(m.eplus(z), m.eplus(m.meet(x, y)))
    bottom = m.lat_mul(m.eplus(m.meet(x, z)), m.eplus(m.meet(y, z)))
    return m.lat_div(top, bottom)


def in_cell_p(m: QsModel, z, x, y) -> bool:
    return m.lat_mul(dist_p(m, x, z), dist_p(m, z, y)) == dist_p(m, x, y)


def in_cell_def_p(m: QsModel, z, x, y) -> bool:
    """x ∧ y ≤ z = (x ∧ z) ∨ (y ∧ z), straight from the definition."""
    if not m.leq(m.meet(x, y), z):
        return False
    try:
        return m.join(m.meet(x, z), m.meet(y, z)) == z
    except NotIncident:
        return False


def below_p(m: QsModel, a, alpha):
    """a + e⁺(a)/α: the element under a at distance α."""
    return m.add(a, m.lattice(m.lat_div(m.eplus(a), alpha)))


def lff_join_p(m: QsModel, x, y):
    """The point z of [x, y] with d(x, z) = d(y, x∧y) and d(y, z) = d(x, x∧y)."""
    if not m.lff:
        raise Unsupported(f"{m.name} is not lff")
    lxy, lyx = lam_p(m, x, y), lam_p(m, y, x)
    z1 = m.add(x, m.lattice(m.lat_div(m.eplus(x), m.lat_meet(lyx, lxy))))
    z2 = m.add(y, m.lattice(m.lat_div(m.lat_mul(m.eplus(y), m.lat_join(lyx, lxy)),
                                      m.lat_mul(lxy, lyx))))
    return m.join(z1, z2)


# public API on QsElem

def lam(x: QsElem, y: QsElem) -> LElem:
    m, a, b = _pair(x, y)
    return m.to_lelem(lam_p(m, a, b))


def dist(x: QsElem, y: QsElem) -> LElem:
    m, a, b = _pair(x, y)
    return m.to_lelem(dist_p(m, a, b))


def gromov(x: QsElem, y: QsElem, z: QsElem) -> LElem:
    m, a, b = _pair(x, y)
    _pair(x, z)
    return m.to_lelem(gromov_p(m, a, b, z.payload))


def in_cell(z: QsElem, x: QsElem, y: QsElem) -> bool:
    m, a, b = _pair(x, y)
    _pair(x, z)
    return in_cell_p(m, z.payload, a, b)


def median(x: QsElem, y: QsElem, z: QsElem) -> QsElem:
    m, a, b = _pair(x, y)
    _pair(x, z)
    return QsElem(m, m.median(a, b, z.payload))


def lff_join(x: QsElem, y: QsElem) -> QsElem:
    m, a, b = _pair(x, y)
    return QsElem(m, lff_join_p(m, a, b))


def below(a: QsElem, alpha: LElem) -> QsElem:
    m = a.model
    if not alpha >= LElem.eps(alpha.group):
        raise DomainError(f"{alpha} is not in Λ₊")
    return QsElem(m, below_p(m, a.payload, m.from_lelem(alpha)))


# finite enumeration, used by oracles

def _integral_divisors(ext, n):
    """Canonical generators of the integral ideals dividing n."""
    if isinstance(ext, ProductExt):
        for combo in itertools.product(*(_integral_divisors(p, c)
                                         for p, c in zip(ext.parts, n))):
            yield tuple(combo)
        return
    if not isinstance(ext, LocalExt) or not isinstance(ext.domain, IntDomain):
        raise Unsupported("divisor enumeration needs an integer extension")
    exps = ext.to_lelem(n).exps
    keys = list(exps)
    d = ext.domain
    for es in itertools.product(*(range(exps[k] + 1) for k in keys)):
        g = d.one
        for k, e in zip(keys, es):
            g = g * d.coerce(d.key_elem(k)) ** e
        yield g


def enumerate_between(m, low, high_gen):
    """Every payload z with low ≤ z and e⁺(z) dividing ``high_gen``.

    Candidates are z = rep(low) + e⁺(low)·k over the residues k of
    A / (h / e⁺(low)) for each intermediate level h.
    """
    ext = m.ext
    base, g = low
    for ratio in _integral_divisors(ext, ext.idiv(high_gen, g)):
        h = ext.imul(g, ratio)
        for k in ext.residues(ratio):
            yield ext.reduce(ext.add(base, ext.mul(g, ext.coerce(k))), h), h


def enumerate_cell(m, x, y):
    """[x, y] for a residue model over ℤ, by brute force."""
    low = m.meet(x, y)
    top = m.ext.ilcm(x[1], y[1])
    return [z for z in enumerate_between(m, low, top) if in_cell_def_p(m, z, x, y)]
