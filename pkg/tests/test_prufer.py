import random
from fractions import Fraction

import pytest

from residua import lmonoid as M
from residua import prufer as P
from residua.lgroup import parse_lelem, rationals

from _oracles import F, crt_search, rat_gcd

Z = P.zinq()


def gens(ext, *xs):
    return P.ModuleGens(ext, [ext.coerce(x) for x in xs])


def test_module_reduce():
    assert str(P.module_reduce(gens(Z, "4/3", 6))) == "2/3"
    assert P.module_reduce(gens(Z, 0)) is P.ZERO
    assert str(P.module_reduce(gens(Z, 1))) == "1"


def test_module_reduce_is_rational_gcd():
    rng = random.Random(1)
    for _ in range(200):
        xs = [Fraction(rng.randint(-60, 60), rng.randint(1, 60)) for _ in range(3)]
        got = P.module_reduce(gens(Z, *[str(x) for x in xs]))
        g = rat_gcd(xs)
        if g == 0:
            assert got is P.ZERO
        else:
            assert got == parse_lelem(rationals(), str(g))


def test_valuation():
    assert M.format_lmon(P.pm_valuation(Z, 12)) == "2^2*3^1"
    assert P.pm_valuation(Z, 0) == M.omega(rationals())
    two = P.prod(P.zinq(), P.zinq())
    v = P.pm_valuation(two, (5, 0))
    assert v.entry((0, 5)) == 1 and v.entry((1, 7)) == float("inf")


def test_what_hat():
    assert str(P.what_hat(gens(Z, "4/3", 6))) == "2^1*3^-1"
    assert P.what_hat(gens(Z, 0, 0)) == M.omega(rationals())
    assert P.what_hat(gens(Z, 1, 12)) == M.eps(rationals())


@pytest.mark.parametrize("x,y", [("1/2", 2), ("3/4", -4), ("5", 0)])
def test_p2_witness_examples(x, y):
    assert P.p2_witness(Z, Z.coerce(x)) == y


def _p2_holds(x: Fraction, y: Fraction, in_A) -> bool:
    xy = x * y
    return in_A(y) and in_A(xy) and in_A(x * (1 - xy))


def test_p2_witness_against_integrality():
    rng = random.Random(7)
    for _ in range(500):
        x = Fraction(rng.randint(-1000, 1000), rng.randint(1, 1000))
        y = F(P.p2_witness(Z, Z.coerce(str(x))))
        assert _p2_holds(x, y, lambda r: r.denominator == 1)


def test_p2_witness_local():
    ext = P.zloc(2, 3)

    def local(r):
        return r.denominator % 2 and r.denominator % 3

    rng = random.Random(8)
    for _ in range(300):
        x = Fraction(rng.randint(-500, 500), rng.randint(1, 500))
        y = F(P.p2_witness(ext, ext.coerce(str(x))))
        assert _p2_holds(x, y, local)


def test_p2_witness_polynomial():
    from sympy import GF, Poly, symbols
    t = symbols("t")
    ext = P.fptloc(3, "t", "t+1")
    K = GF(3)

    def to_poly(coeffs):
        return Poly(list(reversed(coeffs)), t, domain=K)

    def in_A(num, den):
        d = to_poly(den)
        return d.eval(0) != 0 and d.eval(-1) != 0 or (to_poly(num).is_zero)

    rng = random.Random(9)
    for _ in range(100):
        num = tuple(rng.randrange(3) for _ in range(rng.randint(1, 4)))
        den = (1,) + tuple(rng.randrange(3) for _ in range(rng.randint(0, 3)))
        if not any(den[1:]) and den[0] == 0 or all(c == 0 for c in num):
            continue
        x = ext.domain.frac(num, den)
        y = P.p2_witness(ext, x)
        for val in (y, x * y, x * (1 - x * y)):
            n, d = to_poly(val.numerator), to_poly(val.denominator)
            g = n.gcd(d)
            d = d.quo(g)
            assert n.is_zero or (d.eval(0) != 0 and d.eval(2) != 0)


def test_manis_coverage():
    primes = [p for p in range(2, 101) if all(p % d for d in range(2, p))]
    rep = P.is_manis_report(Z, [Z.coerce(f"1/{p}") for p in primes])
    assert rep.details["covered"] == primes
    assert P.is_manis_report(Z, []).details["covered"] == []
    loc = P.zloc(2, 3)
    rep = P.is_manis_report(loc, [loc.coerce("1/2"), loc.coerce("1/3")])
    assert rep.details["full"]


def test_reduce_and_crt():
    assert Z.reduce(Z.coerce("-1/2"), Z.coerce(2)) == Z.coerce("3/2")
    assert Z.crt([(Z.coerce(1), Z.coerce(4)), (Z.coerce(2), Z.coerce(9))]) % 36 == 29
    rng = random.Random(4)
    for _ in range(200):
        m1, m2 = rng.randint(1, 40), rng.randint(1, 40)
        r1, r2 = rng.randrange(m1), rng.randrange(m2)
        oracle = crt_search([r1, r2], [m1, m2])
        if oracle is None:
            continue
        got = Z.crt([(Z.coerce(r1), Z.coerce(m1)), (Z.coerce(r2), Z.coerce(m2))])
        L = m1 * m2 // __import__("math").gcd(m1, m2)
        assert int(F(got)) % L == oracle


def test_local_membership():
    z2 = P.zloc(2)
    assert z2.in_A(z2.coerce("1/3")) and not z2.in_A(z2.coerce("1/2"))
    f = P.fptloc(2, "t")
    assert f.in_A(f.parse("(t+1)/(t^2+t+1)")) and not f.in_A(f.parse("1/t"))


@pytest.mark.parametrize("text", ["Z⊂Q", "Zloc{2,3}", "F3[t]loc{t,t+1}", "prod(Z⊂Q, Z⊂Q)"])
def test_descriptor_round_trip(text):
    assert str(P.parse_ext(text)) == text


def test_bad_descriptor():
    with pytest.raises(ValueError):
        P.parse_ext("Q[x]")
