import random
from fractions import Fraction

from residua import lgroup
from residua.congruence import (QuotientDesc, cong_equal, coordinates, ebullet_cone_is_full,
                                parse_cone, project_model, project_prime, r_theta_member,
                                rigidity_report, separating_coordinate)
from residua.lmonoid import parse_lmon
from residua.prufer import zinq
from residua.qsring import LFl, QsElem, RLambda
from residua.residue import ResidueModel, build_model

from _oracles import F

ZQ = build_model("Z⊂Q")


def e(text):
    return QsElem(ZQ, ZQ.parse(text))


def test_cone_congruence():
    two = QuotientDesc(ZQ, parse_cone(ZQ.group, "cone{2}"))
    assert cong_equal(two, e("1 mod 4"), e("3 mod 8"))
    assert not cong_equal(two, e("1 mod 4"), e("2 mod 3"))
    trivial = QuotientDesc(ZQ, parse_cone(ZQ.group, "cone{}"))
    assert cong_equal(trivial, e("1 mod 4"), e("1 mod 4"))
    assert not cong_equal(trivial, e("1 mod 4"), e("5 mod 8"))


def test_prime_projection_examples():
    x = e("5 mod 12")
    assert str(project_prime(x, 2)) == "1 mod 4"
    assert str(project_prime(x, 3)) == "2 mod 3"
    assert str(project_prime(x, 5)) == "0 mod 1"


def _p_part(q: Fraction, p: int) -> Fraction:
    n, d, out = q.numerator, q.denominator, Fraction(1)
    while n % p == 0:
        n //= p
        out *= p
    while d % p == 0:
        d //= p
        out /= p
    return out


def test_projection_is_local_reduction():
    """Oracle: the p-part of the modulus, the representative read in ℤ₍ₚ₎."""
    rng = random.Random(1)
    for _ in range(200):
        x = ZQ.sample(rng)
        a, g = F(x[0]), F(x[1])
        for p in (2, 3, 5):
            mod = _p_part(g, p)
            got = project_prime(QsElem(ZQ, x), p).payload
            # got ≡ a in ℤ₍ₚ₎ modulo mod: the difference over mod has no p in the denominator
            diff = (F(got[0]) - a) / mod
            assert F(got[1]) == mod and diff.denominator % p != 0


def test_separation():
    rng = random.Random(2)
    for _ in range(200):
        x, y = ZQ.sample(rng), ZQ.sample(rng)
        key = separating_coordinate(ZQ, x, y)
        assert (key is None) == (x == y)


def test_r_theta():
    two = parse_lmon(ZQ.group, "2^inf")
    assert r_theta_member(e("2 mod 3"), two)
    assert not r_theta_member(e("5 mod 12"), two)
    eps = parse_lmon(ZQ.group, "1")
    assert r_theta_member(e("5 mod 12"), eps)


def test_rigidity():
    rng = random.Random(3)
    zq = ResidueModel(zinq())
    sample = [zq.sample(rng) for _ in range(200)]
    rep = rigidity_report(zq, sample)
    assert rep.details["rigid"] and rep.details["superrigid"]
    rl = RLambda(lgroup.zn(2))
    rep = rigidity_report(rl, [rl.sample(rng) for _ in range(200)])
    assert rep.details["superrigid"]
    lf = LFl(2, 0)
    rep = rigidity_report(lf, [lf.sample(rng) for _ in range(200)])
    assert rep.details["rigid"] and not rep.details["superrigid"]


def test_ebullet_cone_is_full():
    rng = random.Random(4)
    for m in (ResidueModel(zinq()), RLambda(lgroup.zn(1)), LFl(3, 1)):
        assert ebullet_cone_is_full(m, [m.sample(rng) for _ in range(300)])


def test_coordinates_of_pointwise_models():
    assert coordinates(RLambda(lgroup.zn(2))) == [0, 1]
    assert project_model(RLambda(lgroup.zn(2)), 1).group == lgroup.zn(1)
