import random
from fractions import Fraction

import pytest

from residua.prufer import prod, zinq, zloc, fptloc
from residua.qsring import NotIncident, QsElem, derived, one_alpha
from residua.residue import ResidueModel, build_model, canon, coherent_family, dist_formula

from _oracles import (F, canon as coset, coset_add, coset_contains, coset_join, coset_meet,
                      coset_mul, inverse_by_search)

ZQ = build_model("Z⊂Q")


def el(text, m=ZQ):
    return m.parse(text)


def frac_pair(x):
    return F(x[0]), F(x[1])


def sample_pairs(n, seed, m=ZQ):
    rng = random.Random(seed)
    for _ in range(n):
        yield m.sample(rng), m.sample(rng)


def test_examples():
    assert ZQ.fmt(ZQ.add(el("1 mod 4"), el("3 mod 6"))) == "0 mod 2"
    assert ZQ.fmt(ZQ.mul(el("1 mod 4"), el("2 mod 8"))) == "2 mod 8"
    assert ZQ.mul(el("3 mod 8"), el("1 mod 8")) == el("3 mod 8")
    assert ZQ.fmt(ZQ.qinv(el("3 mod 8"))) == "3 mod 8"
    assert ZQ.fmt(ZQ.qinv(el("2 mod 8"))) == "1/2 mod 2"
    assert ZQ.fmt(ZQ.meet(el("1 mod 4"), el("3 mod 8"))) == "1 mod 2"
    assert ZQ.fmt(ZQ.join(el("1 mod 4"), el("2 mod 9"))) == "29 mod 36"
    with pytest.raises(NotIncident):
        ZQ.join(el("1 mod 4"), el("3 mod 4"))
    assert ZQ.fmt(ZQ.one(ZQ.ext.coerce(6))) == "1 mod 6"


def test_derived_parts_example():
    eplus, ebullet, v = derived(QsElem(ZQ, el("2 mod 8")))
    assert str(eplus) == "8" and ebullet.payload == el("1 mod 4") and str(v) == "2"


def test_canon_and_coherent_family():
    assert ZQ.fmt(canon(ZQ, 9, 4)) == "1 mod 4"
    assert ZQ.fmt(canon(ZQ, "-1/2", 2)) == "3/2 mod 2"
    assert canon(ZQ, 0, 5) == ZQ.lattice(ZQ.ext.coerce(5))
    x = el("1 mod 4")
    assert ZQ.fmt(coherent_family(ZQ, x, 16)) == "1 mod 16"
    assert ZQ.fmt(coherent_family(ZQ, x, 2)) == "1 mod 2"
    assert ZQ.fmt(coherent_family(ZQ, el("3/2 mod 2"), 8)) == "3/2 mod 8"


def test_dist_formula():
    assert dist_formula(ZQ, el("1 mod 4"), el("3 mod 8")) == 8
    assert dist_formula(ZQ, el("5 mod 12"), el("0 mod 1")) == 12
    x = el("7/3 mod 5")
    assert dist_formula(ZQ, x, x) == 1


def test_canonical_form_matches_coset_oracle():
    rng = random.Random(0)
    for _ in range(300):
        x, q = Fraction(rng.randint(-99, 99), rng.randint(1, 30)), Fraction(rng.randint(1, 30), rng.randint(1, 30))
        assert frac_pair(ZQ.canon(ZQ.ext.coerce(str(x)), ZQ.ext.coerce(str(q)))) == coset(x, q)


def test_add_mul_meet_match_coset_hulls():
    for x, y in sample_pairs(300, 1):
        fx, fy = frac_pair(x), frac_pair(y)
        assert frac_pair(ZQ.add(x, y)) == coset_add(fx, fy)
        assert frac_pair(ZQ.mul(x, y)) == coset_mul(fx, fy)
        assert frac_pair(ZQ.meet(x, y)) == coset_meet(fx, fy)
        assert frac_pair(ZQ.neg(x)) == coset(-fx[0], fx[1])


def test_join_is_coset_intersection():
    rng = random.Random(2)
    hits = 0
    for _ in range(300):
        g, h = rng.randint(1, 40), rng.randint(1, 40)
        x = ZQ.canon(ZQ.ext.coerce(rng.randrange(g)), g)
        y = ZQ.canon(ZQ.ext.coerce(rng.randrange(h)), h)
        oracle = coset_join(frac_pair(x), frac_pair(y))
        try:
            got = frac_pair(ZQ.join(x, y))
        except NotIncident:
            got = None
        assert got == oracle
        hits += got is not None
    assert hits > 50


def test_order_is_coset_containment():
    for x, y in sample_pairs(300, 3):
        m = ZQ.meet(x, y)
        for a, b in ((m, x), (x, y), (x, m)):
            # a ≤ b means the coset b sits inside the coset a
            assert ZQ.leq(a, b) == coset_contains(frac_pair(a), frac_pair(b))


@pytest.mark.parametrize("text", ["3 mod 8", "2 mod 8", "4 mod 8", "6 mod 8", "1/2 mod 2", "0 mod 4"])
def test_quasi_inverse_is_the_unique_regular_inverse(text):
    x = frac_pair(el(text))
    levels = [Fraction(2) ** e for e in range(-4, 4)]
    found = inverse_by_search(x, coset_mul, levels)
    assert found == [frac_pair(ZQ.qinv(el(text)))]


def test_quasi_inverse_on_samples():
    rng = random.Random(5)
    m = ResidueModel(zinq(), height=6, max_exp=2, primes=(2, 3))
    for _ in range(300):
        x = m.sample(rng)
        fx, fz = frac_pair(x), frac_pair(m.qinv(x))
        assert coset_mul(coset_mul(fx, fz), fx) == fx
        assert coset_mul(coset_mul(fz, fx), fz) == fz


def test_one_alpha():
    assert one_alpha(ZQ, ZQ.to_lelem(ZQ.ext.coerce(6))).payload == el("1 mod 6")
    assert one_alpha(ZQ, ZQ.to_lelem(ZQ.ext.coerce(1))).payload == ZQ.eps()


def test_models():
    two = build_model("Zloc{2}")
    assert two.locally_linear and two.median_flag
    assert not ZQ.locally_linear and ZQ.median_flag
    p = build_model("prod(Zloc{2}, Zloc{3})")
    assert p.fmt(p.parse("(1 mod 4 | 2 mod 9)")) == "(1 mod 4 | 2 mod 9)"


def test_product_is_componentwise():
    p = ResidueModel(prod(zloc(2), zloc(3)))
    parts = [ResidueModel(zloc(2)), ResidueModel(zloc(3))]
    rng = random.Random(6)
    for _ in range(200):
        x, y = p.sample(rng), p.sample(rng)
        for op in ("add", "mul", "meet"):
            got = getattr(p, op)(x, y)
            for i, q in enumerate(parts):
                xi, yi = (x[0][i], x[1][i]), (y[0][i], y[1][i])
                assert (got[0][i], got[1][i]) == getattr(q, op)(xi, yi)
        inv = p.qinv(x)
        for i, q in enumerate(parts):
            assert (inv[0][i], inv[1][i]) == q.qinv((x[0][i], x[1][i]))


def test_local_model_uses_local_units():
    two = build_model("Zloc{2}")
    # 3 is a unit of ℤ₍₂₎, so 3 mod 4 has an exact inverse modulo 4
    assert two.fmt(two.qinv(two.parse("3 mod 4"))) == two.fmt(two.parse("3 mod 4"))
    assert two.parse("1/3 mod 4") == two.parse("3 mod 4")


def test_polynomial_residues():
    m = ResidueModel(fptloc(2, "t"))
    x = m.parse("{t+1} mod {t^3}")
    y = m.parse("t mod {t^2}")
    assert m.fmt(m.mul(x, y)) == "t mod {t^2}"
    assert m.fmt(m.add(m.parse("1 mod {t^2}"), m.parse("1 mod {t^3}"))) == "0 mod {t^2}"
    assert m.fmt(m.qinv(m.parse("t mod {t^3}"))) == "{1/t} mod t"


def test_text_round_trip():
    for x, _ in sample_pairs(200, 7):
        assert ZQ.parse(ZQ.fmt(x)) == x
