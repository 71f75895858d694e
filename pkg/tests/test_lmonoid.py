import random

import pytest

from residua import lgroup as L
from residua import lmonoid as M
from residua.lmonoid import NotIdempotent

Q = L.rationals()
INF = float("inf")


def m(text):
    return M.parse_lmon(Q, text)


def q(text):
    return L.parse_lelem(Q, text)


def test_products():
    assert M.lmon_ops("mul", m("2^-1*3^inf"), m("2^3*3^-2")) == m("2^2*3^inf")
    phi = m("2^5*7^-1")
    assert M.lmon_ops("mul", M.omega(Q), phi) == M.omega(Q)
    t = M.lmon_ops("mul", m("2^inf"), m("3^inf"))
    assert t == m("2^inf*3^inf") == M.lmon_ops("join", m("2^inf"), m("3^inf"))


def test_evaluation():
    assert M.evaluate(m("2^inf*3^-1"), q("12")) == q("4/3")
    assert M.evaluate(M.omega(Q), q("12")) == q("12")
    g = q("9/4")
    assert M.evaluate(M.embed(g), q("9")) == g


def test_evaluation_matches_componentwise_min():
    rng = random.Random(2)
    primes = [2, 3, 5, 7]
    for _ in range(200):
        exps = {p: rng.choice([INF, rng.randint(-3, 3)]) for p in primes if rng.random() < 0.6}
        text = "*".join(f"{p}^{'inf' if e == INF else e}" for p, e in exps.items()) or "1"
        a = {p: rng.randint(0, 3) for p in primes}
        alpha = L.LElem.make(Q, {p: e for p, e in a.items() if e})
        got = M.evaluate(m(text), alpha)
        expect = {}
        for p in primes:
            e = exps.get(p, 0)
            v = a[p] if e == INF else min(e, a[p])
            if v:
                expect[p] = v
        assert got == L.LElem.make(Q, expect)


def test_decompose():
    plus, minus = M.decompose(m("2^-1*3^inf*5^2"))
    assert plus == m("3^inf*5^2") and minus == q("2")
    assert M.decompose(M.omega(Q)) == (M.omega(Q), q("1"))
    plus, minus = M.decompose(M.embed(q("12/35")))
    assert plus == M.embed(q("12")) and minus == q("35")


def test_complement():
    c = M.complement(m("2^inf"))
    assert c.entry(2) == 0 and c.entry(3) == INF
    assert M.complement(M.eps(Q)) == M.omega(Q)
    assert M.complement(M.omega(Q)) == M.eps(Q)


def test_theta_action_and_bar_qinv():
    assert M.theta_action(m("2^inf"), q("12")) == q("4")
    assert M.theta_action(M.omega(Q), q("12")) == q("12")
    assert M.theta_action(M.eps(Q), q("12")) == q("1")
    assert M.bar_qinv(q("9"), m("2^inf")) == m("3^-2*2^inf")
    assert M.bar_qinv(q("1"), M.omega(Q)) == M.omega(Q)
    t = m("2^inf")
    g = q("5/7")
    once = M.bar_qinv(g, t)
    assert once == M.lmon_ops("mul", M.embed(~g), t)
    assert M.bar_qinv(~g, t) == M.lmon_ops("mul", M.embed(g), t)


def test_idempotent_required():
    with pytest.raises(NotIdempotent):
        M.complement(m("2^3"))


def test_text_round_trip():
    for text in ("2^3*5^inf*7^-1", "omega", "1"):
        assert M.format_lmon(m(text)) == text
