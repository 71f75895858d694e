"""The ring B(R) of coherent families, evaluated level by level.

An element φ of B(R) assigns to every α ∈ Λ₊ an element φ(α) with
e⁺(φ(α)) = α, compatibly with truncation.  Families are stored as
functions of the level; residue-backed families φ_y(α) = y mod α also
remember their generator y, which gives exact valuations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from .lgroup import LElem, absval
from .lmonoid import LMonElem, NotIdempotent, complement, evaluate, format_lmon, lmon_ops
from .prufer import Ext, ProductExt, pm_valuation
from .qsring import DomainError, QsModel, RLambda, Unsupported
from .report import Report
from .residue import ResidueModel


@dataclass(frozen=True)
class BElem:
    model: QsModel
    fn: Callable = field(compare=False)
    gen: object = None
    label: str = ""

    def __call__(self, alpha):
        return self.fn(alpha)


def _need_superrigid(model: QsModel):
    if not model.superrigid:
        raise Unsupported(f"{model.name} is not superrigid")


def family(model: ResidueModel, y) -> BElem:
    """φ_y: α ↦ y mod α."""
    y = model.ext.coerce(y)
    return BElem(model, lambda a: model.canon(y, a), y, f"phi_{model.ext.fmt(y)}")


def zero(model: QsModel) -> BElem:
    _need_superrigid(model)
    if isinstance(model, ResidueModel):
        return family(model, model.ext.zero())
    return BElem(model, model.lattice, None, "0")


def unit(model: QsModel) -> BElem:
    _need_superrigid(model)
    if isinstance(model, ResidueModel):
        return family(model, model.ext.one())
    return BElem(model, model.one, None, "1")


def b_eval(phi: BElem, alpha):
    """π_α(φ); α is a model-native level ≥ ε."""
    return phi(alpha)


def _gen_op(phi, psi, op):
    if phi.gen is None or psi.gen is None:
        return None
    ext = phi.model.ext
    return getattr(ext, op)(phi.gen, psi.gen)


def b_add(phi: BElem, psi: BElem) -> BElem:
    m = phi.model
    return BElem(m, lambda a: m.add(phi(a), psi(a)), _gen_op(phi, psi, "add"), "sum")


def b_neg(phi: BElem) -> BElem:
    m = phi.model
    gen = None if phi.gen is None else m.ext.neg(phi.gen)
    return BElem(m, lambda a: m.neg(phi(a)), gen, "neg")


def b_sub(phi: BElem, psi: BElem) -> BElem:
    return b_add(phi, b_neg(psi))


def b_mul_at(phi: BElem, psi: BElem, alpha):
    """φ(α ∙ v(ψ(ε))⁻¹) ∙ ψ(α ∙ v(φ(ε))⁻¹) + α."""
    m = phi.model
    eps = m.lat_eps()
    a1 = m.lat_div(alpha, m.v(psi(eps)))
    a2 = m.lat_div(alpha, m.v(phi(eps)))
    return m.add(m.mul(phi(a1), psi(a2)), m.lattice(alpha))


def b_mul(phi: BElem, psi: BElem, alpha=None):
    """The product family, or its value at ``alpha`` when given."""
    if alpha is not None:
        return b_mul_at(phi, psi, alpha)
    return BElem(phi.model, lambda a: b_mul_at(phi, psi, a), _gen_op(phi, psi, "mul"), "prod")


def w_at(phi: BElem, alpha):
    """w(φ)(α) = v(φ(α))."""
    return phi.model.v(phi(alpha))


def w_of(phi: BElem) -> LMonElem:
    """The valuation of a residue-backed family (checked at level ε)."""
    m = phi.model
    if phi.gen is None:
        raise Unsupported("valuation needs a generator-backed family")
    w = pm_valuation(m.ext, phi.gen)
    eps = m.lat_eps()
    if m.to_lelem(w_at(phi, eps)) != evaluate(w, LElem.eps(m.group)):
        raise AssertionError("valuation certificate mismatch")
    return w


def in_A(phi: BElem) -> bool:
    m = phi.model
    return m.v(phi(m.lat_eps())) == m.lat_eps()


def b_inverse(phi: BElem) -> BElem:
    """ψ(α) = φ(α γ₊²)⁻¹ + α for φ with w(φ) = γ ∈ Λ (a unit of B)."""
    m = phi.model
    if phi.gen is None:
        raise Unsupported("inverse needs a generator-backed family")
    w = pm_valuation(m.ext, phi.gen)
    if not w.in_group():
        raise DomainError(f"{m.ext.fmt(phi.gen)} is not a unit of B")
    gp = m.from_lelem(w.to_lelem() | LElem.eps(m.group))

    def fn(a):
        lvl = m.lat_mul(a, m.lat_mul(gp, gp))
        return m.add(m.qinv(phi(lvl)), m.lattice(a))

    return BElem(m, fn, m.ext.div(m.ext.one(), phi.gen), "inv")


# the rings T_α

def in_T(model: QsModel, alpha, a) -> bool:
    return model.eplus(a) == alpha and model.lat_leq(model.lat_eps(), model.v(a))


def t_add(model: QsModel, alpha, a, b):
    return model.add(a, b)


def t_mul(model: QsModel, alpha, a, b):
    """x · y = x ∙ y + α."""
    return model.add(model.mul(a, b), model.lattice(alpha))


def trunc_ring_ops(model: QsModel, alpha, op: str, a=None, b=None):
    """Ring operations of T_α = {x : e⁺(x) = α, v(x) ≥ ε}."""
    for x in (a, b):
        if x is not None and not in_T(model, alpha, x):
            raise DomainError(f"{model.fmt(x)} is not in T_{model.lat_fmt(alpha)}")
    if op == "add":
        return t_add(model, alpha, a, b)
    if op == "sub":
        return model.add(a, model.neg(b))
    if op == "neg":
        return model.neg(a)
    if op == "mul":
        return t_mul(model, alpha, a, b)
    if op == "one":
        return model.one(alpha)
    if op == "zero":
        return model.lattice(alpha)
    raise ValueError(f"unknown ring operation {op!r}")


# idempotents

def eta(model: QsModel, theta: LMonElem, alpha):
    """η(θ)(α) = θ(α) ∨ 1_{α/θ(α)}."""
    _need_superrigid(model)
    if not theta.is_idempotent():
        raise NotIdempotent(f"{theta} is not idempotent")
    a = model.to_lelem(alpha)
    t = model.from_lelem(evaluate(theta, a))
    return model.join(model.lattice(t), model.one(model.lat_div(alpha, t)))


def idempotents_over(group, keys):
    """All idempotents of Λ̂ supported on ``keys`` (∞ on a subset)."""
    keys = list(keys)
    for bits in itertools.product((0, 1), repeat=len(keys)):
        yield LMonElem.make(group, 0, {k: float("inf") for k, b in zip(keys, bits) if b})


def idempotent_report(model: QsModel, alpha) -> Report:
    """η(θ) at level α over every θ supported on the coordinates of α."""
    a = model.to_lelem(alpha)
    keys = sorted(a.exps)
    thetas = list(idempotents_over(model.group, keys))

    def sig(t):
        # only the coordinates of α are visible at level α
        return frozenset(k for k in keys if t.entry(k) == float("inf"))

    img = {sig(t): eta(model, t, alpha) for t in thetas}
    fails = []
    for t in thetas:
        e = img[sig(t)]
        if trunc_ring_ops(model, alpha, "mul", e, e) != e:
            fails.append(("not idempotent", str(t)))
        if model.to_lelem(model.v(e)) != evaluate(t, a):
            fails.append(("valuation", str(t)))
        if img[sig(complement(t))] != trunc_ring_ops(
                model, alpha, "sub", model.one(alpha), e):
            fails.append(("complement", str(t)))
    for s, t in itertools.product(thetas, repeat=2):
        # the join of idempotents goes to the product of their images
        if img[sig(lmon_ops("join", s, t))] != trunc_ring_ops(
                model, alpha, "mul", img[sig(s)], img[sig(t)]):
            fails.append(("product", f"{s},{t}"))
    return Report("eta", not fails, {"level": model.lat_fmt(alpha), "idempotents": len(thetas),
                                     "failures": fails[:5]})


# the Prüfer criterion

def prufer_witness(phi: BElem):
    """ψ ∈ A with φψ ∈ A and φ(1 − φψ) ∈ A, and the checks performed."""
    m = phi.model
    if not m.complete:
        raise Unsupported(f"{m.name} is not complete")
    if phi.gen is None:
        raise Unsupported("witness construction needs a generator-backed family")
    eps = m.lat_eps()
    gamma = m.lat_div(eps, m.v(phi(eps)))
    inv = m.qinv(phi(gamma))
    psi = family(m, inv[0])
    one = unit(m)
    prod = b_mul(phi, psi)
    rest = b_mul(phi, b_sub(one, prod))
    g2 = m.lat_mul(gamma, gamma)
    checks = {
        "psi_in_A": in_A(psi),
        "phi_psi_in_A": in_A(prod),
        "phi_rest_in_A": in_A(rest),
        "psi_below_inverse": m.leq(psi(g2), inv),
    }
    return psi, Report("prufer_witness", all(checks.values()),
                       {"gamma": m.lat_fmt(gamma), "psi": m.ext.fmt(inv[0]), **checks})


# round trip at a truncation level

def _level(ext: Ext, n):
    return ext.ideal(ext.coerce(n))


def tn_report(model: ResidueModel, alpha, tables: bool = True) -> Report:
    """T_α of B(R) against A/α: bijection plus full ring tables.

    The oracle is arithmetic in A/α on canonical representatives
    (plain integers mod n for ℤ ⊂ ℚ).
    """
    ext = model.ext
    reps = [ext.coerce(r) for r in ext.residues(alpha)]
    image = [b_eval(family(model, r), alpha) for r in reps]
    outside = [model.fmt(x) for x in image if not in_T(model, alpha, x)]
    size = ext.quotient_size(alpha)
    bijective = not outside and len(set(image)) == len(reps) == size
    bad = []
    if tables and bijective:
        n = len(reps)
        if getattr(ext, "_zinq", False):
            def idx_add(i, j):
                return (i + j) % n

            def idx_mul(i, j):
                return i * j % n
        else:
            index = {r: i for i, r in enumerate(reps)}

            def idx_add(i, j):
                return index[ext.reduce(ext.add(reps[i], reps[j]), alpha)]

            def idx_mul(i, j):
                return index[ext.reduce(ext.mul(reps[i], reps[j]), alpha)]
        for i, x in enumerate(image):
            for j, y in enumerate(image):
                if t_add(model, alpha, x, y) != image[idx_add(i, j)] or \
                        t_mul(model, alpha, x, y) != image[idx_mul(i, j)]:
                    bad.append((model.fmt(x), model.fmt(y)))
                    break
            if bad:
                break
        one = trunc_ring_ops(model, alpha, "one")
        if one != image[reps.index(ext.reduce(ext.one(), alpha))]:
            bad.append(("one",))
    return Report("tn", bijective and not bad,
                  {"level": model.lat_fmt(alpha), "size": size, "bijective": bijective,
                   "outside": outside[:1], "mismatch": bad[:1]})


def _window_reps(ext, alpha, dens):
    """Classes of B/α with a representative k/d, d in ``dens``."""
    for d in dens:
        d = ext.coerce(d)
        for k in ext.residues(ext.ideal(ext.mul(d, alpha))):
            yield ext.div(ext.coerce(k), d)


def roundtrip_check(ext: Ext, levels, dens=(1, 2, 3)) -> Report:
    """B(R(ext)) against ext level by level, and the counit on a window."""
    model = ResidueModel(ext)
    per_level = []
    ok = True
    for n in levels:
        alpha = _level(ext, n)
        tn = tn_report(model, alpha)
        counit_ok = True
        seen = 0
        for x in _window_reps(ext, alpha, dens):
            r = model.canon(x, alpha)
            seen += 1
            if b_eval(family(model, r[0]), alpha) != r:
                counit_ok = False
                break
        per_level.append({"level": model.lat_fmt(alpha), "slice": tn.passed,
                          "counit": counit_ok, "window": seen})
        ok = ok and tn.passed and counit_ok
    return Report("roundtrip", ok, {"ext": str(ext), "levels": per_level})


# families of RLambda on a window

def rlambda_families(model: RLambda, top: LElem):
    """Coherent, e⁺-exact families below ``top`` (determined by their top value)."""
    group = model.group
    keys = group.all_keys()
    eps = LElem.eps(group)
    out = []
    box = [range(-top[k], top[k] + 1) for k in keys]
    for vals in itertools.product(*box):
        g = LElem.vector(group, vals)
        d = top / g
        if not d >= eps or absval(g) & d != eps:
            continue
        x = (g, d)
        levels = [LElem.vector(group, v) for v in itertools.product(
            *(range(top[k] + 1) for k in keys))]
        fam = {a: model.add(x, model.lattice(a)) for a in levels}
        if all(model.eplus(v) == a for a, v in fam.items()) and all(
                model.leq(fam[a], fam[b]) for a in levels for b in levels if a <= b):
            out.append(x)
    return out


def _unit_probes(ext: Ext):
    """Reciprocals 1/p of a few coordinate generators p of the extension."""
    keys = ext.group.all_keys() or (2, 3, 5)
    d = ext.domain
    gens = [ext.coerce(d.key_elem(k)) for k in list(keys)[:6]]
    return [(ext.fmt(g), ext.div(ext.one(), g)) for g in gens]


def manis_hypothesis_report(model: QsModel, top=None) -> Report:
    """Whether w on B(R) takes values outside ε, so that its units exhaust Λ.

    Residue models: φ_{1/p} has valuation p⁻¹ for every coordinate p.
    RLambda: every coherent family below ``top`` already lies in A, so A = B.
    """
    if isinstance(model, ResidueModel):
        parts = model.ext.parts if isinstance(model.ext, ProductExt) else (model.ext,)
        vals = {}
        for i, ext in enumerate(parts):
            sub = ResidueModel(ext)
            for k, y in _unit_probes(ext):
                name = k if len(parts) == 1 else f"[{i}]{k}"
                vals[name] = format_lmon(w_of(family(sub, y)))
        holds = all(v != "1" for v in vals.values())
        return Report("manis_hypothesis", holds, {"model": model.name, "valuations": vals})
    if isinstance(model, RLambda):
        if top is None:
            top = LElem.vector(model.group, [2] * len(model.group.all_keys()))
        eps = LElem.eps(model.group)
        fams = rlambda_families(model, top)
        outside = [model.fmt(x) for x in fams
                   if model.v(model.add(x, model.lattice(eps))) != eps]
        return Report("manis_hypothesis", bool(outside),
                      {"model": model.name, "families": len(fams), "outside_A": outside[:3]})
    raise Unsupported(f"no family enumeration for {model.name}")
