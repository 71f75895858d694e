"""Congruences from convex cones, prime projections and rigidity checks."""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import lgroup
from .lgroup import ConvexCone, LElem, cone, cone_member
from .lmonoid import LMonElem, theta_action
from .metric import dist_p
from .prufer import IntDomain, LocalExt, ProductExt, zloc
from .qsring import QsElem, QsModel, RLambda, Unsupported
from .report import Report
from .residue import ResidueModel


@dataclass(frozen=True)
class QuotientDesc:
    model: QsModel
    cone: ConvexCone


def parse_cone(group, text: str) -> ConvexCone:
    """``cone{2,3}`` (prime or coordinate keys), ``cone{}`` or ``cone{*}``."""
    m = re.fullmatch(r"\s*cone\{(.*)\}\s*", text)
    if not m:
        raise ValueError(f"expected cone{{...}}, got {text!r}")
    body = m.group(1).strip()
    if body == "*":
        return cone(group)
    keys = [int(k) for k in body.split(",")] if body else []
    return cone(group, keys)


def cong_equal(q: QuotientDesc, x: QsElem, y: QsElem) -> bool:
    """x ≡ y ⟺ d(x, y) lies in the cone."""
    m = q.model
    return cone_member(q.cone, m.to_lelem(dist_p(m, x.payload, y.payload)))


def cong_equal_p(m: QsModel, c: ConvexCone, x, y) -> bool:
    return cone_member(c, m.to_lelem(dist_p(m, x, y)))


# subdirect factors

def coordinates(model: QsModel, sample=()):
    """Coordinates indexing the locally linear factors met by ``sample``."""
    keys = model.group.all_keys()
    if keys is not None:
        return list(keys)
    found = set()
    for x in sample:
        for a in (model.eplus(x), model.v(x)):
            found.update(model.to_lelem(a).exps)
    return sorted(found)


def project_model(model: QsModel, key) -> QsModel:
    """The locally linear factor of ``model`` at coordinate ``key``."""
    if isinstance(model, ResidueModel):
        ext = model.ext
        if isinstance(ext, ProductExt):
            i, inner = key
            return project_model(ResidueModel(ext.parts[i]), inner)
        if isinstance(ext, LocalExt) and isinstance(ext.domain, IntDomain):
            if not ext.group.has_key(key):
                raise ValueError(f"{key} is not a coordinate of {ext}")
            return ResidueModel(zloc(key))
        if isinstance(ext, LocalExt):
            if key not in ext.S:
                raise ValueError("not a localizing polynomial")
            return ResidueModel(LocalExt(ext.domain, [key]))
    if isinstance(model, RLambda) and model.group.kind == "pointwise":
        if not model.group.has_key(key):
            raise ValueError(f"{key} is not a coordinate")
        return RLambda(lgroup.zn(1), box=model.box)
    raise Unsupported(f"no prime projections for {model.name}")


def project_p(model: QsModel, target: QsModel, key, x):
    if isinstance(model, ResidueModel):
        ext = model.ext
        if isinstance(ext, ProductExt):
            i, inner = key
            return project_p(ResidueModel(ext.parts[i]), target, inner, (x[0][i], x[1][i]))
        g = target.ext.ideal(x[1])
        return target.canon(x[0], g)
    return tuple(LElem.vector(target.group, [a[key]]) for a in x)


def project_prime(x: QsElem, key) -> QsElem:
    target = project_model(x.model, key)
    return QsElem(target, project_p(x.model, target, key, x.payload))


def separating_coordinate(model: QsModel, x, y):
    """A coordinate whose projection tells x and y apart, or None."""
    for key in coordinates(model, (x, y)):
        t = project_model(model, key)
        if project_p(model, t, key, x) != project_p(model, t, key, y):
            return key
    return None


# R^θ

def r_theta_member(x: QsElem, theta: LMonElem) -> bool:
    """θ̃(e⁺(x)) = θ̃(v(x)) = ε."""
    m = x.model
    if not m.superrigid:
        raise Unsupported(f"{m.name} is not superrigid")
    return not theta_action(theta, m.to_lelem(m.eplus(x.payload))) and \
        not theta_action(theta, m.to_lelem(m.v(x.payload)))


# rigidity

def rigidity_report(model: QsModel, sample) -> Report:
    """Is e⁺ injective on sampled idempotents, and onto the sampled Λ₊?"""
    idem = {}
    rigid = True
    for x in sample:
        e = model.ebullet(x)
        lvl = model.eplus(e)
        if lvl in idem and idem[lvl] != e:
            rigid = False
        idem.setdefault(lvl, e)
    levels = {model.lat_pos(model.eplus(x)) for x in sample}
    missing = []
    for a in levels:
        try:
            one = model.one(a)
        except Unsupported:
            if a not in idem:
                missing.append(model.lat_fmt(a))
            continue
        if not (model.in_ebullet(one) and model.eplus(one) == a):
            missing.append(model.lat_fmt(a))
        elif a in idem and idem[a] != one:
            rigid = False
    superrigid = rigid and not missing
    return Report("rigidity", rigid, {
        "rigid": rigid, "superrigid": superrigid,
        "idempotent_levels": len(idem), "levels_checked": len(levels),
        "levels_without_idempotent": sorted(missing)[:10]})


def ebullet_cone_is_full(model: QsModel, sample) -> Report:
    """The convex submonoid generated by d(e, ε), e ∈ E•, contains every sampled α ∈ Λ₊."""
    eps = model.eps()
    gens = [model.to_lelem(dist_p(model, model.ebullet(x), eps)) for x in sample]
    if not gens:
        return Report("ebullet_cone", True, {"generators": 0})
    total = gens[0]
    for g in gens[1:]:
        total = total * g
    bad = []
    for x in sample:
        a = model.to_lelem(model.lat_pos(model.eplus(x)))
        n = 1 + max((abs(v) for v in a.exps.values()), default=0)
        if not a <= total ** n:
            bad.append(str(a))
    return Report("ebullet_cone", not bad, {"generators": len(gens), "outside": bad[:5]})
