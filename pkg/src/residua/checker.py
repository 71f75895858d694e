"""Seeded property suites over the models, plus brute-force oracles.

Each trial draws its own ``random.Random`` from ``(seed, trial)``, so a
report depends only on the model, suite, trial count and seed.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable

from . import metric
from .congruence import (cong_equal_p, coordinates, ebullet_cone_is_full, project_model,
                         project_p, rigidity_report, separating_coordinate)
from .lgroup import LElem, cone
from .metric import (below_p, dist_p, enumerate_between, gromov_p, in_cell_def_p, in_cell_p,
                     lam_p, lff_join_p)
from .prufer import IntDomain, LocalExt, ProductExt, fptloc, p2_witness, check_p2
from .qsring import (DomainError, LFl, NotIncident, NotMedian, QsModel, RLambda, SAlpha,
                     Unsupported)
from .residue import ResidueModel, _fpow


class InapplicableSuite(ValueError):
    pass


@dataclass
class AxiomResult:
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    first_failure: str | None = None


@dataclass
class SuiteReport:
    suite: str
    model: str
    trials: int
    seed: int
    expected: str
    results: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def failures(self) -> int:
        return sum(r.failed for r in self.results.values())

    @property
    def outcome(self) -> str:
        if self.expected == "EXPECTED_FAIL":
            return "EXPECTED_FAIL" if self.failures else "FAIL"
        return "PASS" if not self.failures else "FAIL"

    @property
    def ok(self) -> bool:
        return self.outcome == ("EXPECTED_FAIL" if self.expected == "EXPECTED_FAIL" else "PASS")

    def to_json(self) -> dict:
        return {
            "suite": self.suite, "model": self.model, "trials": self.trials,
            "seed": self.seed, "expected": self.expected, "outcome": self.outcome,
            "pass": self.ok,
            "axioms": {k: {"passed": r.passed, "failed": r.failed, "skipped": r.skipped,
                           **({"counterexample": r.first_failure} if r.first_failure else {})}
                       for k, r in self.results.items()},
            **({"notes": self.notes} if self.notes else {}),
        }

    def text(self) -> str:
        lines = [f"suite {self.suite} on {self.model}: {self.outcome} "
                 f"({self.trials} trials, seed {self.seed})"]
        for k, r in self.results.items():
            line = f"  {k}: {r.passed} passed, {r.failed} failed, {r.skipped} skipped"
            if r.first_failure:
                line += f"; first counterexample {r.first_failure}"
            lines.append(line)
        lines.extend(f"  note: {n}" for n in self.notes)
        return "\n".join(lines)


def trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random(f"{seed}:{trial}")


# predicates: f(m, xs) -> True / False / None (not applicable)

# the defining axioms

def ax_commutative(m, xs):
    x, y = xs[:2]
    return m.add(x, y) == m.add(y, x) and m.mul(x, y) == m.mul(y, x)


def ax_associative(m, xs):
    x, y, z = xs[:3]
    return m.add(m.add(x, y), z) == m.add(x, m.add(y, z)) and \
        m.mul(m.mul(x, y), z) == m.mul(x, m.mul(y, z))


def ax_regular(m, xs):
    x = xs[0]
    n, i = m.neg(x), m.qinv(x)
    return (m.add(m.add(x, n), x) == x and m.add(m.add(n, x), n) == n
            and m.mul(m.mul(x, i), x) == x and m.mul(m.mul(i, x), i) == i
            and m.neg(n) == x and m.qinv(i) == x)


def ax_idempotents_meet_in_eps(m, xs):
    eps = m.eps()
    ok = True
    for x in xs[:2]:
        e = m.ebullet(x)
        if m.in_eplus(e):
            ok = ok and e == eps
        lat = m.lattice(m.eplus(x))
        if m.in_ebullet(lat):
            ok = ok and lat == eps
    return ok


def ax_quasidistributive(m, xs):
    """xy + xz ≤ x(y + z) in the defining order."""
    x, y, z = xs[:3]
    lhs = m.add(m.mul(x, y), m.mul(x, z))
    return m.def_leq(lhs, m.mul(x, m.add(y, z)))


def ax_monotone(m, xs):
    """y ≤ z implies xy ≤ xz (with y = z ∧ w)."""
    x, z, w = xs[:3]
    y = m.meet(z, w)
    return m.def_leq(y, z) and m.def_leq(m.mul(x, y), m.mul(x, z))


def ax_neg_mul(m, xs):
    x, y = xs[:2]
    return m.neg(m.mul(x, y)) == m.mul(x, m.neg(y))


def ax_idempotent_sum(m, xs):
    """e⁺(x + y) ≤ e⁺(x ∙ y) for multiplicative idempotents x, y."""
    x, y = m.ebullet(xs[0]), m.ebullet(xs[1])
    return m.lat_leq(m.eplus(m.add(x, y)), m.eplus(m.mul(x, y)))


CRQ_AXIOMS = {
    "commutative": ax_commutative,
    "associative": ax_associative,
    "regular": ax_regular,
    "idempotents_meet_in_eps": ax_idempotents_meet_in_eps,
    "quasidistributive": ax_quasidistributive,
    "monotone_product": ax_monotone,
    "neg_of_product": ax_neg_mul,
    "idempotent_sum_level": ax_idempotent_sum,
}


# derived identities

def d_leibniz(m, xs):
    """e⁺(xy) = x∙e⁺(y) + y∙e⁺(x)."""
    x, y = xs[:2]
    rhs = m.add(m.mul(x, m.lattice(m.eplus(y))), m.mul(y, m.lattice(m.eplus(x))))
    return rhs == m.lattice(m.eplus(m.mul(x, y)))


def d_level_factorization(m, xs):
    """e⁺(x) = v(x) ∙ e⁺(e•(x))."""
    x = xs[0]
    return m.eplus(x) == m.lat_mul(m.v(x), m.eplus(m.ebullet(x)))


def d_meet_level(m, xs):
    """e⁺(x ∧ y) = v(x − y)."""
    x, y = xs[:2]
    return m.eplus(m.meet(x, y)) == m.v(m.sub(x, y))


def d_meet_via_inverses(m, xs):
    """x∙y∙(x⁻¹ ∧ y⁻¹) = x ∧ y."""
    x, y = xs[:2]
    return m.mul(m.mul(x, y), m.meet(m.qinv(x), m.qinv(y))) == m.meet(x, y)


def _incident_pair(m, xs):
    """Two truncations of one element, hence incident."""
    w = xs[2]
    a = m.lat_meet(m.eplus(w), m.lat_pos(m.eplus(xs[0])))
    b = m.lat_meet(m.eplus(w), m.lat_pos(m.eplus(xs[1])))
    return m.truncate(w, a), m.truncate(w, b)


def d_product_meet_join(m, xs):
    """x∙y = (x ∧ y)∙(x ∨ y) for incident pairs."""
    checked = False
    for x, y in (xs[:2], _incident_pair(m, xs)):
        try:
            j = m.join(x, y)
        except NotIncident:
            continue
        checked = True
        if m.mul(x, y) != m.mul(m.meet(x, y), j):
            return False
    return True if checked else None


def d_distance_symmetries(m, xs):
    """d(−x, −y) = d(x⁻¹, y⁻¹) = d(x, y)."""
    x, y = xs[:2]
    d = dist_p(m, x, y)
    return dist_p(m, m.neg(x), m.neg(y)) == d and dist_p(m, m.qinv(x), m.qinv(y)) == d


def d_gromov_inequality(m, xs):
    """(x, y)_u ∧ (x, z)_u ≤ (y, z)_u."""
    x, y, z, u = xs[:4]
    return m.lat_leq(m.lat_meet(gromov_p(m, x, y, u), gromov_p(m, x, z, u)),
                     gromov_p(m, y, z, u))


def d_quasivaluation(m, xs):
    """v(xy) = v(x)v(y) and v(x + y) ≥ v(x) ∧ v(y)."""
    x, y = xs[:2]
    return m.v(m.mul(x, y)) == m.lat_mul(m.v(x), m.v(y)) and \
        m.lat_leq(m.lat_meet(m.v(x), m.v(y)), m.v(m.add(x, y)))


def d_directed(m, xs):
    """ε ≤ e• (x), v(x) ≤ x and x + v(x − y) = y + v(x − y)."""
    x, y = xs[:2]
    lvl = m.lattice(m.v(m.sub(x, y)))
    return (m.leq(m.eps(), m.ebullet(x)) and m.leq(m.lattice(m.v(x)), x)
            and m.add(x, lvl) == m.add(y, lvl))


def d_order_agrees(m, xs):
    """The meet order agrees with the defining order."""
    x, y = xs[:2]
    z = m.meet(x, y)
    return m.leq(x, y) == m.def_leq(x, y) and m.def_leq(z, x) and m.def_leq(z, y)


DERIVED = {
    "leibniz_rule": d_leibniz,
    "level_factorization": d_level_factorization,
    "meet_level": d_meet_level,
    "meet_via_inverses": d_meet_via_inverses,
    "product_of_meet_and_join": d_product_meet_join,
    "distance_symmetries": d_distance_symmetries,
    "gromov_inequality": d_gromov_inequality,
    "quasivaluation": d_quasivaluation,
    "directed": d_directed,
    "order_agrees": d_order_agrees,
}


# metric

def mt_triangle(m, xs):
    x, y, z = xs[:3]
    return m.lat_leq(dist_p(m, x, z), m.lat_mul(dist_p(m, x, y), dist_p(m, y, z)))


def mt_basic(m, xs):
    x, y = xs[:2]
    d = dist_p(m, x, y)
    eps = m.lat_eps()
    return (d == dist_p(m, y, x) and m.lat_leq(eps, d) and (d == eps) == (x == y)
            and (lam_p(m, x, y) == eps) == m.leq(x, y))


def mt_split(m, xs):
    x, y = xs[:2]
    z = m.meet(x, y)
    return dist_p(m, x, y) == m.lat_mul(dist_p(m, x, z), dist_p(m, y, z))


def mt_contractions(m, xs):
    a, x, y = xs[:3]
    d = dist_p(m, x, y)
    return all(m.lat_leq(dist_p(m, op(a, x), op(a, y)), d) for op in (m.add, m.mul, m.meet))


def mt_gromov_square(m, xs):
    """d(x,z) d(y,z) / d(x,y) = (x,y)_z², and ε exactly on the cell."""
    x, y, z = xs[:3]
    g = gromov_p(m, x, y, z)
    lhs = m.lat_div(m.lat_mul(dist_p(m, x, z), dist_p(m, y, z)), dist_p(m, x, y))
    return lhs == m.lat_mul(g, g) and (g == m.lat_eps()) == in_cell_p(m, z, x, y)


def mt_cell_definition(m, xs):
    """Metric betweenness agrees with the lattice definition of cells."""
    x, y, z = xs[:3]
    cands = [z, m.meet(x, y), m.meet(x, z), x]
    return all(in_cell_p(m, c, x, y) == in_cell_def_p(m, c, x, y) for c in cands)


def mt_below(m, xs):
    a = xs[0]
    alpha = m.lat_pos(m.eplus(xs[1]))
    y = below_p(m, a, alpha)
    return m.leq(y, a) and dist_p(m, a, y) == alpha


METRIC = {
    "triangle": mt_triangle,
    "distance_basics": mt_basic,
    "distance_splits_at_meet": mt_split,
    "contractions": mt_contractions,
    "gromov_square": mt_gromov_square,
    "cell_definition": mt_cell_definition,
    "below": mt_below,
}


# median

def md_laws(m, xs):
    x, y, z = xs[:3]
    med = m.median(x, y, z)
    perms = all(m.median(*p) == med for p in itertools.permutations((x, y, z)))
    return perms and m.median(x, x, y) == x and all(
        in_cell_p(m, med, a, b) for a, b in ((x, y), (y, z), (z, x)))


def md_meet_compatible(m, xs):
    """m(x, y, z) ∧ u = m(x ∧ u, y ∧ u, z) = m(x ∧ u, y ∧ u, z ∧ u)."""
    x, y, z, u = xs[:4]
    lhs = m.meet(m.median(x, y, z), u)
    xu, yu = m.meet(x, u), m.meet(y, u)
    return lhs == m.median(xu, yu, z) == m.median(xu, yu, m.meet(z, u))


def md_residue_congruences(m, xs):
    """The median is congruent to x_i and x_j modulo each pairwise level."""
    if not isinstance(m, ResidueModel):
        return None
    ext = m.ext
    x, y, z = xs[:3]
    med = m.median(x, y, z)
    gs = []
    for a, b in ((x, y), (y, z), (z, x)):
        g = ext.igcd(ext.igcd(a[1], b[1]), ext.sub(a[0], b[0]))
        gs.append(g)
        if not (ext.contains(g, ext.sub(med[0], a[0])) and ext.contains(g, ext.sub(med[0], b[0]))):
            return False
    top = ext.ilcm(ext.ilcm(gs[0], gs[1]), gs[2])
    return med[1] == top


def md_oracle(m, xs):
    """The closed form agrees with brute-force enumeration of the cells."""
    if not isinstance(m, ResidueModel) or not _enumerable(m.ext):
        return None
    x, y, z = xs[:3]
    return oracle_median(m, x, y, z) == m.median(x, y, z)


def _enumerable(ext):
    parts = ext.parts if isinstance(ext, ProductExt) else (ext,)
    return all(isinstance(p, LocalExt) and isinstance(p.domain, IntDomain) for p in parts)


MEDIAN = {
    "median_laws": md_laws,
    "oracle_agrees": md_oracle,
    "meet_compatible": md_meet_compatible,
    "residue_congruences": md_residue_congruences,
}


# lff

def lf_join_criterion(m, xs):
    """x ∨ y exists exactly when x − y ∈ E⁺, with e⁺(x ∨ y) = e⁺(x) ∨ e⁺(y)."""
    ok = True
    for x, y in (xs[:2], _incident_pair(m, xs)):
        crit = m.in_eplus(m.sub(x, y))
        try:
            j = m.join(x, y)
        except NotIncident:
            ok = ok and not crit
            continue
        ok = ok and crit and m.leq(x, j) and m.leq(y, j) and \
            m.eplus(j) == m.lat_join(m.eplus(x), m.eplus(y))
    return ok


def lf_join_prime(m, xs):
    """The lff join sits in [x, y] at the mirrored distances."""
    ok = True
    for x, y in (xs[:2], _incident_pair(m, xs)):
        z = lff_join_p(m, x, y)
        mxy = m.meet(x, y)
        ok = ok and in_cell_p(m, z, x, y) and dist_p(m, x, z) == dist_p(m, y, mxy) \
            and dist_p(m, y, z) == dist_p(m, x, mxy)
        try:
            ok = ok and m.join(x, y) == z
        except NotIncident:
            pass
    return ok


LFF = {
    "join_criterion": lf_join_criterion,
    "lff_join": lf_join_prime,
}


# locally linear

def ll_median_is_a_meet(m, xs):
    x, y, z = xs[:3]
    meets = [m.meet(x, y), m.meet(y, z), m.meet(z, x)]
    two_equal = meets[0] == meets[1] or meets[0] == meets[2] or meets[1] == meets[2]
    return two_equal and m.median(x, y, z) in meets


def ll_dichotomy(m, xs):
    """x − y ∈ E⁺ forces x ≤ y or y ≤ x."""
    for x, y in (xs[:2], _incident_pair(m, xs)):
        if m.in_eplus(m.sub(x, y)) and not (m.leq(x, y) or m.leq(y, x)):
            return False
    return True


LOCALLY_LINEAR = {
    "median_is_a_meet": ll_median_is_a_meet,
    "comparable_when_difference_idempotent": ll_dichotomy,
}


# congruences and subdirect factors

def _ops(m):
    return {"add": m.add, "mul": m.mul, "meet": m.meet}


def cg_cone_compatible(m, xs):
    """Cone congruences respect +, ∙, −, ⁻¹ and ∧ (on a random coordinate cone)."""
    keys = coordinates(m, xs)
    if not keys:
        return None
    rnd = random.Random(str([m.fmt(x) for x in xs]))
    chosen = [k for k in keys if rnd.random() < 0.5]
    c = cone(m.group, chosen)
    lvl = m.from_lelem(LElem.make(m.group, {k: rnd.randint(0, 2) for k in chosen}))
    x, y = xs[:2]
    x2, y2 = below_p(m, x, lvl), below_p(m, y, lvl)
    if not (cong_equal_p(m, c, x, x2) and cong_equal_p(m, c, y, y2)):
        return False
    pairs = [(op(x, y), op(x2, y2)) for op in _ops(m).values()]
    pairs += [(m.neg(x), m.neg(x2)), (m.qinv(x), m.qinv(x2))]
    return all(cong_equal_p(m, c, a, b) for a, b in pairs)


def cg_separation(m, xs):
    x, y = xs[:2]
    if x == y:
        return None
    return separating_coordinate(m, x, y) is not None


def cg_projections(m, xs):
    """Coordinate projections are homomorphisms for all operations."""
    x, y = xs[:2]
    for key in coordinates(m, xs[:2]):
        t = project_model(m, key)

        def pr(a):
            return project_p(m, t, key, a)

        px, py = pr(x), pr(y)
        if pr(m.add(x, y)) != t.add(px, py) or pr(m.mul(x, y)) != t.mul(px, py) \
                or pr(m.meet(x, y)) != t.meet(px, py) or pr(m.neg(x)) != t.neg(px) \
                or pr(m.qinv(x)) != t.qinv(px) or pr(m.eps()) != t.eps():
            return False
    return True


CONGRUENCE = {
    "cone_compatible": cg_cone_compatible,
    "subdirect_separation": cg_separation,
    "projections_are_homomorphisms": cg_projections,
}


# superrigidity

def sr_one(m, xs):
    """1_α is the idempotent over α, and e⁺ is injective on idempotents."""
    a = m.lat_pos(m.eplus(xs[0]))
    one = m.one(a)
    e = m.ebullet(xs[1])
    ok = m.in_ebullet(one) and m.eplus(one) == a
    ok = ok and m.one(m.eplus(e)) == e
    b = m.eplus(xs[2])
    return ok and m.eplus(m.one(b)) == b


SUPERRIGID = {"unique_idempotent_per_level": sr_one}


def rg_rigid(m, xs):
    """e⁺ is injective on the sampled idempotents."""
    return rigidity_report(m, xs).details["rigid"]


def rg_cone_full(m, xs):
    """The distances d(e, ε), e ∈ E•, generate all of Λ₊ as a convex cone.

    Generators come from the trial, a fixed pool and, on superrigid
    models, the idempotent 1_α over each sampled level.
    """
    rng = random.Random(0)
    pool = list(xs) + [m.sample(rng) for _ in range(20)]
    if m.superrigid:
        pool += [m.one(m.lat_pos(m.eplus(x))) for x in xs]
    return bool(ebullet_cone_is_full(m, pool))


RIGIDITY = {"rigid": rg_rigid, "ebullet_cone_full": rg_cone_full}


# suites

@dataclass(frozen=True)
class Suite:
    name: str
    axioms: dict
    applies: Callable = lambda m: True
    arity: int = 4
    pinned: Callable | None = None
    expect_fail: Callable = lambda m: False
    exhaustive: Callable | None = None


def _median_pinned(m):
    """The three witnesses (ε, α σ_i⁻¹): their ambient median is (ε, α)."""
    x1, x2, x3 = m.witnesses()
    try:
        m.median(x1, x2, x3)
    except NotMedian:
        amb = m.ambient.median(x1, x2, x3)
        return False, f"median({', '.join(m.fmt(x) for x in (x1, x2, x3))}) = {m.fmt(amb)} lies outside S_α"
    return True, None


def _lff_pinned(m):
    """The two witnesses (ε, α σ_i⁻¹): their ambient join is (ε, α)."""
    x1, x2 = m.witnesses()[:2]
    crit = m.in_eplus(m.sub(x1, x2))
    try:
        m.join(x1, x2)
    except NotIncident:
        amb = m.ambient.join(x1, x2)
        return (not crit), (f"{m.fmt(x1)} − {m.fmt(x2)} is additively idempotent but "
                            f"the join {m.fmt(amb)} lies outside S_α")
    return True, None


def _ball_rlambda(m):
    return list(rlambda_ball_mismatches(m))


def _ball_lfl(m):
    return list(lfl_ball_mismatches(m))


SUITES = {
    "crq_axioms": Suite("crq_axioms", CRQ_AXIOMS),
    "derived": Suite("derived", DERIVED, applies=lambda m: not isinstance(m, SAlpha)),
    "metric": Suite("metric", METRIC, applies=lambda m: not isinstance(m, SAlpha)),
    "median": Suite("median", MEDIAN,
                    applies=lambda m: m.median_flag or isinstance(m, SAlpha),
                    pinned=lambda m: _median_pinned(m) if isinstance(m, SAlpha) and not m.median_flag else None,
                    expect_fail=lambda m: isinstance(m, SAlpha) and not m.median_flag),
    "lff": Suite("lff", LFF, applies=lambda m: m.lff or isinstance(m, SAlpha),
                 pinned=lambda m: _lff_pinned(m) if isinstance(m, SAlpha) else None,
                 expect_fail=lambda m: isinstance(m, SAlpha)),
    "locally_linear": Suite("locally_linear", LOCALLY_LINEAR,
                            applies=lambda m: m.locally_linear),
    "congruence": Suite("congruence", CONGRUENCE,
                        applies=lambda m: _has_projections(m)),
    "superrigid": Suite("superrigid", SUPERRIGID, applies=lambda m: m.superrigid),
    "rigidity": Suite("rigidity", RIGIDITY, applies=lambda m: not isinstance(m, SAlpha)),
    "ball": Suite("ball", {}, applies=lambda m: _ball_target(m) is not None,
                  exhaustive=lambda m: _ball_target(m)(m)),
}


SUITES["median_suite"] = SUITES["median"]


def _has_projections(m):
    if isinstance(m, ResidueModel):
        ext = m.ext
        parts = ext.parts if isinstance(ext, ProductExt) else (ext,)
        return all(isinstance(p, LocalExt) for p in parts)
    return isinstance(m, RLambda) and m.group.kind == "pointwise"


def _ball_target(m):
    if isinstance(m, RLambda) and m.group.kind == "pointwise" and len(m.group.keys) == 1:
        return _ball_rlambda
    if isinstance(m, LFl):
        return _ball_lfl
    return None


def _skip(exc) -> bool:
    return isinstance(exc, (Unsupported,))


def run_suite(model: QsModel, suite: str | Suite, trials: int, seed: int) -> SuiteReport:
    if isinstance(suite, str):
        if suite not in SUITES:
            raise InapplicableSuite(f"unknown suite {suite!r}; known: {', '.join(sorted(SUITES))}")
        s = SUITES[suite]
    else:
        s = suite
    if not s.applies(model):
        raise InapplicableSuite(f"suite {s.name} does not apply to {model.name}")
    expected = "EXPECTED_FAIL" if s.expect_fail(model) else "PASS"
    rep = SuiteReport(s.name, model.name, trials, seed, expected)
    if s.pinned is not None:
        pinned = s.pinned(model)
        if pinned is not None:
            ok, witness = pinned
            r = rep.results.setdefault("pinned_witness", AxiomResult())
            if ok:
                r.passed += 1
            else:
                r.failed += 1
                r.first_failure = witness
            if rep.expected == "EXPECTED_FAIL":
                rep.trials = 0
                return rep
    if s.exhaustive is not None:
        r = rep.results.setdefault("exhaustive_window", AxiomResult())
        bad = s.exhaustive(model)
        r.passed = bad.pop() if bad and isinstance(bad[-1], int) else 0
        r.failed = len(bad)
        if bad:
            r.first_failure = str(bad[0])
        return rep
    for name in s.axioms:
        rep.results[name] = AxiomResult()
    for t in range(trials):
        rng = trial_rng(seed, t)
        xs = tuple(model.sample(rng) for _ in range(s.arity))
        for name, pred in s.axioms.items():
            r = rep.results[name]
            try:
                ok = pred(model, xs)
            except (AssertionError, DomainError, ArithmeticError, ValueError) as exc:
                if _skip(exc):
                    r.skipped += 1
                    continue
                ok = False
                if r.first_failure is None:
                    r.first_failure = f"{_fmt_tuple(model, xs)} raised {type(exc).__name__}: {exc}"
            if ok is None:
                r.skipped += 1
            elif ok:
                r.passed += 1
            else:
                r.failed += 1
                if r.first_failure is None:
                    r.first_failure = _fmt_tuple(model, xs)
    return rep


def _fmt_tuple(m, xs) -> str:
    return "(" + ", ".join(m.fmt(x) for x in xs) + ")"


# oracles

class OracleLimit(Unsupported):
    pass


def oracle_median(m: ResidueModel, x, y, z, limit: int = 20_000):
    """The unique point of [x,y] ∩ [y,z] ∩ [z,x], found by enumeration.

    A point of all three cells lies above each pairwise meet, and its
    level divides the gcd of the pairwise lcms of the levels; the search
    runs over that finite window, base point included.
    """
    if not isinstance(m, ResidueModel):
        raise Unsupported("oracle median needs a residue model")
    ext = m.ext
    bound = ext.igcd(ext.igcd(ext.ilcm(x[1], y[1]), ext.ilcm(y[1], z[1])),
                     ext.ilcm(z[1], x[1]))
    base = min((m.meet(x, y), m.meet(y, z), m.meet(z, x)),
               key=lambda b: _window_size(ext, b[1], bound))
    if _window_size(ext, base[1], bound) > limit:
        raise OracleLimit("window too large for brute force")
    found = [c for c in enumerate_between(m, base, bound)
             if in_cell_def_p(m, c, x, y) and in_cell_def_p(m, c, y, z)
             and in_cell_def_p(m, c, z, x)]
    if len(found) != 1:
        raise AssertionError(f"expected one median, found {len(found)}")
    return found[0]


def _window_size(ext, g, bound) -> int:
    ratio = ext.idiv(bound, g)
    if not ext.is_integral_ideal(ratio):
        return 0
    total = 0
    for d in metric._integral_divisors(ext, ratio):
        total += ext.quotient_size(d)
    return total


# cross-model comparisons

def rlambda_ball_mismatches(m: RLambda, window: int = 6):
    """RLambda(ℤ) against residues of F2[t] localized at t, on |γ|, δ ≤ window.

    (n, 0) ↦ 0 mod tⁿ and (0, δ) ↦ 1 mod t^δ.  Yields mismatches, then
    the number of comparisons made.
    """
    from .residue import ResidueModel as RM
    ball = RM(fptloc(2, "t"))
    d = ball.ext.domain
    t = d.frac((1, 0))
    key = m.group.keys[0]
    elems = [(LElem.vector(m.group, [n]), LElem.vector(m.group, [0]))
             for n in range(-window, window + 1)]
    elems += [(LElem.vector(m.group, [0]), LElem.vector(m.group, [k]))
              for k in range(1, window + 1)]

    def to_ball(p):
        g, dl = p[0][key], p[1][key]
        return ball.canon(0, _fpow(t, g)) if not dl else ball.canon(1, _fpow(t, dl))

    count = 0
    ops = {"add": (m.add, ball.add), "mul": (m.mul, ball.mul), "meet": (m.meet, ball.meet)}
    for a in elems:
        for name, f, g in (("neg", m.neg, ball.neg), ("qinv", m.qinv, ball.qinv)):
            count += 1
            if to_ball(f(a)) != g(to_ball(a)):
                yield (name, m.fmt(a))
        for b in elems:
            for name, (f, g) in ops.items():
                count += 1
                if to_ball(f(a, b)) != g(to_ball(a), to_ball(b)):
                    yield (name, m.fmt(a), m.fmt(b))
            count += 1
            try:
                jr = to_ball(m.join(a, b))
            except NotIncident:
                jr = None
            try:
                jb = ball.join(to_ball(a), to_ball(b))
            except NotIncident:
                jb = None
            if jr != jb:
                yield ("join", m.fmt(a), m.fmt(b))
    count += 1
    if to_ball(m.eps()) != ball.eps():
        yield ("eps",)
    yield count


def lfl_ball_mismatches(m: LFl, box: int = 4):
    """L(F_p, l) against residues of F_p[t] localized at t.

    (n, x) ↦ x tˡⁿ mod tˡⁿ⁺¹ and γ^m ↦ 0 mod t^m.
    """
    from .residue import ResidueModel as RM
    ball = RM(fptloc(m.p, "t"))
    d = ball.ext.domain
    t = d.frac((1, 0))
    ns = range(-box, box + 1) if m.l else [0]
    elems = [("p", n, x) for n in ns for x in range(1, m.p)]
    elems += [("g", k) for k in range(-box, box + 1)]

    def to_ball(a):
        if a[0] == "g":
            return ball.canon(0, _fpow(t, a[1]))
        e = m.l * a[1]
        return ball.canon(d.frac((a[2],)) * _fpow(t, e), _fpow(t, e + 1))

    count = 0
    for a in elems:
        for name, f, g in (("neg", m.neg, ball.neg), ("qinv", m.qinv, ball.qinv)):
            count += 1
            if to_ball(f(a)) != g(to_ball(a)):
                yield (name, m.fmt(a))
        for b in elems:
            for name, f, g in (("add", m.add, ball.add), ("mul", m.mul, ball.mul),
                               ("meet", m.meet, ball.meet)):
                count += 1
                if to_ball(f(a, b)) != g(to_ball(a), to_ball(b)):
                    yield (name, m.fmt(a), m.fmt(b))
    yield count


# whole-ring checks used by the acceptance runs

def p2_report(ext, trials: int, seed: int, height: int = 1000):
    bad = []
    for i in range(trials):
        rng = trial_rng(seed, i)
        x = ext.coerce(_rand_rational(rng, height))
        y = p2_witness(ext, x)
        if not check_p2(ext, x, y):
            bad.append(str(x))
    return bad


def _rand_rational(rng, height):
    from .arith import mpq
    return mpq(rng.randint(-height, height), rng.randint(1, height))
