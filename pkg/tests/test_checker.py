import random

import pytest

from residua import lgroup
from residua.checker import (SUITES, InapplicableSuite, OracleLimit, oracle_median, p2_report,
                             rlambda_ball_mismatches, run_suite, trial_rng)
from residua.prufer import zinq
from residua.qsring import LFl, RLambda, SAlpha
from residua.residue import ResidueModel, build_model

ZQ = build_model("Z⊂Q")


def el(text):
    return ZQ.parse(text)


def test_crq_axioms_pass_on_residues():
    rep = run_suite(ZQ, "crq_axioms", 300, 42)
    assert rep.outcome == "PASS" and rep.ok
    assert all(r.failed == 0 for r in rep.results.values())
    assert sum(r.passed for r in rep.results.values()) > 0


def test_zero_trials_is_vacuous_pass():
    rep = run_suite(ZQ, "derived", 0, 1)
    assert rep.outcome == "PASS" and rep.trials == 0
    assert all(r.passed == r.failed == 0 for r in rep.results.values())


def test_reports_are_deterministic():
    a = run_suite(RLambda(lgroup.zn(2)), "metric", 100, 9).to_json()
    b = run_suite(RLambda(lgroup.zn(2)), "metric", 100, 9).to_json()
    assert a == b
    assert trial_rng(3, 5).random() == trial_rng(3, 5).random()
    assert trial_rng(3, 5).random() != trial_rng(3, 6).random()


def test_trials_are_independent_of_count():
    """The first k trials of a longer run see the same samples."""
    m = ResidueModel(zinq())
    short = [m.sample(trial_rng(7, t)) for t in range(5)]
    again = [m.sample(trial_rng(7, t)) for t in range(5)]
    assert short == again


def test_expected_failures_pin_witnesses():
    rep = run_suite(SAlpha("plain"), "median", 1000, 0)
    assert rep.expected == rep.outcome == "EXPECTED_FAIL" and rep.ok
    assert "lies outside S_α" in rep.results["pinned_witness"].first_failure
    rep = run_suite(SAlpha("plain"), "lff", 10, 0)
    assert rep.outcome == "EXPECTED_FAIL" and rep.ok


def test_inapplicable_suites():
    with pytest.raises(InapplicableSuite):
        run_suite(ZQ, "locally_linear", 10, 0)
    with pytest.raises(InapplicableSuite):
        run_suite(LFl(2, 1), "superrigid", 10, 0)
    with pytest.raises(InapplicableSuite):
        run_suite(ZQ, "nonsense", 10, 0)


def test_report_json_shape():
    data = run_suite(LFl(2, 0), "crq_axioms", 20, 3).to_json()
    assert set(data) == {"suite", "model", "trials", "seed", "expected", "outcome", "pass", "axioms"}
    assert data["pass"] is True
    # the counterexample key appears only on failure
    assert set(data["axioms"]["commutative"]) == {"passed", "failed", "skipped"}


def test_failures_are_reported_with_a_counterexample():
    from residua.checker import Suite
    broken = Suite("broken", {"never": lambda m, xs: False})
    rep = run_suite(ZQ, broken, 3, 0)
    assert rep.outcome == "FAIL" and not rep.ok
    assert rep.results["never"].failed == 3 and rep.results["never"].first_failure.startswith("(")


def test_oracle_median_examples():
    assert ZQ.fmt(oracle_median(ZQ, el("1 mod 8"), el("5 mod 8"), el("3 mod 4"))) == "1 mod 4"
    x, y = el("3/2 mod 6"), el("1 mod 4")
    assert oracle_median(ZQ, x, x, y) == x
    assert oracle_median(ZQ, el("0 mod 2"), el("1 mod 3"), el("0 mod 5")) == ZQ.eps()


def test_oracle_median_matches_median():
    m = ResidueModel(zinq(), height=6, max_exp=2, primes=(2, 3, 5, 7))
    rng = random.Random(11)
    checked = 0
    for _ in range(200):
        x, y, z = (m.sample(rng) for _ in range(3))
        try:
            assert oracle_median(m, x, y, z) == m.median(x, y, z)
            checked += 1
        except OracleLimit:
            pass
    assert checked > 150


def test_ball_cross_validation():
    bad = list(rlambda_ball_mismatches(RLambda(lgroup.zn(1)), window=3))
    count = bad.pop()
    assert bad == [] and count > 100
    rep = run_suite(LFl(3, 1), "ball", 0, 0)
    assert rep.ok and rep.results["exhaustive_window"].passed > 1000


def test_p2_report():
    assert p2_report(zinq(), 200, 5, 1000) == []


@pytest.mark.parametrize("name", sorted(set(SUITES) - {"median_suite", "ball"}))
def test_every_suite_runs_somewhere(name):
    models = [ZQ, build_model("Zloc{2}"), RLambda(lgroup.zn(1)), LFl(3, 1), SAlpha("plain")]
    ran = 0
    for m in models:
        try:
            rep = run_suite(m, name, 30, 1)
        except InapplicableSuite:
            continue
        ran += 1
        assert rep.ok, rep.text()
    assert ran
