"""Acceptance gate: one test per criterion, each printing a PASS line.

Run with `pytest -s tests/test_acceptance.py` to watch the lines appear.
The sweeps and the level-3 classification dominate the runtime (a few
minutes on two cores).
"""

import math
import random
from fractions import Fraction

import pytest

from echotk import aglgroup, curves, density, fabulous, seq, sweep
from echotk.curves import CURVE_E, POINT_P

TARGET_HK = Fraction(179, 336)
TARGET_FULL = Fraction(11, 21)


@pytest.fixture(scope="module")
def sweep_1e6():
    return sweep.sweep(1_000_000)


def test_criterion_1_sweep_table(sweep_1e6):
    got = [(r.x, r.pi_prime, r.pi) for r in sweep_1e6]
    assert got == [
        (10, 3, 4),
        (100, 13, 25),
        (1000, 91, 168),
        (10_000, 636, 1229),
        (100_000, 5118, 9592),
        (1_000_000, 41856, 78498),
    ]
    assert [r.ratio for r in sweep_1e6] == [
        "0.750000000",
        "0.520000000",
        "0.541666667",
        "0.517493897",
        "0.533569641",
        "0.533211037",
    ]
    print("[PASS] criterion 1: prime-sweep table to 1e6 reproduced exactly")


def test_criterion_2_analytic_density():
    rep = density.analytic_density("hk")
    assert rep.total == TARGET_HK
    assert rep.per_case == {
        "det_odd": Fraction(1, 3),
        "det_2_mod_4": Fraction(1, 8),
        "det_0_odd_entry": Fraction(1, 24),
        "halved_invertible": Fraction(1, 32),
        "identity": Fraction(1, 672),
    }
    assert rep.case_counts == {
        "det_odd": 32,
        "det_2_mod_4": 12,
        "det_0_odd_entry": 12,
        "halved_invertible": 3,
        "identity": 1,
    }
    assert density.analytic_density("full").total == TARGET_FULL
    print("[PASS] criterion 2: analytic densities 179/336 and 11/21 with exact case data")


def test_criterion_3_brute_analytic_equivalence():
    reports = {}
    per_class = {}
    for k in range(2, 6):
        reports[k], per_class[k] = density.brute_report(k, "hk")
    vals = [reports[k].total for k in range(2, 6)]
    assert all(x >= y for x, y in zip(vals, vals[1:])), vals
    assert abs(vals[-1] - TARGET_HK) < abs(vals[0] - TARGET_HK)
    checked = 0
    for k in range(2, 6):
        for m, frac in per_class[k].items():
            if density.resolved_at_level_2(m):
                assert frac == density.mu_case(m), (k, m)
                checked += 1
    assert checked == 4 * 56  # 32 + 24 resolved classes per level
    print(
        "[PASS] criterion 3: brute densities "
        + " >= ".join(str(v) for v in vals)
        + " -> 179/336; resolved classes match the closed forms exactly"
    )


@pytest.fixture(scope="module")
def classes2():
    return aglgroup.classify_kinetic(2)


@pytest.fixture(scope="module")
def classes3():
    return aglgroup.classify_kinetic(3)


def test_criterion_4_classification(classes2, classes3):
    assert len(classes2) == 2
    assert classes2[0].order == 1536
    assert classes2[1].order == 384
    assert classes2[1].representative.codes == aglgroup.h2().codes
    assert len(classes3) == 2
    assert classes3[0].order == aglgroup.AGL_ORDERS[3]
    assert classes3[1].order == 24576
    assert classes3[1].representative.codes == aglgroup.build_hk(3).codes
    # the level-3 proper class reduces into the level-2 proper class
    assert classes3[1].representative.reduce(2).codes == aglgroup.h2().codes
    assert aglgroup.coset_structure_check()
    print(
        "[PASS] criterion 4: kinetic classification is {full, H_k} at levels 2 and 3; "
        "coset decomposition holds"
    )


def test_criterion_5_sequence_and_curve_identities():
    for n in range(-300, 301):
        assert seq.term(n) == seq.term_alt(n)
        assert seq.term(n) == -seq.term(-(n + 1))
    for n in range(0, 501):
        assert seq.h_value(n) == 0
    for n in range(3, 301):
        for i in (1, 2, 3):
            assert math.gcd(seq.term(n), seq.term(n - i)) == 1
    rc3 = seq.residue_cycle(3)
    rc5 = seq.residue_cycle(5)
    assert rc3.period == 9 and rc3.pattern == (1, 1, 2, 1, 0, 2, 1, 2, 2)
    assert rc5.period == 24 and not rc5.contains_zero
    acc = POINT_P
    two_p = curves.add(POINT_P, POINT_P, CURVE_E)
    for n in range(0, 101):
        om = curves.odd_multiple_coords(n)
        assert om.as_point() == acc
        assert om.as_point()[0].denominator == seq.term(n) ** 2
        acc = curves.add(acc, two_p, CURVE_E)
    print("[PASS] criterion 5: sequence and curve identity suites are exact")


def test_criterion_6_family_pipeline():
    t_values = [1, 2, 3, 5, 7, 11, 12, 100, -1, -2, -9, -17, -100,
                Fraction(1, 2), Fraction(-3, 4), Fraction(7, 3), Fraction(22, 7),
                Fraction(25, 3), Fraction(-35, 2), Fraction(1, 10)]
    assert len(t_values) == 20
    for t in t_values:
        a, b = fabulous.parametrize(t)
        assert fabulous.fabulous_poly(a, b).eval(-96 * b * b) == 0, t
    rng = random.Random(3)
    n = 0
    while n < 10:
        a = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        b = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        if b == 0 or curves.curve_from_pair(a, b).discriminant() == 0:
            continue
        assert fabulous.discriminant_identity_check(a, b), (a, b)
        n += 1
    a, b, _ = curves.tate_normal_form(CURVE_E, POINT_P)
    assert (a, b) == (Fraction(6, 5), Fraction(3, 25))
    assert fabulous.fabulous_poly(a, b).rational_roots()
    assert fabulous.certify_kinetic_conditions(a, b).all_true
    print(
        "[PASS] criterion 6: family pipeline exact (20 parametrized roots, "
        "discriminant guard, certified base pair with rational quartic root)"
    )


@pytest.mark.xfail(
    strict=True,
    reason=(
        "the exact discriminant of the quartic is 2^62 * b^6 * disc(E)^3 * g^2; "
        "the coarser form -b^15 * disc(E) * g checked here matches it only in "
        "vanishing locus, so this equality cannot hold identically"
    ),
)
def test_criterion_6_literal_discriminant_statement():
    rng = random.Random(3)
    n = 0
    while n < 10:
        a = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        b = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        if b == 0 or curves.curve_from_pair(a, b).discriminant() == 0:
            continue
        f = fabulous.fabulous_poly(a, b)
        disc_curve = curves.curve_from_pair(a, b).discriminant()
        assert f.discriminant() == -(b**15) * disc_curve * fabulous.bad_locus_g(a, b)
        n += 1


def test_criterion_7_empirical_densities():
    member = fabulous.family_report(1, sweep_x=1_000_000)
    assert member.certificate.all_true
    dens_member = member.empirical_density
    assert abs(dens_member - float(TARGET_HK)) < 0.02, dens_member

    control_pair = fabulous.find_control_pair()
    control = fabulous.report_for_pair(*control_pair, sweep_x=1_000_000)
    assert control.certificate.all_true
    assert control.fabulous_roots == ()
    dens_control = control.empirical_density
    assert abs(dens_control - float(TARGET_FULL)) < 0.02, dens_control
    assert abs(dens_member - float(TARGET_HK)) < abs(dens_member - float(TARGET_FULL))
    assert abs(dens_control - float(TARGET_FULL)) < abs(dens_control - float(TARGET_HK))
    print(
        f"[PASS] criterion 7: member density {dens_member:.6f} ~ 179/336, "
        f"control density {dens_control:.6f} ~ 11/21 at 1e6"
    )


@pytest.mark.skipif(
    not __import__("os").environ.get("ECHO_EXTENDED"),
    reason="extended check (a few minutes): set ECHO_EXTENDED=1 to enable",
)
def test_extended_sweep_to_1e7():
    recs = sweep.sweep(10_000_000)
    assert (recs[-1].x, recs[-1].pi_prime, recs[-1].pi) == (10_000_000, 354158, 664579)
    assert recs[-1].ratio == "0.532905794"
    print("[PASS] extended: pi'(1e7) = 354158 of pi(1e7) = 664579")
