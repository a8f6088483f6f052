"""Local automorphisms: closed patterns, pointwise feasibility, witnesses."""

import random
from fractions import Fraction

import pytest

from locsym import (
    InputError,
    Matrix,
    builtin_form,
    find_witness,
    group_closure_check,
    locaut_feasible_at,
    pattern_check,
    pattern_residual,
    random_pattern_member,
    verify_pattern,
)
from locsym.local_automorphisms import _phi_image_pi2, _phi_image_pi3


def diag(*values):
    return Matrix([
        [values[i] if i == j else 0 for j in range(5)] for i in range(5)
    ])


# -- pattern shape ---------------------------------------------------------------

def test_branch_counts(pat2, pat3):
    assert pat2.branches == ("+",)
    assert pat3.branches == ("+", "-")
    assert pat2.dimension() == 11
    assert pat3.dimension() == 7


def test_identity_is_a_member(pat2, pat3):
    chk2 = pattern_check(pat2, Matrix.identity(5))
    chk3 = pattern_check(pat3, Matrix.identity(5))
    assert chk2.ok and not chk2.boundary
    assert chk3.ok and chk3.branch == "+"


def test_minus_branch_member(pat3):
    m = diag(1, 1, -1, 1, 1)   # b33 = -b11^3
    chk = pattern_check(pat3, m)
    assert chk.ok and chk.branch == "-"


def test_boundary_flag_on_vanishing_open_conditions(pat2):
    chk = pattern_check(pat2, Matrix.zeros(5, 5))
    assert not chk.ok
    assert chk.boundary   # relations hold, nonvanishing fails


def test_shape_violations_are_reported(pat2, pat3):
    chk = pattern_check(pat3, diag(1, 2, 1, 1, 1))
    assert not chk.ok and not chk.boundary
    assert any("b22" in f for f in chk.failures)
    chk2 = pattern_check(pat2, diag(1, 1, 1, 3, 1))
    assert not chk2.ok
    assert any("b44" in f for f in chk2.failures)
    with pytest.raises(InputError):
        pattern_check(pat2, Matrix.identity(4))


def test_random_members_satisfy_their_branch(pat3):
    rng = random.Random(5)
    for _ in range(10):
        member = random_pattern_member(pat3, rng)
        assert pattern_check(pat3, member).ok


# -- pointwise feasibility ----------------------------------------------------------

def test_phi_images_match_the_automorphism_templates(fam2, fam3):
    rng = random.Random(9)
    for fam, image in ((fam2, _phi_image_pi2), (fam3, _phi_image_pi3)):
        for _ in range(10):
            params = {
                p: Fraction(rng.randint(-5, 5)) for p in fam.template.params
            }
            phi = fam.template.instantiate(params)
            x = tuple(Fraction(rng.randint(-5, 5)) for _ in range(5))
            assert image(params, x) == phi.apply(x)


def test_members_are_pointwise_feasible(pi3, pat3):
    rng = random.Random(1)
    member = random_pattern_member(pat3, rng)
    for x in ((1, 0, 0, 0, 0), (1, 2, 3, 4, 5), (0, 1, 0, 1, 0)):
        report = locaut_feasible_at(pi3, member, x)
        assert report.feasible


def test_feasibility_report_carries_matching_parameters(pi2, pat2):
    member = random_pattern_member(pat2, random.Random(2))
    x = (2, -1, 3, 1, 4)
    report = locaut_feasible_at(pi2, member, x)
    assert report.feasible
    if report.exact:
        params = report.witness_params
        assert _phi_image_pi2(params, tuple(map(Fraction, x))) == member.apply(x)


# -- refutation witnesses --------------------------------------------------------------

def test_b22_bump_witness_is_e2_plus_e4(pi3):
    witness = find_witness(pi3, diag(1, 2, 1, 1, 1), seed=0)
    assert witness == (0, 1, 0, 1, 0)
    report = locaut_feasible_at(pi3, diag(1, 2, 1, 1, 1), witness)
    assert not report.feasible


def test_b44_bump_witness(pi2):
    witness = find_witness(pi2, diag(1, 1, 1, 3, 1), seed=0)
    assert witness == (1, 0, 0, -1, 0)
    assert not locaut_feasible_at(pi2, diag(1, 1, 1, 3, 1), witness).feasible


def test_members_have_no_witness(pi2, pat2):
    member = random_pattern_member(pat2, random.Random(3))
    assert find_witness(pi2, member, seed=0, random_trials=50) is None


# -- two-way verification and group structure ----------------------------------------

def test_verify_pattern_small_battery(pat2, pat3):
    for pat in (pat2, pat3):
        report = verify_pattern(pat, trials=40, seed=6)
        assert report.ok, report.detail
        assert report.counterexample is None


def test_group_closure(pat2, pat3):
    assert group_closure_check(pat2, trials=20, seed=7)
    assert group_closure_check(pat3, trials=20, seed=7)


# -- float-side residuals ---------------------------------------------------------------

def test_pattern_residual_on_exact_members(pi3, pat3):
    plus = random_pattern_member(pat3, random.Random(8), branch="+")
    minus = random_pattern_member(pat3, random.Random(8), branch="-")
    chk_plus = pattern_residual(pi3, plus.rows)
    chk_minus = pattern_residual(pi3, minus.rows)
    assert chk_plus.residual == 0.0 and chk_plus.branch == "+"
    assert chk_minus.residual == 0.0 and chk_minus.branch == "-"
    assert chk_plus.min_open > 0


def test_pattern_residual_measures_violation(pi2):
    chk = pattern_residual(pi2, diag(1, 1, 1, 3, 1).rows)
    assert chk.residual == pytest.approx(2.0)   # b44 - b41 - b11 = 3 - 0 - 1
