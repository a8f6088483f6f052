"""Exact multivariate polynomials: parsing, ring laws, calculus helpers.

sympy serves as an independent oracle for arithmetic; hypothesis drives
the ring-axiom property tests over randomly built polynomials.
"""

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from locsym.poly import Poly, linear_factors, poly

X, Y, Z = sympy.symbols("x y z")
SYMS = {"x": X, "y": Y, "z": Z}


def to_sympy(p: Poly):
    total = sympy.Integer(0)
    for mono, coeff in p.terms.items():
        term = sympy.Rational(coeff.numerator, coeff.denominator)
        for var, exp in mono:
            term *= SYMS[var] ** exp
        total += term
    return sympy.expand(total)


@st.composite
def polys(draw):
    terms = draw(st.integers(0, 4))
    total = Poly.zero()
    for _ in range(terms):
        c = Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 4)))
        mono = Poly.const(c)
        for var in draw(st.lists(st.sampled_from("xyz"), max_size=3)):
            mono = mono * Poly.var(var)
        total = total + mono
    return total


# -- parsing -------------------------------------------------------------

def test_parse_round_trip():
    for text in ("0", "1", "-x", "2*x*y - 3/4", "x^2 - 2*x + 1", "x*y*z"):
        p = poly(text)
        assert poly(str(p)) == p


def test_parse_matches_sympy():
    cases = ["(x + y)^2", "x^3 - 1", "2*(x - 1/2)*(x + 3)", "-(x - y)*(x + y)"]
    for text in cases:
        ours = to_sympy(poly(text))
        theirs = sympy.expand(sympy.sympify(text.replace("^", "**")))
        assert sympy.simplify(ours - theirs) == 0


def test_parse_rejects_garbage():
    # parse errors are ValueError; file loaders wrap them into InputError
    for text in ("x +", "1//2", "(x", "x ** 2", "q$"):
        with pytest.raises(ValueError):
            poly(text)


# -- ring laws against sympy ----------------------------------------------

@settings(max_examples=60, deadline=None)
@given(polys(), polys(), polys())
def test_arithmetic_matches_sympy(a, b, c):
    got = to_sympy(a * (b - c) + b * b)
    want = sympy.expand(to_sympy(a) * (to_sympy(b) - to_sympy(c)) + to_sympy(b) ** 2)
    assert sympy.simplify(got - want) == 0


@settings(max_examples=40, deadline=None)
@given(polys(), polys())
def test_distributivity_and_commutativity(a, b):
    assert a * b == b * a
    assert a * (b + b) == a * b + a * b


@settings(max_examples=40, deadline=None)
@given(polys())
def test_zero_and_negation(a):
    assert a - a == Poly.zero()
    assert (-a) + a == Poly.zero()
    assert a * Poly.zero() == Poly.zero()


# -- evaluation, substitution, calculus -----------------------------------

def test_evaluate_exact():
    p = poly("x^2*y - 3*x + 1/2")
    point = {"x": Fraction(2), "y": Fraction(-1, 2)}
    assert p.evaluate(point) == Fraction(-2) - 6 + Fraction(1, 2)


@settings(max_examples=30, deadline=None)
@given(polys(), st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))
def test_evaluate_matches_sympy(p, vx, vy, vz):
    point = {"x": Fraction(vx), "y": Fraction(vy), "z": Fraction(vz)}
    got = p.evaluate(point)
    want = to_sympy(p).subs({X: vx, Y: vy, Z: vz})
    assert sympy.Rational(got.numerator, got.denominator) == want


def test_subs_is_substitution():
    p = poly("x^2 + y")
    q = p.subs({"x": poly("y - 1")})
    assert q == poly("y^2 - 2*y + 1 + y")


def test_diff_matches_sympy():
    p = poly("x^3*y - 2*x*y^2 + 7")
    assert to_sympy(p.diff("x")) == sympy.diff(to_sympy(p), X)
    assert to_sympy(p.diff("y")) == sympy.diff(to_sympy(p), Y)


def test_degree_and_variables():
    p = poly("x^2*y - z")
    assert p.total_degree() == 3
    assert p.degree_in("x") == 2
    assert p.variables() == ("x", "y", "z")


# -- structured decompositions --------------------------------------------

def test_linear_decompose():
    p = poly("2*x*u - y*v + x^2")
    lin, rest = p.linear_decompose(("u", "v"))
    assert lin["u"] == poly("2*x")
    assert lin["v"] == poly("-y")
    assert rest == poly("x^2")


def test_linear_decompose_rejects_quadratic_unknowns():
    with pytest.raises(ValueError):
        poly("u^2").linear_decompose(("u",))


def test_coeff_split():
    head, tail = poly("3*x*y + y^2 + 5").coeff_split("x")
    assert head == poly("3*y")
    assert tail == poly("y^2 + 5")


def test_div_exact():
    num = poly("x^2 - y^2")
    assert num.div_exact(poly("x - y")) == poly("x + y")
    assert num.div_exact(poly("x + 1")) is None


def test_sqrt_exact():
    assert poly("x^2 + 2*x*y + y^2").sqrt_exact() == poly("x + y")
    assert poly("x^2 + 1").sqrt_exact() is None
    assert poly("4/9").sqrt_exact() == poly("2/3")


def test_linear_factors():
    scale, factors = linear_factors(poly("2*x^2 - 2*y^2"))
    rebuilt = Poly.const(scale)
    for f in factors:
        rebuilt = rebuilt * f
    assert rebuilt == poly("2*x^2 - 2*y^2")
    assert all(f.total_degree() == 1 for f in factors)
