"""Parametric matrix templates: instantiation, matching, span equality."""

from fractions import Fraction

import pytest

from locsym import (
    InputError,
    Matrix,
    UnsupportedError,
    builtin_form,
    load_template,
    save_template,
    template_match,
    template_space_equals,
)
from locsym.poly import poly
from locsym.templates import MatrixTemplate


def small_template():
    return MatrixTemplate(
        dim=2,
        params=("a", "b"),
        entries=(
            (poly("a"), poly("0")),
            (poly("b"), poly("a + b")),
        ),
    )


# -- instantiation ------------------------------------------------------------

def test_instantiate_exact():
    t = small_template()
    m = t.instantiate({"a": Fraction(2), "b": Fraction(-1)})
    assert m == Matrix([[2, 0], [-1, 1]])


def test_instantiate_numeric_defaults_missing_params_to_zero():
    t = small_template()
    rows = t.instantiate_numeric({"a": 1 + 1j})
    assert rows[0][0] == 1 + 1j
    assert rows[1][0] == 0j
    assert rows[1][1] == 1 + 1j


def test_zero_positions():
    t = small_template()
    assert t.zero_positions() == ((0, 1),)


def test_is_linear_detects_nonlinear_entries():
    assert small_template().is_linear()
    assert not builtin_form("automorphism", "pi2").is_linear()


# -- matching ------------------------------------------------------------------

def test_match_round_trip():
    t = small_template()
    params = {"a": Fraction(3), "b": Fraction(1, 2)}
    assert template_match(t, t.instantiate(params)) == params


def test_match_rejects_off_template_matrix():
    t = small_template()
    assert template_match(t, Matrix([[1, 5], [0, 1]])) is None   # zero slot hit
    assert template_match(t, Matrix([[1, 0], [0, 3]])) is None   # a+b broken


@pytest.mark.parametrize(
    "kind,name",
    [("derivation", "pi2"), ("derivation", "pi3"),
     ("local_derivation", "pi2"), ("local_derivation", "pi3")],
)
def test_linear_form_match_round_trip(kind, name):
    t = builtin_form(kind, name)
    params = {p: Fraction(i - 3) for i, p in enumerate(t.params)}
    assert template_match(t, t.instantiate(params)) == params


# -- parameter spans -------------------------------------------------------------

def test_parameter_span_dim_counts_free_parameters():
    t = builtin_form("derivation", "pi2")
    assert t.parameter_span().dim == len(t.params) == 7
    t3 = builtin_form("local_derivation", "pi3")
    assert t3.parameter_span().dim == len(t3.params) == 7


def test_template_space_equals(der2, der3):
    assert template_space_equals(builtin_form("derivation", "pi2"), der2.basis)
    assert template_space_equals(builtin_form("derivation", "pi3"), der3.basis)
    # spans of different dimension never compare equal
    assert not template_space_equals(
        builtin_form("derivation", "pi2"), der3.basis
    )


def test_parameter_span_requires_linearity():
    with pytest.raises(UnsupportedError):
        builtin_form("automorphism", "pi3").parameter_span()


# -- registry and files ------------------------------------------------------------

def test_builtin_form_rejects_unknown():
    with pytest.raises(UnsupportedError):
        builtin_form("derivation", "pi9")
    with pytest.raises(UnsupportedError):
        builtin_form("cohomology", "pi2")


def test_save_load_round_trip(tmp_path):
    t = builtin_form("local_automorphism", "pi3")
    path = str(tmp_path / "form.json")
    save_template(path, t)
    back = load_template(path)
    assert back.dim == t.dim
    assert back.params == t.params
    assert back.entries == t.entries
    assert back.nonzero == t.nonzero


def test_load_rejects_malformed(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"dim": 2, "params": ["a"], "entries": [["a +", "0"], ["0", "0"]]}')
    with pytest.raises(InputError):
        load_template(str(path))
