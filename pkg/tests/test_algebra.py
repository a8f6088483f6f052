"""Structure-constant algebras: products, associativity, filtration.

The builtin multiplication tables are asserted entry by entry; the
derived diagnostics (filtration dimensions, nilindex, characteristic
sequence) are pinned to their independently computed values.
"""

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locsym import (
    InputError,
    Matrix,
    builtin,
    characteristic_sequence,
    get_algebra,
    is_associative,
    left_mult_operator,
    load_algebra,
    power_filtration,
    save_algebra,
    zero_algebra,
)
from locsym.algebra import Algebra

coords = st.lists(st.integers(-9, 9), min_size=5, max_size=5)


def basis_vec(i, dim=5):
    return tuple(Fraction(1 if t == i else 0) for t in range(dim))


# -- multiplication tables ----------------------------------------------------

def test_pi2_table():
    a = builtin("pi2")
    e = [basis_vec(i) for i in range(5)]
    assert a.multiply(e[0], e[0]) == basis_vec(1)   # e1 e1 = e2
    assert a.multiply(e[0], e[1]) == basis_vec(2)   # e1 e2 = e3
    assert a.multiply(e[1], e[0]) == basis_vec(2)   # e2 e1 = e3
    assert a.multiply(e[0], e[3]) == basis_vec(4)   # e1 e4 = e5
    assert a.multiply(e[3], e[0]) == basis_vec(4)   # e4 e1 = e5
    assert a.multiply(e[3], e[3]) == basis_vec(4)   # e4 e4 = e5
    zero = tuple(Fraction(0) for _ in range(5))
    assert a.multiply(e[1], e[1]) == zero
    assert a.multiply(e[2], e[0]) == zero
    assert a.multiply(e[4], e[4]) == zero


def test_pi3_table_differs_only_at_e4e1():
    a2, a3 = builtin("pi2"), builtin("pi3")
    e = [basis_vec(i) for i in range(5)]
    zero = tuple(Fraction(0) for _ in range(5))
    assert a3.multiply(e[3], e[0]) == zero          # the single dropped product
    assert a2.multiply(e[3], e[0]) == basis_vec(4)
    for i in range(5):
        for j in range(5):
            if (i, j) == (3, 0):
                continue
            assert a2.multiply(e[i], e[j]) == a3.multiply(e[i], e[j])


def test_builtin_rejects_unknown_name():
    with pytest.raises(InputError):
        builtin("pi4")


# -- bilinearity (structure constants define a bilinear product) ---------------

@settings(max_examples=30, deadline=None)
@given(coords, coords, coords, st.integers(-5, 5))
def test_multiply_is_bilinear(x, y, z, c):
    a = builtin("pi2")
    xs = tuple(map(Fraction, x))
    ys = tuple(map(Fraction, y))
    zs = tuple(map(Fraction, z))
    lhs = a.multiply(xs, tuple(c * v + w for v, w in zip(ys, zs)))
    rhs = tuple(
        c * p + q for p, q in zip(a.multiply(xs, ys), a.multiply(xs, zs))
    )
    assert lhs == rhs


@settings(max_examples=30, deadline=None)
@given(coords, coords)
def test_left_mult_operator_is_the_product(x, y):
    a = builtin("pi3")
    xs = tuple(map(Fraction, x))
    ys = tuple(map(Fraction, y))
    assert left_mult_operator(a, xs).apply(ys) == a.multiply(xs, ys)


# -- associativity -------------------------------------------------------------

def test_builtins_are_associative():
    assert is_associative(builtin("pi2"))
    assert is_associative(builtin("pi3"))
    assert is_associative(zero_algebra(4))


def test_broken_table_is_not_associative():
    # e1 e1 = e2, e1 e2 = e3, e2 e1 = 0 breaks (e1 e1) e1 = e1 (e1 e1)
    table = {(0, 0): (0, 1, 0), (0, 1): (0, 0, 1)}
    bad = Algebra(name="broken", dim=3, table=table)
    assert not is_associative(bad)


# -- filtration and nilpotency ---------------------------------------------------

@pytest.mark.parametrize("name", ["pi2", "pi3"])
def test_power_filtration_dims(name):
    f = power_filtration(builtin(name))
    assert f.dims == (5, 3, 1, 0)
    assert f.nilpotent
    assert f.nilindex == 4
    assert [s.dim for s in f.subspaces] == [5, 3, 1, 0]
    assert f.subspaces[1].contains(basis_vec(1))
    assert not f.subspaces[1].contains(basis_vec(0))


def test_zero_algebra_filtration():
    f = power_filtration(zero_algebra(3))
    assert f.dims == (3, 0)
    assert f.nilpotent and f.nilindex == 2


@pytest.mark.parametrize("name", ["pi2", "pi3"])
def test_characteristic_sequence(name):
    assert characteristic_sequence(builtin(name), trials=25) == (3, 2)


# -- serialization ----------------------------------------------------------------

def test_save_load_round_trip(tmp_path):
    path = str(tmp_path / "alg.json")
    a = builtin("pi3")
    save_algebra(path, a)
    b = load_algebra(path)
    assert b.dim == a.dim
    assert dict(b.table) == dict(a.table)
    assert is_associative(b)


def test_load_rejects_malformed(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"dim": 2, "table": {"0,0": [1]}}))
    with pytest.raises(InputError):
        load_algebra(str(path))


def test_get_algebra_dispatch(tmp_path):
    assert get_algebra("pi2").name == "pi2"
    path = str(tmp_path / "alg.json")
    save_algebra(path, builtin("pi2"))
    assert get_algebra(path).dim == 5
    with pytest.raises((InputError, FileNotFoundError)):
        get_algebra("no_such_algebra")
