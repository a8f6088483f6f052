"""Shared fixtures: the builtin algebras and their computed spaces.

The expensive exact computations (derivation spaces, localization case
trees, closed automorphism forms) are deterministic, so they are built
once per session and shared across test modules.
"""

import pytest

from locsym import (
    automorphism_family,
    builtin,
    derivation_algebra,
    local_derivation_space,
    locaut_pattern,
)


@pytest.fixture(scope="session")
def pi2():
    return builtin("pi2")


@pytest.fixture(scope="session")
def pi3():
    return builtin("pi3")


@pytest.fixture(scope="session")
def der2(pi2):
    return derivation_algebra(pi2)


@pytest.fixture(scope="session")
def der3(pi3):
    return derivation_algebra(pi3)


@pytest.fixture(scope="session")
def loc2(pi2):
    return local_derivation_space(pi2)


@pytest.fixture(scope="session")
def loc3(pi3):
    return local_derivation_space(pi3)


@pytest.fixture(scope="session")
def fam2(pi2):
    return automorphism_family(pi2)


@pytest.fixture(scope="session")
def fam3(pi3):
    return automorphism_family(pi3)


@pytest.fixture(scope="session")
def pat2(pi2):
    return locaut_pattern(pi2)


@pytest.fixture(scope="session")
def pat3(pi3):
    return locaut_pattern(pi3)
