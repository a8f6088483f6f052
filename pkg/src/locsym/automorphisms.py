"""Automorphisms: multiplicative invertible operators and their families.

For the builtin algebras the full automorphism group is a closed
parameterized family: a matrix template whose instantiations at any
parameters satisfying the open (nonvanishing) conditions are exactly
the automorphisms.  verify_family machine-checks both directions of
that claim: instantiations must pass the multiplicativity oracle, and
single-entry perturbations of an instantiation that still pass the
oracle must land back inside the family.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Algebra, power_filtration
from .errors import InputError, UnsupportedError
from .linalg import Matrix, Subspace, inverse, is_invertible
from .rationals import random_nonzero_int
from .templates import MatrixTemplate, builtin_form, template_match


def _slim(f: Fraction):
    # Integral scalars demote to int so the hot scans below run on
    # machine integers; true fractions stay exact Fractions.
    return f.numerator if f.denominator == 1 else f


def is_automorphism(algebra: Algebra, phi: Matrix) -> bool:
    """Exact test: phi invertible and phi(e_i e_j) = phi(e_i) phi(e_j)."""
    n = algebra.dim
    if phi.shape != (n, n):
        raise InputError("operator shape does not match the algebra")
    cols = [[_slim(phi.rows[i][j]) for i in range(n)] for j in range(n)]
    table = [
        (i, j, [_slim(c) for c in vec])
        for (i, j), vec in algebra.table.items()
    ]
    for i in range(n):
        ci = cols[i]
        for j in range(n):
            cj = cols[j]
            lhs = [0] * n
            for ti, tj, cvec in table:
                s = ci[ti] * cj[tj]
                if s:
                    for k, ck in enumerate(cvec):
                        if ck:
                            lhs[k] += s * ck
            rhs = [0] * n
            product = algebra.table.get((i, j))
            if product is not None:
                for k, coeff in enumerate(product):
                    if coeff:
                        ck = _slim(coeff)
                        colk = cols[k]
                        for r in range(n):
                            if colk[r]:
                                rhs[r] += ck * colk[r]
            if lhs != rhs:
                return False
    return is_invertible(phi)


@dataclass(frozen=True)
class AutomorphismFamily:
    """The closed-form automorphism group of a builtin algebra."""

    algebra: Algebra
    template: MatrixTemplate

    def instantiate(self, assignment) -> Matrix:
        return self.template.instantiate(assignment)

    def match(self, m: Matrix) -> dict[str, Fraction] | None:
        return template_match(self.template, m)


def automorphism_family(algebra: Algebra) -> AutomorphismFamily:
    return AutomorphismFamily(
        algebra=algebra,
        template=builtin_form("automorphism", algebra.name),
    )


def random_parameters(
    family: AutomorphismFamily, rng: random.Random, bound: int = 9
) -> dict[str, Fraction]:
    """Small random parameters kept clear of the open conditions."""
    template = family.template
    while True:
        params = {
            p: Fraction(rng.randint(-bound, bound)) for p in template.params
        }
        if all(c.evaluate(params) != 0 for c in template.nonzero):
            return params


def random_member(
    family: AutomorphismFamily, rng: random.Random, bound: int = 9
) -> Matrix:
    return family.instantiate(random_parameters(family, rng, bound))


@dataclass(frozen=True)
class FamilyReport:
    ok: bool
    trials: int
    counterexample: Matrix | None
    detail: str


def verify_family(
    family: AutomorphismFamily, trials: int = 500, seed: int = 0
) -> FamilyReport:
    """Two-way check of "automorphism iff member of the family".

    Forward: random instantiations pass is_automorphism.  Reverse: for
    each trial, every single entry of the instantiated matrix is
    perturbed in turn; a perturbation that still passes is_automorphism
    must be matched by the template, otherwise it is a counterexample
    to the family being the whole group.
    """
    rng = random.Random(seed)
    algebra = family.algebra
    n = family.template.dim
    for t in range(trials):
        phi = random_member(family, rng)
        if not is_automorphism(algebra, phi):
            return FamilyReport(
                ok=False,
                trials=t + 1,
                counterexample=phi,
                detail="family instantiation fails the multiplicativity "
                       "or invertibility oracle",
            )
        for i in range(n):
            for j in range(n):
                delta = Fraction(random_nonzero_int(rng, 9))
                rows = [list(row) for row in phi.rows]
                rows[i][j] += delta
                candidate = Matrix(rows)
                if not is_automorphism(algebra, candidate):
                    continue
                try:
                    matched = family.match(candidate)
                except UnsupportedError:
                    matched = None
                if matched is None:
                    return FamilyReport(
                        ok=False,
                        trials=t + 1,
                        counterexample=candidate,
                        detail=f"automorphism escapes the family after "
                               f"perturbing entry ({i + 1},{j + 1})",
                    )
        if t == 0:
            # One full reconstruction per run: the matcher must recover
            # the exact parameters of a known instantiation.
            recovered = family.match(phi)
            if recovered is None or family.instantiate(recovered) != phi:
                return FamilyReport(
                    ok=False,
                    trials=t + 1,
                    counterexample=phi,
                    detail="template matcher fails to reconstruct a "
                           "known instantiation",
                )
    return FamilyReport(
        ok=True,
        trials=trials,
        counterexample=None,
        detail="all instantiations multiplicative; all perturbation "
               "survivors matched by the family",
    )


def group_closure_report(
    family: AutomorphismFamily, trials: int = 100, seed: int = 0
) -> FamilyReport:
    """Products and inverses of members stay in the family (exact)."""
    rng = random.Random(seed)
    algebra = family.algebra
    for t in range(trials):
        a = random_member(family, rng)
        b = random_member(family, rng)
        product = a * b
        if not is_automorphism(algebra, product) or family.match(product) is None:
            return FamilyReport(
                ok=False,
                trials=t + 1,
                counterexample=product,
                detail="product of two members escapes the family",
            )
        inv = inverse(a)
        if not is_automorphism(algebra, inv) or family.match(inv) is None:
            return FamilyReport(
                ok=False,
                trials=t + 1,
                counterexample=inv,
                detail="inverse of a member escapes the family",
            )
    return FamilyReport(
        ok=True,
        trials=trials,
        counterexample=None,
        detail="products and inverses of members stay in the family",
    )


def preserves_filtration(algebra: Algebra, phi: Matrix) -> bool:
    """phi(A^k) = A^k for every term of the power filtration (exact)."""
    n = algebra.dim
    for term in power_filtration(algebra).subspaces:
        image = Subspace(n, [phi.apply(v) for v in term.basis])
        if image != term:
            return False
    return True
