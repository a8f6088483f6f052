"""Local derivations: operators agreeing with some derivation at each point.

nabla is a local derivation when for every x there is a derivation D_x
(depending on x) with nabla(x) = D_x(x).  Pointwise membership is a
plain exact linear solve.  The space of all local derivations is
computed two ways:

* exact mode builds the parametric system  sum_p T_p(params) nu = B nu
  over the derivation parameters, runs the stratified case-split solver
  and reads the space off the aggregated b-constraints; this is complete
  because the leaf strata cover the probe space;

* probabilistic mode intersects the per-point constraints coming from a
  structured point set (every support pattern plus stratum samples) and
  then validates the result with many random pointwise checks.

Exact mode is the default; if stratification is unsupported for an
input algebra, the engine falls back to probabilistic mode and says so
in the result's provenance.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Algebra, left_mult_operator
from .derivations import DerivationSpace, derivation_algebra, is_derivation
from .errors import InputError, InternalCheckError, StratificationError
from .linalg import Matrix, Subspace, integer_rank, nullspace, solve, vector
from .poly import Poly
from .rationals import random_vector
from .stratify import (
    CaseTree,
    Equation,
    ParametricSystem,
    sample_stratum,
    solve_parametric,
)


def output_symbols(dim: int) -> tuple[str, ...]:
    """Row-major b-symbols labeling the entries of the unknown operator."""
    return tuple(
        f"b{i + 1}{j + 1}" for i in range(dim) for j in range(dim)
    )


def probe_symbols(dim: int) -> tuple[str, ...]:
    return tuple(f"n{j + 1}" for j in range(dim))


def pointwise_membership(
    ders: DerivationSpace, nabla: Matrix, x
) -> tuple[Fraction, ...] | None:
    """Coefficients c with (sum c_i D_i)(x) = nabla(x), or None."""
    x = vector(x)
    columns = [d.apply(x) for d in ders.basis]
    if not columns:
        return () if all(v == 0 for v in nabla.apply(x)) else None
    stacked = Matrix(columns).transpose()
    return solve(stacked, nabla.apply(x))


def localization_system(ders: DerivationSpace) -> ParametricSystem:
    """Parametric system asking D(nu) = B nu for a derivation D.

    The unknowns are coordinates t_k of D in the computed derivation
    basis, so the construction is independent of any closed form.
    """
    n = ders.algebra.dim
    unknowns = tuple(f"t{k + 1}" for k in range(ders.dim))
    nu = probe_symbols(n)
    symbols = output_symbols(n)
    equations = []
    for i in range(n):
        coeffs = {}
        for k, d in enumerate(ders.basis):
            c = Poly.zero()
            for j in range(n):
                if d.rows[i][j]:
                    c = c + Poly.var(nu[j]) * d.rows[i][j]
            coeffs[unknowns[k]] = c
        rhs = Poly.zero()
        for j in range(n):
            rhs = rhs + Poly.var(f"b{i + 1}{j + 1}") * Poly.var(nu[j])
        equations.append(Equation(coeffs=coeffs, rhs=rhs))
    return ParametricSystem(
        unknowns=unknowns,
        nu_vars=nu,
        rhs_symbols=symbols,
        equations=tuple(equations),
    )


@dataclass(frozen=True)
class LocalDerivationSpace:
    algebra: Algebra
    basis: tuple[Matrix, ...]
    provenance: str  # "exact" or "probabilistic"
    case_tree: CaseTree | None
    warning: str | None = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def span(self) -> Subspace:
        n = self.algebra.dim
        return Subspace(n * n, [m.vec() for m in self.basis])

    def contains(self, op: Matrix) -> bool:
        return self.span().contains(op.vec())


def _basis_from_subspace(space: Subspace, n: int) -> tuple[Matrix, ...]:
    return tuple(Matrix.from_vec(v, n) for v in space.basis)


def support_patterns(dim: int):
    """All 2^dim - 1 nonzero supports, small supports first."""
    indices = range(dim)
    for size in range(1, dim + 1):
        yield from itertools.combinations(indices, size)


def structured_probe_points(
    algebra: Algebra, tree: CaseTree | None, seed: int = 0
) -> list[tuple[Fraction, ...]]:
    """Support-pattern points plus one sample per discovered stratum."""
    rng = random.Random(seed)
    points = [
        random_vector(rng, algebra.dim, support=s)
        for s in support_patterns(algebra.dim)
    ]
    if tree is not None:
        for k, leaf in enumerate(tree.leaves):
            point = sample_stratum(leaf, seed=seed + k + 1)
            points.append(
                tuple(point[f"n{j + 1}"] for j in range(algebra.dim))
            )
    return points


def _pointwise_constraint_rows(ders: DerivationSpace, x) -> list[list[Fraction]]:
    """Rows in the n^2 operator coordinates forcing nabla(x) in span{D(x)}."""
    n = ders.algebra.dim
    x = vector(x)
    images = Matrix([d.apply(x) for d in ders.basis])  # rows are D_i(x)
    annihilators = nullspace(images)  # functionals killing span{D_i(x)}
    rows = []
    for p in annihilators:
        row = [Fraction(0)] * (n * n)
        for i in range(n):
            if p[i]:
                for j in range(n):
                    if x[j]:
                        row[n * i + j] = p[i] * x[j]
        rows.append(row)
    return rows


def local_derivation_space(
    algebra: Algebra,
    mode: str = "exact",
    seed: int = 0,
    validation_checks: int = 10000,
) -> LocalDerivationSpace:
    if mode not in ("exact", "probabilistic"):
        raise InputError(f"unknown mode {mode!r}")
    ders = derivation_algebra(algebra)
    warning = None
    tree = None
    if mode == "exact":
        try:
            tree = solve_parametric(localization_system(ders))
            space = tree.solution_space()
            result = LocalDerivationSpace(
                algebra=algebra,
                basis=_basis_from_subspace(space, algebra.dim),
                provenance="exact",
                case_tree=tree,
            )
            _self_check(result, ders, checks=256, seed=seed)
            return result
        except StratificationError as exc:
            warning = f"exact stratification unavailable ({exc}); " \
                      "falling back to probabilistic mode"
            mode = "probabilistic"
    try:
        tree = solve_parametric(localization_system(ders))
    except StratificationError:
        tree = None
    n = algebra.dim
    rows: list[list[Fraction]] = []
    for x in structured_probe_points(algebra, tree, seed=seed):
        rows.extend(_pointwise_constraint_rows(ders, x))
    space = (
        Subspace(n * n, nullspace(Matrix(rows)))
        if rows
        else Subspace(n * n, Matrix.identity(n * n).rows)
    )
    result = LocalDerivationSpace(
        algebra=algebra,
        basis=_basis_from_subspace(space, n),
        provenance="probabilistic",
        case_tree=tree,
        warning=warning,
    )
    _self_check(result, ders, checks=validation_checks, seed=seed)
    return result


def _integer_matrix(m: Matrix) -> list[list[int]]:
    """Integer rescaling of a whole operator (one global denominator lcm).

    Spans and pointwise membership are invariant under scaling an
    operator, so the rescaled copy is interchangeable in rank tests.
    """
    scale = math.lcm(*(f.denominator for row in m.rows for f in row))
    return [[int(f * scale) for f in row] for row in m.rows]


def _integer_point(x) -> list[int]:
    coords = [Fraction(v) for v in x]
    scale = math.lcm(*(v.denominator for v in coords))
    return [int(v * scale) for v in coords]


def _membership_checker(ders: DerivationSpace, op: Matrix):
    """Fast integer-point membership test for a fixed operator.

    Membership nabla(x) in span{D_i(x)} is a rank condition, so it runs
    on integer-rescaled data through fraction-free elimination instead
    of a rational solve.
    """
    n = ders.algebra.dim
    basis_int = [_integer_matrix(d) for d in ders.basis]
    op_int = _integer_matrix(op)

    def image(rows: list[list[int]], x: list[int]) -> list[int]:
        return [
            sum(rows[i][j] * x[j] for j in range(n) if x[j]) for i in range(n)
        ]

    def check(x: list[int]) -> bool:
        images = [image(b, x) for b in basis_int]
        target = image(op_int, x)
        stacked = [list(r) for r in images] + [target]
        return integer_rank(images) == integer_rank(stacked)

    return check


def _self_check(
    space: LocalDerivationSpace, ders: DerivationSpace, checks: int, seed: int
) -> None:
    """Every derivation is local; every basis element passes point checks."""
    span = space.span()
    for d in ders.basis:
        if not span.contains(d.vec()):
            raise InternalCheckError("a derivation escaped the computed space")
    rng = random.Random(seed)
    n = space.algebra.dim
    per_op = max(1, checks // max(1, len(space.basis)))
    for op in space.basis:
        member = _membership_checker(ders, op)
        for _ in range(per_op):
            x = [rng.randint(-999, 999) for _ in range(n)]
            if not member(x):
                raise InternalCheckError(
                    "computed local derivation fails a pointwise check"
                )


def strict_inclusion_witness(
    algebra: Algebra,
    ders: DerivationSpace | None = None,
    locders: LocalDerivationSpace | None = None,
    checks: int = 10000,
    seed: int = 0,
) -> Matrix | None:
    """A local derivation that is not a derivation, or None if none exists.

    The witness is validated both ways: it fails the Leibniz identity
    and passes `checks` pointwise membership tests, including points on
    every stratum discovered by the case tree.
    """
    if ders is None:
        ders = derivation_algebra(algebra)
    if locders is None:
        locders = local_derivation_space(algebra)
    der_span = ders.span()
    witness = next(
        (op for op in locders.basis if not der_span.contains(op.vec())), None
    )
    if witness is None:
        return None
    if is_derivation(algebra, witness):
        raise InternalCheckError("witness unexpectedly satisfies Leibniz")
    verify_pointwise_everywhere(algebra, witness, ders, locders.case_tree,
                                checks=checks, seed=seed)
    return witness


def verify_pointwise_everywhere(
    algebra: Algebra,
    op: Matrix,
    ders: DerivationSpace,
    tree: CaseTree | None,
    checks: int = 10000,
    seed: int = 0,
) -> None:
    """Assert pointwise membership on structured plus random points."""
    member = _membership_checker(ders, op)
    points = structured_probe_points(algebra, tree, seed=seed)
    rng = random.Random(seed + 1)
    while len(points) < checks:
        points.append([rng.randint(-999, 999) for _ in range(algebra.dim)])
    for x in points[:checks]:
        if not member(_integer_point(x)):
            raise InternalCheckError(f"pointwise membership fails at {x}")
