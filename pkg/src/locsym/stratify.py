"""Stratified elimination for parametric linear systems.

The systems handled here are linear in the unknowns alpha, with
coefficients that are polynomials in probe coordinates nu and right-hand
sides that are linear in output symbols b:

    sum_u  c_{e,u}(nu) * alpha_u  =  rhs_e(nu, b)      for each equation e.

The question answered is: for which b is the system solvable for EVERY
nu?  Gaussian elimination in alpha works, except that pivot coefficients
are polynomials in nu which may vanish on subvarieties, so every pivot
splits the nu-space into strata.  Each pivot coefficient is factored
into degree-1 factors; a vanishing factor is eliminated by substituting
the solved variable, a nonvanishing factor joins the stratum's
inequations.  At a leaf no unknown has a nonzero coefficient left, so
each surviving equation demands that its right-hand side vanish
identically on the stratum; reading coefficients off nu-monomials turns
that into linear constraints on b.  After substituting the stratum's
linear equalities the remaining free nu coordinates range over a full
affine space minus finitely many hypersurfaces, so identical vanishing
of a polynomial on the stratum is equivalent to all its coefficients
vanishing, which is what makes the leaf constraints exact.

The leaves partition the nu-space, so the union of all leaf constraints
is necessary and sufficient for universal solvability.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import InternalCheckError, StratificationError, UnsupportedError
from .linalg import Matrix, Subspace, nullspace, solve
from .poly import Poly, linear_factors
from .rationals import random_rational

MAX_DEPTH = 12

_SAMPLE_BASE = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)
_SAMPLE_STEP = (31, 37, 41, 43, 47, 53, 59, 61, 67, 71)


@dataclass(frozen=True)
class Equation:
    """One parametric equation: sum of coeffs[u]*u equals rhs."""

    coeffs: Mapping[str, Poly]
    rhs: Poly

    def subs(self, mapping) -> "Equation":
        return Equation(
            coeffs={u: c.subs(mapping) for u, c in self.coeffs.items()},
            rhs=self.rhs.subs(mapping),
        )

    def combine(self, scale_self: Poly, other: "Equation", scale_other: Poly):
        """scale_self * self - scale_other * other, coefficientwise."""
        coeffs = {}
        for u in self.coeffs:
            coeffs[u] = scale_self * self.coeffs[u] - scale_other * other.coeffs[u]
        rhs = scale_self * self.rhs - scale_other * other.rhs
        return Equation(coeffs=coeffs, rhs=rhs)


@dataclass(frozen=True)
class ParametricSystem:
    unknowns: tuple[str, ...]
    nu_vars: tuple[str, ...]
    rhs_symbols: tuple[str, ...]
    equations: tuple[Equation, ...]

    def __post_init__(self):
        nu = set(self.nu_vars)
        ok_rhs = nu | set(self.rhs_symbols)
        for eq in self.equations:
            for u, c in eq.coeffs.items():
                if u not in self.unknowns:
                    raise UnsupportedError(f"coefficient for undeclared unknown {u}")
                if not set(c.variables()) <= nu:
                    raise UnsupportedError(
                        f"coefficient {c} is not a polynomial in the probe variables"
                    )
                if c.total_degree() > 3:
                    raise UnsupportedError("coefficient degree above the supported bound")
            if not set(eq.rhs.variables()) <= ok_rhs:
                raise UnsupportedError("right-hand side uses undeclared symbols")
            try:
                lin, rest = eq.rhs.linear_decompose(self.rhs_symbols)
            except ValueError:
                raise UnsupportedError("right-hand side is not linear in the outputs")
            if not rest.is_zero():
                raise UnsupportedError("right-hand side has an output-free part")


@dataclass(frozen=True)
class StratumCase:
    """One leaf stratum: conditions, solved substitution and b-constraints."""

    equalities: tuple[Poly, ...]
    inequations: tuple[Poly, ...]
    substitution: Mapping[str, Poly]
    free_vars: tuple[str, ...]
    constraints: tuple[Poly, ...]
    sample: Mapping[str, Fraction]

    def contains(self, point: Mapping[str, Fraction]) -> bool:
        """Exact stratum membership of a full nu assignment."""
        if any(e.evaluate(point) != 0 for e in self.equalities):
            return False
        return all(q.evaluate(point) != 0 for q in self.inequations)

    def signature(self) -> tuple[tuple[str, ...], tuple[str, ...]]:
        return (
            tuple(str(e) for e in self.equalities),
            tuple(str(q) for q in self.inequations),
        )


@dataclass
class CaseTree:
    system: ParametricSystem
    leaves: tuple[StratumCase, ...]
    depth: int
    _aggregated: tuple[Poly, ...] | None = field(default=None, repr=False)

    @property
    def aggregated_constraints(self) -> tuple[Poly, ...]:
        if self._aggregated is None:
            seen = {}
            for leaf in self.leaves:
                for c in leaf.constraints:
                    seen.setdefault(str(c), c)
            self._aggregated = tuple(seen[k] for k in sorted(seen))
        return self._aggregated

    def constraint_rows(self) -> list[tuple[Fraction, ...]]:
        return [
            _linear_form_row(c, self.system.rhs_symbols)
            for c in self.aggregated_constraints
        ]

    def solution_space(self) -> Subspace:
        """All b satisfying every leaf's constraints."""
        ambient = len(self.system.rhs_symbols)
        rows = self.constraint_rows()
        if not rows:
            return Subspace(ambient, Matrix.identity(ambient).rows)
        return Subspace(ambient, nullspace(Matrix(rows)))

    def leaf_for(self, point: Mapping[str, Fraction]) -> StratumCase | None:
        hits = [leaf for leaf in self.leaves if leaf.contains(point)]
        if len(hits) > 1:
            raise InternalCheckError("strata overlap at a probe point")
        return hits[0] if hits else None

    def to_dict(self) -> dict:
        return {
            "unknowns": list(self.system.unknowns),
            "probe_vars": list(self.system.nu_vars),
            "depth": self.depth,
            "leaves": [
                {
                    "equalities": [str(e) for e in leaf.equalities],
                    "inequations": [str(q) for q in leaf.inequations],
                    "constraints": [str(c) for c in leaf.constraints],
                    "sample": {
                        v: str(leaf.sample[v]) for v in sorted(leaf.sample)
                    },
                }
                for leaf in self.leaves
            ],
            "aggregated_constraints": [
                str(c) for c in self.aggregated_constraints
            ],
        }


def _linear_form_row(form: Poly, symbols: Sequence[str]) -> tuple[Fraction, ...]:
    lin, rest = form.linear_decompose(symbols)
    if not rest.is_zero():
        raise InternalCheckError(f"constraint {form} is not homogeneous linear")
    row = []
    for s in symbols:
        c = lin[s]
        if not c.is_constant():
            raise InternalCheckError(f"constraint {form} has nonconstant coefficients")
        row.append(c.constant_value() if not c.is_zero() else Fraction(0))
    return tuple(row)


# -- the explorer -----------------------------------------------------------


def solve_parametric(system: ParametricSystem, max_depth: int = MAX_DEPTH) -> CaseTree:
    """Build the full case tree of the parametric system.

    Raises StratificationError when a pivot coefficient cannot be split
    into degree-1 factors or the split depth exceeds max_depth.
    """
    leaves: list[StratumCase] = []
    state = _State(system=system, max_depth=max_depth, leaves=leaves)
    normalized = [
        Equation(
            coeffs={u: eq.coeffs.get(u, Poly.zero()) for u in system.unknowns},
            rhs=eq.rhs,
        )
        for eq in system.equations
    ]
    state.explore(
        eqs=normalized,
        equalities=[],
        ineq_shown=[],
        ineq_current=[],
        subst={},
        depth=0,
    )
    leaves.sort(key=lambda leaf: leaf.signature())
    tree = CaseTree(system=system, leaves=tuple(leaves), depth=state.max_seen)
    for leaf in tree.leaves:
        _verify_leaf(system, leaf)
    return tree


@dataclass
class _State:
    system: ParametricSystem
    max_depth: int
    leaves: list
    max_seen: int = 0

    def explore(self, eqs, equalities, ineq_shown, ineq_current, subst, depth):
        self.max_seen = max(self.max_seen, depth)
        pivot = self._select_pivot(eqs, ineq_current)
        if pivot is None:
            self.leaves.append(
                _make_leaf(self.system, eqs, equalities, ineq_shown, subst)
            )
            return
        eq_index, unknown, factors = pivot
        novel = []
        for f in factors:
            if f not in ineq_current and f not in novel:
                novel.append(f)
        if novel and depth >= self.max_depth:
            raise StratificationError(
                f"case split depth exceeded {self.max_depth}"
            )
        next_depth = depth + 1 if novel else depth
        # Vanishing branches: factor i is zero, factors 0..i-1 are not.
        for idx, factor in enumerate(novel):
            var = max(factor.variables())
            a, b = factor.coeff_split(var)
            expr = b * (-1 / a.constant_value())
            mapping = {var: expr}
            new_subst = {v: e.subs(mapping) for v, e in subst.items()}
            new_subst[var] = expr
            new_current = []
            empty = False
            for q in ineq_current + novel[:idx]:
                reduced = q.subs(mapping)
                if reduced.is_zero():
                    empty = True  # a required-nonzero form vanished: empty stratum
                    break
                if not reduced.is_constant():
                    _, reduced = reduced.content_primitive()
                new_current.append(reduced)
            if empty:
                continue
            self.explore(
                eqs=[eq.subs(mapping) for eq in eqs],
                equalities=equalities + [factor],
                ineq_shown=ineq_shown + novel[:idx],
                ineq_current=[q for q in new_current if not q.is_constant()],
                subst=new_subst,
                depth=next_depth,
            )
        # Generic branch: every factor of the pivot coefficient is nonzero.
        pivot_eq = eqs[eq_index]
        pivot_coeff = pivot_eq.coeffs[unknown]
        reduced_eqs = []
        for i, eq in enumerate(eqs):
            if i == eq_index:
                continue
            other_coeff = eq.coeffs[unknown]
            if other_coeff.is_zero():
                combined = eq
            else:
                combined = eq.combine(pivot_coeff, pivot_eq, other_coeff)
            reduced_eqs.append(
                Equation(
                    coeffs={
                        u: c for u, c in combined.coeffs.items() if u != unknown
                    },
                    rhs=combined.rhs,
                )
            )
        self.explore(
            eqs=reduced_eqs,
            equalities=equalities,
            ineq_shown=ineq_shown + novel,
            ineq_current=ineq_current + novel,
            subst=subst,
            depth=next_depth,
        )

    def _select_pivot(self, eqs, ineq_current):
        """Pivot with the fewest new factors, then fewest factors overall."""
        best = None
        best_key = None
        failure = None
        known = set(ineq_current)
        for ei, eq in enumerate(eqs):
            for unknown in sorted(eq.coeffs):
                coeff = eq.coeffs[unknown]
                if coeff.is_zero():
                    continue
                try:
                    _, factors = linear_factors(coeff)
                except StratificationError as exc:
                    failure = exc
                    continue
                new = {f for f in factors if f not in known}
                key = (len(new), len(factors), ei, unknown)
                if best_key is None or key < best_key:
                    best_key = key
                    best = (ei, unknown, factors)
        if best is None and failure is not None:
            # Some coefficient is nonzero but no pivot is factorable.
            if any(
                not c.is_zero() for eq in eqs for c in eq.coeffs.values()
            ):
                raise failure
        return best


def _make_leaf(system, eqs, equalities, ineq_shown, subst) -> StratumCase:
    constraints: dict[str, Poly] = {}
    for eq in eqs:
        if any(not c.is_zero() for c in eq.coeffs.values()):
            raise InternalCheckError("leaf reached with a live unknown")
        for _, coeff in eq.rhs.group_by(system.nu_vars).items():
            if coeff.is_zero():
                continue
            _, prim = coeff.content_primitive()
            constraints.setdefault(str(prim), prim)
    free_vars = tuple(v for v in system.nu_vars if v not in subst)
    sample = _deterministic_sample(system.nu_vars, free_vars, subst, ineq_shown)
    leaf = StratumCase(
        equalities=tuple(equalities),
        inequations=tuple(ineq_shown),
        substitution=dict(subst),
        free_vars=free_vars,
        constraints=tuple(constraints[k] for k in sorted(constraints)),
        sample=sample,
    )
    return leaf


def _deterministic_sample(nu_vars, free_vars, subst, inequations):
    """A stratum point with small deterministic coordinates."""
    order = {v: i for i, v in enumerate(free_vars)}
    rng = random.Random(0)
    for attempt in range(1064):
        point = {}
        for v in free_vars:
            i = order[v] % len(_SAMPLE_BASE)
            if attempt < 64:
                point[v] = Fraction(_SAMPLE_BASE[i] + attempt * _SAMPLE_STEP[i])
            else:
                point[v] = random_rational(rng, bound=997)
        for v, expr in subst.items():
            point[v] = expr.evaluate(point)
        if all(q.evaluate(point) != 0 for q in inequations):
            return {v: point[v] for v in nu_vars}
    raise StratificationError("could not sample a stratum point")


def sample_stratum(case: StratumCase, seed: int = 0) -> dict[str, Fraction]:
    """Random exact point of the stratum by rejection over the free vars."""
    rng = random.Random(seed)
    for _ in range(10000):
        point = {v: random_rational(rng) for v in case.free_vars}
        for v, expr in case.substitution.items():
            point[v] = expr.evaluate(point)
        if all(q.evaluate(point) != 0 for q in case.inequations):
            return point
    raise UnsupportedError("stratum appears to have no admissible points")


def instantiate_at(
    system: ParametricSystem,
    point: Mapping[str, Fraction],
    b_values: Mapping[str, Fraction],
) -> tuple[Matrix, tuple[Fraction, ...]]:
    """Plain exact linear system obtained by pinning nu and b."""
    assignment = dict(point)
    assignment.update(b_values)
    rows = []
    rhs = []
    for eq in system.equations:
        rows.append(
            [eq.coeffs[u].evaluate(point) for u in system.unknowns]
        )
        rhs.append(eq.rhs.evaluate(assignment))
    return Matrix(rows), tuple(rhs)


def _verify_leaf(system: ParametricSystem, leaf: StratumCase) -> None:
    """Self check: a b obeying the leaf constraints is solvable at the sample."""
    ambient = len(system.rhs_symbols)
    rows = [_linear_form_row(c, system.rhs_symbols) for c in leaf.constraints]
    if rows:
        kernel = nullspace(Matrix(rows))
    else:
        kernel = Matrix.identity(ambient).rows
    b_vec = [Fraction(0)] * ambient
    for k, vec in enumerate(kernel):
        for i, v in enumerate(vec):
            b_vec[i] += Fraction(1, k + 1) * v
    b_values = dict(zip(system.rhs_symbols, b_vec))
    matrix, rhs = instantiate_at(system, leaf.sample, b_values)
    if solve(matrix, rhs) is None:
        raise InternalCheckError(
            "leaf constraints do not guarantee solvability at the sample point"
        )
