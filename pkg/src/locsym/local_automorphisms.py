"""Local automorphisms: pointwise automorphic-image feasibility.

B is a local automorphism when for every x some automorphism phi_x has
B(x) = phi_x(x).  Unlike the derivation side this is a nonlinear
matching problem, so the engine carries a dedicated per-algebra solver:
the feasibility question "does some family member agree with B at x"
is decided by a triangular case schedule over the support of x, with
every decision an exact rational zero test.  Square or cube roots enter
only when building an explicit witness parameter assignment, never in
the feasibility decision itself.

The closed local-automorphism patterns (shape, entry relations and
nonvanishing conditions) live here as LocAutPattern objects, with exact
membership checks, two-way randomized verification against the
pointwise solver, and group-closure checks.
"""
from __future__ import annotations

import cmath
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Algebra
from .errors import InputError, InternalCheckError, UnsupportedError
from .linalg import Matrix, inverse, vector
from .templates import (
    LOCAL_AUTOMORPHISM_FORM_PI2,
    LOCAL_AUTOMORPHISM_FORM_PI3_MINUS,
    LOCAL_AUTOMORPHISM_FORM_PI3_PLUS,
    MatrixTemplate,
)

FLOAT_TOL = 1e-9


# -- feasibility reports ------------------------------------------------------


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    witness_params: dict | None
    residual: float
    exact: bool
    detail: str


def _exact_report(params: dict, detail: str) -> FeasibilityReport:
    return FeasibilityReport(
        feasible=True,
        witness_params=dict(params),
        residual=0.0,
        exact=True,
        detail=detail,
    )


def _infeasible(detail: str) -> FeasibilityReport:
    return FeasibilityReport(
        feasible=False,
        witness_params=None,
        residual=float("inf"),
        exact=True,
        detail=detail,
    )


# -- the pointwise solvers ----------------------------------------------------

# Image coordinates of a family member at x = (n1..n5); these mirror the
# builtin automorphism templates and are cross-checked against them in
# the test suite.


def _phi_image_pi2(p, n):
    a11, a21, a31, a34, a41, a51, a54 = (
        p["a11"], p["a21"], p["a31"], p["a34"], p["a41"], p["a51"], p["a54"]
    )
    s = a11 + a41
    return (
        a11 * n[0],
        a21 * n[0] + a11 * a11 * n[1],
        a31 * n[0] + 2 * a11 * a21 * n[1] + a11 ** 3 * n[2] + a34 * n[3],
        a41 * n[0] + s * n[3],
        a51 * n[0] + (s * s - a11 * a11) * n[1] + a54 * n[3] + s * s * n[4],
    )


def _phi_image_pi3(p, n):
    a11, a21, a31, a34, a51, a54 = (
        p["a11"], p["a21"], p["a31"], p["a34"], p["a51"], p["a54"]
    )
    return (
        a11 * n[0],
        a21 * n[0] + a11 * a11 * n[1],
        a31 * n[0] + 2 * a11 * a21 * n[1] + a11 ** 3 * n[2] + a34 * n[3],
        a11 * n[3],
        a51 * n[0] + a54 * n[3] + a11 * a11 * n[4],
    )


_PI2_PARAMS = ("a11", "a21", "a31", "a34", "a41", "a51", "a54")
_PI3_PARAMS = ("a11", "a21", "a31", "a34", "a51", "a54")


def _zero_params(names) -> dict:
    return {name: Fraction(0) for name in names}


def _sqrts(value: complex):
    root = cmath.sqrt(value)
    return (root, -root)


def _cbrts(value: complex):
    r, phi = cmath.polar(value)
    base = r ** (1 / 3)
    roots = [
        cmath.rect(base, (phi + 2 * cmath.pi * k) / 3) for k in range(3)
    ]
    # prefer (numerically) real roots so that rational data gets
    # readable witnesses like a11 = -1 instead of a complex conjugate
    roots.sort(key=lambda z: abs(z.imag))
    return tuple(roots)


def _try_numeric(image, params, n, y, detail) -> FeasibilityReport | None:
    """Wrap a root-based witness if its float residual is acceptable."""
    numeric = {k: complex(v) for k, v in params.items()}
    image_vec = image(numeric, [complex(v) for v in n])
    residual = max(abs(iv - complex(t)) for iv, t in zip(image_vec, y))
    if residual > FLOAT_TOL:
        return None
    return FeasibilityReport(
        feasible=True,
        witness_params=numeric,
        residual=residual,
        exact=False,
        detail=detail,
    )


def _numeric_or_fail(candidates) -> FeasibilityReport:
    """First root choice whose witness verifies; exhausting them is a bug.

    The schedules only reach a root step after the exact decision says
    feasible, so every root choice should verify up to roundoff.
    """
    for report in candidates:
        if report is not None:
            return report
    raise InternalCheckError(
        "feasible schedule failed to verify any root witness"
    )


def _feasible_pi2(n, y) -> FeasibilityReport:
    n1, n2, n3, n4, n5 = n
    y1, y2, y3, y4, y5 = y
    p = _zero_params(_PI2_PARAMS)
    if n1 != 0:
        if y1 == 0:
            return _infeasible("coordinate 1 forces a11 = 0")
        a11 = y1 / n1
        if n1 + n4 != 0:
            if y1 + y4 == 0:
                return _infeasible("coordinate 4 forces a11 + a41 = 0")
            a41 = (y4 - a11 * n4) / (n1 + n4)
        else:
            if y1 + y4 != 0:
                return _infeasible(
                    "coordinate 4 is inconsistent on the stratum n1 + n4 = 0"
                )
            a41 = Fraction(0)
        a21 = (y2 - a11 * a11 * n2) / n1
        s = a11 + a41
        p.update(a11=a11, a21=a21, a41=a41)
        p["a31"] = (y3 - 2 * a11 * a21 * n2 - a11 ** 3 * n3) / n1
        p["a51"] = (y5 - (s * s - a11 * a11) * n2 - s * s * n5) / n1
        return _exact_report(p, "solved on the n1 != 0 branch")
    if n4 != 0:
        if y1 != 0:
            return _infeasible("coordinate 1 must vanish when n1 = 0")
        if y4 == 0:
            return _infeasible("coordinate 4 forces a11 + a41 = 0")
        s = y4 / n4
        if n2 != 0:
            if y2 == 0:
                return _infeasible("coordinate 2 forces a11 = 0")

            def n4_witnesses():
                for a11 in _sqrts(complex(y2 / n2)):
                    q = {k: complex(v) for k, v in p.items()}
                    q["a11"] = a11
                    q["a41"] = complex(s) - a11
                    q["a34"] = (
                        complex(y3) - a11 ** 3 * complex(n3)
                    ) / complex(n4)
                    q["a54"] = (
                        complex(y5)
                        - (complex(s) ** 2 - a11 ** 2) * complex(n2)
                        - complex(s) ** 2 * complex(n5)
                    ) / complex(n4)
                    yield _try_numeric(
                        _phi_image_pi2, q, n, y,
                        "square root on the n4 branch",
                    )

            return _numeric_or_fail(n4_witnesses())
        if y2 != 0:
            return _infeasible("coordinate 2 is inconsistent when n2 = 0")
        p.update(a11=s)
        p["a34"] = (y3 - s ** 3 * n3) / n4
        p["a54"] = (y5 - s * s * n5) / n4
        return _exact_report(p, "solved on the n4 != 0 branch")
    if n2 != 0:
        if y1 != 0 or y4 != 0:
            return _infeasible("coordinates 1 and 4 must vanish")
        if y2 == 0:
            return _infeasible("coordinate 2 forces a11 = 0")
        if n2 + n5 != 0:
            if y2 + y5 == 0:
                return _infeasible("coordinate 5 forces a11 + a41 = 0")
            u2 = (y2 + y5) / (n2 + n5)
        else:
            if y2 + y5 != 0:
                return _infeasible(
                    "coordinate 5 is inconsistent on the stratum n2 + n5 = 0"
                )
            u2 = y2 / n2
        def n2_witnesses():
            for a11 in _sqrts(complex(y2 / n2)):
                for u in _sqrts(complex(u2)):
                    q = {k: complex(v) for k, v in p.items()}
                    q["a11"] = a11
                    q["a41"] = u - a11
                    q["a21"] = (
                        complex(y3) - a11 ** 3 * complex(n3)
                    ) / (2 * a11 * complex(n2))
                    yield _try_numeric(
                        _phi_image_pi2, q, n, y,
                        "square roots on the n2 branch",
                    )

        return _numeric_or_fail(n2_witnesses())
    if n3 != 0:
        if y1 != 0 or y2 != 0 or y4 != 0:
            return _infeasible("coordinates 1, 2 and 4 must vanish")
        if y3 == 0:
            return _infeasible("coordinate 3 forces a11 = 0")
        if n5 != 0 and y5 == 0:
            return _infeasible("coordinate 5 forces a11 + a41 = 0")
        if n5 == 0 and y5 != 0:
            return _infeasible("coordinate 5 is inconsistent when n5 = 0")

        def n3_witnesses():
            for a11 in _cbrts(complex(y3 / n3)):
                roots = _sqrts(complex(y5 / n5)) if n5 != 0 else (a11,)
                for u in roots:
                    q = {k: complex(v) for k, v in p.items()}
                    q["a11"] = a11
                    q["a41"] = u - a11
                    yield _try_numeric(
                        _phi_image_pi2, q, n, y,
                        "cube root on the n3 branch",
                    )

        return _numeric_or_fail(n3_witnesses())
    if n5 != 0:
        if y1 != 0 or y2 != 0 or y3 != 0 or y4 != 0:
            return _infeasible("coordinates 1 through 4 must vanish")
        if y5 == 0:
            return _infeasible("coordinate 5 forces a11 + a41 = 0")

        def n5_witnesses():
            for u in _sqrts(complex(y5 / n5)):
                q = {k: complex(v) for k, v in p.items()}
                q["a11"] = u
                yield _try_numeric(
                    _phi_image_pi2, q, n, y,
                    "square root on the n5 branch",
                )

        return _numeric_or_fail(n5_witnesses())
    p["a11"] = Fraction(1)
    return _exact_report(p, "x = 0 is matched by the identity")


def _feasible_pi3(n, y) -> FeasibilityReport:
    n1, n2, n3, n4, n5 = n
    y1, y2, y3, y4, y5 = y
    p = _zero_params(_PI3_PARAMS)
    if n1 != 0:
        if y1 == 0:
            return _infeasible("coordinate 1 forces a11 = 0")
        if y1 * n4 != y4 * n1:
            return _infeasible("coordinates 1 and 4 disagree about a11")
        a11 = y1 / n1
        a21 = (y2 - a11 * a11 * n2) / n1
        p.update(a11=a11, a21=a21)
        p["a31"] = (y3 - 2 * a11 * a21 * n2 - a11 ** 3 * n3) / n1
        p["a51"] = (y5 - a11 * a11 * n5) / n1
        return _exact_report(p, "solved on the n1 != 0 branch")
    if n4 != 0:
        if y1 != 0:
            return _infeasible("coordinate 1 must vanish when n1 = 0")
        if y4 == 0:
            return _infeasible("coordinate 4 forces a11 = 0")
        a11 = y4 / n4
        if n2 != 0:
            if y4 * y4 * n2 != y2 * n4 * n4:
                return _infeasible("coordinate 2 disagrees with a11 squared")
        elif y2 != 0:
            return _infeasible("coordinate 2 is inconsistent when n2 = 0")
        p.update(a11=a11)
        p["a34"] = (y3 - a11 ** 3 * n3) / n4
        p["a54"] = (y5 - a11 * a11 * n5) / n4
        return _exact_report(p, "solved on the n4 != 0 branch")
    if n2 != 0:
        if y1 != 0 or y4 != 0:
            return _infeasible("coordinates 1 and 4 must vanish")
        if y2 == 0:
            return _infeasible("coordinate 2 forces a11 = 0")
        if y2 * n5 != y5 * n2:
            return _infeasible("coordinate 5 disagrees with a11 squared")

        def n2_witnesses():
            for a11 in _sqrts(complex(y2 / n2)):
                q = {k: complex(v) for k, v in p.items()}
                q["a11"] = a11
                q["a21"] = (
                    complex(y3) - a11 ** 3 * complex(n3)
                ) / (2 * a11 * complex(n2))
                yield _try_numeric(
                    _phi_image_pi3, q, n, y,
                    "square root on the n2 branch",
                )

        return _numeric_or_fail(n2_witnesses())
    if n3 != 0:
        if y1 != 0 or y2 != 0 or y4 != 0:
            return _infeasible("coordinates 1, 2 and 4 must vanish")
        if y3 == 0:
            return _infeasible("coordinate 3 forces a11 = 0")
        w = y3 / n3
        if n5 != 0:
            if y5 == 0:
                return _infeasible("coordinate 5 forces a11 = 0")
            u = y5 / n5
            if w * w != u ** 3:
                return _infeasible(
                    "coordinates 3 and 5 need a11^3 and a11^2 with "
                    "incompatible values"
                )
            p["a11"] = w / u
            return _exact_report(p, "solved exactly on the n3, n5 branch")
        if y5 != 0:
            return _infeasible("coordinate 5 is inconsistent when n5 = 0")

        def n3_witnesses():
            for a11 in _cbrts(complex(w)):
                q = {k: complex(v) for k, v in p.items()}
                q["a11"] = a11
                yield _try_numeric(
                    _phi_image_pi3, q, n, y,
                    "cube root on the n3 branch",
                )

        return _numeric_or_fail(n3_witnesses())
    if n5 != 0:
        if y1 != 0 or y2 != 0 or y3 != 0 or y4 != 0:
            return _infeasible("coordinates 1 through 4 must vanish")
        if y5 == 0:
            return _infeasible("coordinate 5 forces a11 = 0")

        def n5_witnesses():
            for a11 in _sqrts(complex(y5 / n5)):
                q = {k: complex(v) for k, v in p.items()}
                q["a11"] = a11
                yield _try_numeric(
                    _phi_image_pi3, q, n, y,
                    "square root on the n5 branch",
                )

        return _numeric_or_fail(n5_witnesses())
    p["a11"] = Fraction(1)
    return _exact_report(p, "x = 0 is matched by the identity")


_SOLVERS = {"pi2": _feasible_pi2, "pi3": _feasible_pi3}


def locaut_feasible_at(algebra: Algebra, b: Matrix, x) -> FeasibilityReport:
    """Does some automorphism agree with b at x?  Decided exactly.

    The decision is a chain of rational zero tests ordered by the
    support of x; complex roots appear only inside witness parameters.
    """
    solver = _SOLVERS.get(algebra.name)
    if solver is None:
        raise UnsupportedError(
            "pointwise feasibility schedules exist for the builtin "
            "algebras only"
        )
    x = vector(x)
    if len(x) != algebra.dim:
        raise InputError("point dimension does not match the algebra")
    y = b.apply(x)
    return solver(x, y)


# -- the closed patterns ------------------------------------------------------


@dataclass(frozen=True)
class PatternCheck:
    ok: bool
    branch: str | None      # pi3 sign branch: "+", "-", or None
    boundary: bool          # shape and relations hold, nonvanishing fails
    failures: tuple[str, ...]


@dataclass(frozen=True)
class LocAutPattern:
    """Closed local-automorphism form: shape, relations, open conditions."""

    algebra: Algebra
    templates: tuple[MatrixTemplate, ...]   # one per branch

    @property
    def branches(self) -> tuple[str, ...]:
        return ("+",) if len(self.templates) == 1 else ("+", "-")

    def template(self, branch: str = "+") -> MatrixTemplate:
        return self.templates[0 if branch == "+" else 1]

    def dimension(self) -> int:
        """Free-coordinate count of one branch.

        Every parameter occupies some entry as a bare degree-one
        monomial, so the projection onto those entries has full rank
        and the parameter count is the dimension.
        """
        template = self.templates[0]
        free = set()
        for row in template.entries:
            for entry in row:
                vs = entry.variables()
                if len(vs) == 1 and entry.degree_in(vs[0]) == 1:
                    coeffs = entry.coeff_split(vs[0])
                    if coeffs[1].is_zero():
                        free.add(vs[0])
        if free != set(template.params):
            raise InternalCheckError(
                "pattern has parameters without a free coordinate"
            )
        return len(template.params)


def locaut_pattern(algebra: Algebra) -> LocAutPattern:
    if algebra.name == "pi2":
        return LocAutPattern(
            algebra=algebra, templates=(LOCAL_AUTOMORPHISM_FORM_PI2,)
        )
    if algebra.name == "pi3":
        return LocAutPattern(
            algebra=algebra,
            templates=(
                LOCAL_AUTOMORPHISM_FORM_PI3_PLUS,
                LOCAL_AUTOMORPHISM_FORM_PI3_MINUS,
            ),
        )
    raise UnsupportedError(
        "closed local-automorphism patterns exist for the builtin "
        "algebras only"
    )


def pattern_check(pattern: LocAutPattern, b: Matrix) -> PatternCheck:
    """Exact membership: zero shape, entry relations, open conditions.

    Matrices satisfying shape and relations but violating only the
    nonvanishing conditions are flagged as boundary cases: they are
    excluded by the pattern's open hypotheses rather than its relations.
    """
    if b.shape != (pattern.algebra.dim,) * 2:
        raise InputError("matrix shape does not match the pattern")
    failures: list[str] = []
    e = b.rows
    if pattern.algebra.name == "pi2":
        branch = None
        zeros = LOCAL_AUTOMORPHISM_FORM_PI2.zero_positions()
        for (i, j) in zeros:
            if e[i][j] != 0:
                failures.append(f"entry ({i + 1},{j + 1}) must vanish")
        if e[3][3] != e[3][0] + e[0][0]:
            failures.append("relation b44 = b41 + b11 fails")
        if e[4][4] != e[1][1] + e[4][1]:
            failures.append("relation b55 = b22 + b52 fails")
        open_factors = {
            "b11": e[0][0],
            "b22": e[1][1],
            "b33": e[2][2],
            "b41 + b11": e[3][0] + e[0][0],
            "b22 + b52": e[1][1] + e[4][1],
        }
    else:
        b11 = e[0][0]
        zeros = LOCAL_AUTOMORPHISM_FORM_PI3_PLUS.zero_positions()
        for (i, j) in zeros:
            if e[i][j] != 0:
                failures.append(f"entry ({i + 1},{j + 1}) must vanish")
        if e[1][1] != b11 * b11:
            failures.append("relation b22 = b11^2 fails")
        if e[3][3] != b11:
            failures.append("relation b44 = b11 fails")
        if e[4][4] != b11 * b11:
            failures.append("relation b55 = b11^2 fails")
        cube = b11 ** 3
        if e[2][2] == cube and b11 != 0:
            branch = "+"
        elif e[2][2] == -cube and b11 != 0:
            branch = "-"
        else:
            branch = None
            if e[2][2] != cube and e[2][2] != -cube:
                failures.append("relation b33 = +-b11^3 fails")
        open_factors = {"b11": b11}
    shape_ok = not failures
    for name, value in open_factors.items():
        if value == 0:
            failures.append(f"open condition {name} != 0 fails")
    return PatternCheck(
        ok=not failures,
        branch=branch,
        boundary=shape_ok and bool(failures),
        failures=tuple(failures),
    )


def random_pattern_member(
    pattern: LocAutPattern,
    rng: random.Random,
    bound: int = 9,
    branch: str | None = None,
) -> Matrix:
    """Random exact member; branch is drawn at random for pi3 if unset."""
    if branch is None:
        branch = rng.choice(pattern.branches)
    template = pattern.template(branch)
    while True:
        params = {
            p: Fraction(rng.randint(-bound, bound)) for p in template.params
        }
        if all(c.evaluate(params) != 0 for c in template.nonzero):
            return template.instantiate(params)


# -- randomized two-way verification ------------------------------------------

_STRATUM_POINTS = (
    (1, 0, 0, -1, 0),   # n1 + n4 = 0
    (0, 1, 0, 0, -1),   # n2 + n5 = 0
)


def probe_points(dim: int) -> list[tuple[Fraction, ...]]:
    """Structured refutation probes: e_i, e_i + e_j, stratum points."""
    points = []
    for i in range(dim):
        points.append(
            tuple(Fraction(1 if t == i else 0) for t in range(dim))
        )
    for i in range(dim):
        for j in range(i + 1, dim):
            points.append(
                tuple(
                    Fraction(1 if t in (i, j) else 0) for t in range(dim)
                )
            )
    for raw in _STRATUM_POINTS:
        if len(raw) == dim:
            points.append(tuple(Fraction(v) for v in raw))
    return points


def find_witness(
    algebra: Algebra,
    b: Matrix,
    seed: int = 0,
    random_trials: int = 1000,
) -> tuple[Fraction, ...] | None:
    """A point where b has no automorphic match, or None if none found."""
    for x in probe_points(algebra.dim):
        if not locaut_feasible_at(algebra, b, x).feasible:
            return x
    rng = random.Random(seed)
    for _ in range(random_trials):
        x = tuple(Fraction(rng.randint(-9, 9)) for _ in range(algebra.dim))
        if not locaut_feasible_at(algebra, b, x).feasible:
            return x
    return None


def _point_cycle(dim: int):
    """Support patterns plus the singled-out strata, as sampler specs."""
    supports = [
        s
        for size in range(1, dim + 1)
        for s in itertools.combinations(range(dim), size)
    ]
    strata = [raw for raw in _STRATUM_POINTS if len(raw) == dim]
    return supports, strata


def _random_point(supports, strata, dim: int, rng: random.Random, k: int):
    """k-th sample point: cycles every support pattern, then the strata."""
    phase = k % (len(supports) + len(strata))
    if phase < len(supports):
        support = set(supports[phase])
        return tuple(
            Fraction(rng.randint(-9, 9)) if i in support else Fraction(0)
            for i in range(dim)
        )
    scale = Fraction(rng.randint(1, 9))
    return tuple(scale * Fraction(v) for v in strata[phase - len(supports)])


@dataclass(frozen=True)
class PatternReport:
    ok: bool
    trials: int
    counterexample: tuple[Matrix, tuple | None] | None
    detail: str


def verify_pattern(
    pattern: LocAutPattern, trials: int = 200, seed: int = 0
) -> PatternReport:
    """Two-way check of "local automorphism iff pattern member".

    Forward: random members are feasible at `trials` points spanning
    every support pattern and the singled-out strata.  Reverse: random
    single-relation violations must be refuted by an explicit witness
    point.
    """
    rng = random.Random(seed)
    algebra = pattern.algebra
    supports, strata = _point_cycle(algebra.dim)
    for t in range(trials):
        member = random_pattern_member(pattern, rng)
        for k in range(trials):
            x = _random_point(supports, strata, algebra.dim, rng, k)
            report = locaut_feasible_at(algebra, member, x)
            if not report.feasible:
                return PatternReport(
                    ok=False,
                    trials=t + 1,
                    counterexample=(member, x),
                    detail=f"pattern member infeasible at {x}: "
                           f"{report.detail}",
                )
    for t in range(trials):
        violated = _random_violation(pattern, rng)
        witness = find_witness(algebra, violated, seed=seed + t,
                               random_trials=1000)
        if witness is None:
            return PatternReport(
                ok=False,
                trials=t + 1,
                counterexample=(violated, None),
                detail="a relation violation survived every probe point",
            )
    return PatternReport(
        ok=True,
        trials=trials,
        counterexample=None,
        detail="members feasible everywhere; violations all refuted",
    )


def _random_violation(pattern: LocAutPattern, rng: random.Random) -> Matrix:
    """A matrix violating exactly one pattern constraint."""
    member = random_pattern_member(pattern, rng)
    rows = [list(row) for row in member.rows]
    name = pattern.algebra.name
    delta = Fraction(rng.randint(1, 9))
    kinds = ["zero", "relation", "open"]
    kind = rng.choice(kinds)
    if kind == "zero":
        zeros = pattern.templates[0].zero_positions()
        i, j = zeros[rng.randrange(len(zeros))]
        rows[i][j] += delta
        return Matrix(rows)
    if kind == "relation":
        if name == "pi2":
            i, j = rng.choice(((3, 3), (4, 4)))
            rows[i][j] += delta
        else:
            i, j = rng.choice(((1, 1), (2, 2), (3, 3), (4, 4)))
            if (i, j) == (2, 2):
                # keep clear of the opposite sign branch
                cube = rows[0][0] ** 3
                while rows[2][2] + delta in (cube, -cube):
                    delta += 1
            rows[i][j] += delta
        return Matrix(rows)
    # open condition violated while every relation still holds
    if name == "pi2":
        which = rng.choice(("b11", "b22", "b33", "b41+b11", "b22+b52"))
        if which == "b11":
            rows[0][0] = Fraction(0)
            rows[3][3] = rows[3][0]
        elif which == "b22":
            rows[1][1] = Fraction(0)
            rows[4][4] = rows[4][1]
        elif which == "b33":
            rows[2][2] = Fraction(0)
        elif which == "b41+b11":
            rows[3][0] = -rows[0][0]
            rows[3][3] = Fraction(0)
        else:
            rows[4][1] = -rows[1][1]
            rows[4][4] = Fraction(0)
        return Matrix(rows)
    # pi3 open condition: the only factor is b11, so evaluate the grid
    # at b11 = 0 directly (instantiate would reject the assignment).
    template = pattern.template(rng.choice(pattern.branches))
    params = {p: Fraction(rng.randint(-9, 9)) for p in template.params}
    params["b11"] = Fraction(0)
    return Matrix(
        [[entry.evaluate(params) for entry in row] for row in template.entries]
    )


def group_closure_check(
    pattern: LocAutPattern, trials: int = 100, seed: int = 0
) -> bool:
    """Products and inverses of members stay in the pattern (exact)."""
    rng = random.Random(seed)
    for _ in range(trials):
        a = random_pattern_member(pattern, rng)
        b = random_pattern_member(pattern, rng)
        if not pattern_check(pattern, a * b).ok:
            return False
        if not pattern_check(pattern, inverse(a)).ok:
            return False
    return True


# -- float-side pattern residual (used by the exponential bridge) -------------


@dataclass(frozen=True)
class NumericPatternCheck:
    residual: float
    branch: str | None
    min_open: float


def pattern_residual(algebra: Algebra, rows) -> NumericPatternCheck:
    """Max violation of the pattern over complex entries, plus branch.

    For pi3 the branch is the sign making |b33 -+ b11^3| smallest.
    min_open reports how far the open conditions are from vanishing.
    """
    e = [[complex(v) for v in row] for row in rows]
    if algebra.name == "pi2":
        zeros = LOCAL_AUTOMORPHISM_FORM_PI2.zero_positions()
        residual = max(abs(e[i][j]) for i, j in zeros)
        residual = max(residual, abs(e[3][3] - e[3][0] - e[0][0]))
        residual = max(residual, abs(e[4][4] - e[1][1] - e[4][1]))
        min_open = min(
            abs(e[0][0]), abs(e[1][1]), abs(e[2][2]),
            abs(e[3][0] + e[0][0]), abs(e[1][1] + e[4][1]),
        )
        return NumericPatternCheck(residual, None, min_open)
    if algebra.name == "pi3":
        zeros = LOCAL_AUTOMORPHISM_FORM_PI3_PLUS.zero_positions()
        b11 = e[0][0]
        residual = max(abs(e[i][j]) for i, j in zeros)
        residual = max(residual, abs(e[1][1] - b11 * b11))
        residual = max(residual, abs(e[3][3] - b11))
        residual = max(residual, abs(e[4][4] - b11 * b11))
        plus = abs(e[2][2] - b11 ** 3)
        minus = abs(e[2][2] + b11 ** 3)
        branch = "+" if plus <= minus else "-"
        residual = max(residual, min(plus, minus))
        return NumericPatternCheck(residual, branch, abs(b11))
    raise UnsupportedError(
        "numeric pattern residuals exist for the builtin algebras only"
    )
