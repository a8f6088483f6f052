"""Matrix templates: parameterized matrix shapes with open conditions.

A template is a dim x dim grid of polynomials in named parameters plus a
list of polynomials that an admissible assignment must keep nonzero.
The closed forms of the derivation algebras, local derivation spaces and
automorphism groups of pi2 and pi3 all live here as built-ins.

template_match solves for the parameters of a given exact matrix by
scanning entries in row-major order: each entry either determines a new
parameter (it must appear linearly once earlier entries pinned the
rest), or is a pure consistency check, evaluated exactly.  Power
constraints like a11^3 are therefore checked as equalities of powers,
never by extracting roots.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError, UnsupportedError
from .linalg import Matrix, Subspace
from .poly import Poly, poly


@dataclass(frozen=True)
class MatrixTemplate:
    dim: int
    params: tuple[str, ...]
    entries: tuple[tuple[Poly, ...], ...]
    nonzero: tuple[Poly, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if len(self.entries) != self.dim or any(
            len(row) != self.dim for row in self.entries
        ):
            raise InputError("template grid does not match declared dimension")
        allowed = set(self.params)
        for row in self.entries:
            for entry in row:
                if not set(entry.variables()) <= allowed:
                    raise InputError(
                        f"entry {entry} uses undeclared parameters"
                    )

    def instantiate(self, assignment) -> Matrix:
        """Exact matrix at the given parameter values.

        Unlisted parameters default to zero; open conditions must hold.
        """
        values = {p: Fraction(0) for p in self.params}
        for key, val in assignment.items():
            if key not in values:
                raise InputError(f"unknown template parameter {key!r}")
            values[key] = Fraction(val)
        for condition in self.nonzero:
            if condition.evaluate(values) == 0:
                raise InputError(
                    f"open condition violated: {condition} = 0"
                )
        return Matrix(
            [[e.evaluate(values) for e in row] for row in self.entries]
        )

    def instantiate_numeric(self, assignment):
        """Complex instantiation; open conditions are not enforced here."""
        values = {p: 0j for p in self.params}
        values.update({k: complex(v) for k, v in assignment.items()})
        return [
            [e.evaluate_numeric(values) for e in row] for row in self.entries
        ]

    def is_linear(self) -> bool:
        try:
            for row in self.entries:
                for entry in row:
                    entry.linear_decompose(self.params)
        except ValueError:
            return False
        return True

    def parameter_span(self) -> Subspace:
        """Span of the vectorized parameter directions (linear templates)."""
        if not self.is_linear():
            raise UnsupportedError(
                "parameter span is defined for linear templates only"
            )
        vectors = []
        for param in self.params:
            vec = []
            for row in self.entries:
                for entry in row:
                    lin, rest = entry.linear_decompose(self.params)
                    if not rest.is_zero():
                        raise UnsupportedError(
                            "affine templates have no parameter span"
                        )
                    coeff = lin[param]
                    vec.append(
                        coeff.constant_value() if not coeff.is_zero() else Fraction(0)
                    )
            vectors.append(tuple(vec))
        return Subspace(self.dim * self.dim, vectors)

    def zero_positions(self) -> tuple[tuple[int, int], ...]:
        return tuple(
            (i, j)
            for i, row in enumerate(self.entries)
            for j, entry in enumerate(row)
            if entry.is_zero()
        )


def _grid(rows: list[list[str | int]]) -> tuple[tuple[Poly, ...], ...]:
    return tuple(tuple(poly(e) for e in row) for row in rows)


def template_match(template: MatrixTemplate, m: Matrix) -> dict[str, Fraction] | None:
    """Parameter assignment with instantiate(assignment) == m, or None.

    Entries are processed in row-major order.  After substituting the
    parameters already determined, an entry must be constant (checked
    exactly) or linear in exactly one new parameter (solved exactly);
    any other shape is outside the supported triangular fragment.
    """
    if m.shape != (template.dim, template.dim):
        raise InputError("matrix shape does not match template")
    assignment: dict[str, Fraction] = {}
    for i in range(template.dim):
        for j in range(template.dim):
            entry = template.entries[i][j].subs(assignment)
            target = m.rows[i][j]
            if entry.is_constant():
                if entry.constant_value() != target:
                    return None
                continue
            new_params = entry.variables()
            if len(new_params) > 1 or entry.degree_in(new_params[0]) != 1:
                raise UnsupportedError(
                    f"entry ({i + 1},{j + 1}) is not triangular: {entry}"
                )
            param = new_params[0]
            a, b = entry.coeff_split(param)
            assignment[param] = (target - b.constant_value()) / a.constant_value()
    for param in template.params:
        assignment.setdefault(param, Fraction(0))
    for condition in template.nonzero:
        if condition.evaluate(assignment) == 0:
            return None
    return assignment


def template_space_equals(template: MatrixTemplate, basis) -> bool:
    """Span equality between a linear template and a list of matrices."""
    span = template.parameter_span()
    other = Subspace(
        template.dim * template.dim, [mat.vec() for mat in basis]
    )
    return span == other


# -- serialization ----------------------------------------------------------


def save_template(path: str, template: MatrixTemplate) -> None:
    payload = {
        "dim": template.dim,
        "params": list(template.params),
        "entries": [[str(e) for e in row] for row in template.entries],
        "nonzero": [str(c) for c in template.nonzero],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def load_template(path: str) -> MatrixTemplate:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    try:
        return MatrixTemplate(
            dim=int(payload["dim"]),
            params=tuple(payload["params"]),
            entries=_grid(payload["entries"]),
            nonzero=tuple(poly(c) for c in payload.get("nonzero", [])),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed template file {path}: {exc}") from exc


# -- built-in closed forms --------------------------------------------------

# Derivation algebras: D(xy) = D(x)y + xD(y); these grids are the general
# solutions of the Leibniz system for the builtin algebras.

DERIVATION_FORM_PI2 = MatrixTemplate(
    dim=5,
    params=("a11", "a21", "a31", "a34", "a41", "a51", "a54"),
    entries=_grid(
        [
            ["a11", 0, 0, 0, 0],
            ["a21", "2*a11", 0, 0, 0],
            ["a31", "2*a21", "3*a11", "a34", 0],
            ["a41", 0, 0, "a41+a11", 0],
            ["a51", "2*a41", 0, "a54", "2*a41+2*a11"],
        ]
    ),
)

DERIVATION_FORM_PI3 = MatrixTemplate(
    dim=5,
    params=("a11", "a21", "a31", "a34", "a51", "a54"),
    entries=_grid(
        [
            ["a11", 0, 0, 0, 0],
            ["a21", "2*a11", 0, 0, 0],
            ["a31", "2*a21", "3*a11", "a34", 0],
            [0, 0, 0, "a11", 0],
            ["a51", 0, 0, "a54", "2*a11"],
        ]
    ),
)

# Local derivation spaces: operators nabla such that for every x some
# derivation (depending on x) agrees with nabla at x.

LOCAL_DERIVATION_FORM_PI2 = MatrixTemplate(
    dim=5,
    params=(
        "b11", "b21", "b22", "b31", "b32", "b33", "b34", "b41", "b51",
        "b52", "b54",
    ),
    entries=_grid(
        [
            ["b11", 0, 0, 0, 0],
            ["b21", "b22", 0, 0, 0],
            ["b31", "b32", "b33", "b34", 0],
            ["b41", 0, 0, "b41+b11", 0],
            ["b51", "b52", 0, "b54", "b22+b52"],
        ]
    ),
)

LOCAL_DERIVATION_FORM_PI3 = MatrixTemplate(
    dim=5,
    params=("b11", "b21", "b31", "b32", "b34", "b51", "b54"),
    entries=_grid(
        [
            ["b11", 0, 0, 0, 0],
            ["b21", "2*b11", 0, 0, 0],
            ["b31", "b32", "3*b11", "b34", 0],
            [0, 0, 0, "b11", 0],
            ["b51", 0, 0, "b54", "2*b11"],
        ]
    ),
)

# Automorphism groups: invertible multiplicative maps.  The open
# conditions are exactly invertibility of the triangular shape.

AUTOMORPHISM_FORM_PI2 = MatrixTemplate(
    dim=5,
    params=("a11", "a21", "a31", "a34", "a41", "a51", "a54"),
    entries=_grid(
        [
            ["a11", 0, 0, 0, 0],
            ["a21", "a11^2", 0, 0, 0],
            ["a31", "2*a11*a21", "a11^3", "a34", 0],
            ["a41", 0, 0, "a11+a41", 0],
            ["a51", "2*a11*a41+a41^2", 0, "a54", "(a11+a41)^2"],
        ]
    ),
    nonzero=(poly("a11"), poly("a11+a41")),
)

AUTOMORPHISM_FORM_PI3 = MatrixTemplate(
    dim=5,
    params=("a11", "a21", "a31", "a34", "a51", "a54"),
    entries=_grid(
        [
            ["a11", 0, 0, 0, 0],
            ["a21", "a11^2", 0, 0, 0],
            ["a31", "2*a11*a21", "a11^3", "a34", 0],
            [0, 0, 0, "a11", 0],
            ["a51", 0, 0, "a54", "a11^2"],
        ]
    ),
    nonzero=(poly("a11"),),
)

# Local automorphism groups.  The pi2 pattern is the local derivation
# grid made invertible by nonvanishing conditions; the pi3 pattern has
# two sign branches in the (3,3) entry, one template per branch.

LOCAL_AUTOMORPHISM_FORM_PI2 = MatrixTemplate(
    dim=5,
    params=(
        "b11", "b21", "b22", "b31", "b32", "b33", "b34", "b41", "b51",
        "b52", "b54",
    ),
    entries=_grid(
        [
            ["b11", 0, 0, 0, 0],
            ["b21", "b22", 0, 0, 0],
            ["b31", "b32", "b33", "b34", 0],
            ["b41", 0, 0, "b41+b11", 0],
            ["b51", "b52", 0, "b54", "b22+b52"],
        ]
    ),
    nonzero=(
        poly("b11"), poly("b22"), poly("b33"),
        poly("b41+b11"), poly("b22+b52"),
    ),
)

LOCAL_AUTOMORPHISM_FORM_PI3_PLUS = MatrixTemplate(
    dim=5,
    params=("b11", "b21", "b31", "b32", "b34", "b51", "b54"),
    entries=_grid(
        [
            ["b11", 0, 0, 0, 0],
            ["b21", "b11^2", 0, 0, 0],
            ["b31", "b32", "b11^3", "b34", 0],
            [0, 0, 0, "b11", 0],
            ["b51", 0, 0, "b54", "b11^2"],
        ]
    ),
    nonzero=(poly("b11"),),
)

LOCAL_AUTOMORPHISM_FORM_PI3_MINUS = MatrixTemplate(
    dim=5,
    params=("b11", "b21", "b31", "b32", "b34", "b51", "b54"),
    entries=_grid(
        [
            ["b11", 0, 0, 0, 0],
            ["b21", "b11^2", 0, 0, 0],
            ["b31", "b32", "-1*b11^3", "b34", 0],
            [0, 0, 0, "b11", 0],
            ["b51", 0, 0, "b54", "b11^2"],
        ]
    ),
    nonzero=(poly("b11"),),
)

_BUILTIN_FORMS = {
    ("derivation", "pi2"): DERIVATION_FORM_PI2,
    ("derivation", "pi3"): DERIVATION_FORM_PI3,
    ("local_derivation", "pi2"): LOCAL_DERIVATION_FORM_PI2,
    ("local_derivation", "pi3"): LOCAL_DERIVATION_FORM_PI3,
    ("automorphism", "pi2"): AUTOMORPHISM_FORM_PI2,
    ("automorphism", "pi3"): AUTOMORPHISM_FORM_PI3,
    ("local_automorphism", "pi2"): LOCAL_AUTOMORPHISM_FORM_PI2,
    ("local_automorphism", "pi3"): LOCAL_AUTOMORPHISM_FORM_PI3_PLUS,
}


def builtin_form(kind: str, algebra_name: str) -> MatrixTemplate:
    try:
        return _BUILTIN_FORMS[(kind, algebra_name)]
    except KeyError:
        raise UnsupportedError(
            f"no builtin {kind} form for algebra {algebra_name!r}"
        ) from None
