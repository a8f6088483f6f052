"""Shape transfer from derivation templates to local-derivation shapes.

Five syntactic principles read the matrix form of derivations (entries
a_ij, polynomials in free parameters) and predict shape facts about the
matrix form of local derivations (entries b_ij):

  0) a_ij = 0 forces b_ij = 0;
  1) a_ij = a_km as polynomials (i < k, j < m) with both crosses
     a_im = a_kj = 0 forces b_ij = b_km;
  2) a_ij = a_km with one cross nonzero and fresh leaves b_ij, b_km
     generally distinct;
  3) one cross nonzero and fresh, with no equality assumed, leaves
     b_ij, b_km generally distinct;
  4) a_{i+2,i} nonzero and fresh with the chain a_{i+1,i}, a_{i+2,i+1}
     and the diagonal a_ii, a_{i+1,i+1}, a_{i+2,i+2} all nonzero leaves
     those five b-entries generally pairwise distinct.

"Fresh" is syntactic: some parameter of the entry occurs in no other
entry, so the entry can vary freely while the rest of the form is held
fixed.  "Generally distinct" is validated as *not forced equal*: the
difference functional b_ij - b_km does not vanish identically on the
computed local-derivation space.  The stronger reading (linear
independence of the two coordinate functionals) is refuted by the
builtins themselves: principle 4 fires on the diagonal window of pi3,
where every diagonal local-derivation entry is proportional to b11.
Scaled equalities such as b22 = 2 b11 are beyond principles 0-4; they
come only from the exact solver.

Positions here are 1-based (row, column), matching the entry names.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalCheckError
from .local_derivations import LocalDerivationSpace
from .templates import MatrixTemplate

Position = tuple[int, int]
Pair = tuple[Position, Position]


@dataclass(frozen=True)
class ShapePrediction:
    """Predicted shape of the local-derivation form.

    The pair universe is all unordered pairs of nonzero positions of
    the source template; equal_pairs, independent_pairs and
    undetermined partition it.  zero_set lists the forced-zero
    positions separately.
    """

    dim: int
    zero_set: tuple[Position, ...]
    equal_pairs: tuple[Pair, ...]
    independent_pairs: tuple[Pair, ...]
    undetermined: tuple[Pair, ...]

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "zero_set": [list(p) for p in self.zero_set],
            "equal_pairs": [[list(p), list(q)] for p, q in self.equal_pairs],
            "independent_pairs": [
                [list(p), list(q)] for p, q in self.independent_pairs
            ],
            "undetermined": [
                [list(p), list(q)] for p, q in self.undetermined
            ],
        }


def _ordered(p: Position, q: Position) -> Pair:
    return (p, q) if p <= q else (q, p)


def infer_shape(template: MatrixTemplate) -> ShapePrediction:
    """Apply principles 0-4 to a derivation template."""
    n = template.dim
    entries = template.entries
    occurrences: dict[str, int] = {p: 0 for p in template.params}
    for row in entries:
        for entry in row:
            for var in entry.variables():
                occurrences[var] += 1

    def fresh(i: int, j: int) -> bool:
        # 1-based: entry nonzero with a parameter private to it
        entry = entries[i - 1][j - 1]
        if entry.is_zero():
            return False
        return any(occurrences[v] == 1 for v in entry.variables())

    def nonzero(i: int, j: int) -> bool:
        return not entries[i - 1][j - 1].is_zero()

    zero_set = tuple(
        (i, j)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if not nonzero(i, j)
    )
    positions = [
        (i, j)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if nonzero(i, j)
    ]

    equal: set[Pair] = set()
    independent: set[Pair] = set()
    for i, j in positions:
        for k, m in positions:
            if not (i < k and j < m):
                continue
            same = entries[i - 1][j - 1] == entries[k - 1][m - 1]
            cross_fresh = fresh(i, m) or fresh(k, j)
            crosses_zero = not nonzero(i, m) and not nonzero(k, j)
            if same and crosses_zero:
                equal.add(((i, j), (k, m)))
            if cross_fresh:
                # principle 2 when same, principle 3 regardless
                independent.add(((i, j), (k, m)))
    for i in range(1, n - 1):
        window = ((i + 1, i), (i + 2, i + 1), (i, i), (i + 1, i + 1),
                  (i + 2, i + 2))
        if not fresh(i + 2, i):
            continue
        if not all(nonzero(r, c) for r, c in window):
            continue
        for a in range(len(window)):
            for b in range(a + 1, len(window)):
                independent.add(_ordered(window[a], window[b]))

    clash = equal & independent
    if clash:
        raise InternalCheckError(
            f"principles force {sorted(clash)} both equal and distinct"
        )
    universe = {
        _ordered(positions[a], positions[b])
        for a in range(len(positions))
        for b in range(a + 1, len(positions))
    }
    undetermined = universe - equal - independent
    return ShapePrediction(
        dim=n,
        zero_set=zero_set,
        equal_pairs=tuple(sorted(equal)),
        independent_pairs=tuple(sorted(independent)),
        undetermined=tuple(sorted(undetermined)),
    )


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...]


def validate_prediction(
    prediction: ShapePrediction, space: LocalDerivationSpace
) -> ValidationReport:
    """Check a prediction against a computed local-derivation space.

    zero_set entries must vanish on every basis operator; equal pairs
    must agree on every basis operator; independent pairs must not be
    forced equal (some basis operator separates them).
    """
    if prediction.dim != space.algebra.dim:
        return ValidationReport(
            ok=False,
            violations=(
                f"prediction dimension {prediction.dim} does not match "
                f"the space dimension {space.algebra.dim}",
            ),
        )
    ops = space.basis
    violations: list[str] = []
    for i, j in prediction.zero_set:
        if any(op.rows[i - 1][j - 1] != 0 for op in ops):
            violations.append(f"b{i}{j} is not forced zero on the space")
    for (i, j), (k, m) in prediction.equal_pairs:
        if any(
            op.rows[i - 1][j - 1] != op.rows[k - 1][m - 1] for op in ops
        ):
            violations.append(
                f"b{i}{j} = b{k}{m} fails on the computed space"
            )
    for (i, j), (k, m) in prediction.independent_pairs:
        if all(
            op.rows[i - 1][j - 1] == op.rows[k - 1][m - 1] for op in ops
        ):
            violations.append(
                f"b{i}{j} and b{k}{m} are forced equal on the space"
            )
    return ValidationReport(ok=not violations, violations=tuple(violations))
