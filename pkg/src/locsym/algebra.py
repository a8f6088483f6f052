"""Finite-dimensional algebras presented by rational structure constants.

An algebra is a basis e_1..e_n together with the products
e_i * e_j = sum_k c_ijk e_k, stored sparsely.  Two five-dimensional
nilpotent associative algebras are built in:

  pi2:  e1*e1 = e2,  e1*e2 = e2*e1 = e3,  e1*e4 = e4*e1 = e5,  e4*e4 = e5
  pi3:  e1*e1 = e2,  e1*e2 = e2*e1 = e3,  e1*e4 = e5,          e4*e4 = e5

Both have descending power filtration of dimensions (5, 3, 1, 0),
nilpotency index 4, and characteristic sequence (3, 2), where the
characteristic sequence is the lexicographically maximal tuple of Jordan
block sizes of a left multiplication operator L_x over x outside the
square of the algebra.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import InputError
from .linalg import Matrix, Subspace, Vector, rank, vector
from .rationals import format_rational, parse_rational, random_vector

BUILTIN_TABLES = {
    "pi2": [
        (1, 1, 2, 1),
        (1, 2, 3, 1),
        (2, 1, 3, 1),
        (1, 4, 5, 1),
        (4, 1, 5, 1),
        (4, 4, 5, 1),
    ],
    "pi3": [
        (1, 1, 2, 1),
        (1, 2, 3, 1),
        (2, 1, 3, 1),
        (1, 4, 5, 1),
        (4, 4, 5, 1),
    ],
}


@dataclass(frozen=True)
class Algebra:
    """Structure-constant algebra over the rationals."""

    name: str
    dim: int
    table: Mapping[tuple[int, int], Vector]

    def product_of_basis(self, i: int, j: int) -> Vector:
        zero = tuple(Fraction(0) for _ in range(self.dim))
        return self.table.get((i, j), zero)

    def multiply(self, x, y) -> Vector:
        """Bilinear extension of the basis products."""
        x, y = vector(x), vector(y)
        if len(x) != self.dim or len(y) != self.dim:
            raise InputError("vector length does not match algebra dimension")
        out = [Fraction(0)] * self.dim
        for (i, j), coeffs in self.table.items():
            scale = x[i] * y[j]
            if scale:
                for k, c in enumerate(coeffs):
                    if c:
                        out[k] += scale * c
        return tuple(out)


def _freeze_table(dim, raw) -> Mapping[tuple[int, int], Vector]:
    table = {}
    for i, j, k, c in raw:
        if not (1 <= i <= dim and 1 <= j <= dim and 1 <= k <= dim):
            raise InputError(f"structure constant index out of range: {(i, j, k)}")
        key = (i - 1, j - 1)
        row = list(table.get(key, [Fraction(0)] * dim))
        row[k - 1] += Fraction(c)
        table[key] = row
    return {k: tuple(v) for k, v in table.items() if any(v)}


def builtin(name: str) -> Algebra:
    if name not in BUILTIN_TABLES:
        raise InputError(f"unknown builtin algebra {name!r}")
    return Algebra(name=name, dim=5, table=_freeze_table(5, BUILTIN_TABLES[name]))


def zero_algebra(dim: int) -> Algebra:
    """All products vanish; useful as a degenerate reference point."""
    return Algebra(name=f"zero{dim}", dim=dim, table={})


def load_algebra(path: str) -> Algebra:
    with open(path, encoding="utf-8") as fh:
        payload = json.load(fh)
    try:
        name = str(payload["name"])
        dim = int(payload["dim"])
        products = payload["products"]
        raw = [
            (int(p["i"]), int(p["j"]), int(p["k"]), parse_rational(p["c"]))
            for p in products
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed algebra file {path}: {exc}") from exc
    if dim < 1:
        raise InputError("algebra dimension must be positive")
    return Algebra(name=name, dim=dim, table=_freeze_table(dim, raw))


def save_algebra(path: str, algebra: Algebra) -> None:
    products = []
    for (i, j), coeffs in sorted(algebra.table.items()):
        for k, c in enumerate(coeffs):
            if c:
                products.append(
                    {"i": i + 1, "j": j + 1, "k": k + 1, "c": format_rational(c)}
                )
    payload = {"name": algebra.name, "dim": algebra.dim, "products": products}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def get_algebra(spec: str) -> Algebra:
    """Resolve a builtin name or a path to an algebra file."""
    if spec in BUILTIN_TABLES:
        return builtin(spec)
    return load_algebra(spec)


def is_associative(algebra: Algebra) -> bool:
    """Brute-force (e_i e_j) e_k == e_i (e_j e_k) over all basis triples."""
    n = algebra.dim
    base = [tuple(Fraction(1 if t == s else 0) for t in range(n)) for s in range(n)]
    for i in range(n):
        for j in range(n):
            left = algebra.product_of_basis(i, j)
            for k in range(n):
                lhs = algebra.multiply(left, base[k])
                rhs = algebra.multiply(base[i], algebra.product_of_basis(j, k))
                if lhs != rhs:
                    return False
    return True


@dataclass(frozen=True)
class PowerFiltration:
    """Descending chain A^1 >= A^2 >= ... with A^{i+1} = sum A^k A^{i+1-k}."""

    subspaces: tuple[Subspace, ...]
    dims: tuple[int, ...]
    nilpotent: bool
    nilindex: int | None


def power_filtration(algebra: Algebra) -> PowerFiltration:
    n = algebra.dim
    chain = [Subspace(n, [tuple(Fraction(1 if t == s else 0) for t in range(n))
                          for s in range(n)])]
    while True:
        i = len(chain)  # building A^{i+1}, 1-based exponents
        products = []
        for k in range(1, i + 1):
            left = chain[k - 1]
            right = chain[i - k]
            for x in left.basis:
                for y in right.basis:
                    products.append(algebra.multiply(x, y))
        nxt = Subspace(n, products)
        chain.append(nxt)
        if nxt.dim == 0:
            # chain[k] is A^{k+1}; the nilpotency index is the first
            # 1-based power that vanishes.
            return PowerFiltration(
                subspaces=tuple(chain),
                dims=tuple(s.dim for s in chain),
                nilpotent=True,
                nilindex=len(chain),
            )
        if nxt.dim == chain[-2].dim or len(chain) > 2 * n + 1:
            # The chain stabilized at a nonzero term: not nilpotent.
            return PowerFiltration(
                subspaces=tuple(chain),
                dims=tuple(s.dim for s in chain),
                nilpotent=False,
                nilindex=None,
            )


def left_mult_operator(algebra: Algebra, x) -> Matrix:
    """Matrix of y -> x*y in the defining basis (columns are x*e_j)."""
    x = vector(x)
    n = algebra.dim
    cols = []
    for j in range(n):
        e_j = tuple(Fraction(1 if t == j else 0) for t in range(n))
        cols.append(algebra.multiply(x, e_j))
    return Matrix(cols).transpose()


def _jordan_sizes(op: Matrix) -> tuple[int, ...] | None:
    """Jordan block sizes of a nilpotent operator from ranks of its powers."""
    n = op.shape[0]
    ranks = [n]
    power = Matrix.identity(n)
    for _ in range(n):
        power = power * op
        ranks.append(rank(power))
        if ranks[-1] == 0:
            break
    if ranks[-1] != 0:
        return None
    # ranks[k-1] - ranks[k] counts blocks of size >= k.
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    at_least.append(0)
    sizes = []
    for k in range(1, len(at_least)):
        sizes.extend([k] * (at_least[k - 1] - at_least[k]))
    return tuple(sorted(sizes, reverse=True))


def characteristic_sequence(
    algebra: Algebra, trials: int = 200, seed: int = 0
) -> tuple[int, ...]:
    """Lexicographically maximal Jordan shape of L_x over x outside A^2.

    Candidates are the basis vectors not in A^2 plus `trials` random
    rational vectors; the result is exact for each candidate but only a
    lower bound for the algebra, since the maximum is over a sample.
    """
    if trials < 1:
        raise InputError("trials must be at least 1")
    filtration = power_filtration(algebra)
    if not filtration.nilpotent:
        raise InputError("characteristic sequence requires a nilpotent algebra")
    square = filtration.subspaces[1]
    n = algebra.dim
    candidates = []
    for i in range(n):
        e_i = tuple(Fraction(1 if t == i else 0) for t in range(n))
        if not square.contains(e_i):
            candidates.append(e_i)
    rng = random.Random(seed)
    for _ in range(trials):
        x = random_vector(rng, n)
        if not square.contains(x):
            candidates.append(x)
    best: tuple[int, ...] | None = None
    for x in candidates:
        sizes = _jordan_sizes(left_mult_operator(algebra, x))
        if sizes is None:
            raise InputError("left multiplication is not nilpotent")
        if best is None or sizes > best:
            best = sizes
    if best is None:
        raise InputError("algebra equals its own square; no candidates")
    return best


def multiplicativity_residual(algebra: Algebra, phi) -> float:
    """Max float deviation of phi from being multiplicative on basis pairs.

    phi is a numeric matrix given as a nested sequence of complex/float
    entries; used by the exponential bridge to test images of exp.
    """
    n = algebra.dim
    rows = [[complex(v) for v in row] for row in phi]
    cols = list(zip(*rows))
    worst = 0.0
    for i in range(n):
        for j in range(n):
            prod = algebra.product_of_basis(i, j)
            image_of_product = [
                sum(rows[r][k] * complex(prod[k]) for k in range(n))
                for r in range(n)
            ]
            lhs = _numeric_multiply(algebra, cols[i], cols[j])
            worst = max(
                worst,
                max(abs(a - b) for a, b in zip(lhs, image_of_product)),
            )
    return worst


def _numeric_multiply(algebra: Algebra, x, y):
    out = [0j] * algebra.dim
    for (i, j), coeffs in algebra.table.items():
        scale = x[i] * y[j]
        if scale:
            for k, c in enumerate(coeffs):
                if c:
                    out[k] += scale * complex(c)
    return out
