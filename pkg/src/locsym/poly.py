"""Sparse multivariate polynomials over exact rationals.

This is the symbolic substrate for matrix templates (entries such as
``2*a11*a21`` or ``(a11+a41)^2``) and for the parametric elimination
engine, which cross-multiplies equation coefficients and therefore needs
exact polynomial arithmetic, substitution, grouping by monomials in a
chosen variable block, and extraction of linear factors from pivot
coefficients.

A polynomial is a mapping from monomials to nonzero Fraction
coefficients.  A monomial is a tuple of (variable, exponent) pairs
sorted by variable name with all exponents >= 1; the empty tuple is the
constant monomial.  Instances are immutable and hashable.

The string syntax accepted by :func:`poly` is sums of products of
rational literals, named variables and parenthesized subexpressions,
with ``^`` for small integer powers, e.g. ``"2*a11*a41 + a41^2"``.
``str`` of a polynomial parses back to an equal polynomial.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction

from .errors import StratificationError

Monomial = tuple[tuple[str, int], ...]

_ONE: Monomial = ()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    merged: dict[str, int] = dict(a)
    for var, exp in b:
        merged[var] = merged.get(var, 0) + exp
    return tuple(sorted(merged.items()))


def _mono_degree(m: Monomial) -> int:
    return sum(exp for _, exp in m)


def _mono_key(m: Monomial, var_order: tuple[str, ...]):
    # Graded lexicographic key relative to a fixed variable ordering.
    return (_mono_degree(m), tuple(dict(m).get(v, 0) for v in var_order))


class Poly:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: dict[Monomial, Fraction] | None = None):
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = Fraction(coeff)
                if coeff != 0:
                    clean[mono] = coeff
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *_):
        raise AttributeError("Poly is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero() -> "Poly":
        return _ZERO

    @staticmethod
    def const(value) -> "Poly":
        return Poly({_ONE: Fraction(value)})

    @staticmethod
    def var(name: str) -> "Poly":
        return Poly({((name, 1),): Fraction(1)})

    # -- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == _ONE for m in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a constant: {self}")
        return self.terms.get(_ONE, Fraction(0))

    def variables(self) -> tuple[str, ...]:
        seen = set()
        for mono in self.terms:
            for var, _ in mono:
                seen.add(var)
        return tuple(sorted(seen))

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(_mono_degree(m) for m in self.terms)

    def degree_in(self, var: str) -> int:
        best = 0
        for mono in self.terms:
            best = max(best, dict(mono).get(var, 0))
        return best

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other) -> "Poly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            terms[mono] = terms.get(mono, Fraction(0)) + coeff
        return Poly(terms)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other) -> "Poly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = _mono_mul(m1, m2)
                terms[mono] = terms.get(mono, Fraction(0)) + c1 * c2
        return Poly(terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Poly":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = Poly.const(1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(
                self, "_hash", hash(frozenset(self.terms.items()))
            )
        return self._hash

    # -- evaluation and substitution -----------------------------------

    def evaluate(self, assignment) -> Fraction:
        """Exact evaluation; every variable must be assigned."""
        total = Fraction(0)
        for mono, coeff in self.terms.items():
            value = coeff
            for var, exp in mono:
                value *= Fraction(assignment[var]) ** exp
            total += value
        return total

    def evaluate_numeric(self, assignment) -> complex:
        """Float/complex evaluation for numeric verification paths."""
        total = 0j
        for mono, coeff in self.terms.items():
            value = complex(coeff)
            for var, exp in mono:
                value *= complex(assignment[var]) ** exp
            total += value
        return total

    def subs(self, mapping) -> "Poly":
        """Substitute variables by polynomials (or scalars)."""
        replace = {v: _coerce(p) for v, p in mapping.items()}
        result = Poly.zero()
        for mono, coeff in self.terms.items():
            term = Poly.const(coeff)
            for var, exp in mono:
                factor = replace.get(var, Poly.var(var))
                term = term * factor**exp
            result = result + term
        return result

    def diff(self, var: str) -> "Poly":
        terms: dict[Monomial, Fraction] = {}
        for mono, coeff in self.terms.items():
            exps = dict(mono)
            exp = exps.get(var, 0)
            if exp == 0:
                continue
            exps[var] = exp - 1
            new = tuple(sorted((v, e) for v, e in exps.items() if e > 0))
            terms[new] = terms.get(new, Fraction(0)) + coeff * exp
        return Poly(terms)

    # -- structure helpers ---------------------------------------------

    def linear_decompose(self, unknowns) -> tuple[dict[str, "Poly"], "Poly"]:
        """Write self as sum(u * coeff_u) + rest over the given unknowns.

        Raises ValueError if any unknown occurs with degree >= 2 or two
        unknowns share a monomial; rest is the unknown-free part.
        """
        unknowns = tuple(unknowns)
        uset = set(unknowns)
        coeffs: dict[str, dict[Monomial, Fraction]] = {u: {} for u in unknowns}
        rest: dict[Monomial, Fraction] = {}
        for mono, coeff in self.terms.items():
            present = [(v, e) for v, e in mono if v in uset]
            if not present:
                rest[mono] = coeff
                continue
            if len(present) > 1 or present[0][1] > 1:
                raise ValueError(f"not linear in {unknowns}: {self}")
            u = present[0][0]
            reduced = tuple((v, e) for v, e in mono if v != u)
            coeffs[u][reduced] = coeff
        return {u: Poly(t) for u, t in coeffs.items()}, Poly(rest)

    def coeff_split(self, var: str) -> tuple["Poly", "Poly"]:
        """For degree_in(var) == 1 write self = A*var + B with A, B var-free."""
        if self.degree_in(var) != 1:
            raise ValueError(f"{self} is not linear in {var}")
        a: dict[Monomial, Fraction] = {}
        b: dict[Monomial, Fraction] = {}
        for mono, coeff in self.terms.items():
            exps = dict(mono)
            if exps.get(var, 0):
                reduced = tuple((v, e) for v, e in mono if v != var)
                a[reduced] = coeff
            else:
                b[mono] = coeff
        return Poly(a), Poly(b)

    def group_by(self, variables) -> dict[Monomial, "Poly"]:
        """Group terms by their monomial part in the given variables.

        Returns {monomial-in-variables: polynomial in the remaining
        variables}; used to read off per-monomial coefficients when an
        expression must vanish identically.
        """
        chosen = set(variables)
        groups: dict[Monomial, dict[Monomial, Fraction]] = {}
        for mono, coeff in self.terms.items():
            key = tuple((v, e) for v, e in mono if v in chosen)
            other = tuple((v, e) for v, e in mono if v not in chosen)
            groups.setdefault(key, {})[other] = coeff
        return {key: Poly(t) for key, t in groups.items()}

    def content_primitive(self) -> tuple[Fraction, "Poly"]:
        """Split into content * primitive with integer coprime coefficients.

        The primitive part's leading coefficient (graded lex over its own
        sorted variables) is positive, making it a canonical representative
        of the polynomial up to nonzero rational scaling.
        """
        if self.is_zero():
            return Fraction(0), self
        nums = [c.numerator for c in self.terms.values()]
        dens = [c.denominator for c in self.terms.values()]
        content = Fraction(math.gcd(*nums), math.lcm(*dens))
        order = self.variables()
        lead = max(self.terms, key=lambda m: _mono_key(m, order))
        if self.terms[lead] < 0:
            content = -content
        return content, Poly({m: c / content for m, c in self.terms.items()})

    # -- division and factor extraction ---------------------------------

    def div_exact(self, divisor: "Poly") -> "Poly | None":
        """Exact multivariate division; None when the remainder is nonzero."""
        divisor = _coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if divisor.is_constant():
            inv = 1 / divisor.constant_value()
            return Poly({m: c * inv for m, c in self.terms.items()})
        order = tuple(sorted(set(self.variables()) | set(divisor.variables())))
        dlead = max(divisor.terms, key=lambda m: _mono_key(m, order))
        dcoeff = divisor.terms[dlead]
        dexps = dict(dlead)
        quotient: dict[Monomial, Fraction] = {}
        remainder = self
        while not remainder.is_zero():
            rlead = max(remainder.terms, key=lambda m: _mono_key(m, order))
            rexps = dict(rlead)
            qexps = {}
            for var, exp in dexps.items():
                have = rexps.get(var, 0)
                if have < exp:
                    return None
                qexps[var] = have - exp
            for var, exp in rexps.items():
                if var not in dexps:
                    qexps[var] = exp
            qmono = tuple(sorted((v, e) for v, e in qexps.items() if e > 0))
            qcoeff = remainder.terms[rlead] / dcoeff
            quotient[qmono] = quotient.get(qmono, Fraction(0)) + qcoeff
            remainder = remainder - Poly({qmono: qcoeff}) * divisor
        return Poly(quotient)

    def sqrt_exact(self) -> "Poly | None":
        """Return s with s*s == self, or None if self is not a square."""
        if self.is_zero():
            return Poly.zero()
        order = self.variables()
        lead = max(self.terms, key=lambda m: _mono_key(m, order))
        lc = self.terms[lead]
        root_c = _fraction_sqrt(lc)
        if root_c is None or any(e % 2 for _, e in lead):
            return None
        root_mono = tuple((v, e // 2) for v, e in lead)
        s = Poly({root_mono: root_c})
        # Newton-style term recovery: peel the leading term of the defect.
        for _ in range(2 * len(self.terms) ** 2 + 4):
            defect = self - s * s
            if defect.is_zero():
                return s
            dlead = max(defect.terms, key=lambda m: _mono_key(m, order))
            # candidate = defect_lead / (2 * s_lead)
            cand = Poly({dlead: defect.terms[dlead]}).div_exact(
                Poly({root_mono: 2 * root_c})
            )
            if cand is None or cand.is_zero():
                return None
            s = s + cand
        return None

    # -- formatting -----------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        order = self.variables()
        monos = sorted(self.terms, key=lambda m: _mono_key(m, order), reverse=True)
        pieces = []
        for mono in monos:
            coeff = self.terms[mono]
            body = "*".join(
                var if exp == 1 else f"{var}^{exp}" for var, exp in mono
            )
            mag = abs(coeff)
            if not body:
                text = _frac_str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{_frac_str(mag)}*{body}"
            if not pieces:
                pieces.append(text if coeff > 0 else f"-{text}")
            else:
                pieces.append(f"+ {text}" if coeff > 0 else f"- {text}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"poly({str(self)!r})"


_ZERO = Poly({})


def _coerce(value) -> Poly:
    if isinstance(value, Poly):
        return value
    if isinstance(value, (int, Fraction)):
        return Poly.const(value)
    return NotImplemented


def _frac_str(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _fraction_sqrt(f: Fraction) -> Fraction | None:
    if f < 0:
        return None
    num, den = f.numerator, f.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn != num or rd * rd != den:
        return None
    return Fraction(rn, rd)


# -- parsing -------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()]))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match or match.end() == pos:
            raise ValueError(f"bad polynomial syntax at {text[pos:]!r}")
        if match.lastgroup == "num":
            tokens.append(("num", Fraction(match.group("num"))))
        elif match.lastgroup == "name":
            tokens.append(("name", match.group("name")))
        else:
            tokens.append(("op", match.group("op")))
        pos = match.end()
    tokens.append(("end", None))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expr(self) -> Poly:
        sign = 1
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            if self.take()[1] == "-":
                sign = -sign
        result = self.term() * sign
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            term = self.term()
            result = result + term if op == "+" else result - term
        return result

    def term(self) -> Poly:
        result = self.factor()
        while self.peek() == ("op", "*"):
            self.take()
            result = result * self.factor()
        return result

    def factor(self) -> Poly:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, value = self.take()
            if kind != "num" or value.denominator != 1:
                raise ValueError("exponent must be a nonnegative integer")
            base = base ** int(value)
        return base

    def atom(self) -> Poly:
        kind, value = self.take()
        if kind == "num":
            return Poly.const(value)
        if kind == "name":
            return Poly.var(value)
        if (kind, value) == ("op", "("):
            inner = self.expr()
            if self.take() != ("op", ")"):
                raise ValueError("unbalanced parenthesis")
            return inner
        if (kind, value) == ("op", "-"):
            return -self.factor()
        raise ValueError(f"unexpected token {value!r}")


def poly(text) -> Poly:
    """Parse a polynomial from its string form (idempotent on Poly)."""
    if isinstance(text, Poly):
        return text
    if isinstance(text, (int, Fraction)):
        return Poly.const(text)
    parser = _Parser(_tokenize(str(text)))
    result = parser.expr()
    if parser.peek()[0] != "end":
        raise ValueError(f"trailing input in polynomial: {text!r}")
    return result


# -- linear factor extraction --------------------------------------------


def linear_factors(p: Poly) -> tuple[Fraction, list[Poly]]:
    """Factor p into content * product of primitive polynomials of degree 1.

    Degree-1 factors are what the stratification engine can branch on: a
    vanishing branch solves the factor for one of its variables.  Single
    variables, products of linear forms and perfect squares of linear
    forms are recognized; anything else raises StratificationError.
    """
    if p.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    factors: list[Poly] = []
    # Pull out single-variable monomial content first.
    for var in p.variables():
        shift = min(dict(m).get(var, 0) for m in p.terms)
        for _ in range(shift):
            quotient = p.div_exact(Poly.var(var))
            assert quotient is not None
            factors.append(Poly.var(var))
            p = quotient
    content, p = p.content_primitive()
    while p.total_degree() > 1:
        step = _peel_linear(p)
        if step is None:
            raise StratificationError(
                f"pivot does not split into degree-1 factors: {p}", offending=p
            )
        factor, p = step
        extra, factor = factor.content_primitive()
        factors.append(factor)
        content *= extra
    if p.total_degree() == 1:
        extra, prim = p.content_primitive()
        factors.append(prim)
        content *= extra
    else:
        content *= p.constant_value()
    return content, factors


def _peel_linear(p: Poly) -> tuple[Poly, Poly] | None:
    """Split p = factor * cofactor with factor of total degree 1."""
    for var in p.variables():
        if p.degree_in(var) == 1:
            a, b = p.coeff_split(var)
            quotient = b.div_exact(a)
            if quotient is None:
                continue
            factor = Poly.var(var) + quotient
            if factor.total_degree() == 1:
                return factor, a
    # Quadratic in some variable: try completing the square or the
    # rational-root split via a square discriminant.
    for var in p.variables():
        if p.degree_in(var) != 2:
            continue
        a = Poly.zero()
        b = Poly.zero()
        c = Poly.zero()
        for mono, coeff in p.terms.items():
            exps = dict(mono)
            exp = exps.get(var, 0)
            rest = tuple((v, e) for v, e in mono if v != var)
            piece = Poly({rest: coeff})
            if exp == 2:
                a = a + piece
            elif exp == 1:
                b = b + piece
            else:
                c = c + piece
        disc = b * b - 4 * a * c
        root = disc.sqrt_exact()
        if root is None:
            continue
        # p = a * (var + (b - root)/(2a)) * (var + (b + root)/(2a))
        for offset in (b - root, b + root):
            half = offset.div_exact(2 * a)
            if half is None or (Poly.var(var) + half).total_degree() != 1:
                break
            factor = Poly.var(var) + half
            cofactor = p.div_exact(factor)
            if cofactor is None:
                break
            return factor, cofactor
    return None
