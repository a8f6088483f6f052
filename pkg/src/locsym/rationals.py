"""Exact rational scalars: parsing, formatting and seeded sampling.

All exact arithmetic in the package runs over fractions.Fraction.
Serialized rationals are "p" or "p/q" strings so that round trips are
lossless.  Random rationals follow one convention everywhere: numerator
and denominator drawn uniformly from [-10**6, 10**6] with zero excluded
(denominator sign is folded into the numerator by Fraction itself).
"""
from __future__ import annotations

import random
from fractions import Fraction

SAMPLE_BOUND = 10**6


def parse_rational(text: str | int) -> Fraction:
    """Parse "p" or "p/q" (both signs allowed) into a Fraction."""
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def random_nonzero_int(rng: random.Random, bound: int = SAMPLE_BOUND) -> int:
    n = 0
    while n == 0:
        n = rng.randint(-bound, bound)
    return n


def random_rational(rng: random.Random, bound: int = SAMPLE_BOUND) -> Fraction:
    """Uniform numerator/denominator sampling; never returns zero."""
    return Fraction(random_nonzero_int(rng, bound), random_nonzero_int(rng, bound))


def random_vector(rng: random.Random, dim: int, support=None) -> tuple[Fraction, ...]:
    """Random rational vector; nonzero exactly on the given support.

    support is an iterable of 0-based coordinate indices; None means all
    coordinates.
    """
    if support is None:
        support = range(dim)
    chosen = set(support)
    return tuple(
        random_rational(rng) if i in chosen else Fraction(0) for i in range(dim)
    )
