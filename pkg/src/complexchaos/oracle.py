"""Exact expectation engine for polynomials in independent standard complex
Gaussian coordinates.

The moment rule is the whole module: for z_1..z_n iid with independent real
and imaginary parts of variance 1/2,

    E[ prod_k z_k**a_k conj(z_k)**b_k ] = prod_k [a_k == b_k] * a_k!

Everything else is linear extension with error-tracked accumulation, plus a
numerical quadrature cross-check that keeps the rule honest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

if TYPE_CHECKING:  # pragma: no cover
    from .chaos import ChaosPolynomial

__all__ = [
    "MomentQuery",
    "expectation",
    "monomial_expectation",
    "pair_expectation",
    "quadrature_monomial_expectation",
]

# Exact integer factorials; the arbiter must not round.
_FACTORIALS: tuple[int, ...] = tuple(math.factorial(k) for k in range(129))


@dataclass(frozen=True)
class MomentQuery:
    """Exponent vectors (a_1..a_n for the z's, b_1..b_n for the conjugates)."""

    z_powers: tuple[int, ...]
    conj_powers: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.z_powers) != len(self.conj_powers):
            raise ValueError("exponent vectors must have equal length")


def _monomial_expectation(a: Sequence[int], b: Sequence[int]) -> int:
    value = 1
    for ak, bk in zip(a, b):
        if ak != bk:
            return 0
        value *= _FACTORIALS[ak]
    return value


def monomial_expectation(query: MomentQuery) -> int:
    return _monomial_expectation(query.z_powers, query.conj_powers)


def expectation(poly: "ChaosPolynomial") -> complex:
    """Linear extension of the monomial rule, fsum-accumulated."""
    re: list[float] = []
    im: list[float] = []
    for (a, b), coeff in poly.terms.items():
        weight = _monomial_expectation(a, b)
        if weight:
            re.append(coeff.real * weight)
            im.append(coeff.imag * weight)
    return complex(math.fsum(re), math.fsum(im))


def pair_expectation(left: "ChaosPolynomial", right: "ChaosPolynomial") -> complex:
    """E[left * right] without materializing the product.

    A pair of monomials contributes only when the z-exponent surplus of one
    cancels the other (a1 - b1 == b2 - a2 componentwise), so the right terms
    are bucketed by that surplus and each left term visits one bucket.
    """
    if left.n != right.n:
        raise ValueError("variable count mismatch")
    buckets: dict[tuple[int, ...], list[tuple[tuple[int, ...], complex]]] = {}
    for (a, b), coeff in right.terms.items():
        key = tuple(x - y for x, y in zip(a, b))
        buckets.setdefault(key, []).append((a, coeff))
    re: list[float] = []
    im: list[float] = []
    for (a, b), coeff in left.terms.items():
        key = tuple(y - x for x, y in zip(a, b))
        for a2, coeff2 in buckets.get(key, ()):
            weight = 1
            for ak, a2k in zip(a, a2):
                weight *= _FACTORIALS[ak + a2k]
            value = coeff * coeff2
            re.append(value.real * weight)
            im.append(value.imag * weight)
    return complex(math.fsum(re), math.fsum(im))


def quadrature_monomial_expectation(a: int, b: int, points: int = 48) -> complex:
    """Brute 2-D Gauss-Hermite quadrature of z**a conj(z)**b against the
    standard complex Gaussian density, for cross-checking the moment rule."""
    nodes, weights = np.polynomial.hermite.hermgauss(points)
    x = nodes[:, None]
    y = nodes[None, :]
    w = weights[:, None] * weights[None, :]
    z = x + 1j * y
    values = w * z**a * np.conj(z) ** b
    return complex(values.sum() / math.pi)
