"""Invariant theory of finite rational matrix groups.

Molien series, reflection generation and invariant degrees.  Over a field
of characteristic zero the invariant ring is polynomial exactly when the
group is generated by reflections; :func:`invariant_ring_polynomial`
computes both sides and insists they agree.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exactmat import ExactPoly, det_one_minus_t
from .fingroup import FinGroup, subgroup_generated
from .weyl import reflections_of

DEFAULT_PREFIX = 64


class DegreeExtractionFailed(ArithmeticError):
    pass


class InternalInconsistency(AssertionError):
    pass


@dataclass(frozen=True)
class MolienSeries:
    numerator: ExactPoly
    denominator: ExactPoly
    prefix: tuple[Fraction, ...] = field(repr=False)

    def equals(self, other: "MolienSeries") -> bool:
        return self.numerator * other.denominator == other.numerator * self.denominator

    def coefficients(self, n: int) -> list[Fraction]:
        return self.numerator.series(self.denominator, n)

    def to_json(self) -> dict:
        return {
            "numerator": self.numerator.to_json(),
            "denominator": self.denominator.to_json(),
            "prefix": [str(c) for c in self.prefix],
        }


@dataclass(frozen=True)
class DegreeVector:
    degrees: tuple[int, ...]

    def product(self) -> int:
        out = 1
        for d in self.degrees:
            out *= d
        return out


def _batch_det_one_minus_t(G: FinGroup) -> list[tuple[int, ...]]:
    """Integer coefficients of det(I - t g) for every element, vectorized."""
    n = G.dimension
    A = G.data.astype(np.int64)
    ident = np.eye(n, dtype=np.int64)
    coeffs = [np.ones(G.order, dtype=np.int64)]
    M = np.zeros_like(A)
    for k in range(1, n + 1):
        M = np.matmul(A, M) + coeffs[-1][:, None, None] * ident
        tr = np.trace(np.matmul(A, M), axis1=1, axis2=2)
        if np.any(tr % k):
            raise ArithmeticError("non-integral characteristic coefficient")
        coeffs.append(-(tr // k))
    return [tuple(int(c) for c in row) for row in np.stack(coeffs, axis=1)]


def det_polys(G: FinGroup) -> Counter:
    """Multiset of det(I - t g) over the group, keyed by polynomial."""
    if G.scale == 1 and G.data.dtype != object and int(np.abs(G.data).max()) < 2**8:
        return Counter(ExactPoly(c) for c in _batch_det_one_minus_t(G))
    return Counter(det_one_minus_t(G.matrix(i)) for i in range(G.order))


def molien(G: FinGroup, prefix_len: int = DEFAULT_PREFIX) -> MolienSeries:
    """(1/|G|) sum_g 1/det(I - t g), as a reduced rational function."""
    counts = det_polys(G)
    polys = sorted(counts, key=lambda p: p.coeffs)
    den = ExactPoly.one()
    for p in polys:
        den = den.lcm(p)
    num = ExactPoly()
    for p in polys:
        num = num + den.exact_div(p) * counts[p]
    num = num * Fraction(1, G.order)
    g = num.gcd(den)
    num, den = num.exact_div(g), den.exact_div(g)
    c0 = den[0]
    num, den = num * (1 / c0), den * (1 / c0)
    prefix = tuple(num.series(den, prefix_len))
    return MolienSeries(num, den, prefix)


def is_reflection_generated(G: FinGroup) -> bool:
    refl = reflections_of(G)
    return subgroup_generated(G, refl).order == G.order


def _extract_degrees(series: MolienSeries, rank: int) -> list[int] | None:
    coeffs = list(series.prefix)
    degrees: list[int] = []
    while len(degrees) < rank:
        d = next((k for k in range(1, len(coeffs)) if coeffs[k] != 0), None)
        if d is None or coeffs[d] < 0:
            return None
        degrees.append(d)
        # multiply by (1 - t^d)
        coeffs = [c - (coeffs[k - d] if k >= d else 0) for k, c in enumerate(coeffs)]
    return degrees


def _matches_product(series: MolienSeries, degrees: list[int]) -> bool:
    prod = ExactPoly.one()
    for d in degrees:
        prod = prod * (ExactPoly.one() - ExactPoly.monomial(d))
    # series == 1 / prod  <=>  numerator * prod == denominator
    return series.numerator * prod == series.denominator


def invariant_degrees(G: FinGroup, prefix_len: int = DEFAULT_PREFIX) -> DegreeVector | None:
    """Degrees of the basic invariants, or None when the invariant ring is not polynomial."""
    if not is_reflection_generated(G):
        return None
    degrees = _degrees_from_series(G, prefix_len)
    if degrees is None:
        raise DegreeExtractionFailed(f"Molien series of {G!r} did not factor")
    return DegreeVector(tuple(degrees))


def _degrees_from_series(G: FinGroup, prefix_len: int) -> list[int] | None:
    series = molien(G, prefix_len)
    degrees = _extract_degrees(series, G.dimension)
    if degrees is None or not _matches_product(series, degrees):
        return None
    prod = 1
    for d in degrees:
        prod *= d
    if prod != G.order or sum(d - 1 for d in degrees) != len(reflections_of(G)):
        return None
    return degrees


def invariant_ring_polynomial(G: FinGroup, prefix_len: int = DEFAULT_PREFIX) -> bool:
    by_reflections = is_reflection_generated(G)
    by_series = _degrees_from_series(G, prefix_len) is not None
    if by_reflections != by_series:
        raise InternalInconsistency(
            f"{G!r}: reflection-generated={by_reflections} but Molien factorization={by_series}"
        )
    return by_reflections
