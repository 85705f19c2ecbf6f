"""Exact finite group computations deciding when classifying spaces are p-compact."""

from .exactmat import ExactMatrix, ExactPoly, Rational
from .fingroup import FinGroup, Subgroup, catalog_group, close
from .pcompact import PrimeSpec, ToralDesc, classify_pairs, prime_set
from .reflect import invariant_degrees, is_reflection_generated, molien
from .weyl import LieType, weyl_group

__all__ = [
    "ExactMatrix",
    "ExactPoly",
    "FinGroup",
    "LieType",
    "PrimeSpec",
    "Rational",
    "Subgroup",
    "ToralDesc",
    "catalog_group",
    "classify_pairs",
    "close",
    "invariant_degrees",
    "is_reflection_generated",
    "molien",
    "prime_set",
    "weyl_group",
]
