from fractions import Fraction

import pytest

from bgcompact.exactmat import ExactMatrix, ExactPoly
from bgcompact.fingroup import catalog_group, close, subgroup_generated
from bgcompact.reflect import (
    invariant_degrees,
    invariant_ring_polynomial,
    is_reflection_generated,
    molien,
)
from bgcompact.weyl import LieType, SubsystemSpec, reflections_of, subsystem_subgroup, supported_types, triality_subgroup, weyl_group

FAST_TYPES = [t for t in supported_types() if weyl_group(t).order <= 5000]


def block_diag(a, b):
    n, m = a.rows, b.rows
    rows = [list(a.row(i)) + [0] * m for i in range(n)] + [[0] * n + list(b.row(i)) for i in range(m)]
    return ExactMatrix(rows)


def test_trivial_group():
    G = close([ExactMatrix.identity(3)])
    assert is_reflection_generated(G)
    s = molien(G)
    assert s.equals(type(s)(ExactPoly.one(), ExactPoly([1, -1]) ** 3, ()))


def test_a1_series():
    s = molien(weyl_group("A1"))
    assert s.numerator == ExactPoly.one() and s.denominator == ExactPoly([1, 0, -1])


def test_cyclic_z3_series():
    s = molien(catalog_group("Z/3"))
    assert list(s.prefix[:4]) == [1, 1, 2, 4]
    assert not is_reflection_generated(catalog_group("Z/3"))
    assert invariant_degrees(catalog_group("Z/3")) is None
    assert not invariant_ring_polynomial(catalog_group("Z/3"))


def test_cyclic_z3_by_hand():
    # average of 1/(1-t)^3 and two copies of 1/(1-t^3)
    direct = [(Fraction((k + 1) * (k + 2), 2) + 2 * (k % 3 == 0)) / 3 for k in range(20)]
    assert list(molien(catalog_group("Z/3")).prefix[:20]) == direct


@pytest.mark.parametrize("t,degrees", [("A1", (2,)), ("B2", (2, 4)), ("G2", (2, 6)), ("F4", (2, 6, 8, 12))])
def test_degrees(t, degrees):
    assert invariant_degrees(weyl_group(t)).degrees == degrees


@pytest.mark.parametrize("t", FAST_TYPES, ids=str)
def test_weyl_degree_identities(t):
    W = weyl_group(t)
    assert is_reflection_generated(W)
    d = invariant_degrees(W)
    assert d.product() == W.order
    assert sum(x - 1 for x in d.degrees) == len(reflections_of(W))
    assert invariant_ring_polynomial(W)


@pytest.mark.parametrize("t", ["C2", "C3", "C4"])
def test_type_c_polynomial(t):
    assert invariant_ring_polynomial(weyl_group(t))


def test_triality_subgroup():
    F4 = LieType("F", 4)
    assert is_reflection_generated(weyl_group(F4))
    D4 = subsystem_subgroup(F4, SubsystemSpec("D4_in_F4")).as_group()
    assert is_reflection_generated(D4)
    T = triality_subgroup().as_group()
    assert T.order == 576
    assert not is_reflection_generated(T)
    assert not invariant_ring_polynomial(T)


@pytest.mark.parametrize("name", ["Z/3", "Z/4", "S3", "S4", "Q8", "D8", "A4", "Z/2xZ/2"])
def test_prefix_nonnegative_integers(name):
    s = molien(catalog_group(name))
    assert s.prefix[0] == 1
    assert all(c.denominator == 1 and c >= 0 for c in s.prefix)


@pytest.mark.parametrize("t", ["B3", "G2", "A3", "D4"])
def test_weyl_prefix_nonnegative_integers(t):
    s = molien(weyl_group(t))
    assert all(c.denominator == 1 and c >= 0 for c in s.prefix)


def test_product_group_series():
    a = weyl_group("A1").generator_matrices()[0]
    one = ExactMatrix.identity(1)
    G = close([block_diag(a, one), block_diag(one, a)])
    s1 = molien(weyl_group("A1"))
    s = molien(G)
    assert s.numerator * s1.denominator * s1.denominator == s1.numerator * s1.numerator * s.denominator


def test_subgroup_has_more_invariants():
    W = weyl_group("B3")
    big = molien(W).prefix
    for sub in ([1], [1, 2], list(W.generators[:2])):
        H = subgroup_generated(W, sub).as_group()
        small = molien(H, len(big)).prefix
        assert all(x >= y for x, y in zip(small, big))


def test_series_matches_rational_function():
    s = molien(weyl_group("G2"))
    assert list(s.prefix) == s.coefficients(len(s.prefix))
