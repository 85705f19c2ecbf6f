from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bgcompact.exactmat import (
    DimensionError,
    ExactMatrix,
    ExactPoly,
    SingularMatrixError,
    charpoly_det,
    det,
    mat_inverse,
    mat_mul,
    mat_rank,
    nullspace,
    realify,
)

small = st.integers(-4, 4)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows).map(ExactMatrix)


def adjugate_inverse(m):
    """Cofactor formula, independent of the elimination code."""
    n = m.rows

    def minor_det(a):
        if len(a) == 1:
            return a[0][0]
        return sum((-1) ** j * a[0][j] * minor_det([r[:j] + r[j + 1:] for r in a[1:]]) for j in range(len(a)))

    rows = m.tolist()
    d = minor_det(rows)
    cof = [
        [(-1) ** (i + j) * minor_det([r[:j] + r[j + 1:] for k, r in enumerate(rows) if k != i]) for j in range(n)]
        for i in range(n)
    ]
    return ExactMatrix([[Fraction(cof[j][i]) / d for j in range(n)] for i in range(n)])


def test_identity_product():
    assert mat_mul(ExactMatrix.identity(2), ExactMatrix.identity(2)) == ExactMatrix.identity(2)


def test_sign_matrices_commute():
    assert ExactMatrix.diag(-1, 1) @ ExactMatrix.diag(1, -1) == ExactMatrix.diag(-1, -1)


def test_q8_product_has_order_four():
    x = realify([[(0, 1), 0], [0, (0, -1)]])
    y = realify([[0, -1], [1, 0]])
    xy = x @ y
    power = ExactMatrix.identity(4)
    seen = []
    for _ in range(4):
        power = power @ xy
        seen.append(power == ExactMatrix.identity(4))
    assert seen == [False, False, False, True]


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        mat_mul(ExactMatrix.identity(2), ExactMatrix.identity(3))


def test_inverse_examples():
    assert mat_inverse(ExactMatrix.identity(3)) == ExactMatrix.identity(3)
    anti = ExactMatrix([[0, 1], [1, 0]])
    assert mat_inverse(anti) == anti
    u = ExactMatrix([[2, 3], [1, 2]])
    inv = mat_inverse(u)
    assert inv.is_integral() and inv == adjugate_inverse(u)


def test_singular_inverse_raises():
    with pytest.raises(SingularMatrixError):
        mat_inverse(ExactMatrix([[1, 2], [2, 4]]))


def test_rank_examples():
    assert mat_rank(ExactMatrix.zeros(3)) == 0
    assert mat_rank(ExactMatrix.diag(1, 1, -1) - ExactMatrix.identity(3)) == 1
    assert mat_rank(ExactMatrix([[2, -1], [-3, 2]])) == 2


def test_charpoly_examples():
    assert charpoly_det(ExactMatrix.identity(2)) == 1
    assert charpoly_det(ExactMatrix.identity(2), form="one_minus_t") == ExactPoly([1, -2, 1])
    rot = ExactMatrix([[0, -1], [1, -1]])
    assert charpoly_det(rot, form="one_minus_t") == ExactPoly([1, 1, 1])
    assert charpoly_det(ExactMatrix([[0, 1], [1, 0]])) == -1


def test_rational_entries_reduced():
    m = ExactMatrix([["2/4", 0], [0, "-3/6"]])
    assert m.to_json() == [["1/2", "0/1"], ["0/1", "-1/2"]]
    assert ExactMatrix.from_json(m.to_json()) == m


def test_float_rejected():
    with pytest.raises(TypeError):
        ExactMatrix([[0.5]])


@settings(max_examples=60, deadline=None)
@given(matrices(3, 3), matrices(3, 3), matrices(3, 3))
def test_associativity(a, b, c):
    assert (a @ b) @ c == a @ (b @ c)


@settings(max_examples=60, deadline=None)
@given(matrices(3, 3), matrices(3, 3))
def test_det_multiplicative(a, b):
    assert det(a @ b) == det(a) * det(b)


@settings(max_examples=60, deadline=None)
@given(matrices(3, 3))
def test_inverse_round_trip(a):
    if det(a) == 0:
        with pytest.raises(SingularMatrixError):
            mat_inverse(a)
        return
    inv = mat_inverse(a)
    assert a @ inv == ExactMatrix.identity(3)
    assert inv == adjugate_inverse(a)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4), st.integers(1, 5), st.data())
def test_rank_nullity(rows, cols, data):
    a = data.draw(matrices(rows, cols))
    kernel = nullspace(a)
    assert mat_rank(a) + len(kernel) == cols
    for v in kernel:
        assert a @ v == ExactMatrix.zeros(rows, 1)


@settings(max_examples=60, deadline=None)
@given(matrices(3, 3))
def test_charpoly_constant_and_top(a):
    p = charpoly_det(a, form="one_minus_t")
    assert p[0] == 1
    # top coefficient of det(I - t a) is (-1)^n det(a)
    assert p[3] == -det(a)


def test_poly_arithmetic():
    p = ExactPoly([1, -1])
    q = ExactPoly([1, 1])
    assert p * q == ExactPoly([1, 0, -1])
    assert (p * q).exact_div(q) == p
    assert (p * q).gcd(p * p) == p.monic()
    quo, rem = divmod(ExactPoly([1, 0, 0, 1]), q)
    assert rem.is_zero() and quo == ExactPoly([1, -1, 1])
    assert ExactPoly.one().series(p, 4) == [1, 1, 1, 1]
    assert ExactPoly([0, 0, 0]).degree == -1 or ExactPoly([0, 0, 0]).is_zero()
