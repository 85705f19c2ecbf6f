"""Exact rational matrices and polynomials.

Scalars are :class:`fractions.Fraction`; nothing in here ever touches a float.
Gaussian rationals enter only through :func:`realify`, which embeds
``a + bi`` as the 2x2 block ``[[a, -b], [b, a]]``.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence, Union

Rational = Fraction
Scalar = Union[int, Fraction, str]


class DimensionError(ValueError):
    pass


class SingularMatrixError(ValueError):
    pass


def to_rational(x: Scalar) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass an int, Fraction or 'p/q' string")
    return Fraction(x)


def rational_to_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


class ExactMatrix:
    """Dense matrix of rationals, immutable, stored row-major."""

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, data: Sequence[Sequence[Scalar]]):
        rows = [list(r) for r in data]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        self.rows = len(rows)
        self.cols = ncols
        self.entries = tuple(to_rational(x) for r in rows for x in r)
        self._hash = None

    @classmethod
    def from_flat(cls, rows: int, cols: int, entries: Iterable[Scalar]) -> "ExactMatrix":
        m = cls.__new__(cls)
        m.rows, m.cols = rows, cols
        m.entries = tuple(to_rational(x) for x in entries)
        m._hash = None
        if len(m.entries) != rows * cols:
            raise DimensionError(f"expected {rows * cols} entries, got {len(m.entries)}")
        return m

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls.from_flat(n, n, (int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "ExactMatrix":
        cols = rows if cols is None else cols
        return cls.from_flat(rows, cols, [0] * (rows * cols))

    @classmethod
    def diag(cls, *values: Scalar) -> "ExactMatrix":
        n = len(values)
        return cls.from_flat(n, n, (values[i] if i == j else 0 for i in range(n) for j in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def tolist(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def key(self) -> tuple[Fraction, ...]:
        return self.entries

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in self.entries)

    def denominator_lcm(self) -> int:
        return lcm(*(x.denominator for x in self.entries)) if self.entries else 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self.entries))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(x) for x in self.row(i)) + "]" for i in range(self.rows))
        return f"ExactMatrix([{body}])"

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        return mat_mul(self, other)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return ExactMatrix.from_flat(self.rows, self.cols, (a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot subtract {other.shape} from {self.shape}")
        return ExactMatrix.from_flat(self.rows, self.cols, (a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix.from_flat(self.rows, self.cols, (-a for a in self.entries))

    def scale(self, c: Scalar) -> "ExactMatrix":
        c = to_rational(c)
        return ExactMatrix.from_flat(self.rows, self.cols, (c * a for a in self.entries))

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix.from_flat(
            self.cols, self.rows, (self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows))
        )

    @property
    def T(self) -> "ExactMatrix":
        return self.transpose()

    def inverse(self) -> "ExactMatrix":
        return mat_inverse(self)

    def to_json(self) -> list[list[str]]:
        return [[rational_to_str(x) for x in self.row(i)] for i in range(self.rows)]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[str | int]]) -> "ExactMatrix":
        return cls(data)


def mat_mul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    n, m, p = a.rows, a.cols, b.cols
    ae, be = a.entries, b.entries
    out = []
    for i in range(n):
        arow = ae[i * m:(i + 1) * m]
        for j in range(p):
            s = Fraction(0)
            for k in range(m):
                x = arow[k]
                if x:
                    s += x * be[k * p + j]
            out.append(s)
    return ExactMatrix.from_flat(n, p, out)


def _integer_rows(a: ExactMatrix) -> tuple[list[list[int]], Fraction]:
    """Clear denominators row by row; returns rows and the product of row scales."""
    rows, total = [], Fraction(1)
    for i in range(a.rows):
        r = a.row(i)
        d = lcm(*(x.denominator for x in r)) if r else 1
        rows.append([int(x * d) for x in r])
        total *= d
    return rows, total


def _bareiss(m: list[list[int]]) -> tuple[int, int, list[int]]:
    """Fraction-free elimination in place.

    Returns (rank, sign of the row permutation, pivot columns). After the
    call ``m[rank-1][pivots[-1]]`` is the last leading minor.
    """
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    prev, r, sign, pivots = 1, 0, 1, []
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
            sign = -sign
        piv = m[r][c]
        for i in range(r + 1, nrows):
            mic = m[i][c]
            row_i, row_r = m[i], m[r]
            for j in range(c + 1, ncols):
                row_i[j] = (piv * row_i[j] - mic * row_r[j]) // prev
            row_i[c] = 0
        prev = piv
        pivots.append(c)
        r += 1
    return r, sign, pivots


def mat_rank(a: ExactMatrix) -> int:
    if a.rows == 0 or a.cols == 0:
        return 0
    rows, _ = _integer_rows(a)
    rank, _, _ = _bareiss(rows)
    return rank


def det(a: ExactMatrix) -> Fraction:
    if not a.is_square:
        raise DimensionError(f"determinant of non-square {a.shape}")
    n = a.rows
    if n == 0:
        return Fraction(1)
    rows, scale = _integer_rows(a)
    rank, sign, _ = _bareiss(rows)
    if rank < n:
        return Fraction(0)
    return Fraction(sign * rows[n - 1][n - 1]) / scale


def mat_inverse(a: ExactMatrix) -> ExactMatrix:
    """Gauss-Jordan inverse over the rationals."""
    if not a.is_square:
        raise DimensionError(f"inverse of non-square {a.shape}")
    n = a.rows
    aug = [list(a.row(i)) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if p is None:
            raise SingularMatrixError("matrix is singular")
        aug[c], aug[p] = aug[p], aug[c]
        inv_piv = 1 / aug[c][c]
        aug[c] = [x * inv_piv for x in aug[c]]
        for i in range(n):
            f = aug[i][c]
            if i != c and f:
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return ExactMatrix.from_flat(n, n, (x for r in aug for x in r[n:]))


def nullspace(a: ExactMatrix) -> list[ExactMatrix]:
    """Basis of the right kernel as column vectors, via reduced row echelon form."""
    m = [list(a.row(i)) for i in range(a.rows)]
    pivots: list[int] = []
    r = 0
    for c in range(a.cols):
        p = next((i for i in range(r, a.rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv_piv = 1 / m[r][c]
        m[r] = [x * inv_piv for x in m[r]]
        for i in range(a.rows):
            f = m[i][c]
            if i != r and f:
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == a.rows:
            break
    free = [c for c in range(a.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * a.cols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][f]
        basis.append(ExactMatrix.from_flat(a.cols, 1, v))
    return basis


class ExactPoly:
    """Univariate polynomial over the rationals, coefficients in ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [to_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def monomial(cls, degree: int, coeff: Scalar = 1) -> "ExactPoly":
        return cls([0] * degree + [coeff])

    @classmethod
    def one(cls) -> "ExactPoly":
        return cls([1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ExactPoly([other])
        if not isinstance(other, ExactPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"ExactPoly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if mono and abs(c) == 1:
                s = mono
            else:
                s = str(abs(c)) + ("*" + mono if mono else "")
            terms.append(("-" if c < 0 else "+", s))
        head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return head + "".join(f" {sg} {s}" for sg, s in terms[1:])

    def __add__(self, other: "ExactPoly") -> "ExactPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return ExactPoly(self[k] + other[k] for k in range(n))

    def __sub__(self, other: "ExactPoly") -> "ExactPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return ExactPoly(self[k] - other[k] for k in range(n))

    def __neg__(self) -> "ExactPoly":
        return ExactPoly(-c for c in self.coeffs)

    def __mul__(self, other: "ExactPoly | int | Fraction") -> "ExactPoly":
        if not isinstance(other, ExactPoly):
            c = to_rational(other)
            return ExactPoly(c * a for a in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return ExactPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return ExactPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "ExactPoly":
        out = ExactPoly.one()
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other: "ExactPoly") -> tuple["ExactPoly", "ExactPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs) + 1
        if dq <= 0:
            return ExactPoly(), ExactPoly(rem)
        q = [Fraction(0)] * dq
        lead = other.coeffs[-1]
        for k in range(dq - 1, -1, -1):
            c = rem[k + len(other.coeffs) - 1] / lead
            q[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return ExactPoly(q), ExactPoly(rem)

    def __floordiv__(self, other: "ExactPoly") -> "ExactPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "ExactPoly") -> "ExactPoly":
        return divmod(self, other)[1]

    def exact_div(self, other: "ExactPoly") -> "ExactPoly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def __call__(self, x: Scalar) -> Fraction:
        x = to_rational(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def monic(self) -> "ExactPoly":
        return self * (1 / self.coeffs[-1]) if self.coeffs else self

    def gcd(self, other: "ExactPoly") -> "ExactPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def lcm(self, other: "ExactPoly") -> "ExactPoly":
        return (self * other).exact_div(self.gcd(other)).monic()

    def series(self, denominator: "ExactPoly", n: int) -> list[Fraction]:
        """First ``n`` power-series coefficients of self / denominator."""
        d0 = denominator[0]
        if d0 == 0:
            raise ZeroDivisionError("denominator vanishes at t = 0")
        out: list[Fraction] = []
        for k in range(n):
            s = self[k]
            for j in range(1, min(k, denominator.degree) + 1):
                s -= denominator[j] * out[k - j]
            out.append(s / d0)
        return out

    def to_json(self) -> list[str]:
        return [rational_to_str(c) for c in self.coeffs]


def charpoly_coeffs(a: ExactMatrix) -> list[Fraction]:
    """Coefficients c_0..c_n of det(lambda*I - a) = sum c_k lambda^(n-k).

    Faddeev-LeVerrier recursion; also exactly the ascending coefficients of
    det(I - t*a).
    """
    if not a.is_square:
        raise DimensionError(f"characteristic polynomial of non-square {a.shape}")
    n = a.rows
    coeffs = [Fraction(1)]
    ident = ExactMatrix.identity(n)
    mk = ExactMatrix.zeros(n)
    for k in range(1, n + 1):
        mk = mat_mul(a, mk) + ident.scale(coeffs[-1])
        amk = mat_mul(a, mk)
        tr = sum(amk[i, i] for i in range(n))
        coeffs.append(-tr / k)
    return coeffs


def det_one_minus_t(a: ExactMatrix) -> ExactPoly:
    """The polynomial det(I - t*a)."""
    return ExactPoly(charpoly_coeffs(a))


def charpoly_det(a: ExactMatrix, form: str = "det") -> Fraction | ExactPoly:
    """``form="det"`` gives det(a); ``form="one_minus_t"`` gives det(I - t*a)."""
    if form == "det":
        return det(a)
    if form in ("one_minus_t", "charpoly"):
        return det_one_minus_t(a)
    raise ValueError(f"unknown form {form!r}")


GaussianEntry = Union[Scalar, tuple]


def realify(data: Sequence[Sequence[GaussianEntry]]) -> ExactMatrix:
    """Embed an n x n matrix over Q(i) as a 2n x 2n rational matrix.

    Entries are rationals or ``(re, im)`` pairs.
    """
    n = len(data)
    out = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
    for i, row in enumerate(data):
        if len(row) != n:
            raise DimensionError("realify expects a square matrix")
        for j, z in enumerate(row):
            re, im = (z if isinstance(z, tuple) else (z, 0))
            re, im = to_rational(re), to_rational(im)
            out[2 * i][2 * j] = re
            out[2 * i][2 * j + 1] = -im
            out[2 * i + 1][2 * j] = im
            out[2 * i + 1][2 * j + 1] = re
    return ExactMatrix(out)
