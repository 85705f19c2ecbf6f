"""Root systems and Weyl groups as integer matrix groups.

Coordinates:

* B, C, D act on Z^n in the standard basis e_1..e_n, so Weyl group elements
  are signed permutation matrices.
* A_n, G2 and F4 act on the root lattice in the basis of simple roots.

``cartan[i][j] = <alpha_i^vee, alpha_j>``.  In G2 the first simple root is
short; in F4 the first two are long (Bourbaki numbering).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .exactmat import ExactMatrix
from .fingroup import (
    DEFAULT_CAP,
    FinGroup,
    Subgroup,
    close,
    quotient,
    subgroup_generated,
    trivial_subgroup,
)

MAX_CLASSICAL_RANK = 6


class UnsupportedType(ValueError):
    pass


class IncompatibleSpec(ValueError):
    pass


@dataclass(frozen=True, order=True)
class LieType:
    family: str
    rank: int

    def __post_init__(self):
        f, n = self.family, self.rank
        if f == "E":
            raise UnsupportedType("E-series Weyl groups are not supported")
        if f not in "ABCDGF" or len(f) != 1:
            raise UnsupportedType(f"unknown family {f!r}")
        if f == "G" and n != 2:
            raise UnsupportedType("G only in rank 2")
        if f == "F" and n != 4:
            raise UnsupportedType("F only in rank 4")
        if f in "ABC" and not 1 <= n <= MAX_CLASSICAL_RANK:
            raise UnsupportedType(f"{f}{n}: classical rank must be 1..{MAX_CLASSICAL_RANK}")
        if f == "D" and not 2 <= n <= MAX_CLASSICAL_RANK:
            raise UnsupportedType(f"D{n}: rank must be 2..{MAX_CLASSICAL_RANK}")

    @classmethod
    def parse(cls, text: str) -> "LieType":
        m = re.fullmatch(r"\s*([A-Za-z])_?(\d+)\s*", text)
        if not m:
            raise UnsupportedType(f"cannot parse Lie type {text!r}")
        return cls(m.group(1).upper(), int(m.group(2)))

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def sort_key(self) -> tuple[int, int]:
        return ("ABCDGF".index(self.family), self.rank)


def supported_types(max_classical_rank: int = MAX_CLASSICAL_RANK) -> list[LieType]:
    out = []
    for fam, lo in (("A", 1), ("B", 1), ("C", 1), ("D", 2)):
        out += [LieType(fam, n) for n in range(lo, max_classical_rank + 1)]
    return out + [LieType("G", 2), LieType("F", 4)]


def _as_type(t) -> LieType:
    return t if isinstance(t, LieType) else LieType.parse(str(t))


@dataclass(frozen=True)
class RootSystem:
    type: LieType
    simple_roots: tuple[tuple[int, ...], ...]
    gram: ExactMatrix
    basis: str  # "ambient" or "simple"

    def inner(self, u, v) -> Fraction:
        g, n = self.gram, len(u)
        return sum(Fraction(u[i]) * g[i, j] * v[j] for i in range(n) for j in range(n) if u[i] and v[j])

    @property
    def cartan(self) -> ExactMatrix:
        r = self.simple_roots
        return ExactMatrix([[2 * self.inner(a, b) / self.inner(a, a) for b in r] for a in r])

    def reflection(self, root) -> ExactMatrix:
        """Matrix of v -> v - 2(v, root)/(root, root) root in this basis."""
        n = len(root)
        rr = self.inner(root, root)
        basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        cols = []
        for e in basis:
            c = 2 * self.inner(e, root) / rr
            cols.append([Fraction(e[i]) - c * root[i] for i in range(n)])
        return ExactMatrix([[cols[j][i] for j in range(n)] for i in range(n)])

    def roots(self) -> list[tuple[int, ...]]:
        """All roots, by closing the simple roots under the simple reflections."""
        refl = [self.reflection(a) for a in self.simple_roots]
        seen = list(self.simple_roots)
        known = set(seen)
        i = 0
        while i < len(seen):
            v = seen[i]
            for s in refl:
                w = tuple(int(sum(s[r, c] * v[c] for c in range(len(v)))) for r in range(len(v)))
                if w not in known:
                    known.add(w)
                    seen.append(w)
            i += 1
        return seen

    def long_roots(self) -> list[tuple[int, ...]]:
        rs = self.roots()
        top = max(self.inner(r, r) for r in rs)
        return [r for r in rs if self.inner(r, r) == top]


def _unit(n: int, i: int, c: int = 1) -> list[int]:
    v = [0] * n
    v[i] = c
    return v


def root_system(t) -> RootSystem:
    return _root_system(_as_type(t))


@lru_cache(maxsize=None)
def _root_system(t: LieType) -> RootSystem:
    f, n = t.family, t.rank
    if f in "BCD":
        simple = []
        for i in range(n - 1):
            v = _unit(n, i)
            v[i + 1] = -1
            simple.append(tuple(v))
        if f == "B":
            simple.append(tuple(_unit(n, n - 1)))
        elif f == "C":
            simple.append(tuple(_unit(n, n - 1, 2)))
        else:
            v = [0] * n
            v[n - 2], v[n - 1] = 1, 1
            simple.append(tuple(v))
        return RootSystem(t, tuple(simple), ExactMatrix.identity(n), "ambient")
    simple = tuple(tuple(_unit(n, i)) for i in range(n))
    if f == "A":
        gram = [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)] for i in range(n)]
    elif f == "G":
        gram = [[2, -3], [-3, 6]]
    else:
        gram = [[4, -2, 0, 0], [-2, 4, -2, 0], [0, -2, 2, -1], [0, 0, -1, 2]]
    return RootSystem(t, simple, ExactMatrix(gram), "simple")


def simple_reflections(t) -> list[ExactMatrix]:
    rs = root_system(t)
    return [rs.reflection(a) for a in rs.simple_roots]


def weyl_group(t, cap: int = DEFAULT_CAP) -> FinGroup:
    return _weyl_group(_as_type(t), cap)


@lru_cache(maxsize=None)
def _weyl_group(t: LieType, cap: int) -> FinGroup:
    return close(simple_reflections(t), cap=cap, name=f"W({t})")


def weyl_order_formula(t) -> int:
    from math import factorial

    t = _as_type(t)
    n = t.rank
    return {
        "A": factorial(n + 1),
        "B": 2**n * factorial(n),
        "C": 2**n * factorial(n),
        "D": 2 ** (n - 1) * factorial(n),
        "G": 12,
        "F": 1152,
    }[t.family]


def reflections_of(G: FinGroup) -> list[int]:
    """Indices of elements g with rank(g - I) = 1."""
    n = G.dimension
    ident = np.eye(n, dtype=np.int64) * G.scale
    out = []
    chunk = 4096
    iu, ju = np.triu_indices(n, 1)
    for start in range(0, G.order, chunk):
        e = (G.data[start:start + chunk] - ident).astype(object if G.data.dtype == object else np.int64)
        nonzero = np.any(e != 0, axis=(1, 2))
        # every 2x2 minor vanishes <=> rank <= 1
        rows_i, rows_k = e[:, iu, :], e[:, ju, :]
        minors = rows_i[:, :, iu] * rows_k[:, :, ju] - rows_i[:, :, ju] * rows_k[:, :, iu]
        rank_le_1 = np.all(minors.reshape(e.shape[0], -1) == 0, axis=1) if n > 1 else np.ones(e.shape[0], bool)
        out += (np.nonzero(nonzero & rank_le_1)[0] + start).tolist()
    return out


SUBSYSTEM_KINDS = ("T_in_G", "D_in_B", "A1n_in_C", "A2_in_G2", "D4_in_F4")


@dataclass(frozen=True)
class SubsystemSpec:
    kind: str
    rank: int = 0

    def __post_init__(self):
        if self.kind not in SUBSYSTEM_KINDS:
            raise IncompatibleSpec(f"unknown subsystem {self.kind!r}")

    @property
    def label(self) -> str:
        return {
            "T_in_G": "T",
            "D_in_B": f"D{self.rank}",
            "A1n_in_C": f"A1^{self.rank}",
            "A2_in_G2": "A2",
            "D4_in_F4": "D4",
        }[self.kind]

    def compatible_with(self, ambient: LieType) -> bool:
        f, n = ambient.family, ambient.rank
        return {
            "T_in_G": True,
            "D_in_B": f == "B" and n == self.rank and n >= 2,
            "A1n_in_C": f == "C" and n == self.rank,
            "A2_in_G2": f == "G",
            "D4_in_F4": f == "F",
        }[self.kind]


def parse_pair(text: str) -> tuple[LieType, SubsystemSpec]:
    """Parse ``"D<B3"``, ``"A1^2<C2"``, ``"A2<G2"``, ``"D4<F4"``, ``"T<G2"``."""
    try:
        sub, amb = text.replace(" ", "").split("<")
    except ValueError:
        raise IncompatibleSpec(f"cannot parse pair {text!r}") from None
    ambient = LieType.parse(amb)
    s = sub.upper()
    if s == "T":
        spec = SubsystemSpec("T_in_G")
    elif re.fullmatch(r"D\d*", s) and ambient.family == "B":
        spec = SubsystemSpec("D_in_B", ambient.rank)
    elif re.fullmatch(r"A1(\^\d+|X.*)?", s) and ambient.family == "C":
        spec = SubsystemSpec("A1n_in_C", ambient.rank)
    elif s == "A2" and ambient.family == "G":
        spec = SubsystemSpec("A2_in_G2")
    elif s == "D4" and ambient.family == "F":
        spec = SubsystemSpec("D4_in_F4")
    else:
        raise IncompatibleSpec(f"no subsystem {sub!r} in {ambient}")
    if s.startswith("D") and s[1:] and int(s[1:]) != ambient.rank and ambient.family == "B":
        raise IncompatibleSpec(f"D rank must match ambient in {text!r}")
    if "^" in s and int(s.split("^")[1]) != ambient.rank:
        raise IncompatibleSpec(f"A1 power must match ambient in {text!r}")
    return ambient, spec


def subsystem_roots(ambient: LieType, spec: SubsystemSpec) -> list[tuple[int, ...]]:
    ambient = _as_type(ambient)
    if not spec.compatible_with(ambient):
        raise IncompatibleSpec(f"{spec.label} is not a catalog subsystem of {ambient}")
    if spec.kind == "T_in_G":
        return []
    return root_system(ambient).long_roots()


def subsystem_subgroup(ambient, spec: SubsystemSpec) -> Subgroup:
    """The reflection subgroup of W(ambient) spanned by the subsystem's roots."""
    ambient = _as_type(ambient)
    W = weyl_group(ambient)
    roots = subsystem_roots(ambient, spec)
    if not roots:
        return trivial_subgroup(W)
    rs = root_system(ambient)
    idx = dict.fromkeys(W.index_of(rs.reflection(r)) for r in roots)
    return subgroup_generated(W, idx)


def dual_group(G: FinGroup) -> FinGroup:
    """Transpose-inverse representation, with element i of the result dual to element i of G."""
    data = np.transpose(G.data[G.inverses], (0, 2, 1)).copy()
    name = f"{G.name}*" if G.name else None
    return FinGroup(data, G.scale, G.generators, name=name)


@lru_cache(maxsize=None)
def triality_subgroup() -> Subgroup:
    """W(D4) extended by an order-3 element of W(F4) acting as a 3-cycle on W(F4)/W(D4).

    This is the index-2 subgroup of W(F4) lying over the alternating group in
    the quotient Sigma_3.
    """
    W = weyl_group(LieType("F", 4))
    D4 = subsystem_subgroup(LieType("F", 4), SubsystemSpec("D4_in_F4"))
    Q = quotient(W, D4)
    orders, qorders = W.element_orders, Q.element_orders
    g = next(i for i in range(W.order) if orders[i] == 3 and qorders[Q.coset_of[i]] == 3)
    return D4.extend([g])
