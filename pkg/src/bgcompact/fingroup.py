"""Finite matrix groups materialized as indexed element lists.

Every group is a list of elements addressed by integer index, with the
identity at index 0.  :class:`FinGroup` backs the indices with exact
matrices; :class:`QuotientGroup` backs them with a coset multiplication
table.  All predicates below (Sylow, nilpotence, normality, ...) work on
indices only, so they apply to both.

Matrix elements are stored as integer numpy arrays scaled by a common
denominator ``scale``: element ``i`` is ``data[i] / scale``.  Arithmetic is
exact integer arithmetic; a layer that could overflow int64 switches the
whole group to Python-int object arrays.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
from collections import Counter
from fractions import Fraction
from math import gcd, lcm
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .exactmat import ExactMatrix, det, realify

DEFAULT_CAP = 100_000
_SAFE = 2**62


class CapExceeded(RuntimeError):
    pass


class NotNormal(ValueError):
    pass


class UnknownCatalogName(ValueError):
    pass


class SearchBudgetExceeded(RuntimeError):
    pass


class NotAHomomorphism(ValueError):
    pass


class MalformedRealification(ValueError):
    pass


def prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def is_prime_power(n: int, p: int | None = None) -> bool:
    fs = prime_factors(n)
    if n == 1:
        return True
    return len(fs) == 1 and (p is None or fs[0] == p)


class _IndexedGroup:
    """Common index-level interface: identity is 0, ``mul`` is vectorized."""

    order: int
    generators: tuple[int, ...]
    name: str | None

    def mul(self, a, b) -> np.ndarray:
        raise NotImplementedError

    def mul1(self, a: int, b: int) -> int:
        return int(self.mul(np.array([a]), np.array([b]))[0])

    @property
    def inverses(self) -> np.ndarray:
        raise NotImplementedError

    @property
    def element_orders(self) -> np.ndarray:
        raise NotImplementedError

    def inv(self, a):
        return self.inverses[a]

    def all_indices(self) -> np.ndarray:
        return np.arange(self.order)

    def is_abelian(self) -> bool:
        gs = list(self.generators)
        for i, g in enumerate(gs):
            for h in gs[i + 1:]:
                if self.mul1(g, h) != self.mul1(h, g):
                    return False
        return True

    def cayley_table(self) -> np.ndarray:
        if getattr(self, "_table", None) is None:
            if self.order > 5000:
                raise SearchBudgetExceeded(f"Cayley table of order {self.order} too large")
            x = self.all_indices()
            table = np.empty((self.order, self.order), dtype=np.int64)
            for j in range(self.order):
                table[:, j] = self.mul(x, np.full(self.order, j))
            self._table = table
        return self._table


def _key(row: np.ndarray):
    if row.dtype == object:
        return tuple(int(v) for v in row.ravel())
    return row.tobytes()


class FinGroup(_IndexedGroup):
    """A finite group of exact square matrices."""

    def __init__(self, data: np.ndarray, scale: int, generators: Sequence[int], name: str | None = None):
        self.data = data
        self.scale = int(scale)
        self.order = data.shape[0]
        self.dimension = data.shape[1]
        self.generators = tuple(int(g) for g in generators)
        self.name = name
        self.index = {_key(data[i]): i for i in range(self.order)}
        if len(self.index) != self.order:
            raise ValueError("duplicate elements")
        self._inverses = None
        self._orders = None
        self._table = None

    def __repr__(self) -> str:
        label = self.name or "FinGroup"
        return f"<{label}: order {self.order}, dimension {self.dimension}>"

    def __len__(self) -> int:
        return self.order

    @property
    def elements(self) -> list[ExactMatrix]:
        return [self.matrix(i) for i in range(self.order)]

    def matrix(self, i: int) -> ExactMatrix:
        n = self.dimension
        return ExactMatrix.from_flat(n, n, (Fraction(int(v), self.scale) for v in self.data[i].ravel()))

    def generator_matrices(self) -> list[ExactMatrix]:
        return [self.matrix(g) for g in self.generators]

    def _scaled(self, m: ExactMatrix) -> np.ndarray:
        vals = [x * self.scale for x in m.entries]
        if any(v.denominator != 1 for v in vals):
            raise KeyError("matrix is not an element of this group")
        arr = np.array([int(v) for v in vals], dtype=self.data.dtype)
        return arr.reshape(m.rows, m.cols)

    def index_of(self, m: ExactMatrix) -> int:
        if m.shape != (self.dimension, self.dimension):
            raise KeyError("wrong dimension")
        return self.index[_key(self._scaled(m))]

    def __contains__(self, m: ExactMatrix) -> bool:
        try:
            self.index_of(m)
        except KeyError:
            return False
        return True

    def lookup(self, arr: np.ndarray) -> np.ndarray:
        """Indices of a stack of scaled matrices."""
        flat = arr.reshape(-1, self.dimension, self.dimension)
        idx = self.index
        return np.fromiter((idx[_key(r)] for r in flat), dtype=np.int64, count=flat.shape[0]).reshape(arr.shape[:-2])

    def product_arrays(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        p = np.matmul(self.data[a], self.data[b])
        if self.scale != 1:
            if np.any(p % self.scale):
                raise ArithmeticError("product left the group's denominator lattice")
            p = p // self.scale
        return p

    def mul(self, a, b) -> np.ndarray:
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        if a.size == 0:
            return np.zeros(a.shape, dtype=np.int64)
        return self.lookup(self.product_arrays(a, b))

    def _compute_orders(self) -> None:
        n = self.dimension
        ident = np.eye(n, dtype=self.data.dtype) * self.scale
        orders = np.zeros(self.order, dtype=np.int64)
        inverses = np.zeros(self.order, dtype=np.int64)
        todo = np.arange(self.order)
        prev = np.broadcast_to(ident, (self.order, n, n)).copy()
        power = self.data.copy()
        k = 1
        while todo.size:
            hit = np.all(power == ident, axis=(1, 2))
            if hit.any():
                orders[todo[hit]] = k
                inverses[todo[hit]] = self.lookup(prev[hit])
                todo, prev, power = todo[~hit], power[~hit], power[~hit]
            if not todo.size:
                break
            k += 1
            if k > self.order:
                raise ArithmeticError("element order exceeds group order")
            prev = power
            power = np.matmul(power, self.data[todo])
            if self.scale != 1:
                power = power // self.scale
        self._orders, self._inverses = orders, inverses

    @property
    def inverses(self) -> np.ndarray:
        if self._inverses is None:
            self._compute_orders()
        return self._inverses

    @property
    def element_orders(self) -> np.ndarray:
        if self._orders is None:
            self._compute_orders()
        return self._orders

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "dimension": self.dimension,
            "order": self.order,
            "generators": [self.matrix(g).to_json() for g in self.generators],
            "elements": [self.matrix(i).to_json() for i in range(self.order)],
        }

    @classmethod
    def from_json(cls, payload: dict) -> "FinGroup":
        gens = [ExactMatrix.from_json(g) for g in payload["generators"]]
        n = int(payload["dimension"])
        pairs = [_parse_ratio(x) for e in payload["elements"] for row in e for x in row]
        scale = lcm(*(d for _, d in pairs)) if pairs else 1
        ints = [num * (scale // d) for num, d in pairs]
        dtype = np.int64 if max(map(abs, ints), default=0) < 2**31 else object
        data = np.array(ints, dtype=dtype).reshape(-1, n, n)
        group = cls(data, scale, [], name=payload.get("name"))
        group.generators = tuple(group.index_of(g) for g in gens)
        if group.order != int(payload["order"]):
            raise ValueError("cached group order mismatch")
        return group


def _parse_ratio(text) -> tuple[int, int]:
    num, _, den = str(text).partition("/")
    num, den = int(num), int(den or 1)
    g = gcd(num, den)
    return num // g, den // g


def _stack_scaled(mats: Sequence[ExactMatrix], scale: int, n: int) -> np.ndarray:
    ints = [[int(x * scale) for x in m.entries] for m in mats]
    big = max((abs(v) for r in ints for v in r), default=0)
    dtype = np.int64 if big < 2**31 else object
    return np.array(ints, dtype=dtype).reshape(len(mats), n, n)


class _Rescale(Exception):
    def __init__(self, scale: int):
        self.scale = scale


def _close_scaled(gens: Sequence[ExactMatrix], scale: int, cap: int, n: int):
    g_arr = _stack_scaled(gens, scale, n)
    ident = (np.eye(n, dtype=np.int64) * scale).astype(g_arr.dtype)
    elems = [ident]
    index = {_key(ident): 0}
    frontier = [0]
    while frontier:
        f_arr = np.stack([elems[i] for i in frontier])
        if f_arr.dtype != object:
            bound = int(np.abs(f_arr).max()) * int(np.abs(g_arr).max()) * n
            if bound >= _SAFE:
                f_arr, g_arr = f_arr.astype(object), g_arr.astype(object)
                elems = [e.astype(object) for e in elems]
                index = {_key(e): i for i, e in enumerate(elems)}
        prods = np.matmul(f_arr[:, None], g_arr[None])
        if scale != 1:
            rem = prods % scale
            if np.any(rem):
                bad = prods[rem != 0]
                new = scale
                for v in bad.ravel():
                    new = lcm(new, Fraction(int(v), scale * scale).denominator)
                raise _Rescale(new)
            prods = prods // scale
        nxt = []
        for row in prods.reshape(-1, n, n):
            k = _key(row)
            if k not in index:
                index[k] = len(elems)
                elems.append(row)
                nxt.append(len(elems) - 1)
                if len(elems) > cap:
                    raise CapExceeded(f"closure exceeded cap {cap}")
        frontier = nxt
    data = np.stack(elems)
    if data.dtype == object and int(max(abs(int(v)) for v in data.ravel())) < 2**31:
        data = data.astype(np.int64)
    gidx = []
    for g in _stack_scaled(gens, scale, n).astype(data.dtype):
        i = index[_key(g)]
        if i != 0 and i not in gidx:
            gidx.append(i)
    return data, gidx


_CACHE_DIR: Path | None = None


def set_cache_dir(path: str | os.PathLike | None) -> None:
    """Route every :func:`close` through an on-disk JSON cache (``None`` disables)."""
    global _CACHE_DIR
    _CACHE_DIR = Path(path) if path is not None else None


def generator_digest(generators: Sequence[ExactMatrix]) -> str:
    blob = json.dumps([g.to_json() for g in generators], separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:24]


def close(generators: Sequence[ExactMatrix], cap: int = DEFAULT_CAP, name: str | None = None) -> FinGroup:
    """Breadth-first closure of a generating set.

    Identity first, then elements in discovery order (each frontier element
    times each generator, in order).
    """
    gens = list(generators)
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].rows
    for g in gens:
        if g.shape != (n, n):
            raise ValueError("generators must be square of equal dimension")
        if det(g) == 0:
            raise ValueError("generator is singular")
    cache_file = None
    if _CACHE_DIR is not None:
        cache_file = _CACHE_DIR / f"{generator_digest(gens)}.json"
        if cache_file.exists():
            group = FinGroup.from_json(json.loads(cache_file.read_text()))
            group.name = name if name is not None else group.name
            return group
    scale = lcm(*(g.denominator_lcm() for g in gens))
    while True:
        try:
            data, gidx = _close_scaled(gens, scale, cap, n)
            break
        except _Rescale as r:
            scale = r.scale
    group = FinGroup(data, scale, gidx, name=name)
    if cache_file is not None:
        cache_file.parent.mkdir(parents=True, exist_ok=True)
        tmp = cache_file.with_suffix(".tmp")
        tmp.write_text(json.dumps(group.to_json(), separators=(",", ":")))
        tmp.replace(cache_file)
    return group


def group_from_indices(G: FinGroup, members: Sequence[int], generators: Sequence[int], name: str | None = None) -> FinGroup:
    """Re-materialize a subset of a matrix group (in the given order) as its own FinGroup."""
    pos = {int(m): i for i, m in enumerate(members)}
    return FinGroup(G.data[np.asarray(members, dtype=np.int64)], G.scale, [pos[int(g)] for g in generators], name=name)


class Subgroup:
    """A subgroup of an indexed group, as a membership mask plus a generating set."""

    def __init__(self, parent: _IndexedGroup, elements: Sequence[int], generators: Sequence[int]):
        self.parent = parent
        self.elements = np.asarray(elements, dtype=np.int64)
        self.generators = tuple(int(g) for g in generators)
        self.members = np.zeros(parent.order, dtype=bool)
        self.members[self.elements] = True
        self.order = len(self.elements)
        if parent.order % self.order:
            raise ValueError(f"subgroup order {self.order} does not divide {parent.order}")

    def __repr__(self) -> str:
        return f"<Subgroup of order {self.order} in {self.parent!r}>"

    def __contains__(self, i: int) -> bool:
        return bool(self.members[i])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and bool(np.array_equal(self.members, other.members))

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members.tobytes()))

    def extend(self, new: Iterable[int]) -> "Subgroup":
        return _grow(self.parent, list(self.elements), self.members.copy(), list(self.generators), new)

    def as_group(self, name: str | None = None) -> FinGroup:
        if not isinstance(self.parent, FinGroup):
            raise TypeError("only subgroups of matrix groups materialize as FinGroup")
        return group_from_indices(self.parent, self.elements, self.generators, name=name)

    @classmethod
    def from_mask(cls, parent: _IndexedGroup, mask: np.ndarray) -> "Subgroup":
        sub = _grow(parent, [0], _one_hot(parent.order), [], np.nonzero(mask)[0])
        if sub.order != int(mask.sum()):
            raise ValueError("mask is not closed under multiplication")
        return sub


def _one_hot(n: int) -> np.ndarray:
    m = np.zeros(n, dtype=bool)
    m[0] = True
    return m


def _grow(G: _IndexedGroup, elements: list, members: np.ndarray, gens: list, new: Iterable[int]) -> Subgroup:
    """Incremental closure: adjoin each element of ``new`` not already present."""
    for g in new:
        g = int(g)
        if members[g]:
            continue
        gens.append(g)
        frontier = G.mul(np.asarray(elements, dtype=np.int64), g)
        frontier = _fresh(frontier, members, elements)
        while frontier.size:
            batch = [G.mul(frontier, h) for h in gens]
            frontier = _fresh(np.stack(batch, axis=1).ravel(), members, elements)
    return Subgroup(G, elements, gens)


def _fresh(cands: np.ndarray, members: np.ndarray, elements: list) -> np.ndarray:
    out = []
    for c in cands.tolist():
        if not members[c]:
            members[c] = True
            elements.append(c)
            out.append(c)
    return np.asarray(out, dtype=np.int64)


def trivial_subgroup(G: _IndexedGroup) -> Subgroup:
    return Subgroup(G, [0], [])


def whole_group(G: _IndexedGroup) -> Subgroup:
    return Subgroup(G, range(G.order), G.generators)


def subgroup_generated(G: _IndexedGroup, subset: Iterable[int]) -> Subgroup:
    """Smallest subgroup of ``G`` containing the given element indices."""
    return _grow(G, [0], _one_hot(G.order), [], subset)


def _ambient(G) -> tuple[_IndexedGroup, tuple[int, ...], np.ndarray | None]:
    if isinstance(G, Subgroup):
        return G.parent, G.generators, G.members
    return G, G.generators, None


def is_normal(G, H: Subgroup) -> bool:
    """Whether H is normal in G; G may itself be a Subgroup of H's parent."""
    P, conj, gmask = _ambient(G)
    if H.parent is not P:
        raise ValueError("H is not a subgroup of G's parent")
    if gmask is not None and not np.all(gmask[H.elements]):
        return False
    hg = np.asarray(H.generators, dtype=np.int64)
    if hg.size == 0:
        return True
    for g in conj:
        c = P.mul(P.mul(np.full(hg.shape, g), hg), np.full(hg.shape, P.inv(g)))
        if not np.all(H.members[c]):
            return False
    return True


def normalizer(G: _IndexedGroup, H: Subgroup) -> Subgroup:
    x = G.all_indices()
    mask = np.ones(G.order, dtype=bool)
    xinv = G.inverses
    for h in H.generators:
        c = G.mul(G.mul(x, h), xinv)
        mask &= H.members[c]
    return Subgroup.from_mask(G, mask)


def center(G: _IndexedGroup) -> Subgroup:
    x = G.all_indices()
    mask = np.ones(G.order, dtype=bool)
    for g in G.generators:
        mask &= G.mul(x, g) == G.mul(np.full(G.order, g), x)
    return Subgroup.from_mask(G, mask)


def sylow(G: _IndexedGroup, p: int) -> Subgroup:
    """A Sylow p-subgroup, grown inside successive normalizers."""
    target = p_part(G.order, p)
    if target == 1:
        return trivial_subgroup(G)
    orders = G.element_orders
    p_elem = np.array([o > 1 and is_prime_power(int(o), p) for o in orders])
    start = int(np.argmax(np.where(p_elem, orders, 0)))
    P = subgroup_generated(G, [start])
    while P.order < target:
        N = normalizer(G, P)
        cand = [int(g) for g in N.elements if p_elem[g] and not P.members[g]]
        if not cand:
            raise ArithmeticError("no p-element extends the current p-subgroup")
        P = P.extend([cand[0]])
    if P.order != target:
        raise ArithmeticError("Sylow search overshot")
    return P


def is_nilpotent(G: _IndexedGroup) -> bool:
    """True iff every Sylow subgroup is normal."""
    for p in prime_factors(G.order):
        if not is_normal(G, sylow(G, p)):
            return False
    return True


def p_complement_candidate(G: _IndexedGroup, p: int) -> Subgroup:
    """The subgroup generated by all elements of order prime to p."""
    orders = G.element_orders
    return subgroup_generated(G, [i for i, o in enumerate(orders.tolist()) if o % p])


def is_p_nilpotent(G: _IndexedGroup, p: int) -> bool:
    return p_complement_candidate(G, p).order % p != 0


class QuotientGroup(_IndexedGroup):
    """G/N as a coset multiplication table; coset 0 is N itself."""

    def __init__(self, G: _IndexedGroup, N: Subgroup):
        if not is_normal(G, N):
            raise NotNormal("quotient by a non-normal subgroup")
        self.parent, self.normal = G, N
        coset_of = np.full(G.order, -1, dtype=np.int64)
        reps: list[int] = []
        for x in range(G.order):
            if coset_of[x] >= 0:
                continue
            members = G.mul(np.full(N.order, x), N.elements)
            coset_of[members] = len(reps)
            reps.append(x)
        self.coset_of = coset_of
        self.cosets = reps
        m = len(reps)
        self.order = m
        if m * N.order != G.order:
            raise ArithmeticError("coset sizes inconsistent")
        r = np.asarray(reps, dtype=np.int64)
        table = np.empty((m, m), dtype=np.int64)
        for i in range(m):
            table[i] = coset_of[G.mul(np.full(m, reps[i]), r)]
        # well-definedness over every element and generator
        x = G.all_indices()
        for g in G.generators:
            if not np.array_equal(coset_of[G.mul(x, g)], table[coset_of[x], coset_of[g]]):
                raise NotNormal("coset multiplication is not well defined")
        self.table = table
        self._table = table
        self.generators = tuple(dict.fromkeys(int(coset_of[g]) for g in G.generators if coset_of[g] != 0))
        self.name = None
        self._inverses = None
        self._orders = None

    def __repr__(self) -> str:
        return f"<QuotientGroup of order {self.order}>"

    def __len__(self) -> int:
        return self.order

    def mul(self, a, b) -> np.ndarray:
        return self.table[a, b]

    def cayley_table(self) -> np.ndarray:
        return self.table

    @property
    def inverses(self) -> np.ndarray:
        if self._inverses is None:
            self._inverses = np.argmax(self.table == 0, axis=1)
        return self._inverses

    @property
    def element_orders(self) -> np.ndarray:
        if self._orders is None:
            self._orders = _orders_from_table(self.table)
        return self._orders


def _orders_from_table(table: np.ndarray) -> np.ndarray:
    n = table.shape[0]
    x = np.arange(n)
    orders = np.zeros(n, dtype=np.int64)
    power = x.copy()
    for k in range(1, n + 1):
        hit = (power == 0) & (orders == 0)
        orders[hit] = k
        if orders.all():
            break
        power = table[power, x]
    return orders


def quotient(G: _IndexedGroup, N: Subgroup) -> QuotientGroup:
    return QuotientGroup(G, N)


# --- isomorphism with a small catalog ------------------------------------------------


def fingerprint(G: _IndexedGroup) -> tuple:
    return (
        G.order,
        G.is_abelian(),
        tuple(sorted(Counter(G.element_orders.tolist()).items())),
        center(G).order,
    )


def small_generating_set(G: _IndexedGroup) -> list[int]:
    """Greedy generating set, preferring elements of large order."""
    orders = G.element_orders
    cand = sorted(range(G.order), key=lambda i: (-int(orders[i]), i))
    members = _one_hot(G.order)
    elements, gens = [0], []
    for c in cand:
        if len(elements) == G.order:
            break
        if not members[c]:
            _grow(G, elements, members, gens, [c])
    return gens


def find_isomorphism(A: _IndexedGroup, B: _IndexedGroup) -> np.ndarray | None:
    """An index map A -> B that is an isomorphism, or None."""
    if fingerprint(A) != fingerprint(B):
        return None
    if A.order == 1:
        return np.zeros(1, dtype=np.int64)
    ta, tb = A.cayley_table(), B.cayley_table()
    oa, ob = A.element_orders, B.element_orders
    gens = small_generating_set(A)
    pools = [np.nonzero(ob == oa[g])[0].tolist() for g in gens]

    def product_order_ok(images: list[int]) -> bool:
        j = len(images) - 1
        for i in range(j):
            if oa[ta[gens[i], gens[j]]] != ob[tb[images[i], images[j]]]:
                return False
            if oa[ta[gens[j], gens[i]]] != ob[tb[images[j], images[i]]]:
                return False
        return True

    def extend(images: list[int]) -> np.ndarray | None:
        phi = np.full(A.order, -1, dtype=np.int64)
        phi[0] = 0
        queue = [0]
        for x in queue:
            for g, img in zip(gens, images):
                y, fy = ta[x, g], tb[phi[x], img]
                if phi[y] < 0:
                    phi[y] = fy
                    queue.append(int(y))
                elif phi[y] != fy:
                    return None
        if len(set(phi.tolist())) != A.order:
            return None
        return phi

    def search(images: list[int]) -> np.ndarray | None:
        if len(images) == len(gens):
            return extend(images)
        for c in pools[len(images)]:
            nxt = images + [c]
            if product_order_ok(nxt):
                found = search(nxt)
                if found is not None:
                    return found
        return None

    return search([])


def is_isomorphic(A: _IndexedGroup, B: _IndexedGroup) -> bool:
    return find_isomorphism(A, B) is not None


def _perm_matrix(perm: Sequence[int]) -> ExactMatrix:
    n = len(perm)
    rows = [[0] * n for _ in range(n)]
    for i, j in enumerate(perm):
        rows[j][i] = 1
    return ExactMatrix(rows)


def _cycle(n: int, points: Sequence[int]) -> list[int]:
    perm = list(range(n))
    for a, b in zip(points, list(points[1:]) + [points[0]]):
        perm[a] = b
    return perm


def q8_generators() -> list[ExactMatrix]:
    """The realified unitary generators x = diag(i, -i), y = [[0, -1], [1, 0]] of Q8."""
    x = realify([[(0, 1), 0], [0, (0, -1)]])
    y = realify([[0, -1], [1, 0]])
    return [x, y]


def _catalog_generators(name: str) -> tuple[str, list[ExactMatrix]]:
    raw = name.strip().replace(" ", "").replace("Σ", "S").replace("×", "x").replace("ℤ", "Z")
    low = raw.lower()
    if low in ("trivial", "1", "e"):
        return "trivial", [ExactMatrix.identity(1)]
    if low in ("z/2xz/2", "z/2^2", "v4", "klein"):
        return "Z/2xZ/2", [ExactMatrix.diag(-1, 1), ExactMatrix.diag(1, -1)]
    if low.startswith("z/") and low[2:].isdigit():
        n = int(low[2:])
        if n < 1:
            raise UnknownCatalogName(name)
        if n == 1:
            return "trivial", [ExactMatrix.identity(1)]
        return f"Z/{n}", [_perm_matrix(_cycle(n, range(n)))]
    if low == "q8":
        return "Q8", q8_generators()
    if low.startswith("sigma") and low[5:].isdigit():
        low = "s" + low[5:]
    if low[0] in "sad" and low[1:].isdigit():
        k = int(low[1:])
        if low[0] == "s" and k >= 1:
            if k == 1:
                return "trivial", [ExactMatrix.identity(1)]
            if k == 2:
                return "S2", [_perm_matrix([1, 0])]
            return f"S{k}", [_perm_matrix(_cycle(k, [0, 1])), _perm_matrix(_cycle(k, range(k)))]
        if low[0] == "a" and k >= 3:
            return f"A{k}", [_perm_matrix(_cycle(k, [i, i + 1, i + 2])) for i in range(k - 2)]
        if low[0] == "d" and k >= 4 and k % 2 == 0:
            m = k // 2
            refl = [(-i) % m for i in range(m)]
            return f"D{k}", [_perm_matrix(_cycle(m, range(m))), _perm_matrix(refl)] if m > 2 else [
                ExactMatrix.diag(-1, 1), ExactMatrix.diag(1, -1)]
    raise UnknownCatalogName(name)


_CATALOG: dict[str, FinGroup] = {}


def catalog_group(name: str) -> FinGroup:
    """Build a named catalog group: trivial, Z/n, Z/2xZ/2, Sn, An, D2m (order 2m), Q8."""
    canonical, gens = _catalog_generators(name)
    if canonical not in _CATALOG:
        _CATALOG[canonical] = close(gens, name=canonical)
    return _CATALOG[canonical]


def iso_to_catalog(G: _IndexedGroup, name: str) -> bool:
    return is_isomorphic(G, catalog_group(name))


def identify(G: _IndexedGroup, candidates: Iterable[str] | None = None) -> str | None:
    """First catalog name isomorphic to G, or None."""
    if candidates is None:
        candidates = _default_candidates(G.order)
    abelian = G.is_abelian()
    for name in candidates:
        canonical = _catalog_generators(name)[0]
        if catalog_order(canonical) != G.order:
            continue
        if canonical.startswith("Z/") and not abelian:
            continue
        if iso_to_catalog(G, canonical):
            return canonical
    return None


def catalog_order(name: str) -> int:
    from math import factorial

    canonical = name if name in ("trivial", "Z/2xZ/2", "Q8") else _catalog_generators(name)[0]
    if canonical == "trivial":
        return 1
    if canonical in ("Z/2xZ/2", "Q8"):
        return 4 if canonical == "Z/2xZ/2" else 8
    head, num = canonical[0], int(canonical.lstrip("ZSAD/"))
    return {"Z": num, "S": factorial(num), "A": factorial(num) // 2, "D": num}[head]


def _default_candidates(order: int) -> list[str]:
    # cyclic and dihedral candidates are permutation matrices of size ~order; keep them small
    names = ["trivial", "Z/2xZ/2"] + ([f"Z/{order}"] if order <= 64 else [])
    names += [f"S{k}" for k in range(3, 7)] + [f"A{k}" for k in range(3, 6)]
    names += ["D8", "Q8"] + ([f"D{order}"] if 4 <= order <= 24 and order % 2 == 0 else [])
    return names


# --- extensions -----------------------------------------------------------------------


def has_complement(G: _IndexedGroup, N: Subgroup, max_order: int = 1000, budget: int = 200_000) -> bool:
    """Whether some H <= G has H n N = 1 and |H||N| = |G|.

    A complement maps isomorphically onto G/N, so it is generated by one lift
    of each generator of G/N, and each lift has the same order as its coset.
    The search enumerates exactly those lift tuples.
    """
    if not is_normal(G, N):
        raise NotNormal("has_complement needs a normal subgroup")
    if N.order == 1 or N.order == G.order:
        return True
    if G.order > max_order:
        raise SearchBudgetExceeded(f"group order {G.order} > {max_order}")
    Q = quotient(G, N)
    m = Q.order
    qgens = small_generating_set(Q)
    if len(qgens) > 3:
        raise SearchBudgetExceeded("quotient needs more than 3 generators")
    g_orders, q_orders = G.element_orders, Q.element_orders
    pools = []
    for q in qgens:
        pool = [int(x) for x in np.nonzero(Q.coset_of == q)[0] if g_orders[x] == q_orders[q]]
        if not pool:
            return False
        pools.append(pool)
    total = 1
    for pool in pools:
        total *= len(pool)
    if total > budget:
        raise SearchBudgetExceeded(f"{total} lift tuples exceed budget {budget}")
    for lifts in itertools.product(*pools):
        H = subgroup_generated(G, lifts)
        if H.order == m and int(np.count_nonzero(H.members & N.members)) == 1:
            return True
    return False


def hom_from_generators(K: _IndexedGroup, images: Sequence[ExactMatrix], target: FinGroup | None = None):
    """Extend generator images to a homomorphism K -> target.

    Returns (target group, index map). Raises NotAHomomorphism when the
    images do not respect the relations of K, checked on every edge of the
    Cayley graph.
    """
    if len(images) != len(K.generators):
        raise NotAHomomorphism("need one image per generator")
    if target is None:
        target = close(images)
    img = [target.index_of(m) for m in images]
    phi = np.full(K.order, -1, dtype=np.int64)
    phi[0] = 0
    queue = [0]
    for x in queue:
        for g, h in zip(K.generators, img):
            y = K.mul1(x, g)
            fy = target.mul1(int(phi[x]), h)
            if phi[y] < 0:
                phi[y] = fy
                queue.append(y)
    if np.any(phi < 0):
        raise NotAHomomorphism("generators do not reach every element")
    x = K.all_indices()
    for g, h in zip(K.generators, img):
        if not np.array_equal(phi[K.mul(x, g)], target.mul(phi, h)):
            raise NotAHomomorphism("generator images violate a relation")
    return target, phi


def kernel_normality_check(K: _IndexedGroup, images: Sequence[ExactMatrix], M: Subgroup | None, nu: Subgroup) -> bool:
    """For q given by generator images and nu normal in K, is nu n ker q normal in ker q?"""
    if not is_normal(K, nu):
        raise NotNormal("nu must be normal in K")
    _, phi = hom_from_generators(K, images)
    ker = Subgroup.from_mask(K, phi == 0)
    if M is not None and M != ker:
        raise ValueError("M is not the kernel of q")
    nu_prime = Subgroup.from_mask(K, nu.members & ker.members)
    return is_normal(ker, nu_prime)


def normal_closure(G: _IndexedGroup, subset: Iterable[int]) -> Subgroup:
    H = subgroup_generated(G, subset)
    while True:
        extra = []
        for g in G.generators:
            gi = G.inv(g)
            for h in H.generators:
                c = G.mul1(G.mul1(g, h), int(gi))
                if not H.members[c]:
                    extra.append(c)
        if not extra:
            return H
        H = H.extend(extra)


def rep_character_norm(G: FinGroup, dim: int | None = None) -> int:
    """Sum of |chi(g)|^2 for a group of realified complex matrices.

    Equals |G| exactly when the complex representation is irreducible.
    """
    n2 = G.dimension
    if n2 % 2 or (dim is not None and 2 * dim != n2):
        raise MalformedRealification(f"dimension {n2} is not twice {dim}")
    n = n2 // 2
    blocks = G.data.reshape(G.order, n, 2, n, 2)
    a, b = blocks[:, :, 0, :, 0], blocks[:, :, 0, :, 1]
    c, d = blocks[:, :, 1, :, 0], blocks[:, :, 1, :, 1]
    if not (np.array_equal(a, d) and np.array_equal(b, -c)):
        raise MalformedRealification("elements are not realified complex matrices")
    idx = np.arange(n)
    re = a[:, idx, idx].sum(axis=1)
    im = c[:, idx, idx].sum(axis=1)
    total = sum(Fraction(int(r) ** 2 + int(i) ** 2, G.scale**2) for r, i in zip(re, im))
    if total.denominator != 1:
        raise ArithmeticError("character norm is not an integer")
    return int(total)
