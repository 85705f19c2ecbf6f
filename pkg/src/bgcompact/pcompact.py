"""Prime sets at which classifying spaces are p-compact, and the finite checks behind them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

from .exactmat import ExactMatrix, det
from .fingroup import (
    FinGroup,
    Subgroup,
    catalog_group,
    hom_from_generators,
    identify,
    is_nilpotent,
    is_normal,
    is_p_nilpotent,
    p_complement_candidate,
    prime_factors,
    quotient,
)
from .reflect import is_reflection_generated
from .weyl import (
    LieType,
    SubsystemSpec,
    dual_group,
    subsystem_subgroup,
    supported_types,
    weyl_group,
)


class NotAdmitted(ValueError):
    pass


class NuNotTwoGroup(ValueError):
    pass


class PsiNotFound(LookupError):
    pass


def is_prime(n: int) -> bool:
    return n >= 2 and prime_factors(n) == [n]


def primes_up_to(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if is_prime(p)]


@dataclass(frozen=True)
class PrimeSpec:
    """A set of primes: all, all except a finite set, all above n, or a finite set.

    Equality is equality of the underlying sets, so ``AllExcept{2,3}`` equals
    ``AllGreaterThan(3)``.
    """

    variant: str
    primes: tuple[int, ...] = ()
    n: int = 0

    def __post_init__(self):
        if self.variant not in ("all", "all_except", "greater_than", "finite"):
            raise ValueError(f"unknown variant {self.variant!r}")
        object.__setattr__(self, "primes", tuple(sorted(set(self.primes))))
        if any(not is_prime(p) for p in self.primes):
            raise ValueError(f"not all prime: {self.primes}")
        if self.variant == "all_except" and not self.primes:
            object.__setattr__(self, "variant", "all")

    @classmethod
    def all(cls) -> "PrimeSpec":
        return cls("all")

    @classmethod
    def all_except(cls, primes: Iterable[int]) -> "PrimeSpec":
        return cls("all_except", tuple(primes))

    @classmethod
    def greater_than(cls, n: int) -> "PrimeSpec":
        return cls("greater_than", n=n)

    @classmethod
    def finite(cls, primes: Iterable[int]) -> "PrimeSpec":
        return cls("finite", tuple(primes))

    def contains(self, p: int) -> bool:
        if self.variant == "all":
            return True
        if self.variant == "all_except":
            return p not in self.primes
        if self.variant == "greater_than":
            return p > self.n
        return p in self.primes

    __contains__ = contains

    def excluded(self) -> tuple[int, ...] | None:
        """Finite complement, or None for a finite set."""
        if self.variant == "all":
            return ()
        if self.variant == "all_except":
            return self.primes
        if self.variant == "greater_than":
            return tuple(primes_up_to(self.n))
        return None

    def normalized(self) -> "PrimeSpec":
        """Canonical form: cofinite sets become ``all``/``all_except``."""
        if self.variant == "greater_than":
            return PrimeSpec.all_except(primes_up_to(self.n))
        return self

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PrimeSpec):
            return NotImplemented
        return (self.excluded(), self.primes if self.variant == "finite" else None) == (
            other.excluded(),
            other.primes if other.variant == "finite" else None,
        )

    def __hash__(self) -> int:
        return hash(self.excluded())

    def to_json(self) -> dict:
        if self.variant == "all":
            return {"variant": "all"}
        if self.variant == "greater_than":
            return {"variant": "greater_than", "n": self.n}
        return {"variant": self.variant, "primes": list(self.primes)}

    @classmethod
    def from_json(cls, data: dict) -> "PrimeSpec":
        v = data["variant"]
        if v == "greater_than":
            return cls.greater_than(int(data["n"]))
        return cls(v, tuple(data.get("primes", ())))

    def label(self) -> str:
        if self.variant == "all":
            return "all"
        if self.variant == "all_except":
            return "all - {" + ",".join(map(str, self.primes)) + "}"
        if self.variant == "greater_than":
            return f">{self.n}"
        return "{" + ",".join(map(str, self.primes)) + "}"

    def __str__(self) -> str:
        return self.label()


def _w_order(t) -> int:
    return weyl_group(t).order


def prime_set_nt(t) -> PrimeSpec:
    """Primes for the normalizer of a maximal torus: all if |W| is a 2-power, else p not dividing |W|."""
    t = t if isinstance(t, LieType) else LieType.parse(str(t))
    order = _w_order(t)
    factors = prime_factors(order)
    if factors in ([], [2]):
        return PrimeSpec.all()
    return PrimeSpec.all_except(factors)


def prime_set_finite(G) -> PrimeSpec:
    """Primes p at which the finite group G is p-nilpotent (p not dividing |G| always qualifies)."""
    bad = [p for p in prime_factors(G.order) if not is_p_nilpotent(G, p)]
    spec = PrimeSpec.all_except(bad)
    if bad and bad == primes_up_to(max(bad)):
        # cross-check the "p > n" description on small primes
        alt = PrimeSpec.greater_than(max(bad))
        assert all(spec.contains(p) == alt.contains(p) for p in primes_up_to(2 * max(bad) + 3))
    return spec


@dataclass
class ToralDesc:
    """Torus of rank ``torus_rank`` extended by a finite group ``pi0`` acting through ``action``.

    ``action`` lists integer matrices, one per generator of ``pi0``.
    """

    torus_rank: int
    pi0: FinGroup
    action: list[ExactMatrix]
    _phi: np.ndarray = field(init=False, repr=False)
    _image: FinGroup = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.action) != len(self.pi0.generators):
            raise ValueError("one action matrix per generator of pi0")
        for m in self.action:
            if m.shape != (self.torus_rank, self.torus_rank) or not m.is_integral() or abs(det(m)) != 1:
                raise ValueError("action images must be invertible integer matrices of torus rank")
        if not self.action:
            self.action = []
            self._image = None
            self._phi = np.zeros(self.pi0.order, dtype=np.int64)
            return
        self._image, self._phi = hom_from_generators(self.pi0, self.action)

    @classmethod
    def normalizer_of_torus(cls, t) -> "ToralDesc":
        W = weyl_group(t)
        return cls(W.dimension, W, W.generator_matrices())

    def acts_trivially(self, elements: Iterable[int] | None = None) -> bool:
        phi = self._phi if elements is None else self._phi[np.asarray(list(elements), dtype=np.int64)]
        return bool(np.all(phi == 0))

    def to_json(self) -> dict:
        return {
            "torus_rank": self.torus_rank,
            "pi0": {"generators": [m.to_json() for m in self.pi0.generator_matrices()]},
            "action": [m.to_json() for m in self.action],
        }


def is_pi_compact_toral(d: ToralDesc) -> bool:
    """All-primes toral criterion: pi0 nilpotent and the torus central."""
    return is_nilpotent(d.pi0) and d.acts_trivially()


def is_p_compact_toral(d: ToralDesc, p: int) -> bool:
    """Henn's criterion: pi0 p-nilpotent and its normal p-complement acts trivially."""
    if not is_p_nilpotent(d.pi0, p):
        return False
    return d.acts_trivially(p_complement_candidate(d.pi0, p).elements)


def toral_primes(d: ToralDesc) -> PrimeSpec:
    """The set of primes at which the descriptor is p-compact toral."""
    divisors = prime_factors(d.pi0.order)
    if d.acts_trivially():
        return PrimeSpec.all_except(p for p in divisors if not is_p_compact_toral(d, p))
    return PrimeSpec.finite(p for p in divisors if is_p_compact_toral(d, p))


@dataclass(frozen=True)
class PairVerdict:
    ambient: LieType
    sub: SubsystemSpec
    normal: bool
    proper: bool
    quotient_order: int
    quotient_catalog: str
    quotient_nilpotent: bool
    admitted: bool

    @property
    def label(self) -> str:
        return f"({self.ambient}, {self.sub.label})"

    def to_json(self) -> dict:
        return {
            "ambient": str(self.ambient),
            "sub": self.sub.label,
            "normal": self.normal,
            "proper": self.proper,
            "quotient_order": self.quotient_order,
            "quotient_catalog": self.quotient_catalog,
            "quotient_nilpotent": self.quotient_nilpotent,
            "admitted": self.admitted,
        }


def catalog_subsystems(ambient: LieType) -> list[SubsystemSpec]:
    f, n = ambient.family, ambient.rank
    specs = []
    # B2 = C2: the torus case is listed once, under B2
    if not (f == "C" and n == 2):
        specs.append(SubsystemSpec("T_in_G"))
    if f == "B" and n >= 2:
        specs.append(SubsystemSpec("D_in_B", n))
    elif f == "C":
        specs.append(SubsystemSpec("A1n_in_C", n))
    elif f == "G":
        specs.append(SubsystemSpec("A2_in_G2"))
    elif f == "F":
        specs.append(SubsystemSpec("D4_in_F4"))
    return specs


def simple_ambients(max_classical_rank: int) -> list[LieType]:
    """Simple types up to the rank bound, one per isomorphism class of Lie algebra."""
    out = []
    for t in supported_types(max_classical_rank):
        f, n = t.family, t.rank
        if (f == "B" and n < 2) or (f == "C" and n < 2) or (f == "D" and n < 4):
            continue
        out.append(t)
    return sorted(out, key=lambda t: t.sort_key)


@lru_cache(maxsize=None)
def pair_verdict(ambient: LieType, spec: SubsystemSpec) -> PairVerdict:
    W = weyl_group(ambient)
    H = subsystem_subgroup(ambient, spec)
    normal = is_normal(W, H)
    proper = H.order < W.order
    if normal:
        Q = quotient(W, H)
        q_order = Q.order
        q_nil = is_nilpotent(Q)
        q_name = identify(Q) if Q.order <= 720 else None
    else:
        q_order, q_nil, q_name = W.order // H.order, False, None
    if spec.kind == "T_in_G":
        admitted = q_nil
    else:
        admitted = normal and proper and q_nil
    return PairVerdict(ambient, spec, normal, proper, q_order, q_name or "unknown", q_nil, admitted)


def classify_pairs(max_classical_rank: int = 4) -> list[PairVerdict]:
    """Every catalog pair (G, H0) with its normality / quotient / nilpotence verdict."""
    if max_classical_rank > 6:
        raise ValueError("classical rank bound is 6")
    return [pair_verdict(t, s) for t in simple_ambients(max_classical_rank) for s in catalog_subsystems(t)]


@dataclass(frozen=True)
class PairRealization:
    prime_set: PrimeSpec
    two_realizable: bool
    component_group_order: int

    def realizable_at(self, p: int) -> bool:
        return p != 2 or self.two_realizable

    def to_json(self) -> dict:
        return {
            "prime_set": self.prime_set.to_json(),
            "two_realizable": self.two_realizable,
            "component_group_order": self.component_group_order,
        }


def prime_set_pair(v: PairVerdict, p0: int = 3) -> PairRealization:
    """Prime set of the realizing models, and the obstruction at p = 2.

    At 2 the component group |W(G)/W(H0)| is a nontrivial 2-group, so a
    2-equivalence BH -> BG would force it to be trivial.
    """
    if not v.admitted:
        raise NotAdmitted(f"{v.label} is not admitted")
    if not is_prime(p0):
        raise ValueError(f"{p0} is not prime")
    if prime_factors(v.quotient_order) != [2]:
        raise ArithmeticError(f"{v.label}: component group order {v.quotient_order} is not a 2-power")
    return PairRealization(PrimeSpec.all(), False, v.quotient_order)


def prime_set_quotient(v: PairVerdict, nu_order_factors: Iterable[int]) -> PrimeSpec:
    """Prime set of H/nu for a finite normal subgroup nu given by its prime divisors."""
    if not v.admitted:
        raise NotAdmitted(f"{v.label} is not admitted")
    nu = set(nu_order_factors)
    if v.sub.kind == "A2_in_G2":
        if not nu:
            return PrimeSpec.all()
        if nu == {3}:
            return PrimeSpec.all_except([3])
        raise ValueError(f"no finite normal subgroup with prime divisors {sorted(nu)} handled for (G2, A2)")
    if not nu <= {2}:
        raise NuNotTwoGroup(f"{v.label}: nu must be a 2-group, got primes {sorted(nu)}")
    return PrimeSpec.all()


@dataclass(frozen=True)
class WreathVerdict:
    n: int
    prime_set: PrimeSpec
    witnesses: dict

    def to_json(self) -> dict:
        return {"n": self.n, "prime_set": self.prime_set.to_json(), "witnesses": dict(self.witnesses)}


def prime_set_wreath(n: int) -> WreathVerdict:
    """Prime set for Sp(1) wr Sigma_n.

    Odd primes p <= n are excluded because Sigma_n is not p-nilpotent there.
    For n = 3 the prime 2 is excluded by the cyclic Z/3 on Q^3 failing to be a
    reflection group; for n >= 4, Sigma_n is not 2-nilpotent either.
    """
    if n < 1:
        raise ValueError("n >= 1")
    if n <= 2:
        return WreathVerdict(n, PrimeSpec.all(), {})
    sym = catalog_group(f"S{n}")
    not_nilpotent = [p for p in primes_up_to(n) if not is_p_nilpotent(sym, p)]
    witnesses: dict = {f"nilpotent{p}": is_p_nilpotent(sym, p) for p in primes_up_to(n)}
    excluded = set(not_nilpotent)
    if n == 3:
        refl = is_reflection_generated(catalog_group("Z/3"))
        witnesses["reflection"] = refl
        if not refl:
            excluded.add(2)
    derived = PrimeSpec.all_except(excluded)
    claimed = PrimeSpec.greater_than(n)
    if derived != claimed:
        raise ArithmeticError(f"wreath n={n}: derived {derived} differs from >{n}")
    return WreathVerdict(n, claimed, witnesses)


def central_ext_transfer(inner: PrimeSpec) -> PrimeSpec:
    """Prime sets are unchanged by central extensions."""
    return inner


def divisibility_check(amb, spec: SubsystemSpec, pi0_order: int) -> bool:
    """Every prime dividing |pi0 H| must divide |W(G)/W(H0)|."""
    W = weyl_group(amb)
    index = W.order // subsystem_subgroup(amb, spec).order
    return all(index % p == 0 for p in prime_factors(pi0_order))


def _det_pm1_matrices(bound: int):
    rng = range(-bound, bound + 1)
    for a, b, c, d in itertools.product(rng, repeat=4):
        if a * d - b * c in (1, -1):
            yield a, b, c, d


def conjugates_to_dual(G: FinGroup, psi: ExactMatrix) -> bool:
    """Set equality {psi g psi^-1} == {g^-T}, element by element."""
    inv = psi.inverse()
    conj = {(psi @ g @ inv).key() for g in G.elements}
    dual = {g.inverse().transpose().key() for g in G.elements}
    return conj == dual


def psi_search(t="G2", bound: int = 3, group: FinGroup | None = None) -> ExactMatrix:
    """First integer psi (lexicographic, entries in [-bound, bound], det +-1) with psi W psi^-1 = W*."""
    G = group if group is not None else weyl_group(t)
    if G.dimension != 2:
        raise ValueError("psi search is for rank-2 groups")
    D = dual_group(G)
    gens = G.data[list(G.generators)]
    for a, b, c, d in _det_pm1_matrices(bound):
        psi = np.array([[a, b], [c, d]], dtype=np.int64)
        dt = a * d - b * c
        inv = dt * np.array([[d, -b], [-c, a]], dtype=np.int64)
        conj = np.matmul(np.matmul(psi, gens), inv)
        if all(_key_in(D, m) for m in conj):
            found = ExactMatrix([[a, b], [c, d]])
            if not conjugates_to_dual(G, found):
                raise AssertionError("generator check passed but set equality failed")
            return found
    raise PsiNotFound(f"no psi with entries bounded by {bound}")


def _key_in(G: FinGroup, m: np.ndarray) -> bool:
    return m.astype(G.data.dtype).tobytes() in G.index


def intertwiner_mod_p(G: FinGroup, H: FinGroup, p: int) -> ExactMatrix | None:
    """Some S in GL(n, F_p) with S g S^-1 = h (mod p) for each paired element, or None.

    G and H must list corresponding elements at the same index.
    """
    if G.order != H.order or G.dimension != H.dimension or G.scale != 1 or H.scale != 1:
        raise ValueError("groups must be integral with aligned elements")
    n = G.dimension
    g = G.data.astype(np.int64) % p
    h = H.data.astype(np.int64) % p
    for entries in itertools.product(range(p), repeat=n * n):
        S = np.array(entries, dtype=np.int64).reshape(n, n)
        if _det_mod(S, p) == 0:
            continue
        # S g = h S  (mod p) is equivalent to S g S^-1 = h for invertible S
        if np.all((np.matmul(S, g) - np.matmul(h, S)) % p == 0):
            return ExactMatrix(S.tolist())
    return None


def _det_mod(S: np.ndarray, p: int) -> int:
    return int(det(ExactMatrix(S.tolist()))) % p


def mod3_intertwiner_absent(t="G2") -> bool:
    """True when the mod-3 reductions of W and its dual admit no pointwise intertwiner."""
    G = weyl_group(t)
    return intertwiner_mod_p(G, dual_group(G), 3) is None


# --- descriptors ----------------------------------------------------------------------


@dataclass(frozen=True)
class NT:
    type: LieType


@dataclass(frozen=True)
class Pair:
    ambient: LieType
    sub: SubsystemSpec


@dataclass(frozen=True)
class WreathSp1:
    n: int


@dataclass(frozen=True)
class CentralExt:
    inner: "LieDesc"


LieDesc = Union[ToralDesc, NT, Pair, WreathSp1, CentralExt]


def prime_set(desc: LieDesc) -> PrimeSpec:
    """Evaluate the prime set of a descriptor.

    Toral descriptors have no closed form here: being p-compact is weaker than
    being p-compact toral.  Use :func:`toral_primes` for those.
    """
    if isinstance(desc, NT):
        return prime_set_nt(desc.type)
    if isinstance(desc, Pair):
        return prime_set_pair(pair_verdict(desc.ambient, desc.sub)).prime_set
    if isinstance(desc, WreathSp1):
        return prime_set_wreath(desc.n).prime_set
    if isinstance(desc, CentralExt):
        return central_ext_transfer(prime_set(desc.inner))
    if isinstance(desc, ToralDesc):
        raise TypeError("toral descriptors: use toral_primes()")
    raise TypeError(f"unknown descriptor {desc!r}")
