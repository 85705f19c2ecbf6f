import pytest

from bgcompact.exactmat import ExactMatrix
from bgcompact.fingroup import catalog_group, close
from bgcompact.pcompact import (
    NT,
    CentralExt,
    NotAdmitted,
    NuNotTwoGroup,
    Pair,
    PrimeSpec,
    PsiNotFound,
    ToralDesc,
    WreathSp1,
    catalog_subsystems,
    central_ext_transfer,
    classify_pairs,
    conjugates_to_dual,
    divisibility_check,
    intertwiner_mod_p,
    is_p_compact_toral,
    is_pi_compact_toral,
    mod3_intertwiner_absent,
    pair_verdict,
    prime_set,
    prime_set_finite,
    prime_set_nt,
    prime_set_pair,
    prime_set_quotient,
    prime_set_wreath,
    primes_up_to,
    psi_search,
    toral_primes,
)
from bgcompact.weyl import LieType, SubsystemSpec, parse_pair, supported_types, weyl_group

PRIMES_100 = primes_up_to(100)


def verdict(text):
    return pair_verdict(*parse_pair(text))


# --- PrimeSpec ---------------------------------------------------------------------


def test_primespec_normalization():
    assert PrimeSpec.all_except([]) == PrimeSpec.all()
    assert PrimeSpec.all_except([3, 2]).primes == (2, 3)
    assert PrimeSpec.greater_than(4) == PrimeSpec.all_except([2, 3])
    assert PrimeSpec.greater_than(4).normalized().variant == "all_except"
    assert PrimeSpec.greater_than(1) == PrimeSpec.all()


@pytest.mark.parametrize("n", range(1, 12))
def test_greater_than_agrees_with_all_except(n):
    a = PrimeSpec.greater_than(n)
    b = PrimeSpec.all_except(p for p in PRIMES_100 if p <= n)
    assert [a.contains(p) for p in PRIMES_100] == [b.contains(p) for p in PRIMES_100]


@pytest.mark.parametrize(
    "spec",
    [PrimeSpec.all(), PrimeSpec.all_except([2, 3]), PrimeSpec.greater_than(3), PrimeSpec.finite([2, 5])],
)
def test_primespec_json_round_trip(spec):
    assert PrimeSpec.from_json(spec.to_json()) == spec


def test_primespec_json_shape():
    assert PrimeSpec.all().to_json() == {"variant": "all"}
    assert PrimeSpec.all_except([2, 3]).to_json() == {"variant": "all_except", "primes": [2, 3]}
    assert PrimeSpec.greater_than(3).to_json() == {"variant": "greater_than", "n": 3}
    assert PrimeSpec.finite([5]).to_json() == {"variant": "finite", "primes": [5]}


# --- prime sets --------------------------------------------------------------------


def test_nt_examples():
    assert prime_set_nt("A1") == PrimeSpec.all()
    assert prime_set_nt("B2") == PrimeSpec.all()
    assert prime_set_nt("F4") == PrimeSpec.all_except([2, 3])


@pytest.mark.parametrize("t", supported_types(), ids=str)
def test_nt_excludes_odd_divisors(t):
    spec = prime_set_nt(t)
    order = weyl_group(t).order
    for p in primes_up_to(13):
        if p % 2 and order % p == 0:
            assert not spec.contains(p)


def test_finite_examples():
    assert prime_set_finite(catalog_group("S2")) == PrimeSpec.all()
    assert prime_set_finite(catalog_group("S3")) == PrimeSpec.all_except([3])
    s4 = prime_set_finite(catalog_group("S4"))
    assert s4.to_json() == {"variant": "all_except", "primes": [2, 3]}
    assert s4 == PrimeSpec.greater_than(4)
    assert all(s4.contains(p) == (p > 4) for p in PRIMES_100)


@pytest.mark.parametrize("name", ["Q8", "D8", "Z/6", "Z/2xZ/2"])
def test_nilpotent_groups_all_primes(name):
    assert prime_set_finite(catalog_group(name)) == PrimeSpec.all()


# --- toral descriptors -------------------------------------------------------------


def test_toral_examples():
    assert is_pi_compact_toral(ToralDesc(1, close([ExactMatrix.identity(1)]), []))
    V4 = catalog_group("Z/2xZ/2")
    assert is_pi_compact_toral(ToralDesc(1, V4, [ExactMatrix.identity(1)] * len(V4.generators)))
    assert not is_pi_compact_toral(ToralDesc.normalizer_of_torus("B2"))


def test_p_compact_toral_examples():
    Z3 = catalog_group("Z/3")
    trivial = ToralDesc(2, Z3, [ExactMatrix.identity(2)])
    assert is_p_compact_toral(trivial, 5)
    nt_a1 = ToralDesc(1, catalog_group("S2"), [ExactMatrix([[-1]])])
    assert is_p_compact_toral(nt_a1, 2)
    assert not is_p_compact_toral(nt_a1, 3)
    S3 = catalog_group("S3")
    sign = ToralDesc(1, S3, [ExactMatrix([[-1]]), ExactMatrix([[1]])])
    assert not is_p_compact_toral(sign, 3)
    assert toral_primes(nt_a1) == PrimeSpec.finite([2])


def test_toral_bad_action():
    with pytest.raises(ValueError):
        ToralDesc(1, catalog_group("S2"), [ExactMatrix([[2]])])


def test_toral_json():
    d = ToralDesc.normalizer_of_torus("A1")
    assert d.to_json()["torus_rank"] == 1


# --- pairs -------------------------------------------------------------------------


ADMITTED = {("A1", "T"), ("B2", "T"), ("B2", "D2"), ("B3", "D3"), ("B4", "D4"), ("C2", "A1^2"), ("G2", "A2")}


def test_classify_admitted_set():
    rows = classify_pairs(4)
    admitted = {(str(v.ambient), v.sub.label) for v in rows if v.admitted}
    assert admitted == ADMITTED
    for v in rows:
        if v.admitted:
            assert v.normal and v.quotient_nilpotent


def test_classify_rejections():
    f4 = verdict("D4<F4")
    assert f4.normal and f4.quotient_catalog == "S3" and not f4.quotient_nilpotent and not f4.admitted
    assert verdict("A1^3<C3").quotient_catalog == "S3"
    assert verdict("A1^4<C4").quotient_catalog == "S4"
    g2 = verdict("A2<G2")
    assert g2.admitted and g2.quotient_catalog == "Z/2"


def test_classify_canonical_order():
    rows = classify_pairs(4)
    keys = [v.ambient.sort_key for v in rows]
    assert keys == sorted(keys)


def test_b_c_relabeling_stable():
    b = pair_verdict(LieType("B", 2), SubsystemSpec("D_in_B", 2))
    c = pair_verdict(LieType("C", 2), SubsystemSpec("A1n_in_C", 2))
    assert (b.normal, b.quotient_order) == (c.normal, c.quotient_order)


def test_order_equation():
    for v in classify_pairs(4):
        W = weyl_group(v.ambient)
        assert W.order % v.quotient_order == 0


def test_catalog_subsystems_skip_duplicate_torus():
    assert all(s.kind != "T_in_G" for s in catalog_subsystems(LieType("C", 2)))


def test_pair_realization():
    for text in ("D<B3", "A1^2<C2", "T<A1"):
        r = prime_set_pair(verdict(text))
        assert r.prime_set == PrimeSpec.all() and r.two_realizable is False
    with pytest.raises(NotAdmitted):
        prime_set_pair(verdict("D4<F4"))


def test_quotient_rule():
    assert prime_set_quotient(verdict("D<B3"), [2]) == PrimeSpec.all()
    assert prime_set_quotient(verdict("A2<G2"), [3]) == PrimeSpec.all_except([3])
    assert prime_set_quotient(verdict("A1^2<C2"), []) == PrimeSpec.all()
    with pytest.raises(NuNotTwoGroup):
        prime_set_quotient(verdict("D<B3"), [3])


def test_wreath():
    expected = [PrimeSpec.all(), PrimeSpec.all(), PrimeSpec.greater_than(3), PrimeSpec.greater_than(4)]
    got = [prime_set_wreath(n) for n in range(1, 5)]
    assert [w.prime_set for w in got] == expected
    assert got[2].prime_set.variant == "greater_than"
    assert got[2].witnesses["reflection"] is False
    assert got[2].witnesses["nilpotent3"] is False


@pytest.mark.parametrize("spec", [PrimeSpec.all(), PrimeSpec.all_except([3]), PrimeSpec.greater_than(3)])
def test_central_ext_identity(spec):
    assert central_ext_transfer(spec) == spec


def test_divisibility():
    B3, D3 = LieType("B", 3), SubsystemSpec("D_in_B", 3)
    assert divisibility_check(B3, D3, 1)
    assert divisibility_check(B3, D3, 2)
    assert not divisibility_check(B3, D3, 3)
    for v in classify_pairs(4):
        if v.admitted:
            assert divisibility_check(v.ambient, v.sub, v.quotient_order)
            assert not divisibility_check(v.ambient, v.sub, 3 * v.quotient_order)


def test_descriptor_dispatch():
    assert prime_set(NT(LieType("G", 2))) == PrimeSpec.all_except([2, 3])
    assert prime_set(Pair(*parse_pair("A2<G2"))) == PrimeSpec.all()
    assert prime_set(WreathSp1(3)) == PrimeSpec.greater_than(3)
    assert prime_set(CentralExt(WreathSp1(2))) == PrimeSpec.all()
    with pytest.raises(TypeError):
        prime_set(ToralDesc.normalizer_of_torus("A1"))


# --- psi ---------------------------------------------------------------------------


def test_psi_g2_regression():
    psi = psi_search("G2", 3)
    assert psi == ExactMatrix([[-1, 1], [1, 0]])
    assert conjugates_to_dual(weyl_group("G2"), psi)


def test_psi_self_dual():
    W = weyl_group("D2")  # A1 x A1 acting diagonally
    assert conjugates_to_dual(W, psi_search(group=W, bound=1))
    assert conjugates_to_dual(W, ExactMatrix.identity(2))
    assert conjugates_to_dual(weyl_group("B2"), psi_search("B2", 2))


def test_psi_not_found():
    with pytest.raises(PsiNotFound):
        psi_search("G2", 0)


def test_mod3():
    assert mod3_intertwiner_absent("G2")
    assert not mod3_intertwiner_absent("D2")
    W = weyl_group("G2")
    assert intertwiner_mod_p(W, W, 3) is not None
