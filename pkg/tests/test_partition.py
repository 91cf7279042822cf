import math
import random
from collections import Counter
from itertools import combinations_with_replacement, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from support import Exhausted, ReplayRng

from rootsplit.field import Modulus
from rootsplit.partition import (
    AllZeroCoefficients,
    CoefficientSet,
    DuplicateIndex,
    InvalidK,
    MixedGroups,
    RootShare,
    TooLarge,
    WrongShareCount,
    ZeroDatum,
    brute_force_root_multiset_count,
    coefficient_space_lower_bound,
    combine_k,
    evaluate,
    expand_coefficients,
    recover_from_root_and_coeffs,
    split_k,
    verify_share,
)

P31 = Modulus.prime(31)
P7 = Modulus.prime(7)
GID = bytes(16)


def p31_d10():
    return split_k(10, 3, P31, fixed_roots=(19, 22), group_id=GID)


def test_p31_d10_split():
    assert [s.value for s in p31_d10()] == [19, 22, 11]


def test_unit_prefix_splits():
    assert [s.value for s in split_k(1, 2, P31, fixed_roots=(1,))] == [1, 1]
    assert [s.value for s in split_k(10, 3, P31, fixed_roots=(1, 1))] == [1, 1, 10]


def test_p31_d10_combine():
    assert combine_k(p31_d10()) == 10


def test_p31_d10_expansion():
    c = expand_coefficients(p31_d10())
    # x^3 - 21x^2 + x - 10
    assert c.a == (1, -21 % 31)
    assert c.constant_term == -10 % 31 == 21
    assert c.as_list() == [21, 1, 10, 1]


def test_repeated_root_expansion():
    roots = split_k(1, 2, P31, fixed_roots=(1,))
    c = expand_coefficients(roots)
    assert c.a == (29,)
    assert c.constant_term == 1


@pytest.mark.parametrize("index", [0, 1, 2])
def test_p31_d10_recover_from_any_root(index):
    shares = p31_d10()
    assert recover_from_root_and_coeffs(shares[index], expand_coefficients(shares)) == 10


def test_verify_share():
    shares = p31_d10()
    c = expand_coefficients(shares)
    assert verify_share(shares[0], c)
    assert (20**3 - 21 * 20**2 + 20 - 10) % 31 != 0
    assert not verify_share(RootShare(GID, 1, 3, 20, P31), c)


def test_split_errors(rng):
    with pytest.raises(InvalidK):
        split_k(10, 1, P31, rng)
    with pytest.raises(InvalidK):
        split_k(10, 31, P31, rng)
    with pytest.raises(ZeroDatum):
        split_k(0, 3, P31, rng)
    with pytest.raises(ValueError):
        split_k(31 + 5, 3, P31, rng)


def test_root_share_rejects_zero_and_k1():
    with pytest.raises(ValueError):
        RootShare(GID, 1, 3, 0, P31)
    with pytest.raises(InvalidK):
        RootShare(GID, 1, 1, 5, P31)


def test_combine_errors(rng):
    shares = split_k(5, 3, P31, rng)
    with pytest.raises(WrongShareCount):
        combine_k(shares[:2])
    with pytest.raises(DuplicateIndex):
        combine_k([shares[0], shares[0], shares[2]])
    other = split_k(5, 3, P31, rng)
    with pytest.raises(MixedGroups):
        combine_k([shares[0], shares[1], other[2]])
    with pytest.raises(WrongShareCount):
        combine_k([])


def test_all_zero_coefficients_rejected():
    # (x - 1)(x + 1) = x^2 - 1 over Z_31: middle coefficient vanishes
    with pytest.raises(AllZeroCoefficients):
        expand_coefficients(split_k(30, 2, P31, fixed_roots=(1,)))


def test_reject_degenerate_retries():
    rng = random.Random(3)
    for _ in range(300):
        shares = split_k(30, 2, P31, rng, reject_degenerate=True)
        expand_coefficients(shares)


def test_reject_degenerate_gives_up_when_forced():
    with pytest.raises(AllZeroCoefficients):
        split_k(30, 2, P31, fixed_roots=(1,), reject_degenerate=True)


def test_coefficient_set_validation():
    with pytest.raises(ValueError):
        CoefficientSet(3, (1,), 2, P31)
    with pytest.raises(ValueError):
        CoefficientSet(2, (31,), 2, P31)


def test_bound_values():
    assert coefficient_space_lower_bound(31, 3) == (481, 496)
    assert math.comb(32, 2) == 496 and -(-961 // 2) == 481
    assert coefficient_space_lower_bound(7, 2) == (7, 7)
    assert coefficient_space_lower_bound(5, 3)[1] == 15


def test_bound_big_integers():
    p = 2**255 - 19
    lower, count = coefficient_space_lower_bound(p, 6)
    assert lower == -(-(p**5) // 120)
    assert count == (p + 4) * (p + 3) * (p + 2) * (p + 1) * p // 120


def test_brute_force_small_cases():
    r = brute_force_root_multiset_count(7, 2, 1)
    assert r.tuples == 6
    assert r.coefficient_sets == r.root_multisets
    assert brute_force_root_multiset_count(7, 3, 1).coefficient_sets <= math.comb(8, 2)
    with pytest.raises(TooLarge):
        brute_force_root_multiset_count(17, 2, 1)


def _k_multisets_with_product(p, k, d):
    return sum(1 for c in combinations_with_replacement(range(1, p), k) if math.prod(c) % p == d)


@pytest.mark.parametrize("p", [5, 7, 11, 13])
@pytest.mark.parametrize("k", [2, 3, 4])
def test_brute_force_matches_direct_multiset_enumeration(p, k):
    if k >= p:
        pytest.skip("k must be below p")
    for d in range(1, p):
        r = brute_force_root_multiset_count(p, k, d)
        assert r.tuples == (p - 1) ** (k - 1)
        assert r.root_multisets == r.coefficient_sets == _k_multisets_with_product(p, k, d)
        assert r.free_root_multisets == math.comb(p + k - 3, k - 1)


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_brute_force_k2_closed_form(p):
    for d in range(1, p):
        square_roots = sum(1 for x in range(1, p) if x * x % p == d)
        assert brute_force_root_multiset_count(p, 2, d).coefficient_sets == (p - 1 + square_roots) // 2


def _first_shares_table(d, k, p, **kw):
    """Exact distribution of the first k-1 shares over every accepted draw."""
    modulus = Modulus.prime(p)
    bits = (p - 2).bit_length()
    table = Counter()
    for words in product(range(1 << bits), repeat=k - 1):
        try:
            shares = split_k(d, k, modulus, ReplayRng(words), group_id=GID, **kw)
        except Exhausted:
            continue
        assert math.prod(s.value for s in shares) % p == d
        table[tuple(s.value for s in shares[:-1])] += 1
    return table


def test_degenerate_rejection_conditions_on_datum():
    # The opt-in retry leaks: for d = -r^2 the roots r and -r never appear first.
    tables = {d: _first_shares_table(d, 2, 7, reject_degenerate=True) for d in range(1, 7)}
    assert len({tuple(sorted(t.items())) for t in tables.values()}) > 1
    assert set(tables[6]) == {(2,), (3,), (4,), (5,)}


@settings(max_examples=200)
@given(st.integers(min_value=1, max_value=30), st.integers(min_value=2, max_value=6), st.randoms(use_true_random=False))
def test_round_trip_property(d, k, r):
    shares = split_k(d, k, P31, r)
    assert combine_k(shares) == d
    assert math.prod(s.value for s in shares) % 31 == d
    assert all(1 <= s.value <= 30 for s in shares)


@settings(max_examples=200)
@given(st.integers(min_value=1, max_value=30), st.integers(min_value=2, max_value=6), st.integers(0, 2**32))
def test_expansion_and_cross_path(d, k, seed):
    # a real PRNG: shrunk hypothesis randoms can repeat one degenerate draw past the retry limit
    shares = split_k(d, k, P31, random.Random(seed), reject_degenerate=True)
    c = expand_coefficients(shares)
    assert all(evaluate(c.as_list(), s.value, 31) == 0 for s in shares)
    assert all(verify_share(s, c) for s in shares)
    assert all(recover_from_root_and_coeffs(s, c) == combine_k(shares) for s in shares)


def test_recover_ignores_stored_constant_term():
    shares = p31_d10()
    c = expand_coefficients(shares)
    tampered = CoefficientSet(c.k, c.a, 0, c.modulus)
    assert recover_from_root_and_coeffs(shares[1], tampered) == 10


def test_round_trip_large_prime():
    p = Modulus.prime(2**255 - 19)
    rng = random.Random(99)
    for k in range(2, 7):
        for _ in range(50):
            d = rng.randrange(1, p.value)
            shares = split_k(d, k, p, rng)
            assert combine_k(shares) == d
            c = expand_coefficients(shares)
            assert recover_from_root_and_coeffs(shares[-1], c) == d
