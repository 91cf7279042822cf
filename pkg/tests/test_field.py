import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st
from support import CHI2_999, chi_square

from rootsplit.field import (
    FieldElement,
    Modulus,
    ModulusMismatch,
    NotInvertible,
    is_probable_prime,
    mod_add,
    mod_inv,
    mod_mul,
    mod_pow,
    sample_uniform,
)

P31 = Modulus.prime(31)
P65537 = Modulus.prime(65537)
N15 = Modulus.composite(15)
P25519 = Modulus.prime(2**255 - 19)


def test_add():
    assert mod_add(P31(30), P31(2)) == P31(1)
    assert mod_add(P31(0), P31(17)) == P31(17)
    assert mod_add(P31(19), P31(22)).value == 10


def test_mul():
    assert mod_mul(P31(19), P31(22)).value == 418 - 13 * 31 == 15
    assert mod_mul(P31(1), P31(23)).value == 23
    assert mod_mul(P31(15), P31(11)).value == 10


def test_inverse():
    assert mod_inv(P31(15)).value == 29
    assert 15 * 29 == 14 * 31 + 1
    assert mod_inv(P31(1)).value == 1


def test_inverse_on_composite_reports_factor():
    with pytest.raises(NotInvertible) as exc:
        mod_inv(N15(6))
    assert exc.value.gcd == 3


def test_zero_not_invertible():
    with pytest.raises(NotInvertible):
        mod_inv(P31(0))


def test_pow():
    assert mod_pow(P31(2), 5).value == 1
    assert mod_pow(P31(7), 0).value == 1
    assert mod_pow(P31(7), 1).value == 7


def test_modulus_mismatch():
    with pytest.raises(ModulusMismatch):
        mod_add(P31(1), P65537(1))


def test_modulus_validation():
    with pytest.raises(ValueError):
        Modulus.prime(33)
    with pytest.raises(ValueError):
        Modulus.composite(31)
    with pytest.raises(ValueError):
        Modulus.prime(2)
    with pytest.raises(ValueError):
        FieldElement(31, P31)


def test_operators():
    a, b = P31(19), P31(22)
    assert (a * b).value == 15
    assert (a + b).value == 10
    assert (a**2).value == 361 % 31
    assert (a * a.inverse()).value == 1


def _trial_division(v):
    return v >= 2 and all(v % d for d in range(2, math.isqrt(v) + 1))


def test_primality_matches_trial_division():
    assert all(is_probable_prime(v) == _trial_division(v) for v in range(2, 5000))


@pytest.mark.parametrize("v", [561, 1105, 1729, 2465, 2821, 6601, 3215031751])
def test_carmichael_and_strong_pseudoprimes_rejected(v):
    assert not is_probable_prime(v)


def test_known_primes():
    assert is_probable_prime(31)
    assert is_probable_prime(2**255 - 19)
    assert is_probable_prime(2**127 - 1)
    assert not is_probable_prime(2**255 - 21)
    assert not is_probable_prime((2**61 - 1) * (2**89 - 1))


def test_primality_precondition():
    with pytest.raises(ValueError):
        is_probable_prime(1)


def test_sample_uniform_edges(rng):
    assert sample_uniform(5, 5, rng) == 5
    assert all(sample_uniform(1, 30, rng) != 0 for _ in range(2000))
    with pytest.raises(ValueError):
        sample_uniform(3, 2, rng)


def test_sample_uniform_chi_square():
    rng = random.Random(2024)
    counts = [0] * 8
    for _ in range(10**6):
        counts[sample_uniform(0, 7, rng)] += 1
    assert chi_square(counts, 10**6 / 8) < CHI2_999[7]


def test_sample_uniform_non_power_of_two():
    rng = random.Random(7)
    counts = [0] * 6
    for _ in range(60000):
        counts[sample_uniform(1, 6, rng) - 1] += 1
    assert chi_square(counts, 10000) < CHI2_999[5]


@given(st.integers(min_value=1, max_value=2**255 - 20))
def test_inverse_property_large(a):
    x = P25519(a)
    assert mod_mul(x, mod_inv(x)).value == 1


@given(st.integers(min_value=1, max_value=10**6), st.integers(min_value=3, max_value=10**6))
def test_inverse_or_gcd(a, m):
    if m % 2 == 0:
        m += 1
    mod = Modulus(m, "prime" if is_probable_prime(m) else "composite")
    x = mod(a)
    if math.gcd(x.value, m) == 1:
        assert mod_mul(x, mod_inv(x)).value == 1
    else:
        with pytest.raises(NotInvertible) as exc:
            mod_inv(x)
        assert exc.value.gcd == math.gcd(x.value, m)


@given(st.integers(min_value=0, max_value=30), st.integers(min_value=0, max_value=64))
def test_pow_matches_iterated_mul(base, exp):
    x = P31(base)
    acc = P31(1)
    for _ in range(exp):
        acc = mod_mul(acc, x)
    assert mod_pow(x, exp) == acc
