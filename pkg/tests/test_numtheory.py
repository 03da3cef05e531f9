from math import comb, factorial

import pytest
from hypothesis import given, strategies as st

from pgmagic.numtheory import (
    base_p_digits,
    carry_record,
    factorial_valuation,
    legendre_valuation_oracle,
    multinomial_valuation,
)


def valuation(n, p):
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def test_digits():
    assert base_p_digits(5, 2) == [1, 0, 1]
    assert base_p_digits(0, 3, width=4) == [0, 0, 0, 0]
    for p, t in [(2, 3), (3, 2), (5, 2)]:
        assert base_p_digits(p**t - 1, p, width=t) == [p - 1] * t
    with pytest.raises(ValueError):
        base_p_digits(9, 2, width=3)
    with pytest.raises(ValueError):
        base_p_digits(-1, 2)


@given(st.integers(0, 10**9), st.sampled_from([2, 3, 5, 7, 11]))
def test_digits_reconstruct(k, p):
    assert sum(d * p**i for i, d in enumerate(base_p_digits(k, p))) == k


def test_carry_examples():
    assert carry_record([2, 2], 2).total == 1
    assert carry_record([3, 3, 3], 3).total == 1
    assert carry_record([1, 1], 3).total == 0
    assert carry_record([], 2).total == 0


def test_valuation_examples():
    assert multinomial_valuation([2, 2], 2) == 1
    assert multinomial_valuation([3, 3, 3], 3) == 1
    assert factorial(9) // factorial(3) ** 3 == 1680
    assert all(multinomial_valuation([k, 0, 0, 0], p) == 0 for k in range(50) for p in (2, 3, 5))
    assert factorial_valuation(4, 2) == 3
    assert legendre_valuation_oracle([2, 2], 2) == 1
    assert legendre_valuation_oracle([5, 5], 5) == 0
    assert legendre_valuation_oracle([3, 3], 5) == 1


@given(st.lists(st.integers(0, 300), max_size=6), st.sampled_from([2, 3, 5, 7]))
def test_carry_record_is_consistent(parts, p):
    rec = carry_record(parts, p)
    assert rec.is_consistent()
    assert rec.total == legendre_valuation_oracle(parts, p)


@given(st.lists(st.integers(0, 40), min_size=1, max_size=5), st.sampled_from([2, 3, 5, 7]))
def test_valuation_of_exact_multinomial(parts, p):
    coeff = factorial(sum(parts))
    for k in parts:
        coeff //= factorial(k)
    assert multinomial_valuation(parts, p) == valuation(coeff, p)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_kummer_small_grid_exact(p):
    for n in range(60):
        for k in range(n + 1):
            assert carry_record([k, n - k], p).total == valuation(comb(n, k), p)


def test_no_carries_means_unit():
    # digits (1,0,1) + (0,1,0) + (1,0,0) in base 3 never reach 3 in a column
    parts = [10, 3, 1]
    assert carry_record(parts, 3).total == 0
    assert valuation(factorial(14) // (factorial(10) * factorial(3)), 3) == 0
