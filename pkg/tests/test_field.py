import pytest
from hypothesis import given, strategies as st

from shiftvar.errors import DivisionByZero, EvenOrTooSmall, FieldMismatch, NotPrime
from shiftvar.field import (
    FieldElement,
    PrimeField,
    balanced,
    field_new,
    field_op,
    is_prime,
    next_odd_prime,
    norm,
)


def sieve(limit):
    flags = [True] * (limit + 1)
    flags[0] = flags[1] = False
    for i in range(2, int(limit**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = [False] * len(flags[i * i :: i])
    return flags


def test_field_new_examples():
    assert field_new(7).p == 7
    with pytest.raises(NotPrime):
        field_new(9)
    with pytest.raises(EvenOrTooSmall):
        field_new(2)
    for bad in (0, 1, -7, 4):
        with pytest.raises((EvenOrTooSmall, NotPrime)):
            field_new(bad)


def test_is_prime_matches_sieve():
    flags = sieve(20000)
    assert [n for n in range(20001) if is_prime(n)] == [n for n, f in enumerate(flags) if f]


def test_is_prime_large_known_values():
    assert is_prime(2**61 - 1)
    assert is_prime(2**89 - 1)
    assert not is_prime(2**61 + 1)
    # strong pseudoprime to bases 2..37 except a few; 3215031751 = 151*751*28351
    assert not is_prime(3215031751)
    assert not is_prime(3825123056546413051)
    assert not is_prime((2**31 - 1) * (2**61 - 1))


def test_next_odd_prime():
    assert next_odd_prime(16) == 17
    assert next_odd_prime(17) == 19
    assert next_odd_prime(0) == 3
    assert next_odd_prime(2) == 3


def test_field_op_examples():
    F = PrimeField(7)
    assert field_op("mul", F(3), F(5)) == F(1)
    assert field_op("inv", F(3)) == F(5)
    with pytest.raises(DivisionByZero):
        field_op("inv", F(0))
    with pytest.raises(DivisionByZero):
        field_op("div", F(2), F(0))
    assert field_op("pow", F(3), 6) == F(1)
    assert field_op("neg", F(3)) == F(4)
    assert field_op("sub", F(2), F(5)) == F(4)
    assert field_op("div", F(1), F(3)) == F(5)


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        PrimeField(7)(1) + PrimeField(11)(1)


def test_balanced_examples():
    F = PrimeField(7)
    assert balanced(F(6)) == -1
    assert balanced(F(3)) == 3
    assert balanced(F(0)) == 0
    assert norm((6, 3, 0), F) == 3


@given(st.sampled_from([3, 5, 7, 101, 1009, 2**61 - 1]), st.integers())
def test_inverse_and_balanced_roundtrip(p, v):
    F = PrimeField(p)
    a = F(v)
    assert 0 <= a.value < p
    b = balanced(a)
    assert -(p - 1) // 2 <= b <= (p - 1) // 2
    assert F(b) == a
    if a.value:
        assert a * a.inverse() == F(1)


def test_elements_are_immutable():
    a = PrimeField(5)(2)
    with pytest.raises(AttributeError):
        a.value = 3
    assert isinstance(a, FieldElement)
