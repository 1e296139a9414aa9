"""Prime fields F_p for odd primes p, with a balanced-representative view."""

from __future__ import annotations

import math
from functools import lru_cache

from .errors import DivisionByZero, EvenOrTooSmall, FieldMismatch, NotPrime

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
# The first 13 primes as Miller-Rabin bases decide primality for every n below
# this bound (Sorenson and Webster, 2015).
_DETERMINISTIC_BOUND = 3317044064679887385961981


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Deterministic primality test.

    Below ``3.3e24`` the fixed witness set is proven complete. Above it every
    base up to ``2 ln(n)^2`` is tried, which is deterministic under the
    generalized Riemann hypothesis.
    """
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < _DETERMINISTIC_BOUND:
        bases = _SMALL_PRIMES
    else:
        bases = range(2, min(n - 2, int(2 * math.log(n) ** 2)) + 1)
    return all(_strong_probable_prime(n, a, d, s) for a in bases)


def next_odd_prime(n: int) -> int:
    """Smallest odd prime strictly greater than ``n``."""
    c = max(n + 1, 3)
    while not is_prime(c):
        c += 1
    return c


class PrimeField:
    """The field of residues modulo an odd prime ``p``."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        p = int(p)
        if p < 3 or p % 2 == 0:
            raise EvenOrTooSmall(f"modulus must be an odd prime >= 3, got {p}")
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("PrimeField is immutable")

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(value, self)

    @property
    def half(self) -> int:
        return (self.p - 1) // 2

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def reduce(self, value: int) -> int:
        return value % self.p

    def balanced(self, value: int) -> int:
        v = value % self.p
        return v - self.p if v > self.half else v

    def inv(self, value: int) -> int:
        v = value % self.p
        if v == 0:
            raise DivisionByZero(f"0 has no inverse in F_{self.p}")
        return pow(v, -1, self.p)

    def elements(self):
        return range(self.p)


@lru_cache(maxsize=None)
def field(p: int) -> PrimeField:
    """Cached constructor; the spelled-out entry point is :class:`PrimeField`."""
    return PrimeField(p)


def field_new(p: int) -> PrimeField:
    return PrimeField(p)


class FieldElement:
    """An immutable residue class, stored canonically in ``[0, p-1]``."""

    __slots__ = ("value", "field")

    def __init__(self, value: int, field: PrimeField):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", int(value) % field.p)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"F_{self.field.p} vs F_{other.field.p}")
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def _new(self, value: int) -> "FieldElement":
        return FieldElement(value, self.field)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(o - self.value)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._new(self.value * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._new(self.value * self.field.inv(o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._new(o * self.field.inv(self.value))

    def __neg__(self):
        return self._new(-self.value)

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self._new(pow(self.field.inv(self.value), -exponent, self.field.p))
        return self._new(pow(self.value, exponent, self.field.p))

    def inverse(self) -> "FieldElement":
        return self._new(self.field.inv(self.value))

    def balanced(self) -> int:
        return self.field.balanced(self.value)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.field.p})"


def field_op(kind: str, a: FieldElement, b=None) -> FieldElement:
    """Dispatch one of ``add sub mul div neg inv pow`` on field elements."""
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        return a / b
    if kind == "neg":
        return -a
    if kind == "inv":
        return a.inverse()
    if kind == "pow":
        return a ** int(b)
    raise ValueError(f"unknown field operation {kind!r}")


def balanced(a: FieldElement) -> int:
    return a.balanced()


def norm(point, fld: PrimeField) -> int:
    """Infinity norm of a point using balanced representatives."""
    return max((abs(fld.balanced(c)) for c in point), default=0)
