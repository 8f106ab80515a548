"""Prime field F_p and binomial coefficients modulo p."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache
from math import comb, isqrt

from app.core.errors import FieldError


def is_prime(p: int) -> bool:
    """Trial-division primality test; moduli here are small."""
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    return all(p % d for d in range(3, isqrt(p) + 1, 2))


@lru_cache(maxsize=65536)
def _lucas(a: int, b: int, p: int) -> int:
    """C(a, b) mod p digit by digit in base p."""
    result = 1
    while a or b:
        a_digit, b_digit = a % p, b % p
        if b_digit > a_digit:
            return 0
        result = result * comb(a_digit, b_digit) % p
        a //= p
        b //= p
    return result


@dataclass(frozen=True, slots=True)
class FpElement:
    """An element of F_p, always stored fully reduced."""

    value: int
    p: int

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.p:
            object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other: FpElement | int) -> int:
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise FieldError(f"cannot mix F_{self.p} and F_{other.p}")
            return other.value
        return other

    def __add__(self, other: FpElement | int) -> FpElement:
        return FpElement((self.value + self._coerce(other)) % self.p, self.p)

    __radd__ = __add__

    def __sub__(self, other: FpElement | int) -> FpElement:
        return FpElement((self.value - self._coerce(other)) % self.p, self.p)

    def __rsub__(self, other: int) -> FpElement:
        return FpElement((other - self.value) % self.p, self.p)

    def __mul__(self, other: FpElement | int) -> FpElement:
        return FpElement(self.value * self._coerce(other) % self.p, self.p)

    __rmul__ = __mul__

    def __neg__(self) -> FpElement:
        return FpElement(-self.value % self.p, self.p)

    def __truediv__(self, other: FpElement | int) -> FpElement:
        return self * FpElement(self._coerce(other), self.p).inverse()

    def inverse(self) -> FpElement:
        if self.value == 0:
            raise FieldError("no inverse")
        return FpElement(pow(self.value, -1, self.p), self.p)

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True, slots=True)
class PrimeField:
    """The scalar field F_p for a prime p > 3.

    The modulus is validated once here; everything downstream receives the
    field through an immutable parameter object.
    """

    p: int

    def __post_init__(self) -> None:
        if not is_prime(self.p) or self.p <= 3:
            raise FieldError("p must be an odd prime > 3")

    def __call__(self, value: int) -> FpElement:
        return FpElement(value % self.p, self.p)

    def add(self, a: FpElement, b: FpElement) -> FpElement:
        return a + b

    def mul(self, a: FpElement, b: FpElement) -> FpElement:
        return a * b

    def mul_inv(self, a: FpElement | int) -> FpElement:
        """Multiplicative inverse; zero has none."""
        value = int(a) % self.p
        if value == 0:
            raise FieldError("no inverse")
        return FpElement(pow(value, -1, self.p), self.p)

    def inv(self, value: int) -> int:
        """Inverse on raw residues, for the hot loops of linear algebra."""
        value %= self.p
        if value == 0:
            raise FieldError("no inverse")
        return pow(value, -1, self.p)

    def binom(self, a: int, b: int) -> int:
        """C(a, b) mod p, zero outside 0 <= b <= a."""
        if b < 0 or b > a:
            return 0
        return _lucas(a, b, self.p)

    def binom_mod_p(self, a: Sequence[int], b: Sequence[int]) -> FpElement:
        """Product of the coordinate binomials C(a_i, b_i) modulo p."""
        if len(a) != len(b) or any(bi < 0 or bi > ai for ai, bi in zip(a, b, strict=True)):
            raise FieldError("invalid binomial")
        result = 1
        for ai, bi in zip(a, b, strict=True):
            result = result * _lucas(ai, bi, self.p) % self.p
            if not result:
                break
        return FpElement(result, self.p)
