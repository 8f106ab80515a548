"""The truncated divided-power superalgebra O(n,n;t).

A basis monomial x^(alpha) x^u is a bounded multi-index alpha (the divided-power
part, even) together with a strictly increasing word u over the odd variables
x_{n+1}, ..., x_{2n}. All signs are resolved when a monomial is built, so a
``Monomial`` is a canonical dictionary key.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
from typing import NamedTuple

from app.core.errors import IndexRangeError, ParameterError
from app.models.enums import Parity
from app.models.field import PrimeField

_MONOMIAL_RE = re.compile(r"^x\^\(([\d,\s]*)\)\*x\[([\d,\s]*)\]$")


@dataclass(frozen=True)
class AlgebraParams:
    """Parameters n, p, t of O(n,n;t) and everything derived from them.

    Indices follow the usual convention: Y0 = {1..n} are the even
    (divided-power) variables, Y1 = {n+1..2n} the odd (exterior) ones.
    """

    n: int
    t: tuple[int, ...]
    field: PrimeField

    def __post_init__(self) -> None:
        if self.n < 3:
            raise ParameterError("n must be at least 3")
        if len(self.t) != self.n:
            raise ParameterError(f"t must have exactly n={self.n} entries")
        if any(ti < 1 for ti in self.t):
            raise ParameterError("every t_i must be a positive integer")

    @classmethod
    def create(cls, n: int, p: int, t: Sequence[int]) -> AlgebraParams:
        return cls(n=n, t=tuple(t), field=PrimeField(p))

    @property
    def p(self) -> int:
        return self.field.p

    @cached_property
    def pi(self) -> tuple[int, ...]:
        """pi_i = p^t_i - 1, the exponent bound of the divided powers."""
        return tuple(self.p**ti - 1 for ti in self.t)

    @cached_property
    def xi(self) -> int:
        """Top Z-degree |pi| + n of O(n,n;t)."""
        return sum(self.pi) + self.n

    @property
    def sum_t(self) -> int:
        return sum(self.t)

    @property
    def y0(self) -> range:
        return range(1, self.n + 1)

    @property
    def y1(self) -> range:
        return range(self.n + 1, 2 * self.n + 1)

    @property
    def y(self) -> range:
        return range(1, 2 * self.n + 1)

    @property
    def dim_o(self) -> int:
        return 2**self.n * self.p**self.sum_t

    def check_index(self, r: int) -> None:
        if not 1 <= r <= 2 * self.n:
            raise IndexRangeError(f"index {r} outside Y = {{1..{2 * self.n}}}")

    def mu(self, r: int) -> int:
        """Parity of the superderivation d_r."""
        self.check_index(r)
        return 0 if r <= self.n else 1

    def prime(self, r: int) -> int:
        """Index swap i' between Y0 and Y1."""
        self.check_index(r)
        return r + self.n if r <= self.n else r - self.n

    def label(self) -> str:
        return f"n={self.n} p={self.p} t={','.join(map(str, self.t))}"

    # Per-instance memo tables for the monomial kernels below.
    @cached_property
    def _mul_cache(self) -> dict[tuple[Monomial, Monomial], tuple[int, Monomial] | None]:
        return {}

    @cached_property
    def _partial_cache(self) -> dict[tuple[int, Monomial], tuple[int, Monomial] | None]:
        return {}

    @cached_property
    def _basis_cache(self) -> dict[int, list[Monomial]]:
        return {}


class Monomial(NamedTuple):
    """Basis element x^(alpha) x^u of O(n,n;t)."""

    alpha: tuple[int, ...]
    u: tuple[int, ...]

    @property
    def parity(self) -> Parity:
        return Parity(len(self.u) & 1)

    @property
    def zdegree(self) -> int:
        return sum(self.alpha) + len(self.u)

    def sort_key(self) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
        """Degree-major, then lexicographic in (alpha, u)."""
        return (self.zdegree, self.alpha, self.u)

    def __str__(self) -> str:
        return f"x^({','.join(map(str, self.alpha))})*x[{','.join(map(str, self.u))}]"

    @classmethod
    def parse(cls, text: str) -> Monomial:
        match = _MONOMIAL_RE.match(text.strip())
        if not match:
            raise ValueError(f"not a monomial: {text!r}")
        alpha_text, u_text = match.groups()
        alpha = tuple(int(v) for v in alpha_text.split(",") if v.strip())
        u = tuple(int(v) for v in u_text.split(",") if v.strip())
        return cls(alpha, u)


def normalize_word(word: Iterable[int]) -> tuple[int, tuple[int, ...]]:
    """Sort an exterior word, returning (sign, sorted word); sign 0 on a repeat."""
    letters = list(word)
    if len(set(letters)) != len(letters):
        return 0, ()
    inversions = sum(1 for i, j in combinations(range(len(letters)), 2) if letters[i] > letters[j])
    return (-1 if inversions & 1 else 1), tuple(sorted(letters))


def monomial_product(
    params: AlgebraParams, a: Monomial, b: Monomial
) -> tuple[int, Monomial] | None:
    """Product of two basis monomials as (coefficient, monomial), None when it vanishes."""
    key = (a, b)
    cache = params._mul_cache
    if key in cache:
        return cache[key]
    result: tuple[int, Monomial] | None = None
    alpha = tuple(x + y for x, y in zip(a.alpha, b.alpha, strict=True))
    # Exponents beyond pi vanish.
    fits = all(s <= bound for s, bound in zip(alpha, params.pi, strict=True))
    if fits and not set(a.u) & set(b.u):
        coeff = 1
        for s, x in zip(alpha, a.alpha, strict=True):
            coeff = coeff * params.field.binom(s, x) % params.p
            if not coeff:
                break
        if coeff:
            swaps = sum(1 for x in a.u for y in b.u if x > y)
            if swaps & 1:
                coeff = params.p - coeff
            result = (coeff, Monomial(alpha, tuple(sorted(a.u + b.u))))
    cache[key] = result
    return result


def monomial_partial(params: AlgebraParams, r: int, m: Monomial) -> tuple[int, Monomial] | None:
    """Apply the superderivation d_r to a basis monomial."""
    key = (r, m)
    cache = params._partial_cache
    if key in cache:
        return cache[key]
    params.check_index(r)
    result: tuple[int, Monomial] | None = None
    if r <= params.n:
        if m.alpha[r - 1] > 0:
            alpha = list(m.alpha)
            alpha[r - 1] -= 1
            result = (1, Monomial(tuple(alpha), m.u))
    elif r in m.u:
        position = m.u.index(r)
        coeff = params.p - 1 if position & 1 else 1
        result = (coeff, Monomial(m.alpha, m.u[:position] + m.u[position + 1 :]))
    cache[key] = result
    return result


class SuperPoly:
    """Sparse F_p-linear combination of monomials; an element of O(n,n;t)."""

    __slots__ = ("params", "terms")

    def __init__(self, params: AlgebraParams, terms: Mapping[Monomial, int] | None = None) -> None:
        self.params = params
        p = params.p
        self.terms: dict[Monomial, int] = {}
        for mono, coeff in (terms or {}).items():
            value = coeff % p
            if value:
                self.terms[mono] = value

    @classmethod
    def _trusted(cls, params: AlgebraParams, terms: dict[Monomial, int]) -> SuperPoly:
        poly = cls.__new__(cls)
        poly.params = params
        poly.terms = terms
        return poly

    @classmethod
    def zero(cls, params: AlgebraParams) -> SuperPoly:
        return cls._trusted(params, {})

    @classmethod
    def one(cls, params: AlgebraParams) -> SuperPoly:
        return cls._trusted(params, {Monomial((0,) * params.n, ()): 1})

    @classmethod
    def monomial(
        cls,
        params: AlgebraParams,
        alpha: Sequence[int] | None = None,
        u: Iterable[int] = (),
        coeff: int = 1,
    ) -> SuperPoly:
        """coeff * x^(alpha) x^u, with the word u sorted and signed."""
        alpha_t = tuple(alpha) if alpha is not None else (0,) * params.n
        if len(alpha_t) != params.n or any(
            not 0 <= a <= bound for a, bound in zip(alpha_t, params.pi, strict=True)
        ):
            raise ParameterError(f"exponent {alpha_t} outside A(n;t)")
        letters = list(u)
        for letter in letters:
            if letter not in params.y1:
                raise IndexRangeError(f"exterior letter {letter} outside Y1")
        sign, word = normalize_word(letters)
        return cls(params, {Monomial(alpha_t, word): sign * coeff})

    @classmethod
    def var(cls, params: AlgebraParams, i: int) -> SuperPoly:
        """The generator x_i (x^(eps_i) for i in Y0)."""
        params.check_index(i)
        if i <= params.n:
            alpha = [0] * params.n
            alpha[i - 1] = 1
            return cls.monomial(params, alpha)
        return cls.monomial(params, None, (i,))

    def __iter__(self) -> Iterator[tuple[Monomial, int]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, SuperPoly):
            return NotImplemented
        return self.params == other.params and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: SuperPoly) -> SuperPoly:
        p = self.params.p
        terms = dict(self.terms)
        for mono, coeff in other.terms.items():
            value = (terms.get(mono, 0) + coeff) % p
            if value:
                terms[mono] = value
            else:
                terms.pop(mono, None)
        return SuperPoly._trusted(self.params, terms)

    def __neg__(self) -> SuperPoly:
        p = self.params.p
        return SuperPoly._trusted(self.params, {m: p - c for m, c in self.terms.items()})

    def __sub__(self, other: SuperPoly) -> SuperPoly:
        return self + (-other)

    def scale(self, c: int) -> SuperPoly:
        return SuperPoly(self.params, {m: coeff * c for m, coeff in self.terms.items()})

    def __mul__(self, other: SuperPoly) -> SuperPoly:
        return multiply(self, other)

    def parity(self) -> Parity | None:
        """Common parity of all terms; None for zero or mixed parity."""
        parities = {m.parity for m in self.terms}
        return parities.pop() if len(parities) == 1 else None

    def degree(self) -> int | None:
        """Common Z-degree of all terms; None for zero or mixed degree."""
        degrees = {m.zdegree for m in self.terms}
        return degrees.pop() if len(degrees) == 1 else None

    def partial(self, r: int) -> SuperPoly:
        return partial(r, self)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=Monomial.sort_key):
            coeff = self.terms[mono]
            parts.append(str(mono) if coeff == 1 else f"{coeff}*{mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"SuperPoly({self})"


def multiply(f: SuperPoly, g: SuperPoly) -> SuperPoly:
    """Bilinear product in O(n,n;t)."""
    params = f.params
    p = params.p
    terms: dict[Monomial, int] = {}
    for a, ca in f.terms.items():
        for b, cb in g.terms.items():
            product_ = monomial_product(params, a, b)
            if product_ is None:
                continue
            coeff, mono = product_
            value = (terms.get(mono, 0) + ca * cb * coeff) % p
            if value:
                terms[mono] = value
            else:
                terms.pop(mono, None)
    return SuperPoly._trusted(params, terms)


def partial(r: int, f: SuperPoly) -> SuperPoly:
    """The superderivation d_r applied to f."""
    params = f.params
    params.check_index(r)
    p = params.p
    terms: dict[Monomial, int] = {}
    for mono, coeff in f.terms.items():
        image = monomial_partial(params, r, mono)
        if image is None:
            continue
        sign, target = image
        value = (terms.get(target, 0) + sign * coeff) % p
        if value:
            terms[target] = value
        else:
            terms.pop(target, None)
    return SuperPoly._trusted(params, terms)


def _all_monomials(params: AlgebraParams) -> dict[int, list[Monomial]]:
    buckets: dict[int, list[Monomial]] = {}
    alphas = product(*(range(bound + 1) for bound in params.pi))
    words = [w for k in range(params.n + 1) for w in combinations(params.y1, k)]
    for alpha in alphas:
        for word in words:
            mono = Monomial(tuple(alpha), word)
            buckets.setdefault(mono.zdegree, []).append(mono)
    for bucket in buckets.values():
        bucket.sort(key=Monomial.sort_key)
    return buckets


def enumerate_basis(
    params: AlgebraParams,
    degree: int | None = None,
    parity: Parity | None = None,
) -> list[Monomial]:
    """Basis monomials of the given Z-degree and parity, in canonical order."""
    cache = params._basis_cache
    if not cache:
        cache.update(_all_monomials(params))
    if degree is None:
        monomials = [m for d in sorted(cache) for m in cache[d]]
    else:
        monomials = list(cache.get(degree, []))
    if parity is not None:
        monomials = [m for m in monomials if m.parity == parity]
    return monomials
